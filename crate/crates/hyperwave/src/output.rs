//! Text artifacts: a `#` comment header followed by a body.
//!
//! ```text
//! # hyperwave diagnostics
//! # schema_version: 1
//! # run_sha256: <digest of the normalised config>
//! # body_sha256: <digest of everything after the header>
//! # generated_unix: <seconds>
//! t,energy_total,...
//! ```
//!
//! Only the `generated_unix` line differs between two runs of the same
//! config.

use crate::persist::sha256_hex;
use anyhow::{ensure, Context, Result};
use hyperwave_core::functionals::{DiagnosticsRecord, DIAGNOSTIC_COLUMNS};
use hyperwave_core::strichartz::region_boundary;
use hyperwave_core::{Dimension, Rational};
use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: u32 = 1;

/// Header plus body, ready to write.
pub fn render(kind: &str, run_sha: &str, body: &str) -> String {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!(
        "# hyperwave {kind}\n# schema_version: {SCHEMA_VERSION}\n# run_sha256: {run_sha}\n# body_sha256: {}\n# generated_unix: {now}\n{body}",
        sha256_hex(body.as_bytes())
    )
}

pub fn write_artifact(path: &Path, kind: &str, run_sha: &str, body: &str) -> Result<()> {
    std::fs::write(path, render(kind, run_sha, body)).with_context(|| format!("writing {}", path.display()))
}

/// The text after the header lines.
pub fn body(text: &str) -> &str {
    let mut rest = text;
    while rest.starts_with('#') {
        rest = rest.find('\n').map_or("", |i| &rest[i + 1..]);
    }
    rest
}

/// Value of a `# key: value` header line.
pub fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix(": "))
}

/// Checks the schema version and body checksum of an artifact.
pub fn verify(text: &str) -> Result<()> {
    let version = header_value(text, "schema_version").context("missing schema_version")?;
    ensure!(version == SCHEMA_VERSION.to_string(), "schema version {version}");
    let want = header_value(text, "body_sha256").context("missing body_sha256")?;
    ensure!(sha256_hex(body(text).as_bytes()) == want, "body checksum mismatch");
    Ok(())
}

/// Diagnostics rows in the fixed column order.
pub fn diagnostics_body(records: &[DiagnosticsRecord]) -> String {
    let mut out = DIAGNOSTIC_COLUMNS.join(",");
    out.push('\n');
    for rec in records {
        let row: Vec<String> = rec.row().iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn float(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Boundary polylines of both admissible regions, exact and as floats.
pub fn region_body(dim: Dimension, resolution: usize) -> Result<String> {
    let mut out = String::from("region,segment_id,inv_p,inv_q,inv_p_float,inv_q_float\n");
    for seg in region_boundary(dim, resolution)? {
        for (p, q) in &seg.points {
            writeln!(out, "{},{},{p},{q},{:e},{:e}", seg.region.name(), seg.segment_id, float(*p), float(*q)).unwrap();
        }
    }
    Ok(out)
}
