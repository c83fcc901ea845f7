//! Binary plan and state snapshots.
//!
//! Both formats are little-endian and end with the SHA-256 of every
//! preceding byte; loading fails unless the digest matches.
//!
//! Plan (`HWPLAN`, version 1):
//!
//! | field | type |
//! |---|---|
//! | magic | `b"HWPLAN\0\0"` |
//! | version | u32 |
//! | n | u32 |
//! | r_max, panel_width | f64, f64 |
//! | nodes_per_panel | u64 |
//! | lambda_max | f64 |
//! | n_lambda | u64 |
//! | c_norm | f64 |
//! | forward matrix | n_λ·n_r × f64, row-major |
//! | inverse matrix | n_r·n_λ × f64, row-major |
//! | sha256 | 32 bytes |
//!
//! State (`HWSTATE`, version 1): magic `b"HWSTATE\0"`, version, n, the same
//! five grid descriptors, a 32-byte run id (the config digest of the run
//! that wrote it, zero if none), time (f64), ũ and ũ_t (n_λ × f64 each),
//! sha256.

use anyhow::{bail, ensure, Context, Result};
use hyperwave_core::evolve::SpectralState;
use hyperwave_core::transform::{RadialGrid, SpectralField, SpectralGrid, TransformPlan};
use hyperwave_core::Dimension;
use sha2::{Digest, Sha256};
use std::path::Path;
use std::sync::Arc;

const PLAN_MAGIC: &[u8; 8] = b"HWPLAN\0\0";
const STATE_MAGIC: &[u8; 8] = b"HWSTATE\0";
const VERSION: u32 = 1;

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Default)]
struct Writer(Vec<u8>);

impl Writer {
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64s(&mut self, vs: &[f64]) {
        self.0.reserve(8 * vs.len());
        for &v in vs {
            self.f64(v);
        }
    }
    fn finish(mut self) -> Vec<u8> {
        let digest = Sha256::digest(&self.0);
        self.0.extend_from_slice(&digest);
        self.0
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    /// Verifies magic, version and checksum.
    fn open(bytes: &'a [u8], magic: &[u8; 8]) -> Result<Self> {
        ensure!(bytes.len() >= 8 + 4 + 32, "file too short");
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        ensure!(Sha256::digest(body).as_slice() == digest, "checksum mismatch");
        ensure!(&body[..8] == magic, "wrong file type");
        let mut r = Reader { buf: body, pos: 8 };
        let version = r.u32()?;
        ensure!(version == VERSION, "unsupported format version {version}");
        Ok(r)
    }
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).context("truncated file")?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into()?))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into()?))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let bytes = self.take(n.checked_mul(8).context("length overflow")?)?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
    fn done(&self) -> Result<()> {
        ensure!(self.pos == self.buf.len(), "{} trailing bytes", self.buf.len() - self.pos);
        Ok(())
    }
}

/// Grid parameters that rebuild both grids exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDescriptor {
    pub n: u32,
    pub r_max: f64,
    pub panel_width: f64,
    pub nodes_per_panel: usize,
    pub lambda_max: f64,
    pub n_lambda: usize,
}

impl GridDescriptor {
    pub fn of(plan: &TransformPlan) -> Self {
        let (r, s) = (plan.radial(), plan.spectral());
        GridDescriptor {
            n: plan.dim().n(),
            r_max: r.r_max(),
            panel_width: r.panel_width(),
            nodes_per_panel: r.nodes_per_panel(),
            lambda_max: s.lambda_max(),
            n_lambda: s.len(),
        }
    }

    fn write(&self, w: &mut Writer) {
        w.u32(self.n);
        w.f64(self.r_max);
        w.f64(self.panel_width);
        w.u64(self.nodes_per_panel as u64);
        w.f64(self.lambda_max);
        w.u64(self.n_lambda as u64);
    }

    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(GridDescriptor {
            n: r.u32()?,
            r_max: r.f64()?,
            panel_width: r.f64()?,
            nodes_per_panel: r.u64()? as usize,
            lambda_max: r.f64()?,
            n_lambda: r.u64()? as usize,
        })
    }

    fn grids(&self) -> Result<(Arc<RadialGrid>, Arc<SpectralGrid>)> {
        let dim = Dimension::new(self.n)?;
        let radial = RadialGrid::with_panels(dim, self.r_max, self.panel_width, self.nodes_per_panel)?;
        Ok((Arc::new(radial), Arc::new(SpectralGrid::new(dim, self.lambda_max, self.n_lambda)?)))
    }
}

pub fn encode_plan(plan: &TransformPlan) -> Vec<u8> {
    let mut w = Writer::default();
    w.0.extend_from_slice(PLAN_MAGIC);
    w.u32(VERSION);
    GridDescriptor::of(plan).write(&mut w);
    w.f64(plan.c_norm());
    w.f64s(plan.forward_matrix());
    w.f64s(plan.inverse_matrix());
    w.finish()
}

pub fn decode_plan(bytes: &[u8]) -> Result<TransformPlan> {
    let mut r = Reader::open(bytes, PLAN_MAGIC)?;
    let desc = GridDescriptor::read(&mut r)?;
    let c_norm = r.f64()?;
    let (radial, spectral) = desc.grids()?;
    let size = radial.len() * spectral.len();
    let forward = r.f64s(size)?;
    let inverse = r.f64s(size)?;
    r.done()?;
    Ok(TransformPlan::from_parts(radial, spectral, forward, inverse, c_norm)?)
}

pub fn save_plan(plan: &TransformPlan, path: &Path) -> Result<()> {
    std::fs::write(path, encode_plan(plan)).with_context(|| format!("writing plan {}", path.display()))
}

pub fn load_plan(path: &Path) -> Result<TransformPlan> {
    let bytes = std::fs::read(path).with_context(|| format!("reading plan {}", path.display()))?;
    decode_plan(&bytes).with_context(|| format!("loading plan {}", path.display()))
}

pub fn encode_state(plan: &TransformPlan, state: &SpectralState, run_id: [u8; 32]) -> Vec<u8> {
    let mut w = Writer::default();
    w.0.extend_from_slice(STATE_MAGIC);
    w.u32(VERSION);
    GridDescriptor::of(plan).write(&mut w);
    w.0.extend_from_slice(&run_id);
    w.f64(state.time);
    w.f64s(&state.u.values);
    w.f64s(&state.ut.values);
    w.finish()
}

/// A decoded state snapshot.
#[derive(Debug, Clone)]
pub struct StoredState {
    pub grids: GridDescriptor,
    pub run_id: [u8; 32],
    pub time: f64,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
}

impl StoredState {
    /// Attaches the coefficients to `plan`, which must have been built on
    /// the same grids.
    pub fn into_state(self, plan: &TransformPlan) -> Result<SpectralState> {
        let want = GridDescriptor::of(plan);
        if self.grids != want {
            bail!("snapshot grids {:?} do not match the plan {:?}", self.grids, want);
        }
        let grid = plan.spectral().clone();
        Ok(SpectralState {
            u: SpectralField::new(grid.clone(), self.u)?,
            ut: SpectralField::new(grid, self.ut)?,
            time: self.time,
        })
    }
}

pub fn decode_state(bytes: &[u8]) -> Result<StoredState> {
    let mut r = Reader::open(bytes, STATE_MAGIC)?;
    let grids = GridDescriptor::read(&mut r)?;
    let run_id = r.take(32)?.try_into()?;
    let time = r.f64()?;
    let u = r.f64s(grids.n_lambda)?;
    let ut = r.f64s(grids.n_lambda)?;
    r.done()?;
    Ok(StoredState { grids, run_id, time, u, ut })
}

pub fn save_state(plan: &TransformPlan, state: &SpectralState, run_id: [u8; 32], path: &Path) -> Result<()> {
    std::fs::write(path, encode_state(plan, state, run_id)).with_context(|| format!("writing state {}", path.display()))
}

pub fn load_state(path: &Path) -> Result<StoredState> {
    let bytes = std::fs::read(path).with_context(|| format!("reading state {}", path.display()))?;
    decode_state(&bytes).with_context(|| format!("loading state {}", path.display()))
}
