//! The scenario catalogue and its runner.

use crate::config::{Scenario, SimConfig};
use crate::data::initial_state;
use crate::output::{diagnostics_body, region_body, write_artifact};
use crate::persist::{load_plan, save_plan, save_state, GridDescriptor};
use anyhow::{Context, Result};
use hyperwave_core::ensemble::random_fields;
use hyperwave_core::evolve::*;
use hyperwave_core::functionals::*;
use hyperwave_core::strichartz::*;
use hyperwave_core::transform::{make_plan, RadialGrid, SpectralGrid, TransformPlan};
use hyperwave_core::{Dimension, Rational};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Scattered,
    BlowUp,
    Undecided,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Completed => "completed",
            RunStatus::Scattered => "scattered",
            RunStatus::BlowUp => "blowup",
            RunStatus::Undecided => "undecided",
        })
    }
}

/// One pass/fail line of a summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    /// The mathematical statement the check exercises.
    pub statement: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(label: impl Into<String>, statement: &'static str, measured: f64, threshold: f64) -> Self {
        Check { label: label.into(), statement, measured, threshold, passed: measured <= threshold }
    }

    fn at_least(label: impl Into<String>, statement: &'static str, measured: f64, threshold: f64) -> Self {
        Check { label: label.into(), statement, measured, threshold, passed: measured >= threshold }
    }

    fn finite(label: impl Into<String>, statement: &'static str, measured: f64) -> Self {
        Check { label: label.into(), statement, measured, threshold: f64::INFINITY, passed: measured.is_finite() }
    }

    fn holds(label: impl Into<String>, statement: &'static str, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Check { label: label.into(), statement, measured: v, threshold: 1.0, passed: ok }
    }

    pub fn line(&self) -> String {
        format!(
            "{}: {} (measured {:e}, threshold {:e}; {})",
            self.label,
            if self.passed { "pass" } else { "fail" },
            self.measured,
            self.threshold,
            self.statement
        )
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub status: RunStatus,
    pub final_record: Option<DiagnosticsRecord>,
    pub artifacts: Vec<PathBuf>,
    /// The config with every default filled in.
    pub config: SimConfig,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// Set when the run stopped on an error; the checks are then incomplete.
    pub error: Option<String>,
}

impl ScenarioResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }

    /// Deterministic summary text (no timings).
    pub fn summary(&self) -> String {
        let mut out = format!("scenario: {}\nstatus: {}\n", self.config.scenario, self.status);
        for c in &self.checks {
            writeln!(out, "{}", c.line()).unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note: {n}").unwrap();
        }
        if let Some(e) = &self.error {
            writeln!(out, "error: {e}").unwrap();
        }
        if let Some(r) = &self.final_record {
            let row: Vec<String> = DIAGNOSTIC_COLUMNS.iter().zip(r.row()).map(|(c, v)| format!("{c}={v:e}")).collect();
            writeln!(out, "final: {}", row.join(" ")).unwrap();
        }
        writeln!(out, "config:\n{}", self.config.to_json()).unwrap();
        out
    }
}

/// Digest of the normalised config; identifies a run in artifact headers.
pub fn run_id(cfg: &SimConfig) -> [u8; 32] {
    Sha256::digest(cfg.to_json().as_bytes()).into()
}

/// Builds the plan for `cfg`, or loads it from `plan_cache` when that file
/// exists and matches the requested grids.
pub fn obtain_plan(cfg: &SimConfig) -> Result<TransformPlan> {
    let dim = cfg.dimension();
    let g = &cfg.grid;
    if let Some(cache) = &cfg.plan_cache {
        let path = cfg.resolve(cache);
        if path.is_file() {
            let plan = load_plan(&path)?;
            let radial = RadialGrid::new(dim, g.r_max, g.n_r)?;
            let spectral = SpectralGrid::new(dim, g.lambda_max, g.n_lambda)?;
            let want = GridDescriptor {
                n: dim.n(),
                r_max: radial.r_max(),
                panel_width: radial.panel_width(),
                nodes_per_panel: radial.nodes_per_panel(),
                lambda_max: spectral.lambda_max(),
                n_lambda: spectral.len(),
            };
            anyhow::ensure!(
                GridDescriptor::of(&plan) == want,
                "cached plan {} was built on other grids",
                path.display()
            );
            return Ok(plan);
        }
        let plan = make_plan(dim, g.r_max, g.n_r, g.lambda_max, g.n_lambda)?;
        save_plan(&plan, &path)?;
        return Ok(plan);
    }
    Ok(make_plan(dim, g.r_max, g.n_r, g.lambda_max, g.n_lambda)?)
}

/// Runs `cfg` end to end. Failures are reported in the result, not raised.
pub fn run_scenario(cfg: &SimConfig) -> ScenarioResult {
    match obtain_plan(cfg) {
        Ok(plan) => run_scenario_with(cfg, &plan),
        Err(e) => failed(cfg, format!("{e:#}")),
    }
}

fn failed(cfg: &SimConfig, error: String) -> ScenarioResult {
    ScenarioResult {
        status: RunStatus::Undecided,
        final_record: None,
        artifacts: Vec::new(),
        config: cfg.clone(),
        checks: Vec::new(),
        notes: Vec::new(),
        error: Some(error),
    }
}

/// [`run_scenario`] on a plan that is already built.
pub fn run_scenario_with(cfg: &SimConfig, plan: &TransformPlan) -> ScenarioResult {
    let mut res = ScenarioResult {
        status: RunStatus::Completed,
        final_record: None,
        artifacts: Vec::new(),
        config: cfg.clone(),
        checks: Vec::new(),
        notes: Vec::new(),
        error: None,
    };
    if let Err(e) = execute(cfg, plan, &mut res) {
        res.error = Some(format!("{e:#}"));
    }
    let summary = cfg.output_dir.join("summary.txt");
    let sha = hex::encode(run_id(cfg));
    match write_artifact(&summary, "summary", &sha, &res.summary()) {
        Ok(()) => res.artifacts.push(summary),
        Err(e) => res.error = Some(format!("{e:#}")),
    }
    res
}

struct Run<'a> {
    cfg: &'a SimConfig,
    plan: &'a TransformPlan,
    sha: String,
}

fn execute(cfg: &SimConfig, plan: &TransformPlan, res: &mut ScenarioResult) -> Result<()> {
    anyhow::ensure!(plan.dim() == cfg.dimension(), "plan is for {} but the config asks for n = {}", plan.dim(), cfg.n);
    std::fs::create_dir_all(&cfg.output_dir).with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    let run = Run { cfg, plan, sha: hex::encode(run_id(cfg)) };
    match cfg.scenario {
        Scenario::LinearDispersal => linear_dispersal(&run, res),
        Scenario::DefocusRadialScatter => defocus_scatter(&run, res),
        Scenario::FocusSmallData => focus_small_data(&run, res),
        Scenario::FocusNegativeEnergy => focus_negative_energy(&run, res),
        Scenario::MorawetzBudget => morawetz_budget(&run, res),
        Scenario::StrichartzRegion => strichartz_region(&run, res),
        Scenario::PointwiseBound => pointwise_bound(&run, res),
    }
}

impl Run<'_> {
    fn evolve_config(&self) -> EvolveConfig {
        let t = &self.cfg.time;
        EvolveConfig {
            callback_stride: t.callback_stride,
            pullback_snapshots: t.pullback_snapshots,
            ..EvolveConfig::new(self.cfg.zeta(), t.h, t.t_end)
        }
    }

    /// Evolves from `start`, writing requested snapshots and the diagnostics CSV.
    fn evolve(&self, start: SpectralState, res: &mut ScenarioResult) -> Result<Trajectory> {
        let mut pending: Vec<f64> = self.cfg.snapshot_times.clone();
        pending.sort_by(f64::total_cmp);
        let mut written = Vec::new();
        let mut failures = Vec::new();
        let id = run_id(self.cfg);
        let mut saver = |snap: &Snapshot<'_>| {
            while pending.first().is_some_and(|&t| t <= snap.state.time + 1e-12) {
                pending.remove(0);
                let path = self.cfg.output_dir.join(format!("state_{:03}.hwstate", written.len()));
                match save_state(self.plan, snap.state, id, &path) {
                    Ok(()) => written.push(path),
                    Err(e) => failures.push(format!("{e:#}")),
                }
            }
        };
        let traj = evolve_spectral(self.plan, start, &self.evolve_config(), &mut [&mut saver])?;
        if let Some(e) = failures.into_iter().next() {
            anyhow::bail!(e);
        }
        res.artifacts.extend(written);
        let csv = self.cfg.output_dir.join("diagnostics.csv");
        write_artifact(&csv, "diagnostics", &self.sha, &diagnostics_body(&traj.records))?;
        res.artifacts.push(csv);
        res.final_record = Some(*traj.final_record());
        if traj.tail_warnings > 0 {
            res.notes.push(format!(
                "{} diagnostics points had |u| above the tail tolerance beyond 0.9·r_max",
                traj.tail_warnings
            ));
        }
        res.notes.push("time integrals are left-endpoint sums over the integrator steps".into());
        if let TrajectoryStatus::BlowUp { time, norm_name, norm } = traj.status {
            res.notes.push(format!("blow-up sentinel at t = {time}: {norm_name} = {norm:e}"));
        }
        Ok(traj)
    }

    /// Status plus the scattering check for a nonlinear run.
    fn classify(&self, traj: &Trajectory, res: &mut ScenarioResult) {
        let verdict = scattering_detect(self.plan, traj, EPS_SCAT);
        res.status = match verdict {
            ScatteringVerdict::Scattered(_) => RunStatus::Scattered,
            ScatteringVerdict::Undecided => RunStatus::Undecided,
            ScatteringVerdict::BlowUp => RunStatus::BlowUp,
        };
        let scale = 1.0 + traj.initial_energy.total.abs().sqrt();
        let last = pullback_increments(self.plan, traj).last().copied().unwrap_or(f64::INFINITY);
        res.checks.push(Check::at_most(
            "pullback increment < 1e−3·(1+√E)",
            "scattering: S_L(−t)u(t) converges in the energy space",
            last,
            EPS_SCAT * scale,
        ));
        res.checks.push(Check::holds(
            "classified as scattered",
            "scattering of the radial solution",
            res.status == RunStatus::Scattered,
        ));
    }
}

fn energy_norm_of(run: &Run<'_>, s: &SpectralState) -> f64 {
    s.energy_norm(run.plan)
}

fn linear_dispersal(run: &Run<'_>, res: &mut ScenarioResult) -> Result<()> {
    let start = initial_state(run.cfg, run.plan)?;
    let traj = run.evolve(start.clone(), res)?;
    res.checks.push(Check::at_most(
        "energy drift ≤ 1e−10",
        "conservation of the linear energy",
        traj.energy_drift(),
        1e-10,
    ));
    let span = traj.final_state.time - start.time;
    let back = traj.final_state.rotated(-span);
    let norm = energy_norm_of(run, &start).max(f64::MIN_POSITIVE);
    res.checks.push(Check::at_most(
        "time reversal ≤ 1e−8",
        "the linear flow is a unitary group",
        back.distance(&start, run.plan) / norm,
        1e-8,
    ));
    let increments = pullback_increments(run.plan, &traj);
    let worst = increments.iter().copied().fold(0.0, f64::max);
    res.checks.push(Check::at_most(
        "pullback constant ≤ 1e−8·‖data‖",
        "linear solutions are their own scattering states",
        worst,
        1e-8 * norm,
    ));
    res.status = if traj.blew_up() { RunStatus::BlowUp } else { RunStatus::Completed };
    Ok(())
}

fn defocus_scatter(run: &Run<'_>, res: &mut ScenarioResult) -> Result<()> {
    let start = initial_state(run.cfg, run.plan)?;
    let traj = run.evolve(start, res)?;
    let h = traj.h;
    res.checks.push(Check::at_most(
        "energy drift ≤ h²/4",
        "conservation of the nonlinear energy, up to the second-order scheme error",
        traj.energy_drift(),
        0.25 * h * h,
    ));
    let budget_check = morawetz_check(run.cfg.dimension(), &traj);
    res.checks.push(budget_check);
    run.classify(&traj, res);
    Ok(())
}

fn morawetz_check(dim: Dimension, traj: &Trajectory) -> Check {
    let m = &traj.morawetz;
    let mut c = Check::at_most(
        format!("morawetz_acc ≤ {}·E", dim.n()),
        "Morawetz inequality: ∫∫ρ coth r |u|^{p_c+1} dμ dt ≤ n·E",
        m.value,
        m.budget * (1.0 + 1e-3),
    );
    c.passed &= !traj.blew_up();
    c
}

fn focus_small_data(run: &Run<'_>, res: &mut ScenarioResult) -> Result<()> {
    let start = initial_state(run.cfg, run.plan)?;
    let norm = energy_norm_of(run, &start);
    let traj = run.evolve(start, res)?;
    run.classify(&traj, res);
    let ratio = traj.y_norm.y_norm() / norm;
    res.checks.push(Check::at_most(
        "y_acc ≤ ‖(u₀,u₁)‖",
        "small-data global bound ‖u‖_Y ≲ ‖(u₀,u₁)‖_{H^{0,1}×L²}",
        ratio,
        1.0,
    ));
    res.notes.push(format!("Y/‖data‖ = {ratio:e} with ‖data‖ = {norm:e}"));
    Ok(())
}

fn focus_negative_energy(run: &Run<'_>, res: &mut ScenarioResult) -> Result<()> {
    let mut start = initial_state(run.cfg, run.plan)?;
    let mut scale = 1.0;
    let energy_of = |s: &SpectralState| -> Result<f64> {
        let pair = s.to_radial(run.plan)?;
        Ok(energy(run.plan, &pair, Zeta::Focusing)?.total)
    };
    let mut e = energy_of(&start)?;
    for _ in 0..16 {
        if e < 0.0 {
            break;
        }
        start.u = start.u.scaled(2.0);
        start.ut = start.ut.scaled(2.0);
        scale *= 2.0;
        e = energy_of(&start)?;
    }
    res.notes.push(format!("data scaled by {scale} to reach E = {e:e}"));
    res.checks.push(Check::at_most("initial energy < 0", "focusing data may carry negative energy", e, 0.0));
    if e >= 0.0 {
        res.checks.last_mut().unwrap().passed = false;
        return Ok(());
    }
    let traj = run.evolve(start, res)?;
    let verdict = scattering_detect(run.plan, &traj, EPS_SCAT);
    res.status = match verdict {
        ScatteringVerdict::Scattered(_) => RunStatus::Scattered,
        ScatteringVerdict::Undecided => RunStatus::Undecided,
        ScatteringVerdict::BlowUp => RunStatus::BlowUp,
    };
    res.notes.push(format!("outcome: {}", res.status));
    Ok(())
}

fn morawetz_budget(run: &Run<'_>, res: &mut ScenarioResult) -> Result<()> {
    let start = initial_state(run.cfg, run.plan)?;
    let traj = run.evolve(start, res)?;
    res.checks.push(morawetz_check(run.cfg.dimension(), &traj));
    res.checks.push(Check::holds(
        "morawetz_acc nondecreasing",
        "the Morawetz integrand is nonnegative",
        traj.morawetz.is_nondecreasing(),
    ));
    res.notes.push(format!("auxiliary weight integral: {:e}", traj.morawetz.aux_value));
    res.status = if traj.blew_up() { RunStatus::BlowUp } else { RunStatus::Completed };
    Ok(())
}

/// Number of points of the 128×128 lattice (i/256, j/257) on which the
/// rational classification disagrees with integer cross-multiplication.
pub fn lattice_mismatches(dim: Dimension) -> usize {
    let n = dim.n() as i64;
    let mut bad = 0;
    for i in 1..=128i64 {
        for j in 1..=128i64 {
            let pair = ExponentPair::new(Rational::new(i, 256), Rational::new(j, 257)).expect("inside the square");
            let rep = is_admissible_energy(&pair, dim);
            let classical = 4 * 257 * i + 2 * (n - 1) * 256 * j >= (n - 1) * 256 * 257;
            let energy = i < 128 && 2 * 257 * i + 2 * n * 256 * j >= (n - 2) * 256 * 257;
            if rep.classical != classical || rep.energy != energy {
                bad += 1;
            }
        }
    }
    bad
}

fn strichartz_region(run: &Run<'_>, res: &mut ScenarioResult) -> Result<()> {
    let dim = run.cfg.dimension();
    let csv = run.cfg.output_dir.join("region.csv");
    write_artifact(&csv, "region", &run.sha, &region_body(dim, 64)?)?;
    res.artifacts.push(csv);
    res.checks.push(Check::at_most(
        "lattice classification mismatches = 0",
        "admissible regions 2/p + (n−1)/q ≥ (n−1)/2 and 1/p + n/q ≥ n/2 − 1",
        lattice_mismatches(dim) as f64,
        0.0,
    ));
    let (lhs, rhs) = interpolation_exponent_identity(dim);
    res.checks.push(Check::holds(
        format!("2n/(n−2) + 1/(ρ−½) = 2(n+1)/(n−2) = {rhs}"),
        "interpolation exponent identity",
        lhs == rhs,
    ));
    let y = y_pair(dim);
    let rep = is_admissible_energy(&y, dim);
    res.checks.push(Check::holds("Y pair energy-admissible", "Strichartz bound for the Y-norm pair", rep.energy));
    let probe = empirical_ratio(run.plan, &y, 10, run.cfg.time.t_end, run.cfg.seed)?;
    res.checks.push(Check::finite(
        "empirical Y-pair ratio finite",
        "‖u‖_{L^pL^q} ≤ C‖(u₀,u₁)‖_{H^{0,1}×L²} for the linear flow",
        probe.ratio,
    ));
    res.checks.push(Check::at_most(
        "stride sensitivity ≤ 0.05",
        "time discretisation of the L^p integral",
        probe.stride_sensitivity(),
        0.05,
    ));
    res.notes.push(format!("ensemble seed {}, T = {}", run.cfg.seed, run.cfg.time.t_end));
    Ok(())
}

fn pointwise_bound(run: &Run<'_>, res: &mut ScenarioResult) -> Result<()> {
    let dim = run.cfg.dimension();
    let mut body = String::from("kind,parameter,ratio,h01_norm\n");
    let mut worst = 0.0f64;
    for (k, f) in random_fields(run.cfg.seed, 50, run.plan.radial()).iter().enumerate() {
        let ratio = pointwise_bound_ratio(f)?;
        worst = worst.max(ratio);
        writeln!(body, "ensemble,{k},{ratio:e},{:e}", h01_gradient_form_sq(f).sqrt()).unwrap();
    }
    let fine = Arc::new(RadialGrid::with_panels(dim, 20.0, 0.025, 16)?);
    let (mut lo, mut hi, mut norm_max) = (f64::INFINITY, 0.0f64, 0.0f64);
    for rb in [0.2, 1.0, 2.0, 5.0, 10.0] {
        let f = extremal_family(rb, &fine)?;
        let ratio = pointwise_bound_ratio(&f)?;
        let norm = h01_gradient_form_sq(&f).sqrt();
        worst = worst.max(ratio);
        norm_max = norm_max.max(norm);
        let s = saturation_ratio(rb, dim);
        lo = lo.min(s);
        hi = hi.max(s);
        writeln!(body, "f_R,{rb},{ratio:e},{norm:e}").unwrap();
    }
    let csv = run.cfg.output_dir.join("pointwise.csv");
    write_artifact(&csv, "pointwise", &run.sha, &body)?;
    res.artifacts.push(csv);
    let statement = "radial pointwise bound |f(r)| ≲ r^{1/2}(sinh r)^{−ρ}‖f‖_{H^{0,1}}";
    res.checks.push(Check::finite("pointwise ratio finite", statement, worst));
    res.checks.push(Check::finite("‖f_R‖_{H^{0,1}} finite", "the extremal family is bounded in H^{0,1}", norm_max));
    let sat = "f_R(R) ≃ R^{1/2}(sinh R)^{−ρ}";
    res.checks.push(Check::at_least("f_R saturation ≥ 0.2", sat, lo, 0.2));
    res.checks.push(Check::at_most("f_R saturation ≤ 2", sat, hi, 2.0));
    Ok(())
}

/// Output directory of the sweep member read from `config_path`.
pub fn sweep_output_dir(root: &Path, config_path: &Path) -> PathBuf {
    root.join(config_path.file_stem().unwrap_or_default())
}
