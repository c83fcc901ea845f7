//! Exact linear flow, the Strang splitting integrator and scattering
//! detection.
//!
//! In spectral variables the shifted wave operator is diagonal: each mode
//! obeys ũ'' = −λ²ũ + F̃. States are therefore carried as spectral
//! coefficients (ũ, ũ_t); a step rotates every mode by h/2, applies the
//! nonlinear kick ũ_t += h·Fwd(F(Inv ũ)) and rotates again.

use crate::functionals::{
    energy_parts, lq_norm_values, lq_power_values, morawetz_aux_rate_values, morawetz_rate_values, DiagnosticsRecord,
    EnergyBreakdown, MorawetzAccumulator, YNormAccumulator,
};
use crate::transform::{RadialField, SpectralField, TransformPlan};
use crate::{Dimension, Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_traits::Float;

/// Default scattering threshold ε_scat.
pub const EPS_SCAT: f64 = 1e-3;
/// Blow-up sentinel factor on ‖u‖_{L^{p_c+1}}.
pub const BLOWUP_FACTOR: f64 = 1e3;
/// Pullback differences below NOISE_FLOOR·(1 + √𝓔) count as converged.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Sign of the nonlinearity ζ|u|^{p_c−1}u.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Zeta {
    /// ζ = +1
    Focusing,
    /// ζ = −1
    Defocusing,
    /// ζ = 0, linear flow only
    Linear,
}

impl Zeta {
    pub fn value(self) -> f64 {
        match self {
            Zeta::Focusing => 1.0,
            Zeta::Defocusing => -1.0,
            Zeta::Linear => 0.0,
        }
    }

    pub fn as_i64(self) -> i64 {
        self.value() as i64
    }

    /// The opposite sign; `Linear` stays linear.
    pub fn flipped(self) -> Zeta {
        match self {
            Zeta::Focusing => Zeta::Defocusing,
            Zeta::Defocusing => Zeta::Focusing,
            Zeta::Linear => Zeta::Linear,
        }
    }
}

impl TryFrom<i64> for Zeta {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Zeta::Focusing),
            -1 => Ok(Zeta::Defocusing),
            0 => Ok(Zeta::Linear),
            _ => Err(Error::domain(format!("zeta must be -1, 0 or 1 (got {v})"))),
        }
    }
}

impl fmt::Display for Zeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i64())
    }
}

/// (u, ∂_t u) at a fixed time, sampled on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub u: RadialField,
    pub ut: RadialField,
    pub time: f64,
}

impl StatePair {
    pub fn new(u: RadialField, ut: RadialField, time: f64) -> Result<Self> {
        if !(u.grid == ut.grid) {
            return Err(Error::GridMismatch("u and u_t live on different radial grids".into()));
        }
        Ok(StatePair { u, ut, time })
    }
}

/// Spectral coefficients (ũ, ũ_t) at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub u: SpectralField,
    pub ut: SpectralField,
    pub time: f64,
}

impl SpectralState {
    pub fn from_radial(plan: &TransformPlan, s: &StatePair) -> Result<Self> {
        Ok(SpectralState { u: plan.forward(&s.u)?, ut: plan.forward(&s.ut)?, time: s.time })
    }

    pub fn to_radial(&self, plan: &TransformPlan) -> Result<StatePair> {
        Ok(StatePair { u: plan.inverse(&self.u)?, ut: plan.inverse(&self.ut)?, time: self.time })
    }

    /// Applies the exact linear flow for time `t` in place.
    pub fn rotate(&mut self, t: f64) {
        let grid = self.u.grid.clone();
        let Rotation { cos, sin_over, neg_sin_times } = Rotation::new(grid.nodes(), t);
        for j in 0..grid.len() {
            let (a, b) = (self.u.values[j], self.ut.values[j]);
            self.u.values[j] = cos[j] * a + sin_over[j] * b;
            self.ut.values[j] = neg_sin_times[j] * a + cos[j] * b;
        }
        self.time += t;
    }

    pub fn rotated(&self, t: f64) -> Self {
        let mut s = self.clone();
        s.rotate(t);
        s
    }

    /// ‖·‖_{H^{0,1}×L²} computed spectrally.
    pub fn energy_norm(&self, plan: &TransformPlan) -> f64 {
        (plan.spectral_quadratic(&self.u.values, |l| l * l) + plan.spectral_quadratic(&self.ut.values, |_| 1.0)).sqrt()
    }

    /// ‖self − other‖_{H^{0,1}×L²}.
    pub fn distance(&self, other: &SpectralState, plan: &TransformPlan) -> f64 {
        let du: Vec<f64> = self.u.values.iter().zip(&other.u.values).map(|(a, b)| a - b).collect();
        let dut: Vec<f64> = self.ut.values.iter().zip(&other.ut.values).map(|(a, b)| a - b).collect();
        (plan.spectral_quadratic(&du, |l| l * l) + plan.spectral_quadratic(&dut, |_| 1.0)).sqrt()
    }

    /// Linear energy ½‖u‖²_{H^{0,1}} + ½‖u_t‖²_{L²}.
    pub fn linear_energy(&self, plan: &TransformPlan) -> f64 {
        0.5 * self.energy_norm(plan).powi(2)
    }
}

struct Rotation {
    cos: Vec<f64>,
    sin_over: Vec<f64>,
    neg_sin_times: Vec<f64>,
}

impl Rotation {
    fn new(lambdas: &[f64], t: f64) -> Self {
        let n = lambdas.len();
        let mut r = Rotation { cos: vec![0.0; n], sin_over: vec![0.0; n], neg_sin_times: vec![0.0; n] };
        for (j, &l) in lambdas.iter().enumerate() {
            let (s, c) = (t * l).sin_cos();
            r.cos[j] = c;
            r.sin_over[j] = s / l;
            r.neg_sin_times[j] = -l * s;
        }
        r
    }

    fn apply(&self, a: &[f64], b: &[f64], out_a: &mut [f64], out_b: &mut [f64]) {
        for j in 0..a.len() {
            out_a[j] = self.cos[j] * a[j] + self.sin_over[j] * b[j];
            out_b[j] = self.neg_sin_times[j] * a[j] + self.cos[j] * b[j];
        }
    }
}

/// S_L(t)(u, u_t), the exact linear flow through the spectral rotation.
pub fn linear_propagate(plan: &TransformPlan, state: &StatePair, t: f64) -> Result<StatePair> {
    let mut s = SpectralState::from_radial(plan, state)?;
    s.rotate(t);
    s.to_radial(plan)
}

/// S_L(−t)(u(t), u_t(t)); the result sits at time 0.
pub fn pullback(plan: &TransformPlan, state: &StatePair) -> Result<StatePair> {
    let mut s = linear_propagate(plan, state, -state.time)?;
    s.time = 0.0;
    Ok(s)
}

/// ζ|u|^{p_c−1}u at a single point, with F(0) = 0.
#[inline]
pub fn nonlinearity_value(u: f64, zeta: Zeta, dim: Dimension) -> f64 {
    let z = zeta.value();
    if z == 0.0 || u == 0.0 {
        return 0.0;
    }
    match dim.n() {
        3 => {
            let u2 = u * u;
            z * u2 * u2 * u
        }
        4 => z * u * u * u,
        _ => z * ((dim.p_c_f64() - 1.0) * u.abs().ln()).exp() * u,
    }
}

/// Pointwise ζ|u|^{p_c−1}u.
pub fn nonlinearity(u: &RadialField, zeta: Zeta, dim: Dimension) -> RadialField {
    RadialField { grid: u.grid.clone(), values: u.values.iter().map(|&v| nonlinearity_value(v, zeta, dim)).collect() }
}

/// Integrator state with precomputed half-step rotations and scratch space.
pub struct Stepper<'a> {
    plan: &'a TransformPlan,
    zeta: Zeta,
    h: f64,
    half: Rotation,
    full: Rotation,
    a_mid: Vec<f64>,
    b_mid: Vec<f64>,
    u_mid: Vec<f64>,
    force: Vec<f64>,
    kick: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(plan: &'a TransformPlan, h: f64, zeta: Zeta) -> Self {
        let nl = plan.spectral().len();
        let nr = plan.radial().len();
        let lambdas = plan.spectral().nodes();
        Stepper {
            plan,
            zeta,
            h,
            half: Rotation::new(lambdas, 0.5 * h),
            full: Rotation::new(lambdas, h),
            a_mid: vec![0.0; nl],
            b_mid: vec![0.0; nl],
            u_mid: vec![0.0; nr],
            force: vec![0.0; nr],
            kick: vec![0.0; nl],
        }
    }

    /// Advances `state` by one step and writes u at the starting time into
    /// `u_start`. Returns false if a non-finite value appeared.
    pub fn advance(&mut self, state: &mut SpectralState, u_start: &mut [f64]) -> bool {
        let a = &mut state.u.values;
        let b = &mut state.ut.values;
        if self.zeta == Zeta::Linear {
            self.plan.inverse_values(a, u_start);
            self.full.apply(a, b, &mut self.a_mid, &mut self.b_mid);
            a.copy_from_slice(&self.a_mid);
            b.copy_from_slice(&self.b_mid);
        } else {
            self.half.apply(a, b, &mut self.a_mid, &mut self.b_mid);
            self.plan.inverse_values2(a, &self.a_mid, u_start, &mut self.u_mid);
            let dim = self.plan.dim();
            for (f, &u) in self.force.iter_mut().zip(&self.u_mid) {
                *f = nonlinearity_value(u, self.zeta, dim);
            }
            self.plan.forward_values(&self.force, &mut self.kick);
            for (bm, k) in self.b_mid.iter_mut().zip(&self.kick) {
                *bm += self.h * k;
            }
            self.half.apply(&self.a_mid, &self.b_mid, a, b);
        }
        state.time += self.h;
        a.iter().chain(b.iter()).all(|v| v.is_finite())
    }
}

/// One splitting step on a radial state.
pub fn step(plan: &TransformPlan, state: &StatePair, h: f64, zeta: Zeta) -> Result<StatePair> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("time step must be positive (got {h})")));
    }
    let mut s = SpectralState::from_radial(plan, state)?;
    let mut stepper = Stepper::new(plan, h, zeta);
    let mut scratch = vec![0.0; plan.radial().len()];
    let t0 = s.time;
    if !stepper.advance(&mut s, &mut scratch) {
        return Err(Error::BlowUp { time: t0 + h, norm_name: "non-finite state", norm: f64::NAN });
    }
    s.time = t0 + h;
    let out = s.to_radial(plan)?;
    if out.u.values.iter().chain(&out.ut.values).any(|v| !v.is_finite()) {
        return Err(Error::BlowUp { time: t0 + h, norm_name: "non-finite state", norm: f64::NAN });
    }
    Ok(out)
}

/// Integration parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub zeta: Zeta,
    /// Nominal time step; shortened slightly so that t_end is hit exactly.
    pub h: f64,
    pub t_end: f64,
    /// Diagnostics rows and observer calls every this many steps.
    pub callback_stride: usize,
    /// Number of pullback snapshots kept, evenly spread over the final
    /// quarter of the run.
    pub pullback_snapshots: usize,
    /// Soft limit on |u| beyond 0.9·r_max.
    pub tail_tolerance: f64,
}

impl EvolveConfig {
    pub fn new(zeta: Zeta, h: f64, t_end: f64) -> Self {
        EvolveConfig { zeta, h, t_end, callback_stride: 10, pullback_snapshots: 8, tail_tolerance: 1e-8 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h <= 0.1) {
            return Err(Error::Usage(format!("time step h must lie in (0, 0.1] (got {})", self.h)));
        }
        if !self.t_end.is_finite() {
            return Err(Error::Usage("t_end must be finite".into()));
        }
        if self.callback_stride == 0 {
            return Err(Error::Usage("callback_stride must be positive".into()));
        }
        Ok(())
    }
}

/// How a trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryStatus {
    Completed,
    BlowUp { time: f64, norm_name: &'static str, norm: f64 },
}

/// Everything an observer sees at a diagnostics point.
pub struct Snapshot<'s> {
    pub state: &'s SpectralState,
    /// u at `state.time` on the radial grid.
    pub u: &'s [f64],
    pub record: &'s DiagnosticsRecord,
}

/// Callback invoked every `callback_stride` steps and at the final time.
pub trait Observer {
    fn observe(&mut self, snapshot: &Snapshot<'_>);
}

impl<F: FnMut(&Snapshot<'_>)> Observer for F {
    fn observe(&mut self, snapshot: &Snapshot<'_>) {
        self(snapshot)
    }
}

/// Result of [`evolve`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub zeta: Zeta,
    /// Step actually used.
    pub h: f64,
    pub records: Vec<DiagnosticsRecord>,
    /// Pullbacks S_L(−t)(u(t), u_t(t)) from the final quarter, time field
    /// holding the t they were taken at.
    pub pullbacks: Vec<SpectralState>,
    pub status: TrajectoryStatus,
    pub initial_energy: EnergyBreakdown,
    pub morawetz: MorawetzAccumulator,
    pub y_norm: YNormAccumulator,
    /// Σ_k ‖F(u(t_k))‖_{L²}·h, the discrete L¹L² norm of the nonlinearity.
    pub force_l1l2: f64,
    /// Diagnostics points where |u| beyond 0.9·r_max exceeded the tail tolerance.
    pub tail_warnings: usize,
    pub final_state: SpectralState,
}

impl Trajectory {
    pub fn final_record(&self) -> &DiagnosticsRecord {
        self.records.last().expect("trajectories always hold the initial record")
    }

    /// max_t |𝓔(t) − 𝓔(0)| / max(1, |𝓔(0)|) over the recorded rows.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.initial_energy.total;
        let scale = e0.abs().max(1.0);
        self.records.iter().map(|r| (r.energy.total - e0).abs() / scale).fold(0.0, f64::max)
    }

    pub fn blew_up(&self) -> bool {
        matches!(self.status, TrajectoryStatus::BlowUp { .. })
    }
}

fn pullback_of(state: &SpectralState) -> SpectralState {
    state.rotated(-state.time)
}

struct Diagnostics<'p> {
    plan: &'p TransformPlan,
    zeta: Zeta,
    p1: f64,
}

impl Diagnostics<'_> {
    fn record(
        &self,
        state: &SpectralState,
        u: &[f64],
        mor: &MorawetzAccumulator,
        y: &YNormAccumulator,
        pullback_dist: f64,
    ) -> DiagnosticsRecord {
        let grid = self.plan.radial();
        DiagnosticsRecord {
            t: state.time,
            energy: energy_parts(self.plan, &state.u.values, &state.ut.values, u, self.zeta),
            l2: lq_norm_values(grid, u, 2.0),
            lpc1: lq_norm_values(grid, u, self.p1),
            morawetz_acc: mor.value,
            morawetz_budget: mor.budget,
            y_acc: y.y_norm(),
            pullback_dist,
        }
    }
}

/// Integrates from `state.time` to `cfg.t_end`.
///
/// Morawetz, Y-norm and L¹L² integrals are left-endpoint sums over every
/// step. Diagnostics rows are written every `callback_stride` steps and at
/// the end. Blow-up ends the run early with [`TrajectoryStatus::BlowUp`].
pub fn evolve(
    plan: &TransformPlan,
    state: &StatePair,
    cfg: &EvolveConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<Trajectory> {
    cfg.validate()?;
    let s0 = SpectralState::from_radial(plan, state)?;
    evolve_spectral(plan, s0, cfg, observers)
}

/// [`evolve`] starting from spectral coefficients.
pub fn evolve_spectral(
    plan: &TransformPlan,
    mut s: SpectralState,
    cfg: &EvolveConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<Trajectory> {
    cfg.validate()?;
    let dim = plan.dim();
    let grid = plan.radial().clone();
    let t0 = s.time;
    let span = cfg.t_end - t0;
    if span < 0.0 {
        return Err(Error::Usage(format!("t_end = {} lies before the start time {t0}", cfg.t_end)));
    }
    let steps = if span == 0.0 { 0 } else { (span / cfg.h - 1e-9).ceil().max(1.0) as usize };
    let h = if steps == 0 { cfg.h } else { span / steps as f64 };

    let diag = Diagnostics { plan, zeta: cfg.zeta, p1: dim.p_c_f64() + 1.0 };
    let mut u = vec![0.0; grid.len()];
    plan.inverse_values(&s.u.values, &mut u);
    let initial_energy = energy_parts(plan, &s.u.values, &s.ut.values, &u, cfg.zeta);
    let mut morawetz = MorawetzAccumulator::new(dim, initial_energy.total);
    let mut y_norm = YNormAccumulator::new(dim);
    let lpc1_0 = lq_norm_values(&grid, &u, diag.p1);
    let sentinel = BLOWUP_FACTOR * (1.0 + lpc1_0);
    let tail_limit = cfg.tail_tolerance * (1.0 + u.iter().fold(0.0f64, |m, v| m.max(v.abs())));

    let snapshot_steps: Vec<usize> = if cfg.pullback_snapshots == 0 || steps == 0 {
        Vec::new()
    } else {
        let m = cfg.pullback_snapshots;
        let mut v: Vec<usize> = (0..m)
            .map(|k| {
                let frac = 0.75 + 0.25 * if m == 1 { 1.0 } else { k as f64 / (m - 1) as f64 };
                (frac * steps as f64).round() as usize
            })
            .collect();
        v.dedup();
        v
    };

    let mut traj = Trajectory {
        zeta: cfg.zeta,
        h,
        records: Vec::new(),
        pullbacks: Vec::new(),
        status: TrajectoryStatus::Completed,
        initial_energy,
        morawetz: morawetz.clone(),
        y_norm: y_norm.clone(),
        force_l1l2: 0.0,
        tail_warnings: 0,
        final_state: s.clone(),
    };
    let mut last_pullback = pullback_of(&s);
    let mut force_l1l2 = 0.0;
    let mut stepper = Stepper::new(plan, h, cfg.zeta);
    let mut u_next = vec![0.0; grid.len()];
    let mut snap_iter = snapshot_steps.iter().peekable();

    let mut k = 0usize;
    loop {
        // u holds u(t_k) here.
        s.time = t0 + k as f64 * h;
        let at_end = k == steps;
        let lpc1 = lq_norm_values(&grid, &u, diag.p1);
        if !(lpc1 <= sentinel) || !u.iter().all(|v| v.is_finite()) {
            let (norm_name, norm) = if lpc1.is_finite() { ("L^{p_c+1}", lpc1) } else { ("non-finite state", lpc1) };
            traj.status = TrajectoryStatus::BlowUp { time: s.time, norm_name, norm };
            break;
        }
        if k.is_multiple_of(cfg.callback_stride) || at_end {
            let pb = pullback_of(&s);
            let dist = if k == 0 { f64::NAN } else { pb.distance(&last_pullback, plan) };
            last_pullback = pb;
            let rec = diag.record(&s, &u, &morawetz, &y_norm, dist);
            let tail = grid
                .nodes()
                .iter()
                .zip(&u)
                .filter(|(r, _)| **r > 0.9 * grid.r_max())
                .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
            if tail > tail_limit {
                traj.tail_warnings += 1;
            }
            for obs in observers.iter_mut() {
                obs.observe(&Snapshot { state: &s, u: &u, record: &rec });
            }
            traj.records.push(rec);
        }
        if snap_iter.peek() == Some(&&k) {
            snap_iter.next();
            let mut pb = pullback_of(&s);
            pb.time = s.time;
            traj.pullbacks.push(pb);
        }
        if at_end {
            break;
        }
        // Left-endpoint time integrals at t_k.
        morawetz.accumulate(morawetz_rate_values(&grid, &u), morawetz_aux_rate_values(&grid, &u), h);
        y_norm.accumulate_values(&grid, &u, h);
        if cfg.zeta != Zeta::Linear {
            let p2 = 2.0 * dim.p_c_f64();
            force_l1l2 += lq_power_values(&grid, &u, p2).sqrt() * h;
        }
        let finite = stepper.advance(&mut s, &mut u_next);
        k += 1;
        if !finite {
            traj.status =
                TrajectoryStatus::BlowUp { time: t0 + k as f64 * h, norm_name: "non-finite state", norm: f64::NAN };
            break;
        }
        s.time = t0 + k as f64 * h;
        plan.inverse_values(&s.u.values, &mut u);
    }
    traj.morawetz = morawetz;
    traj.y_norm = y_norm;
    traj.force_l1l2 = force_l1l2;
    traj.final_state = s;
    Ok(traj)
}

/// Classification returned by [`scattering_detect`].
#[derive(Debug, Clone, PartialEq)]
pub enum ScatteringVerdict {
    /// Pullbacks converged; carries the last one.
    Scattered(SpectralState),
    Undecided,
    BlowUp,
}

/// Scattering test on the final-quarter pullbacks: successive differences
/// must be nonincreasing and the last one below ε_scat·(1 + √𝓔). Differences
/// under the round-off floor count as converged.
pub fn scattering_detect(plan: &TransformPlan, traj: &Trajectory, eps_scat: f64) -> ScatteringVerdict {
    if traj.blew_up() {
        return ScatteringVerdict::BlowUp;
    }
    let diffs = pullback_increments(plan, traj);
    if traj.pullbacks.len() < 4 {
        return ScatteringVerdict::Undecided;
    }
    let scale = 1.0 + traj.initial_energy.total.abs().sqrt();
    let floor = NOISE_FLOOR * scale;
    let monotone = diffs.windows(2).all(|w| w[1] <= w[0] || w[1] <= floor);
    let last = *diffs.last().unwrap();
    if monotone && last < eps_scat * scale {
        let mut limit = traj.pullbacks.last().unwrap().clone();
        limit.time = 0.0;
        ScatteringVerdict::Scattered(limit)
    } else {
        ScatteringVerdict::Undecided
    }
}

/// ‖P_{k+1} − P_k‖_{H^{0,1}×L²} for successive stored pullbacks.
pub fn pullback_increments(plan: &TransformPlan, traj: &Trajectory) -> Vec<f64> {
    traj.pullbacks.windows(2).map(|w| w[1].distance(&w[0], plan)).collect()
}
