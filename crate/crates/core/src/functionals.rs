//! Norms, energy, Morawetz and Y-norm bookkeeping, and the radial pointwise
//! estimate.

use crate::evolve::{StatePair, Zeta};
use crate::transform::{RadialField, RadialGrid, TransformPlan};
use crate::{Dimension, Error, Result};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// (Σ |f|^q dμ)^{1/q}.
pub fn lq_norm(f: &RadialField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::domain(format!("L^q norm needs q ≥ 1 (got {q})")));
    }
    Ok(lq_norm_values(&f.grid, &f.values, q))
}

/// [`lq_norm`] on raw values aligned with `grid`, without the q check.
pub fn lq_norm_values(grid: &RadialGrid, values: &[f64], q: f64) -> f64 {
    lq_power_values(grid, values, q).powf(1.0 / q)
}

/// Σ |f|^q dμ.
pub fn lq_power_values(grid: &RadialGrid, values: &[f64], q: f64) -> f64 {
    let mut acc = 0.0;
    for (v, m) in values.iter().zip(grid.measure()) {
        acc += abs_pow(*v, q) * m;
    }
    acc
}

fn abs_pow(v: f64, q: f64) -> f64 {
    let a = v.abs();
    if q == 2.0 {
        a * a
    } else if a == 0.0 {
        0.0
    } else {
        a.powf(q)
    }
}

/// ‖f‖²_{H^{0,1}} from the quadratic form ∫(|f′|² − ρ²|f|²) dμ, with f′ from
/// panelwise spectral differentiation.
pub fn h01_gradient_form_sq(f: &RadialField) -> f64 {
    let grid = &f.grid;
    let mut d = vec![0.0; grid.len()];
    grid.differentiate(&f.values, &mut d);
    let rho = grid.dim().rho_f64();
    let mut acc = 0.0;
    for ((dv, v), m) in d.iter().zip(&f.values).zip(grid.measure()) {
        acc += (dv * dv - rho * rho * v * v) * m;
    }
    acc
}

/// ‖D^γ D̃^σ f‖_{L²}, computed spectrally with D = λ and D̃ = (λ² + ρ² + 1)^{1/2}.
pub fn sobolev_norm(plan: &TransformPlan, f: &RadialField, sigma: f64, gamma: f64) -> Result<f64> {
    if !(gamma < 1.5) {
        return Err(Error::domain(format!("Sobolev norm needs γ < 3/2 (got {gamma})")));
    }
    let ft = plan.forward(f)?;
    let shift = plan.dim().rho_f64().powi(2) + 1.0;
    let q = plan.spectral_quadratic(&ft.values, |l| {
        let g = if gamma == 0.0 { 1.0 } else { l.powf(2.0 * gamma) };
        let s = if sigma == 0.0 { 1.0 } else { (l * l + shift).powf(sigma) };
        g * s
    });
    Ok(q.max(0.0).sqrt())
}

/// Energy split into its three parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    /// ½‖u_t‖²_{L²}
    pub kinetic: f64,
    /// ½‖u‖²_{H^{0,1}}
    pub elastic: f64,
    /// −ζ/(p_c+1)·‖u‖^{p_c+1}_{L^{p_c+1}}
    pub potential: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(kinetic: f64, elastic: f64, potential: f64) -> Self {
        EnergyBreakdown { kinetic, elastic, potential, total: kinetic + elastic + potential }
    }
}

/// Energy of a radial state; elastic and kinetic parts are computed spectrally.
pub fn energy(plan: &TransformPlan, state: &StatePair, zeta: Zeta) -> Result<EnergyBreakdown> {
    let uh = plan.forward(&state.u)?;
    let uth = plan.forward(&state.ut)?;
    Ok(energy_parts(plan, &uh.values, &uth.values, &state.u.values, zeta))
}

/// Energy from spectral coefficients and the radial samples of u.
pub fn energy_parts(plan: &TransformPlan, u_hat: &[f64], ut_hat: &[f64], u: &[f64], zeta: Zeta) -> EnergyBreakdown {
    let kinetic = 0.5 * plan.spectral_quadratic(ut_hat, |_| 1.0);
    let elastic = 0.5 * plan.spectral_quadratic(u_hat, |l| l * l);
    let potential = if zeta == Zeta::Linear {
        0.0
    } else {
        let p1 = plan.dim().p_c_f64() + 1.0;
        -zeta.value() / p1 * lq_power_values(plan.radial(), u, p1)
    };
    EnergyBreakdown::new(kinetic, elastic, potential)
}

/// ∫ ρ (cosh r / sinh r) |u|^{p_c+1} dμ, the Morawetz integrand.
pub fn morawetz_rate(u: &RadialField) -> f64 {
    morawetz_rate_values(&u.grid, &u.values)
}

pub fn morawetz_rate_values(grid: &RadialGrid, u: &[f64]) -> f64 {
    let rho = grid.dim().rho_f64();
    let p1 = grid.dim().p_c_f64() + 1.0;
    let mut acc = 0.0;
    for ((r, v), m) in grid.nodes().iter().zip(u).zip(grid.measure()) {
        if *v != 0.0 {
            acc += abs_pow(*v, p1) * m / r.tanh();
        }
    }
    rho * acc
}

/// ∫ ρ(ρ−1) (cosh r / sinh³ r) |u|² dμ, the lower-order Morawetz term.
/// Vanishes identically in three dimensions.
pub fn morawetz_aux_rate(u: &RadialField) -> f64 {
    morawetz_aux_rate_values(&u.grid, &u.values)
}

pub fn morawetz_aux_rate_values(grid: &RadialGrid, u: &[f64]) -> f64 {
    let rho = grid.dim().rho_f64();
    let c = rho * (rho - 1.0);
    if c == 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for ((r, v), m) in grid.nodes().iter().zip(u).zip(grid.measure()) {
        let s = r.sinh();
        acc += v * v * m * r.cosh() / (s * s * s);
    }
    c * acc
}

/// Running time integral of the Morawetz rate against the budget n·𝓔(0).
#[derive(Debug, Clone, PartialEq)]
pub struct MorawetzAccumulator {
    pub value: f64,
    pub budget: f64,
    /// Running integral of [`morawetz_aux_rate`].
    pub aux_value: f64,
    pub history: Vec<f64>,
}

impl MorawetzAccumulator {
    pub fn new(dim: Dimension, initial_energy: f64) -> Self {
        MorawetzAccumulator { value: 0.0, budget: dim.n() as f64 * initial_energy, aux_value: 0.0, history: Vec::new() }
    }

    /// Left-endpoint increment rate·dt.
    pub fn accumulate(&mut self, rate: f64, aux_rate: f64, dt: f64) {
        let inc = rate * dt;
        self.value += inc;
        self.aux_value += aux_rate * dt;
        self.history.push(inc);
    }

    /// value ≤ budget·(1 + rel_tol).
    pub fn within_budget(&self, rel_tol: f64) -> bool {
        self.value <= self.budget * (1.0 + rel_tol)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.history.iter().all(|&h| h >= 0.0)
    }
}

/// Running ∫ ‖u(t)‖^{p_c}_{L^{2p_c}} dt.
#[derive(Debug, Clone, PartialEq)]
pub struct YNormAccumulator {
    pub p_c: f64,
    pub value: f64,
    pub increments: usize,
}

impl YNormAccumulator {
    pub fn new(dim: Dimension) -> Self {
        YNormAccumulator { p_c: dim.p_c_f64(), value: 0.0, increments: 0 }
    }

    /// Adds ‖u‖^{p_c}_{L^{2p_c}}·dt.
    pub fn accumulate(&mut self, u: &RadialField, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(Error::domain(format!("time increment must be positive (got {dt})")));
        }
        self.accumulate_values(&u.grid, &u.values, dt);
        Ok(())
    }

    pub fn accumulate_values(&mut self, grid: &RadialGrid, u: &[f64], dt: f64) {
        // ‖u‖^{p}_{L^{2p}} = (∫|u|^{2p})^{1/2}
        self.value += lq_power_values(grid, u, 2.0 * self.p_c).sqrt() * dt;
        self.increments += 1;
    }

    /// The discrete Y-norm value^{1/p_c}.
    pub fn y_norm(&self) -> f64 {
        self.value.powf(1.0 / self.p_c)
    }
}

/// Functional form of [`YNormAccumulator::accumulate`].
pub fn y_norm_accumulate(mut acc: YNormAccumulator, u: &RadialField, dt: f64) -> Result<YNormAccumulator> {
    acc.accumulate(u, dt)?;
    Ok(acc)
}

/// max_i |f(r_i)| (sinh r_i)^ρ r_i^{−1/2} / ‖f‖_{H^{0,1}}, with the norm from
/// the gradient form on the field's own grid.
pub fn pointwise_bound_ratio(f: &RadialField) -> Result<f64> {
    let norm_sq = h01_gradient_form_sq(f);
    if !(norm_sq > 0.0) {
        return Err(Error::domain("pointwise bound ratio needs a nonzero H^{0,1} norm"));
    }
    let rho = f.grid.dim().rho_f64();
    let peak =
        f.grid.nodes().iter().zip(&f.values).map(|(r, v)| v.abs() * r.sinh().powf(rho) / r.sqrt()).fold(0.0, f64::max);
    Ok(peak / norm_sq.sqrt())
}

fn psi(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step, 0 for x ≤ 0 and 1 for x ≥ 1.
fn smooth_step(x: f64) -> f64 {
    let a = psi(x);
    let b = psi(1.0 - x);
    a / (a + b)
}

/// Smooth cutoff equal to 1 on [1/2, 3/2] and 0 outside (1/4, 7/4).
pub fn cutoff(s: f64) -> f64 {
    smooth_step(4.0 * s - 1.0) * smooth_step(7.0 - 4.0 * s)
}

/// f_R(r) = r^{1/2−ρ} φ(r/R) for R ≤ 1 and e^{−ρr} r^{1/2} φ(r/R) for R > 1.
pub fn extremal_value(r_big: f64, r: f64, dim: Dimension) -> f64 {
    let phi = cutoff(r / r_big);
    if phi == 0.0 {
        return 0.0;
    }
    let rho = dim.rho_f64();
    if r_big <= 1.0 {
        r.powf(0.5 - rho) * phi
    } else {
        (-rho * r).exp() * r.sqrt() * phi
    }
}

/// Samples f_R on `grid`.
pub fn extremal_family(r_big: f64, grid: &Arc<RadialGrid>) -> Result<RadialField> {
    if !(r_big > 0.0) || !r_big.is_finite() {
        return Err(Error::domain(format!("f_R needs R > 0 (got {r_big})")));
    }
    let dim = grid.dim();
    Ok(grid.sample(|r| extremal_value(r_big, r, dim)))
}

/// f_R(R)·(sinh R)^ρ·R^{−1/2}.
pub fn saturation_ratio(r_big: f64, dim: Dimension) -> f64 {
    extremal_value(r_big, r_big, dim) * r_big.sinh().powf(dim.rho_f64()) / r_big.sqrt()
}

/// Column names of [`DiagnosticsRecord::row`], in order.
pub const DIAGNOSTIC_COLUMNS: [&str; 11] = [
    "t",
    "energy_total",
    "energy_kinetic",
    "energy_elastic",
    "energy_potential",
    "l2",
    "lpc1",
    "morawetz_acc",
    "morawetz_budget",
    "y_acc",
    "pullback_dist",
];

/// One row of a trajectory's diagnostics. `y_acc` is the discrete Y-norm so
/// far; `pullback_dist` is the H^{0,1}×L² distance between this pullback and
/// the previous record's (NaN on the first row).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: EnergyBreakdown,
    pub l2: f64,
    pub lpc1: f64,
    pub morawetz_acc: f64,
    pub morawetz_budget: f64,
    pub y_acc: f64,
    pub pullback_dist: f64,
}

impl DiagnosticsRecord {
    pub fn row(&self) -> [f64; 11] {
        [
            self.t,
            self.energy.total,
            self.energy.kinetic,
            self.energy.elastic,
            self.energy.potential,
            self.l2,
            self.lpc1,
            self.morawetz_acc,
            self.morawetz_budget,
            self.y_acc,
            self.pullback_dist,
        ]
    }
}
