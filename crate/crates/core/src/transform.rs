//! Discretised radial Fourier transform on H^n.
//!
//! ```text
//! f̃(λ) = ∫ f Φ_λ dμ                          (forward)
//! f(r) = c_norm ∫ f̃(λ) Φ_λ(r) |c(λ)|⁻² dλ     (inverse)
//! ```
//!
//! The radial integral uses composite Gauss–Legendre panels in r, the
//! spectral one the midpoint rule on λ_j = (j − ½)Δλ. Both maps are dense
//! matrices sharing the kernel Φ_{λ_j}(r_i). The constant c_norm absorbs the
//! unspecified normalisation of |c(λ)|⁻² and is calibrated from reference
//! bumps when a plan is built.

use crate::linalg::{dot, matvec, matvec2};
use crate::quadrature::GaussLegendre;
use crate::specfun::{kernel_row, plancherel_density, volume_weight};
use crate::{Dimension, Error, Result};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

/// Default truncation radius.
pub const DEFAULT_R_MAX: f64 = 30.0;
/// Default spectral cutoff.
pub const DEFAULT_LAMBDA_MAX: f64 = 32.0;
/// Default node count for both grids.
pub const DEFAULT_NODES: usize = 1024;
/// Radial panel width used by [`RadialGrid::new`].
pub const PANEL_WIDTH: f64 = 0.5;
/// Largest accepted relative L² roundtrip residual on the self-test bump.
pub const ROUNDTRIP_TOL: f64 = 1e-8;
/// Largest accepted disagreement between the two calibration bumps.
pub const CALIBRATION_TOL: f64 = 1e-6;

/// Composite Gauss–Legendre grid on [0, r_max] carrying the hyperbolic
/// volume weight.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: Dimension,
    r_max: f64,
    panel_width: f64,
    nodes_per_panel: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    vol: Vec<f64>,
    measure: Vec<f64>,
    diff: Vec<f64>,
}

impl RadialGrid {
    /// Panels of width close to 0.5, with enough nodes per panel to reach at
    /// least `n_r` nodes in total.
    pub fn new(dim: Dimension, r_max: f64, n_r: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::Construction(format!("r_max must be positive (got {r_max})")));
        }
        let panels = (r_max / PANEL_WIDTH).ceil().max(1.0) as usize;
        let per_panel = n_r.div_ceil(panels).max(2);
        Self::with_panels(dim, r_max, r_max / panels as f64, per_panel)
    }

    /// Uniform panels of width `r_max / ceil(r_max / panel_width)`, each with
    /// a `nodes_per_panel`-point rule.
    pub fn with_panels(dim: Dimension, r_max: f64, panel_width: f64, nodes_per_panel: usize) -> Result<Self> {
        if !(r_max > 0.0 && panel_width > 0.0) || !r_max.is_finite() {
            return Err(Error::Construction(format!(
                "radial grid needs r_max > 0 and panel width > 0 (got {r_max}, {panel_width})"
            )));
        }
        if nodes_per_panel < 2 {
            return Err(Error::Construction("radial panels need at least 2 nodes".into()));
        }
        let panels = (r_max / panel_width).round().max(1.0) as usize;
        let width = r_max / panels as f64;
        let rule = GaussLegendre::new(nodes_per_panel);
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        let mut weights = Vec::with_capacity(panels * nodes_per_panel);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        let vol: Vec<f64> = nodes.iter().map(|&r| volume_weight(r, dim)).collect();
        let measure = vol.iter().zip(&weights).map(|(v, w)| v * w).collect();
        let scale = 2.0 / width;
        let diff = rule.differentiation_matrix().into_iter().map(|d| d * scale).collect();
        Ok(RadialGrid { dim, r_max, panel_width: width, nodes_per_panel, nodes, weights, vol, measure, diff })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn panel_width(&self) -> f64 {
        self.panel_width
    }
    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    /// Quadrature weights for ∫_0^{r_max} · dr.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    /// volume_weight at the nodes.
    pub fn vol(&self) -> &[f64] {
        &self.vol
    }
    /// weights · vol, the discrete dμ.
    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    /// Samples `f` at the nodes.
    pub fn sample(self: &Arc<Self>, f: impl Fn(f64) -> f64) -> RadialField {
        RadialField { grid: self.clone(), values: self.nodes.iter().map(|&r| f(r)).collect() }
    }

    pub fn zeros(self: &Arc<Self>) -> RadialField {
        RadialField { grid: self.clone(), values: vec![0.0; self.len()] }
    }

    /// ∫ g dμ for g given at the nodes.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        dot(&self.measure, values)
    }

    /// Derivative of the panelwise polynomial interpolant of `values`.
    pub fn differentiate(&self, values: &[f64], out: &mut [f64]) {
        let k = self.nodes_per_panel;
        assert_eq!(values.len(), self.len());
        assert_eq!(out.len(), self.len());
        for (v, o) in values.chunks_exact(k).zip(out.chunks_exact_mut(k)) {
            matvec(&self.diff, v, o);
        }
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Midpoint grid λ_j = (j − ½)Δλ, j = 1..n_λ, with the Plancherel density.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    dim: Dimension,
    lambda_max: f64,
    delta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    density: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(dim: Dimension, lambda_max: f64, n_lambda: usize) -> Result<Self> {
        if !(lambda_max > 0.0) || !lambda_max.is_finite() || n_lambda == 0 {
            return Err(Error::Construction(format!(
                "spectral grid needs λ_max > 0 and at least one node (got {lambda_max}, {n_lambda})"
            )));
        }
        let delta = lambda_max / n_lambda as f64;
        let nodes: Vec<f64> = (0..n_lambda).map(|j| (j as f64 + 0.5) * delta).collect();
        let density = nodes.iter().map(|&l| plancherel_density(l, dim)).collect::<Result<Vec<_>>>()?;
        Ok(SpectralGrid { dim, lambda_max, delta, weights: vec![delta; n_lambda], nodes, density })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn sample(self: &Arc<Self>, f: impl Fn(f64) -> f64) -> SpectralField {
        SpectralField { grid: self.clone(), values: self.nodes.iter().map(|&l| f(l)).collect() }
    }

    pub fn zeros(self: &Arc<Self>) -> SpectralField {
        SpectralField { grid: self.clone(), values: vec![0.0; self.len()] }
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Samples of a radial function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<f64>,
}

/// Samples of a spectral function on a [`SpectralGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: Arc<SpectralGrid>,
    pub values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a radial grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(RadialField { grid, values })
    }

    /// ⟨f, g⟩ in L²(dμ).
    pub fn inner(&self, other: &RadialField) -> Result<f64> {
        if !RadialGrid::same(&self.grid, &other.grid) {
            return Err(Error::GridMismatch("inner product of fields on different radial grids".into()));
        }
        let m = self.grid.measure();
        Ok(self.values.iter().zip(&other.values).zip(m).map(|((a, b), w)| a * b * w).sum())
    }

    pub fn l2_norm(&self) -> f64 {
        self.grid.integrate(&self.values.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt()
    }

    pub fn scaled(&self, c: f64) -> RadialField {
        RadialField { grid: self.grid.clone(), values: self.values.iter().map(|v| c * v).collect() }
    }

    /// a·self + b·other.
    pub fn combine(&self, a: f64, other: &RadialField, b: f64) -> Result<RadialField> {
        if !RadialGrid::same(&self.grid, &other.grid) {
            return Err(Error::GridMismatch("combining fields on different radial grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(RadialField { grid: self.grid.clone(), values })
    }

    /// Largest |f| on nodes with r > `fraction`·r_max.
    pub fn tail_max(&self, fraction: f64) -> f64 {
        let cut = fraction * self.grid.r_max();
        self.grid.nodes().iter().zip(&self.values).filter(|(r, _)| **r > cut).fold(0.0, |m, (_, v)| m.max(v.abs()))
    }
}

impl SpectralField {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a spectral grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(SpectralField { grid, values })
    }

    pub fn scaled(&self, c: f64) -> SpectralField {
        SpectralField { grid: self.grid.clone(), values: self.values.iter().map(|v| c * v).collect() }
    }
}

/// Dense forward and inverse transform matrices on a fixed pair of grids.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    radial: Arc<RadialGrid>,
    spectral: Arc<SpectralGrid>,
    /// n_λ × n_r, row-major: Φ_{λ_j}(r_i)·dμ_i.
    forward: Vec<f64>,
    /// n_r × n_λ, row-major: c_norm·Φ_{λ_j}(r_i)·density_j·Δλ.
    inverse: Vec<f64>,
    c_norm: f64,
    roundtrip_residual: f64,
}

/// Builds a calibrated plan and runs its roundtrip self-test.
pub fn make_plan(dim: Dimension, r_max: f64, n_r: usize, lambda_max: f64, n_lambda: usize) -> Result<TransformPlan> {
    if n_r < 256 || n_lambda < 256 {
        return Err(Error::Construction(format!(
            "grid too coarse: n_r = {n_r}, n_lambda = {n_lambda} (both must be ≥ 256)"
        )));
    }
    if !(r_max >= 10.0) {
        return Err(Error::Construction(format!("r_max = {r_max} is below the minimum 10")));
    }
    if !(lambda_max >= 16.0) {
        return Err(Error::Construction(format!("lambda_max = {lambda_max} is below the minimum 16")));
    }
    let radial = Arc::new(RadialGrid::new(dim, r_max, n_r)?);
    let spectral = Arc::new(SpectralGrid::new(dim, lambda_max, n_lambda)?);
    TransformPlan::build(radial, spectral)
}

/// The default plan for `dim`: r_max = 30, λ_max = 32, 1024 nodes each.
pub fn default_plan(dim: Dimension) -> Result<TransformPlan> {
    make_plan(dim, DEFAULT_R_MAX, DEFAULT_NODES, DEFAULT_LAMBDA_MAX, DEFAULT_NODES)
}

/// Reference bumps used by calibration and the self-test.
fn reference_bumps() -> [fn(f64) -> f64; 2] {
    [|r| (-r * r).exp(), |r| (-(r - 1.5) * (r - 1.5)).exp() + (-(r + 1.5) * (r + 1.5)).exp()]
}

impl TransformPlan {
    /// Builds the matrices on given grids, calibrates c_norm and runs the
    /// roundtrip self-test.
    pub fn build(radial: Arc<RadialGrid>, spectral: Arc<SpectralGrid>) -> Result<Self> {
        if radial.dim() != spectral.dim() {
            return Err(Error::Construction("radial and spectral grids disagree on the dimension".into()));
        }
        let (nr, nl) = (radial.len(), spectral.len());
        let mut inverse = vec![0.0; nr * nl];
        for (i, row) in inverse.chunks_exact_mut(nl).enumerate() {
            kernel_row(radial.dim(), radial.nodes()[i], spectral.delta(), row);
        }
        let mut forward = vec![0.0; nl * nr];
        for (i, row) in inverse.chunks_exact_mut(nl).enumerate() {
            let mu = radial.measure()[i];
            for (j, k) in row.iter_mut().enumerate() {
                forward[j * nr + i] = *k * mu;
                *k *= spectral.density()[j] * spectral.weights()[j];
            }
        }
        let mut plan = TransformPlan { radial, spectral, forward, inverse, c_norm: 1.0, roundtrip_residual: f64::NAN };
        let c = plan.calibrate_normalization()?;
        plan.rescale(c);
        let bump = plan.radial.sample(reference_bumps()[0]);
        let back = plan.inverse(&plan.forward(&bump)?)?;
        let residual = back.combine(1.0, &bump, -1.0)?.l2_norm() / bump.l2_norm();
        plan.roundtrip_residual = residual;
        if !(residual <= ROUNDTRIP_TOL) {
            return Err(Error::Construction(format!(
                "roundtrip residual {residual:.3e} exceeds tolerance {ROUNDTRIP_TOL:e}"
            )));
        }
        Ok(plan)
    }

    /// Reassembles a plan from stored matrices, e.g. a snapshot. The
    /// matrices are trusted; the roundtrip self-test is repeated.
    pub fn from_parts(
        radial: Arc<RadialGrid>,
        spectral: Arc<SpectralGrid>,
        forward: Vec<f64>,
        inverse: Vec<f64>,
        c_norm: f64,
    ) -> Result<Self> {
        let n = radial.len() * spectral.len();
        if forward.len() != n || inverse.len() != n {
            return Err(Error::GridMismatch("stored matrices do not match the grid sizes".into()));
        }
        let mut plan = TransformPlan { radial, spectral, forward, inverse, c_norm, roundtrip_residual: f64::NAN };
        let bump = plan.radial.sample(reference_bumps()[0]);
        let back = plan.inverse(&plan.forward(&bump)?)?;
        plan.roundtrip_residual = back.combine(1.0, &bump, -1.0)?.l2_norm() / bump.l2_norm();
        if !(plan.roundtrip_residual <= ROUNDTRIP_TOL) {
            return Err(Error::Construction(format!(
                "restored plan fails the roundtrip self-test ({:.3e})",
                plan.roundtrip_residual
            )));
        }
        Ok(plan)
    }

    fn rescale(&mut self, c: f64) {
        for v in self.inverse.iter_mut() {
            *v *= c;
        }
        self.c_norm *= c;
    }

    pub fn dim(&self) -> Dimension {
        self.radial.dim()
    }
    pub fn radial(&self) -> &Arc<RadialGrid> {
        &self.radial
    }
    pub fn spectral(&self) -> &Arc<SpectralGrid> {
        &self.spectral
    }
    pub fn c_norm(&self) -> f64 {
        self.c_norm
    }
    /// Relative L² roundtrip residual measured on e^{−r²} at construction.
    pub fn roundtrip_residual(&self) -> f64 {
        self.roundtrip_residual
    }
    pub fn forward_matrix(&self) -> &[f64] {
        &self.forward
    }
    pub fn inverse_matrix(&self) -> &[f64] {
        &self.inverse
    }

    /// c_norm·density_j·Δλ_j, the discrete spectral measure.
    pub fn spectral_measure(&self) -> Vec<f64> {
        let s = &self.spectral;
        s.density().iter().zip(s.weights()).map(|(d, w)| self.c_norm * d * w).collect()
    }

    /// Ratio ⟨f, Inv(Fwd f)⟩ / ‖Inv(Fwd f)‖² with the plan's current inverse,
    /// averaged over two reference bumps. A draft plan with c_norm = 1 gets
    /// the normalisation constant; a calibrated plan gets 1.
    pub fn calibrate_normalization(&self) -> Result<f64> {
        let mut estimates = [0.0; 2];
        for (est, bump) in estimates.iter_mut().zip(reference_bumps()) {
            let f = self.radial.sample(bump);
            let g = self.inverse(&self.forward(&f)?)?;
            *est = f.inner(&g)? / g.inner(&g)?;
        }
        let [a, b] = estimates;
        if !(a.is_finite() && b.is_finite() && a > 0.0) {
            return Err(Error::Calibration(format!("non-finite or non-positive estimates {a}, {b}")));
        }
        let spread = (a - b).abs() / a.abs().max(b.abs());
        if spread > CALIBRATION_TOL {
            return Err(Error::Calibration(format!(
                "reference bumps disagree: {a:.12e} vs {b:.12e} (relative {spread:.2e} > {CALIBRATION_TOL:e})"
            )));
        }
        Ok(0.5 * (a + b))
    }

    fn check_radial(&self, f: &RadialField) -> Result<()> {
        if RadialGrid::same(&self.radial, &f.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch("field is not on the plan's radial grid".into()))
        }
    }

    fn check_spectral(&self, f: &SpectralField) -> Result<()> {
        if SpectralGrid::same(&self.spectral, &f.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch("field is not on the plan's spectral grid".into()))
        }
    }

    pub fn forward(&self, f: &RadialField) -> Result<SpectralField> {
        self.check_radial(f)?;
        let mut out = vec![0.0; self.spectral.len()];
        self.forward_values(&f.values, &mut out);
        Ok(SpectralField { grid: self.spectral.clone(), values: out })
    }

    pub fn inverse(&self, ft: &SpectralField) -> Result<RadialField> {
        self.check_spectral(ft)?;
        let mut out = vec![0.0; self.radial.len()];
        self.inverse_values(&ft.values, &mut out);
        Ok(RadialField { grid: self.radial.clone(), values: out })
    }

    /// Forward transform on raw slices aligned with the plan's grids.
    pub fn forward_values(&self, f: &[f64], out: &mut [f64]) {
        assert_eq!(f.len(), self.radial.len());
        matvec(&self.forward, f, out);
    }

    /// Inverse transform on raw slices aligned with the plan's grids.
    pub fn inverse_values(&self, ft: &[f64], out: &mut [f64]) {
        assert_eq!(ft.len(), self.spectral.len());
        matvec(&self.inverse, ft, out);
    }

    /// Two inverse transforms in one pass over the matrix.
    pub fn inverse_values2(&self, a: &[f64], b: &[f64], out_a: &mut [f64], out_b: &mut [f64]) {
        assert_eq!(a.len(), self.spectral.len());
        matvec2(&self.inverse, a, b, out_a, out_b);
    }

    /// inverse(m · forward(f)).
    pub fn apply_multiplier(&self, f: &RadialField, m: impl Fn(f64) -> f64) -> Result<RadialField> {
        let mut ft = self.forward(f)?;
        for (v, &l) in ft.values.iter_mut().zip(self.spectral.nodes()) {
            let ml = m(l);
            if !ml.is_finite() {
                return Err(Error::domain(format!("multiplier is not finite at λ = {l}")));
            }
            *v *= ml;
        }
        self.inverse(&ft)
    }

    /// c_norm Σ_j a_j b_j density_j Δλ.
    pub fn spectral_inner(&self, a: &SpectralField, b: &SpectralField) -> Result<f64> {
        self.check_spectral(a)?;
        self.check_spectral(b)?;
        Ok(self.spectral_inner_values(&a.values, &b.values))
    }

    pub fn spectral_inner_values(&self, a: &[f64], b: &[f64]) -> f64 {
        let s = &self.spectral;
        let mut acc = 0.0;
        for ((x, y), (d, w)) in a.iter().zip(b).zip(s.density().iter().zip(s.weights())) {
            acc += x * y * d * w;
        }
        self.c_norm * acc
    }

    /// c_norm Σ_j m(λ_j) a_j² density_j Δλ.
    pub fn spectral_quadratic(&self, a: &[f64], m: impl Fn(f64) -> f64) -> f64 {
        let s = &self.spectral;
        let mut acc = 0.0;
        for (x, ((l, d), w)) in a.iter().zip(s.nodes().iter().zip(s.density()).zip(s.weights())) {
            acc += m(*l) * x * x * d * w;
        }
        self.c_norm * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn plan3() -> &'static TransformPlan {
        static P: OnceLock<TransformPlan> = OnceLock::new();
        P.get_or_init(|| default_plan(Dimension::THREE).unwrap())
    }

    #[test]
    fn default_radial_grid_shape() {
        let g = RadialGrid::new(Dimension::THREE, 30.0, 1024).unwrap();
        assert_eq!(g.len(), 60 * 18);
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(*g.nodes().last().unwrap() < 30.0 && g.nodes()[0] > 0.0);
        assert!((g.weights().iter().sum::<f64>() - 30.0).abs() < 1e-12);
    }

    #[test]
    fn panel_derivative_is_spectral() {
        let g = RadialGrid::new(Dimension::FOUR, 10.0, 256).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| (-r * r).exp()).collect();
        let mut d = vec![0.0; f.len()];
        g.differentiate(&f, &mut d);
        for (r, dv) in g.nodes().iter().zip(&d) {
            assert!((dv + 2.0 * r * (-r * r).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn preconditions() {
        assert!(matches!(make_plan(Dimension::THREE, 30.0, 8, 32.0, 1024), Err(Error::Construction(_))));
        assert!(make_plan(Dimension::THREE, 5.0, 512, 32.0, 512).is_err());
        assert!(make_plan(Dimension::THREE, 30.0, 512, 8.0, 512).is_err());
    }

    #[test]
    fn three_dimensional_constant_matches_sine_transform() {
        let p = plan3();
        let analytic = 1.0 / (2.0 * core::f64::consts::PI * core::f64::consts::PI);
        assert!((p.c_norm() / analytic - 1.0).abs() < 1e-6, "c_norm = {}", p.c_norm());
        assert!(p.roundtrip_residual() <= ROUNDTRIP_TOL);
    }

    #[test]
    fn recalibration_is_idempotent() {
        assert!((plan3().calibrate_normalization().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_maps_to_zero_and_mismatch_is_rejected() {
        let p = plan3();
        let z = p.radial().zeros();
        assert!(p.forward(&z).unwrap().values.iter().all(|&v| v == 0.0));
        assert!(p.inverse(&p.spectral().zeros()).unwrap().values.iter().all(|&v| v == 0.0));
        let other = Arc::new(RadialGrid::new(Dimension::THREE, 20.0, 512).unwrap());
        assert!(matches!(p.forward(&other.zeros()), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn non_finite_multiplier_is_rejected() {
        let p = plan3();
        let f = p.radial().sample(|r| (-r * r).exp());
        assert!(matches!(p.apply_multiplier(&f, |l| 1.0 / (l - p.spectral().nodes()[3])), Err(Error::Domain(_))));
    }
}
