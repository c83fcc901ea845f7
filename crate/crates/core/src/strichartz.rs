//! Admissible exponent regions in exact rational arithmetic, plus an
//! empirical space-time norm probe for the linear flow.
//!
//! Points are written in the (1/p, 1/q) square. The classical region is
//! 2/p + (n−1)/q ≥ (n−1)/2 on (0, ½] × (0, ½); the energy region is
//! 1/p + n/q ≥ n/2 − 1 on the open square (0, ½)². The pair
//! (∞, 2n/(n−2)) sits outside both squares and is reported separately.

use crate::ensemble::random_fields;
use crate::evolve::{SpectralState, StatePair};
use crate::functionals::lq_norm_values;
use crate::transform::TransformPlan;
use crate::{Dimension, Error, Rational, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Float, ToPrimitive};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn half() -> Rational {
    r(1, 2)
}

fn n_rat(dim: Dimension) -> Rational {
    Rational::from_integer(dim.n() as i64)
}

/// A point (1/p, 1/q) with 0 < 1/p ≤ ½ and 0 < 1/q < ½.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentPair {
    inv_p: Rational,
    inv_q: Rational,
}

impl ExponentPair {
    pub fn new(inv_p: Rational, inv_q: Rational) -> Result<Self> {
        let zero = Rational::from_integer(0);
        if !(inv_p > zero && inv_p <= half()) {
            return Err(Error::domain(format!("1/p = {inv_p} is outside (0, 1/2]")));
        }
        if !(inv_q > zero && inv_q < half()) {
            return Err(Error::domain(format!("1/q = {inv_q} is outside (0, 1/2)")));
        }
        Ok(ExponentPair { inv_p, inv_q })
    }

    /// From the exponents themselves.
    pub fn from_pq(p: Rational, q: Rational) -> Result<Self> {
        let zero = Rational::from_integer(0);
        if p <= zero || q <= zero {
            return Err(Error::domain(format!("exponents must be positive (got p = {p}, q = {q})")));
        }
        Self::new(p.recip(), q.recip())
    }

    pub fn inv_p(&self) -> Rational {
        self.inv_p
    }
    pub fn inv_q(&self) -> Rational {
        self.inv_q
    }
    pub fn p(&self) -> Rational {
        self.inv_p.recip()
    }
    pub fn q(&self) -> Rational {
        self.inv_q.recip()
    }
}

/// The Y-norm pair (p_c, 2p_c).
pub fn y_pair(dim: Dimension) -> ExponentPair {
    let p = dim.p_c();
    ExponentPair::from_pq(p, p * 2).expect("the Y pair lies inside the square")
}

/// β(q) = (n+1)/2 · (½ − 1/q).
pub fn beta(q: Rational, dim: Dimension) -> Result<Rational> {
    if q <= Rational::from_integer(2) {
        return Err(Error::domain(format!("β(q) needs q > 2 (got {q})")));
    }
    Ok((n_rat(dim) + 1) / 2 * (half() - q.recip()))
}

/// 2/p + (n−1)/q ≥ (n−1)/2.
pub fn is_admissible_classical(pair: &ExponentPair, dim: Dimension) -> bool {
    let m = n_rat(dim) - 1;
    pair.inv_p * 2 + m * pair.inv_q >= m / 2
}

/// 1/p + n/q − (n/2 − 1); zero on the energy boundary line.
fn energy_margin(inv_p: Rational, inv_q: Rational, dim: Dimension) -> Rational {
    let n = n_rat(dim);
    inv_p + n * inv_q - (n / 2 - 1)
}

/// Membership of a pair in both regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionReport {
    pub classical: bool,
    pub energy: bool,
    pub beta: Rational,
    /// Equality in 1/p + n/q ≥ n/2 − 1.
    pub boundary_case: bool,
    /// 1/p = ½: on the edge of the square, where the energy estimate is not
    /// asserted. Such pairs are classified outside the energy region.
    pub square_edge: bool,
}

/// Classifies `pair` against both regions.
pub fn is_admissible_energy(pair: &ExponentPair, dim: Dimension) -> RegionReport {
    let margin = energy_margin(pair.inv_p, pair.inv_q, dim);
    let zero = Rational::from_integer(0);
    let square_edge = pair.inv_p == half();
    RegionReport {
        classical: is_admissible_classical(pair, dim),
        energy: !square_edge && margin >= zero,
        beta: beta(pair.q(), dim).expect("1/q < 1/2 gives q > 2"),
        boundary_case: margin == zero,
        square_edge,
    }
}

/// Which region a boundary polyline belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Classical,
    Energy,
    /// The isolated pair (1/p, 1/q) = (0, (n−2)/(2n)).
    SobolevPoint,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Classical => "classical",
            Region::Energy => "energy",
            Region::SobolevPoint => "sobolev_point",
        }
    }
}

/// A polyline in the (1/p, 1/q) square with exact vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySegment {
    pub region: Region,
    pub segment_id: usize,
    pub points: Vec<(Rational, Rational)>,
}

/// Boundary polylines of both regions. Segment 0 of each region is its
/// defining line sampled at `resolution + 1` equally spaced 1/p values;
/// segment 1 closes the region along the edges of the square.
pub fn region_boundary(dim: Dimension, resolution: usize) -> Result<Vec<BoundarySegment>> {
    if resolution < 16 {
        return Err(Error::domain(format!("region boundary needs resolution ≥ 16 (got {resolution})")));
    }
    let n = n_rat(dim);
    let m = n - 1;
    let res = resolution as i64;
    let inv_ps: Vec<Rational> = (0..=res).map(|k| r(k, 2 * res)).collect();
    // Solve each defining equality for 1/q.
    let classical_q = |ip: Rational| (m / 2 - ip * 2) / m;
    let energy_q = |ip: Rational| (n / 2 - 1 - ip) / n;
    let mut out = Vec::new();
    for (region, line) in [
        (Region::Classical, &classical_q as &dyn Fn(Rational) -> Rational),
        (Region::Energy, &energy_q as &dyn Fn(Rational) -> Rational),
    ] {
        let points: Vec<_> = inv_ps.iter().map(|&ip| (ip, line(ip))).collect();
        let first = points[0];
        let last = *points.last().unwrap();
        out.push(BoundarySegment { region, segment_id: 0, points });
        out.push(BoundarySegment {
            region,
            segment_id: 1,
            points: vec![last, (half(), half()), (r(0, 1), half()), first],
        });
    }
    out.push(BoundarySegment { region: Region::SobolevPoint, segment_id: 0, points: vec![sobolev_point(dim)] });
    Ok(out)
}

/// (1/p, 1/q) = (0, (n−2)/(2n)), admissible through Sobolev embedding.
pub fn sobolev_point(dim: Dimension) -> (Rational, Rational) {
    let n = n_rat(dim);
    (r(0, 1), (n - 2) / (n * 2))
}

/// Both sides of 2n/(n−2) + 1/(ρ − ½) = 2(n+1)/(n−2).
pub fn interpolation_exponent_identity(dim: Dimension) -> (Rational, Rational) {
    let n = n_rat(dim);
    let lhs = n * 2 / (n - 2) + (dim.rho() - half()).recip();
    let rhs = (n + 1) * 2 / (n - 2);
    (lhs, rhs)
}

/// Output of [`empirical_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalRatio {
    /// max over the ensemble of ‖u‖_{L^p L^q([0,T])} / ‖(u₀,u₁)‖_{H^{0,1}×L²}.
    pub ratio: f64,
    /// The same maximum with every other time sample dropped.
    pub ratio_double_stride: f64,
}

impl EmpiricalRatio {
    pub fn stride_sensitivity(&self) -> f64 {
        (self.ratio - self.ratio_double_stride).abs() / self.ratio
    }
}

/// Time step used to sample the linear flow in [`member_ratio`].
pub const PROBE_DT: f64 = 0.05;

/// ‖u‖_{L^p L^q([0,T])} / ‖(u₀,u₁)‖_{H^{0,1}×L²} for one linear solution,
/// sampled every `dt`, and the same with every other sample dropped.
pub fn member_ratio(
    plan: &TransformPlan,
    pair: &ExponentPair,
    data: &StatePair,
    t_end: f64,
    dt: f64,
) -> Result<(f64, f64)> {
    let s0 = SpectralState::from_radial(plan, data)?;
    let norm = s0.energy_norm(plan);
    if !(norm > 0.0) {
        return Err(Error::domain("empirical ratio needs nonzero data"));
    }
    let p = pair.p().to_f64().unwrap_or(f64::INFINITY);
    let q = pair.q().to_f64().unwrap_or(f64::INFINITY);
    let steps = (t_end / dt).round().max(1.0) as usize;
    let dt = t_end / steps as f64;
    let mut u = vec![0.0; plan.radial().len()];
    let (mut fine, mut coarse) = (0.0, 0.0);
    for k in 0..steps {
        let s = s0.rotated(k as f64 * dt);
        plan.inverse_values(&s.u.values, &mut u);
        let lp = lq_norm_values(plan.radial(), &u, q).powf(p);
        fine += lp * dt;
        if k % 2 == 0 {
            coarse += lp * 2.0 * dt;
        }
    }
    Ok((fine.powf(1.0 / p) / norm, coarse.powf(1.0 / p) / norm))
}

/// Boundedness probe for the Strichartz estimate: random smooth data
/// (u₀, u₁) from `seed`, linear flow on [0, T].
pub fn empirical_ratio(
    plan: &TransformPlan,
    pair: &ExponentPair,
    ensemble_size: usize,
    t_end: f64,
    seed: u64,
) -> Result<EmpiricalRatio> {
    if !is_admissible_energy(pair, plan.dim()).energy {
        return Err(Error::Usage(format!(
            "pair (1/p, 1/q) = ({}, {}) is not energy-admissible",
            pair.inv_p, pair.inv_q
        )));
    }
    if ensemble_size < 10 {
        return Err(Error::Usage(format!("ensemble size must be at least 10 (got {ensemble_size})")));
    }
    let fields = random_fields(seed, 2 * ensemble_size, plan.radial());
    let mut best = EmpiricalRatio { ratio: 0.0, ratio_double_stride: 0.0 };
    for pair_fields in fields.chunks_exact(2) {
        let data = StatePair::new(pair_fields[0].clone(), pair_fields[1].clone(), 0.0)?;
        let (a, b) = member_ratio(plan, pair, &data, t_end, PROBE_DT)?;
        if a > best.ratio {
            best = EmpiricalRatio { ratio: a, ratio_double_stride: b };
        }
    }
    Ok(best)
}
