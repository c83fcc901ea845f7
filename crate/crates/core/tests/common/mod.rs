#![allow(dead_code)]

use hyperwave_core::evolve::StatePair;
use hyperwave_core::transform::{default_plan, TransformPlan};
use hyperwave_core::Dimension;
use std::sync::OnceLock;

pub fn plan(dim: Dimension) -> &'static TransformPlan {
    static PLANS: [OnceLock<TransformPlan>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    PLANS[dim.n() as usize - 3].get_or_init(|| default_plan(dim).unwrap())
}

pub fn gaussian_state(plan: &TransformPlan, amp: f64) -> StatePair {
    let g = plan.radial();
    StatePair::new(g.sample(|r| amp * (-r * r).exp()), g.zeros(), 0.0).unwrap()
}

/// Composite Simpson rule with `intervals` (even) subintervals.
pub fn simpson(a: f64, b: f64, intervals: usize, f: impl Fn(f64) -> f64) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Central difference with step `h`.
pub fn d1(f: &impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
    (f(r + h) - f(r - h)) / (2.0 * h)
}

pub fn d2(f: &impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
    (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)
}

/// Relative L² distance of `a` from `b` under the grid measure.
pub fn rel_l2(measure: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).zip(measure).map(|((x, y), m)| (x - y).powi(2) * m).sum();
    let den: f64 = b.iter().zip(measure).map(|(y, m)| y * y * m).sum();
    (num / den).sqrt()
}

/// Three-dimensional transform of e^{−r²} through the sine-transform
/// reduction: 4π/λ · ∫_0^∞ e^{−r²} sinh r sin(λr) dr.
pub fn gaussian_transform_3d(lambda: f64) -> f64 {
    let pi = std::f64::consts::PI;
    4.0 * pi / lambda * (pi.sqrt() / 2.0) * ((1.0 - lambda * lambda) / 4.0).exp() * (lambda / 2.0).sin()
}
