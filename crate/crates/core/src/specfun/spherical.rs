use crate::quadrature::{composite_doubling, GaussLegendre};
use crate::{Dimension, Error, Result};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

/// Above this value of λ·r plain quadrature of the spherical-function
/// integrals is reported as low-confidence.
pub const OSCILLATION_LIMIT: f64 = 500.0;

const REL_TOL: f64 = 1e-13;
const MAX_NODES: usize = 1 << 16;
const PANEL_NODES: usize = 16;

/// A quadrature evaluation of Φ_λ(r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalEval {
    pub lambda: f64,
    pub r: f64,
    pub value: f64,
    /// The imaginary part of the quadrature, zero up to discretisation error.
    pub imag_residual: f64,
    /// Set when λ·r exceeds [`OSCILLATION_LIMIT`] or refinement hit the node cap.
    pub low_confidence: bool,
}

fn check_args(lambda: f64, r: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("spherical function needs finite λ ≥ 0 (got {lambda})")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("spherical function needs finite r ≥ 0 (got {r})")));
    }
    Ok(())
}

fn rule() -> GaussLegendre {
    GaussLegendre::new(PANEL_NODES)
}

/// Φ_λ(r) from the θ-integral
///
/// ```text
/// Φ_λ(r) = c_n ∫_0^π (cosh r − sinh r cos θ)^{−iλ−ρ} sin^{n−2}θ dθ
/// ```
///
/// by composite Gauss–Legendre with panel doubling. For large r the integrand
/// concentrates in a layer of width ~e^{−r} at θ = 0, so the initial panels
/// are graded geometrically towards the origin.
pub fn spherical_fn(lambda: f64, r: f64, dim: Dimension) -> Result<SphericalEval> {
    check_args(lambda, r)?;
    if r == 0.0 {
        return Ok(SphericalEval { lambda, r, value: 1.0, imag_residual: 0.0, low_confidence: false });
    }
    let rho = dim.rho_f64();
    let power = dim.n() as i32 - 2;
    let sinh_r = r.sinh();
    let exp_mr = (-r).exp();

    let mut breaks: Vec<f64> = Vec::new();
    breaks.push(0.0);
    let mut b = 2.0 * exp_mr;
    while b < 0.5 {
        breaks.push(b);
        b *= 2.0;
    }
    let start = *breaks.last().unwrap();
    let uniform = ((PI - start) / 0.5).ceil().max(1.0) as usize;
    for k in 1..=uniform {
        breaks.push(start + (PI - start) * k as f64 / uniform as f64);
    }

    let [re, im] = composite_doubling(&breaks, &rule(), REL_TOL, MAX_NODES, |theta| {
        let s = (0.5 * theta).sin();
        // cosh r − sinh r cos θ, written without cancellation.
        let x = exp_mr + 2.0 * sinh_r * s * s;
        let ln_x = x.ln();
        let mag = (-rho * ln_x).exp() * theta.sin().powi(power);
        let phase = lambda * ln_x;
        [mag * phase.cos(), -mag * phase.sin()]
    });
    let c = dim.theta_prefactor();
    Ok(SphericalEval {
        lambda,
        r,
        value: c * re.value,
        imag_residual: c * im.value,
        low_confidence: lambda * r > OSCILLATION_LIMIT || !re.converged || !im.converged,
    })
}

/// Φ_λ(r) from the u-integral, valid for r > 0:
///
/// ```text
/// Φ_λ(r) = 2^{(n−3)/2} c_n sinh^{2−n}(r) ∫_{−r}^{r} (cosh r − cosh u)^{(n−3)/2} e^{−iλu} du
/// ```
///
/// The substitution u = r cos φ removes the endpoint square-root singularity
/// in even dimensions; the resulting smooth integrand on [0, π] is handled by
/// composite Gauss–Legendre with panel doubling.
pub fn spherical_fn_alt(lambda: f64, r: f64, dim: Dimension) -> Result<f64> {
    check_args(lambda, r)?;
    if r == 0.0 {
        return Err(Error::domain("the u-integral representation needs r > 0"));
    }
    let exponent = 0.5 * (dim.n() as f64 - 3.0);
    let panels = ((lambda * r) / 6.0).ceil().max(2.0) as usize;
    let breaks: Vec<f64> = (0..=panels).map(|k| PI * k as f64 / panels as f64).collect();
    let n = dim.n();
    let [res] = composite_doubling(&breaks, &rule(), REL_TOL, MAX_NODES, |phi| {
        let (s, c) = (0.5 * phi).sin_cos();
        let u = r * phi.cos();
        let gap = 2.0 * (r * c * c).sinh() * (r * s * s).sinh();
        let weight = match n {
            3 => 1.0,
            4 => gap.sqrt(),
            _ => gap.powf(exponent),
        };
        [weight * r * phi.sin() * (lambda * u).cos()]
    });
    let pref = 2f64.powf(exponent) * dim.theta_prefactor();
    Ok(pref * res.value / r.sinh().powi(n as i32 - 2))
}

/// The three-dimensional closed form sin(λr) / (λ sinh r), with its limits.
pub fn spherical_fn_3d(lambda: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    let radial = if lambda == 0.0 { r } else { (lambda * r).sin() / lambda };
    radial / r.sinh()
}

/// Five-dimensional closed form
/// 3 [sin(λr) cosh r − λ cos(λr) sinh r] / (λ (1 + λ²) sinh³ r).
/// Loses digits for r·max(1, λ) ≪ 1; callers switch to the series there.
fn closed_form_5d(lambda: f64, r: f64) -> f64 {
    let (sh, ch) = (r.sinh(), r.cosh());
    let (s, c) = (lambda * r).sin_cos();
    let sin_over = if lambda == 0.0 { r } else { s / lambda };
    3.0 * (sin_over * ch - c * sh) / ((1.0 + lambda * lambda) * sh * sh * sh)
}

/// Hypergeometric series Φ_λ(r) = ₂F₁(ρ + iλ, ρ − iλ; n/2; −sinh²(r/2)).
///
/// Converges for sinh(r/2) < 1; intended for small r where the closed forms
/// cancel.
pub fn spherical_series(lambda: f64, r: f64, dim: Dimension) -> Result<f64> {
    check_args(lambda, r)?;
    let sh = (0.5 * r).sinh();
    let z = -sh * sh;
    if z <= -1.0 {
        return Err(Error::domain(format!("series for Φ_λ(r) diverges at r = {r}")));
    }
    let rho = dim.rho_f64();
    let half_n = 0.5 * dim.n() as f64;
    let l2 = lambda * lambda;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..2000 {
        let kf = k as f64;
        term *= ((rho + kf) * (rho + kf) + l2) / ((kf + 1.0) * (kf + half_n)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 2 {
            return Ok(sum);
        }
    }
    Err(Error::domain(format!("series for Φ_λ(r) did not converge at λ = {lambda}, r = {r}")))
}

/// Fills `out[j] = Φ_{λ_j}(r)` on the midpoint grid λ_j = (j + ½)·`delta`.
///
/// n = 3 and n = 5 use closed forms (with the series near r = 0 for n = 5).
/// n = 4 uses the u-integral with u = r cos φ and the trapezoid rule in φ,
/// which is spectrally accurate because the transformed integrand extends to
/// a smooth even periodic function; cos(λ_j u) is generated by the Chebyshev
/// recurrence in j, reseeded every 32 steps.
pub fn kernel_row(dim: Dimension, r: f64, delta: f64, out: &mut [f64]) {
    let lambda = |j: usize| (j as f64 + 0.5) * delta;
    match dim.n() {
        3 => {
            for (j, o) in out.iter_mut().enumerate() {
                *o = spherical_fn_3d(lambda(j), r);
            }
        }
        5 => {
            for (j, o) in out.iter_mut().enumerate() {
                let l = lambda(j);
                *o = if r * l.max(1.0) < 0.5 {
                    spherical_series(l, r, dim).expect("small r is inside the series domain")
                } else {
                    closed_form_5d(l, r)
                };
            }
        }
        _ => kernel_row_4d(r, delta, out),
    }
}

fn kernel_row_4d(r: f64, delta: f64, out: &mut [f64]) {
    const RESEED: usize = 32;
    if r == 0.0 {
        out.fill(1.0);
        return;
    }
    let lambda_max = delta * out.len() as f64;
    let intervals = (0.6 * (lambda_max + 1.0) * r).ceil() as usize + 64;
    let h = PI / intervals as f64;
    // Nodes with u ≥ 0; the mirror node −u has the same cos(λu) and weight.
    let mut us = Vec::with_capacity(intervals / 2 + 1);
    let mut ws = Vec::with_capacity(intervals / 2 + 1);
    for k in 1..=intervals / 2 {
        let phi = k as f64 * h;
        let (s, c) = (0.5 * phi).sin_cos();
        let gap = 2.0 * (r * c * c).sinh() * (r * s * s).sinh();
        let mirror = if 2 * k == intervals { 1.0 } else { 2.0 };
        us.push(r * phi.cos());
        ws.push(mirror * h * gap.sqrt() * r * phi.sin());
    }
    let sh = r.sinh();
    let pref = core::f64::consts::SQRT_2 * (2.0 / PI) / (sh * sh);
    for w in ws.iter_mut() {
        *w *= pref;
    }

    let mut cur: Vec<f64> = alloc::vec![0.0; us.len()];
    let mut prev: Vec<f64> = alloc::vec![0.0; us.len()];
    let two_cos: Vec<f64> = us.iter().map(|u| 2.0 * (delta * u).cos()).collect();
    for (j, o) in out.iter_mut().enumerate() {
        if j % RESEED == 0 {
            let l = (j as f64 + 0.5) * delta;
            for ((c, p), u) in cur.iter_mut().zip(prev.iter_mut()).zip(&us) {
                *c = (l * u).cos();
                *p = ((l - delta) * u).cos();
            }
        } else {
            for ((c, p), t) in cur.iter_mut().zip(prev.iter_mut()).zip(&two_cos) {
                let next = t * *c - *p;
                *p = *c;
                *c = next;
            }
        }
        *o = crate::linalg::dot(&ws, &cur);
    }
}
