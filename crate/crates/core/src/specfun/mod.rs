//! Special functions of radial harmonic analysis on H^n.
//!
//! * [`ln_gamma`]: complex log-gamma (Stirling series with upward recursion)
//! * [`gamma_ratio_sq`], [`plancherel_density`]: |c(λ)|⁻² up to a constant
//! * [`spherical_fn`], [`spherical_fn_alt`]: Φ_λ(r) from its two integral
//!   representations, plus closed forms and a power series used to build
//!   transform kernels
//! * [`volume_weight`]: ω_{n−1} sinh^{n−1} r
//!
//! All functions are pure and allocation-free apart from quadrature scratch.

mod gamma;
mod spherical;

pub use gamma::{gamma_ratio_sq, ln_gamma, plancherel_density};
pub use spherical::{
    kernel_row, spherical_fn, spherical_fn_3d, spherical_fn_alt, spherical_series, SphericalEval, OSCILLATION_LIMIT,
};

use crate::Dimension;
use num_traits::Float;

/// ω_{n−1} sinh^{n−1}(r): ∫_{H^n} f dμ = ∫_0^∞ f(r) volume_weight(r) dr for radial f.
pub fn volume_weight(r: f64, dim: Dimension) -> f64 {
    dim.sphere_area() * r.sinh().powi(dim.n() as i32 - 1)
}
