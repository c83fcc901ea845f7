//! Spectral simulation of the energy-critical shifted wave equation
//!
//! ```text
//! ∂²u/∂t² − (Δ + ρ²) u = ζ |u|^{p_c − 1} u    on H^n,  n ∈ {3, 4, 5}
//! ```
//!
//! restricted to radial data, together with the functionals needed to check
//! its conservation law, Morawetz budget, radial pointwise bound and
//! scattering behaviour, and exact exponent arithmetic for the Strichartz
//! admissibility regions.
//!
//! The crate is `no_std` and only needs an allocator. Everything that touches
//! files, the command line or threads lives in the `hyperwave` crate.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`specfun`] | log-gamma, Plancherel density, spherical functions, volume weight |
//! | [`transform`] | radial/spectral grids, the dense transform plan, multipliers |
//! | [`evolve`] | exact linear flow, Strang splitting step, trajectories, pullback |
//! | [`functionals`] | norms, energy, Morawetz and Y-norm accumulators, pointwise bound |
//! | [`strichartz`] | admissible exponent regions in exact rational arithmetic |
//! | [`ensemble`] | seeded random smooth radial data |
#![no_std]
// `num_traits::Float` supplies f64 math without std; when std is linked into
// the build its inherent methods take over and the imports look unused.
#![allow(unused_imports)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod dimension;
pub mod ensemble;
mod error;
pub mod evolve;
pub mod functionals;
mod linalg;
pub mod quadrature;
pub mod specfun;
pub mod strichartz;
pub mod transform;

pub use dimension::Dimension;
pub use error::{Error, Result};
pub use num_rational::Ratio;

/// Exact rational used for exponents and region arithmetic.
pub type Rational = Ratio<i64>;
