use crate::{Error, Rational, Result};
use alloc::format;
use core::f64::consts::PI;

/// Spatial dimension of H^n together with the derived constants ρ and p_c.
///
/// Only n ∈ {3, 4, 5} is supported: that is the range in which the
/// energy-critical problem has the local theory the harness relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension {
    n: u32,
}

impl Dimension {
    pub const THREE: Dimension = Dimension { n: 3 };
    pub const FOUR: Dimension = Dimension { n: 4 };
    pub const FIVE: Dimension = Dimension { n: 5 };

    pub fn new(n: u32) -> Result<Self> {
        match n {
            3..=5 => Ok(Dimension { n }),
            _ => Err(Error::Domain(format!("n must be 3, 4, or 5 (got {n})"))),
        }
    }

    pub const fn n(self) -> u32 {
        self.n
    }

    /// ρ = (n − 1)/2.
    pub fn rho(self) -> Rational {
        Rational::new(self.n as i64 - 1, 2)
    }

    /// p_c = 1 + 4/(n − 2) = (n + 2)/(n − 2).
    pub fn p_c(self) -> Rational {
        Rational::new(self.n as i64 + 2, self.n as i64 - 2)
    }

    pub fn rho_f64(self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }

    pub fn p_c_f64(self) -> f64 {
        (self.n as f64 + 2.0) / (self.n as f64 - 2.0)
    }

    /// Area of the unit sphere S^{n−1}, 2π^{n/2}/Γ(n/2).
    pub fn sphere_area(self) -> f64 {
        match self.n {
            3 => 4.0 * PI,
            4 => 2.0 * PI * PI,
            _ => 8.0 * PI * PI / 3.0,
        }
    }

    /// Γ(n/2) / (√π Γ((n−1)/2)), the normalisation of the θ-integral for Φ_λ.
    pub(crate) fn theta_prefactor(self) -> f64 {
        match self.n {
            3 => 0.5,
            4 => 2.0 / PI,
            _ => 0.75,
        }
    }

    pub fn all() -> [Dimension; 3] {
        [Self::THREE, Self::FOUR, Self::FIVE]
    }
}

impl core::fmt::Display for Dimension {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "H^{}", self.n)
    }
}
