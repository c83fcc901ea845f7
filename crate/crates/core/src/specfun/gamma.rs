use crate::{Dimension, Error, Rational, Result};
use alloc::format;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::{Float, ToPrimitive};

/// B_{2k} / (2k (2k − 1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Threshold on |z| above which the Stirling series is used directly.
const STIRLING_MIN_MODULUS: f64 = 17.0;

/// ln Γ(z) for complex z off the non-positive real axis.
///
/// Uses the reflection formula for Re z < 1/2, upward recursion until
/// |z| ≥ 17, then ten terms of the Stirling series. The real part (which is
/// ln|Γ(z)|) is accurate to roughly 1e−14 relative; the imaginary part is a
/// continuous branch but not necessarily the principal one.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_MIN_MODULUS {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// ln sin(πz), factoring out the exponentially large part when |Im z| is big.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if z.im.abs() < 20.0 {
        (z * PI).sin().ln()
    } else if z.im > 0.0 {
        -i * PI * z + (1.0 - (2.0 * i * PI * z).exp()).ln() + Complex64::new(0.0, 0.5).ln()
    } else {
        i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln() + Complex64::new(0.0, -0.5).ln()
    }
}

/// |Γ(iλ + ρ)|² / |Γ(iλ + 1)|², the λ-dependent factor of |c(λ)|⁻² beyond λ².
///
/// Integer ρ uses the exact product Π_{k=1}^{ρ−1} (λ² + k²); other ρ go
/// through [`ln_gamma`].
pub fn gamma_ratio_sq(lambda: f64, rho: Rational) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("gamma_ratio_sq needs λ > 0 (got {lambda})")));
    }
    if rho <= Rational::from_integer(0) {
        return Err(Error::domain("gamma_ratio_sq needs ρ > 0"));
    }
    if rho.is_integer() {
        let top = rho.to_integer();
        let l2 = lambda * lambda;
        return Ok((1..top).map(|k| l2 + (k * k) as f64).product());
    }
    let rho = rho.to_f64().expect("finite rational");
    let num = ln_gamma(Complex64::new(rho, lambda)).re;
    let den = ln_gamma(Complex64::new(1.0, lambda)).re;
    Ok((2.0 * (num - den)).exp())
}

/// λ² · gamma_ratio_sq(λ, ρ): the Plancherel density |c(λ)|⁻² without its
/// dimensional constant, which is absorbed into the transform calibration.
pub fn plancherel_density(lambda: f64, dim: Dimension) -> Result<f64> {
    Ok(lambda * lambda * gamma_ratio_sq(lambda, dim.rho())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ln cosh x without overflow.
    fn ln_cosh(x: f64) -> f64 {
        let a = x.abs();
        a + (-2.0 * a).exp().ln_1p() - core::f64::consts::LN_2
    }

    fn ln_sinh(x: f64) -> f64 {
        let a = x.abs();
        a + (-(-2.0 * a).exp()).ln_1p() - core::f64::consts::LN_2
    }

    #[test]
    fn ln_gamma_real_axis() {
        let cases = [(1.0, 0.0), (2.0, 0.0), (0.5, 0.5 * PI.ln()), (5.0, 24f64.ln()), (10.5, 13.940625219403763)];
        for (x, want) in cases {
            let got = ln_gamma(Complex64::new(x, 0.0)).re;
            assert!((got - want).abs() < 1e-13, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn ln_gamma_reflection_identities() {
        // |Γ(1/2 + iλ)|² = π / cosh(πλ),  |Γ(iλ)|² = π / (λ sinh(πλ)).
        for lambda in [1e-3, 0.1, 0.7, 3.0, 12.5, 80.0, 700.0] {
            let half = 2.0 * ln_gamma(Complex64::new(0.5, lambda)).re;
            let want = PI.ln() - ln_cosh(PI * lambda);
            assert!((half - want).abs() < 1e-12 * (1.0 + want.abs()), "λ={lambda}");
            let imag = 2.0 * ln_gamma(Complex64::new(0.0, lambda)).re;
            let want = PI.ln() - lambda.ln() - ln_sinh(PI * lambda);
            assert!((imag - want).abs() < 1e-12 * (1.0 + want.abs()), "λ={lambda}");
        }
    }

    #[test]
    fn ratio_rho_one_is_one() {
        for lambda in [1e-3, 1.0, 42.0] {
            assert_eq!(gamma_ratio_sq(lambda, Rational::from_integer(1)).unwrap(), 1.0);
        }
    }

    #[test]
    fn ratio_rho_two_matches_recursion_through_log_gamma() {
        for lambda in [0.01, 0.5, 2.0, 17.0, 300.0] {
            let exact = gamma_ratio_sq(lambda, Rational::from_integer(2)).unwrap();
            assert_eq!(exact, lambda * lambda + 1.0);
            let via_lgamma =
                (2.0 * (ln_gamma(Complex64::new(2.0, lambda)).re - ln_gamma(Complex64::new(1.0, lambda)).re)).exp();
            assert!((via_lgamma / exact - 1.0).abs() < 1e-12, "λ={lambda}");
        }
    }

    #[test]
    fn ratio_rho_three_halves_matches_reflection_closed_form() {
        for lambda in [1e-3, 0.01, 0.3, 1.0, 5.0, 50.0, 1000.0] {
            let got = gamma_ratio_sq(lambda, Rational::new(3, 2)).unwrap();
            let want = (lambda * lambda + 0.25) * (PI * lambda).tanh() / lambda;
            assert!((got / want - 1.0).abs() < 1e-11, "λ={lambda}: {got} vs {want}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(gamma_ratio_sq(0.0, Rational::from_integer(1)), Err(Error::Domain(_))));
        assert!(matches!(gamma_ratio_sq(-1.0, Rational::new(3, 2)), Err(Error::Domain(_))));
        assert!(plancherel_density(f64::NAN, Dimension::FOUR).is_err());
    }

    #[test]
    fn density_scaling_three_dimensions() {
        for lambda in [0.01, 0.37, 5.0] {
            let a = plancherel_density(lambda, Dimension::THREE).unwrap();
            let b = plancherel_density(2.0 * lambda, Dimension::THREE).unwrap();
            assert_eq!(b / a, 4.0);
        }
    }
}
