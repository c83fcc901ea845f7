mod common;

use common::*;
use hyperwave_core::ensemble::random_fields;
use hyperwave_core::evolve::{StatePair, Zeta};
use hyperwave_core::functionals::*;
use hyperwave_core::transform::RadialGrid;
use hyperwave_core::{Dimension, Error};
use std::sync::Arc;

#[test]
fn sobolev_zero_order_is_l2() {
    for d in Dimension::all() {
        let p = plan(d);
        for f in random_fields(31, 5, p.radial()) {
            let s = sobolev_norm(p, &f, 0.0, 0.0).unwrap();
            assert!((s / lq_norm(&f, 2.0).unwrap() - 1.0).abs() < 1e-8);
        }
    }
    let p = plan(Dimension::THREE);
    assert!(matches!(sobolev_norm(p, &p.radial().zeros(), 0.0, 1.5), Err(Error::Domain(_))));
}

#[test]
fn h01_spectral_matches_gradient_form_oracle() {
    for d in Dimension::all() {
        let p = plan(d);
        let rho = d.rho_f64();
        let f = |r: f64| (-(r - 1.0) * (r - 1.0)).exp() + (-(r + 1.0) * (r + 1.0)).exp();
        let field = p.radial().sample(f);
        let spectral = sobolev_norm(p, &field, 0.0, 1.0).unwrap().powi(2);
        // Finite-difference gradient, Simpson in r.
        let oracle = simpson(0.0, 30.0, 200_000, |r| {
            let df = d1(&f, r, 1e-4);
            (df * df - rho * rho * f(r) * f(r)) * hyperwave_core::specfun::volume_weight(r, d)
        });
        assert!((spectral / oracle - 1.0).abs() < 1e-4, "{d}: {spectral} vs {oracle}");
        let grad = h01_gradient_form_sq(&field);
        assert!((grad / oracle - 1.0).abs() < 1e-4);
    }
}

#[test]
fn sobolev_monotone_in_gamma() {
    let d = Dimension::FIVE;
    let p = plan(d);
    let lmax = p.spectral().lambda_max();
    for f in random_fields(8, 5, p.radial()) {
        let lo = sobolev_norm(p, &f, 0.0, 0.5).unwrap();
        let hi = sobolev_norm(p, &f, 0.0, 1.2).unwrap();
        assert!(hi <= lo * lmax.powf(0.7) * (1.0 + 1e-12));
    }
}

#[test]
fn sobolev_embedding_constant_is_finite() {
    for d in Dimension::all() {
        let p = plan(d);
        let q = 2.0 * d.n() as f64 / (d.n() as f64 - 2.0);
        let c = random_fields(12, 20, p.radial())
            .iter()
            .map(|f| lq_norm(f, q).unwrap() / sobolev_norm(p, f, 0.0, 1.0).unwrap())
            .fold(0.0, f64::max);
        assert!(c.is_finite() && c > 0.0, "{d}: C = {c}");
    }
}

#[test]
fn lq_norm_is_homogeneous() {
    let p = plan(Dimension::FOUR);
    let f = &random_fields(2, 1, p.radial())[0];
    for q in [1.0, 2.0, 3.0, 10.0 / 3.0, 6.0] {
        let a = lq_norm(&f.scaled(-2.5), q).unwrap();
        assert!((a / (2.5 * lq_norm(f, q).unwrap()) - 1.0).abs() < 1e-13);
    }
}

#[test]
fn energy_of_zero_state_and_signs() {
    let d = Dimension::THREE;
    let p = plan(d);
    let zero = gaussian_state(p, 0.0);
    assert_eq!(energy(p, &zero, Zeta::Focusing).unwrap(), EnergyBreakdown::default());
    let s = gaussian_state(p, 1.3);
    let e = energy(p, &s, Zeta::Defocusing).unwrap();
    assert!(e.total >= e.kinetic.max(e.elastic) && e.kinetic.max(e.elastic) >= 0.0);
    assert_eq!(e.total, e.kinetic + e.elastic + e.potential);
}

#[test]
fn focusing_energy_turns_negative_under_doubling() {
    for d in Dimension::all() {
        let p = plan(d);
        let mut a = 0.25;
        let mut found = None;
        for _ in 0..12 {
            if energy(p, &gaussian_state(p, a), Zeta::Focusing).unwrap().total < 0.0 {
                found = Some(a);
                break;
            }
            a *= 2.0;
        }
        assert!(found.is_some(), "{d}: no negative-energy amplitude found");
    }
}

#[test]
fn y_norm_is_additive_over_intervals() {
    let p = plan(Dimension::THREE);
    let fs = random_fields(4, 3, p.radial());
    let mut whole = YNormAccumulator::new(Dimension::THREE);
    let mut first = YNormAccumulator::new(Dimension::THREE);
    let mut second = YNormAccumulator::new(Dimension::THREE);
    for (k, f) in fs.iter().enumerate() {
        whole.accumulate(f, 0.1).unwrap();
        if k < 2 {
            first.accumulate(f, 0.1).unwrap()
        } else {
            second.accumulate(f, 0.1).unwrap()
        }
    }
    let lhs = whole.y_norm().powf(whole.p_c);
    let rhs = first.y_norm().powf(5.0) + second.y_norm().powf(5.0);
    assert!((lhs / rhs - 1.0).abs() < 1e-12);
    let acc = y_norm_accumulate(YNormAccumulator::new(Dimension::THREE), &fs[0], 1.0).unwrap();
    assert!(acc.value > 0.0);
}

#[test]
fn pointwise_ratio_is_scale_invariant() {
    for d in Dimension::all() {
        let p = plan(d);
        for f in random_fields(10, 4, p.radial()) {
            let a = pointwise_bound_ratio(&f).unwrap();
            let b = pointwise_bound_ratio(&f.scaled(-7.0)).unwrap();
            assert!(a.is_finite() && (a / b - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn extremal_family_norm_is_bounded() {
    for d in Dimension::all() {
        let g = Arc::new(RadialGrid::with_panels(d, 20.0, 0.025, 16).unwrap());
        let norms: Vec<f64> = [0.2, 1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|&rb| h01_gradient_form_sq(&extremal_family(rb, &g).unwrap()).sqrt())
            .collect();
        let c = norms.iter().cloned().fold(0.0, f64::max);
        assert!(c.is_finite() && norms.iter().all(|&n| n > 0.0), "{d}: {norms:?}");
    }
}

#[test]
fn morawetz_accumulator_budget() {
    let mut acc = MorawetzAccumulator::new(Dimension::FOUR, 2.0);
    assert_eq!(acc.budget, 8.0);
    acc.accumulate(3.0, 0.0, 1.0);
    acc.accumulate(4.0, 0.0, 1.0);
    assert!(acc.within_budget(1e-3) && acc.is_nondecreasing());
    acc.accumulate(1.1, 0.0, 1.0);
    assert!(!acc.within_budget(1e-3));
}

#[test]
fn state_pair_rejects_mixed_grids() {
    let p = plan(Dimension::THREE);
    let other = Arc::new(RadialGrid::new(Dimension::THREE, 20.0, 512).unwrap());
    assert!(StatePair::new(p.radial().zeros(), other.zeros(), 0.0).is_err());
}
