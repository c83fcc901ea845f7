//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --release --test acceptance`.

mod common;

use common::{rel_l2, simpson};
use hyperwave_core::ensemble::{random_bumps, random_fields, symmetric_gaussian, Bump, BUMPS};
use hyperwave_core::evolve::*;
use hyperwave_core::functionals::*;
use hyperwave_core::specfun::*;
use hyperwave_core::strichartz::*;
use hyperwave_core::transform::*;
use hyperwave_core::{Dimension, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Plans([TransformPlan; 3]);

impl Plans {
    fn get(&self, d: Dimension) -> &TransformPlan {
        &self.0[d.n() as usize - 3]
    }
}

/// Builds the default plans and checks them against a 20-member ensemble.
fn transform_fidelity(plans: &mut Option<Plans>) -> Outcome {
    let start = Instant::now();
    let built: Vec<TransformPlan> =
        Dimension::all().iter().map(|&d| default_plan(d)).collect::<Result<_, _>>().map_err(err)?;
    let mut worst = 0.0f64;
    for p in &built {
        let m = p.radial().measure();
        for f in random_fields(2024, 20, p.radial()) {
            let ft = p.forward(&f).map_err(err)?;
            let back = p.inverse(&ft).map_err(err)?;
            let plancherel = (p.spectral_inner(&ft, &ft).map_err(err)? / f.inner(&f).map_err(err)? - 1.0).abs();
            worst = worst.max(rel_l2(m, &back.values, &f.values)).max(plancherel);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    *plans = Some(Plans(built.try_into().map_err(|_| "plan count".to_string())?));
    ensure(worst <= 1e-8, || format!("worst residual {worst:.2e} > 1e-8"))?;
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("worst roundtrip/Plancherel residual {worst:.2e}, {secs:.1} s"))
}

fn sine_oracle(member: &[Bump; BUMPS], lambda: f64) -> f64 {
    let f = |r: f64| member.iter().map(|b| b.eval(r)).sum::<f64>() * r.sinh() * (lambda * r).sin();
    4.0 * PI / lambda * simpson(0.0, 30.0, 60_000, f)
}

fn three_dim_oracle(plans: &Plans) -> Outcome {
    let p = plans.get(Dimension::THREE);
    let mut worst = 0.0f64;
    for member in random_bumps(77, 3) {
        let f = p.radial().sample(|r| member.iter().map(|b| b.eval(r)).sum());
        let ft = p.forward(&f).map_err(err)?;
        let peak = ft.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for j in (0..ft.values.len()).step_by(41) {
            let want = sine_oracle(&member, p.spectral().nodes()[j]);
            worst = worst.max((ft.values[j] - want).abs() / peak);
        }
    }
    ensure(worst <= 1e-8, || format!("sine-transform mismatch {worst:.2e}"))?;
    let c = p.c_norm();
    let c_err = (c * 2.0 * PI * PI - 1.0).abs();
    ensure(c_err <= 1e-6, || format!("c_norm {c} vs 1/(2π²): {c_err:.2e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut rep = 0.0f64;
    for d in Dimension::all() {
        for _ in 0..100 {
            let r = rng.random_range(0.01..20.0);
            let l = rng.random_range(0.0..(OSCILLATION_LIMIT / r).min(40.0));
            let a = spherical_fn(l, r, d).map_err(err)?.value;
            let b = spherical_fn_alt(l, r, d).map_err(err)?;
            rep = rep.max((a - b).abs());
        }
    }
    ensure(rep <= 1e-9, || format!("representations differ by {rep:.2e}"))?;
    Ok(format!("sine oracle {worst:.2e}, c_norm err {c_err:.1e}, Φ representations {rep:.2e}"))
}

fn log_space(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| (a.ln() + (b.ln() - a.ln()) * k as f64 / (n - 1) as f64).exp())
}

fn density_identities() -> Outcome {
    let mut worst = 0.0f64;
    for l in log_space(1e-3, 1e3, 500) {
        let want = [l * l, l * (l * l + 0.25) * (PI * l).tanh(), l * l * (l * l + 1.0)];
        for (d, w) in Dimension::all().into_iter().zip(want) {
            worst = worst.max((plancherel_density(l, d).map_err(err)? / w - 1.0).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("closed-form mismatch {worst:.2e}"))?;
    let mut out = format!("closed forms {worst:.1e}; K =");
    for d in Dimension::all() {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for l in log_space(0.01, 100.0, 1000) {
            let ratio = plancherel_density(l, d).map_err(err)? / (l * l * (1.0 + l).powi(d.n() as i32 - 3));
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        ensure(hi.is_finite() && lo > 0.0, || format!("{d}: ratio range [{lo}, {hi}]"))?;
        write!(out, " {hi:.3} (min {lo:.3})").unwrap();
    }
    Ok(out)
}

fn linear_flow(plans: &Plans) -> Outcome {
    let (mut drift, mut reversal, mut group) = (0.0f64, 0.0f64, 0.0f64);
    for d in Dimension::all() {
        let p = plans.get(d);
        let fs = random_fields(99, 2, p.radial());
        let s = SpectralState::from_radial(p, &StatePair::new(fs[0].clone(), fs[1].clone(), 0.0).map_err(err)?)
            .map_err(err)?;
        let e0 = s.linear_energy(p);
        let norm = s.energy_norm(p);
        for k in 0..=500 {
            drift = drift.max((s.rotated(0.1 * k as f64).linear_energy(p) / e0 - 1.0).abs());
        }
        reversal = reversal.max(s.rotated(50.0).rotated(-50.0).distance(&s, p) / norm);
        for (a, b) in [(13.0, 37.0), (-25.0, 40.0), (0.3, 49.7)] {
            group = group.max(s.rotated(a).rotated(b).distance(&s.rotated(a + b), p) / norm);
        }
        // Radial round trip through the physical grid.
        let there = linear_propagate(p, &s.to_radial(p).map_err(err)?, 2.0).map_err(err)?;
        let back = linear_propagate(p, &there, -2.0).map_err(err)?;
        let orig = s.to_radial(p).map_err(err)?;
        reversal = reversal.max(rel_l2(p.radial().measure(), &back.u.values, &orig.u.values));
    }
    ensure(drift <= 1e-10, || format!("energy drift {drift:.2e}"))?;
    ensure(reversal <= 1e-8 && group <= 1e-8, || format!("reversal {reversal:.2e}, group {group:.2e}"))?;
    Ok(format!("drift {drift:.1e}, reversal {reversal:.1e}, group law {group:.1e}"))
}

fn gaussian(p: &TransformPlan, amp: f64) -> Result<StatePair, String> {
    let g = p.radial();
    StatePair::new(g.sample(|r| amp * (-r * r).exp()), g.zeros(), 0.0).map_err(err)
}

fn run(p: &TransformPlan, data: &StatePair, zeta: Zeta, h: f64, t_end: f64) -> Result<Trajectory, String> {
    evolve(p, data, &EvolveConfig::new(zeta, h, t_end), &mut []).map_err(err)
}

fn nonlinear_integrator(plans: &Plans) -> Outcome {
    let mut out = String::new();
    for d in Dimension::all() {
        let p = plans.get(d);
        let data = gaussian(p, 1.0)?;
        for zeta in [Zeta::Focusing, Zeta::Defocusing] {
            let t = 2.0;
            let reference = run(p, &data, zeta, 0.1 / 16.0, t)?.final_state;
            let e1 = run(p, &data, zeta, 0.1, t)?.final_state.distance(&reference, p);
            let e2 = run(p, &data, zeta, 0.05, t)?.final_state.distance(&reference, p);
            let order = (e1 / e2).log2();
            let d1 = run(p, &data, zeta, 0.02, 10.0)?.energy_drift();
            let d2 = run(p, &data, zeta, 0.01, 10.0)?.energy_drift();
            let drift_order = (d1 / d2).log2();
            let tag = format!("{d} ζ={zeta}");
            ensure((1.8..=2.2).contains(&order), || format!("{tag}: order {order:.3}"))?;
            ensure(d2 < 1e-4, || format!("{tag}: drift {d2:.2e}"))?;
            ensure((1.8..=2.2).contains(&drift_order), || format!("{tag}: drift order {drift_order:.3}"))?;
            write!(out, "{tag}: order {order:.2}, drift {d2:.1e} (order {drift_order:.2}); ").unwrap();
        }
    }
    Ok(out.trim_end_matches("; ").to_string())
}

/// (amplitude, centre, width, velocity amplitude) of the defocusing suite.
const DEFOCUSING_SUITE: [(f64, f64, f64, f64); 5] =
    [(1.0, 0.0, 1.0, 0.0), (2.0, 0.0, 0.7, 0.0), (0.8, 2.0, 1.0, 0.0), (1.5, 1.0, 0.6, 0.0), (1.0, 0.5, 0.8, 1.0)];

fn suite_data(p: &TransformPlan, (a, c, w, v): (f64, f64, f64, f64)) -> Result<StatePair, String> {
    let g = p.radial();
    StatePair::new(g.sample(|r| symmetric_gaussian(a, c, w, r)), g.sample(|r| symmetric_gaussian(v, c, w, r)), 0.0)
        .map_err(err)
}

fn defocusing_runs(plans: &Plans) -> Result<Vec<(Dimension, Trajectory, f64)>, String> {
    let mut runs = Vec::new();
    for d in Dimension::all() {
        for cfg in DEFOCUSING_SUITE {
            let p = plans.get(d);
            let start = Instant::now();
            let traj = run(p, &suite_data(p, cfg)?, Zeta::Defocusing, 0.02, 40.0)?;
            runs.push((d, traj, start.elapsed().as_secs_f64()));
        }
    }
    Ok(runs)
}

fn morawetz_budget(runs: &[(Dimension, Trajectory, f64)]) -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for (k, (d, traj, secs)) in runs.iter().enumerate() {
        let tag = format!("{d} config {}", k % 5);
        ensure(!traj.blew_up(), || format!("{tag} blew up"))?;
        let m = &traj.morawetz;
        ensure(m.within_budget(1e-3), || format!("{tag}: {:.4} > {:.4}", m.value, m.budget))?;
        ensure(m.is_nondecreasing(), || format!("{tag}: Morawetz integral decreased"))?;
        ensure(*secs < 180.0, || format!("{tag}: {secs:.0} s"))?;
        worst = worst.max(m.value / m.budget);
        slowest = slowest.max(*secs);
    }
    Ok(format!("max integral/(n·E) {worst:.3} over {} runs, slowest {slowest:.1} s", runs.len()))
}

fn small_data_constant(p: &TransformPlan) -> Result<f64, String> {
    let mut c = 0.0f64;
    for amp in [0.05, 0.1, 0.2] {
        let data = gaussian(p, amp)?;
        let traj = run(p, &data, Zeta::Focusing, 0.05, 20.0)?;
        let verdict = scattering_detect(p, &traj, EPS_SCAT);
        ensure(matches!(verdict, ScatteringVerdict::Scattered(_)), || {
            format!("{} focusing amplitude {amp} did not scatter", p.dim())
        })?;
        let norm = SpectralState::from_radial(p, &data).map_err(err)?.energy_norm(p);
        c = c.max(traj.y_norm.y_norm() / norm);
    }
    Ok(c)
}

fn scattering(plans: &Plans, runs: &[(Dimension, Trajectory, f64)]) -> Outcome {
    let mut worst = 0.0f64;
    for (k, (d, traj, _)) in runs.iter().enumerate() {
        let p = plans.get(*d);
        let scale = 1.0 + traj.initial_energy.total.abs().sqrt();
        let verdict = scattering_detect(p, traj, EPS_SCAT);
        ensure(matches!(verdict, ScatteringVerdict::Scattered(_)), || format!("{d} config {} undecided", k % 5))?;
        let last = *pullback_increments(p, traj).last().unwrap();
        worst = worst.max(last / scale);
    }
    let (mut coarse, mut fine) = (0.0f64, 0.0f64);
    for d in Dimension::all() {
        coarse = coarse.max(small_data_constant(plans.get(d))?);
        let refined = make_plan(d, DEFAULT_R_MAX, 1536, 48.0, 1536).map_err(err)?;
        fine = fine.max(small_data_constant(&refined)?);
    }
    let shift = (fine / coarse - 1.0).abs();
    ensure(shift <= 0.2, || format!("small-data C {coarse:.4} vs refined {fine:.4}"))?;
    Ok(format!(
        "15 defocusing runs scattered (max increment/(1+√E) {worst:.1e}); small-data C = {coarse:.4}, refined {fine:.4}"
    ))
}

fn pointwise_constant(ensemble_nodes: usize, panel_width: f64) -> Result<(f64, f64), String> {
    let (mut c, mut norm_c) = (0.0f64, 0.0f64);
    for d in Dimension::all() {
        let g = Arc::new(RadialGrid::new(d, DEFAULT_R_MAX, ensemble_nodes).map_err(err)?);
        for f in random_fields(11, 50, &g) {
            c = c.max(pointwise_bound_ratio(&f).map_err(err)?);
        }
        let fine = Arc::new(RadialGrid::with_panels(d, 20.0, panel_width, 16).map_err(err)?);
        for rb in [0.2, 1.0, 2.0, 5.0, 10.0] {
            let f = extremal_family(rb, &fine).map_err(err)?;
            c = c.max(pointwise_bound_ratio(&f).map_err(err)?);
            norm_c = norm_c.max(h01_gradient_form_sq(&f).sqrt());
        }
    }
    Ok((c, norm_c))
}

fn pointwise_bound() -> Outcome {
    let (c, norm) = pointwise_constant(DEFAULT_NODES, 0.025)?;
    let (c_fine, norm_fine) = pointwise_constant(1536, 0.0125)?;
    ensure(c.is_finite() && (c_fine / c - 1.0).abs() <= 0.1, || format!("C {c:.4} vs refined {c_fine:.4}"))?;
    ensure(norm.is_finite() && (norm_fine / norm - 1.0).abs() <= 0.1, || {
        format!("f_R norm bound {norm:.3} vs {norm_fine:.3}")
    })?;
    let (c1, c2) = (0.2, 2.0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for d in Dimension::all() {
        for rb in [0.2, 1.0, 2.0, 5.0, 10.0] {
            let s = saturation_ratio(rb, d);
            lo = lo.min(s);
            hi = hi.max(s);
        }
    }
    ensure(c1 <= lo && hi <= c2, || format!("saturation range [{lo:.4}, {hi:.4}] outside [{c1}, {c2}]"))?;
    Ok(format!(
        "C = {c:.4} (refined {c_fine:.4}); ‖f_R‖ ≤ {norm:.2} (refined {norm_fine:.2}); saturation in [{lo:.3}, {hi:.3}]"
    ))
}

fn region_arithmetic() -> Outcome {
    let mut checked = 0usize;
    for d in Dimension::all() {
        let n = d.n() as i64;
        for i in 1..=128i64 {
            for j in 1..=128i64 {
                let pair = ExponentPair::new(Rational::new(i, 256), Rational::new(j, 257)).map_err(err)?;
                let rep = is_admissible_energy(&pair, d);
                let classical = 4 * 257 * i + 2 * (n - 1) * 256 * j >= (n - 1) * 256 * 257;
                let line = 2 * 257 * i + 2 * n * 256 * j;
                let energy = i < 128 && line >= (n - 2) * 256 * 257;
                ensure(rep.classical == classical && rep.energy == energy, || {
                    format!("{d} mismatch at ({i}/256, {j}/257)")
                })?;
                ensure(rep.boundary_case == (line == (n - 2) * 256 * 257), || {
                    format!("{d} boundary flag at ({i}, {j})")
                })?;
                checked += 1;
            }
        }
        let segs = region_boundary(d, 64).map_err(err)?;
        let line = &segs.iter().find(|s| s.region == Region::Energy && s.segment_id == 0).unwrap().points;
        let nr = Rational::from_integer(n);
        let want = [(Rational::new(0, 1), (nr - 2) / (nr * 2)), (Rational::new(1, 2), (nr - 3) / (nr * 2))];
        for v in want {
            ensure(line.contains(&v), || format!("{d}: vertex ({}, {}) missing", v.0, v.1))?;
        }
        for &(ip, iq) in &line[1..line.len() - 1] {
            let rep = is_admissible_energy(&ExponentPair::new(ip, iq).map_err(err)?, d);
            ensure(rep.boundary_case && rep.energy, || format!("{d}: ({ip}, {iq}) not on the boundary"))?;
        }
        ensure(segs.iter().any(|s| s.region == Region::SobolevPoint && s.points == [sobolev_point(d)]), || {
            format!("{d}: Sobolev point missing")
        })?;
    }
    Ok(format!("{checked} lattice points agree; vertices exact"))
}

fn exponent_identity() -> Outcome {
    let mut out = String::new();
    for d in Dimension::all() {
        let (lhs, rhs) = interpolation_exponent_identity(d);
        ensure(lhs == rhs, || format!("{d}: {lhs} ≠ {rhs}"))?;
        write!(out, "{d}: {lhs}; ").unwrap();
    }
    Ok(out.trim_end_matches("; ").to_string())
}

fn main() {
    let mut plans = None;
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |k: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = match &outcome {
            Ok(s) | Err(s) => s.clone(),
        };
        println!("criterion {k:>2} {name:<24} {status}  {detail}  [{:.1} s]", start.elapsed().as_secs_f64());
        results.push((k, name, outcome));
    };
    record(1, "transform fidelity", &mut || transform_fidelity(&mut plans));
    let Some(plans) = plans else {
        println!("plans could not be built; remaining criteria skipped");
        std::process::exit(1);
    };
    record(2, "3D oracle", &mut || three_dim_oracle(&plans));
    record(3, "density identities", &mut density_identities);
    record(4, "linear flow", &mut || linear_flow(&plans));
    record(5, "nonlinear integrator", &mut || nonlinear_integrator(&plans));
    let runs = defocusing_runs(&plans);
    record(6, "Morawetz budget", &mut || morawetz_budget(runs.as_ref().map_err(Clone::clone)?));
    record(7, "scattering", &mut || scattering(&plans, runs.as_ref().map_err(Clone::clone)?));
    record(8, "pointwise radial bound", &mut pointwise_bound);
    record(9, "region arithmetic", &mut region_arithmetic);
    record(10, "exponent identity", &mut exponent_identity);
    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
