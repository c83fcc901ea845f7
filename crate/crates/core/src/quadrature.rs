//! Gauss–Legendre rules and composite-panel integration.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

/// Gauss–Legendre nodes and weights on [−1, 1], nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess for the i-th largest root.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over [a, b] with this rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Spectral differentiation matrix on the rule's nodes (row-major, n × n),
    /// for the reference interval [−1, 1].
    pub fn differentiation_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let x = &self.nodes;
        let bary: Vec<f64> = (0..n)
            .map(|j| {
                let prod: f64 = (0..n).filter(|&k| k != j).map(|k| x[j] - x[k]).product();
                1.0 / prod
            })
            .collect();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i != j {
                    let v = (bary[j] / bary[i]) / (x[i] - x[j]);
                    d[i * n + j] = v;
                    diag -= v;
                }
            }
            d[i * n + i] = diag;
        }
        d
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive composite integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult {
    pub value: f64,
    /// ∫|f|, used to judge cancellation.
    pub magnitude: f64,
    /// |difference| between the last two refinement levels.
    pub last_change: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

/// Composite Gauss–Legendre over the given panel breakpoints, splitting every
/// panel in two until successive estimates agree to `rel_tol` relative to ∫|f|
/// or the node budget `max_nodes` is exhausted.
///
/// `f` may return several components; convergence is judged on all of them.
pub fn composite_doubling<const K: usize>(
    breaks: &[f64],
    rule: &GaussLegendre,
    rel_tol: f64,
    max_nodes: usize,
    mut f: impl FnMut(f64) -> [f64; K],
) -> [AdaptiveResult; K] {
    assert!(breaks.len() >= 2);
    let mut panels: Vec<f64> = breaks.to_vec();
    let mut prev: Option<[f64; K]> = None;
    loop {
        let mut value = [0.0; K];
        let mut magnitude = [0.0; K];
        for win in panels.windows(2) {
            let (a, b) = (win[0], win[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let vals = f(mid + half * x);
                for c in 0..K {
                    value[c] += w * half * vals[c];
                    magnitude[c] += w * half * vals[c].abs();
                }
            }
        }
        let nodes_used = (panels.len() - 1) * rule.len();
        if let Some(p) = prev {
            let mut done = true;
            let mut changes = [0.0; K];
            for c in 0..K {
                changes[c] = (value[c] - p[c]).abs();
                let scale = magnitude[c].max(f64::MIN_POSITIVE);
                if changes[c] > rel_tol * scale {
                    done = false;
                }
            }
            if done || 2 * nodes_used > max_nodes {
                return core::array::from_fn(|c| AdaptiveResult {
                    value: value[c],
                    magnitude: magnitude[c],
                    last_change: changes[c],
                    nodes_used,
                    converged: done,
                });
            }
        }
        prev = Some(value);
        let mut refined = Vec::with_capacity(2 * panels.len());
        for win in panels.windows(2) {
            refined.push(win[0]);
            refined.push(0.5 * (win[0] + win[1]));
        }
        refined.push(*panels.last().unwrap());
        panels = refined;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 18, 33] {
            let rule = GaussLegendre::new(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
                let want = 1.0 / (deg as f64 + 1.0);
                assert!((got - want).abs() < 1e-14, "n={n} deg={deg}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(17);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..17 {
            assert!((rule.nodes[i] + rule.nodes[16 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn differentiation_matrix_is_exact_on_polynomials() {
        let rule = GaussLegendre::new(12);
        let d = rule.differentiation_matrix();
        let f: Vec<f64> = rule.nodes.iter().map(|x| x.powi(7) - 2.0 * x).collect();
        for i in 0..12 {
            let got: f64 = (0..12).map(|j| d[i * 12 + j] * f[j]).sum();
            let x = rule.nodes[i];
            let want = 7.0 * x.powi(6) - 2.0;
            assert!((got - want).abs() < 1e-11, "{got} vs {want}");
        }
    }

    #[test]
    fn doubling_converges_on_oscillatory_integrand() {
        let rule = GaussLegendre::new(16);
        let [res] = composite_doubling(&[0.0, 1.0, 2.0], &rule, 1e-13, 1 << 16, |x| [(40.0 * x).cos()]);
        assert!(res.converged);
        assert!((res.value - (80.0f64).sin() / 40.0).abs() < 1e-13);
    }
}
