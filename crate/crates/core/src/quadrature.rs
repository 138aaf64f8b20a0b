//! Fixed-rule quadratures shared by the geometry, bound and trial modules.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes come from Newton iteration on the Legendre recurrence, started at
/// the Chebyshev-like guess `cos(pi (i + 3/4) / (n + 1/2))`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
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
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

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

/// Composite Gauss–Legendre rule with `panels` equal panels of `order` points.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl GaussRule {
    pub fn new(order: usize, panels: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights, panels: panels.max(1) }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if b <= a {
            return 0.0;
        }
        let width = (b - a) / self.panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..self.panels {
            let mid = a + (p as f64 + 0.5) * width;
            let mut acc = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc += w * f(mid + half * x);
            }
            total += acc * half;
        }
        total
    }

    /// Integrates piece by piece between consecutive sorted breakpoints.
    pub fn integrate_pieces<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks.windows(2).map(|w| self.integrate(w[0], w[1], &mut f)).sum()
    }
}

/// Weights of the composite Simpson rule on `intervals` equal intervals of
/// width `h`. `intervals` must be even.
pub fn simpson_weights(intervals: usize, h: f64) -> Vec<f64> {
    assert!(intervals >= 2 && intervals % 2 == 0, "Simpson needs an even interval count");
    let mut w = vec![0.0; intervals + 1];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        } * h
            / 3.0;
    }
    w
}

/// Composite Simpson integral of `f` over `[a, b]`.
pub fn simpson<F: FnMut(f64) -> f64>(a: f64, b: f64, intervals: usize, mut f: F) -> f64 {
    let n = if intervals % 2 == 1 { intervals + 1 } else { intervals.max(2) };
    let h = (b - a) / n as f64;
    simpson_weights(n, h)
        .iter()
        .enumerate()
        .map(|(i, w)| w * f(a + i as f64 * h))
        .sum()
}

/// Single-interval Simpson estimate using the midpoint value.
#[inline]
pub fn simpson_step(h: f64, f0: f64, fmid: f64, f1: f64) -> f64 {
    h * (f0 + 4.0 * fmid + f1) / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_rule_is_exact_for_high_degree_polynomials() {
        let (x, w) = gauss_legendre(10);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert_relative_eq!(integral, 2.0 / 19.0, max_relative = 1e-13);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn simpson_converges_at_fourth_order() {
        let exact = 1.0 - (1.0f64).cos();
        let e1 = (simpson(0.0, 1.0, 8, f64::sin) - exact).abs();
        let e2 = (simpson(0.0, 1.0, 16, f64::sin) - exact).abs();
        assert!(e1 / e2 > 15.0 && e1 / e2 < 17.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn composite_gauss_matches_closed_form() {
        let rule = GaussRule::new(8, 4);
        let v = rule.integrate(0.0, PI, |x| x.sin().powi(2));
        assert_relative_eq!(v, PI / 2.0, max_relative = 1e-12);
    }
}
