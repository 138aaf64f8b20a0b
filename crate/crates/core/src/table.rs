/// Uniformly sampled real function, read as its piecewise-linear interpolant
/// and taken to be zero outside the sampled interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl FunctionTable {
    pub fn new(start: f64, step: f64, values: Vec<f64>) -> Self {
        assert!(step > 0.0 && values.len() >= 2);
        Self { start, step, values }
    }

    /// Samples `f` on `samples` equally spaced points of `[a, b]`.
    pub fn sample<F: Fn(f64) -> f64>(a: f64, b: f64, samples: usize, f: F) -> Self {
        assert!(samples >= 2 && b > a);
        let step = (b - a) / (samples - 1) as f64;
        let values = (0..samples).map(|i| f(a + i as f64 * step)).collect();
        Self { start: a, step, values }
    }

    /// The C¹ bump `(1 - x²)²` on `[a, b]`, with `x` the centred coordinate.
    pub fn c1_bump(a: f64, b: f64, samples: usize) -> Self {
        let c = 0.5 * (a + b);
        let w = 0.5 * (b - a);
        Self::sample(a, b, samples, |s| {
            let x = (s - c) / w;
            if x.abs() >= 1.0 {
                0.0
            } else {
                (1.0 - x * x).powi(2)
            }
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn eval(&self, s: f64) -> f64 {
        let x = (s - self.start) / self.step;
        if x < 0.0 || x > (self.values.len() - 1) as f64 {
            return 0.0;
        }
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let t = x - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Slope of the interpolant on interval `i`.
    pub fn slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / self.step
    }

    /// Squared L² norm of the interpolant's derivative (exact).
    pub fn derivative_norm2(&self) -> f64 {
        (0..self.values.len() - 1)
            .map(|i| self.slope(i).powi(2) * self.step)
            .sum()
    }

    /// Trapezoid integral of `g(s) * v(s)` over the nodes.
    pub fn trapezoid_with<F: Fn(f64, f64) -> f64>(&self, g: F) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|i| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                w * g(self.node(i), self.values[i])
            })
            .sum::<f64>()
            * self.step
    }

    /// Closed interval outside of which the samples vanish, if any are non-zero.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|v| *v != 0.0)?;
        let last = self.values.iter().rposition(|v| *v != 0.0)?;
        Some((self.node(first.saturating_sub(1)), self.node((last + 1).min(self.values.len() - 1))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bump_derivative_norm_approaches_closed_form() {
        // ‖φ'‖² of (1 - x²)² on [-w, w] is 256 / (105 w).
        let t = FunctionTable::c1_bump(-2.0, 2.0, 20001);
        assert_relative_eq!(t.derivative_norm2(), 256.0 / 210.0, max_relative = 1e-6);
    }

    #[test]
    fn interpolation_is_zero_outside() {
        let t = FunctionTable::sample(0.0, 1.0, 11, |s| s + 1.0);
        assert_eq!(t.eval(-0.1), 0.0);
        assert_eq!(t.eval(1.1), 0.0);
        assert_relative_eq!(t.eval(0.55), 1.55, max_relative = 1e-14);
        assert_relative_eq!(t.eval(1.0), 2.0, max_relative = 1e-14);
    }
}
