use crate::quadrature::simpson_step;
use crate::{CurvatureProfile, Error, Result};

/// Sampled reference curve with its Frenet frame on a uniform arc-length grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrace {
    pub s: Vec<f64>,
    /// Tangent angle, radians.
    pub theta: Vec<f64>,
    pub gamma: Vec<[f64; 2]>,
    /// Unit normals `(-sin θ, cos θ)`.
    pub normal: Vec<[f64; 2]>,
}

impl CurveTrace {
    pub fn step(&self) -> f64 {
        self.s[1] - self.s[0]
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// `Γ(s) + u N(s)` with `Γ` and `N` linearly interpolated.
    pub fn strip_map(&self, s: f64, u: f64) -> Result<[f64; 2]> {
        let lo = self.s[0];
        let hi = self.s[self.s.len() - 1];
        if !(s >= lo && s <= hi) {
            return Err(Error::OutOfRange { s, lo, hi });
        }
        let x = (s - lo) / self.step();
        let i = (x.floor() as usize).min(self.s.len() - 2);
        let t = x - i as f64;
        let lerp = |a: [f64; 2], b: [f64; 2]| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        let g = lerp(self.gamma[i], self.gamma[i + 1]);
        let n = lerp(self.normal[i], self.normal[i + 1]);
        Ok([g[0] + u * n[0], g[1] + u * n[1]])
    }
}

/// Integrates the Frenet equations on `n_s` uniform intervals of `[-S, S]`.
///
/// The tangent angle and the position are accumulated with per-interval
/// Simpson steps (midpoint samples of `k` and of the angle), which is
/// composite Simpson on the half-step grid. The gauge is `Γ(0) = 0`,
/// `θ(0) = 0`.
pub fn reconstruct_curve(profile: &CurvatureProfile, half_length: f64, n_s: usize) -> Result<CurveTrace> {
    if n_s < 2 || !(half_length > 0.0) {
        return Err(Error::InvalidInput(format!("reconstruct_curve needs n_s >= 2 and S > 0, got {n_s}, {half_length}")));
    }
    let h = 2.0 * half_length / n_s as f64;
    let s: Vec<f64> = (0..=n_s).map(|i| -half_length + i as f64 * h).collect();

    let angle_increment = |a: f64, b: f64| {
        let m = 0.5 * (a + b);
        simpson_step(b - a, profile.eval(a), profile.eval(m), profile.eval(b))
    };

    let mut theta = vec![0.0; n_s + 1];
    let mut theta_mid = vec![0.0; n_s];
    for i in 0..n_s {
        theta_mid[i] = theta[i] + angle_increment(s[i], s[i] + 0.5 * h);
        theta[i + 1] = theta[i] + angle_increment(s[i], s[i + 1]);
    }

    let mut gamma = vec![[0.0; 2]; n_s + 1];
    for i in 0..n_s {
        let (c0, c1, c2) = (theta[i].cos(), theta_mid[i].cos(), theta[i + 1].cos());
        let (s0, s1, s2) = (theta[i].sin(), theta_mid[i].sin(), theta[i + 1].sin());
        gamma[i + 1] = [gamma[i][0] + simpson_step(h, c0, c1, c2), gamma[i][1] + simpson_step(h, s0, s1, s2)];
    }

    // Gauge: locate s = 0 inside interval j and integrate from its left node.
    let j = ((half_length / h).floor() as usize).min(n_s - 1);
    let dz = -s[j];
    let (theta0, gamma0) = if dz == 0.0 {
        (theta[j], gamma[j])
    } else {
        let th_mid = theta[j] + angle_increment(s[j], s[j] + 0.5 * dz);
        let th_end = theta[j] + angle_increment(s[j], 0.0);
        let gx = gamma[j][0] + simpson_step(dz, theta[j].cos(), th_mid.cos(), th_end.cos());
        let gy = gamma[j][1] + simpson_step(dz, theta[j].sin(), th_mid.sin(), th_end.sin());
        (th_end, [gx, gy])
    };

    // Rotate so that θ(0) = 0, then translate so that Γ(0) = 0.
    let (sn, cs) = (-theta0).sin_cos();
    let rotate = |p: [f64; 2]| [cs * p[0] - sn * p[1], sn * p[0] + cs * p[1]];
    let g0 = rotate(gamma0);
    let gamma: Vec<[f64; 2]> = gamma
        .into_iter()
        .map(|p| {
            let r = rotate(p);
            [r[0] - g0[0], r[1] - g0[1]]
        })
        .collect();
    let theta: Vec<f64> = theta.into_iter().map(|t| t - theta0).collect();
    let normal = theta.iter().map(|t| [-t.sin(), t.cos()]).collect();
    Ok(CurveTrace { s, theta, gamma, normal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn straight_line() {
        let tr = reconstruct_curve(&CurvatureProfile::zero(), 5.0, 10).unwrap();
        for i in 0..tr.len() {
            assert_relative_eq!(tr.gamma[i][0], tr.s[i], epsilon = 1e-14);
            assert_eq!(tr.gamma[i][1], 0.0);
            assert_eq!(tr.normal[i], [-0.0f64.sin(), 1.0]);
        }
        assert_eq!(tr.strip_map(2.0, 0.3).unwrap(), [2.0, 0.3]);
    }

    #[test]
    fn normals_are_orthogonal_to_tangents() {
        let p = CurvatureProfile::bump(0.8, 0.3, 1.5, 2).unwrap();
        let tr = reconstruct_curve(&p, 4.0, 101).unwrap();
        for (t, n) in tr.theta.iter().zip(&tr.normal) {
            assert_eq!(n[0] * t.cos() + n[1] * t.sin(), 0.0);
        }
        // Odd n_s: the gauge point is interior to an interval, so only the
        // chord interpolation error (h² k / 8) remains.
        let g = tr.strip_map(0.0, 0.0).unwrap();
        assert!(g[0].abs() < 1e-3 && g[1].abs() < 1e-3);
        let even = reconstruct_curve(&p, 4.0, 100).unwrap();
        assert_eq!(even.gamma[50], [0.0, 0.0]);
        assert_eq!(even.theta[50], 0.0);
    }

    #[test]
    fn out_of_range() {
        let tr = reconstruct_curve(&CurvatureProfile::zero(), 1.0, 4).unwrap();
        assert!(matches!(tr.strip_map(1.5, 0.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn rejects_degenerate_grid() {
        assert!(reconstruct_curve(&CurvatureProfile::zero(), 1.0, 1).is_err());
        assert!(reconstruct_curve(&CurvatureProfile::zero(), 0.0, 4).is_err());
    }
}
