use std::f64::consts::PI;

use crate::quadrature::GaussRule;
use crate::{Error, Result};

/// Where a profile can be non-zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Empty,
    Interval(f64, f64),
    Unbounded,
}

impl Support {
    fn hull(self, other: Support) -> Support {
        match (self, other) {
            (Support::Empty, s) | (s, Support::Empty) => s,
            (Support::Unbounded, _) | (_, Support::Unbounded) => Support::Unbounded,
            (Support::Interval(a, b), Support::Interval(c, d)) => Support::Interval(a.min(c), b.max(d)),
        }
    }

    pub fn contains(&self, s: f64) -> bool {
        match *self {
            Support::Empty => false,
            Support::Interval(a, b) => s >= a && s <= b,
            Support::Unbounded => true,
        }
    }
}

/// Metadata derived once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileMeta {
    pub support: Support,
    /// Supremum of `max(0, k)`; exact for primitives, an upper bound for
    /// sums with overlapping supports.
    pub sup_kplus: f64,
    /// Supremum of `max(0, -k)`, same caveat as `sup_kplus`.
    pub sup_kminus: f64,
    pub decays_at_infinity: bool,
    pub integrable: bool,
}

/// The closed set of curvature shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Zero,
    /// `amplitude * (1 - x²)^order` for `|x| < 1`, `x = (s - center) / half_width`.
    Bump { amplitude: f64, center: f64, half_width: f64, order: u32 },
    /// Linear interpolation between knots, extended by the end values.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// `amplitude * cos(2π s / period)`.
    PeriodicCosine { amplitude: f64, period: f64 },
    Scaled { beta: f64, base: Box<CurvatureProfile> },
    Sum(Vec<CurvatureProfile>),
}

/// Symbolic curvature `k(s)` of a unit-speed plane curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    kind: ProfileKind,
    meta: ProfileMeta,
}

/// Integral summaries of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileStats {
    /// Total bending angle `∫ k`.
    pub alpha: f64,
    pub l1_norm: f64,
    pub sup_kplus: f64,
    pub sup_kminus: f64,
    pub support: Support,
    /// Half-width of the support interval.
    pub s0: f64,
}

/// `∫_{-1}^{1} (1 - x²)^p dx = 2^{2p+1} (p!)² / (2p+1)!`.
pub fn bump_shape_integral(order: u32) -> f64 {
    let p = order as i32;
    let mut v = 2.0;
    // Ratio form avoids factorial overflow.
    for j in 1..=p {
        v *= (2 * j) as f64 / (2 * j + 1) as f64;
    }
    v
}

impl CurvatureProfile {
    pub fn zero() -> Self {
        Self::from_kind(ProfileKind::Zero)
    }

    pub fn bump(amplitude: f64, center: f64, half_width: f64, order: u32) -> Result<Self> {
        if !(half_width > 0.0) || order == 0 || !amplitude.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bump needs half_width > 0 and order >= 1, got {half_width}, {order}"
            )));
        }
        Ok(Self::from_kind(ProfileKind::Bump { amplitude, center, half_width, order }))
    }

    /// Bump whose total integral is `alpha`.
    pub fn bump_with_angle(alpha: f64, center: f64, half_width: f64, order: u32) -> Result<Self> {
        if !(half_width > 0.0) || order == 0 {
            return Err(Error::InvalidInput("bump needs half_width > 0 and order >= 1".into()));
        }
        let amplitude = alpha / (half_width * bump_shape_integral(order));
        Self::bump(amplitude, center, half_width, order)
    }

    pub fn piecewise_linear(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidInput("piecewise-linear profile needs knots".into()));
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput("knot positions must be distinct".into()));
        }
        if knots.iter().any(|(s, k)| !s.is_finite() || !k.is_finite()) {
            return Err(Error::InvalidInput("knots must be finite".into()));
        }
        Ok(Self::from_kind(ProfileKind::PiecewiseLinear { knots }))
    }

    pub fn periodic_cosine(amplitude: f64, period: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::InvalidInput("period must be positive".into()));
        }
        Ok(Self::from_kind(ProfileKind::PeriodicCosine { amplitude, period }))
    }

    pub fn scaled(beta: f64, base: CurvatureProfile) -> Self {
        Self::from_kind(ProfileKind::Scaled { beta, base: Box::new(base) })
    }

    pub fn sum(parts: Vec<CurvatureProfile>) -> Self {
        Self::from_kind(ProfileKind::Sum(parts))
    }

    fn from_kind(kind: ProfileKind) -> Self {
        let meta = compute_meta(&kind);
        Self { kind, meta }
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn meta(&self) -> &ProfileMeta {
        &self.meta
    }

    pub fn is_zero(&self) -> bool {
        self.meta.sup_kplus == 0.0 && self.meta.sup_kminus == 0.0
    }

    /// Point evaluation of `k(s)`.
    pub fn eval(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::Zero => 0.0,
            ProfileKind::Bump { amplitude, center, half_width, order } => {
                let x = (s - center) / half_width;
                if x.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - x * x).powi(*order as i32)
                }
            }
            ProfileKind::PiecewiseLinear { knots } => eval_piecewise(knots, s),
            ProfileKind::PeriodicCosine { amplitude, period } => amplitude * (2.0 * PI * s / period).cos(),
            ProfileKind::Scaled { beta, base } => beta * base.eval(s),
            ProfileKind::Sum(parts) => parts.iter().map(|p| p.eval(s)).sum(),
        }
    }

    /// Curvature of the mirrored parametrization `s ↦ k(-s)`.
    pub fn reflected(&self) -> Self {
        let kind = match &self.kind {
            ProfileKind::Zero => ProfileKind::Zero,
            ProfileKind::Bump { amplitude, center, half_width, order } => ProfileKind::Bump {
                amplitude: *amplitude,
                center: -center,
                half_width: *half_width,
                order: *order,
            },
            ProfileKind::PiecewiseLinear { knots } => {
                let mut k: Vec<_> = knots.iter().map(|(s, v)| (-s, *v)).collect();
                k.reverse();
                ProfileKind::PiecewiseLinear { knots: k }
            }
            ProfileKind::PeriodicCosine { amplitude, period } => {
                ProfileKind::PeriodicCosine { amplitude: *amplitude, period: *period }
            }
            ProfileKind::Scaled { beta, base } => {
                ProfileKind::Scaled { beta: *beta, base: Box::new(base.reflected()) }
            }
            ProfileKind::Sum(parts) => ProfileKind::Sum(parts.iter().map(|p| p.reflected()).collect()),
        };
        Self::from_kind(kind)
    }

    /// The profile `-k`.
    pub fn negated(&self) -> Self {
        Self::scaled(-1.0, self.clone())
    }

    /// Points where the profile may fail to be smooth, sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match &self.kind {
            ProfileKind::Zero | ProfileKind::PeriodicCosine { .. } => {}
            ProfileKind::Bump { center, half_width, .. } => {
                out.push(center - half_width);
                out.push(center + half_width);
            }
            ProfileKind::PiecewiseLinear { knots } => out.extend(knots.iter().map(|k| k.0)),
            ProfileKind::Scaled { base, .. } => base.collect_breakpoints(out),
            ProfileKind::Sum(parts) => parts.iter().for_each(|p| p.collect_breakpoints(out)),
        }
    }

    /// Integrates `g(k(s))` over `[a, b]` piecewise between breakpoints.
    pub fn integrate_over<G: Fn(f64) -> f64>(&self, a: f64, b: f64, g: G) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut breaks = vec![a];
        breaks.extend(self.breakpoints().into_iter().filter(|x| *x > a && *x < b));
        breaks.push(b);
        let rule = match self.kind {
            ProfileKind::PeriodicCosine { .. } => GaussRule::new(16, 64),
            _ => GaussRule::new(16, 8),
        };
        rule.integrate_pieces(&breaks, |s| g(self.eval(s)))
    }

    /// `∫ g(k)` over the support; errors for unbounded supports.
    pub fn integrate_support<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        match self.meta.support {
            Support::Empty => Ok(0.0),
            Support::Interval(a, b) => Ok(self.integrate_over(a, b, g)),
            Support::Unbounded => Err(Error::NonIntegrable),
        }
    }

    /// Closed-form `∫ k` where available.
    fn alpha(&self) -> Result<f64> {
        if !self.meta.integrable {
            return Err(Error::NonIntegrable);
        }
        Ok(match &self.kind {
            ProfileKind::Zero => 0.0,
            ProfileKind::Bump { amplitude, half_width, order, .. } => {
                amplitude * half_width * bump_shape_integral(*order)
            }
            ProfileKind::PiecewiseLinear { knots } => {
                knots.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum()
            }
            ProfileKind::PeriodicCosine { .. } => return Err(Error::NonIntegrable),
            ProfileKind::Scaled { beta, base } => beta * base.alpha()?,
            ProfileKind::Sum(parts) => {
                let mut acc = 0.0;
                for p in parts {
                    acc += p.alpha()?;
                }
                acc
            }
        })
    }

    fn l1_norm(&self) -> Result<f64> {
        if !self.meta.integrable {
            return Err(Error::NonIntegrable);
        }
        Ok(match &self.kind {
            ProfileKind::Zero => 0.0,
            ProfileKind::Bump { amplitude, half_width, order, .. } => {
                amplitude.abs() * half_width * bump_shape_integral(*order)
            }
            ProfileKind::PiecewiseLinear { knots } => knots.windows(2).map(|w| segment_l1(w[0], w[1])).sum(),
            ProfileKind::PeriodicCosine { .. } => return Err(Error::NonIntegrable),
            ProfileKind::Scaled { beta, base } => beta.abs() * base.l1_norm()?,
            ProfileKind::Sum(parts) => {
                if supports_disjoint(parts) {
                    let mut acc = 0.0;
                    for p in parts {
                        acc += p.l1_norm()?;
                    }
                    acc
                } else {
                    self.integrate_support(f64::abs)?
                }
            }
        })
    }

    /// `α`, `‖k‖₁`, sup-norms and the support half-width.
    pub fn stats(&self) -> Result<ProfileStats> {
        let alpha = self.alpha()?;
        let l1_norm = self.l1_norm()?;
        let s0 = match self.meta.support {
            Support::Interval(a, b) => 0.5 * (b - a),
            Support::Empty => 0.0,
            Support::Unbounded => return Err(Error::NonIntegrable),
        };
        Ok(ProfileStats {
            alpha,
            l1_norm,
            sup_kplus: self.meta.sup_kplus,
            sup_kminus: self.meta.sup_kminus,
            support: self.meta.support,
            s0,
        })
    }

    /// Squared L² norm, by quadrature.
    pub fn l2_norm2(&self) -> Result<f64> {
        self.integrate_support(|k| k * k)
    }
}

fn eval_piecewise(knots: &[(f64, f64)], s: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if s <= first.0 {
        return first.1;
    }
    if s >= last.0 {
        return last.1;
    }
    let idx = knots.partition_point(|k| k.0 <= s);
    let (s0, k0) = knots[idx - 1];
    let (s1, k1) = knots[idx];
    let t = (s - s0) / (s1 - s0);
    k0 + t * (k1 - k0)
}

fn segment_l1(a: (f64, f64), b: (f64, f64)) -> f64 {
    let len = b.0 - a.0;
    if a.1 * b.1 >= 0.0 {
        0.5 * (a.1.abs() + b.1.abs()) * len
    } else {
        // Linear segment crossing zero: two triangles.
        let t = a.1.abs() / (a.1.abs() + b.1.abs());
        0.5 * len * (a.1.abs() * t + b.1.abs() * (1.0 - t))
    }
}

fn supports_disjoint(parts: &[CurvatureProfile]) -> bool {
    let mut intervals = Vec::new();
    for p in parts {
        match p.meta.support {
            Support::Empty => {}
            Support::Interval(a, b) => intervals.push((a, b)),
            Support::Unbounded => return false,
        }
    }
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Touching endpoints are fine: every compact primitive vanishes there.
    intervals.windows(2).all(|w| w[1].0 >= w[0].1)
}

fn compute_meta(kind: &ProfileKind) -> ProfileMeta {
    match kind {
        ProfileKind::Zero => ProfileMeta {
            support: Support::Empty,
            sup_kplus: 0.0,
            sup_kminus: 0.0,
            decays_at_infinity: true,
            integrable: true,
        },
        ProfileKind::Bump { amplitude, center, half_width, .. } => ProfileMeta {
            support: if *amplitude == 0.0 {
                Support::Empty
            } else {
                Support::Interval(center - half_width, center + half_width)
            },
            sup_kplus: amplitude.max(0.0),
            sup_kminus: (-amplitude).max(0.0),
            decays_at_infinity: true,
            integrable: true,
        },
        ProfileKind::PiecewiseLinear { knots } => {
            let sup_kplus = knots.iter().map(|k| k.1).fold(0.0, f64::max);
            let sup_kminus = knots.iter().map(|k| -k.1).fold(0.0, f64::max);
            let ends_zero = knots[0].1 == 0.0 && knots[knots.len() - 1].1 == 0.0;
            let support = if !ends_zero {
                Support::Unbounded
            } else {
                match (knots.iter().position(|k| k.1 != 0.0), knots.iter().rposition(|k| k.1 != 0.0)) {
                    (Some(a), Some(b)) => Support::Interval(knots[a - 1].0, knots[b + 1].0),
                    _ => Support::Empty,
                }
            };
            ProfileMeta {
                support,
                sup_kplus,
                sup_kminus,
                decays_at_infinity: ends_zero,
                integrable: ends_zero,
            }
        }
        ProfileKind::PeriodicCosine { amplitude, .. } => ProfileMeta {
            support: if *amplitude == 0.0 { Support::Empty } else { Support::Unbounded },
            sup_kplus: amplitude.abs(),
            sup_kminus: amplitude.abs(),
            decays_at_infinity: *amplitude == 0.0,
            integrable: *amplitude == 0.0,
        },
        ProfileKind::Scaled { beta, base } => {
            let m = base.meta;
            let (plus, minus) = if *beta >= 0.0 {
                (beta * m.sup_kplus, beta * m.sup_kminus)
            } else {
                (-beta * m.sup_kminus, -beta * m.sup_kplus)
            };
            ProfileMeta {
                support: if *beta == 0.0 { Support::Empty } else { m.support },
                sup_kplus: plus,
                sup_kminus: minus,
                decays_at_infinity: m.decays_at_infinity || *beta == 0.0,
                integrable: m.integrable || *beta == 0.0,
            }
        }
        ProfileKind::Sum(parts) => {
            let disjoint = supports_disjoint(parts);
            let combine = |f: fn(&ProfileMeta) -> f64| -> f64 {
                let vals = parts.iter().map(|p| f(&p.meta));
                if disjoint {
                    vals.fold(0.0, f64::max)
                } else {
                    vals.sum()
                }
            };
            ProfileMeta {
                support: parts.iter().fold(Support::Empty, |acc, p| acc.hull(p.meta.support)),
                sup_kplus: combine(|m| m.sup_kplus),
                sup_kminus: combine(|m| m.sup_kminus),
                decays_at_infinity: parts.iter().all(|p| p.meta.decays_at_infinity),
                integrable: parts.iter().all(|p| p.meta.integrable),
            }
        }
    }
}
