use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::stepfn::StepFunction;

/// Grid size for the gauge invariant checks.
pub const GAUGE_GRID: usize = 1024;
pub const CONCAVITY_TOL: f64 = 1e-12;

/// `a = e^{e^2}`, the smallest round choice keeping `ln ln ln(a/u) > 0` on `(0,1]`.
pub fn default_psi_parameter() -> f64 {
    std::f64::consts::E.powi(2).exp()
}

/// Increasing concave `φ` on `[0,1]` with `φ(0) = 0`.
#[derive(Clone, Debug)]
pub enum ConcaveGauge {
    /// `t^α`, `α ∈ (0,1]`.
    Power(Scalar),
    /// `u ln(e/u) / ln ln ln(a/u)`.
    TripleLog(f64),
    /// `∫_0^t density`, density non-increasing and nonnegative.
    Tabulated(Tabulated),
}

#[derive(Clone, Debug)]
pub struct Tabulated {
    density: StepFunction,
    label: String,
    right: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Tabulated {
    pub fn density(&self) -> &StepFunction {
        &self.density
    }

    fn eval_f64(&self, t: f64) -> f64 {
        let i = self.right.partition_point(|&r| r < t);
        if i >= self.right.len() {
            return *self.cumulative.last().unwrap_or(&0.0);
        }
        let (left, before) = if i == 0 {
            (0.0, 0.0)
        } else {
            (self.right[i - 1], self.cumulative[i - 1])
        };
        before + self.density.pieces()[i].val.to_f64() * (t - left)
    }
}

impl ConcaveGauge {
    pub fn power(alpha: Scalar) -> Result<Self> {
        if !alpha.is_positive() || alpha.cmp_num(&Scalar::one()) == std::cmp::Ordering::Greater {
            return Err(Error::InvalidArgument(format!("power exponent {alpha} outside (0,1]")));
        }
        Ok(ConcaveGauge::Power(alpha))
    }

    pub fn triple_log(a: f64) -> Result<Self> {
        if !(a > std::f64::consts::E.exp()) {
            return Err(Error::InvalidArgument(format!("triple-log parameter {a} must exceed e^e")));
        }
        Ok(ConcaveGauge::TripleLog(a))
    }

    /// Gauge `t ↦ ∫_0^t density`; the density must be nonnegative and
    /// non-increasing (which makes the gauge concave).
    pub fn tabulated(density: StepFunction, label: impl Into<String>) -> Result<Self> {
        if !density.is_nonnegative() || !density.is_non_increasing() {
            return Err(Error::InvalidArgument(
                "tabulated density must be nonnegative and non-increasing".into(),
            ));
        }
        if density.pieces().iter().all(|p| p.val.is_zero()) {
            return Err(Error::InvalidArgument("tabulated density vanishes".into()));
        }
        let mut right = Vec::with_capacity(density.pieces().len());
        let mut cumulative = Vec::with_capacity(density.pieces().len());
        let (mut r, mut c) = (0.0, 0.0);
        for p in density.pieces() {
            let len = p.len.to_f64();
            r += len;
            c += len * p.val.to_f64();
            right.push(r);
            cumulative.push(c);
        }
        Ok(ConcaveGauge::Tabulated(Tabulated {
            density,
            label: label.into(),
            right,
            cumulative,
        }))
    }

    /// `φ(t)`, exact when the gauge has a rational closed form at `t`.
    pub fn eval(&self, t: &Scalar) -> Result<Scalar> {
        if t.is_negative() || t.cmp_num(&Scalar::one()) == std::cmp::Ordering::Greater {
            return Err(Error::InvalidArgument(format!("gauge argument {t} outside [0,1]")));
        }
        if t.is_zero() {
            return Ok(Scalar::zero());
        }
        Ok(match (self, t) {
            (ConcaveGauge::Power(alpha), Scalar::Exact(r)) => match alpha.as_exact() {
                Some(a) if a.is_one() => Scalar::Exact(r.clone()),
                Some(a) => exact_root(r, a).map_or_else(|| Scalar::Approx(self.eval_f64(t.to_f64())), Scalar::Exact),
                None => Scalar::Approx(self.eval_f64(t.to_f64())),
            },
            (ConcaveGauge::Tabulated(tab), Scalar::Exact(_)) if tab.density.is_exact() => {
                tab.density.partial_integral(t)?
            }
            _ => Scalar::Approx(self.eval_f64(t.to_f64())),
        })
    }

    /// Fast inexact evaluation; `t` is clamped to `[0,1]`.
    pub fn eval_f64(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        if t == 0.0 {
            return 0.0;
        }
        match self {
            ConcaveGauge::Power(alpha) => {
                let a = alpha.to_f64();
                if a == 1.0 {
                    t
                } else {
                    t.powf(a)
                }
            }
            ConcaveGauge::TripleLog(a) => t * (1.0 - t.ln()) / (a / t).ln().ln().ln(),
            ConcaveGauge::Tabulated(tab) => tab.eval_f64(t),
        }
    }

    /// `φ(0) = 0`, strict increase and midpoint concavity on the dyadic grid
    /// `j / 1024`.
    pub fn check_invariants(&self) -> Result<()> {
        let v: Vec<f64> = (0..=GAUGE_GRID)
            .map(|j| self.eval_f64(j as f64 / GAUGE_GRID as f64))
            .collect();
        if v[0] != 0.0 {
            return Err(Error::InvalidArgument(format!("{self}: φ(0) = {} != 0", v[0])));
        }
        for j in 1..=GAUGE_GRID {
            if !(v[j] > v[j - 1]) {
                return Err(Error::InvalidArgument(format!(
                    "{self}: not strictly increasing at t = {j}/{GAUGE_GRID}"
                )));
            }
        }
        for j in 1..GAUGE_GRID {
            if v[j] < (v[j - 1] + v[j + 1]) / 2.0 - CONCAVITY_TOL {
                return Err(Error::InvalidArgument(format!(
                    "{self}: midpoint concavity fails at t = {j}/{GAUGE_GRID}"
                )));
            }
        }
        Ok(())
    }
}

/// `r^a` when it is rational (for `a = p/q`, `r` must be a perfect `q`-th power).
fn exact_root(r: &BigRational, a: &BigRational) -> Option<BigRational> {
    use num_traits::ToPrimitive;
    let q = a.denom().to_u32()?;
    let p = a.numer().to_u32()?;
    let root = |n: &BigInt| -> Option<BigInt> {
        let c = n.nth_root(q);
        (c.pow(q) == *n).then_some(c)
    };
    let num = root(r.numer())?;
    let den = root(r.denom())?;
    Some(BigRational::new(num.pow(p), den.pow(p)))
}

impl fmt::Display for ConcaveGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcaveGauge::Power(a) => write!(f, "power:{a}"),
            ConcaveGauge::TripleLog(a) => write!(f, "triple-log:{a}"),
            ConcaveGauge::Tabulated(t) => write!(f, "{}", t.label),
        }
    }
}

/// Parses `power:α`, `triple-log[:a]` and `eps-family:ε:n_max` (the last one
/// runs the Kruglov iteration with default tolerances).
impl FromStr for ConcaveGauge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["power", a] => ConcaveGauge::power(Scalar::parse(a)?),
            ["triple-log"] => ConcaveGauge::triple_log(default_psi_parameter()),
            ["triple-log", a] => {
                let a: f64 = a.parse().map_err(|_| Error::Parse(format!("bad triple-log parameter {a:?}")))?;
                ConcaveGauge::triple_log(a)
            }
            ["eps-family", e, n] => {
                let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad n_max {n:?}")))?;
                let built = super::build_epsilon_gauge(
                    &Scalar::parse(e)?,
                    n,
                    crate::operators::DEFAULT_TAIL_TOL,
                    crate::operators::DEFAULT_PRUNE,
                )?;
                Ok(built.gauge)
            }
            _ => Err(Error::Parse(format!("unknown gauge spec {s:?}"))),
        }
    }
}

/// `M_p(u) = e^{u^p} - 1`; for `p < 1` it is replaced on `[0, u_0]` by its
/// tangent through the origin, which makes it convex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrliczYoung {
    p: f64,
    /// Tangency point `u_0` (zero when `p >= 1`).
    knee: f64,
    knee_slope: f64,
}

impl OrliczYoung {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!("Orlicz exponent {p} must be positive")));
        }
        if p >= 1.0 {
            return Ok(OrliczYoung { p, knee: 0.0, knee_slope: 0.0 });
        }
        // tangency: M(u) = u M'(u), i.e. 1 - e^{-s} = p s with s = u^p
        let g = |s: f64| -(-s).exp_m1() - p * s;
        let (mut lo, mut hi) = ((1.0 - p) / p, 1.0 / p);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let knee = s.powf(1.0 / p);
        Ok(OrliczYoung {
            p,
            knee,
            knee_slope: s.exp_m1() / knee,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eval(&self, u: f64) -> f64 {
        if u <= self.knee {
            self.knee_slope * u
        } else {
            u.powf(self.p).exp_m1()
        }
    }

    /// `ln M(u)`, finite far beyond the f64 range of `M`.
    pub fn ln_eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if u <= self.knee {
            return self.knee_slope.ln() + u.ln();
        }
        let s = u.powf(self.p);
        if s > 1.0 {
            s + (-(-s).exp()).ln_1p()
        } else {
            s.exp_m1().ln()
        }
    }

    /// `M^{-1}(1)`.
    pub fn inverse_at_one(&self) -> f64 {
        let u = std::f64::consts::LN_2.powf(1.0 / self.p);
        if u > self.knee {
            u
        } else {
            1.0 / self.knee_slope
        }
    }
}
