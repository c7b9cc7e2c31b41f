//! Rearrangement-invariant norms of step functions. Every evaluator works on
//! `x*`, so equimeasurable inputs give identical results.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::stepfn::StepFunction;

use super::gauge::{ConcaveGauge, OrliczYoung};

pub const MARCINKIEWICZ_GRID: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-9;

/// `∫_0^1 x* dφ = Σ v_i (φ(r_i) - φ(l_i))` over the pieces of `x*`.
pub fn norm_lorentz(x: &StepFunction, phi: &ConcaveGauge) -> Result<Scalar> {
    let xs = x.rearrange();
    let mut left = Scalar::zero();
    let mut phi_left = Scalar::zero();
    let mut total = Scalar::zero();
    for p in xs.pieces() {
        let right = (&left + &p.len).min(Scalar::one());
        let phi_right = phi.eval(&right)?;
        total = total + &p.val * &(&phi_right - &phi_left);
        left = right;
        phi_left = phi_right;
    }
    Ok(total)
}

/// `sup_t ψ(t)^{-1} ∫_0^t x*`.
///
/// Candidates: every breakpoint of `x*`, 64 interior points per piece, then
/// golden-section refinement around the best interior point of each piece.
pub fn norm_marcinkiewicz(x: &StepFunction, psi: &ConcaveGauge, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let xs = x.rearrange();
    let mut best = 0.0f64;
    let mut left = 0.0f64;
    let mut integral = 0.0f64;
    for p in xs.pieces() {
        let v = p.val.to_f64();
        let len = p.len.to_f64();
        let right = (left + len).min(1.0);
        let ratio = |t: f64| (integral + v * (t - left)) / psi.eval_f64(t);
        best = best.max(ratio(right));
        let step = (right - left) / MARCINKIEWICZ_GRID as f64;
        let mut arg = right;
        let mut arg_val = ratio(right);
        for j in 1..MARCINKIEWICZ_GRID {
            let t = left + step * j as f64;
            let r = ratio(t);
            if r > arg_val {
                arg_val = r;
                arg = t;
            }
        }
        if arg < right {
            let (lo, hi) = ((arg - step).max(left + step * 1e-6), (arg + step).min(right));
            best = best.max(arg_val).max(golden_max(ratio, lo, hi, tol));
        }
        integral += v * (right - left);
        left = right;
    }
    Ok(best)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iters = 0;
    while (b - a) > tol * b.abs().max(1e-300) && iters < 200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    fc.max(fd)
}

/// `ln ∫ M(|x| / λ)`, summed in log space so that lengths like `1/2048!`
/// do not underflow.
fn ln_modular(pieces: &[(f64, f64)], m: &OrliczYoung, lambda: f64) -> f64 {
    let terms: Vec<f64> = pieces
        .iter()
        .map(|&(ln_len, v)| ln_len + m.ln_eval(v / lambda))
        .filter(|t| *t > f64::NEG_INFINITY)
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

/// Luxemburg norm `inf{λ > 0 : ∫ M(|x|/λ) <= 1}` by bisection to relative
/// width `tol`.
///
/// The root lies in `[‖x‖_1, ‖x‖_∞] / M^{-1}(1)`: Jensen gives the lower end
/// and monotonicity of `M` the upper.
pub fn norm_orlicz(x: &StepFunction, m: &OrliczYoung, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    // the rearrangement fixes the summation order, so equimeasurable inputs
    // give bitwise equal results
    let xs = x.rearrange();
    let pieces: Vec<(f64, f64)> = xs
        .pieces()
        .iter()
        .filter(|p| !p.val.is_zero())
        .map(|p| (p.len.ln(), p.val.abs().to_f64()))
        .collect();
    if pieces.is_empty() {
        return Ok(0.0);
    }
    let sup = pieces.iter().map(|p| p.1).fold(0.0, f64::max);
    let l1: f64 = pieces.iter().map(|&(ll, v)| ll.exp() * v).sum();
    let inv = m.inverse_at_one();
    let mut lo = (l1 / inv).max(sup * 1e-300);
    let mut hi = sup / inv;
    if ln_modular(&pieces, m, lo) <= 0.0 {
        return Ok(lo);
    }
    while (hi - lo) > tol * hi {
        let mid = 0.5 * (lo + hi);
        if ln_modular(&pieces, m, mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `sup_t x*(t) / log_2(2/t)`. On each piece of `x*` the value is constant
/// and the divisor decreases in `t`, so the right endpoints suffice.
pub fn norm_explog(x: &StepFunction) -> f64 {
    let xs = x.rearrange();
    let mut right = 0.0f64;
    let mut best = 0.0f64;
    for p in xs.pieces() {
        right = (right + p.len.to_f64()).min(1.0);
        best = best.max(p.val.to_f64() / (2.0 / right).log2());
    }
    best
}

/// A norm selectable from the command line.
#[derive(Clone, Debug)]
pub enum NormSpec {
    L1,
    LInf,
    Lorentz(ConcaveGauge),
    Marcinkiewicz(ConcaveGauge),
    Orlicz(OrliczYoung),
    ExpLog,
}

impl NormSpec {
    pub fn eval(&self, x: &StepFunction, tol: f64) -> Result<f64> {
        Ok(match self {
            NormSpec::L1 => x.l1_norm().to_f64(),
            NormSpec::LInf => x.sup().abs().to_f64(),
            NormSpec::Lorentz(phi) => norm_lorentz(x, phi)?.to_f64(),
            NormSpec::Marcinkiewicz(psi) => norm_marcinkiewicz(x, psi, tol)?,
            NormSpec::Orlicz(m) => norm_orlicz(x, m, tol)?,
            NormSpec::ExpLog => norm_explog(x),
        })
    }

    /// Whether the evaluator is computed by a tolerance-limited search.
    pub fn is_iterative(&self) -> bool {
        matches!(self, NormSpec::Marcinkiewicz(_) | NormSpec::Orlicz(_))
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::L1 => write!(f, "l1"),
            NormSpec::LInf => write!(f, "linf"),
            NormSpec::Lorentz(g) => write!(f, "lorentz:{g}"),
            NormSpec::Marcinkiewicz(g) => write!(f, "marcinkiewicz:{g}"),
            NormSpec::Orlicz(m) => write!(f, "orlicz:{}", m.p()),
            NormSpec::ExpLog => write!(f, "explog"),
        }
    }
}

/// `l1`, `linf`, `explog`, `orlicz:p`, `lorentz:<gauge>`, `marcinkiewicz:<gauge>`.
impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "l1" => Ok(NormSpec::L1),
            "linf" => Ok(NormSpec::LInf),
            "explog" => Ok(NormSpec::ExpLog),
            "orlicz" => {
                let p: f64 = rest.parse().map_err(|_| Error::Parse(format!("bad Orlicz exponent {rest:?}")))?;
                Ok(NormSpec::Orlicz(OrliczYoung::new(p)?))
            }
            "lorentz" => Ok(NormSpec::Lorentz(rest.parse()?)),
            "marcinkiewicz" => Ok(NormSpec::Marcinkiewicz(rest.parse()?)),
            _ => Err(Error::Parse(format!("unknown norm spec {s:?}"))),
        }
    }
}
