//! Piecewise-constant functions on `[0, 1]`.
//!
//! A [`StepFunction`] is an ordered list of `(length, value)` pieces whose
//! lengths are positive and sum to one. Adjacent pieces with identical values
//! are merged after every operation so that the representation is canonical.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// Tolerance on the total length of a step function carrying inexact lengths.
pub const LENGTH_TOL: f64 = 1e-9;

/// Positions closer than this are treated as the same breakpoint when lengths
/// are inexact.
const SLIVER: f64 = 1e-15;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Piece {
    pub len: Scalar,
    pub val: Scalar,
}

impl Piece {
    pub fn new(len: impl Into<Scalar>, val: impl Into<Scalar>) -> Self {
        Piece {
            len: len.into(),
            val: val.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepFunction {
    pieces: Vec<Piece>,
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            pieces: Vec<Piece>,
        }
        let raw = Raw::deserialize(d)?;
        StepFunction::new(raw.pieces).map_err(serde::de::Error::custom)
    }
}

fn remaining_is_zero(r: &Scalar) -> bool {
    match r {
        Scalar::Exact(_) => !r.is_positive(),
        Scalar::Approx(x) => *x <= SLIVER,
    }
}

impl StepFunction {
    /// Validates and canonicalizes a list of pieces.
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("step function needs at least one piece".into()));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !p.len.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "piece {i} has non-positive length {}",
                    p.len
                )));
            }
            if p.val.to_f64().is_nan() {
                return Err(Error::InvalidArgument(format!("piece {i} has NaN value")));
            }
        }
        let total: Scalar = pieces.iter().map(|p| &p.len).sum();
        match &total {
            Scalar::Exact(_) => {
                if !total.exact_eq(&Scalar::one())? {
                    return Err(Error::InvalidArgument(format!(
                        "piece lengths sum to {total}, expected 1"
                    )));
                }
            }
            Scalar::Approx(t) => {
                if (t - 1.0).abs() > LENGTH_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "piece lengths sum to {t}, expected 1 within {LENGTH_TOL}"
                    )));
                }
            }
        }
        Ok(Self::canonical(pieces))
    }

    /// Drops zero-length pieces and merges equal neighbours. Lengths are
    /// trusted to sum to one.
    pub(crate) fn canonical(pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if !p.len.is_positive() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.val.same_as(&p.val) => last.len = &last.len + &p.len,
                _ => out.push(p),
            }
        }
        if out.is_empty() {
            out.push(Piece::new(Scalar::one(), Scalar::zero()));
        }
        StepFunction { pieces: out }
    }

    pub fn constant(c: impl Into<Scalar>) -> Self {
        StepFunction {
            pieces: vec![Piece::new(Scalar::one(), c.into())],
        }
    }

    /// Indicator of `[0, s]` for `0 < s <= 1`.
    pub fn indicator(s: impl Into<Scalar>) -> Result<Self> {
        let s = s.into();
        let rest = Scalar::one() - &s;
        let mut pieces = vec![Piece::new(s, Scalar::one())];
        if rest.is_positive() {
            pieces.push(Piece::new(rest, Scalar::zero()));
        }
        Self::new(pieces)
    }

    /// `n` equal pieces of length `1/n` carrying `a` in order.
    pub fn from_vector(a: &[Scalar]) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("from_vector needs n >= 1".into()));
        }
        let len = Scalar::ratio(1, a.len() as i64);
        Ok(Self::canonical(
            a.iter().map(|v| Piece::new(len.clone(), v.clone())).collect(),
        ))
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_exact(&self) -> bool {
        self.pieces.iter().all(|p| p.len.is_exact() && p.val.is_exact())
    }

    /// Right endpoints of the pieces.
    pub fn breakpoints(&self) -> Vec<Scalar> {
        let mut acc = Scalar::zero();
        self.pieces
            .iter()
            .map(|p| {
                acc = &acc + &p.len;
                acc.clone()
            })
            .collect()
    }

    pub fn map_values<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Self {
        Self::canonical(
            self.pieces
                .iter()
                .map(|p| Piece::new(p.len.clone(), f(&p.val)))
                .collect(),
        )
    }

    pub fn abs(&self) -> Self {
        self.map_values(Scalar::abs)
    }

    pub fn scale(&self, alpha: &Scalar) -> Self {
        self.map_values(|v| v * alpha)
    }

    pub fn sup(&self) -> Scalar {
        self.pieces
            .iter()
            .map(|p| p.val.abs())
            .fold(Scalar::zero(), Scalar::max)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.pieces.iter().all(|p| !p.val.is_negative())
    }

    pub fn is_non_increasing(&self) -> bool {
        self.pieces
            .windows(2)
            .all(|w| w[0].val.cmp_num(&w[1].val) != Ordering::Less)
    }

    /// Combines two step functions piece by piece on the union of their
    /// breakpoints.
    pub fn zip_with<F>(&self, other: &StepFunction, f: F) -> StepFunction
    where
        F: Fn(&Scalar, &Scalar) -> Scalar,
    {
        let (a, b) = (&self.pieces, &other.pieces);
        let (mut i, mut j) = (0usize, 0usize);
        let mut ra = a[0].len.clone();
        let mut rb = b[0].len.clone();
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            let step = if ra.cmp_num(&rb) == Ordering::Greater {
                rb.clone()
            } else {
                ra.clone()
            };
            out.push(Piece::new(step.clone(), f(&a[i].val, &b[j].val)));
            ra = &ra - &step;
            rb = &rb - &step;
            if remaining_is_zero(&ra) {
                i += 1;
                if i < a.len() {
                    ra = a[i].len.clone();
                }
            }
            if remaining_is_zero(&rb) {
                j += 1;
                if j < b.len() {
                    rb = b[j].len.clone();
                }
            }
        }
        // Float drift can leave a sliver on one side; pair it with the other
        // side's final value.
        let last_a = &a[a.len() - 1].val;
        let last_b = &b[b.len() - 1].val;
        if i < a.len() {
            out.push(Piece::new(ra, f(&a[i].val, last_b)));
            for p in &a[i + 1..] {
                out.push(Piece::new(p.len.clone(), f(&p.val, last_b)));
            }
        } else if j < b.len() {
            out.push(Piece::new(rb, f(last_a, &b[j].val)));
            for p in &b[j + 1..] {
                out.push(Piece::new(p.len.clone(), f(last_a, &p.val)));
            }
        }
        Self::canonical(out)
    }

    /// Non-increasing rearrangement of `|x|`.
    pub fn rearrange(&self) -> StepFunction {
        let mut pieces: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| Piece::new(p.len.clone(), p.val.abs()))
            .collect();
        pieces.sort_by(|p, q| q.val.cmp_num(&p.val));
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last_mut() {
                Some(last) if last.val.cmp_num(&p.val) == Ordering::Equal => {
                    last.len = &last.len + &p.len;
                }
                _ => out.push(p),
            }
        }
        StepFunction { pieces: out }
    }

    /// `x(t / tau)` on `[0, 1]`, zero where `t / tau > 1`.
    pub fn dilate(&self, tau: &Scalar) -> Result<StepFunction> {
        if !tau.is_positive() {
            return Err(Error::InvalidArgument(format!("dilation factor {tau} must be positive")));
        }
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        let mut pos = Scalar::zero();
        for p in &self.pieces {
            let len = &p.len * tau;
            let end = &pos + &len;
            if end.cmp_num(&Scalar::one()) != Ordering::Less {
                out.push(Piece::new(Scalar::one() - &pos, p.val.clone()));
                pos = Scalar::one();
                break;
            }
            out.push(Piece::new(len, p.val.clone()));
            pos = end;
        }
        let rest = Scalar::one() - &pos;
        if rest.is_positive() {
            out.push(Piece::new(rest, Scalar::zero()));
        }
        Ok(Self::canonical(out))
    }

    /// `∫_0^tau x(t) dt` for `tau` in `[0, 1]`.
    pub fn partial_integral(&self, tau: &Scalar) -> Result<Scalar> {
        if tau.is_negative() || tau.cmp_num(&Scalar::one()) == Ordering::Greater {
            return Err(Error::InvalidArgument(format!("tau = {tau} outside [0, 1]")));
        }
        let mut acc = Scalar::zero();
        let mut left = tau.clone();
        for p in &self.pieces {
            if !left.is_positive() {
                break;
            }
            if p.len.cmp_num(&left) != Ordering::Less {
                acc = acc + &p.val * &left;
                break;
            }
            acc = acc + &p.val * &p.len;
            left = &left - &p.len;
        }
        Ok(acc)
    }

    /// `∫_0^1 x(t) dt`.
    pub fn integral(&self) -> Scalar {
        self.pieces.iter().map(|p| &p.val * &p.len).sum()
    }

    /// `∫_0^1 |x(t)| dt`.
    pub fn l1_norm(&self) -> Scalar {
        self.pieces.iter().map(|p| p.val.abs() * &p.len).sum()
    }

    /// Mean values of `x` on the cells `[(i-1)/n, i/n]`.
    pub fn average_vector(&self, n: usize) -> Result<Vec<Scalar>> {
        if n == 0 {
            return Err(Error::InvalidArgument("average_vector needs n >= 1".into()));
        }
        let cell = Scalar::ratio(1, n as i64);
        let grid = StepFunction::canonical(
            (0..n)
                .map(|i| Piece::new(cell.clone(), Scalar::int(i as i64)))
                .collect(),
        );
        // Tag every sub-piece with its cell index, then integrate per cell.
        let mut sums = vec![Scalar::zero(); n];
        let (a, b) = (&self.pieces, &grid.pieces);
        let (mut i, mut j) = (0usize, 0usize);
        let mut ra = a[0].len.clone();
        let mut rb = b[0].len.clone();
        while i < a.len() && j < b.len() {
            let step = if ra.cmp_num(&rb) == Ordering::Greater {
                rb.clone()
            } else {
                ra.clone()
            };
            sums[j] = &sums[j] + &(&a[i].val * &step);
            ra = &ra - &step;
            rb = &rb - &step;
            if remaining_is_zero(&ra) {
                i += 1;
                if i < a.len() {
                    ra = a[i].len.clone();
                }
            }
            if remaining_is_zero(&rb) {
                j += 1;
                if j < b.len() {
                    rb = b[j].len.clone();
                }
            }
        }
        let n_scalar = Scalar::int(n as i64);
        Ok(sums.into_iter().map(|s| s * &n_scalar).collect())
    }

    /// Largest value of `∫_0^τ x* - ∫_0^τ y*` over all breakpoints of either
    /// rearrangement, together with the `τ` where it occurs.
    ///
    /// Both partial integrals are piecewise linear, so breakpoints suffice.
    pub fn majorization_excess(y: &StepFunction, x: &StepFunction) -> (Scalar, Scalar) {
        let xs = x.rearrange();
        let ys = y.rearrange();
        let aligned = xs.zip_with(&ys, |a, b| a - b);
        let mut diff = Scalar::zero();
        let mut pos = Scalar::zero();
        let mut worst = (Scalar::zero(), Scalar::zero());
        for p in &aligned.pieces {
            diff = &diff + &(&p.val * &p.len);
            pos = &pos + &p.len;
            if diff.cmp_num(&worst.0) == Ordering::Greater {
                worst = (diff.clone(), pos.clone());
            }
        }
        worst
    }

    /// `x ≺ y` up to `slack`: `∫_0^τ x* <= ∫_0^τ y* + slack` for all `τ`.
    pub fn submajorizes(y: &StepFunction, x: &StepFunction, slack: &Scalar) -> bool {
        let (excess, _) = Self::majorization_excess(y, x);
        excess.cmp_num(slack) != Ordering::Greater
    }

    /// Exact equimeasurability test; refuses inexact inputs.
    pub fn equimeasurable(x: &StepFunction, y: &StepFunction) -> Result<bool> {
        if !x.is_exact() || !y.is_exact() {
            return Err(Error::Inexact("step function"));
        }
        Ok(x.rearrange().same_pieces(&y.rearrange()))
    }

    /// Piecewise identical representation (exact or bitwise).
    pub fn same_pieces(&self, other: &StepFunction) -> bool {
        self.pieces.len() == other.pieces.len()
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(p, q)| p.len.same_as(&q.len) && p.val.same_as(&q.val))
    }

    /// `x <= y` pointwise.
    pub fn pointwise_le(&self, other: &StepFunction) -> bool {
        let diff = self.zip_with(other, |a, b| b - a);
        diff.pieces.iter().all(|p| !p.val.is_negative())
    }
}
