//! Arbitrary-precision arithmetic and permutation combinatorics.
//!
//! Masses and interval lengths are [`ExactRational`] values (always reduced).
//! Factorials and derangement counts come from memoized tables that grow on
//! demand behind a lock, so concurrent readers never race a resize.

mod scalar;

pub use scalar::Scalar;

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced rational `p/q` with `q > 0`.
pub type ExactRational = BigRational;

static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());
static DERANGEMENTS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

fn memo<F>(table: &RwLock<Vec<BigUint>>, n: usize, extend: F) -> BigUint
where
    F: Fn(&mut Vec<BigUint>),
{
    {
        let t = table.read().expect("memo table poisoned");
        if let Some(v) = t.get(n) {
            return v.clone();
        }
    }
    let mut t = table.write().expect("memo table poisoned");
    while t.len() <= n {
        extend(&mut t);
    }
    t[n].clone()
}

/// `n!`
pub fn factorial(n: usize) -> BigUint {
    memo(&FACTORIALS, n, |t| {
        let k = t.len();
        let next = match t.last() {
            None => BigUint::one(),
            Some(prev) => prev * BigUint::from(k),
        };
        t.push(next);
    })
}

/// Number of fixed-point-free permutations of `r` symbols.
///
/// Uses `D(r) = (r-1)(D(r-1) + D(r-2))` with `D(0) = 1`, `D(1) = 0`.
pub fn derangements(r: usize) -> BigUint {
    memo(&DERANGEMENTS, r, |t| {
        let k = t.len();
        let next = match k {
            0 => BigUint::one(),
            1 => BigUint::zero(),
            _ => BigUint::from(k - 1) * (&t[k - 1] + &t[k - 2]),
        };
        t.push(next);
    })
}

/// Fills both memo tables up to `n` from the calling thread.
pub fn warm_tables(n: usize) {
    factorial(n);
    derangements(n);
}

/// Checks `r!/3 <= D(r) <= r!` exactly.
///
/// The lower bound is false at `r = 1` (`D(1) = 0`); callers that scan a range
/// treat that index as a known exception.
pub fn derangement_bounds_check(r: usize) -> bool {
    let d = derangements(r);
    let f = factorial(r);
    &d * 3u32 >= f && d <= f
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Multinomial coefficient `m! / (parts_1! ... parts_j!)`.
pub fn multinomial(m: usize, parts: &[usize]) -> Result<BigUint> {
    let total: usize = parts.iter().sum();
    if total != m {
        return Err(Error::InvalidArgument(format!(
            "multinomial parts sum to {total}, expected {m}"
        )));
    }
    let denom = parts
        .iter()
        .fold(BigUint::one(), |acc, &p| acc * factorial(p));
    Ok(factorial(m) / denom)
}

/// Builds the reduced rational `num/den`.
///
/// # Panics
/// Panics if `den == 0`.
pub fn ratio<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

pub fn rational_from_uint(n: &BigUint) -> ExactRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Natural log of a positive big integer, accurate to f64 precision even
/// when the integer is far outside the f64 range.
pub fn ln_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top: BigUint = n >> shift;
    top.to_f64().unwrap_or(f64::MAX).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational; `-inf` at zero, NaN when negative.
pub fn ln_rational(r: &ExactRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    if r.is_negative() {
        return f64::NAN;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// Nearest f64 to a rational, with graceful underflow to zero and overflow to
/// infinity for extreme magnitudes.
pub fn rational_to_f64(r: &ExactRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&r.abs()).exp()
}

/// Exact rational from a finite f64 (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<ExactRational> {
    BigRational::from_float(x)
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.125"` into an exact
/// rational. Exponent notation is rejected.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = match int.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().map_err(|_| bad())?,
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let mag = int_part.abs() * &scale + frac_part;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a ExactRational>,
{
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serde adapter writing an [`ExactRational`] as `"p/q"` (or `"p"`).
pub mod rational_string {
    use super::{parse_rational, ExactRational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &ExactRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
