use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ln_rational, parse_rational, rational_from_f64, rational_to_f64, ExactRational};
use crate::error::{Error, Result};

/// A real number that is either an exact rational or an f64 tagged inexact.
///
/// Any arithmetic involving an inexact operand yields an inexact result.
/// Ordering is numeric across both forms; exact equality is only available
/// through [`Scalar::exact_eq`], which refuses inexact operands.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(ExactRational),
    Approx(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(super::ratio(p, q))
    }

    pub fn approx(x: f64) -> Self {
        Scalar::Approx(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&ExactRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn into_exact(self) -> Result<ExactRational> {
        match self {
            Scalar::Exact(r) => Ok(r),
            Scalar::Approx(_) => Err(Error::Inexact("scalar")),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Approx(x) => *x,
        }
    }

    /// Natural log, computed without underflow for tiny exact rationals.
    pub fn ln(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ln_rational(r),
            Scalar::Approx(x) => x.ln(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Approx(x) => *x < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Approx(x) => *x > 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(x) => Scalar::Approx(x.abs()),
        }
    }

    pub fn powi(&self, k: i32) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(num_traits::pow::Pow::pow(r, k)),
            Scalar::Approx(x) => Scalar::Approx(x.powi(k)),
        }
    }

    /// Demotes to the inexact form.
    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_f64())
    }

    /// Exact equality; errors if either side is inexact.
    pub fn exact_eq(&self, other: &Scalar) -> Result<bool> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(a == b),
            _ => Err(Error::Inexact("scalar")),
        }
    }

    /// Identical representation: exact values compare exactly, inexact values
    /// compare bitwise. Used for merging equal neighbours.
    pub fn same_as(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }

    /// Numeric comparison. NaN sorts last.
    pub fn cmp_num(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Exact(a), Scalar::Approx(y)) => match rational_from_f64(*y) {
                Some(b) => a.cmp(&b),
                None if y.is_nan() => Ordering::Less,
                None if *y > 0.0 => Ordering::Less,
                None => Ordering::Greater,
            },
            (Scalar::Approx(_), Scalar::Exact(_)) => other.cmp_num(self).reverse(),
            (Scalar::Approx(x), Scalar::Approx(y)) => x.total_cmp(y),
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self.cmp_num(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self.cmp_num(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Parses `"p/q"`, integers and plain decimals exactly; anything else
    /// that f64 accepts (exponents, `inf`) becomes inexact.
    pub fn parse(s: &str) -> Result<Scalar> {
        match parse_rational(s) {
            Ok(r) => Ok(Scalar::Exact(r)),
            Err(_) => s
                .trim()
                .parse::<f64>()
                .map(Scalar::Approx)
                .map_err(|_| Error::Parse(format!("not a number: {s:?}"))),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<ExactRational> for Scalar {
    fn from(r: ExactRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Approx(x)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_num(other) == Ordering::Equal
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_num(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Approx(x) => write!(f, "{x:e}"),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    _ => Scalar::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) if !b.is_zero() => Scalar::Exact(a / b),
            _ => Scalar::Approx(self.to_f64() / rhs.to_f64()),
        }
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        &self / rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(x) => Scalar::Approx(-x),
        }
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = SumAcc::default();
        iter.for_each(|x| acc.add(&x));
        acc.finish()
    }
}

impl<'a> std::iter::Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        let mut acc = SumAcc::default();
        iter.for_each(|x| acc.add(x));
        acc.finish()
    }
}

/// Exact sums reduced once at the end; denominators that divide the running
/// one (common for masses over `n!`) cost a division instead of a gcd.
#[derive(Default)]
struct SumAcc {
    num: BigInt,
    den: Option<BigInt>,
    approx: Option<f64>,
}

impl SumAcc {
    fn add(&mut self, x: &Scalar) {
        match x {
            Scalar::Approx(v) => *self.approx.get_or_insert(0.0) += v,
            Scalar::Exact(r) => {
                let (c, d) = (r.numer(), r.denom());
                let den = match &mut self.den {
                    None => {
                        self.num = c.clone();
                        self.den = Some(d.clone());
                        return;
                    }
                    Some(den) => den,
                };
                let (q, rem) = den.div_rem(d);
                if rem.is_zero() {
                    self.num += c * q;
                    return;
                }
                let (q, rem) = d.div_rem(den);
                if rem.is_zero() {
                    self.num = &self.num * q + c;
                    *den = d.clone();
                    return;
                }
                let g = den.gcd(d);
                let f = d / &g;
                self.num = &self.num * &f + c * (&*den / &g);
                *den *= f;
            }
        }
    }

    fn finish(self) -> Scalar {
        let exact = match self.den {
            None => BigRational::zero(),
            Some(den) => BigRational::new(self.num, den),
        };
        match self.approx {
            None => Scalar::Exact(exact),
            Some(v) => Scalar::Approx(rational_to_f64(&exact) + v),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => s.serialize_str(&r.to_string()),
            Scalar::Approx(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => parse_rational(&s)
                .map(Scalar::Exact)
                .map_err(serde::de::Error::custom),
            Repr::Number(x) => Ok(Scalar::Approx(x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactness_is_poisoned_by_floats() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::approx(0.5);
        assert!((&a + &a).is_exact());
        assert!(!(&a + &b).is_exact());
        assert!((a.clone() * b.clone()).exact_eq(&a).is_err());
        assert_eq!(
            (Scalar::ratio(1, 3) + Scalar::ratio(1, 6)).exact_eq(&Scalar::ratio(1, 2)),
            Ok(true)
        );
    }

    #[test]
    fn mixed_ordering() {
        assert!(Scalar::ratio(1, 3) < Scalar::approx(0.34));
        assert!(Scalar::ratio(1, 3) > Scalar::approx(0.333));
        assert!(Scalar::approx(f64::INFINITY) > Scalar::int(1_000_000));
        assert_eq!(Scalar::ratio(1, 2), Scalar::approx(0.5));
    }

    #[test]
    fn serde_forms() {
        let v = serde_json::to_string(&vec![Scalar::ratio(3, 4), Scalar::approx(0.25)]).unwrap();
        assert_eq!(v, r#"["3/4",0.25]"#);
        let back: Vec<Scalar> = serde_json::from_str(&v).unwrap();
        assert!(back[0].is_exact() && !back[1].is_exact());
        assert_eq!(back[0].exact_eq(&Scalar::ratio(3, 4)), Ok(true));
    }

    #[test]
    fn parse_decimal_is_exact() {
        assert_eq!(Scalar::parse("0.2").unwrap().exact_eq(&Scalar::ratio(1, 5)), Ok(true));
        assert!(!Scalar::parse("1e-12").unwrap().is_exact());
    }
}
