//! The value group Q and its rank-2 extension Q + Q*eps with lexicographic
//! order, both extended by a greatest element `inf`.
//!
//! `eps` is a positive infinitesimal: (0,1) > (0,0) but (0,1) < (q,0) for
//! every rational q > 0. All arithmetic is exact; rationals are kept reduced
//! by `num_rational`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

pub type Rat = BigRational;

/// Parse a rational written as "a/b" or "a".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let mk_err = || Error::Parse(format!("invalid rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| mk_err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| mk_err())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|_| mk_err())?;
        Ok(Rat::from_integer(n))
    }
}

pub fn rat_i64(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// An element of Q together with the absorbing greatest element `inf`
/// (the value of 0 under any valuation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalValue {
    Finite(Rat),
    Infinity,
}

impl RationalValue {
    pub fn from_int(n: i64) -> Self {
        RationalValue::Finite(Rat::from_integer(BigInt::from(n)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, RationalValue::Infinity)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            RationalValue::Finite(q) => Some(q),
            RationalValue::Infinity => None,
        }
    }

    pub fn to_lambda(&self) -> LambdaValue {
        match self {
            RationalValue::Finite(q) => LambdaValue::from_rat(q.clone()),
            RationalValue::Infinity => LambdaValue::Infinity,
        }
    }
}

impl PartialOrd for RationalValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use RationalValue::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for &RationalValue {
    type Output = RationalValue;
    fn add(self, rhs: &RationalValue) -> RationalValue {
        use RationalValue::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinity,
        }
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalValue::Finite(q) => write!(f, "{q}"),
            RationalValue::Infinity => write!(f, "inf"),
        }
    }
}

/// An element of the ordered group Q + Q*eps (lexicographic), or `inf`.
///
/// `std` is the standard (Gamma) component and `eps` the coefficient of the
/// infinitesimal. A value lies in Gamma exactly when `eps = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaValue {
    Finite { std: Rat, eps: Rat },
    Infinity,
}

impl LambdaValue {
    pub fn new(std: Rat, eps: Rat) -> Self {
        LambdaValue::Finite { std, eps }
    }

    pub fn from_rat(std: Rat) -> Self {
        LambdaValue::Finite {
            std,
            eps: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_i64(num: i64, den: i64) -> Self {
        Self::from_rat(rat_i64(num, den))
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn infinity() -> Self {
        LambdaValue::Infinity
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LambdaValue::Infinity)
    }

    /// True when the value lies in Gamma = Q, i.e. the eps coefficient is 0.
    pub fn is_in_gamma(&self) -> bool {
        match self {
            LambdaValue::Finite { eps, .. } => eps.is_zero(),
            LambdaValue::Infinity => false,
        }
    }

    pub fn components(&self) -> Option<(&Rat, &Rat)> {
        match self {
            LambdaValue::Finite { std, eps } => Some((std, eps)),
            LambdaValue::Infinity => None,
        }
    }

    /// Exact division by a positive integer; `inf` is not divisible.
    pub fn div_int(&self, s: u64) -> Result<LambdaValue> {
        if s == 0 {
            return Err(Error::Invalid("division by zero".into()));
        }
        match self {
            LambdaValue::Finite { std, eps } => {
                let d = Rat::from_integer(BigInt::from(s));
                Ok(LambdaValue::Finite {
                    std: std / &d,
                    eps: eps / &d,
                })
            }
            LambdaValue::Infinity => Err(Error::InfiniteValue),
        }
    }

    /// Componentwise multiple n*self; n*inf = inf for n >= 1 and 0*inf = 0.
    pub fn mul_nat(&self, n: usize) -> LambdaValue {
        if n == 0 {
            return LambdaValue::zero();
        }
        match self {
            LambdaValue::Finite { std, eps } => {
                let m = Rat::from_integer(BigInt::from(n));
                LambdaValue::Finite {
                    std: std * &m,
                    eps: eps * &m,
                }
            }
            LambdaValue::Infinity => LambdaValue::Infinity,
        }
    }
}

impl PartialOrd for LambdaValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LambdaValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use LambdaValue::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Finite { .. }) => Ordering::Greater,
            (Finite { .. }, Infinity) => Ordering::Less,
            (Finite { std: a, eps: b }, Finite { std: c, eps: d }) => {
                a.cmp(c).then_with(|| b.cmp(d))
            }
        }
    }
}

impl Add for &LambdaValue {
    type Output = LambdaValue;
    fn add(self, rhs: &LambdaValue) -> LambdaValue {
        use LambdaValue::*;
        match (self, rhs) {
            (Finite { std: a, eps: b }, Finite { std: c, eps: d }) => Finite {
                std: a + c,
                eps: b + d,
            },
            _ => Infinity,
        }
    }
}

impl Add for LambdaValue {
    type Output = LambdaValue;
    fn add(self, rhs: LambdaValue) -> LambdaValue {
        &self + &rhs
    }
}

impl Neg for &LambdaValue {
    type Output = LambdaValue;
    fn neg(self) -> LambdaValue {
        match self {
            LambdaValue::Finite { std, eps } => LambdaValue::Finite {
                std: -std,
                eps: -eps,
            },
            LambdaValue::Infinity => panic!("cannot negate an infinite value"),
        }
    }
}

// inf - finite = inf; subtracting inf is a programming error.
impl Sub for &LambdaValue {
    type Output = LambdaValue;
    fn sub(self, rhs: &LambdaValue) -> LambdaValue {
        use LambdaValue::*;
        match (self, rhs) {
            (Finite { std: a, eps: b }, Finite { std: c, eps: d }) => Finite {
                std: a - c,
                eps: b - d,
            },
            (Infinity, Finite { .. }) => Infinity,
            (_, Infinity) => panic!("cannot subtract an infinite value"),
        }
    }
}

impl fmt::Display for LambdaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaValue::Infinity => write!(f, "inf"),
            LambdaValue::Finite { std, eps } => {
                if eps.is_zero() {
                    write!(f, "{std}")
                } else if eps.is_negative() {
                    write!(f, "{std} - {}*eps", -eps)
                } else {
                    write!(f, "{std} + {eps}*eps")
                }
            }
        }
    }
}

impl FromStr for LambdaValue {
    type Err = Error;

    /// Accepts "inf", "a/b", "a/b + c/d*eps", "a/b - c/d*eps" and bare
    /// "c/d*eps". Whitespace-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "inf" {
            return Ok(LambdaValue::Infinity);
        }
        // Split the eps term off, if present.
        if let Some(idx) = compact.find("*eps") {
            if idx + 4 != compact.len() {
                return Err(Error::Parse(format!("invalid value: {s:?}")));
            }
            let body = &compact[..idx];
            // Find the sign that separates std from the eps coefficient.
            // Scan from position 1 so a leading sign stays with std.
            let mut split = None;
            for (i, c) in body.char_indices().skip(1) {
                if (c == '+' || c == '-') && !matches!(&body[i - 1..i], "/" | "+" | "-") {
                    split = Some((i, c));
                }
            }
            let (std, eps) = match split {
                Some((i, sign)) => {
                    let e = parse_rat(&body[i + 1..])?;
                    let e = if sign == '-' { -e } else { e };
                    (parse_rat(&body[..i])?, e)
                }
                None => (Rat::zero(), parse_rat(body)?),
            };
            Ok(LambdaValue::Finite { std, eps })
        } else {
            Ok(LambdaValue::from_rat(parse_rat(&compact)?))
        }
    }
}

// JSON encodes rationals as strings to avoid precision loss: "a/b" when the
// value lies in Gamma, {"std": "...", "eps": "..."} otherwise, "inf" for the
// absorbing element.
impl Serialize for LambdaValue {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LambdaValue::Infinity => ser.serialize_str("inf"),
            LambdaValue::Finite { std, eps } => {
                if eps.is_zero() {
                    ser.serialize_str(&std.to_string())
                } else {
                    use serde::ser::SerializeStruct;
                    let mut s = ser.serialize_struct("LambdaValue", 2)?;
                    s.serialize_field("std", &std.to_string())?;
                    s.serialize_field("eps", &eps.to_string())?;
                    s.end()
                }
            }
        }
    }
}

impl<'de> Deserialize<'de> for LambdaValue {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Short(String),
            Pair { std: String, eps: String },
        }
        match Wire::deserialize(de)? {
            Wire::Short(s) => LambdaValue::from_str(&s).map_err(D::Error::custom),
            Wire::Pair { std, eps } => Ok(LambdaValue::Finite {
                std: parse_rat(&std).map_err(D::Error::custom)?,
                eps: parse_rat(&eps).map_err(D::Error::custom)?,
            }),
        }
    }
}

impl Serialize for RationalValue {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalValue {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        if s.trim() == "inf" {
            Ok(RationalValue::Infinity)
        } else {
            Ok(RationalValue::Finite(
                parse_rat(&s).map_err(D::Error::custom)?,
            ))
        }
    }
}

/// True for a (small) prime; trial division is plenty at the scales used here.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|s| s <= n).unwrap_or(false) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// One (i.e. (1,0)) as a Lambda value; handy when forming gamma + 1.
pub fn lambda_one() -> LambdaValue {
    LambdaValue::Finite {
        std: Rat::one(),
        eps: Rat::zero(),
    }
}
