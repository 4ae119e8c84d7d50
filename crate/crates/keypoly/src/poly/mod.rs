//! Dense univariate polynomials over Q with exact arithmetic: division,
//! phi-expansions, Hasse-Schmidt derivatives, recentering, Newton polygons
//! and irreducibility over Q.

mod factor;
mod newton;
mod text;

pub use factor::{is_irreducible_q, IRREDUCIBILITY_DEGREE_BOUND};
pub(crate) use newton::vp_unchecked;
pub use newton::{base_val, int_val, sorted_root_valuations, NewtonPolygon};

use crate::error::{Error, Result};
use crate::value::Rat;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// A polynomial over Q, stored densely: `coeffs[i]` is the coefficient of
/// x^i. No trailing zeros; the zero polynomial is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatPoly::new(vec![c])
    }

    /// The monomial c * x^k.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    pub fn x() -> Self {
        RatPoly::monomial(Rat::one(), 1)
    }

    /// x - c, the degree-1 polynomial recentering at c.
    pub fn x_minus(c: &Rat) -> Self {
        RatPoly::new(vec![-c, Rat::one()])
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        RatPoly::new(
            coeffs
                .iter()
                .map(|&n| Rat::from_integer(BigInt::from(n)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// None for the zero polynomial (degree "minus infinity").
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = RatPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact Euclidean division: f = q*g + r with deg r < deg g.
    pub fn divmod(&self, g: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        if g.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let dg = g.degree().unwrap();
        if self.degree().map(|df| df < dg).unwrap_or(true) {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let df = self.degree().unwrap();
        let lead_inv = g.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); df - dg + 1];
        for k in (dg..=df).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] * &lead_inv;
            for j in 0..dg {
                let t = &g.coeffs[j] * &q;
                rem[k - dg + j] = &rem[k - dg + j] - &t;
            }
            rem[k] = Rat::zero();
            quot[k - dg] = q;
        }
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// The phi-expansion f = sum f_i phi^i with deg f_i < deg phi, returned
    /// as (f_0, f_1, ...). Computed by repeated division. phi must be monic
    /// and nonconstant.
    pub fn phi_expansion(&self, phi: &RatPoly) -> Result<Vec<RatPoly>> {
        if !phi.is_monic() {
            return Err(Error::NotMonic(phi.to_string()));
        }
        if phi.is_constant() {
            return Err(Error::ConstantPolynomial(phi.to_string()));
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        while !rest.is_zero() {
            let (q, r) = rest.divmod(phi)?;
            out.push(r);
            rest = q;
        }
        Ok(out)
    }

    /// The s-th Hasse-Schmidt derivative: sum_{i>=s} C(i,s) a_i x^{i-s},
    /// which satisfies f(x+y) = sum_s (hasse_s f)(x) y^s.
    pub fn hasse_derivative(&self, s: usize) -> RatPoly {
        if s == 0 {
            return self.clone();
        }
        let Some(df) = self.degree() else {
            return RatPoly::zero();
        };
        if s > df {
            return RatPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(df - s + 1);
        for i in s..=df {
            // C(i, s) fits u64 far beyond the degrees handled here
            let b = if i <= 60 {
                BigInt::from(binomial(i as u64, s as u64))
            } else {
                binomial(BigInt::from(i), BigInt::from(s))
            };
            coeffs.push(&self.coeffs[i] * Rat::from_integer(b));
        }
        RatPoly::new(coeffs)
    }

    /// f(x + c), exact recentering.
    pub fn shift(&self, c: &Rat) -> RatPoly {
        if c.is_zero() || self.is_constant() {
            return self.clone();
        }
        // Repeated synthetic division by (x - c) yields the Taylor
        // coefficients of f at c, which are the coefficients of f(x + c).
        let n = self.coeffs.len();
        let mut a = self.coeffs.clone();
        for k in 0..n - 1 {
            for j in (k..n - 1).rev() {
                let t = &a[j + 1] * c;
                a[j] = &a[j] + &t;
            }
        }
        RatPoly::new(a)
    }

    /// Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divmod(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) if !l.is_one() => {
                let inv = l.recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        RatPoly::new(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        RatPoly::new(coeffs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                coeffs[i + j] = &coeffs[i + j] + &t;
            }
        }
        RatPoly::new(coeffs)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::format_poly(self, f)
    }
}

impl FromStr for RatPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        text::parse_poly(s)
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        RatPoly::from_str(&s).map_err(D::Error::custom)
    }
}
