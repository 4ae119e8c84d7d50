//! The base valuation v_p on Q and Newton polygons.
//!
//! Slopes are stored so that the reported multiset directly lists root
//! valuations, i.e. the negative of each lower-hull slope, with the x-adic
//! part of the polynomial contributing roots of valuation `inf`.

use super::RatPoly;
use crate::error::{Error, Result};
use crate::value::{is_prime_u64, Rat, RationalValue};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// p-adic order of a nonzero integer.
pub fn int_val(p: u64, n: &BigInt) -> u64 {
    assert!(!n.is_zero(), "int_val of zero");
    if p == 2 {
        return n.trailing_zeros().unwrap();
    }
    // machine-word fast path covers almost every coefficient seen here
    if let Some(v) = num_traits::ToPrimitive::to_i128(n) {
        let mut m = v.unsigned_abs();
        let p = p as u128;
        let mut ord = 0u64;
        while m % p == 0 {
            m /= p;
            ord += 1;
        }
        return ord;
    }
    let p = BigInt::from(p);
    // Escalating powers keep this fast when the order is large.
    let mut powers = vec![p.clone()];
    loop {
        let last = powers.last().unwrap();
        let sq = last * last;
        if sq.bits() > n.bits() + 1 {
            break;
        }
        powers.push(sq);
    }
    let mut n = n.abs();
    let mut ord = 0u64;
    for (k, q) in powers.iter().enumerate().rev() {
        loop {
            let (quot, rem) = num_integer::Integer::div_rem(&n, q);
            if rem.is_zero() {
                ord += 1u64 << k;
                n = quot;
            } else {
                break;
            }
        }
    }
    ord
}

/// v_p(q) = (order of p in the numerator) - (order in the denominator),
/// normalized so v_p(p) = 1; v_p(0) = inf. Errors when p is not prime.
pub fn base_val(p: u64, q: &Rat) -> Result<RationalValue> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(vp_unchecked(p, q))
}

// Hot path for chains, whose prime was validated at construction.
pub(crate) fn vp_unchecked(p: u64, q: &Rat) -> RationalValue {
    if q.is_zero() {
        return RationalValue::Infinity;
    }
    let v = int_val(p, q.numer()) as i64 - int_val(p, q.denom()) as i64;
    RationalValue::from_int(v)
}

/// Lower convex hull of {(i, v_p(a_i)) : a_i != 0} for a nonconstant
/// polynomial, together with the root-valuation multiset it encodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Hull vertices, abscissas strictly increasing.
    pub vertices: Vec<(usize, Rat)>,
    /// Root valuations (negated hull slopes) with multiplicities, in hull
    /// order: non-increasing left to right.
    pub slopes: Vec<(Rat, usize)>,
    /// Multiplicity of the root 0, i.e. the x-adic valuation of f.
    pub x_adic: usize,
}

impl NewtonPolygon {
    pub fn build(p: u64, f: &RatPoly) -> Result<Self> {
        if f.is_constant() {
            return Err(Error::ConstantPolynomial(f.to_string()));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let mut points: Vec<(usize, Rat)> = Vec::new();
        for (i, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match base_val(p, c)? {
                RationalValue::Finite(v) => points.push((i, v)),
                RationalValue::Infinity => unreachable!("nonzero coefficient"),
            }
        }
        let x_adic = points[0].0;
        // Monotone scan: keep only vertices where the slope strictly
        // increases, comparing slopes by cross-multiplication.
        let mut hull: Vec<(usize, Rat)> = Vec::new();
        for (x, y) in points {
            while hull.len() >= 2 {
                let (x1, y1) = &hull[hull.len() - 2];
                let (x2, y2) = &hull[hull.len() - 1];
                // slope(p2 -> new) <= slope(p1 -> p2) means p2 is not a
                // vertex of the lower hull
                let lhs = (&y - y2) * Rat::from_integer(BigInt::from(x2 - x1));
                let rhs = (y2 - y1) * Rat::from_integer(BigInt::from(x - x2));
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((x, y));
        }
        let mut slopes = Vec::new();
        for w in hull.windows(2) {
            let (x1, y1) = &w[0];
            let (x2, y2) = &w[1];
            let mult = x2 - x1;
            let slope = (y2 - y1) / Rat::from_integer(BigInt::from(mult));
            slopes.push((-slope, mult));
        }
        Ok(NewtonPolygon {
            vertices: hull,
            slopes,
            x_adic,
        })
    }

    /// The multiset of valuations of the roots of f in the algebraic
    /// closure: `x_adic` copies of inf followed by the finite valuations in
    /// non-increasing order.
    pub fn root_valuations(&self) -> Vec<RationalValue> {
        let mut out = vec![RationalValue::Infinity; self.x_adic];
        for (v, m) in &self.slopes {
            for _ in 0..*m {
                out.push(RationalValue::Finite(v.clone()));
            }
        }
        out
    }

    /// Largest root valuation (inf when 0 is a root).
    pub fn max_root_valuation(&self) -> RationalValue {
        if self.x_adic > 0 {
            RationalValue::Infinity
        } else {
            // Hull slopes increase left to right, so root valuations
            // decrease; the first segment carries the maximum.
            RationalValue::Finite(self.slopes[0].0.clone())
        }
    }

    /// Total number of roots counted: deg f - (x-adic valuation) plus the
    /// x-adic part itself.
    pub fn root_count(&self) -> usize {
        self.x_adic + self.slopes.iter().map(|(_, m)| m).sum::<usize>()
    }
}

/// Sorted root valuations (descending, inf first) for multiset comparisons.
pub fn sorted_root_valuations(np: &NewtonPolygon) -> Vec<RationalValue> {
    let mut v = np.root_valuations();
    v.sort_by(|a, b| b.cmp(a));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat_i64;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    fn vals(prime: u64, f: &str) -> Vec<RationalValue> {
        sorted_root_valuations(&NewtonPolygon::build(prime, &p(f)).unwrap())
    }

    #[test]
    fn base_val_examples() {
        assert_eq!(
            base_val(2, &rat_i64(8, 3)).unwrap(),
            RationalValue::from_int(3)
        );
        assert_eq!(
            base_val(2, &rat_i64(0, 1)).unwrap(),
            RationalValue::Infinity
        );
        assert_eq!(
            base_val(3, &rat_i64(5, 9)).unwrap(),
            RationalValue::from_int(-2)
        );
        assert_eq!(base_val(4, &rat_i64(1, 1)), Err(Error::NotPrime(4)));
    }

    #[test]
    fn root_valuation_examples() {
        // x^2 + 2: hull of {(0,1),(2,0)}, both roots have v = 1/2
        assert_eq!(
            vals(2, "x^2 + 2"),
            vec![
                RationalValue::Finite(rat_i64(1, 2)),
                RationalValue::Finite(rat_i64(1, 2))
            ]
        );
        // x^2 - x: roots 0 (v = inf) and 1 (v = 0)
        assert_eq!(
            vals(2, "x^2 - x"),
            vec![RationalValue::Infinity, RationalValue::from_int(0)]
        );
        // x + 4: root -4 with v_2 = 2
        assert_eq!(vals(2, "x + 4"), vec![RationalValue::from_int(2)]);
        assert!(NewtonPolygon::build(2, &p("3")).is_err());
    }

    #[test]
    fn mixed_slopes() {
        // 4 + x + x^3 over v_2: points (0,2),(1,0),(3,0); hull vertices at
        // 0,1,3; root valuations 2 and 0 (twice)
        let np = NewtonPolygon::build(2, &p("x^3 + x + 4")).unwrap();
        assert_eq!(np.x_adic, 0);
        assert_eq!(
            sorted_root_valuations(&np),
            vec![
                RationalValue::from_int(2),
                RationalValue::from_int(0),
                RationalValue::from_int(0)
            ]
        );
        assert_eq!(np.max_root_valuation(), RationalValue::from_int(2));
        assert_eq!(np.root_count(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_nonconst(max_deg: usize) -> impl Strategy<Value = RatPoly> {
            (
                proptest::collection::vec((-40i64..=40, 1i64..=9), 1..=max_deg),
                -9i64..=9,
            )
                .prop_map(|(cs, lead)| {
                    let mut coeffs: Vec<Rat> = cs.into_iter().map(|(n, d)| rat_i64(n, d)).collect();
                    coeffs.push(rat_i64(if lead == 0 { 1 } else { lead }, 1));
                    RatPoly::new(coeffs)
                })
        }

        proptest! {
            #[test]
            fn product_rule(f in arb_nonconst(4), g in arb_nonconst(4), pidx in 0usize..3) {
                // slope multiset of f*g = union of the multisets of f and g
                let prime = [2u64, 3, 5][pidx];
                let fg = &f * &g;
                let mut lhs = sorted_root_valuations(&NewtonPolygon::build(prime, &fg).unwrap());
                let mut rhs = sorted_root_valuations(&NewtonPolygon::build(prime, &f).unwrap());
                rhs.extend(sorted_root_valuations(&NewtonPolygon::build(prime, &g).unwrap()));
                rhs.sort_by(|a, b| b.cmp(a));
                lhs.sort_by(|a, b| b.cmp(a));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn vp_multiplicative(an in -60i64..=60, ad in 1i64..=12, bn in -60i64..=60, bd in 1i64..=12, pidx in 0usize..3) {
                let prime = [2u64, 3, 5][pidx];
                let a = rat_i64(an, ad);
                let b = rat_i64(bn, bd);
                let lhs = base_val(prime, &(&a * &b)).unwrap();
                let rhs = &base_val(prime, &a).unwrap() + &base_val(prime, &b).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
