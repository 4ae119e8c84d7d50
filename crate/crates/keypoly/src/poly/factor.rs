//! Exact irreducibility over Q for small degrees.
//!
//! Strategy: squarefree test over Q, then factorization modulo one prime P
//! chosen larger than twice a Mignotte-style bound on factor coefficients,
//! followed by subset recombination of the modular factors and exact trial
//! division. With P that large no Hensel lifting is needed: every true
//! integer factor is visible directly in the symmetric residues mod P.

use super::RatPoly;
use crate::error::{Error, Result};
use crate::value::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Documented scope bound for `is_irreducible_q`.
pub const IRREDUCIBILITY_DEGREE_BOUND: usize = 8;

/// Exact irreducibility over Q. Errors on constants and on degrees above
/// [`IRREDUCIBILITY_DEGREE_BOUND`].
pub fn is_irreducible_q(f: &RatPoly) -> Result<bool> {
    let deg = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial(f.to_string())),
        Some(d) => d,
    };
    if deg > IRREDUCIBILITY_DEGREE_BOUND {
        return Err(Error::DegreeBound(deg, IRREDUCIBILITY_DEGREE_BOUND));
    }
    if deg == 1 {
        return Ok(true);
    }
    let g = primitive_integer_form(f);
    if g[0].is_zero() {
        // divisible by x (and deg >= 2)
        return Ok(false);
    }
    // repeated factor => reducible in degree >= 2
    let fq = RatPoly::new(g.iter().map(|c| Rat::from_integer(c.clone())).collect());
    if fq.gcd(&fq.hasse_derivative(1)).degree() != Some(0) {
        return Ok(false);
    }
    let prime = good_prime(&g);
    let modular = factor_monic_mod_p(&g, &prime);
    if modular.len() == 1 {
        return Ok(true);
    }
    Ok(!has_recombined_factor(&g, &modular, &prime))
}

/// Clear denominators and content; normalize the leading coefficient > 0.
fn primitive_integer_form(f: &RatPoly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let mut out: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let scaled = c * Rat::from_integer(lcm.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    let mut content = BigInt::zero();
    for c in &out {
        content = content.gcd(c);
    }
    if out.last().unwrap().is_negative() {
        content = -content;
    }
    for c in &mut out {
        *c = &*c / &content;
    }
    out
}

/// 2^deg * (ceil ||g||_2 + 1): every coefficient of lc(k)*h for a factor
/// g = h*k stays strictly below this.
fn mignotte_bound(g: &[BigInt]) -> BigInt {
    let norm_sq: BigInt = g.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + 1;
    norm << (g.len() - 1)
}

fn good_prime(g: &[BigInt]) -> BigInt {
    let lc = g.last().unwrap();
    let mut p: BigInt = (mignotte_bound(g) << 1) + 1;
    if p.is_even() {
        p += 1;
    }
    loop {
        if is_prime_bigint(&p) && !(lc % &p).is_zero() && squarefree_mod_p(g, &p) {
            return p;
        }
        p += 2;
    }
}

fn squarefree_mod_p(g: &[BigInt], p: &BigInt) -> bool {
    let f = reduce(g, p);
    let df = derivative_mod(&f, p);
    if df.is_empty() {
        return false;
    }
    gcd_mod(&f, &df, p).len() == 1
}

/// Miller-Rabin with the 12 smallest prime bases; deterministic for all
/// inputs below 3.3 * 10^24, far above anything produced here.
fn is_prime_bigint(n: &BigInt) -> bool {
    let small: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &small {
        let q = BigInt::from(q);
        if n == &q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'base: for &a in &small {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

// --- arithmetic in F_P[x]; polynomials as trimmed Vec<BigInt> with
// --- coefficients reduced into [0, P)

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(Zero::is_zero).unwrap_or(false) {
        v.pop();
    }
    v
}

fn reduce(g: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    trim(g.iter().map(|c| c.mod_floor(p)).collect())
}

fn derivative_mod(f: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (c * BigInt::from(i)).mod_floor(p))
            .collect(),
    )
}

fn mul_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out.into_iter().map(|c| c.mod_floor(p)).collect())
}

fn inv_mod(a: &BigInt, p: &BigInt) -> BigInt {
    a.modpow(&(p - 2), p)
}

fn make_monic(f: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let lc = f.last().expect("nonzero");
    if lc.is_one() {
        return f.to_vec();
    }
    let inv = inv_mod(lc, p);
    trim(f.iter().map(|c| (c * &inv).mod_floor(p)).collect())
}

/// Remainder of a modulo the monic polynomial m.
fn rem_mod(a: &[BigInt], m: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    debug_assert!(m.last().map(|c| c.is_one()).unwrap_or(false));
    let mut r: Vec<BigInt> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let k = r.len() - 1;
        let c = r[k].clone();
        if !c.is_zero() {
            for j in 0..dm {
                let t = (&m[j] * &c) % p;
                r[k - dm + j] = (&r[k - dm + j] - t).mod_floor(p);
            }
        }
        r.pop();
    }
    trim(r)
}

fn gcd_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let monic = make_monic(&b, p);
        let r = rem_mod(&a, &monic, p);
        a = monic;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        make_monic(&a, p)
    }
}

fn pow_mod(base: &[BigInt], exp: &BigInt, modulus: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let mut result = vec![BigInt::one()];
    let mut base = rem_mod(base, modulus, p);
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result = rem_mod(&mul_mod(&result, &base, p), modulus, p);
        }
        if i + 1 < bits {
            base = rem_mod(&mul_mod(&base, &base, p), modulus, p);
        }
    }
    result
}

fn x_poly() -> Vec<BigInt> {
    vec![BigInt::zero(), BigInt::one()]
}

/// Monic irreducible factors of g mod p (g squarefree mod p), via
/// distinct-degree factorization and Cantor-Zassenhaus splitting.
fn factor_monic_mod_p(g: &[BigInt], p: &BigInt) -> Vec<Vec<BigInt>> {
    let mut remaining = make_monic(&reduce(g, p), p);
    let mut factors: Vec<Vec<BigInt>> = Vec::new();
    let mut h = x_poly();
    let mut d = 0usize;
    while remaining.len() > 2 * (d + 1) {
        d += 1;
        h = pow_mod(&h, p, &remaining, p);
        // gcd(h - x, remaining) collects all irreducible factors of degree d
        let mut hx = h.clone();
        while hx.len() < 2 {
            hx.push(BigInt::zero());
        }
        hx[1] = (&hx[1] - BigInt::one()).mod_floor(p);
        let hx = trim(hx);
        let g_d = gcd_mod(&hx, &remaining, p);
        if g_d.len() > 1 {
            split_equal_degree(&g_d, d, p, &mut factors);
            remaining = divide_exact_mod(&remaining, &g_d, p);
            h = rem_mod(&h, &remaining, p);
        }
    }
    if remaining.len() > 1 {
        factors.push(remaining);
    }
    factors.sort();
    factors
}

fn divide_exact_mod(a: &[BigInt], b: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    // both monic, b | a
    let mut r: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k].clone();
        q[k - db] = c.clone();
        if !c.is_zero() {
            for j in 0..db {
                let t = (&b[j] * &c) % p;
                r[k - db + j] = (&r[k - db + j] - t).mod_floor(p);
            }
        }
        r.pop();
    }
    debug_assert!(trim(r).is_empty());
    trim(q)
}

fn split_equal_degree(f: &[BigInt], d: usize, p: &BigInt, out: &mut Vec<Vec<BigInt>>) {
    let deg = f.len() - 1;
    if deg == d {
        out.push(f.to_vec());
        return;
    }
    // a^((p^d - 1)/2) - 1 splits the roots by quadratic-residue class;
    // deterministic seed keeps runs reproducible.
    let exp = (p.pow(d as u32) - BigInt::one()) / BigInt::from(2u32);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65_7970 ^ deg as u64);
    loop {
        let a: Vec<BigInt> = (0..deg)
            .map(|_| BigInt::from(rng.gen::<u64>()) % p)
            .collect();
        let a = trim(a);
        if a.len() < 2 {
            continue;
        }
        let mut b = pow_mod(&a, &exp, f, p);
        if b.is_empty() {
            continue;
        }
        b[0] = (&b[0] - BigInt::one()).mod_floor(p);
        let b = trim(b);
        let g = gcd_mod(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            split_equal_degree(&g, d, p, out);
            split_equal_degree(&divide_exact_mod(f, &g, p), d, p, out);
            return;
        }
    }
}

/// Symmetric lift into (-p/2, p/2].
fn symmetric(c: &BigInt, p: &BigInt) -> BigInt {
    let r = c.mod_floor(p);
    if &r + &r > *p {
        r - p
    } else {
        r
    }
}

/// Try all subsets of the modular factors as candidate true factors; return
/// true when some proper factor of g is found.
fn has_recombined_factor(g: &[BigInt], modular: &[Vec<BigInt>], p: &BigInt) -> bool {
    let k = modular.len();
    let lc = g.last().unwrap();
    let deg_g = g.len() - 1;
    let g_rat = RatPoly::new(g.iter().map(|c| Rat::from_integer(c.clone())).collect());
    for mask in 1u32..(1 << k) - 1 {
        let total: usize = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| modular[i].len() - 1)
            .sum();
        if total == 0 || 2 * total > deg_g {
            continue;
        }
        let mut prod = vec![lc.mod_floor(p)];
        for (i, m) in modular.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod = mul_mod(&prod, m, p);
            }
        }
        let lifted: Vec<BigInt> = prod.iter().map(|c| symmetric(c, p)).collect();
        let mut content = BigInt::zero();
        for c in &lifted {
            content = content.gcd(c);
        }
        if content.is_zero() {
            continue;
        }
        let cand = RatPoly::new(
            lifted
                .iter()
                .map(|c| Rat::from_integer(c / &content))
                .collect(),
        );
        if cand.is_constant() {
            continue;
        }
        let (_, r) = g_rat.divmod(&cand).expect("nonzero candidate");
        if r.is_zero() {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn irr(s: &str) -> bool {
        is_irreducible_q(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn basic_verdicts() {
        assert!(irr("x^2 + 2"));
        assert!(!irr("x^2 - 1"));
        assert!(irr("x"));
        assert!(irr("x + 7"));
        assert!(!irr("x^2"));
        assert!(!irr("x^2 + x")); // divisible by x
        assert!(!irr("x^2 + 2*x + 1")); // square
    }

    #[test]
    fn hard_cases() {
        // reducible modulo every prime, irreducible over Q
        assert!(irr("x^4 + 1"));
        assert!(irr("x^4 - 10*x^2 + 1"));
        // Eisenstein at 2
        assert!(irr("x^6 + 2*x + 2"));
        // rational coefficients: 2x^2 + 1 irreducible, x^2 - 1/4 = (x-1/2)(x+1/2)
        assert!(irr("2*x^2 + 1"));
        assert!(!irr("x^2 - 1/4"));
        // product of two irreducible quadratics
        assert!(!irr("x^4 + 5*x^2 + 6"));
        // cubic with a rational root
        assert!(!irr("x^3 + x^2 - 2"));
        assert!(irr("x^3 - 2"));
        // degree 8 boundary
        assert!(irr("x^8 - 2"));
        assert!(!irr("x^8 - 1"));
    }

    #[test]
    fn scope_errors() {
        assert_eq!(
            is_irreducible_q(&"x^9 - 2".parse().unwrap()),
            Err(Error::DegreeBound(9, 8))
        );
        assert!(matches!(
            is_irreducible_q(&"5".parse().unwrap()),
            Err(Error::ConstantPolynomial(_))
        ));
    }

    #[test]
    fn prime_finder() {
        assert!(is_prime_bigint(&BigInt::from(1000003u64)));
        assert!(!is_prime_bigint(&BigInt::from(1000001u64)));
    }
}
