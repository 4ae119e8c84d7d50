//! Brute-force and independent verifiers backing the derived criteria:
//! bounded enumeration of polynomials, the quantifier form of the abstract
//! key test, seeded valuation-axiom checks and the epsilon/Newton-polygon
//! crosscheck. Reachable from the CLI through `selftest`.

use crate::error::{Error, Result};
use crate::limits::{CenterLaw, DeltaLaw, IncreasingFamily};
use crate::poly::{NewtonPolygon, RatPoly};
use crate::valuation::MacLaneChain;
use crate::value::{LambdaValue, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Bounds for a finite, deterministic enumeration of polynomials.
/// `height` bounds |numerator| and |denominator| of every coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumSpec {
    pub max_degree: usize,
    pub height: u32,
    pub monic_only: bool,
}

/// All reduced rationals n/d with |n|, d <= h, zero first, then ordered by
/// denominator, magnitude, sign.
pub fn rationals_of_height(h: u32) -> Vec<Rat> {
    let mut out = vec![Rat::from_integer(BigInt::from(0u32))];
    for d in 1..=h as i64 {
        for n in 1..=h as i64 {
            if n.gcd(&d) != 1 {
                continue;
            }
            out.push(Rat::new(BigInt::from(n), BigInt::from(d)));
            out.push(Rat::new(BigInt::from(-n), BigInt::from(d)));
        }
    }
    out
}

/// Number of monic polynomials of exactly the given degree at this height.
pub fn monic_poly_count(degree: usize, height: u32) -> usize {
    rationals_of_height(height).len().pow(degree as u32)
}

/// Decode the index-th monic polynomial of exactly the given degree
/// (odometer order over the coefficient table, constant term fastest).
pub fn monic_poly_at(degree: usize, values: &[Rat], mut index: usize) -> RatPoly {
    let mut coeffs = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        coeffs.push(values[index % values.len()].clone());
        index /= values.len();
    }
    coeffs.push(Rat::from_integer(BigInt::from(1u32)));
    RatPoly::new(coeffs)
}

/// All monic polynomials of exactly the given degree within the height.
pub fn monic_polys(degree: usize, height: u32) -> Vec<RatPoly> {
    let values = rationals_of_height(height);
    (0..values.len().pow(degree as u32))
        .map(|i| monic_poly_at(degree, &values, i))
        .collect()
}

/// Lazy degree-major enumeration of every polynomial within the bounds,
/// each exactly once. Monic enumerations start at degree 1; otherwise
/// degree 0 lists the nonzero constants.
pub fn enumerate_polys(spec: &EnumSpec) -> impl Iterator<Item = RatPoly> {
    let values = rationals_of_height(spec.height);
    let monic = spec.monic_only;
    let max_degree = spec.max_degree;
    let start = if monic { 1 } else { 0 };
    (start..=max_degree).flat_map(move |d| {
        let values = values.clone();
        let lead: Vec<Rat> = if monic {
            vec![Rat::from_integer(BigInt::from(1u32))]
        } else {
            values.iter().skip(1).cloned().collect()
        };
        let lower = values.len().pow(d as u32);
        (0..lead.len() * lower).map(move |idx| {
            let (li, rest) = (idx / lower, idx % lower);
            let mut poly = vec![Rat::from_integer(BigInt::from(0u32)); d + 1];
            let mut k = rest;
            for c in poly.iter_mut().take(d) {
                *c = values[k % values.len()].clone();
                k /= values.len();
            }
            poly[d] = lead[li].clone();
            RatPoly::new(poly)
        })
    })
}

/// Direct quantifier check of the abstract key definition over the
/// enumeration: every nonconstant f of smaller degree must satisfy
/// eps(f) < eps(Q).
pub fn brute_akp(mu: &MacLaneChain, q: &RatPoly, spec: &EnumSpec) -> Result<bool> {
    let eq = mu.epsilon(q)?;
    let dq = q.degree().unwrap_or(0);
    for f in enumerate_polys(spec) {
        let Some(df) = f.degree() else { continue };
        if df == 0 || df >= dq {
            continue;
        }
        if mu.epsilon(&f)? >= eq {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomFailure {
    pub kind: String,
    pub f: String,
    pub g: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<AxiomFailure>,
}

fn random_poly(rng: &mut ChaCha8Rng, values: &[Rat], max_degree: usize) -> RatPoly {
    loop {
        let d = rng.gen_range(0..=max_degree);
        let coeffs: Vec<Rat> = (0..=d)
            .map(|_| values[rng.gen_range(0..values.len())].clone())
            .collect();
        let f = RatPoly::new(coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Check mu(fg) = mu(f) + mu(g) and the ultrametric inequality (with
/// equality on distinct values) on seeded random pairs; reports the first
/// counterexample. A chain whose trusted step is not a genuine key
/// polynomial fails multiplicativity here.
pub fn brute_valuation_axioms(mu: &MacLaneChain, samples: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = rationals_of_height(4);
    for case in 0..samples {
        let f = random_poly(&mut rng, &values, 3);
        let g = random_poly(&mut rng, &values, 3);
        let vf = mu.evaluate(&f);
        let vg = mu.evaluate(&g);
        let prod = mu.evaluate(&(&f * &g));
        let expected = &vf + &vg;
        if prod != expected {
            return AxiomReport {
                pass: false,
                cases: case + 1,
                failure: Some(AxiomFailure {
                    kind: "multiplicativity".into(),
                    f: f.to_string(),
                    g: g.to_string(),
                    detail: format!("mu(fg) = {prod} but mu(f) + mu(g) = {expected}"),
                }),
            };
        }
        let sum = mu.evaluate(&(&f + &g));
        let min = vf.clone().min(vg.clone());
        let bad_ultra = sum < min || (vf != vg && sum != min);
        if bad_ultra {
            return AxiomReport {
                pass: false,
                cases: case + 1,
                failure: Some(AxiomFailure {
                    kind: "ultrametric".into(),
                    f: f.to_string(),
                    g: g.to_string(),
                    detail: format!("mu(f+g) = {sum}, min = {min}"),
                }),
            };
        }
    }
    AxiomReport {
        pass: true,
        cases: samples,
        failure: None,
    }
}

/// Independent check of the root-distance reading of eps: over the chain
/// v_{c,delta}, eps(f) must equal min(delta, largest root valuation of
/// f(x + c)) read off the Newton polygon.
pub fn eps_np_crosscheck(p: u64, c: &Rat, delta: &Rat, f: &RatPoly) -> Result<bool> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial(f.to_string()));
    }
    let delta_l = LambdaValue::from_rat(delta.clone());
    let mu = MacLaneChain::monomial(p, c, delta_l.clone())?;
    let eps = mu.epsilon(f)?;
    let np = NewtonPolygon::build(p, &f.shift(c))?;
    let expected = delta_l.min(np.max_root_valuation().to_lambda());
    Ok(eps == expected)
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestSummary {
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

/// Fixture chains over small primes used by the selftest suites.
pub fn fixture_chains() -> Vec<MacLaneChain> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        let g0 = MacLaneChain::gauss(p, LambdaValue::from_int(0)).unwrap();
        let gh = MacLaneChain::gauss(p, LambdaValue::from_i64(1, 2)).unwrap();
        let vt = MacLaneChain::gauss(
            p,
            LambdaValue::new(
                Rat::from_integer(BigInt::from(0u32)),
                Rat::from_integer(BigInt::from(1u32)),
            ),
        )
        .unwrap();
        let phi: RatPoly = format!("x^2 + {p}").parse().unwrap();
        let depth2 = gh.augment(&phi, LambdaValue::from_i64(3, 2)).unwrap();
        let depth3 = depth2.augment(&phi, LambdaValue::from_i64(7, 3)).unwrap();
        out.extend([g0, gh, vt, depth2, depth3]);
    }
    out
}

fn crosscheck_suite(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = rationals_of_height(8);
    let deltas: Vec<Rat> = (-2..=4)
        .map(|n| Rat::from_integer(BigInt::from(n)))
        .chain([
            Rat::new(BigInt::from(1), BigInt::from(2)),
            Rat::new(BigInt::from(1), BigInt::from(3)),
            Rat::new(BigInt::from(5), BigInt::from(2)),
        ])
        .collect();
    let coeffs = rationals_of_height(8);
    let cases: Vec<(u64, Rat, Rat, RatPoly)> = (0..samples)
        .map(|_| {
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let c = centers[rng.gen_range(0..centers.len())].clone();
            let d = deltas[rng.gen_range(0..deltas.len())].clone();
            let deg = rng.gen_range(1..=6);
            let mut poly: Vec<Rat> = (0..deg)
                .map(|_| coeffs[rng.gen_range(0..coeffs.len())].clone())
                .collect();
            poly.push(Rat::from_integer(BigInt::from(1u32)));
            (p, c, d, RatPoly::new(poly))
        })
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(p, c, d, f)| match eps_np_crosscheck(*p, c, d, f) {
            Ok(true) => None,
            Ok(false) => Some(format!("mismatch at p={p}, c={c}, delta={d}, f={f}")),
            Err(e) => Some(format!("error at p={p}, c={c}, delta={d}, f={f}: {e}")),
        })
        .collect();
    SuiteResult {
        suite: "eps_np_crosscheck".into(),
        cases: samples,
        failures,
    }
}

fn axioms_suite(seed: u64, samples: usize) -> SuiteResult {
    let chains = fixture_chains();
    let failures: Vec<String> = chains
        .par_iter()
        .enumerate()
        .filter_map(|(i, mu)| {
            let report = brute_valuation_axioms(mu, samples, seed ^ i as u64);
            report.failure.map(|f| {
                format!(
                    "chain {i} over p={}: {} on f={}, g={}: {}",
                    mu.p(),
                    f.kind,
                    f.f,
                    f.g,
                    f.detail
                )
            })
        })
        .collect();
    SuiteResult {
        suite: "valuation_axioms".into(),
        cases: chains.len() * samples,
        failures,
    }
}

fn akp_suite() -> SuiteResult {
    let chains = fixture_chains();
    let spec = EnumSpec {
        max_degree: 2,
        height: 3,
        monic_only: true,
    };
    let candidates: Vec<RatPoly> = monic_polys(1, 3)
        .into_iter()
        .chain(monic_polys(2, 3))
        .chain(monic_polys(3, 2))
        .collect();
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for (i, mu) in chains.iter().enumerate() {
        let results: Vec<Option<String>> = candidates
            .par_iter()
            .map(|q| {
                let effective = mu.is_abstract_key(q).expect("monic nonconstant");
                let brute = brute_akp(mu, q, &spec).expect("sound spec");
                if effective != brute {
                    Some(format!(
                        "chain {i} over p={}: is_abstract_key({q}) = {effective}, brute = {brute}",
                        mu.p()
                    ))
                } else {
                    None
                }
            })
            .collect();
        cases += candidates.len();
        failures.extend(results.into_iter().flatten());
    }
    SuiteResult {
        suite: "abstract_key".into(),
        cases,
        failures,
    }
}

fn limit_suite() -> SuiteResult {
    let mut failures = Vec::new();
    let fam = IncreasingFamily::monomial(2, CenterLaw::SumPow2, DeltaLaw::KPlus1, 16)
        .expect("registry law");
    match fam.find_limit_kp(2, 4, 12) {
        Ok(found) => {
            let expected: RatPoly = "x + 1".parse().unwrap();
            if found != vec![expected] {
                failures.push(format!("sum_2^k limit keys: {found:?}"));
            }
        }
        Err(e) => failures.push(format!("sum_2^k scan failed: {e}")),
    }
    match IncreasingFamily::monomial(2, CenterLaw::SumPow2Factorial, DeltaLaw::KPlus1Factorial, 8)
        .and_then(|f| f.find_limit_kp(2, 3, 8))
    {
        Ok(found) if found.is_empty() => {}
        Ok(found) => failures.push(format!("liouville limit keys: {found:?}")),
        Err(e) => failures.push(format!("liouville scan failed: {e}")),
    }
    SuiteResult {
        suite: "limit_behavior".into(),
        cases: 2,
        failures,
    }
}

/// Run all oracle suites with one seed; the CLI `selftest` command prints
/// the summary as JSON.
pub fn selftest(seed: u64, samples: usize) -> SelftestSummary {
    let suites = vec![
        crosscheck_suite(seed, samples),
        axioms_suite(seed.wrapping_add(1), samples.min(500)),
        akp_suite(),
        limit_suite(),
    ];
    let passed = suites.iter().all(|s| s.failures.is_empty());
    SelftestSummary { suites, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat_i64;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    fn lam(n: i64, d: i64) -> LambdaValue {
        LambdaValue::from_i64(n, d)
    }

    fn mu2() -> MacLaneChain {
        MacLaneChain::gauss(2, lam(1, 2))
            .unwrap()
            .augment(&p("x^2 + 2"), lam(3, 2))
            .unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let monic1: Vec<RatPoly> = enumerate_polys(&EnumSpec {
            max_degree: 1,
            height: 1,
            monic_only: true,
        })
        .collect();
        assert_eq!(monic1, vec![p("x"), p("x + 1"), p("x - 1")]);

        let consts: Vec<RatPoly> = enumerate_polys(&EnumSpec {
            max_degree: 0,
            height: 2,
            monic_only: false,
        })
        .collect();
        assert_eq!(consts.len(), 6);
        assert!(consts.contains(&p("-2")) && consts.contains(&p("1/2")));
        assert!(!consts.contains(&RatPoly::zero()));

        let count = enumerate_polys(&EnumSpec {
            max_degree: 2,
            height: 1,
            monic_only: true,
        })
        .count();
        assert_eq!(count, 12);
    }

    #[test]
    fn enumeration_unique() {
        let all: Vec<RatPoly> = enumerate_polys(&EnumSpec {
            max_degree: 2,
            height: 2,
            monic_only: false,
        })
        .collect();
        let mut strings: Vec<String> = all.iter().map(|f| f.to_string()).collect();
        let n = strings.len();
        strings.sort();
        strings.dedup();
        assert_eq!(strings.len(), n, "each polynomial exactly once");
    }

    #[test]
    fn brute_akp_examples() {
        let mu = mu2();
        let spec = EnumSpec {
            max_degree: 1,
            height: 8,
            monic_only: true,
        };
        assert!(brute_akp(&mu, &p("x^2 + 2"), &spec).unwrap());
        assert!(!brute_akp(&mu, &p("x^2"), &spec).unwrap());
        // vacuous quantifier
        let empty = EnumSpec {
            max_degree: 0,
            height: 8,
            monic_only: false,
        };
        let g0 = MacLaneChain::gauss(2, lam(0, 1)).unwrap();
        assert!(brute_akp(&g0, &p("x + 5"), &empty).unwrap());
    }

    #[test]
    fn axioms_pass_on_legit_chains() {
        let r = brute_valuation_axioms(&mu2(), 1000, 42);
        assert!(r.pass, "{:?}", r.failure);
        let g3 = MacLaneChain::gauss(3, lam(1, 3)).unwrap();
        assert!(brute_valuation_axioms(&g3, 1000, 7).pass);
    }

    #[test]
    fn axioms_catch_forced_non_key() {
        // x^2 - 1 = (x-1)(x+1) is not a key polynomial for gauss(2,0); the
        // formula chain is not multiplicative and the oracle finds a witness
        let forced = MacLaneChain::gauss(2, lam(0, 1))
            .unwrap()
            .augment_trusted(&p("x^2 - 1"), lam(1, 1))
            .unwrap();
        let r = brute_valuation_axioms(&forced, 1000, 42);
        assert!(!r.pass);
        assert_eq!(r.failure.unwrap().kind, "multiplicativity");
    }

    #[test]
    fn crosscheck_examples() {
        let zero = rat_i64(0, 1);
        assert!(eps_np_crosscheck(2, &zero, &rat_i64(1, 1), &p("x^2 + 2")).unwrap());
        assert!(eps_np_crosscheck(2, &zero, &rat_i64(0, 1), &p("x^2 + 2")).unwrap());
        // root exactly at the center: eps = delta
        assert!(eps_np_crosscheck(2, &rat_i64(-4, 1), &rat_i64(5, 1), &p("x + 4")).unwrap());
        assert!(eps_np_crosscheck(2, &zero, &rat_i64(1, 1), &p("9")).is_err());
    }

    #[test]
    fn is_key_consistent_with_brute_reconstructions() {
        use crate::valuation::{KeyBounds, KeyVerdict};
        let bounds = KeyBounds {
            height: 4,
            known_keys: vec![],
        };
        // every Yes at the minimal degree supports an augmentation passing
        // the axiom oracle
        let mu = MacLaneChain::gauss(2, lam(1, 2)).unwrap();
        for c in [0i64, 2, -2, 4] {
            let phi = RatPoly::x_minus(&rat_i64(-c, 1));
            if mu.is_key(&phi, &bounds).unwrap() == KeyVerdict::Yes {
                let gamma = &mu.evaluate(&phi) + &LambdaValue::from_int(1);
                let eta = mu.augment(&phi, gamma).unwrap();
                assert!(brute_valuation_axioms(&eta, 400, 11).pass, "x + {c}");
            }
        }
        // every No through initial-form divisibility exhibits the value jump
        let g0 = MacLaneChain::gauss(2, lam(0, 1)).unwrap();
        let f = p("x^2 + 2");
        assert_eq!(g0.is_key(&f, &bounds).unwrap(), KeyVerdict::No);
        assert!(g0.divides_initial(&p("x"), &f).unwrap(), "witness jump");
    }

    #[test]
    fn selftest_small_run_passes() {
        let summary = selftest(42, 60);
        assert!(summary.passed, "{:?}", summary);
        assert_eq!(summary.suites.len(), 4);
    }
}
