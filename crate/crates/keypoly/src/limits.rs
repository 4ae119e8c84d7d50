//! Increasing families of chain valuations, stable evaluation with
//! unit-initial certificates, instability scans, limit key polynomial
//! search and limit augmentation.

use crate::error::{Error, Result};
use crate::oracle;
use crate::poly::RatPoly;
use crate::valuation::MacLaneChain;
use crate::value::{LambdaValue, Rat};
use num_bigint::BigInt;
use num_traits::One;

/// Named center laws for monomial families a_i, delta_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterLaw {
    /// a_i = sum_{k<=i} 2^k = 2^{i+1} - 1; pseudo-converges to -1 in Z_2.
    SumPow2,
    /// a_i = sum_{k<=i} 2^{k!}; the pseudo-limit is transcendental.
    SumPow2Factorial,
    /// a_i = 0 for all i.
    Zero,
}

/// Named radius laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaLaw {
    /// delta_i = i + 1.
    KPlus1,
    /// delta_i = (i + 1)!.
    KPlus1Factorial,
    /// delta_i = i.
    K,
}

impl CenterLaw {
    pub fn name(&self) -> &'static str {
        match self {
            CenterLaw::SumPow2 => "sum_2^k",
            CenterLaw::SumPow2Factorial => "sum_2^k_factorial",
            CenterLaw::Zero => "zero",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sum_2^k" => Ok(CenterLaw::SumPow2),
            "sum_2^k_factorial" => Ok(CenterLaw::SumPow2Factorial),
            "zero" => Ok(CenterLaw::Zero),
            _ => Err(Error::Parse(format!("unknown center law {name:?}"))),
        }
    }

    /// Largest usable scan cap; the factorial law grows 2^{k!} and is
    /// capped where the integers stay at desk scale.
    pub fn max_cap(&self) -> usize {
        match self {
            CenterLaw::SumPow2Factorial => 10,
            _ => 4096,
        }
    }

    pub fn center(&self, i: usize) -> Rat {
        match self {
            CenterLaw::SumPow2 => {
                let a = (BigInt::one() << (i + 1)) - 1;
                Rat::from_integer(a)
            }
            CenterLaw::SumPow2Factorial => {
                let mut acc = BigInt::from(0u32);
                for k in 0..=i {
                    acc += BigInt::one() << (factorial_u64(k as u64) as usize);
                }
                Rat::from_integer(acc)
            }
            CenterLaw::Zero => Rat::from_integer(BigInt::from(0u32)),
        }
    }
}

impl DeltaLaw {
    pub fn name(&self) -> &'static str {
        match self {
            DeltaLaw::KPlus1 => "k_plus_1",
            DeltaLaw::KPlus1Factorial => "k_plus_1_factorial",
            DeltaLaw::K => "k",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "k_plus_1" => Ok(DeltaLaw::KPlus1),
            "k_plus_1_factorial" => Ok(DeltaLaw::KPlus1Factorial),
            "k" => Ok(DeltaLaw::K),
            _ => Err(Error::Parse(format!("unknown delta law {name:?}"))),
        }
    }

    pub fn delta(&self, i: usize) -> LambdaValue {
        match self {
            DeltaLaw::KPlus1 => LambdaValue::from_int(i as i64 + 1),
            DeltaLaw::KPlus1Factorial => {
                let mut acc = BigInt::one();
                for k in 2..=(i as u64 + 1) {
                    acc *= k;
                }
                LambdaValue::from_rat(Rat::from_integer(acc))
            }
            DeltaLaw::K => LambdaValue::from_int(i as i64),
        }
    }
}

// Only used for shift amounts, where the center law caps keep k small.
fn factorial_u64(n: u64) -> u64 {
    (1..=n).product::<u64>().max(1)
}

/// Deterministic index -> chain generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyGen {
    MonomialCenters {
        p: u64,
        centers: CenterLaw,
        deltas: DeltaLaw,
    },
    Explicit(Vec<MacLaneChain>),
}

/// How strict increase along the family is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneMode {
    /// Proven by the generator's contract (closed-form distance law).
    ByConstruction,
    /// Checked eagerly on the prefix of the given length at construction.
    CheckedPrefix(usize),
}

/// A strictly increasing family of chain valuations, generated lazily and
/// scanned up to `scan_cap` (indices 0..scan_cap).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncreasingFamily {
    gen: FamilyGen,
    monotone: MonotoneMode,
    scan_cap: usize,
}

/// Result of a stable scan: the value at the witness index, certified when
/// the initial form became a unit there (which freezes the value for every
/// later index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableResult {
    pub value: LambdaValue,
    pub witness_index: usize,
    pub certified: bool,
}

impl IncreasingFamily {
    /// Family of monomial valuations v_{a_i, delta_i} from named laws;
    /// monotonicity holds by the laws' distance contracts
    /// (v(a_i - a_j) = delta_i for i < j, or constant centers).
    pub fn monomial(p: u64, centers: CenterLaw, deltas: DeltaLaw, cap: usize) -> Result<Self> {
        if !crate::value::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if cap == 0 {
            return Err(Error::Invalid("scan cap must be positive".into()));
        }
        if cap > centers.max_cap() {
            return Err(Error::FamilyCap(cap, centers.max_cap()));
        }
        Ok(IncreasingFamily {
            gen: FamilyGen::MonomialCenters { p, centers, deltas },
            monotone: MonotoneMode::ByConstruction,
            scan_cap: cap,
        })
    }

    /// Finite family given by explicit chains; strict increase is checked
    /// eagerly on the whole list.
    pub fn explicit(chains: Vec<MacLaneChain>) -> Result<Self> {
        if chains.is_empty() {
            return Err(Error::Invalid("empty family".into()));
        }
        let p = chains[0].p();
        for c in &chains {
            if c.p() != p {
                return Err(Error::MismatchedPrimes(p, c.p()));
            }
            if c.is_limit_based() {
                return Err(Error::LimitChain);
            }
        }
        let n = chains.len();
        let fam = IncreasingFamily {
            gen: FamilyGen::Explicit(chains),
            monotone: MonotoneMode::CheckedPrefix(n),
            scan_cap: n,
        };
        fam.check_prefix(n)?;
        Ok(fam)
    }

    /// Re-validate strict increase on a prefix and record the mode.
    pub fn with_checked_prefix(mut self, n: usize) -> Result<Self> {
        self.check_prefix(n.min(self.scan_cap))?;
        self.monotone = MonotoneMode::CheckedPrefix(n.min(self.scan_cap));
        Ok(self)
    }

    fn check_prefix(&self, n: usize) -> Result<()> {
        let chains: Vec<MacLaneChain> = (0..n).map(|i| self.chain_at(i)).collect::<Result<_>>()?;
        for i in 0..chains.len() {
            for j in i + 1..chains.len() {
                let up = chains[i].leq(&chains[j])?;
                let down = chains[j].leq(&chains[i])?;
                if !up || down {
                    return Err(Error::FamilyNotIncreasing(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        match &self.gen {
            FamilyGen::MonomialCenters { p, .. } => *p,
            FamilyGen::Explicit(chains) => chains[0].p(),
        }
    }

    pub fn scan_cap(&self) -> usize {
        self.scan_cap
    }

    pub fn monotone(&self) -> MonotoneMode {
        self.monotone
    }

    pub fn generator(&self) -> &FamilyGen {
        &self.gen
    }

    /// The i-th member; pure and deterministic.
    pub fn chain_at(&self, i: usize) -> Result<MacLaneChain> {
        if i >= self.scan_cap {
            return Err(Error::FamilyIndex(i, self.scan_cap));
        }
        match &self.gen {
            FamilyGen::MonomialCenters { p, centers, deltas } => {
                MacLaneChain::monomial(*p, &centers.center(i), deltas.delta(i))
            }
            FamilyGen::Explicit(chains) => chains
                .get(i)
                .cloned()
                .ok_or(Error::FamilyIndex(i, chains.len())),
        }
    }

    /// Scan for a stable value of f. A certificate at index i means
    /// eps_{mu_i}(f) < delta_i: the initial form of f is a unit there and
    /// mu_j(f) = mu_i(f) for every j > i. Without a certificate within the
    /// cap the last value is returned flagged uncertified.
    pub fn stable_eval(&self, f: &RatPoly) -> Result<StableResult> {
        if f.is_zero() {
            return Err(Error::Invalid("stable_eval of the zero polynomial".into()));
        }
        if f.is_constant() {
            // nonzero constants are units everywhere with a fixed value
            let mu0 = self.chain_at(0)?;
            return Ok(StableResult {
                value: mu0.evaluate(f),
                witness_index: 0,
                certified: true,
            });
        }
        let mut last: Option<(LambdaValue, usize)> = None;
        for i in 0..self.scan_cap {
            let mu = self.chain_at(i)?;
            if mu.epsilon(f)? < mu.delta() {
                return Ok(StableResult {
                    value: mu.evaluate(f),
                    witness_index: i,
                    certified: true,
                });
            }
            last = Some((mu.evaluate(f), i));
        }
        let (value, witness_index) = last.expect("positive scan cap");
        Ok(StableResult {
            value,
            witness_index,
            certified: false,
        })
    }

    /// True when the initial form of f is a non-unit at every scanned level
    /// i < n, the effective (bounded) reading of instability.
    pub fn is_unstable_up_to(&self, f: &RatPoly, n: usize) -> Result<bool> {
        if n > self.scan_cap {
            return Err(Error::Invalid(format!(
                "scan bound {n} exceeds the family cap {}",
                self.scan_cap
            )));
        }
        if f.is_constant() {
            return Ok(false);
        }
        for i in 0..n {
            let mu = self.chain_at(i)?;
            if mu.epsilon(f)? < mu.delta() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Enumerate monic polynomials by increasing degree and return all at
    /// the smallest degree where some polynomial stays unstable through n
    /// levels; empty when everything certifies stable at these bounds.
    pub fn find_limit_kp(&self, max_degree: usize, height: u32, n: usize) -> Result<Vec<RatPoly>> {
        for d in 1..=max_degree {
            let mut found = Vec::new();
            for g in oracle::monic_polys(d, height) {
                if self.is_unstable_up_to(&g, n)? {
                    found.push(g);
                }
            }
            if !found.is_empty() {
                return Ok(found);
            }
        }
        Ok(Vec::new())
    }

    /// The limit augmentation [C; phi, gamma]: a chain whose base evaluates
    /// phi-expansion coefficients by stable scan. phi should come from
    /// `find_limit_kp` or be caller-trusted; gamma must exceed every scanned
    /// value of phi up to the anchor.
    pub fn limit_augment(
        &self,
        phi: &RatPoly,
        gamma: LambdaValue,
        anchor: usize,
    ) -> Result<MacLaneChain> {
        if !phi.is_monic() {
            return Err(Error::NotMonic(phi.to_string()));
        }
        if phi.is_constant() {
            return Err(Error::ConstantPolynomial(phi.to_string()));
        }
        if gamma.is_infinite() {
            return Err(Error::Invalid("gamma must be finite".into()));
        }
        if anchor >= self.scan_cap {
            return Err(Error::FamilyIndex(anchor, self.scan_cap));
        }
        for i in 0..=anchor {
            let v = self.chain_at(i)?.evaluate(phi);
            if gamma <= v {
                return Err(Error::LimitGamma {
                    gamma: gamma.to_string(),
                    index: i,
                    value: v.to_string(),
                });
            }
        }
        Ok(MacLaneChain::limit_based(
            self.clone(),
            phi.clone(),
            gamma,
            anchor,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat_i64;

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    fn sum2k(cap: usize) -> IncreasingFamily {
        IncreasingFamily::monomial(2, CenterLaw::SumPow2, DeltaLaw::KPlus1, cap).unwrap()
    }

    fn liouville(cap: usize) -> IncreasingFamily {
        IncreasingFamily::monomial(
            2,
            CenterLaw::SumPow2Factorial,
            DeltaLaw::KPlus1Factorial,
            cap,
        )
        .unwrap()
    }

    #[test]
    fn center_laws() {
        assert_eq!(CenterLaw::SumPow2.center(0), rat_i64(1, 1));
        assert_eq!(CenterLaw::SumPow2.center(2), rat_i64(7, 1));
        // 2^{0!} + 2^{1!} + 2^{2!} = 2 + 2 + 4
        assert_eq!(CenterLaw::SumPow2Factorial.center(2), rat_i64(8, 1));
        assert_eq!(DeltaLaw::KPlus1Factorial.delta(2), LambdaValue::from_int(6));
    }

    #[test]
    fn generated_chains_increase() {
        let fam = sum2k(8).with_checked_prefix(6).unwrap();
        assert_eq!(fam.monotone(), MonotoneMode::CheckedPrefix(6));
        let a = fam.chain_at(1).unwrap();
        assert_eq!(a.evaluate(&p("x - 3")), LambdaValue::from_int(2));
        assert!(fam.chain_at(8).is_err());
    }

    #[test]
    fn liouville_chains_increase() {
        liouville(5).with_checked_prefix(5).unwrap();
    }

    #[test]
    fn stable_eval_examples() {
        let fam = sum2k(16);
        // f = x - 1: certified at index 1 with value v2(a_1 - 1) = v2(2) = 1
        let r = fam.stable_eval(&p("x - 1")).unwrap();
        assert_eq!(r.value, LambdaValue::from_int(1));
        assert_eq!(r.witness_index, 1);
        assert!(r.certified);
        // f = x + 1: eps = delta at every level, never certified
        let r = fam.stable_eval(&p("x + 1")).unwrap();
        assert!(!r.certified);
        assert_eq!(r.witness_index, 15);
        // Liouville family: x^2 + x has roots 0 and -1 at bounded distance
        let r = liouville(8).stable_eval(&p("x^2 + x")).unwrap();
        assert!(r.certified);
        assert!(r.witness_index <= 2);
        // constants certify at index 0
        let r = fam.stable_eval(&p("12")).unwrap();
        assert!(r.certified);
        assert_eq!(r.value, LambdaValue::from_int(2));
        assert!(fam.stable_eval(&RatPoly::zero()).is_err());
    }

    #[test]
    fn instability_examples() {
        let fam = sum2k(16);
        assert!(fam.is_unstable_up_to(&p("x + 1"), 10).unwrap());
        assert!(!fam.is_unstable_up_to(&p("x - 1"), 10).unwrap());
        assert!(!fam.is_unstable_up_to(&p("1"), 10).unwrap());
        assert!(fam.is_unstable_up_to(&p("x + 1"), 17).is_err());
    }

    #[test]
    fn find_limit_kp_examples() {
        // sum 2^k: the unique pseudo-limit is -1, minimal polynomial x + 1
        let fam = sum2k(16);
        assert_eq!(fam.find_limit_kp(2, 4, 12).unwrap(), vec![p("x + 1")]);
        // Liouville: transcendental pseudo-limit, everything certifies
        assert_eq!(
            liouville(8).find_limit_kp(3, 4, 8).unwrap(),
            Vec::<RatPoly>::new()
        );
        // gauss(2, i): x itself is unstable
        let gfam = IncreasingFamily::monomial(2, CenterLaw::Zero, DeltaLaw::K, 12).unwrap();
        assert_eq!(gfam.find_limit_kp(1, 2, 10).unwrap(), vec![p("x")]);
    }

    #[test]
    fn limit_kp_outputs_are_minimal_monic_irreducible() {
        let fam = sum2k(16);
        let found = fam.find_limit_kp(3, 4, 12).unwrap();
        assert!(!found.is_empty());
        let d = found[0].degree().unwrap();
        for f in &found {
            assert!(f.is_monic());
            assert_eq!(f.degree(), Some(d), "all at the minimal degree");
            assert!(crate::poly::is_irreducible_q(f).unwrap());
        }
        // a higher-degree unstable polynomial exists but is not returned
        assert!(fam.is_unstable_up_to(&p("x^2 + 2*x + 1"), 12).unwrap());
        assert_eq!(d, 1);
    }

    #[test]
    fn limit_augment_examples() {
        let fam = sum2k(16);
        let mu = fam
            .limit_augment(&p("x + 1"), LambdaValue::from_int(20), 12)
            .unwrap();
        assert_eq!(mu.evaluate(&p("x + 1")), LambdaValue::from_int(20));
        assert_eq!(mu.evaluate(&p("x - 1")), LambdaValue::from_int(1));
        assert_eq!(mu.degree(), 1);
        // gamma below a scanned value errors
        let err = fam.limit_augment(&p("x + 1"), LambdaValue::from_int(5), 12);
        assert!(matches!(err, Err(Error::LimitGamma { .. })));
        // monomial limit over gauss deltas
        let gfam = IncreasingFamily::monomial(2, CenterLaw::Zero, DeltaLaw::K, 64).unwrap();
        let mu = gfam
            .limit_augment(&p("x"), LambdaValue::from_int(100), 50)
            .unwrap();
        assert_eq!(mu.evaluate(&p("x")), LambdaValue::from_int(100));
    }

    #[test]
    fn certificate_soundness_spotcheck() {
        // samples avoid the pseudo-limit -1 as a root, so each certifies
        let fam = sum2k(24);
        for f in [p("x - 1"), p("x + 3"), p("x^2 + 2*x"), p("x^2 - 2")] {
            let r = fam.stable_eval(&f).unwrap();
            assert!(r.certified, "{f} should certify");
            for j in r.witness_index + 1..(r.witness_index + 11).min(24) {
                assert_eq!(
                    fam.chain_at(j).unwrap().evaluate(&f),
                    r.value,
                    "frozen value at index {j} for {f}"
                );
            }
        }
    }

    #[test]
    fn monotone_values_while_uncertified() {
        let fam = sum2k(12);
        let f = p("x + 1");
        let mut prev: Option<LambdaValue> = None;
        for i in 0..12 {
            let v = fam.chain_at(i).unwrap().evaluate(&f);
            if let Some(pv) = prev {
                assert!(v > pv, "strictly increasing while uncertified");
            }
            prev = Some(v);
        }
    }

    #[test]
    fn stable_value_matches_evaluation_at_center() {
        // certified monomial families with rational centers: value is
        // v_p(f(a_i)) at the witness
        let fam = liouville(8);
        for f in [p("x - 1"), p("x^2 + x"), p("x^3 - 2")] {
            let r = fam.stable_eval(&f).unwrap();
            assert!(r.certified);
            let a = CenterLaw::SumPow2Factorial.center(r.witness_index);
            let direct = crate::poly::base_val(2, &f.eval(&a)).unwrap().to_lambda();
            assert_eq!(r.value, direct, "v(f(a_i)) for {f}");
        }
    }

    #[test]
    fn explicit_family_validation() {
        let c0 = MacLaneChain::gauss(2, LambdaValue::from_int(0)).unwrap();
        let c1 = MacLaneChain::gauss(2, LambdaValue::from_int(1)).unwrap();
        let fam = IncreasingFamily::explicit(vec![c0.clone(), c1.clone()]).unwrap();
        assert_eq!(fam.scan_cap(), 2);
        // decreasing order is rejected
        assert!(matches!(
            IncreasingFamily::explicit(vec![c1, c0]),
            Err(Error::FamilyNotIncreasing(0, 1))
        ));
    }
}
