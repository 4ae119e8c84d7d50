//! MacLane chains: valuations on Q[x] presented as a monomial base step
//! plus a stack of augmentations, with evaluation, epsilon/delta invariants,
//! key-polynomial tests and the ball-criterion comparison.

use crate::error::{Error, Result};
use crate::limits::IncreasingFamily;
use crate::oracle;
use crate::poly::{is_irreducible_q, RatPoly};
use crate::value::{lambda_one, LambdaValue, Rat};
use std::fmt;
use std::sync::OnceLock;

/// One augmentation step (phi, gamma). `trusted` records that the key test
/// was bypassed when the step was attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugStep {
    pub phi: RatPoly,
    pub gamma: LambdaValue,
    pub trusted: bool,
}

/// Base of a chain: either the monomial (Gauss) valuation sending x to
/// gamma0, or a limit augmentation over an increasing family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainBase {
    Gauss { gamma0: LambdaValue },
    Limit(Box<LimitBase>),
}

/// A limit augmentation [C; phi, gamma]: coefficients of phi-expansions are
/// evaluated by stable scan along the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitBase {
    pub family: IncreasingFamily,
    pub phi: RatPoly,
    pub gamma: LambdaValue,
    pub anchor: usize,
}

/// Residue-transcendental iff delta lies in Gamma (zero eps component).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationClass {
    ResidueTranscendental,
    ValueTranscendental,
}

impl fmt::Display for ValuationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationClass::ResidueTranscendental => write!(f, "residue-transcendental"),
            ValuationClass::ValueTranscendental => write!(f, "value-transcendental"),
        }
    }
}

/// Outcome of the semi-decidable key test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyVerdict {
    Yes,
    No,
    UnknownAtBound,
}

/// Bounds for the key test's candidate enumeration, plus caller-supplied
/// intermediate key polynomials that are trusted outright.
#[derive(Debug, Clone)]
pub struct KeyBounds {
    pub height: u32,
    pub known_keys: Vec<RatPoly>,
}

impl Default for KeyBounds {
    fn default() -> Self {
        KeyBounds {
            height: 4,
            known_keys: Vec::new(),
        }
    }
}

/// A valuation on Q[x] as a MacLane chain over (Q, v_p).
#[derive(Debug, Clone)]
pub struct MacLaneChain {
    p: u64,
    base: ChainBase,
    steps: Vec<AugStep>,
    key_eps: OnceLock<Vec<(usize, LambdaValue)>>,
}

impl PartialEq for MacLaneChain {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.base == other.base && self.steps == other.steps
    }
}

impl Eq for MacLaneChain {}

impl MacLaneChain {
    /// The monomial valuation with mu(x) = gamma0 and v_p on constants.
    pub fn gauss(p: u64, gamma0: LambdaValue) -> Result<Self> {
        if !crate::value::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if gamma0.is_infinite() {
            return Err(Error::Invalid("gamma0 must be finite".into()));
        }
        Ok(MacLaneChain {
            p,
            base: ChainBase::Gauss { gamma0 },
            steps: Vec::new(),
            key_eps: OnceLock::new(),
        })
    }

    /// The restriction of v_{c,delta} to Q[x], presented as a chain: a Gauss
    /// base below delta followed by a degree-1 augmentation at x - c.
    pub fn monomial(p: u64, center: &Rat, delta: LambdaValue) -> Result<Self> {
        if delta.is_infinite() {
            return Err(Error::Invalid("radius must be finite".into()));
        }
        if num_traits::Zero::is_zero(center) {
            return Self::gauss(p, delta);
        }
        let vc = crate::poly::base_val(p, center)?.to_lambda();
        let below = &delta - &lambda_one();
        let gamma0 = below.min(vc);
        let base = Self::gauss(p, gamma0)?;
        base.augment(&RatPoly::x_minus(center), delta)
    }

    pub(crate) fn limit_based(
        family: IncreasingFamily,
        phi: RatPoly,
        gamma: LambdaValue,
        anchor: usize,
    ) -> Self {
        MacLaneChain {
            p: family.p(),
            base: ChainBase::Limit(Box::new(LimitBase {
                family,
                phi,
                gamma,
                anchor,
            })),
            steps: Vec::new(),
            key_eps: OnceLock::new(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn base(&self) -> &ChainBase {
        &self.base
    }

    pub fn steps(&self) -> &[AugStep] {
        &self.steps
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn is_limit_based(&self) -> bool {
        matches!(self.base, ChainBase::Limit(_))
    }

    /// The chain truncated to its first `depth` steps.
    pub fn prefix(&self, depth: usize) -> MacLaneChain {
        MacLaneChain {
            p: self.p,
            base: self.base.clone(),
            steps: self.steps[..depth.min(self.steps.len())].to_vec(),
            key_eps: OnceLock::new(),
        }
    }

    /// All proper and improper prefixes, shallowest first.
    pub fn prefixes(&self) -> Vec<MacLaneChain> {
        (0..=self.steps.len()).map(|d| self.prefix(d)).collect()
    }

    /// deg(mu): the degree of the last key polynomial.
    pub fn degree(&self) -> usize {
        match self.steps.last() {
            Some(s) => s.phi.degree().expect("steps are nonconstant"),
            None => match &self.base {
                ChainBase::Gauss { .. } => 1,
                ChainBase::Limit(lb) => lb.phi.degree().expect("nonconstant"),
            },
        }
    }

    /// The chain's key polynomials with their assigned values, base first.
    pub fn keys(&self) -> Vec<(RatPoly, LambdaValue)> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        match &self.base {
            ChainBase::Gauss { gamma0 } => out.push((RatPoly::x(), gamma0.clone())),
            ChainBase::Limit(lb) => out.push((lb.phi.clone(), lb.gamma.clone())),
        }
        for s in &self.steps {
            out.push((s.phi.clone(), s.gamma.clone()));
        }
        out
    }

    pub fn last_key(&self) -> RatPoly {
        match self.steps.last() {
            Some(s) => s.phi.clone(),
            None => match &self.base {
                ChainBase::Gauss { .. } => RatPoly::x(),
                ChainBase::Limit(lb) => lb.phi.clone(),
            },
        }
    }

    pub fn gamma_last(&self) -> LambdaValue {
        match self.steps.last() {
            Some(s) => s.gamma.clone(),
            None => match &self.base {
                ChainBase::Gauss { gamma0 } => gamma0.clone(),
                ChainBase::Limit(lb) => lb.gamma.clone(),
            },
        }
    }

    /// mu(f), computed recursively: phi-expansions down the chain, the
    /// monomial formula (or the stable limit scan) at the base. mu(0) = inf.
    pub fn evaluate(&self, f: &RatPoly) -> LambdaValue {
        self.eval_at(self.steps.len(), f)
    }

    fn eval_at(&self, depth: usize, f: &RatPoly) -> LambdaValue {
        if f.is_zero() {
            return LambdaValue::Infinity;
        }
        if depth == 0 {
            return self.eval_base(f);
        }
        let step = &self.steps[depth - 1];
        let expansion = f
            .phi_expansion(&step.phi)
            .expect("step keys monic nonconstant");
        let mut best = LambdaValue::Infinity;
        for (i, fi) in expansion.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let v = &self.eval_at(depth - 1, fi) + &step.gamma.mul_nat(i);
            if v < best {
                best = v;
            }
        }
        best
    }

    fn eval_base(&self, f: &RatPoly) -> LambdaValue {
        match &self.base {
            ChainBase::Gauss { gamma0 } => {
                let mut best = LambdaValue::Infinity;
                for (i, c) in f.coeffs().iter().enumerate() {
                    if num_traits::Zero::is_zero(c) {
                        continue;
                    }
                    let vc = crate::poly::vp_unchecked(self.p, c).to_lambda();
                    let v = &vc + &gamma0.mul_nat(i);
                    if v < best {
                        best = v;
                    }
                }
                best
            }
            ChainBase::Limit(lb) => {
                let expansion = f
                    .phi_expansion(&lb.phi)
                    .expect("limit key monic nonconstant");
                let mut best = LambdaValue::Infinity;
                for (i, fi) in expansion.iter().enumerate() {
                    if fi.is_zero() {
                        continue;
                    }
                    let stable = lb
                        .family
                        .stable_eval(fi)
                        .expect("nonzero expansion coefficient");
                    let v = &stable.value + &lb.gamma.mul_nat(i);
                    if v < best {
                        best = v;
                    }
                }
                best
            }
        }
    }

    /// eps(f) = max over 1 <= s <= deg f of (mu(f) - mu(hasse_s f)) / s.
    pub fn epsilon(&self, f: &RatPoly) -> Result<LambdaValue> {
        let deg = match f.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial(f.to_string())),
            Some(d) => d,
        };
        let vf = self.evaluate(f);
        let mut best: Option<LambdaValue> = None;
        for s in 1..=deg {
            let ds = f.hasse_derivative(s);
            if ds.is_zero() {
                continue; // impossible in characteristic 0, kept as a guard
            }
            let val = (&vf - &self.evaluate(&ds)).div_int(s as u64)?;
            best = Some(match best {
                None => val,
                Some(b) => b.max(val),
            });
        }
        Ok(best.expect("s = deg f always contributes"))
    }

    /// Cached (degree, eps) for each chain key polynomial, base first.
    pub fn key_eps(&self) -> &[(usize, LambdaValue)] {
        self.key_eps.get_or_init(|| {
            self.keys()
                .iter()
                .map(|(phi, _)| {
                    (
                        phi.degree().expect("keys nonconstant"),
                        self.epsilon(phi).expect("keys nonconstant"),
                    )
                })
                .collect()
        })
    }

    /// delta(mu) = eps of the last key polynomial: the radius of the ball
    /// attached to mu.
    pub fn delta(&self) -> LambdaValue {
        self.key_eps()
            .last()
            .expect("at least the base key")
            .1
            .clone()
    }

    pub fn classify(&self) -> ValuationClass {
        if self.delta().is_in_gamma() {
            ValuationClass::ResidueTranscendental
        } else {
            ValuationClass::ValueTranscendental
        }
    }

    /// True when in_mu f is a unit, decided by eps(f) < delta(mu). Nonzero
    /// constants are units; the zero polynomial has no initial form.
    pub fn is_unit_initial(&self, f: &RatPoly) -> bool {
        match f.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.epsilon(f).expect("nonconstant") < self.delta(),
        }
    }

    fn require_accepted_key(&self, phi: &RatPoly) -> Result<()> {
        if !phi.is_monic() {
            return Err(Error::NotMonic(phi.to_string()));
        }
        if phi.is_constant() {
            return Err(Error::ConstantPolynomial(phi.to_string()));
        }
        if self.epsilon(phi)? != self.delta() {
            return Err(Error::KeyNotAccepted(phi.to_string()));
        }
        Ok(())
    }

    /// Append a step without any validation; legitimate exactly when phi is
    /// a key polynomial for the current chain.
    fn formula_augmented(&self, phi: &RatPoly, gamma: LambdaValue, trusted: bool) -> Self {
        let mut steps = self.steps.clone();
        steps.push(AugStep {
            phi: phi.clone(),
            gamma,
            trusted,
        });
        MacLaneChain {
            p: self.p,
            base: self.base.clone(),
            steps,
            key_eps: OnceLock::new(),
        }
    }

    /// Whether in_mu phi divides in_mu f in the graded algebra, decided by
    /// one formula augmentation: raise phi's value by 1 and test whether
    /// f's value moves.
    pub fn divides_initial(&self, phi: &RatPoly, f: &RatPoly) -> Result<bool> {
        self.require_accepted_key(phi)?;
        if f.is_zero() {
            return Err(Error::Invalid(
                "the zero polynomial has no initial form".into(),
            ));
        }
        let bumped = &self.evaluate(phi) + &lambda_one();
        let eta = self.formula_augmented(phi, bumped, true);
        Ok(eta.evaluate(f) > self.evaluate(f))
    }

    /// Abstract key test: eps(Q) must strictly dominate the eps of every
    /// chain key polynomial of smaller degree (x always counts in degree 1).
    /// Degree-1 polynomials are abstract keys unconditionally.
    pub fn is_abstract_key(&self, q: &RatPoly) -> Result<bool> {
        if !q.is_monic() {
            return Err(Error::NotMonic(q.to_string()));
        }
        let dq = match q.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial(q.to_string())),
            Some(d) => d,
        };
        if dq == 1 {
            return Ok(true);
        }
        let eq = self.epsilon(q)?;
        let mut bound: Option<&LambdaValue> = None;
        for (dk, eps) in self.key_eps() {
            if *dk < dq && bound.map(|b| eps > b).unwrap_or(true) {
                bound = Some(eps);
            }
        }
        match bound {
            Some(b) => Ok(eq > *b),
            // No chain key below deg Q (possible over a limit base whose key
            // has large degree): fall back to comparing against x.
            None => Ok(eq > self.epsilon(&RatPoly::x())?),
        }
    }

    /// The truncation mu_Q: min over the Q-expansion of mu(f_i) + i*mu(Q).
    /// Requires Q to be an abstract key polynomial, which makes the
    /// truncation a valuation below mu.
    pub fn truncate_value(&self, q: &RatPoly, f: &RatPoly) -> Result<LambdaValue> {
        if !self.is_abstract_key(q)? {
            return Err(Error::NotAbstractKey(q.to_string()));
        }
        if f.is_zero() {
            return Ok(LambdaValue::Infinity);
        }
        let vq = self.evaluate(q);
        let mut best = LambdaValue::Infinity;
        for (i, fi) in f.phi_expansion(q)?.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let v = &self.evaluate(fi) + &vq.mul_nat(i);
            if v < best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Exact test for "Q is a key polynomial for mu of minimal degree":
    /// Q is an abstract key of degree deg(mu) and the truncation mu_Q agrees
    /// with mu, which reduces to one value check on the last key polynomial.
    pub fn is_key_min_degree(&self, q: &RatPoly) -> bool {
        if !q.is_monic() || q.is_constant() {
            return false;
        }
        if q.degree() != Some(self.degree()) {
            return false;
        }
        if !self.is_abstract_key(q).unwrap_or(false) {
            return false;
        }
        let diff = &self.last_key() - q;
        let v = self.evaluate(q).min(self.evaluate(&diff));
        v == self.gamma_last()
    }

    /// Semi-decidable key test.
    ///
    /// No: f reducible, or its initial form is a unit, or a smaller-degree
    /// accepted key divides its initial form. Yes: minimal degree with the
    /// exact test, or larger degree with eps = delta and no enumerated or
    /// supplied candidate key dividing the initial form. UnknownAtBound
    /// otherwise; enlarging `bounds.height` refines the answer.
    pub fn is_key(&self, f: &RatPoly, bounds: &KeyBounds) -> Result<KeyVerdict> {
        if !f.is_monic() {
            return Err(Error::NotMonic(f.to_string()));
        }
        if f.is_constant() {
            return Ok(KeyVerdict::No);
        }
        if !is_irreducible_q(f)? {
            return Ok(KeyVerdict::No);
        }
        if self.is_unit_initial(f) {
            return Ok(KeyVerdict::No);
        }
        let d = self.degree();
        let df = f.degree().expect("nonconstant");
        if df == d {
            // exact at the minimal degree
            return Ok(if self.is_key_min_degree(f) {
                KeyVerdict::Yes
            } else {
                KeyVerdict::No
            });
        }
        if df < d {
            // a non-unit below deg(mu) cannot arise from a well-formed
            // chain; refuse to guess
            return Ok(KeyVerdict::UnknownAtBound);
        }
        let last = self.last_key();
        if self.divides_initial(&last, f)? {
            return Ok(KeyVerdict::No);
        }
        let delta = self.delta();
        let mut unknown_divider = false;
        for k in &bounds.known_keys {
            if !k.is_monic() || k.is_constant() || k == &last {
                continue;
            }
            let dk = k.degree().unwrap();
            if dk < d || dk >= df {
                continue;
            }
            if self.epsilon(k)? != delta {
                continue; // unit initial form cannot divide a non-unit
            }
            if self.divides_initial(k, f)? {
                return Ok(KeyVerdict::No);
            }
        }
        for dk in d..df {
            for g in oracle::monic_polys(dk, bounds.height) {
                if g == last || bounds.known_keys.contains(&g) {
                    continue;
                }
                if self.epsilon(&g)? != delta {
                    continue;
                }
                let verdict = if dk == d {
                    if self.is_key_min_degree(&g) {
                        KeyVerdict::Yes
                    } else {
                        KeyVerdict::No
                    }
                } else {
                    self.is_key(&g, bounds)?
                };
                match verdict {
                    KeyVerdict::No => {}
                    KeyVerdict::Yes => {
                        if self.divides_initial(&g, f)? {
                            return Ok(KeyVerdict::No);
                        }
                    }
                    KeyVerdict::UnknownAtBound => {
                        if self.divides_initial(&g, f)? {
                            unknown_divider = true;
                        }
                    }
                }
            }
        }
        Ok(if unknown_divider {
            KeyVerdict::UnknownAtBound
        } else {
            KeyVerdict::Yes
        })
    }

    fn validate_augmentation(&self, phi: &RatPoly, gamma: &LambdaValue) -> Result<()> {
        if !phi.is_monic() {
            return Err(Error::NotMonic(phi.to_string()));
        }
        if phi.is_constant() {
            return Err(Error::ConstantPolynomial(phi.to_string()));
        }
        if gamma.is_infinite() {
            return Err(Error::Invalid(
                "infinite gamma would give the augmentation nontrivial support".into(),
            ));
        }
        let current = self.evaluate(phi);
        if *gamma <= current {
            return Err(Error::NotAugmentation {
                gamma: gamma.to_string(),
                current: current.to_string(),
            });
        }
        Ok(())
    }

    /// The ordinary augmentation [mu; phi, gamma]. phi must pass the key
    /// test (exact at the minimal degree, semi-decision above it) and gamma
    /// must exceed mu(phi).
    pub fn augment(&self, phi: &RatPoly, gamma: LambdaValue) -> Result<Self> {
        self.augment_with_bounds(phi, gamma, &KeyBounds::default())
    }

    pub fn augment_with_bounds(
        &self,
        phi: &RatPoly,
        gamma: LambdaValue,
        bounds: &KeyBounds,
    ) -> Result<Self> {
        self.validate_augmentation(phi, &gamma)?;
        match self.is_key(phi, bounds)? {
            KeyVerdict::Yes => Ok(self.formula_augmented(phi, gamma, false)),
            KeyVerdict::No => Err(Error::KeyRejected(phi.to_string())),
            KeyVerdict::UnknownAtBound => Err(Error::KeyUndecided(phi.to_string())),
        }
    }

    /// Augmentation with the key test bypassed. The gamma condition is still
    /// enforced. A non-key phi produces a formula that is not a valuation;
    /// `oracle::brute_valuation_axioms` exhibits the failure.
    pub fn augment_trusted(&self, phi: &RatPoly, gamma: LambdaValue) -> Result<Self> {
        self.validate_augmentation(phi, &gamma)?;
        Ok(self.formula_augmented(phi, gamma, true))
    }

    /// Tangent-direction equivalence of two accepted key polynomials:
    /// equal degree and mu(f - g) > mu(f).
    pub fn same_direction(&self, f: &RatPoly, g: &RatPoly) -> Result<bool> {
        self.require_accepted_key(f)?;
        self.require_accepted_key(g)?;
        if f.degree() != g.degree() {
            return Ok(false);
        }
        Ok(self.evaluate(&(f - g)) > self.evaluate(f))
    }

    /// Decides mu <= eta through the ball criterion: delta(mu) <= delta(eta)
    /// and eta's last key polynomial has a root in mu's ball (eps test).
    /// Restricted to chain-represented valuations.
    pub fn leq(&self, eta: &MacLaneChain) -> Result<bool> {
        if self.p != eta.p {
            return Err(Error::MismatchedPrimes(self.p, eta.p));
        }
        if self.is_limit_based() || eta.is_limit_based() {
            return Err(Error::LimitChain);
        }
        let dm = self.delta();
        if dm > eta.delta() {
            return Ok(false);
        }
        Ok(self.epsilon(&eta.last_key())? == dm)
    }

    pub fn equivalent(&self, eta: &MacLaneChain) -> Result<bool> {
        Ok(self.leq(eta)? && eta.leq(self)?)
    }
}
