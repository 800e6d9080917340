//! The localization `R_f` as a unit module over the twisted polynomial ring
//! `R[F]` (relation `r^p F = F r`), and the chain machinery built on it.
//!
//! Elements of `R_f` are fractions `g/f^k` in canonical form (`k` minimal);
//! `R`-submodules are carried as pairs `(I, t)` meaning `I · f^{-t}`, with
//! membership and containment decided by clearing denominators — `R` is a
//! domain, so `R -> R_f` is injective and no saturation is needed.
//!
//! On top of that sit the certificates:
//!
//! * [`generation_witness`] — the least level `e` with
//!   `f^{-N} ∈ D^(e) · f^{-1}`, the desk-scale form of "`R_f` is generated
//!   by `f^{-1}`";
//! * [`chain_report`] — the pullback chain `M ⊆ F^*M ⊆ F^{2*}M ⊆ ...` with
//!   root ideals, stabilization summary and a witness table;
//! * [`is_unit_submodule`] — UNIT/STRICT certificates for submodules with
//!   `M ⊆ F^*M`, exhibiting the strictly ascending chain in the strict case;
//! * [`root_check`] — the three clauses making a generator set a root whose
//!   members generate the whole module over the differential operators.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::diffop::DiffOp;
use crate::error::Error;
use crate::frobenius::root_ideal;
use crate::groebner::Ideal;
use crate::ring::{exact_divide, q_of, Polynomial};
use crate::Result;

/// An element `g / f^k` of `R_f` in canonical form: when `k > 0`, `f` does
/// not divide `g` exactly; the zero element is stored as `0 / f^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedElement {
    f: Polynomial,
    num: Polynomial,
    k: u64,
}

impl LocalizedElement {
    pub fn new(f: Polynomial, num: Polynomial, k: u64) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if f.ctx() != num.ctx() {
            return Err(Error::ContextMismatch);
        }
        let mut num = num;
        let mut k = k;
        if num.is_zero() {
            k = 0;
        } else {
            while k > 0 {
                match exact_divide(&num, &f)? {
                    Some(q) => {
                        num = q;
                        k -= 1;
                    }
                    None => break,
                }
            }
        }
        Ok(LocalizedElement { f, num, k })
    }

    /// `f^{-n}`.
    pub fn inverse_power(f: Polynomial, n: u64) -> Result<Self> {
        let one = Polynomial::one(f.ctx().clone());
        LocalizedElement::new(f, one, n)
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator_exponent(&self) -> u64 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality of `g1/f^{k1}` and `g2/f^{k2}` by cross-multiplication; with
    /// canonical forms this agrees with structural equality, which the tests
    /// pin down.
    pub fn cross_eq(&self, other: &LocalizedElement) -> bool {
        assert_eq!(self.f, other.f, "elements live over different localizations");
        let lhs = self.num.mul(&self.f.pow(other.k));
        let rhs = other.num.mul(&other.f.pow(self.k));
        lhs == rhs
    }

    /// The Frobenius action on `R_f`: raising to the `p`-th power.
    pub fn frobenius_action(&self) -> Result<LocalizedElement> {
        let p = self.f.ctx().p();
        let num = self.num.frobenius_power(1)?;
        let k = self.k.checked_mul(p).ok_or(Error::ExponentOverflow)?;
        LocalizedElement::new(self.f.clone(), num, k)
    }

    /// The inverse structural map of the unit module: sends `a/f^k` to the
    /// formal pair `(a·f^{k(p-1)}, 1/f^k)`; contracting the pair through
    /// [`UnitStructure::theta`] recovers the element.
    pub fn theta_inverse(&self) -> Result<(Polynomial, LocalizedElement)> {
        let p = self.f.ctx().p();
        let exp = self.k.checked_mul(p - 1).ok_or(Error::ExponentOverflow)?;
        let u = self.num.mul(&self.f.pow_base_p(exp)?);
        let v = LocalizedElement::inverse_power(self.f.clone(), self.k)?;
        Ok((u, v))
    }

    pub fn scalar_mul(&self, r: &Polynomial) -> Result<LocalizedElement> {
        LocalizedElement::new(self.f.clone(), self.num.mul(r), self.k)
    }

    pub fn add(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        assert_eq!(self.f, other.f, "elements live over different localizations");
        let k = self.k.max(other.k);
        let a = self.num.mul(&self.f.pow(k - self.k));
        let b = other.num.mul(&other.f.pow(k - other.k));
        LocalizedElement::new(self.f.clone(), a.add(&b), k)
    }

    pub fn mul(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        assert_eq!(self.f, other.f, "elements live over different localizations");
        let k = self.k.checked_add(other.k).ok_or(Error::ExponentOverflow)?;
        LocalizedElement::new(self.f.clone(), self.num.mul(&other.num), k)
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})^{}", self.num, self.f, self.k)
        }
    }
}

/// The unit-module structure on `R_f`: the Frobenius action, the structural
/// contraction `θ` and its inverse.
#[derive(Clone, Debug)]
pub struct UnitStructure {
    f: Polynomial,
}

impl UnitStructure {
    pub fn new(f: Polynomial) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(UnitStructure { f })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    /// `F(m) = m^p`, satisfying `F(r·m) = r^p·F(m)`.
    pub fn frobenius(&self, m: &LocalizedElement) -> Result<LocalizedElement> {
        m.frobenius_action()
    }

    /// The structural contraction: `θ(u ⊗ v) = u · v^p`.
    pub fn theta(&self, u: &Polynomial, v: &LocalizedElement) -> Result<LocalizedElement> {
        v.frobenius_action()?.scalar_mul(u)
    }

    /// See [`LocalizedElement::theta_inverse`].
    pub fn theta_inverse(
        &self,
        m: &LocalizedElement,
    ) -> Result<(Polynomial, LocalizedElement)> {
        m.theta_inverse()
    }
}

/// The `R`-submodule `I · f^{-t}` of `R_f`.
#[derive(Clone, Debug)]
pub struct FracSubmodule {
    f: Polynomial,
    ideal: Ideal,
    t: u64,
}

impl FracSubmodule {
    pub fn new(f: Polynomial, ideal: Ideal, t: u64) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if *ideal.ctx() != *f.ctx() {
            return Err(Error::ContextMismatch);
        }
        Ok(FracSubmodule { f, ideal, t })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn denominator_exponent(&self) -> u64 {
        self.t
    }

    /// Membership of `g/f^k`: clear denominators on whichever side is
    /// shallower.
    pub fn contains_element(&self, m: &LocalizedElement) -> Result<bool> {
        if self.f != *m.f() {
            return Err(Error::ContextMismatch);
        }
        let k = m.denominator_exponent();
        if self.t >= k {
            let lifted = m.numerator().mul(&self.f.pow_base_p(self.t - k)?);
            self.ideal.contains_poly(&lifted)
        } else {
            let scaled = self.ideal.scale(&self.f.pow_base_p(k - self.t)?);
            scaled.contains_poly(m.numerator())
        }
    }

    /// `other ⊆ self`, by clearing both denominators to the larger exponent.
    pub fn contains(&self, other: &FracSubmodule) -> Result<bool> {
        if self.f != other.f {
            return Err(Error::ContextMismatch);
        }
        let u = self.t.max(other.t);
        let lhs = other.ideal.scale(&self.f.pow_base_p(u - other.t)?);
        let rhs = self.ideal.scale(&self.f.pow_base_p(u - self.t)?);
        rhs.contains_ideal(&lhs)
    }

    pub fn equals(&self, other: &FracSubmodule) -> Result<bool> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    pub fn sum(&self, other: &FracSubmodule) -> Result<FracSubmodule> {
        if self.f != other.f {
            return Err(Error::ContextMismatch);
        }
        let u = self.t.max(other.t);
        let a = self.ideal.scale(&self.f.pow_base_p(u - self.t)?);
        let b = other.ideal.scale(&self.f.pow_base_p(u - other.t)?);
        FracSubmodule::new(self.f.clone(), a.sum(&b), u)
    }

    /// The Frobenius pullback `F^*M` under the identification `θ`: the
    /// submodule of elements `r·m^p`, computed as `(I^[p], p·t)`.
    pub fn pullback(&self) -> Result<FracSubmodule> {
        let p = self.f.ctx().p();
        let t = self.t.checked_mul(p).ok_or(Error::ExponentOverflow)?;
        FracSubmodule::new(self.f.clone(), self.ideal.bracket_power(1)?, t)
    }

    /// The `e`-fold pullback `(I^[p^e], t·p^e)`.
    pub fn pullback_pow(&self, e: u32) -> Result<FracSubmodule> {
        let q = q_of(self.f.ctx().p(), e)?;
        let t = self.t.checked_mul(q).ok_or(Error::ExponentOverflow)?;
        FracSubmodule::new(self.f.clone(), self.ideal.bracket_power(e)?, t)
    }

    /// Canonical serialized view: reduced basis strings plus the exponent.
    pub fn to_json(&self) -> Result<FracSubmoduleJson> {
        Ok(FracSubmoduleJson {
            ideal: self.ideal.basis_strings()?,
            t: self.t,
        })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FracSubmoduleJson {
    pub ideal: Vec<String>,
    pub t: u64,
}

/// `D^(e) · m` for `m = g/f^k`: lift the denominator to a `p^e`-th power
/// `f^{q·m'}`, act on the numerator `u = g·f^{q·m'-k}` through the level-`e`
/// orbit, and divide back out. Independent of enlarging `m'`.
pub fn de_generated(m: &LocalizedElement, e: u32) -> Result<FracSubmodule> {
    assert!(e >= 1, "operator level must be at least 1");
    de_generated_lifted(m, e, 0)
}

/// Same as [`de_generated`] with the denominator lifted `extra` steps beyond
/// the minimal `p^e`-th power — used to test well-definedness across lifts.
pub fn de_generated_lifted(m: &LocalizedElement, e: u32, extra: u64) -> Result<FracSubmodule> {
    let f = m.f().clone();
    let q = q_of(f.ctx().p(), e)?;
    let k = m.denominator_exponent();
    let lift = k
        .div_ceil(q)
        .checked_add(extra)
        .ok_or(Error::ExponentOverflow)?;
    let denom = lift.checked_mul(q).ok_or(Error::ExponentOverflow)?;
    let u = m.numerator().mul(&f.pow_base_p(denom - k)?);
    let orbit = root_ideal(&Ideal::principal(u), e)?.bracket_power(e)?;
    FracSubmodule::new(f, orbit, denom)
}

/// The action of a level-`e` operator on `R_f`: lift the denominator to a
/// `p^e`-th power `f^{q·m'}` and act on the numerator,
/// `δ(u/f^{q·m'}) = δ(u)/f^{q·m'}`. Well-defined across the choice of lift
/// because `δ` is linear over `p^e`-th powers.
pub fn apply_operator(delta: &DiffOp, m: &LocalizedElement) -> Result<LocalizedElement> {
    apply_operator_lifted(delta, m, 0)
}

/// Same as [`apply_operator`] with the denominator lifted `extra` steps
/// beyond the minimal `p^e`-th power — used to test well-definedness.
pub fn apply_operator_lifted(
    delta: &DiffOp,
    m: &LocalizedElement,
    extra: u64,
) -> Result<LocalizedElement> {
    let f = m.f().clone();
    let q = q_of(f.ctx().p(), delta.level())?;
    let k = m.denominator_exponent();
    let lift = k
        .div_ceil(q)
        .checked_add(extra)
        .ok_or(Error::ExponentOverflow)?;
    let denom = lift.checked_mul(q).ok_or(Error::ExponentOverflow)?;
    let u = m.numerator().mul(&f.pow_base_p(denom - k)?);
    LocalizedElement::new(f, delta.apply(&u)?, denom)
}

/// Outcome of a generation witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The smallest level `e <= e_max` with `f^{-N} ∈ D^(e)·f^{-1}`.
    Found(u32),
    /// No level up to `e_max` works; existence is guaranteed in principle
    /// but without an effective bound, so exhaustion is a data point, not a
    /// refutation.
    Exhausted { e_max: u32 },
}

impl Witness {
    pub fn level(&self) -> Option<u32> {
        match self {
            Witness::Found(e) => Some(*e),
            Witness::Exhausted { .. } => None,
        }
    }
}

/// Searches for the least `e <= e_max` with `f^{-n} ∈ D^(e) · f^{-1}`.
pub fn generation_witness(f: &Polynomial, n: u64, e_max: u32) -> Result<Witness> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    assert!(n >= 1, "witness target must be at least 1");
    let base = LocalizedElement::inverse_power(f.clone(), 1)?;
    let target = LocalizedElement::inverse_power(f.clone(), n)?;
    for e in 1..=e_max {
        let module = de_generated(&base, e)?;
        if module.contains_element(&target)? {
            return Ok(Witness::Found(e));
        }
    }
    Ok(Witness::Exhausted { e_max })
}

/// Independent re-verification of a found witness by direct normal-form
/// membership: with `q = p^e` and `J_e = root_ideal((f^{q-1}), e)`, checks
/// `f^{q-n} ∈ J_e^[q]` (resp. `1 ∈ J_e^[q]·f^{n-q}` when `q < n`).
pub fn verify_witness_direct(f: &Polynomial, n: u64, e: u32) -> Result<bool> {
    let q = q_of(f.ctx().p(), e)?;
    let je = root_ideal(&Ideal::principal(f.pow_base_p(q - 1)?), e)?;
    let bracket = je.bracket_power(e)?;
    if q >= n {
        bracket.contains_poly(&f.pow_base_p(q - n)?)
    } else {
        bracket
            .scale(&f.pow_base_p(n - q)?)
            .contains_poly(&Polynomial::one(f.ctx().clone()))
    }
}

/// One level of a [`ChainReport`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct LevelRecord {
    pub e: u32,
    pub root_ideal: Vec<String>,
    pub contains_next: bool,
    pub equals_next: bool,
}

/// The computable shadow of the pullback chain for `M = D^(e)·f^{-1}`:
/// per-level root ideals `J_e = root_ideal((f^{p^e-1}), e)` and submodules
/// `M_e = (J_e^[p^e], p^e)`, chain flags, the first `e` with
/// `J_e = J_{e+1}` (a summary statistic only — ideal-level equality makes no
/// claim about submodule stabilization), and the witness table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    pub f: String,
    pub p: u64,
    pub levels: Vec<LevelRecord>,
    pub level_summary: Option<u32>,
    pub witnesses: BTreeMap<u64, u32>,
    pub exhausted: bool,
}

/// Computes root ideals and submodules for `1 <= e <= e_max` (one extra
/// level internally for the chain flags) and the witness table for
/// `N <= n_max`.
pub fn chain_report(f: &Polynomial, e_max: u32, n_max: u64) -> Result<ChainReport> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    assert!(e_max >= 1, "chain depth must be at least 1");
    let p = f.ctx().p();
    let mut roots: Vec<Ideal> = Vec::new();
    let mut modules: Vec<FracSubmodule> = Vec::new();
    for e in 1..=e_max + 1 {
        let q = q_of(p, e)?;
        let je = root_ideal(&Ideal::principal(f.pow_base_p(q - 1)?), e)
            .map_err(|err| at_level(err, e))?;
        let me = FracSubmodule::new(f.clone(), je.bracket_power(e)?, q)?;
        roots.push(je);
        modules.push(me);
    }
    let mut levels = Vec::new();
    let mut level_summary = None;
    for e in 1..=e_max {
        let i = (e - 1) as usize;
        let contains_next = modules[i + 1]
            .contains(&modules[i])
            .map_err(|err| at_level(err, e))?;
        let equals_next = contains_next && modules[i].contains(&modules[i + 1])?;
        let ideals_equal = roots[i].equals(&roots[i + 1])?;
        if level_summary.is_none() && ideals_equal {
            level_summary = Some(e);
        }
        levels.push(LevelRecord {
            e,
            root_ideal: roots[i].basis_strings()?,
            contains_next,
            equals_next,
        });
    }
    let mut witnesses = BTreeMap::new();
    let mut exhausted = false;
    for n in 1..=n_max {
        match generation_witness(f, n, e_max)? {
            Witness::Found(e) => {
                witnesses.insert(n, e);
            }
            Witness::Exhausted { .. } => exhausted = true,
        }
    }
    Ok(ChainReport {
        f: f.to_string(),
        p,
        levels,
        level_summary,
        witnesses,
        exhausted,
    })
}

fn at_level(err: Error, e: u32) -> Error {
    match err {
        Error::ResourceLimit(msg) => Error::ResourceLimit(format!("level {e}: {msg}")),
        other => other,
    }
}

/// Certificate produced by [`is_unit_submodule`].
#[derive(Clone, Debug)]
pub enum UnitCertificate {
    /// `M = F^*M`: the submodule is a unit submodule.
    Unit,
    /// `M ⊊ F^*M`: the verified strictly ascending pullback chain, starting
    /// at `M` itself.
    Strict { chain: Vec<FracSubmodule> },
}

impl UnitCertificate {
    pub fn is_unit(&self) -> bool {
        matches!(self, UnitCertificate::Unit)
    }
}

/// Decides whether `M` (required to satisfy the hypothesis `M ⊆ F^*M`) is a
/// unit submodule; in the strict case exhibits `depth` strictly ascending
/// links, each inclusion and each strictness verified.
pub fn is_unit_submodule(m: &FracSubmodule, depth: u32) -> Result<UnitCertificate> {
    let pulled = m.pullback()?;
    if !pulled.contains(m)? {
        return Err(Error::HypothesisViolation);
    }
    if m.contains(&pulled)? {
        return Ok(UnitCertificate::Unit);
    }
    let mut chain = vec![m.clone(), pulled];
    for _ in 1..depth {
        let last = chain.last().unwrap();
        let next = last.pullback()?;
        if !next.contains(last)? || last.contains(&next)? {
            return Err(Error::Internal(
                "strictness propagation failed along the pullback chain".into(),
            ));
        }
        chain.push(next);
    }
    Ok(UnitCertificate::Strict { chain })
}

/// Result of a root certificate check; clause failures are results, not
/// errors.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct RootCheck {
    /// `N_0 ⊆ F^* N_0`.
    pub clause_a: bool,
    /// Cofinality witnesses: `N -> least e` with `f^{-N}` in the `e`-fold
    /// pullback of `N_0`.
    pub witnesses: BTreeMap<u64, u32>,
    pub clause_b: bool,
    /// Per generator: least level `e` such that the generator lies in the
    /// pullback of the level-`e` operator span of all generators.
    pub generator_levels: Vec<Option<u32>>,
    pub clause_c: bool,
    pub pass: bool,
}

/// Checks that the given elements generate a root of `R_f`: (a) the lifted
/// span `N_0` sits inside its own pullback, (b) every `f^{-N}` up to `n_max`
/// is reached by an iterated pullback, and (c) each generator is reachable
/// inside the pullback of the operator span of the generators — the
/// membership form of writing a generator over Frobenius images.
pub fn root_check(
    generators: &[LocalizedElement],
    e_max: u32,
    n_max: u64,
) -> Result<RootCheck> {
    let first = generators
        .first()
        .ok_or_else(|| Error::Internal("root_check needs at least one generator".into()))?;
    let f = first.f().clone();
    for g in generators {
        if *g.f() != f {
            return Err(Error::ContextMismatch);
        }
    }

    // N_0 = (lifted numerators) · f^{-t} over the common denominator.
    let t = generators
        .iter()
        .map(LocalizedElement::denominator_exponent)
        .max()
        .unwrap();
    let mut lifted = Vec::new();
    for g in generators {
        let shift = f.pow_base_p(t - g.denominator_exponent())?;
        lifted.push(g.numerator().mul(&shift));
    }
    let n0 = FracSubmodule::new(f.clone(), Ideal::new(f.ctx().clone(), lifted), t)?;

    let clause_a = n0.pullback()?.contains(&n0)?;

    let mut witnesses = BTreeMap::new();
    for n in 1..=n_max {
        let target = LocalizedElement::inverse_power(f.clone(), n)?;
        for e in 0..=e_max {
            if n0.pullback_pow(e)?.contains_element(&target)? {
                witnesses.insert(n, e);
                break;
            }
        }
    }
    let clause_b = witnesses.len() as u64 == n_max;

    let mut generator_levels = Vec::new();
    for g in generators {
        let mut found = None;
        for e in 1..=e_max {
            let mut span = de_generated(g, e)?;
            for other in generators {
                span = span.sum(&de_generated(other, e)?)?;
            }
            if span.pullback()?.contains_element(g)? {
                found = Some(e);
                break;
            }
        }
        generator_levels.push(found);
    }
    let clause_c = generator_levels.iter().all(Option::is_some);

    Ok(RootCheck {
        clause_a,
        witnesses,
        clause_b,
        generator_levels,
        clause_c,
        pass: clause_a && clause_b && clause_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingContext;

    fn ctx1() -> RingContext {
        RingContext::new(2, ["x"]).unwrap()
    }

    fn elem(f: &Polynomial, num: &str, k: u64) -> LocalizedElement {
        LocalizedElement::new(f.clone(), f.ctx().parse(num).unwrap(), k).unwrap()
    }

    #[test]
    fn canonical_form_minimizes_denominator() {
        let ctx = ctx1();
        let f = ctx.parse("x").unwrap();
        let m = elem(&f, "x^2", 3); // x^2/x^3 = 1/x
        assert_eq!(*m.numerator(), ctx.parse("1").unwrap());
        assert_eq!(m.denominator_exponent(), 1);
        // Cross-multiplication equality agrees with structural equality.
        let n = elem(&f, "1", 1);
        assert!(m.cross_eq(&n));
        assert_eq!(m, n);
    }

    #[test]
    fn frobenius_action_examples() {
        let ctx = ctx1();
        let f = ctx.parse("x").unwrap();
        let m = elem(&f, "1", 1);
        let fm = m.frobenius_action().unwrap();
        assert_eq!(fm, elem(&f, "1", 2));

        // F(x/(x^2+1)) = x^2/(x^2+1)^2 over F_2
        let g = ctx.parse("x^2+1").unwrap();
        let m = LocalizedElement::new(g.clone(), ctx.parse("x").unwrap(), 1).unwrap();
        let fm = m.frobenius_action().unwrap();
        assert_eq!(*fm.numerator(), ctx.parse("x^2").unwrap());
        assert_eq!(fm.denominator_exponent(), 2);
    }

    #[test]
    fn frobenius_is_semilinear_and_multiplicative() {
        let ctx = RingContext::new(3, ["x"]).unwrap();
        let f = ctx.parse("x^2+1").unwrap();
        let r = ctx.parse("x+2").unwrap();
        let m = LocalizedElement::new(f.clone(), ctx.parse("x").unwrap(), 2).unwrap();
        let lhs = m.scalar_mul(&r).unwrap().frobenius_action().unwrap();
        let rhs = m
            .frobenius_action()
            .unwrap()
            .scalar_mul(&r.frobenius_power(1).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);

        let n = LocalizedElement::new(f.clone(), ctx.parse("x+1").unwrap(), 1).unwrap();
        assert_eq!(
            m.mul(&n).unwrap().frobenius_action().unwrap(),
            m.frobenius_action()
                .unwrap()
                .mul(&n.frobenius_action().unwrap())
                .unwrap()
        );

        // Extends the ring Frobenius.
        let r_elem = LocalizedElement::new(f, r.clone(), 0).unwrap();
        assert_eq!(
            *r_elem.frobenius_action().unwrap().numerator(),
            r.frobenius_power(1).unwrap()
        );
    }

    #[test]
    fn theta_inverse_roundtrip() {
        let ctx = ctx1();
        let f = ctx.parse("x^2+x+1").unwrap();
        let unit = UnitStructure::new(f.clone()).unwrap();
        // 1/f -> (f^{p-1}, 1/f); contraction gives back 1/f.
        let m = LocalizedElement::inverse_power(f.clone(), 1).unwrap();
        let (u, v) = unit.theta_inverse(&m).unwrap();
        assert_eq!(u, f.clone());
        assert_eq!(unit.theta(&u, &v).unwrap(), m);
        // A plain ring element contracts to itself.
        let g = elem(&f, "x+1", 0);
        let (u, v) = unit.theta_inverse(&g).unwrap();
        assert_eq!(u, ctx.parse("x+1").unwrap());
        assert_eq!(unit.theta(&u, &v).unwrap(), g);
    }

    #[test]
    fn pullback_examples() {
        let ctx = ctx1();
        let f = ctx.parse("x").unwrap();
        let m = FracSubmodule::new(f.clone(), Ideal::unit(ctx.clone()), 1).unwrap();
        let pulled = m.pullback().unwrap();
        assert_eq!(pulled.denominator_exponent(), 2);
        assert!(pulled.ideal().equals(&Ideal::unit(ctx.clone())).unwrap());

        let ctx2 = RingContext::new(2, ["x", "y"]).unwrap();
        let g = ctx2.parse("x").unwrap();
        let ideal = Ideal::new(
            ctx2.clone(),
            [ctx2.parse("x").unwrap(), ctx2.parse("y").unwrap()],
        );
        let m = FracSubmodule::new(g, ideal, 1).unwrap();
        let pulled = m.pullback().unwrap();
        assert!(pulled
            .ideal()
            .equals(&Ideal::new(
                ctx2.clone(),
                [ctx2.parse("x^2").unwrap(), ctx2.parse("y^2").unwrap()],
            ))
            .unwrap());
        assert_eq!(pulled.denominator_exponent(), 2);
    }

    #[test]
    fn iterated_pullback_matches_bracket() {
        let ctx = ctx1();
        let f = ctx.parse("x^2+x").unwrap();
        let m = FracSubmodule::new(
            f.clone(),
            Ideal::principal(ctx.parse("x+1").unwrap()),
            1,
        )
        .unwrap();
        let twice = m.pullback().unwrap().pullback().unwrap();
        let direct = m.pullback_pow(2).unwrap();
        assert!(twice.equals(&direct).unwrap());
        assert_eq!(twice.denominator_exponent(), 4);
    }

    #[test]
    fn de_generated_examples() {
        let ctx = ctx1();
        // f = x, m = 1/x: D^(1) m = R·x^{-2}.
        let f = ctx.parse("x").unwrap();
        let m = LocalizedElement::inverse_power(f.clone(), 1).unwrap();
        let span = de_generated(&m, 1).unwrap();
        assert!(span.ideal().equals(&Ideal::unit(ctx.clone())).unwrap());
        assert_eq!(span.denominator_exponent(), 2);
        assert!(span.contains_element(&m).unwrap());

        // f = x^2, m = 1/x^2 (k = 1): D^(1) m = (x^2)·f^{-2} = R·x^{-2}.
        let f = ctx.parse("x^2").unwrap();
        let m = LocalizedElement::inverse_power(f.clone(), 1).unwrap();
        let span = de_generated(&m, 1).unwrap();
        assert!(span
            .ideal()
            .equals(&Ideal::principal(ctx.parse("x^2").unwrap()))
            .unwrap());
        assert_eq!(span.denominator_exponent(), 2);
        assert!(span.contains_element(&m).unwrap());
    }

    #[test]
    fn de_generated_is_lift_independent() {
        let ctx = RingContext::new(3, ["x"]).unwrap();
        let f = ctx.parse("x^2+1").unwrap();
        let m = LocalizedElement::new(f.clone(), ctx.parse("x").unwrap(), 2).unwrap();
        let base = de_generated(&m, 1).unwrap();
        for extra in 1..3 {
            let lifted = de_generated_lifted(&m, 1, extra).unwrap();
            assert!(base.equals(&lifted).unwrap());
        }
    }

    #[test]
    fn witness_for_f_equals_x() {
        let ctx = ctx1();
        let f = ctx.parse("x").unwrap();
        let expected = [(1u64, 1u32), (2, 1), (3, 2), (4, 2)];
        for (n, e) in expected {
            assert_eq!(
                generation_witness(&f, n, 6).unwrap(),
                Witness::Found(e),
                "N = {n}"
            );
            assert!(verify_witness_direct(&f, n, e).unwrap());
        }
    }

    #[test]
    fn witness_for_f_equals_x_squared() {
        let ctx = ctx1();
        let f = ctx.parse("x^2").unwrap();
        assert_eq!(generation_witness(&f, 2, 6).unwrap(), Witness::Found(2));
        assert!(verify_witness_direct(&f, 2, 2).unwrap());
    }

    #[test]
    fn witness_for_unit_f() {
        let ctx = ctx1();
        let f = ctx.parse("1").unwrap();
        for n in 1..=6 {
            assert_eq!(generation_witness(&f, n, 6).unwrap(), Witness::Found(1));
        }
    }

    #[test]
    fn chain_for_cusp() {
        let ctx = RingContext::new(2, ["x", "y"]).unwrap();
        let f = ctx.parse("y^2+x^3").unwrap();
        let report = chain_report(&f, 3, 4).unwrap();
        assert_eq!(report.level_summary, Some(1));
        assert_eq!(report.levels[0].root_ideal, vec!["x", "y"]);
        assert!(report.levels.iter().all(|l| l.contains_next));
        assert!(!report.exhausted);
    }

    #[test]
    fn chain_for_unit() {
        let ctx = ctx1();
        let f = ctx.parse("1").unwrap();
        let report = chain_report(&f, 2, 4).unwrap();
        assert_eq!(report.level_summary, Some(1));
        assert!(report.witnesses.values().all(|&e| e == 1));
        assert!(!report.exhausted);
    }

    #[test]
    fn chain_regression_guard_non_monotone_roots() {
        // f = x^3 over F_2: J_1 = (x), J_2 = (x^2) — the root ideals are not
        // an increasing chain, while the submodules still are.
        let ctx = ctx1();
        let f = ctx.parse("x^3").unwrap();
        let report = chain_report(&f, 2, 2).unwrap();
        assert_eq!(report.levels[0].root_ideal, vec!["x"]);
        assert_eq!(report.levels[1].root_ideal, vec!["x^2"]);
        assert!(report.levels[0].contains_next);
    }

    #[test]
    fn unit_checker_examples() {
        let ctx = ctx1();
        let f = ctx.parse("x").unwrap();
        // M = R is a unit submodule.
        let r = FracSubmodule::new(f.clone(), Ideal::unit(ctx.clone()), 0).unwrap();
        assert!(is_unit_submodule(&r, 4).unwrap().is_unit());

        // M = R·x^{-1} is strict, with a verified 4-link chain.
        let m = FracSubmodule::new(f.clone(), Ideal::unit(ctx.clone()), 1).unwrap();
        match is_unit_submodule(&m, 4).unwrap() {
            UnitCertificate::Strict { chain } => assert_eq!(chain.len(), 5),
            UnitCertificate::Unit => panic!("expected STRICT"),
        }

        // M = (x)·x^{-1} = R is unit in disguise.
        let disguised =
            FracSubmodule::new(f.clone(), Ideal::principal(ctx.parse("x").unwrap()), 1).unwrap();
        assert!(is_unit_submodule(&disguised, 4).unwrap().is_unit());

        // Hypothesis violation: M = (x) with t = 0 is not inside its pullback.
        let bad =
            FracSubmodule::new(f, Ideal::principal(ctx.parse("x").unwrap()), 0).unwrap();
        assert_eq!(
            is_unit_submodule(&bad, 4).unwrap_err(),
            Error::HypothesisViolation
        );
    }

    #[test]
    fn root_check_for_inverse_generator() {
        let ctx = ctx1();
        let f = ctx.parse("x").unwrap();
        let gens = [LocalizedElement::inverse_power(f, 1).unwrap()];
        let check = root_check(&gens, 4, 8).unwrap();
        assert!(check.pass, "{check:?}");
        // Cofinality levels follow ceil(log2 N).
        assert_eq!(check.witnesses[&1], 0);
        assert_eq!(check.witnesses[&2], 1);
        assert_eq!(check.witnesses[&3], 2);
        assert_eq!(check.witnesses[&8], 3);
    }

    #[test]
    fn root_check_trivial_and_equivalent_generators() {
        let ctx = ctx1();
        // f = 1: the root of R itself.
        let one = ctx.parse("1").unwrap();
        let gens = [LocalizedElement::new(one.clone(), one.clone(), 0).unwrap()];
        assert!(root_check(&gens, 2, 4).unwrap().pass);

        // x/x^2-style generator of the same root over f = x^2.
        let f = ctx.parse("x^2").unwrap();
        let gens =
            [LocalizedElement::new(f.clone(), ctx.parse("x").unwrap(), 1).unwrap()];
        assert!(root_check(&gens, 4, 4).unwrap().pass);
    }
}
