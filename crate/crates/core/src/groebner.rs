//! Ideal arithmetic and decision procedures via Buchberger's algorithm.
//!
//! Every comparison of submodules elsewhere in the crate reduces to ideal
//! membership here, so determinism matters: the reduced Groebner basis of an
//! ideal under a fixed order is unique, the implementation selects S-pairs by
//! the sugar strategy with deterministic tie-breaks, and two ideals are equal
//! exactly when their reduced bases under a common order coincide.
//!
//! Resource bounds (maximum S-pairs, maximum degree) come from the ring
//! context's [`Limits`](crate::ring::Limits); exceeding them is an explicit
//! [`Error::ResourceLimit`], never a wrong answer.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::error::Error;
use crate::ring::{Limits, Monomial, Polynomial, RingContext};
use crate::Result;

/// A multiplicative total well-order on monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (the crate default).
    #[default]
    Grevlex,
    /// Pure lexicographic, variable index order breaking ties.
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => a.cmp(b),
            MonomialOrder::Lex => a.lex_cmp(b),
        }
    }
}

/// An ideal of `F_p[x_1,...,x_n]`, held as a generator list with a write-once
/// cache for the reduced Groebner basis under the default order.
///
/// The cache fill is idempotent: concurrent fills agree because the reduced
/// basis is unique.
#[derive(Clone, Debug)]
pub struct Ideal {
    ctx: RingContext,
    gens: Vec<Polynomial>,
    cache: OnceLock<Arc<Vec<Polynomial>>>,
}

impl Ideal {
    /// Builds an ideal from generators; zero generators are dropped.
    pub fn new(ctx: RingContext, gens: impl IntoIterator<Item = Polynomial>) -> Self {
        let gens: Vec<Polynomial> = gens
            .into_iter()
            .inspect(|g| assert_eq!(*g.ctx(), ctx, "ring context mismatch"))
            .filter(|g| !g.is_zero())
            .collect();
        Ideal {
            ctx,
            gens,
            cache: OnceLock::new(),
        }
    }

    pub fn zero(ctx: RingContext) -> Self {
        Ideal::new(ctx, [])
    }

    pub fn unit(ctx: RingContext) -> Self {
        let one = Polynomial::one(ctx.clone());
        Ideal::new(ctx, [one])
    }

    /// The principal ideal `(f)`.
    pub fn principal(f: Polynomial) -> Self {
        let ctx = f.ctx().clone();
        Ideal::new(ctx, [f])
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// The unique reduced Groebner basis under `ord`. Cached for the default
    /// (grevlex) order.
    pub fn groebner_basis(&self, ord: MonomialOrder) -> Result<Arc<Vec<Polynomial>>> {
        if ord == MonomialOrder::Grevlex {
            if let Some(basis) = self.cache.get() {
                return Ok(basis.clone());
            }
        }
        let basis = Arc::new(buchberger(&self.gens, ord, self.ctx.limits())?);
        if ord == MonomialOrder::Grevlex {
            let _ = self.cache.set(basis.clone());
        }
        Ok(basis)
    }

    /// Remainder of `f` modulo the reduced basis; zero iff `f` is a member.
    pub fn normal_form(&self, f: &Polynomial, ord: MonomialOrder) -> Result<Polynomial> {
        let basis = self.groebner_basis(ord)?;
        reduce_full(f, &basis, ord, self.ctx.limits())
    }

    pub fn contains_poly(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f, MonomialOrder::Grevlex)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains_poly(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Ideal equality via the canonical reduced bases.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        let a = self.groebner_basis(MonomialOrder::Grevlex)?;
        let b = other.groebner_basis(MonomialOrder::Grevlex)?;
        Ok(*a == *b)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.ctx, other.ctx, "ring context mismatch");
        Ideal::new(
            self.ctx.clone(),
            self.gens.iter().chain(&other.gens).cloned(),
        )
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.ctx, other.ctx, "ring context mismatch");
        let gens = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.mul(b)))
            .collect::<Vec<_>>();
        Ideal::new(self.ctx.clone(), gens)
    }

    /// The ideal `g * self`.
    pub fn scale(&self, g: &Polynomial) -> Ideal {
        Ideal::new(self.ctx.clone(), self.gens.iter().map(|h| h.mul(g)))
    }

    /// The bracket power `I^[p^e]`, generated by the `p^e`-th powers of the
    /// generators. Independent of the chosen generating set.
    pub fn bracket_power(&self, e: u32) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.frobenius_power(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(self.ctx.clone(), gens))
    }

    /// Generator strings of the reduced grevlex basis, leading monomial
    /// descending — the canonical serialized form.
    pub fn basis_strings(&self) -> Result<Vec<String>> {
        Ok(self
            .groebner_basis(MonomialOrder::Grevlex)?
            .iter()
            .map(|g| g.to_string())
            .collect())
    }
}

/// Full normal form of `f` with respect to `basis` under `ord`.
pub(crate) fn reduce_full(
    f: &Polynomial,
    basis: &[Polynomial],
    ord: MonomialOrder,
    limits: &Limits,
) -> Result<Polynomial> {
    let ctx = f.ctx().clone();
    let mut rest = f.clone();
    let mut remainder = Polynomial::zero(ctx.clone());
    'outer: while !rest.is_zero() {
        let (lm, lc) = rest.leading(ord).unwrap();
        for g in basis {
            let (gm, gc) = g.leading(ord).expect("basis elements are nonzero");
            if let Some(t) = lm.checked_div(&gm) {
                if t.degree() + g.degree() > limits.max_degree {
                    return Err(Error::ResourceLimit(format!(
                        "reduction degree above {}",
                        limits.max_degree
                    )));
                }
                let c = ctx.mul_coeff(lc, ctx.inv_coeff(gc));
                rest = rest.sub(&g.mul_monomial(&t, c));
                continue 'outer;
            }
        }
        let term = Polynomial::monomial(ctx.clone(), lm, lc);
        remainder = remainder.add(&term);
        rest = rest.sub(&term);
    }
    Ok(remainder)
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u64,
    lcm_degree: u64,
    lcm: Vec<u64>,
    i: usize,
    j: usize,
}

/// Buchberger's algorithm with the sugar selection strategy and the coprime
/// leading term criterion, followed by autoreduction to the unique reduced
/// basis (monic, sorted by descending leading monomial).
pub(crate) fn buchberger(
    gens: &[Polynomial],
    ord: MonomialOrder,
    limits: &Limits,
) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut sugars: Vec<u64> = Vec::new();
    let mut pairs: BTreeSet<PairKey> = BTreeSet::new();

    let push = |g: Polynomial,
                    sugar: u64,
                    basis: &mut Vec<Polynomial>,
                    sugars: &mut Vec<u64>,
                    pairs: &mut BTreeSet<PairKey>| {
        let t = basis.len();
        for i in 0..t {
            let (mi, _) = basis[i].leading(ord).unwrap();
            let (mt, _) = g.leading(ord).unwrap();
            let lcm = mi.lcm(&mt);
            let s = (sugars[i] - mi.degree())
                .max(sugar - mt.degree())
                + lcm.degree();
            pairs.insert(PairKey {
                sugar: s,
                lcm_degree: lcm.degree(),
                lcm: lcm.exps().to_vec(),
                i,
                j: t,
            });
        }
        basis.push(g);
        sugars.push(sugar);
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let sugar = g.degree();
        push(g.monic(ord), sugar, &mut basis, &mut sugars, &mut pairs);
    }

    let mut processed = 0usize;
    while let Some(pair) = pairs.pop_first() {
        processed += 1;
        if processed > limits.max_spairs {
            return Err(Error::ResourceLimit(format!(
                "more than {} S-pairs",
                limits.max_spairs
            )));
        }
        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        let (mi, _) = fi.leading(ord).unwrap();
        let (mj, _) = fj.leading(ord).unwrap();
        let lcm = mi.lcm(&mj);
        // Buchberger's first criterion: coprime leading terms.
        if lcm == mi.mul(&mj) {
            continue;
        }
        if lcm.degree() > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "S-pair degree above {}",
                limits.max_degree
            )));
        }
        let ti = lcm.checked_div(&mi).unwrap();
        let tj = lcm.checked_div(&mj).unwrap();
        let spoly = fi.mul_monomial(&ti, 1).sub(&fj.mul_monomial(&tj, 1));
        let reduced = reduce_full(&spoly, &basis, ord, limits)?;
        if !reduced.is_zero() {
            let sugar = pair.sugar.max(reduced.degree());
            push(
                reduced.monic(ord),
                sugar,
                &mut basis,
                &mut sugars,
                &mut pairs,
            );
        }
    }

    autoreduce(basis, ord, limits)
}

fn autoreduce(
    basis: Vec<Polynomial>,
    ord: MonomialOrder,
    limits: &Limits,
) -> Result<Vec<Polynomial>> {
    // Minimize: drop elements whose leading monomial is divisible by the
    // leading monomial of another kept element.
    let mut sorted = basis;
    sorted.sort_by(|a, b| {
        let (ma, _) = a.leading(ord).unwrap();
        let (mb, _) = b.leading(ord).unwrap();
        ord.cmp(&ma, &mb)
    });
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in sorted {
        let (mg, _) = g.leading(ord).unwrap();
        if !minimal
            .iter()
            .any(|h| h.leading(ord).unwrap().0.divides(&mg))
        {
            minimal.push(g);
        }
    }
    // Tail-reduce everything against everything else until stable.
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let reduced = reduce_full(&minimal[i], &others, ord, limits)?.monic(ord);
            if reduced != minimal[i] {
                minimal[i] = reduced;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    minimal.sort_by(|a, b| {
        let (ma, _) = a.leading(ord).unwrap();
        let (mb, _) = b.leading(ord).unwrap();
        ord.cmp(&mb, &ma)
    });
    Ok(minimal)
}
