//! The free-module structure of `R` over its subring of `p^e`-th powers.
//!
//! For `R = F_p[x_1,...,x_n]` and `q = p^e`, the ring `R` is free over
//! `R^q` with basis the monomials `x^a`, `0 <= a_i < q`. Every `f` therefore
//! has a unique expression `f = Σ_a g_a^q · x^a`; this module computes that
//! expression ([`decompose`]/[`recompose`]), the individual coefficient
//! extractions ([`cartier_project`]), the `p^e`-th root of an ideal
//! ([`root_ideal`]) — the smallest `I` with `J ⊆ I^[q]` — and the splitting
//! composite `F^e ∘ π_e` ([`splitting_compose`]).
//!
//! `root_ideal` is the computable form on ideal-shaped data of the descent
//! functor inverse to Frobenius pullback; its adjointness
//! `J ⊆ I^[q] ⟺ root_ideal(J) ⊆ I` is what every fast path in the crate
//! leans on.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::groebner::Ideal;
use crate::ring::{q_of, Monomial, Polynomial, RingContext};
use crate::Result;

/// The basis monomials `x^a` with `0 <= a_i < p^e`, in lexicographic order
/// of exponent vectors. The first element is the monomial `1`; the rank is
/// `p^{en}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusBasis {
    ctx: RingContext,
    e: u32,
    q: u64,
}

impl FrobeniusBasis {
    pub fn new(ctx: RingContext, e: u32) -> Result<Self> {
        assert!(e >= 1, "Frobenius basis level must be at least 1");
        let q = q_of(ctx.p(), e)?;
        Ok(FrobeniusBasis { ctx, e, q })
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn level(&self) -> u32 {
        self.e
    }

    /// `q = p^e`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// `p^{en}`, the rank of `R` over `R^q`.
    pub fn rank(&self) -> Result<u128> {
        (self.q as u128)
            .checked_pow(self.ctx.n() as u32)
            .ok_or(Error::ExponentOverflow)
    }

    /// Whether `m` is one of the basis monomials.
    pub fn contains_slot(&self, m: &Monomial) -> bool {
        m.len() == self.ctx.n() && m.exps().iter().all(|&a| a < self.q)
    }

    /// All basis monomials, materialized. Guarded by the context's size cap
    /// since callers use this to build full operator matrices.
    pub fn monomials(&self) -> Result<Vec<Monomial>> {
        let rank = self.rank()?;
        let cap = self.ctx.limits().size_guard;
        if rank > cap as u128 {
            return Err(Error::SizeGuard {
                required: rank,
                cap,
            });
        }
        let rank = rank as usize;
        let mut out = Vec::with_capacity(rank);
        for idx in 0..rank {
            out.push(self.monomial_at(idx));
        }
        debug_assert!(out.first().map(Monomial::is_one).unwrap_or(false));
        Ok(out)
    }

    /// The basis monomial at `idx` (big-endian base-`q` digits).
    pub fn monomial_at(&self, idx: usize) -> Monomial {
        let n = self.ctx.n();
        let mut exps = vec![0u64; n];
        let mut rest = idx as u128;
        for i in (0..n).rev() {
            exps[i] = (rest % self.q as u128) as u64;
            rest /= self.q as u128;
        }
        Monomial::new(exps)
    }

    /// Index of a basis monomial, inverse to [`FrobeniusBasis::monomial_at`].
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        if !self.contains_slot(m) {
            return None;
        }
        let mut idx: u128 = 0;
        for &a in m.exps() {
            idx = idx * self.q as u128 + a as u128;
        }
        usize::try_from(idx).ok()
    }
}

/// The unique expression `f = Σ_a g_a^{p^e} · x^a` over the level-`e` basis.
/// Slots not present in the map carry the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    basis: FrobeniusBasis,
    coeffs: BTreeMap<Monomial, Polynomial>,
}

impl FrobeniusDecomposition {
    pub fn basis(&self) -> &FrobeniusBasis {
        &self.basis
    }

    pub fn level(&self) -> u32 {
        self.basis.level()
    }

    /// The coefficient `g_a`; zero when the slot is absent.
    pub fn coeff(&self, slot: &Monomial) -> Polynomial {
        self.coeffs
            .get(slot)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.basis.ctx.clone()))
    }

    /// Nonzero slots in basis order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ_a g_a^{p^e} · x^a`, inverse to [`decompose`].
    pub fn recompose(&self) -> Result<Polynomial> {
        let ctx = self.basis.ctx.clone();
        let mut acc = Polynomial::zero(ctx);
        for (slot, g) in &self.coeffs {
            acc = acc.add(&g.frobenius_power(self.basis.e)?.mul_monomial(slot, 1));
        }
        Ok(acc)
    }

    /// The canonical string map used by the JSON interface:
    /// slot monomial -> coefficient polynomial.
    pub fn string_map(&self) -> BTreeMap<String, String> {
        let ctx = &self.basis.ctx;
        self.coeffs
            .iter()
            .map(|(slot, g)| (ctx.monomial_string(slot), g.to_string()))
            .collect()
    }
}

/// Decomposes `f` over the level-`e` Frobenius basis: the term `c·x^m` is
/// routed to slot `m mod q` with contribution `c·x^{m div q}` (componentwise,
/// `q = p^e`).
pub fn decompose(f: &Polynomial, e: u32) -> Result<FrobeniusDecomposition> {
    let basis = FrobeniusBasis::new(f.ctx().clone(), e)?;
    let q = basis.q();
    let mut raw: BTreeMap<Monomial, Vec<(Monomial, u64)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (quot, rem) = m.div_rem(q);
        raw.entry(rem).or_default().push((quot, c));
    }
    let ctx = f.ctx().clone();
    let coeffs = raw
        .into_iter()
        .map(|(slot, terms)| (slot, Polynomial::from_terms(ctx.clone(), terms)))
        .filter(|(_, g)| !g.is_zero())
        .collect();
    Ok(FrobeniusDecomposition { basis, coeffs })
}

/// See [`FrobeniusDecomposition::recompose`].
pub fn recompose(d: &FrobeniusDecomposition) -> Result<Polynomial> {
    d.recompose()
}

/// The Cartier projection `π_a`: the coefficient `g_a` of `decompose(f, e)`.
///
/// These projections are `R`-semilinear over `q`-th powers:
/// `π_a(r^{p^e}·f) = r·π_a(f)`. The slot of the monomial `1` is a splitting
/// of the `e`-fold Frobenius.
pub fn cartier_project(f: &Polynomial, slot: &Monomial, e: u32) -> Result<Polynomial> {
    let basis = FrobeniusBasis::new(f.ctx().clone(), e)?;
    if !basis.contains_slot(slot) {
        return Err(Error::SlotOutOfRange { e });
    }
    let q = basis.q();
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        let (quot, rem) = m.div_rem(q);
        if rem == *slot {
            terms.push((quot, c));
        }
    }
    Ok(Polynomial::from_terms(f.ctx().clone(), terms))
}

/// The `p^e`-th root of `J`: the smallest ideal `I` with `J ⊆ I^[p^e]`,
/// generated by all Cartier projections of the generators of `J`.
/// Independent of the chosen generating set.
pub fn root_ideal(j: &Ideal, e: u32) -> Result<Ideal> {
    assert!(e >= 1, "root ideal level must be at least 1");
    let mut gens = Vec::new();
    for g in j.gens() {
        for (_, coeff) in decompose(g, e)?.nonzero() {
            gens.push(coeff.clone());
        }
    }
    Ok(Ideal::new(j.ctx().clone(), gens))
}

/// The splitting composite `F^e ∘ π_e` applied to a ring element:
/// `frobenius_power(cartier_project(f, 1, e), e)`.
pub fn splitting_compose(f: &Polynomial, e: u32) -> Result<Polynomial> {
    let one = Monomial::one(f.ctx().n());
    cartier_project(f, &one, e)?.frobenius_power(e)
}
