//! Seeded random generators for polynomials, ideals and operators.
//!
//! Every randomized suite in the workspace (the `verify` command, the
//! property tests, the acceptance gate) draws its instances through these
//! helpers from an explicitly seeded RNG, so failures always come with a
//! reproducer.

use rand::Rng;

use crate::diffop::DiffOp;
use crate::frobenius::FrobeniusBasis;
use crate::groebner::Ideal;
use crate::localized::LocalizedElement;
use crate::ring::{Monomial, Polynomial, RingContext};
use crate::Result;

/// A random monomial of total degree at most `max_degree`.
pub fn monomial<R: Rng>(ctx: &RingContext, rng: &mut R, max_degree: u64) -> Monomial {
    let mut remaining = rng.gen_range(0..=max_degree);
    let mut exps = vec![0u64; ctx.n()];
    for e in exps.iter_mut() {
        let take = rng.gen_range(0..=remaining);
        *e = take;
        remaining -= take;
    }
    Monomial::new(exps)
}

/// A sparse random polynomial with at most `max_terms` terms of total degree
/// at most `max_degree` (possibly zero).
pub fn polynomial<R: Rng>(
    ctx: &RingContext,
    rng: &mut R,
    max_degree: u64,
    max_terms: usize,
) -> Polynomial {
    let p = ctx.p();
    let count = rng.gen_range(0..=max_terms);
    let terms = (0..count)
        .map(|_| (monomial(ctx, rng, max_degree), rng.gen_range(0..p)))
        .collect::<Vec<_>>();
    Polynomial::from_terms(ctx.clone(), terms)
}

/// Like [`polynomial`], retrying until nonzero.
pub fn nonzero_polynomial<R: Rng>(
    ctx: &RingContext,
    rng: &mut R,
    max_degree: u64,
    max_terms: usize,
) -> Polynomial {
    loop {
        let f = polynomial(ctx, rng, max_degree, max_terms.max(1));
        if !f.is_zero() {
            return f;
        }
    }
}

/// A random ideal with `1..=max_gens` nonzero generators.
pub fn ideal<R: Rng>(
    ctx: &RingContext,
    rng: &mut R,
    max_gens: usize,
    max_degree: u64,
) -> Ideal {
    let count = rng.gen_range(1..=max_gens.max(1));
    let gens = (0..count)
        .map(|_| nonzero_polynomial(ctx, rng, max_degree, 4))
        .collect::<Vec<_>>();
    Ideal::new(ctx.clone(), gens)
}

/// A random basis slot monomial of the level-`e` Frobenius basis.
pub fn basis_slot<R: Rng>(basis: &FrobeniusBasis, rng: &mut R) -> Monomial {
    let q = basis.q();
    let exps = (0..basis.ctx().n())
        .map(|_| rng.gen_range(0..q))
        .collect();
    Monomial::new(exps)
}

/// A random level-`e` operator with sparse polynomial matrix entries.
pub fn diffop<R: Rng>(
    ctx: &RingContext,
    e: u32,
    rng: &mut R,
    entry_degree: u64,
    density: f64,
) -> Result<DiffOp> {
    let basis = FrobeniusBasis::new(ctx.clone(), e)?;
    let monomials = basis.monomials()?;
    // Pre-draw the columns so the closure below stays deterministic in the
    // iteration order of `from_action`.
    let mut images = Vec::with_capacity(monomials.len());
    for _ in &monomials {
        let mut image = Polynomial::zero(ctx.clone());
        for b in &monomials {
            if rng.gen_bool(density) {
                let coeff = nonzero_polynomial(ctx, rng, entry_degree, 3);
                image = image.add(&coeff.frobenius_power(e)?.mul_monomial(b, 1));
            }
        }
        images.push(image);
    }
    let mut iter = images.into_iter();
    DiffOp::from_action(ctx, e, |_| {
        Ok(iter.next().expect("one image per basis monomial"))
    })
}

/// A random element `g/f^k` of `R_f`.
pub fn localized<R: Rng>(
    f: &Polynomial,
    rng: &mut R,
    num_degree: u64,
    max_k: u64,
) -> Result<LocalizedElement> {
    let ctx = f.ctx();
    let num = nonzero_polynomial(ctx, rng, num_degree, 4);
    let k = rng.gen_range(0..=max_k);
    LocalizedElement::new(f.clone(), num, k)
}
