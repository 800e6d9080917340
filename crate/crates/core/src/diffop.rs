//! The level-`e` differential operator algebra `D^(e) = End_{R^{p^e}}(R)` as
//! an explicit matrix algebra over `R`.
//!
//! An operator is stored by its action on the Frobenius basis monomials: the
//! column of `x^a` holds the decomposition coefficients of `δ(x^a)`, so
//! `δ(x^a) = Σ_b g_{b,a}^{p^e} · x^b`. Applying `δ` to
//! `f = Σ_a f_a^{p^e} x^a` gives `Σ_a f_a^{p^e} δ(x^a)`, and composition
//! corresponds to the plain matrix product of the coefficient matrices — a
//! fact that is not assumed but pinned against the apply-based oracle in the
//! tests.
//!
//! The module also carries the two Morita maps: [`phi_map`] sends `a ⊗ φ` to
//! the composite "project, Frobenius, multiply", realizing every matrix unit,
//! and [`psi_map`] sends `φ ⊗ a` to `φ(a)` with [`psi_inverse`] the section
//! `a ↦ π_1 ⊗ a^{p^e}`. Operations that materialize full `p^{en} x p^{en}`
//! matrices refuse to run above the context's size guard; the ideal-theoretic
//! fast paths in [`crate::frobenius`] and [`crate::localized`] scale instead,
//! with everything here serving as their desk-scale oracle.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;
use crate::frobenius::{cartier_project, decompose, root_ideal, FrobeniusBasis};
use crate::groebner::Ideal;
use crate::linalg::{index_map, monomials_up_to_degree, poly_to_row, row_to_poly, GfpMat};
use crate::ring::{Monomial, Polynomial, RingContext};
use crate::Result;

/// A level-`e` differential operator in column form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    basis: FrobeniusBasis,
    monomials: Vec<Monomial>,
    /// `cols[a][b]` is the slot-`b` decomposition coefficient of `δ(x^a)`.
    cols: Vec<Vec<Polynomial>>,
}

impl DiffOp {
    /// Builds the operator whose action on each basis monomial is given by
    /// `action`; the images are decomposed at level `e` to fill the columns.
    pub fn from_action(
        ctx: &RingContext,
        e: u32,
        mut action: impl FnMut(&Monomial) -> Result<Polynomial>,
    ) -> Result<DiffOp> {
        let basis = FrobeniusBasis::new(ctx.clone(), e)?;
        let monomials = basis.monomials()?;
        let rank = monomials.len();
        let mut cols = Vec::with_capacity(rank);
        for m in &monomials {
            let image = action(m)?;
            if *image.ctx() != *ctx {
                return Err(Error::ContextMismatch);
            }
            let d = decompose(&image, e)?;
            let mut col = vec![Polynomial::zero(ctx.clone()); rank];
            for (slot, g) in d.nonzero() {
                let idx = basis
                    .index_of(slot)
                    .ok_or_else(|| Error::Internal("slot outside basis".into()))?;
                col[idx] = g.clone();
            }
            cols.push(col);
        }
        Ok(DiffOp {
            basis,
            monomials,
            cols,
        })
    }

    pub fn identity(ctx: &RingContext, e: u32) -> Result<DiffOp> {
        Self::from_action(ctx, e, |m| {
            Ok(Polynomial::monomial(ctx.clone(), m.clone(), 1))
        })
    }

    /// Multiplication by `c` as a level-`e` operator.
    pub fn scalar_mult(c: &Polynomial, e: u32) -> Result<DiffOp> {
        let ctx = c.ctx().clone();
        Self::from_action(&ctx, e, |m| Ok(c.mul_monomial(m, 1)))
    }

    /// The matrix unit `E_{b,a}`: sends `x^a` to `x^b` and every other basis
    /// monomial to zero.
    pub fn matrix_unit(ctx: &RingContext, e: u32, b: &Monomial, a: &Monomial) -> Result<DiffOp> {
        let basis = FrobeniusBasis::new(ctx.clone(), e)?;
        if !basis.contains_slot(a) || !basis.contains_slot(b) {
            return Err(Error::SlotOutOfRange { e });
        }
        let target = Polynomial::monomial(ctx.clone(), b.clone(), 1);
        Self::from_action(ctx, e, |m| {
            Ok(if m == a {
                target.clone()
            } else {
                Polynomial::zero(ctx.clone())
            })
        })
    }

    pub fn ctx(&self) -> &RingContext {
        self.basis.ctx()
    }

    pub fn level(&self) -> u32 {
        self.basis.level()
    }

    pub fn basis(&self) -> &FrobeniusBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.monomials.len()
    }

    /// The image `δ(x^a)` for the column of the basis monomial at `idx`.
    pub fn column_image(&self, idx: usize) -> Result<Polynomial> {
        let e = self.level();
        let mut acc = Polynomial::zero(self.ctx().clone());
        for (b, g) in self.cols[idx].iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            acc = acc.add(&g.frobenius_power(e)?.mul_monomial(&self.monomials[b], 1));
        }
        Ok(acc)
    }

    /// Applies the operator: `δ(f) = Σ_a f_a^{p^e} · δ(x^a)` where
    /// `{f_a}` is the level-`e` decomposition of `f`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ctx() != self.ctx() {
            return Err(Error::ContextMismatch);
        }
        let e = self.level();
        let d = decompose(f, e)?;
        let mut acc = Polynomial::zero(self.ctx().clone());
        for (slot, g) in d.nonzero() {
            let idx = self
                .basis
                .index_of(slot)
                .ok_or_else(|| Error::Internal("slot outside basis".into()))?;
            let image = self.column_image(idx)?;
            acc = acc.add(&g.frobenius_power(e)?.mul(&image));
        }
        Ok(acc)
    }

    /// Operator composition (`self` applied after `other`); the matrix of the
    /// composite is the matrix product of the coefficient matrices.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.ctx() != other.ctx() {
            return Err(Error::ContextMismatch);
        }
        if self.level() != other.level() {
            return Err(Error::LevelMismatch {
                expected: self.level(),
                found: other.level(),
            });
        }
        let rank = self.rank();
        let ctx = self.ctx().clone();
        let mut cols = Vec::with_capacity(rank);
        for a in 0..rank {
            let mut col = vec![Polynomial::zero(ctx.clone()); rank];
            for (b, inner) in other.cols[a].iter().enumerate() {
                if inner.is_zero() {
                    continue;
                }
                for (c, outer) in self.cols[b].iter().enumerate() {
                    if outer.is_zero() {
                        continue;
                    }
                    col[c] = col[c].add(&outer.mul(inner));
                }
            }
            cols.push(col);
        }
        Ok(DiffOp {
            basis: self.basis.clone(),
            monomials: self.monomials.clone(),
            cols,
        })
    }

    /// The same operator viewed one level up: `R^{p^{e+1}}`-linear maps are
    /// in particular `R^{p^e}`-linear, so the action is unchanged.
    pub fn embed(&self) -> Result<DiffOp> {
        let ctx = self.ctx().clone();
        DiffOp::from_action(&ctx, self.level() + 1, |m| {
            self.apply(&Polynomial::monomial(ctx.clone(), m.clone(), 1))
        })
    }

    /// The Frobenius twist, one level up: the unique level-`(e+1)` operator
    /// determined on the level-1 free decomposition by
    /// `δ'(x^a · r^p) = x^a · δ(r)^p` for basis monomials `x^a` (all
    /// exponents below `p`) and arbitrary `r`.
    pub fn frobenius_twist(&self) -> Result<DiffOp> {
        let ctx = self.ctx().clone();
        let p = ctx.p();
        DiffOp::from_action(&ctx, self.level() + 1, |m| {
            let (quot, rem) = m.div_rem(p);
            let inner = self.apply(&Polynomial::monomial(ctx.clone(), quot, 1))?;
            Ok(inner.frobenius_power(1)?.mul_monomial(&rem, 1))
        })
    }

    /// Membership in the left ideal `J_e` of operators killing `1`.
    pub fn je_membership(&self) -> bool {
        let one_idx = self
            .basis
            .index_of(&Monomial::one(self.ctx().n()))
            .expect("basis contains 1");
        self.cols[one_idx].iter().all(Polynomial::is_zero)
    }

    /// JSON view matching the published schema: sparse columns keyed by
    /// canonical monomial strings.
    pub fn to_json(&self) -> DiffOpJson {
        let ctx = self.ctx();
        let mut columns = BTreeMap::new();
        for (a, col) in self.cols.iter().enumerate() {
            let mut entries = BTreeMap::new();
            for (b, g) in col.iter().enumerate() {
                if !g.is_zero() {
                    entries.insert(ctx.monomial_string(&self.monomials[b]), g.to_string());
                }
            }
            if !entries.is_empty() {
                columns.insert(ctx.monomial_string(&self.monomials[a]), entries);
            }
        }
        DiffOpJson {
            e: self.level(),
            columns,
        }
    }
}

/// Serialized operator form: `{ "e": 1, "columns": { "x^a": { "x^b": "g" } } }`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DiffOpJson {
    pub e: u32,
    pub columns: BTreeMap<String, BTreeMap<String, String>>,
}

/// An element `φ` of `Hom_R(F^e_* R, R)` in the dual basis of Cartier
/// projections: `φ(f) = Σ_a coeffs[a] · π_a(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    basis: FrobeniusBasis,
    coeffs: BTreeMap<Monomial, Polynomial>,
}

impl DualElement {
    pub fn new(
        ctx: &RingContext,
        e: u32,
        coeffs: impl IntoIterator<Item = (Monomial, Polynomial)>,
    ) -> Result<DualElement> {
        let basis = FrobeniusBasis::new(ctx.clone(), e)?;
        let mut map = BTreeMap::new();
        for (slot, c) in coeffs {
            if !basis.contains_slot(&slot) {
                return Err(Error::SlotOutOfRange { e });
            }
            if *c.ctx() != *ctx {
                return Err(Error::ContextMismatch);
            }
            if !c.is_zero() {
                map.insert(slot, c);
            }
        }
        Ok(DualElement { basis, coeffs: map })
    }

    /// The dual basis element `π_a`.
    pub fn pi(ctx: &RingContext, e: u32, slot: Monomial) -> Result<DualElement> {
        let one = Polynomial::one(ctx.clone());
        DualElement::new(ctx, e, [(slot, one)])
    }

    /// The chosen splitting `π_1` of `F^e`.
    pub fn pi_one(ctx: &RingContext, e: u32) -> Result<DualElement> {
        DualElement::pi(ctx, e, Monomial::one(ctx.n()))
    }

    pub fn level(&self) -> u32 {
        self.basis.level()
    }

    pub fn ctx(&self) -> &RingContext {
        self.basis.ctx()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> {
        self.coeffs.iter()
    }

    /// `φ(f) = Σ_a coeffs[a] · π_a(f)`.
    pub fn evaluate(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ctx() != self.ctx() {
            return Err(Error::ContextMismatch);
        }
        let mut acc = Polynomial::zero(self.ctx().clone());
        for (slot, c) in &self.coeffs {
            acc = acc.add(&c.mul(&cartier_project(f, slot, self.level())?));
        }
        Ok(acc)
    }
}

/// The Morita map `Φ`: sends `a ⊗ φ` to the operator
/// `x ↦ a · (φ(x))^{p^e}` (project, Frobenius, multiply).
pub fn phi_map(a: &Polynomial, phi: &DualElement) -> Result<DiffOp> {
    if a.ctx() != phi.ctx() {
        return Err(Error::ContextMismatch);
    }
    let ctx = a.ctx().clone();
    let e = phi.level();
    DiffOp::from_action(&ctx, e, |m| {
        let projected = phi.evaluate(&Polynomial::monomial(ctx.clone(), m.clone(), 1))?;
        Ok(a.mul(&projected.frobenius_power(e)?))
    })
}

/// The Morita map `Ψ`: sends `φ ⊗ f` to `φ(f)`.
pub fn psi_map(phi: &DualElement, f: &Polynomial) -> Result<Polynomial> {
    phi.evaluate(f)
}

/// The section of `Ψ` through the splitting `π_1`:
/// `f ↦ (π_1, f^{p^e})`. Contracting through `Ψ` recovers `f`.
pub fn psi_inverse(f: &Polynomial, e: u32) -> Result<(DualElement, Polynomial)> {
    let phi = DualElement::pi_one(f.ctx(), e)?;
    Ok((phi, f.frobenius_power(e)?))
}

/// Result of an annihilator computation: a spanning set of
/// `{m ∈ K : δ(m) = 0 for all δ ∈ J_e}` up to the degree bound, and whether
/// the bound was large enough to capture a full generating family.
#[derive(Clone, Debug)]
pub struct AnnJe {
    pub spanning: Vec<Polynomial>,
    pub conclusive: bool,
}

/// Computes `Ann_K J_e` within total degree `degree_bound` by exact linear
/// algebra over `F_p`: the degree slice of `K` is spanned by monomial
/// multiples of its reduced grevlex basis (the order is degree-compatible),
/// and the kernel conditions are the matrix-unit generators `E_{b,a}(v) = 0`
/// for `a ≠ 1`, equivalently the vanishing of every Cartier projection of
/// `v` away from slot 1.
///
/// Requires `K` to be `D^(e)`-stable.
pub fn ann_je(k: &Ideal, e: u32, degree_bound: u64) -> Result<AnnJe> {
    if !is_de_stable(k, e)? {
        return Err(Error::NotDeStable { e });
    }
    let ctx = k.ctx().clone();
    let q = crate::ring::q_of(ctx.p(), e)?;
    let ambient = monomials_up_to_degree(ctx.n(), degree_bound);
    let index = index_map(&ambient);

    // Spanning rows of the degree slice of K.
    let gb = k.groebner_basis(crate::groebner::MonomialOrder::Grevlex)?;
    let mut rows = Vec::new();
    for g in gb.iter() {
        let gdeg = g.degree();
        if gdeg > degree_bound {
            continue;
        }
        for m in monomials_up_to_degree(ctx.n(), degree_bound - gdeg) {
            let f = g.mul_monomial(&m, 1);
            rows.push(
                poly_to_row(&f, &index, ambient.len())
                    .expect("degree-bounded product stays in the ambient slice"),
            );
        }
    }
    let mut slice = GfpMat::new(ctx.p(), ambient.len(), rows);
    slice.rref();
    let basis_rows = slice.rows.clone();
    let basis_polys: Vec<Polynomial> = basis_rows
        .iter()
        .map(|r| row_to_poly(&ctx, r, &ambient))
        .collect();

    // Kernel conditions: for each combination v = Σ λ_i B_i, every Cartier
    // projection of v to a slot other than 1 must vanish. Coefficientwise
    // this says: the coordinates of v at monomials with residue != 0 mod q
    // are zero.
    let mut constraint_rows: Vec<Vec<u64>> = Vec::new();
    for (col, m) in ambient.iter().enumerate() {
        let (_, rem) = m.div_rem(q);
        if rem.is_one() {
            continue;
        }
        let row: Vec<u64> = basis_rows.iter().map(|b| b[col]).collect();
        if row.iter().any(|&c| c != 0) {
            constraint_rows.push(row);
        }
    }
    let kernel = if basis_rows.is_empty() {
        Vec::new()
    } else {
        GfpMat::new(ctx.p(), basis_rows.len(), constraint_rows).kernel_basis()
    };
    let spanning: Vec<Polynomial> = kernel
        .iter()
        .map(|lambda| {
            let mut acc = Polynomial::zero(ctx.clone());
            for (i, &c) in lambda.iter().enumerate() {
                if c != 0 {
                    acc = acc.add(&basis_polys[i].scalar_mul(c));
                }
            }
            acc
        })
        .filter(|f| !f.is_zero())
        .collect();

    // The slice carries a full generating family exactly when every reduced
    // basis element of the root ideal fits below the bound after the q-fold
    // degree stretch.
    let root = root_ideal(k, e)?;
    let root_gb = root.groebner_basis(crate::groebner::MonomialOrder::Grevlex)?;
    let conclusive = root_gb
        .iter()
        .all(|g| g.degree().checked_mul(q).map(|d| d <= degree_bound) == Some(true));

    Ok(AnnJe {
        spanning,
        conclusive,
    })
}

/// The orbit `D^(e) · u` inside `R`, through the fast path: the ideal
/// generated by the `p^e`-th powers of the Cartier projections of `u`.
pub fn de_orbit(u: &Polynomial, e: u32) -> Result<Ideal> {
    let principal = Ideal::principal(u.clone());
    root_ideal(&principal, e)?.bracket_power(e)
}

/// The same orbit computed exhaustively by applying every matrix unit
/// `E_{b,a}` to `u` — the brute-force oracle for [`de_orbit`]. Subject to
/// the size guard.
pub fn matrix_orbit(u: &Polynomial, e: u32) -> Result<Ideal> {
    let ctx = u.ctx().clone();
    let basis = FrobeniusBasis::new(ctx.clone(), e)?;
    let monomials = basis.monomials()?;
    let mut gens = Vec::new();
    for b in &monomials {
        for a in &monomials {
            let unit = DiffOp::matrix_unit(&ctx, e, b, a)?;
            gens.push(unit.apply(u)?);
        }
    }
    Ok(Ideal::new(ctx, gens))
}

/// Whether `K` is a `D^(e)`-submodule of `R`: equivalent to
/// `K = root_ideal(K, e)^[p^e]`.
pub fn is_de_stable(k: &Ideal, e: u32) -> Result<bool> {
    let reconstructed = root_ideal(k, e)?.bracket_power(e)?;
    k.equals(&reconstructed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q_of;

    fn ctx1() -> RingContext {
        RingContext::new(2, ["x"]).unwrap()
    }

    fn mono(exps: Vec<u64>) -> Monomial {
        Monomial::new(exps)
    }

    /// The level-1 projection over F_2[x] sending x -> 1 and 1 -> 0.
    fn projection_x_to_one(ctx: &RingContext) -> DiffOp {
        DiffOp::matrix_unit(ctx, 1, &mono(vec![0]), &mono(vec![1])).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let ctx = ctx1();
        let id = DiffOp::identity(&ctx, 1).unwrap();
        let f = ctx.parse("x^3+x^2+1").unwrap();
        assert_eq!(id.apply(&f).unwrap(), f);
    }

    #[test]
    fn projection_example() {
        // x^3+x^2+1 = (x+1)^2·1 + x^2·x, so the projection x->1 sends it to x^2.
        let ctx = ctx1();
        let proj = projection_x_to_one(&ctx);
        let f = ctx.parse("x^3+x^2+1").unwrap();
        assert_eq!(proj.apply(&f).unwrap(), ctx.parse("x^2").unwrap());
    }

    #[test]
    fn semilinearity_of_apply() {
        let ctx = RingContext::new(3, ["x"]).unwrap();
        let delta = DiffOp::matrix_unit(&ctx, 1, &mono(vec![2]), &mono(vec![1])).unwrap();
        let s = ctx.parse("x^2+2").unwrap();
        let f = ctx.parse("x^4+x+1").unwrap();
        let lhs = delta
            .apply(&s.frobenius_power(1).unwrap().mul(&f))
            .unwrap();
        let rhs = s.frobenius_power(1).unwrap().mul(&delta.apply(&f).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_identity_and_permutations() {
        let ctx = ctx1();
        let id = DiffOp::identity(&ctx, 1).unwrap();
        let proj = projection_x_to_one(&ctx);
        assert_eq!(id.compose(&proj).unwrap(), proj);
        assert_eq!(proj.compose(&id).unwrap(), proj);

        // Swap of the two basis slots composes to the identity.
        let swap_a = DiffOp::matrix_unit(&ctx, 1, &mono(vec![1]), &mono(vec![0])).unwrap();
        let swap_b = DiffOp::matrix_unit(&ctx, 1, &mono(vec![0]), &mono(vec![1])).unwrap();
        // (E_{1,x} + E_{x,1}) as a permutation operator
        let swap = DiffOp::from_action(&ctx, 1, |m| {
            Ok(if m.is_one() {
                ctx.parse("x").unwrap()
            } else {
                ctx.parse("1").unwrap()
            })
        })
        .unwrap();
        assert_eq!(swap.compose(&swap).unwrap(), id);
        let _ = (swap_a, swap_b);
    }

    #[test]
    fn compose_matches_apply_oracle() {
        let ctx = RingContext::new(2, ["x", "y"]).unwrap();
        let d1 = DiffOp::from_action(&ctx, 1, |m| {
            Ok(ctx.parse("x+y").unwrap().mul_monomial(m, 1))
        })
        .unwrap();
        let d2 = DiffOp::matrix_unit(&ctx, 1, &mono(vec![0, 1]), &mono(vec![1, 0])).unwrap();
        let comp = d1.compose(&d2).unwrap();
        for s in ["x^3+y", "x*y+x^2*y^2", "1", "x^5+y^3+x*y"] {
            let f = ctx.parse(s).unwrap();
            assert_eq!(
                comp.apply(&f).unwrap(),
                d1.apply(&d2.apply(&f).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn phi_realizes_matrix_units() {
        let ctx = ctx1();
        for a_exp in 0..2u64 {
            for b_exp in 0..2u64 {
                let a = mono(vec![a_exp]);
                let b = mono(vec![b_exp]);
                let phi = DualElement::pi(&ctx, 1, a.clone()).unwrap();
                let xb = Polynomial::monomial(ctx.clone(), b.clone(), 1);
                let op = phi_map(&xb, &phi).unwrap();
                let unit = DiffOp::matrix_unit(&ctx, 1, &b, &a).unwrap();
                assert_eq!(op, unit);
            }
        }
    }

    #[test]
    fn phi_of_one_tensor_pi_is_splitting() {
        let ctx = ctx1();
        let phi = DualElement::pi_one(&ctx, 1).unwrap();
        let op = phi_map(&Polynomial::one(ctx.clone()), &phi).unwrap();
        for s in ["x^3+x^2+1", "x^4", "x", "0"] {
            let f = ctx.parse(s).unwrap();
            assert_eq!(
                op.apply(&f).unwrap(),
                crate::frobenius::splitting_compose(&f, 1).unwrap()
            );
        }
    }

    #[test]
    fn phi_bimodule_balance() {
        // Phi(a·r^q ⊗ φ) = Phi(a ⊗ r·φ): the right R-structure on F^e_* R
        // goes through the Frobenius.
        let ctx = ctx1();
        let a = ctx.parse("x+1").unwrap();
        let r = ctx.parse("x^2+x").unwrap();
        let q = q_of(2, 1).unwrap();
        let phi = DualElement::pi_one(&ctx, 1).unwrap();
        let lhs = phi_map(&a.mul(&r.pow(q)), &phi).unwrap();
        let scaled_phi = DualElement::new(
            &ctx,
            1,
            phi.coeffs().map(|(m, c)| (m.clone(), c.mul(&r))),
        )
        .unwrap();
        let rhs = phi_map(&a, &scaled_phi).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_examples() {
        let ctx = ctx1();
        let pi1 = DualElement::pi_one(&ctx, 1).unwrap();
        assert_eq!(
            psi_map(&pi1, &Polynomial::one(ctx.clone())).unwrap(),
            Polynomial::one(ctx.clone())
        );
        // Dual basis behaviour.
        let pix = DualElement::pi(&ctx, 1, mono(vec![1])).unwrap();
        assert_eq!(
            psi_map(&pix, &ctx.parse("x").unwrap()).unwrap(),
            ctx.parse("1").unwrap()
        );
        assert!(psi_map(&pix, &ctx.parse("1").unwrap()).unwrap().is_zero());
        // Worked example.
        assert_eq!(
            psi_map(&pi1, &ctx.parse("x^3+x^2+1").unwrap()).unwrap(),
            ctx.parse("x+1").unwrap()
        );
    }

    #[test]
    fn psi_inverse_roundtrip() {
        let ctx = ctx1();
        for s in ["1", "x+1", "x^3+x", "x^2+x+1"] {
            let f = ctx.parse(s).unwrap();
            let (phi, a) = psi_inverse(&f, 1).unwrap();
            assert_eq!(psi_map(&phi, &a).unwrap(), f);
        }
        // The worked fixture: f = x+1 maps to (π_1, x^2+1).
        let f = ctx.parse("x+1").unwrap();
        let (_, a) = psi_inverse(&f, 1).unwrap();
        assert_eq!(a, ctx.parse("x^2+1").unwrap());
    }

    #[test]
    fn embed_preserves_action() {
        let ctx = ctx1();
        let id = DiffOp::identity(&ctx, 1).unwrap();
        assert_eq!(id.embed().unwrap(), DiffOp::identity(&ctx, 2).unwrap());

        let proj = projection_x_to_one(&ctx);
        let embedded = proj.embed().unwrap();
        for s in ["1", "x", "x^2", "x^3", "x^5+x^2+1"] {
            let f = ctx.parse(s).unwrap();
            assert_eq!(embedded.apply(&f).unwrap(), proj.apply(&f).unwrap());
        }
    }

    #[test]
    fn twist_of_scalar_is_pth_power() {
        let ctx = RingContext::new(3, ["x"]).unwrap();
        let c = ctx.parse("x+2").unwrap();
        let mult = DiffOp::scalar_mult(&c, 1).unwrap();
        let twisted = mult.frobenius_twist().unwrap();
        let expected = DiffOp::scalar_mult(&c.frobenius_power(1).unwrap(), 2).unwrap();
        assert_eq!(twisted, expected);

        let id = DiffOp::identity(&ctx, 1).unwrap();
        assert_eq!(
            id.frobenius_twist().unwrap(),
            DiffOp::identity(&ctx, 2).unwrap()
        );
    }

    #[test]
    fn twist_defining_identity_on_basis_slots() {
        let ctx = ctx1();
        let proj = projection_x_to_one(&ctx);
        let twisted = proj.frobenius_twist().unwrap();
        for a_exp in 0..2u64 {
            for rs in ["x^3+x+1", "x^2", "x+1"] {
                let r = ctx.parse(rs).unwrap();
                let s = Polynomial::monomial(ctx.clone(), mono(vec![a_exp]), 1);
                let lhs = twisted
                    .apply(&s.mul(&r.frobenius_power(1).unwrap()))
                    .unwrap();
                let rhs = s.mul(&proj.apply(&r).unwrap().frobenius_power(1).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn twist_preserves_composition() {
        let ctx = ctx1();
        let d1 = projection_x_to_one(&ctx);
        let d2 = DiffOp::from_action(&ctx, 1, |m| {
            Ok(ctx.parse("x").unwrap().mul_monomial(m, 1))
        })
        .unwrap();
        let lhs = d1.compose(&d2).unwrap().frobenius_twist().unwrap();
        let rhs = d1
            .frobenius_twist()
            .unwrap()
            .compose(&d2.frobenius_twist().unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn je_membership_examples() {
        let ctx = ctx1();
        assert!(!DiffOp::identity(&ctx, 1).unwrap().je_membership());
        assert!(projection_x_to_one(&ctx).je_membership());
    }

    #[test]
    fn je_is_a_left_ideal() {
        let ctx = ctx1();
        let rho = projection_x_to_one(&ctx); // in J_1
        let delta = DiffOp::from_action(&ctx, 1, |m| {
            Ok(ctx.parse("x+1").unwrap().mul_monomial(m, 1))
        })
        .unwrap();
        assert!(delta.compose(&rho).unwrap().je_membership());
    }

    #[test]
    fn ann_je_of_the_whole_ring() {
        // Ann_R J_e within degree d = all p^e-th powers of degree <= d/p^e.
        let ctx = ctx1();
        let r = Ideal::unit(ctx.clone());
        let ann = ann_je(&r, 1, 4).unwrap();
        assert!(ann.conclusive);
        // Expect the span of {1, x^2, x^4}.
        let ambient = monomials_up_to_degree(1, 4);
        let index = index_map(&ambient);
        let got = GfpMat::new(
            2,
            ambient.len(),
            ann.spanning
                .iter()
                .map(|f| poly_to_row(f, &index, ambient.len()).unwrap())
                .collect(),
        );
        let expected = GfpMat::new(
            2,
            ambient.len(),
            ["1", "x^2", "x^4"]
                .iter()
                .map(|s| poly_to_row(&ctx.parse(s).unwrap(), &index, ambient.len()).unwrap())
                .collect(),
        );
        assert!(got.row_span_eq(expected));
    }

    #[test]
    fn ann_je_of_bracket_ideal() {
        // K = (x)^[2] = (x^2): the annihilator slice is spanned by squares
        // of (x)-elements, {x^2, x^4} up to degree 4.
        let ctx = ctx1();
        let k = Ideal::principal(ctx.parse("x^2").unwrap());
        let ann = ann_je(&k, 1, 4).unwrap();
        assert!(ann.conclusive);
        let ambient = monomials_up_to_degree(1, 4);
        let index = index_map(&ambient);
        let got = GfpMat::new(
            2,
            ambient.len(),
            ann.spanning
                .iter()
                .map(|f| poly_to_row(f, &index, ambient.len()).unwrap())
                .collect(),
        );
        let expected = GfpMat::new(
            2,
            ambient.len(),
            ["x^2", "x^4"]
                .iter()
                .map(|s| poly_to_row(&ctx.parse(s).unwrap(), &index, ambient.len()).unwrap())
                .collect(),
        );
        assert!(got.row_span_eq(expected));
    }

    #[test]
    fn ann_je_rejects_unstable_ideals() {
        let ctx = ctx1();
        let k = Ideal::principal(ctx.parse("x").unwrap());
        assert_eq!(
            ann_je(&k, 1, 4).unwrap_err(),
            Error::NotDeStable { e: 1 }
        );
    }

    #[test]
    fn de_orbit_examples() {
        let ctx = ctx1();
        // Orbit of x is the whole ring (the projection x->1 yields a unit).
        let orbit = de_orbit(&ctx.parse("x").unwrap(), 1).unwrap();
        assert!(orbit.equals(&Ideal::unit(ctx.clone())).unwrap());

        // Orbit of a pure power is the principal ideal it generates.
        let h = ctx.parse("x+1").unwrap();
        let hq = h.frobenius_power(2).unwrap();
        assert!(de_orbit(&hq, 2)
            .unwrap()
            .equals(&Ideal::principal(hq.clone()))
            .unwrap());

        // Orbit of x^2 at level 1 is (x^2).
        assert!(de_orbit(&ctx.parse("x^2").unwrap(), 1)
            .unwrap()
            .equals(&Ideal::principal(ctx.parse("x^2").unwrap()))
            .unwrap());
    }

    #[test]
    fn de_orbit_matches_matrix_oracle() {
        let ctx = RingContext::new(2, ["x", "y"]).unwrap();
        for s in ["x", "x^2+y", "x^3+x*y+y^2", "x^2*y^2"] {
            let u = ctx.parse(s).unwrap();
            let fast = de_orbit(&u, 1).unwrap();
            let slow = matrix_orbit(&u, 1).unwrap();
            assert!(fast.equals(&slow).unwrap(), "orbit mismatch for {s}");
            assert!(fast.contains_poly(&u).unwrap());
        }
    }

    #[test]
    fn stability_examples() {
        let ctx = RingContext::new(2, ["x", "y"]).unwrap();
        let bracket = Ideal::new(
            ctx.clone(),
            [ctx.parse("x^2").unwrap(), ctx.parse("y^2").unwrap()],
        );
        assert!(is_de_stable(&bracket, 1).unwrap());
        let x = Ideal::principal(ctx.parse("x").unwrap());
        assert!(!is_de_stable(&x, 1).unwrap());
        assert!(is_de_stable(&Ideal::unit(ctx.clone()), 1).unwrap());
        assert!(is_de_stable(&Ideal::zero(ctx), 1).unwrap());
    }

    #[test]
    fn size_guard_blocks_large_matrices() {
        let ctx = RingContext::with_limits(
            3,
            ["x", "y"],
            crate::ring::Limits {
                size_guard: 8,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(matches!(
            DiffOp::identity(&ctx, 1),
            Err(Error::SizeGuard { .. })
        ));
    }
}
