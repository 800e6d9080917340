//! Dense exact linear algebra over `F_p`, used for annihilator computations
//! and for comparing finite-dimensional spans of polynomials.

use std::collections::BTreeMap;

use crate::ring::{mod_pow, Monomial, Polynomial, RingContext};

/// A matrix over `F_p` with rows as coefficient vectors.
#[derive(Clone, Debug)]
pub struct GfpMat {
    p: u64,
    pub rows: Vec<Vec<u64>>,
    ncols: usize,
}

impl GfpMat {
    pub fn new(p: u64, ncols: usize, rows: Vec<Vec<u64>>) -> Self {
        for row in &rows {
            assert_eq!(row.len(), ncols, "ragged matrix");
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|c| c % p).collect())
            .collect();
        GfpMat { p, rows, ncols }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn inv(&self, a: u64) -> u64 {
        mod_pow(a, self.p - 2, self.p)
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.ncols {
            if row == self.rows.len() {
                break;
            }
            let Some(pivot_row) = (row..self.rows.len()).find(|&r| self.rows[r][col] != 0) else {
                continue;
            };
            self.rows.swap(row, pivot_row);
            let inv = self.inv(self.rows[row][col]);
            for c in col..self.ncols {
                self.rows[row][c] = self.rows[row][c] * inv % p;
            }
            for r in 0..self.rows.len() {
                if r != row && self.rows[r][col] != 0 {
                    let factor = self.rows[r][col];
                    for c in col..self.ncols {
                        let sub = factor * self.rows[row][c] % p;
                        self.rows[r][c] = (self.rows[r][c] + p - sub) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        self.rows.truncate(row);
        pivots
    }

    pub fn rank(mut self) -> usize {
        self.rref();
        self.rows.len()
    }

    /// A basis of the kernel of the linear map `x -> self * x`
    /// (columns are the unknowns).
    pub fn kernel_basis(mut self) -> Vec<Vec<u64>> {
        let p = self.p;
        let pivots = self.rref();
        let pivot_of_col: BTreeMap<usize, usize> = pivots
            .iter()
            .enumerate()
            .map(|(r, &c)| (c, r))
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vec![0u64; self.ncols];
            v[free] = 1;
            for (&col, &r) in &pivot_of_col {
                // pivot entry is 1, so x_col = -rref[r][free]
                v[col] = (p - self.rows[r][free] % p) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// Whether two row spaces coincide, by comparing reduced echelon forms.
    pub fn row_span_eq(mut self, mut other: GfpMat) -> bool {
        assert_eq!(self.ncols, other.ncols);
        self.rref();
        other.rref();
        self.rows == other.rows
    }
}

/// Enumerates all monomials in `n` variables of total degree at most `d`,
/// in a fixed deterministic order.
pub fn monomials_up_to_degree(n: usize, d: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u64; n];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u64>, idx: usize, remaining: u64) {
        if idx == current.len() {
            out.push(Monomial::new(current.clone()));
            return;
        }
        for e in 0..=remaining {
            current[idx] = e;
            rec(out, current, idx + 1, remaining - e);
        }
        current[idx] = 0;
    }
    rec(&mut out, &mut current, 0, d);
    out.sort();
    out
}

/// Coefficient vector of `f` with respect to an indexed monomial list.
/// Returns `None` when `f` has support outside the list.
pub fn poly_to_row(
    f: &Polynomial,
    index: &BTreeMap<Monomial, usize>,
    ncols: usize,
) -> Option<Vec<u64>> {
    let mut row = vec![0u64; ncols];
    for (m, c) in f.terms() {
        let &i = index.get(m)?;
        row[i] = c;
    }
    Some(row)
}

/// Inverse of [`poly_to_row`].
pub fn row_to_poly(ctx: &RingContext, row: &[u64], monomials: &[Monomial]) -> Polynomial {
    Polynomial::from_terms(
        ctx.clone(),
        row.iter()
            .zip(monomials)
            .filter(|&(&c, _)| c != 0)
            .map(|(&c, m)| (m.clone(), c)),
    )
}

/// Index map for a monomial list.
pub fn index_map(monomials: &[Monomial]) -> BTreeMap<Monomial, usize> {
    monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect()
}
