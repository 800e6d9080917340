//! Sparse multivariate polynomial arithmetic over the prime field `F_p`.
//!
//! A [`RingContext`] fixes the characteristic `p`, the variable names and the
//! resource limits; every [`Polynomial`] carries (a cheap handle to) its
//! context. Values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.
//!
//! Coefficients are stored as least non-negative residues mod `p`; terms are
//! kept in a map ordered by graded reverse lexicographic order, which makes
//! the representation canonical: equal polynomials have identical term maps
//! and identical text renderings.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::Result;

/// Resource limits shared by every computation started from a context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of S-pairs Buchberger's algorithm may process.
    pub max_spairs: usize,
    /// Maximum total degree any intermediate polynomial may reach during a
    /// basis computation or reduction.
    pub max_degree: u64,
    /// Maximum rank `p^{en}` for which full operator matrices may be
    /// materialized.
    pub size_guard: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_spairs: 100_000,
            max_degree: 4_000,
            size_guard: 81,
        }
    }
}

#[derive(Debug)]
struct CtxInner {
    p: u64,
    vars: Vec<String>,
    limits: Limits,
}

/// The ambient ring `F_p[x_1, ..., x_n]` for a prime `p`.
#[derive(Clone, Debug)]
pub struct RingContext {
    inner: Arc<CtxInner>,
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.vars == other.inner.vars)
    }
}

impl Eq for RingContext {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingContext {
    /// Creates the ring `F_p[vars]`. Fails unless `p` is prime and the
    /// variable names are distinct identifiers.
    pub fn new<S: Into<String>>(p: u64, vars: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::with_limits(p, vars, Limits::default())
    }

    /// Same as [`RingContext::new`] with explicit resource limits.
    pub fn with_limits<S: Into<String>>(
        p: u64,
        vars: impl IntoIterator<Item = S>,
        limits: Limits,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        // (p-1)^2 must fit in u64 for coefficient products.
        if p >= (1u64 << 31) {
            return Err(Error::NonPrime(p));
        }
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(Error::InvalidVariables("need at least one variable".into()));
        }
        for v in &vars {
            if !valid_identifier(v) {
                return Err(Error::InvalidVariables(format!("bad variable name `{v}`")));
            }
        }
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                if vars[i] == vars[j] {
                    return Err(Error::InvalidVariables(format!(
                        "duplicate variable `{}`",
                        vars[i]
                    )));
                }
            }
        }
        Ok(RingContext {
            inner: Arc::new(CtxInner { p, vars, limits }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn limits(&self) -> &Limits {
        &self.inner.limits
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.inner.vars.iter().position(|v| v == name)
    }

    /// The polynomial `x_i` for the named variable.
    pub fn var(&self, name: &str) -> Result<Polynomial> {
        let i = self
            .var_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        let mut exps = vec![0u64; self.n()];
        exps[i] = 1;
        Ok(Polynomial::monomial(self.clone(), Monomial::new(exps), 1))
    }

    pub(crate) fn reduce(&self, c: u64) -> u64 {
        c % self.inner.p
    }

    pub(crate) fn add_coeff(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.inner.p
    }

    pub(crate) fn sub_coeff(&self, a: u64, b: u64) -> u64 {
        (a + self.inner.p - b) % self.inner.p
    }

    pub(crate) fn mul_coeff(&self, a: u64, b: u64) -> u64 {
        a * b % self.inner.p
    }

    pub(crate) fn inv_coeff(&self, a: u64) -> u64 {
        debug_assert!(a % self.inner.p != 0);
        mod_pow(a, self.inner.p - 2, self.inner.p)
    }

    /// Renders a bare monomial with this context's variable names.
    pub fn monomial_string(&self, m: &Monomial) -> String {
        Polynomial::monomial(self.clone(), m.clone(), 1).to_string()
    }
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// An exponent vector. The natural `Ord` is graded reverse lexicographic
/// (ascending), which fixes the canonical term order of the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u64>,
}

impl Monomial {
    pub fn new(exps: Vec<u64>) -> Self {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a.checked_add(*b).expect("monomial exponent overflow"))
                .collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial { exps })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    /// Scales every exponent by `q` (the `q`-th power of the monomial).
    pub fn scale(&self, q: u64) -> Result<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for &a in &self.exps {
            exps.push(a.checked_mul(q).ok_or(Error::ExponentOverflow)?);
        }
        Ok(Monomial { exps })
    }

    /// Componentwise division with remainder by `q`: returns
    /// `(self div q, self mod q)`.
    pub fn div_rem(&self, q: u64) -> (Monomial, Monomial) {
        let quot = self.exps.iter().map(|&a| a / q).collect();
        let rem = self.exps.iter().map(|&a| a % q).collect();
        (Monomial { exps: quot }, Monomial { exps: rem })
    }

    fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {
                for i in (0..self.exps.len()).rev() {
                    match self.exps[i].cmp(&other.exps[i]) {
                        Ordering::Equal => continue,
                        // Smaller rightmost entry means grevlex-larger.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }

    pub(crate) fn lex_cmp(&self, other: &Monomial) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grevlex_cmp(other)
    }
}

/// A sparse polynomial in canonical form: no zero coefficients, terms keyed
/// by grevlex-ascending monomials, coefficients in `{1, ..., p-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: RingContext,
    terms: BTreeMap<Monomial, u64>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Polynomial {
    pub fn zero(ctx: RingContext) -> Self {
        Polynomial {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: RingContext) -> Self {
        Self::constant(ctx, 1)
    }

    pub fn constant(ctx: RingContext, c: u64) -> Self {
        let n = ctx.n();
        Self::from_terms(ctx, [(Monomial::one(n), c)])
    }

    pub fn monomial(ctx: RingContext, m: Monomial, c: u64) -> Self {
        Self::from_terms(ctx, [(m, c)])
    }

    /// Builds a polynomial from raw terms, reducing coefficients mod `p`,
    /// merging duplicate monomials and dropping zeros.
    pub fn from_terms(ctx: RingContext, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let n = ctx.n();
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), n, "monomial arity does not match the ring context");
            let c = ctx.reduce(c);
            if c == 0 {
                continue;
            }
            let entry = map.entry(m).or_insert(0);
            *entry = ctx.add_coeff(*entry, c);
        }
        map.retain(|_, c| *c != 0);
        Polynomial { ctx, terms: map }
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Leading term under the given order.
    pub fn leading(&self, ord: crate::groebner::MonomialOrder) -> Option<(Monomial, u64)> {
        use crate::groebner::MonomialOrder::*;
        match ord {
            Grevlex => self
                .terms
                .last_key_value()
                .map(|(m, &c)| (m.clone(), c)),
            Lex => self
                .terms
                .iter()
                .max_by(|(a, _), (b, _)| a.lex_cmp(b))
                .map(|(m, &c)| (m.clone(), c)),
        }
    }

    fn assert_same_ctx(&self, other: &Polynomial) {
        assert_eq!(self.ctx, other.ctx, "ring context mismatch");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ctx(other);
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert(0);
            *entry = self.ctx.add_coeff(*entry, c);
        }
        terms.retain(|_, c| *c != 0);
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ctx(other);
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert(0);
            *entry = self.ctx.sub_coeff(*entry, c);
        }
        terms.retain(|_, c| *c != 0);
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), self.ctx.sub_coeff(0, c)))
            .collect();
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_ctx(other);
        let mut terms: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m).or_insert(0);
                *entry = self.ctx.add_coeff(*entry, self.ctx.mul_coeff(ca, cb));
            }
        }
        terms.retain(|_, c| *c != 0);
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scalar_mul(&self, c: u64) -> Polynomial {
        let c = self.ctx.reduce(c);
        let terms = self
            .terms
            .iter()
            .map(|(m, &a)| (m.clone(), self.ctx.mul_coeff(a, c)))
            .filter(|&(_, a)| a != 0)
            .collect();
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Multiplies by the term `c * x^m`.
    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Polynomial {
        let c = self.ctx.reduce(c);
        if c == 0 {
            return Polynomial::zero(self.ctx.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, &a)| (t.mul(m), self.ctx.mul_coeff(a, c)))
            .collect();
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Polynomial {
        let mut acc = Polynomial::one(self.ctx.clone());
        if k == 0 {
            return acc;
        }
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Same result as [`Polynomial::pow`], computed through the base-`p`
    /// digits of the exponent: `f^k = Π_i (f^{d_i})^{p^i}` for
    /// `k = Σ d_i p^i`. Much cheaper than repeated squaring for the large
    /// structured exponents (`p^e - 1`, `p^e - N`) that Frobenius chains
    /// produce, since every factor is a Frobenius power of a small
    /// polynomial.
    pub fn pow_base_p(&self, k: u64) -> Result<Polynomial> {
        let p = self.ctx.p();
        let mut acc = Polynomial::one(self.ctx.clone());
        let mut rest = k;
        let mut level = 0u32;
        while rest > 0 {
            let digit = rest % p;
            rest /= p;
            if digit != 0 {
                acc = acc.mul(&self.pow(digit).frobenius_power(level)?);
            }
            level += 1;
        }
        Ok(acc)
    }

    /// The `p^e`-th power `f^{p^e}`.
    ///
    /// Over a prime field the coefficients are Frobenius-fixed, so this is
    /// exactly the polynomial with every exponent vector scaled by `p^e`.
    pub fn frobenius_power(&self, e: u32) -> Result<Polynomial> {
        let q = q_of(self.ctx.p(), e)?;
        if q == 1 {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            terms.insert(m.scale(q)?, c);
        }
        Ok(Polynomial {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    /// Makes the leading coefficient (under the given order) equal to one.
    pub fn monic(&self, ord: crate::groebner::MonomialOrder) -> Polynomial {
        match self.leading(ord) {
            None => self.clone(),
            Some((_, c)) if c == 1 => self.clone(),
            Some((_, c)) => self.scalar_mul(self.ctx.inv_coeff(c)),
        }
    }
}

/// `p^e` with overflow detection.
pub fn q_of(p: u64, e: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..e {
        q = q.checked_mul(p).ok_or(Error::ExponentOverflow)?;
    }
    Ok(q)
}

/// Exact division in the polynomial ring: returns `Some(q)` with `q*f == g`,
/// `None` when `f` does not divide `g`, and an error for `f == 0`.
pub fn exact_divide(g: &Polynomial, f: &Polynomial) -> Result<Option<Polynomial>> {
    use crate::groebner::MonomialOrder::Grevlex;
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    assert_eq!(g.ctx(), f.ctx(), "ring context mismatch");
    let ctx = g.ctx().clone();
    let (fm, fc) = f.leading(Grevlex).expect("nonzero divisor");
    let fc_inv = ctx.inv_coeff(fc);
    let mut rest = g.clone();
    let mut quot = Polynomial::zero(ctx.clone());
    while !rest.is_zero() {
        let (rm, rc) = rest.leading(Grevlex).unwrap();
        let t = match rm.checked_div(&fm) {
            Some(t) => t,
            None => return Ok(None),
        };
        let c = ctx.mul_coeff(rc, fc_inv);
        let piece = Polynomial::monomial(ctx.clone(), t.clone(), c);
        quot = quot.add(&piece);
        rest = rest.sub(&f.mul_monomial(&t, c));
    }
    Ok(Some(quot))
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ctx.vars();
        let mut first = true;
        // Descending canonical (grevlex) order.
        for (m, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
                continue;
            }
            let mut lead = true;
            if c != 1 {
                write!(f, "{c}")?;
                lead = false;
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                if e == 1 {
                    write!(f, "{}", vars[i])?;
                } else {
                    write!(f, "{}^{}", vars[i], e)?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    ctx: &'a RingContext,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn number_mod_p(&mut self) -> Result<u64> {
        let p = self.ctx.p();
        let mut acc = 0u64;
        let mut any = false;
        while let Some(b) = self.bytes.get(self.pos).copied() {
            if b.is_ascii_digit() {
                any = true;
                acc = (acc * 10 + (b - b'0') as u64) % p;
                self.pos += 1;
            } else {
                break;
            }
        }
        if !any {
            return Err(Error::Parse("expected a number".into()));
        }
        Ok(acc)
    }

    fn number_exact(&mut self) -> Result<u64> {
        let mut acc = 0u64;
        let mut any = false;
        while let Some(b) = self.bytes.get(self.pos).copied() {
            if b.is_ascii_digit() {
                any = true;
                acc = acc
                    .checked_mul(10)
                    .and_then(|a| a.checked_add((b - b'0') as u64))
                    .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                self.pos += 1;
            } else {
                break;
            }
        }
        if !any {
            return Err(Error::Parse("expected an exponent".into()));
        }
        Ok(acc)
    }

    fn identifier(&mut self) -> Result<String> {
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            let c = b as char;
            let ok = if self.pos == start {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if ok {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(Error::Parse("expected a variable name".into()));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii input")
            .to_string())
    }

    /// One term: `factor (* factor)*`, factors being numbers or `var[^exp]`.
    fn term(&mut self) -> Result<(Monomial, u64)> {
        let mut coeff = 1u64;
        let mut exps = vec![0u64; self.ctx.n()];
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    self.skip_ws();
                    let c = self.number_mod_p()?;
                    coeff = self.ctx.mul_coeff(coeff, c);
                }
                Some(b) if (b as char).is_ascii_alphabetic() || b == b'_' => {
                    self.skip_ws();
                    let name = self.identifier()?;
                    let idx = self
                        .ctx
                        .var_index(&name)
                        .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                    let mut e = 1u64;
                    if self.peek() == Some(b'^') {
                        self.bump();
                        self.skip_ws();
                        e = self.number_exact()?;
                    }
                    exps[idx] = exps[idx]
                        .checked_add(e)
                        .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                }
                _ => return Err(Error::Parse("expected a coefficient or variable".into())),
            }
            if self.peek() == Some(b'*') {
                self.bump();
            } else {
                break;
            }
        }
        Ok((Monomial::new(exps), coeff))
    }

    fn expression(&mut self) -> Result<Polynomial> {
        let mut terms: Vec<(Monomial, u64)> = Vec::new();
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.bump();
                true
            }
            Some(b'+') => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let (m, c) = self.term()?;
            let c = if negative {
                self.ctx.sub_coeff(0, c)
            } else {
                c
            };
            terms.push((m, c));
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    negative = false;
                }
                Some(b'-') => {
                    self.bump();
                    negative = true;
                }
                None => break,
                Some(b) => {
                    return Err(Error::Parse(format!(
                        "unexpected character `{}`",
                        b as char
                    )))
                }
            }
        }
        Ok(Polynomial::from_terms(self.ctx.clone(), terms))
    }
}

impl RingContext {
    /// Parses the textual polynomial grammar: terms joined by `+`/`-`, a term
    /// being factors joined by `*`, a factor a decimal coefficient or
    /// `var[^exp]`. Whitespace is insignificant.
    pub fn parse(&self, input: &str) -> Result<Polynomial> {
        if !input.is_ascii() {
            return Err(Error::Parse("input must be ascii".into()));
        }
        let mut parser = Parser {
            ctx: self,
            bytes: input.as_bytes(),
            pos: 0,
        };
        let poly = parser.expression()?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(Error::Parse("trailing input".into()));
        }
        Ok(poly)
    }
}
