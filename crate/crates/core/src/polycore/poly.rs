//! Sparse multivariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};

/// Exponent vector with cached total degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            deg: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, deg: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exps,
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps = other
            .exps
            .iter()
            .zip(&self.exps)
            .map(|(a, b)| a - b)
            .collect();
        Monomial {
            exps,
            deg: other.deg - self.deg,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bitmask of variables (mod 64) that occur; a fast divisibility filter.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Grevlex on the first `n` variables, ties broken by grevlex on the rest.
    /// Eliminates exactly the front block.
    BlockElimination(usize),
}

fn grevlex(a: &[u32], b: &[u32], da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // smaller exponent in the last differing variable is larger
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => grevlex(&a.exps, &b.exps, a.deg, b.deg),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::BlockElimination(n) => {
                let (af, ar) = a.exps.split_at(n);
                let (bf, br) = b.exps.split_at(n);
                let daf: u32 = af.iter().sum();
                let dbf: u32 = bf.iter().sum();
                grevlex(af, bf, daf, dbf).then_with(|| grevlex(ar, br, a.deg - daf, b.deg - dbf))
            }
        }
    }
}

/// Ambient polynomial ring: field, ordered variable names, monomial order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring<F: Field> {
    field: F,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl<F: Field> Ring<F> {
    pub fn new(field: F, vars: Vec<String>, order: MonomialOrder) -> Result<Arc<Self>> {
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidParams(format!("duplicate variable `{v}`")));
            }
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidParams(format!("bad variable name `{v}`")));
            }
        }
        if let MonomialOrder::BlockElimination(n) = order {
            if n > vars.len() {
                return Err(Error::InvalidParams(
                    "block larger than variable count".into(),
                ));
            }
        }
        Ok(Arc::new(Ring { field, vars, order }))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Same variables and field, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Self>> {
        Ring::new(self.field.clone(), self.vars.clone(), order)
    }
}

#[derive(Debug, Clone)]
pub struct Term<F: Field> {
    pub mono: Monomial,
    pub coeff: F::Elem,
}

/// Polynomial with terms sorted by descending monomial order and no zero coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<Ring<F>>,
    terms: Vec<Term<F>>,
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| a.mono == b.mono && a.coeff == b.coeff)
    }
}

pub(crate) fn same_ring<F: Field>(a: &Arc<Ring<F>>, b: &Arc<Ring<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring<F>>, c: F::Elem) -> Self {
        if ring.field().is_zero(&c) {
            return Self::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![Term {
                mono: Monomial::one(ring.nvars()),
                coeff: c,
            }],
        }
    }

    pub fn one(ring: &Arc<Ring<F>>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<Ring<F>>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Polynomial {
            ring: ring.clone(),
            terms: vec![Term {
                mono: Monomial::var(ring.nvars(), i),
                coeff: ring.field().one(),
            }],
        }
    }

    pub fn var_named(ring: &Arc<Ring<F>>, name: &str) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::InvalidParams(format!("unknown variable `{name}`")))?;
        Ok(Self::var(ring, i))
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(
        ring: &Arc<Ring<F>>,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Self {
        let field = ring.field();
        let mut raw: Vec<Term<F>> = terms
            .into_iter()
            .map(|(mono, coeff)| {
                assert_eq!(mono.exps.len(), ring.nvars(), "monomial arity mismatch");
                Term { mono, coeff }
            })
            .collect();
        raw.sort_by(|a, b| ring.cmp(&b.mono, &a.mono));
        let mut out: Vec<Term<F>> = Vec::with_capacity(raw.len());
        for t in raw {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => last.coeff = field.add(&last.coeff, &t.coeff),
                _ => out.push(t),
            }
        }
        out.retain(|t| !field.is_zero(&t.coeff));
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub(crate) fn from_sorted_terms(ring: &Arc<Ring<F>>, terms: Vec<Term<F>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one()
    }

    pub fn lead(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.deg).max()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.mono.exps[i] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t0) => self.terms.iter().all(|t| t.mono.deg == t0.mono.deg),
        }
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomials live in different rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        self.combine(other, None, &Monomial::one(self.ring.nvars()), true)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        let minus_one = self.field().neg(&self.field().one());
        self.combine(
            other,
            Some(&minus_one),
            &Monomial::one(self.ring.nvars()),
            true,
        )
    }

    /// `self + c * m * other`, merging sorted term lists.
    pub fn add_scaled(&self, other: &Self, c: &F::Elem, m: &Monomial) -> Self {
        self.check_ring(other);
        self.combine(other, Some(c), m, false)
    }

    fn combine(&self, other: &Self, c: Option<&F::Elem>, m: &Monomial, unit_mono: bool) -> Self {
        let field = self.field();
        let ring = &self.ring;
        let mut out: Vec<Term<F>> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |t: &Term<F>| -> Term<F> {
            let mono = if unit_mono {
                t.mono.clone()
            } else {
                t.mono.mul(m)
            };
            let coeff = match c {
                Some(c) => field.mul(c, &t.coeff),
                None => t.coeff.clone(),
            };
            Term { mono, coeff }
        };
        let mut pending: Option<Term<F>> = other.terms.first().map(&shifted);
        while let Some(b) = pending.take() {
            if i < self.terms.len() {
                let a = &self.terms[i];
                match ring.cmp(&a.mono, &b.mono) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                        pending = Some(b);
                        continue;
                    }
                    Ordering::Equal => {
                        let s = field.add(&a.coeff, &b.coeff);
                        if !field.is_zero(&s) {
                            out.push(Term {
                                mono: b.mono,
                                coeff: s,
                            });
                        }
                        i += 1;
                    }
                    Ordering::Less => out.push(b),
                }
            } else {
                out.push(b);
            }
            j += 1;
            pending = other.terms.get(j).map(&shifted);
        }
        out.extend_from_slice(&self.terms[i..]);
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        let field = self.field();
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mono: t.mono.clone(),
                coeff: field.neg(&t.coeff),
            })
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mono: t.mono.clone(),
                coeff: field.mul(c, &t.coeff),
            })
            .filter(|t| !field.is_zero(&t.coeff))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn mul_term(&self, c: &F::Elem, m: &Monomial) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mono: t.mono.mul(m),
                coeff: field.mul(c, &t.coeff),
            })
            .filter(|t| !field.is_zero(&t.coeff))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Self::zero(&self.ring);
        for t in &small.terms {
            acc = acc.add_scaled(big, &t.coeff, &t.mono);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some(t) => {
                let inv = self
                    .field()
                    .inv(&t.coeff)
                    .expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.ring.nvars());
        let field = self.field();
        let mut acc = field.zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (x, &e) in point.iter().zip(&t.mono.exps) {
                if e > 0 {
                    v = field.mul(&v, &field.pow(x, e as u64));
                }
            }
            acc = field.add(&acc, &v);
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let field = self.field();
        let terms = self.terms.iter().filter(|t| t.mono.exps[var] > 0).map(|t| {
            let mut exps = t.mono.exps.clone();
            let e = exps[var];
            exps[var] -= 1;
            (
                Monomial::new(exps),
                field.mul(&field.from_i64(e as i64), &t.coeff),
            )
        });
        Self::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }

    /// Substitutes each variable `i` by `images[i]` (all in the target ring).
    pub fn substitute(&self, target: &Arc<Ring<F>>, images: &[Polynomial<F>]) -> Self {
        assert_eq!(images.len(), self.ring.nvars());
        let mut acc = Polynomial::zero(target);
        for t in &self.terms {
            let mut term = Polynomial::constant(target, t.coeff.clone());
            for (i, &e) in t.mono.exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Re-expresses in `target`, sending variable `i` to `var_map[i]`.
    pub fn map_to(&self, target: &Arc<Ring<F>>, var_map: &[usize]) -> Self {
        assert_eq!(var_map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self.terms.iter().map(|t| {
            let mut exps = vec![0u32; n];
            for (i, &e) in t.mono.exps.iter().enumerate() {
                exps[var_map[i]] += e;
            }
            (Monomial::new(exps), t.coeff.clone())
        });
        Self::from_terms(target, terms.collect::<Vec<_>>())
    }

    /// Maps into a ring whose variables include all of ours, matching by name.
    pub fn embed_by_name(&self, target: &Arc<Ring<F>>) -> Result<Self> {
        let map = var_map_by_name(&self.ring, target)?;
        Ok(self.map_to(target, &map))
    }

    /// Parses the text format (see [`fmt::Display`]).
    pub fn parse(ring: &Arc<Ring<F>>, s: &str) -> Result<Self> {
        super::text::parse_polynomial(ring, s)
    }
}

/// Index map sending each variable of `from` to the same-named variable of `to`.
pub fn var_map_by_name<F: Field>(from: &Ring<F>, to: &Ring<F>) -> Result<Vec<usize>> {
    from.vars()
        .iter()
        .map(|v| {
            to.var_index(v).ok_or_else(|| {
                Error::RingMismatch(format!("variable `{v}` missing from target ring"))
            })
        })
        .collect()
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_polynomial(self))
    }
}
