//! Ideals with a cached reduced Gröbner basis, and the derived operations:
//! elimination, intersection, saturation, radical membership, dimension.

use std::sync::{Arc, OnceLock};

use super::field::Field;
use super::groebner::{buchberger, normal_form, GbConfig, Reducer};
use super::poly::{same_ring, var_map_by_name, MonomialOrder, Polynomial, Ring};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Ideal<F: Field> {
    ring: Arc<Ring<F>>,
    gens: Vec<Polynomial<F>>,
    config: GbConfig,
    gb_cache: OnceLock<Arc<Vec<Polynomial<F>>>>,
}

impl<F: Field> std::fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ideal")
            .field("vars", &self.ring.vars())
            .field("gens", &self.gens)
            .finish()
    }
}

/// Which side of a radical comparison failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// A generator of the left ideal is not in the radical of the right.
    LeftInRightRadical,
    /// A generator of the right ideal is not in the radical of the left.
    RightInLeftRadical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadicalComparison<F: Field> {
    pub equal: bool,
    pub witness: Option<(Polynomial<F>, Direction)>,
}

type Extension<F> = (Arc<Ring<F>>, Vec<Polynomial<F>>, Polynomial<F>);

/// A variable name of the form `base`, `base1`, `base2`, ... not used by `ring`.
pub fn fresh_var<F: Field>(ring: &Ring<F>, base: &str) -> String {
    if ring.var_index(base).is_none() {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|v| ring.var_index(v).is_none())
        .unwrap()
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &Arc<Ring<F>>, gens: Vec<Polynomial<F>>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch(format!(
                "generator `{g}` is not in the ideal's ring"
            )));
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            config: GbConfig::default(),
            gb_cache: OnceLock::new(),
        })
    }

    pub fn parse(ring: &Arc<Ring<F>>, gens: &[&str]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|s| Polynomial::parse(ring, s))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, gens)
    }

    pub fn unit(ring: &Arc<Ring<F>>) -> Self {
        Ideal::new(ring, vec![Polynomial::one(ring)]).unwrap()
    }

    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Ideal::new(ring, Vec::new()).unwrap()
    }

    pub fn with_config(mut self, config: GbConfig) -> Self {
        self.config = config;
        self.gb_cache = OnceLock::new();
        self
    }

    pub fn config(&self) -> &GbConfig {
        &self.config
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    fn derived(&self, ring: &Arc<Ring<F>>, gens: Vec<Polynomial<F>>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens,
            config: self.config,
            gb_cache: OnceLock::new(),
        }
    }

    /// Sum of ideals.
    pub fn add(&self, other: &Ideal<F>) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(self.derived(&self.ring, gens))
    }

    pub fn add_generators(&self, more: impl IntoIterator<Item = Polynomial<F>>) -> Result<Self> {
        let other = Ideal::new(&self.ring, more.into_iter().collect())?;
        self.add(&other)
    }

    fn check_same_ring(&self, other: &Ideal<F>) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch("ideals live in different rings".into()))
        }
    }

    /// Reduced Gröbner basis under the ring's order, computed once.
    pub fn groebner_basis(&self) -> Result<Arc<Vec<Polynomial<F>>>> {
        if let Some(gb) = self.gb_cache.get() {
            return Ok(gb.clone());
        }
        let gb = Arc::new(buchberger(&self.ring, &self.gens, &self.config)?);
        let _ = self.gb_cache.set(gb);
        Ok(self.gb_cache.get().unwrap().clone())
    }

    pub fn cached_groebner_basis(&self) -> Option<Arc<Vec<Polynomial<F>>>> {
        self.gb_cache.get().cloned()
    }

    /// The same ideal in the same variables under another monomial order.
    pub fn in_order(&self, order: MonomialOrder) -> Result<Self> {
        if order == self.ring.order() {
            return Ok(self.clone());
        }
        let ring = self.ring.with_order(order)?;
        let ident: Vec<usize> = (0..ring.nvars()).collect();
        let gens = self.gens.iter().map(|g| g.map_to(&ring, &ident)).collect();
        Ok(self.derived(&ring, gens))
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        normal_form(f, &self.groebner_basis()?)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal<F>) -> Result<bool> {
        self.check_same_ring(other)?;
        let gb = self.groebner_basis()?;
        let reducer = Reducer::new(gb.iter());
        Ok(other.gens.iter().all(|g| reducer.reduce(g).is_zero()))
    }

    /// Ideal equality, decided by comparing reduced Gröbner bases.
    pub fn equals(&self, other: &Ideal<F>) -> Result<bool> {
        self.check_same_ring(other)?;
        Ok(*self.groebner_basis()? == *other.groebner_basis()?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner_basis()?.iter().any(|g| g.is_unit()))
    }

    /// Generators of `self ∩ K[remaining variables]`, living in the ring of the
    /// remaining variables (original relative order, grevlex unless the
    /// ambient order was lex).
    pub fn eliminate(&self, front: &[&str]) -> Result<Self> {
        let n = self.ring.nvars();
        let mut front_idx = Vec::with_capacity(front.len());
        for v in front {
            let i = self
                .ring
                .var_index(v)
                .ok_or_else(|| Error::InvalidParams(format!("unknown variable `{v}`")))?;
            if !front_idx.contains(&i) {
                front_idx.push(i);
            }
        }
        let rest_idx: Vec<usize> = (0..n).filter(|i| !front_idx.contains(i)).collect();
        let names: Vec<String> = front_idx
            .iter()
            .chain(&rest_idx)
            .map(|&i| self.ring.vars()[i].clone())
            .collect();
        let elim_ring = Ring::new(
            self.ring.field().clone(),
            names,
            MonomialOrder::BlockElimination(front_idx.len()),
        )?;
        let mut to_elim = vec![0usize; n];
        for (pos, &i) in front_idx.iter().chain(&rest_idx).enumerate() {
            to_elim[i] = pos;
        }
        let gens: Vec<Polynomial<F>> = self
            .gens
            .iter()
            .map(|g| g.map_to(&elim_ring, &to_elim))
            .collect();
        let gb = buchberger(&elim_ring, &gens, &self.config)?;

        let rest_order = match self.ring.order() {
            MonomialOrder::Lex => MonomialOrder::Lex,
            _ => MonomialOrder::Grevlex,
        };
        let rest_ring = Ring::new(
            self.ring.field().clone(),
            rest_idx
                .iter()
                .map(|&i| self.ring.vars()[i].clone())
                .collect(),
            rest_order,
        )?;
        let k = front_idx.len();
        let back: Vec<usize> = (0..n).map(|pos| pos.saturating_sub(k)).collect();
        let kept = gb
            .iter()
            .filter(|g| (0..k).all(|v| !g.uses_var(v)))
            .map(|g| g.map_to(&rest_ring, &back))
            .collect();
        Ok(self.derived(&rest_ring, kept))
    }

    /// Adjoins one fresh variable in front, returning the extended ring,
    /// the images of our generators and the new variable.
    fn extend_front(&self, base: &str) -> Result<Extension<F>> {
        let name = fresh_var(&self.ring, base);
        let mut names = vec![name];
        names.extend(self.ring.vars().iter().cloned());
        let ring = Ring::new(self.ring.field().clone(), names, self.ring.order())?;
        let shift: Vec<usize> = (1..=self.ring.nvars()).collect();
        let gens = self.gens.iter().map(|g| g.map_to(&ring, &shift)).collect();
        let v = Polynomial::var(&ring, 0);
        Ok((ring, gens, v))
    }

    fn lift(&self, ring: &Arc<Ring<F>>, f: &Polynomial<F>) -> Polynomial<F> {
        let shift: Vec<usize> = (1..=self.ring.nvars()).collect();
        f.map_to(ring, &shift)
    }

    /// Brings an ideal over the same variable names back into our ring.
    fn pull_back(&self, other: &Ideal<F>) -> Result<Self> {
        let map = var_map_by_name(&other.ring, &self.ring)?;
        let gens = other
            .gens
            .iter()
            .map(|g| g.map_to(&self.ring, &map))
            .collect();
        Ok(self.derived(&self.ring, gens))
    }

    /// `self ∩ other` via elimination of `s` from `s·I + (1 − s)·J`.
    pub fn intersect(&self, other: &Ideal<F>) -> Result<Self> {
        self.check_same_ring(other)?;
        let (ring, gi, s) = self.extend_front("aux_s")?;
        let one_minus_s = Polynomial::one(&ring).sub(&s);
        let mut gens: Vec<Polynomial<F>> = gi.iter().map(|g| s.mul(g)).collect();
        gens.extend(
            other
                .gens
                .iter()
                .map(|g| one_minus_s.mul(&self.lift(&ring, g))),
        );
        let name = ring.vars()[0].clone();
        let big = self.derived(&ring, gens);
        let cut = big.eliminate(&[&name])?;
        self.pull_back(&cut)
    }

    pub fn intersect_all(ideals: &[Ideal<F>]) -> Result<Self> {
        let (first, rest) = ideals
            .split_first()
            .ok_or_else(|| Error::InvalidParams("intersection of no ideals".into()))?;
        rest.iter()
            .try_fold(first.clone(), |acc, i| acc.intersect(i))
    }

    /// `(self : f^∞)` via elimination of `w` from `self + (1 − w·f)`.
    pub fn saturate(&self, f: &Polynomial<F>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::Precondition(
                "saturation by the zero polynomial".into(),
            ));
        }
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch(
                "saturating element from another ring".into(),
            ));
        }
        let (ring, mut gens, w) = self.extend_front("aux_w")?;
        gens.push(Polynomial::one(&ring).sub(&w.mul(&self.lift(&ring, f))));
        let name = ring.vars()[0].clone();
        let cut = self.derived(&ring, gens).eliminate(&[&name])?;
        self.pull_back(&cut)
    }

    /// Decides `f ∈ √self`: first by plain membership, then by whether
    /// `self + (1 − w·f)` is the unit ideal.
    pub fn radical_member(&self, f: &Polynomial<F>) -> Result<bool> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::RingMismatch("element from another ring".into()));
        }
        if self.contains(f)? {
            return Ok(true);
        }
        let (ring, mut gens, w) = self.extend_front("aux_w")?;
        gens.push(Polynomial::one(&ring).sub(&w.mul(&self.lift(&ring, f))));
        self.derived(&ring, gens).is_unit()
    }

    /// `√self ⊇ other`; returns the first generator of `other` that escapes.
    pub fn radical_contains(&self, other: &Ideal<F>) -> Result<Option<Polynomial<F>>> {
        self.check_same_ring(other)?;
        for g in &other.gens {
            if !self.radical_member(g)? {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    /// `√self = √other`, generator by generator in both directions.
    pub fn radical_equal(&self, other: &Ideal<F>) -> Result<RadicalComparison<F>> {
        if let Some(w) = other.radical_contains(self)? {
            return Ok(RadicalComparison {
                equal: false,
                witness: Some((w, Direction::LeftInRightRadical)),
            });
        }
        if let Some(w) = self.radical_contains(other)? {
            return Ok(RadicalComparison {
                equal: false,
                witness: Some((w, Direction::RightInLeftRadical)),
            });
        }
        Ok(RadicalComparison {
            equal: true,
            witness: None,
        })
    }

    /// Krull dimension of `ring / self`; `-1` for the unit ideal.
    ///
    /// Read off the leading-term ideal as the largest set of variables that
    /// contains the support of no leading monomial.
    pub fn krull_dimension(&self) -> Result<i64> {
        let gb = self.groebner_basis()?;
        if gb.iter().any(|g| g.is_unit()) {
            return Ok(-1);
        }
        let n = self.ring.nvars();
        let supports: Vec<Vec<usize>> = gb
            .iter()
            .map(|g| g.lead_monomial().unwrap().support().collect())
            .collect();
        Ok(max_independent_set(n, &supports) as i64)
    }

    /// `#variables − dimension`; the unit ideal gets `#variables + 1`.
    pub fn height(&self) -> Result<i64> {
        Ok(self.ring.nvars() as i64 - self.krull_dimension()?)
    }
}

/// Largest subset of `0..n` containing no set from `supports`.
fn max_independent_set(n: usize, supports: &[Vec<usize>]) -> usize {
    fn go(
        v: usize,
        n: usize,
        chosen: &mut Vec<bool>,
        size: usize,
        best: &mut usize,
        supports: &[Vec<usize>],
    ) {
        if size + (n - v) <= *best {
            return;
        }
        if v == n {
            *best = size;
            return;
        }
        chosen[v] = true;
        let blocked = supports
            .iter()
            .any(|s| s.contains(&v) && s.iter().all(|&i| chosen[i]));
        if !blocked {
            go(v + 1, n, chosen, size + 1, best, supports);
        }
        chosen[v] = false;
        go(v + 1, n, chosen, size, best, supports);
    }
    let mut best = 0;
    go(0, n, &mut vec![false; n], 0, &mut best, supports);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::field::{PrimeField, Rationals};

    fn qring(vars: &[&str]) -> Arc<Ring<Rationals>> {
        Ring::new(
            Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::Grevlex,
        )
        .unwrap()
    }

    fn p<F: Field>(r: &Arc<Ring<F>>, s: &str) -> Polynomial<F> {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn twisted_cubic_elimination() {
        let r = qring(&["x", "u", "v"]);
        let i = Ideal::parse(&r, &["u - x^2", "v - x^3"]).unwrap();
        let e = i.eliminate(&["x"]).unwrap();
        assert_eq!(e.ring().vars(), &["u".to_string(), "v".to_string()]);
        let gb = e.groebner_basis().unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0].to_string(), "u^3 - v^2");
    }

    #[test]
    fn eliminating_diagonal_gives_zero() {
        let r = qring(&["x", "y"]);
        let e = Ideal::parse(&r, &["x - y"])
            .unwrap()
            .eliminate(&["x"])
            .unwrap();
        assert!(e.groebner_basis().unwrap().is_empty());
    }

    #[test]
    fn intersect_coordinate_axes() {
        let r = qring(&["x", "y"]);
        let a = Ideal::parse(&r, &["x"]).unwrap();
        let b = Ideal::parse(&r, &["y"]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.ring().vars(), r.vars());
        assert!(c.equals(&Ideal::parse(&r, &["x*y"]).unwrap()).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let r = qring(&["x", "y"]);
        let x = p(&r, "x");
        let sat = Ideal::parse(&r, &["x*y"]).unwrap().saturate(&x).unwrap();
        assert!(sat.equals(&Ideal::parse(&r, &["y"]).unwrap()).unwrap());
        let sat = Ideal::parse(&r, &["x^2"]).unwrap().saturate(&x).unwrap();
        assert!(sat.is_unit().unwrap());
        assert!(Ideal::parse(&r, &["x"])
            .unwrap()
            .saturate(&p(&r, "0"))
            .is_err());
    }

    #[test]
    fn radical_examples() {
        let r = qring(&["x", "y"]);
        let y2 = Ideal::parse(&r, &["y^2"]).unwrap();
        assert!(y2.radical_member(&p(&r, "y")).unwrap());
        let y = Ideal::parse(&r, &["y"]).unwrap();
        assert!(!y.radical_member(&p(&r, "x")).unwrap());

        let x = Ideal::parse(&r, &["x"]).unwrap();
        let x3 = Ideal::parse(&r, &["x^3"]).unwrap();
        assert!(x.radical_equal(&x3).unwrap().equal);
        let xy = Ideal::parse(&r, &["x", "y"]).unwrap();
        let cmp = x.radical_equal(&xy).unwrap();
        assert!(!cmp.equal);
        let (w, dir) = cmp.witness.unwrap();
        assert_eq!(w.to_string(), "y");
        assert_eq!(dir, Direction::RightInLeftRadical);
    }

    #[test]
    fn dimensions() {
        let r = qring(&["x", "y"]);
        assert_eq!(
            Ideal::parse(&r, &["x"]).unwrap().krull_dimension().unwrap(),
            1
        );
        assert_eq!(Ideal::unit(&r).krull_dimension().unwrap(), -1);
        assert_eq!(Ideal::zero(&r).krull_dimension().unwrap(), 2);
        let r = qring(&["x12", "x13", "x14", "x23", "x24", "x34"]);
        let pf = Ideal::parse(&r, &["x12*x34 - x13*x24 + x14*x23"]).unwrap();
        assert_eq!(pf.krull_dimension().unwrap(), 5);
    }

    #[test]
    fn gb_cache_is_populated_once() {
        let f = PrimeField::new(32003).unwrap();
        let r = Ring::new(f, vec!["x".into(), "y".into()], MonomialOrder::Grevlex).unwrap();
        let i = Ideal::parse(&r, &["x^2 + y^2", "x*y"]).unwrap();
        assert!(i.cached_groebner_basis().is_none());
        let a = i.groebner_basis().unwrap();
        let b = i.groebner_basis().unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn in_order_preserves_ideal() {
        let r = qring(&["x", "y", "z"]);
        let i = Ideal::parse(&r, &["x^2 - y", "x*y - z"]).unwrap();
        let lex = i.in_order(MonomialOrder::Lex).unwrap();
        let back = lex.in_order(MonomialOrder::Grevlex).unwrap();
        assert!(back.equals(&i).unwrap());
    }
}
