//! Buchberger's algorithm with the Gebauer–Möller pair update.

use std::sync::Arc;
use std::time::{Duration, Instant};

use super::field::Field;
use super::poly::{Monomial, Polynomial, Ring, Term};
use crate::error::{Error, Result};

/// How the next critical pair is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    /// Smallest lcm first.
    Normal,
    /// Oldest pair first.
    Fifo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    pub max_terms: usize,
    pub max_polys: usize,
    pub max_time: Duration,
    pub selection: PairSelection,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            max_terms: 1_000_000,
            max_polys: 100_000,
            max_time: Duration::from_secs(300),
            selection: PairSelection::Normal,
        }
    }
}

/// Divisor lookup over a list of monic polynomials.
pub(crate) struct Reducer<'a, F: Field> {
    polys: Vec<&'a Polynomial<F>>,
    masks: Vec<u64>,
}

impl<'a, F: Field> Reducer<'a, F> {
    pub(crate) fn new(polys: impl IntoIterator<Item = &'a Polynomial<F>>) -> Self {
        let polys: Vec<_> = polys.into_iter().filter(|p| !p.is_zero()).collect();
        let masks = polys
            .iter()
            .map(|p| p.lead_monomial().unwrap().support_mask())
            .collect();
        Reducer { polys, masks }
    }

    fn find(&self, m: &Monomial) -> Option<&'a Polynomial<F>> {
        let mm = m.support_mask();
        self.polys
            .iter()
            .zip(&self.masks)
            .find(|(p, &mask)| mask & !mm == 0 && p.lead_monomial().unwrap().divides(m))
            .map(|(p, _)| *p)
    }

    /// Full reduction: no term of the result is divisible by a leading monomial.
    pub(crate) fn reduce(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let ring = f.ring().clone();
        let field = ring.field().clone();
        let mut rest: Vec<Term<F>> = Vec::new();
        let mut p = f.clone();
        while !p.is_zero() {
            let lead = p.lead().unwrap();
            match self.find(&lead.mono) {
                Some(g) => {
                    let gl = g.lead().unwrap();
                    let q = gl.mono.quotient_of(&lead.mono);
                    let c = field.neg(&field.div(&lead.coeff, &gl.coeff).unwrap());
                    p = p.add_scaled(g, &c, &q);
                }
                None => {
                    let mut terms = p.into_terms();
                    rest.push(terms.remove(0));
                    p = Polynomial::from_sorted_terms(&ring, terms);
                }
            }
        }
        Polynomial::from_sorted_terms(&ring, rest)
    }
}

/// Remainder of `f` on division by `gb` (full reduction).
pub fn normal_form<F: Field>(f: &Polynomial<F>, gb: &[Polynomial<F>]) -> Result<Polynomial<F>> {
    for g in gb {
        if !super::poly::same_ring(f.ring(), g.ring()) {
            return Err(Error::RingMismatch(
                "normal form against a basis from another ring".into(),
            ));
        }
    }
    let monic: Vec<Polynomial<F>> = gb.iter().map(|g| g.monic()).collect();
    Ok(Reducer::new(&monic).reduce(f))
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    serial: usize,
}

struct Engine<F: Field> {
    ring: Arc<Ring<F>>,
    cfg: GbConfig,
    start: Instant,
    basis: Vec<Polynomial<F>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    serial: usize,
    terms: usize,
}

impl<F: Field> Engine<F> {
    fn check_budget(&self) -> Result<()> {
        if self.terms > self.cfg.max_terms {
            return Err(Error::ResourceLimit(format!(
                "basis holds {} terms (limit {})",
                self.terms, self.cfg.max_terms
            )));
        }
        if self.basis.len() > self.cfg.max_polys || self.pairs.len() > self.cfg.max_polys * 8 {
            return Err(Error::ResourceLimit(format!(
                "{} basis elements and {} pending pairs",
                self.basis.len(),
                self.pairs.len()
            )));
        }
        if self.start.elapsed() > self.cfg.max_time {
            return Err(Error::ResourceLimit(format!(
                "wall clock exceeded {:?}",
                self.cfg.max_time
            )));
        }
        Ok(())
    }

    fn lm(&self, i: usize) -> &Monomial {
        self.basis[i].lead_monomial().unwrap()
    }

    /// Inserts `h` (monic, reduced) and applies the Gebauer–Möller criteria.
    fn insert(&mut self, h: Polynomial<F>) {
        let hi = self.basis.len();
        self.terms += h.len();
        self.basis.push(h);
        self.active.push(true);
        let lh = self.lm(hi).clone();

        let mut cands: Vec<(usize, Monomial)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, self.lm(g).lcm(&lh)))
            .collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while let Some((g, l)) = cands.pop() {
            let coprime = self.lm(g).coprime(&lh);
            let dominated = cands
                .iter()
                .chain(kept.iter())
                .any(|(_, l2)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((g, l));
            }
        }
        kept.retain(|(g, _)| !self.lm(*g).coprime(&lh));

        let basis = &self.basis;
        self.pairs.retain(|p| {
            let lcm_ih = basis[p.i].lead_monomial().unwrap().lcm(&lh);
            let lcm_jh = basis[p.j].lead_monomial().unwrap().lcm(&lh);
            !(lh.divides(&p.lcm) && lcm_ih != p.lcm && lcm_jh != p.lcm)
        });

        kept.sort_by_key(|(g, _)| *g);
        for (g, lcm) in kept {
            self.pairs.push(Pair {
                i: g,
                j: hi,
                lcm,
                serial: self.serial,
            });
            self.serial += 1;
        }
        for g in 0..hi {
            if self.active[g] && lh.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ring = &self.ring;
        let idx = match self.cfg.selection {
            PairSelection::Fifo => (0..self.pairs.len())
                .min_by_key(|&k| self.pairs[k].serial)
                .unwrap(),
            PairSelection::Normal => (0..self.pairs.len())
                .min_by(|&a, &b| {
                    let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                    ring.cmp(&pa.lcm, &pb.lcm).then(pa.serial.cmp(&pb.serial))
                })
                .unwrap(),
        };
        Some(self.pairs.swap_remove(idx))
    }

    fn spoly(&self, p: &Pair) -> Polynomial<F> {
        let (f, g) = (&self.basis[p.i], &self.basis[p.j]);
        let field = self.ring.field();
        let mf = f.lead_monomial().unwrap().quotient_of(&p.lcm);
        let mg = g.lead_monomial().unwrap().quotient_of(&p.lcm);
        let minus_one = field.neg(&field.one());
        // both monic, so the leading terms cancel
        f.mul_term(&field.one(), &mf).add_scaled(g, &minus_one, &mg)
    }

    fn run(mut self, gens: Vec<Polynomial<F>>) -> Result<Vec<Polynomial<F>>> {
        let mut seeds: Vec<Polynomial<F>> = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.monic())
            .collect();
        seeds.sort_by(|a, b| {
            self.ring
                .cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap())
        });
        for g in seeds {
            let r = Reducer::new(self.basis.iter()).reduce(&g);
            if !r.is_zero() {
                if r.is_unit() {
                    return Ok(vec![Polynomial::one(&self.ring)]);
                }
                self.insert(r.monic());
                self.check_budget()?;
            }
        }
        while let Some(pair) = self.next_pair() {
            self.check_budget()?;
            let s = self.spoly(&pair);
            let reducer = Reducer::new(
                self.basis
                    .iter()
                    .zip(&self.active)
                    .filter(|(_, a)| **a)
                    .map(|(p, _)| p),
            );
            let r = reducer.reduce(&s);
            if r.is_zero() {
                continue;
            }
            if r.is_unit() {
                return Ok(vec![Polynomial::one(&self.ring)]);
            }
            self.insert(r.monic());
        }
        let kept: Vec<Polynomial<F>> = self
            .basis
            .into_iter()
            .zip(self.active)
            .filter(|(_, a)| *a)
            .map(|(p, _)| p)
            .collect();
        Ok(reduce_basis(&self.ring, kept))
    }
}

/// Minimalizes and inter-reduces a Gröbner basis, returning it monic and
/// sorted by ascending leading monomial.
fn reduce_basis<F: Field>(ring: &Arc<Ring<F>>, mut gb: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    gb.sort_by(|a, b| ring.cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap()));
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    for g in gb {
        let lm = g.lead_monomial().unwrap();
        if !minimal
            .iter()
            .any(|h| h.lead_monomial().unwrap().divides(lm))
        {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others = Reducer::new(
            minimal
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, p)| p),
        );
        let g = &minimal[k];
        let lead = g.lead().unwrap().clone();
        let tail = Polynomial::from_sorted_terms(ring, g.terms()[1..].to_vec());
        let tail = others.reduce(&tail);
        let mut terms = vec![lead];
        terms.extend(tail.into_terms());
        reduced.push(Polynomial::from_sorted_terms(ring, terms).monic());
    }
    reduced
}

/// Reduced Gröbner basis of the ideal generated by `gens` under the ring's order.
///
/// The zero ideal yields an empty basis and the unit ideal yields `[1]`.
pub fn buchberger<F: Field>(
    ring: &Arc<Ring<F>>,
    gens: &[Polynomial<F>],
    cfg: &GbConfig,
) -> Result<Vec<Polynomial<F>>> {
    if !ring.field().is_exact() {
        return Err(Error::InvalidParams(
            "Gröbner bases need an exact coefficient field".into(),
        ));
    }
    for g in gens {
        if !super::poly::same_ring(g.ring(), ring) {
            return Err(Error::RingMismatch(
                "generator from a different ring".into(),
            ));
        }
    }
    let engine = Engine {
        ring: ring.clone(),
        cfg: *cfg,
        start: Instant::now(),
        basis: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        serial: 0,
        terms: 0,
    };
    engine.run(gens.to_vec())
}

/// True when `gb` is a reduced Gröbner basis: monic, no leading monomial divides
/// another term of a different element, and all S-polynomials reduce to zero.
pub fn is_reduced_groebner<F: Field>(gb: &[Polynomial<F>]) -> bool {
    if gb
        .iter()
        .any(|g| g.is_zero() || !g.field().is_one(&g.lead().unwrap().coeff))
    {
        return false;
    }
    for (i, g) in gb.iter().enumerate() {
        for (k, h) in gb.iter().enumerate() {
            if i != k {
                let lm = h.lead_monomial().unwrap();
                if g.terms().iter().any(|t| lm.divides(&t.mono)) {
                    return false;
                }
            }
        }
    }
    let reducer = Reducer::new(gb.iter());
    for i in 0..gb.len() {
        for j in (i + 1)..gb.len() {
            let (f, g) = (&gb[i], &gb[j]);
            let (lf, lg) = (f.lead_monomial().unwrap(), g.lead_monomial().unwrap());
            let lcm = lf.lcm(lg);
            let field = f.field();
            let s = f.mul_term(&field.one(), &lf.quotient_of(&lcm)).add_scaled(
                g,
                &field.neg(&field.one()),
                &lg.quotient_of(&lcm),
            );
            if !reducer.reduce(&s).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::field::{PrimeField, Rationals};
    use crate::polycore::poly::MonomialOrder;

    fn ring<F: Field>(f: F, vars: &[&str], order: MonomialOrder) -> Arc<Ring<F>> {
        Ring::new(f, vars.iter().map(|s| s.to_string()).collect(), order).unwrap()
    }

    fn polys<F: Field>(r: &Arc<Ring<F>>, srcs: &[&str]) -> Vec<Polynomial<F>> {
        srcs.iter()
            .map(|s| Polynomial::parse(r, s).unwrap())
            .collect()
    }

    fn texts<F: Field>(gb: &[Polynomial<F>]) -> Vec<String> {
        gb.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn textbook_basis() {
        let r = ring(Rationals, &["x", "y"], MonomialOrder::Grevlex);
        let gb = buchberger(&r, &polys(&r, &["x^2 + y^2", "x*y"]), &GbConfig::default()).unwrap();
        assert_eq!(texts(&gb), vec!["x*y", "x^2 + y^2", "y^3"]);
        assert!(is_reduced_groebner(&gb));
    }

    #[test]
    fn single_variable_and_principal() {
        let r = ring(Rationals, &["x", "y"], MonomialOrder::Grevlex);
        let gb = buchberger(&r, &polys(&r, &["x"]), &GbConfig::default()).unwrap();
        assert_eq!(texts(&gb), vec!["x"]);
        let r = ring(
            Rationals,
            &["x12", "x13", "x14", "x23", "x24", "x34"],
            MonomialOrder::Grevlex,
        );
        let pf = "x12*x34 - x13*x24 + x14*x23";
        let gb = buchberger(&r, &polys(&r, &[pf]), &GbConfig::default()).unwrap();
        assert_eq!(gb, polys(&r, &[pf]));
    }

    #[test]
    fn unit_and_zero_ideals() {
        let r = ring(
            PrimeField::new(7).unwrap(),
            &["x", "y"],
            MonomialOrder::Grevlex,
        );
        let gb = buchberger(&r, &polys(&r, &["x", "x + 3"]), &GbConfig::default()).unwrap();
        assert_eq!(texts(&gb), vec!["1"]);
        assert!(buchberger(&r, &[], &GbConfig::default())
            .unwrap()
            .is_empty());
        assert!(buchberger(&r, &polys(&r, &["0"]), &GbConfig::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(Rationals, &["x", "y"], MonomialOrder::Grevlex);
        let y = polys(&r, &["y"]);
        assert_eq!(
            normal_form(&polys(&r, &["x"])[0], &y).unwrap().to_string(),
            "x"
        );
        let gens = polys(&r, &["x^2 + y^2", "x*y"]);
        let f = gens[0].add(&Polynomial::parse(&r, "x").unwrap().mul(&gens[1]));
        let gb = buchberger(&r, &gens, &GbConfig::default()).unwrap();
        assert!(normal_form(&f, &gb).unwrap().is_zero());
    }

    #[test]
    fn lex_and_fifo_agree_with_normal() {
        let r = ring(Rationals, &["x", "y", "z"], MonomialOrder::Lex);
        let gens = polys(&r, &["x^2 - y", "x*y - z", "y^2 - x*z"]);
        let a = buchberger(&r, &gens, &GbConfig::default()).unwrap();
        let b = buchberger(
            &r,
            &gens,
            &GbConfig {
                selection: PairSelection::Fifo,
                ..GbConfig::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(is_reduced_groebner(&a));
    }

    #[test]
    fn term_budget_is_enforced() {
        let r = ring(Rationals, &["a", "b", "c", "d"], MonomialOrder::Grevlex);
        let gens = polys(
            &r,
            &[
                "a^3 + b*c*d - 1",
                "b^3 - a*c + d^2",
                "c^3 + a*b*d - 2",
                "d^2*a - c^2 + b",
            ],
        );
        let tiny = GbConfig {
            max_terms: 5,
            ..GbConfig::default()
        };
        let err = buchberger(&r, &gens, &tiny).unwrap_err();
        assert!(err.is_budget());
    }
}
