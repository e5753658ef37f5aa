use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polycore::{Field, Polynomial, Ring};

/// Dense matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<F: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial<F>,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Matrix of fresh variables named `{prefix}_{i}_{j}` (1-based) in `ring`.
    pub fn indeterminates(
        ring: &Arc<Ring<F>>,
        prefix: &str,
        rows: usize,
        cols: usize,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                out.push(Polynomial::var_named(ring, &format!("{prefix}_{i}_{j}"))?);
            }
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries: out,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Polynomial<F>] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        PolyMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidParams(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self
            .entries
            .first()
            .or(other.entries.first())
            .map(|p| p.ring().clone());
        Ok(PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero(ring.as_ref().unwrap());
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        }))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        PolyMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn is_alternating(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (0..i).all(|j| *self.get(i, j) == self.get(j, i).neg())
            })
    }

    /// Determinant by first-row cofactor expansion.
    pub fn determinant(&self) -> Result<Polynomial<F>> {
        if self.rows != self.cols {
            return Err(Error::InvalidParams(
                "determinant of a non-square matrix".into(),
            ));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.det_rec(&idx, &idx))
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> Polynomial<F> {
        if rows.is_empty() {
            return Polynomial::one(self.ring());
        }
        if rows.len() == 1 {
            return self.get(rows[0], cols[0]).clone();
        }
        let mut acc = Polynomial::zero(self.ring());
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(rows[0], c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.mul(&self.det_rec(&rows[1..], &rest));
            acc = if k % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }

    /// Pfaffian by first-row expansion.
    pub fn pfaffian(&self) -> Result<Polynomial<F>> {
        if !self.is_alternating() {
            return Err(Error::AlternatingRequired);
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.pf_rec(&idx))
    }

    fn pf_rec(&self, idx: &[usize]) -> Polynomial<F> {
        if idx.is_empty() {
            return Polynomial::one(self.ring());
        }
        if idx.len() % 2 == 1 {
            return Polynomial::zero(self.ring());
        }
        let mut acc = Polynomial::zero(self.ring());
        for k in 1..idx.len() {
            let a = self.get(idx[0], idx[k]);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[k]).collect();
            let term = a.mul(&self.pf_rec(&rest));
            acc = if k % 2 == 1 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }

    /// All `size`-minors, rows and columns in lexicographic subset order.
    pub fn minors(&self, size: usize) -> Vec<Polynomial<F>> {
        let mut out = Vec::new();
        for rs in subsets(self.rows, size) {
            for cs in subsets(self.cols, size) {
                out.push(self.det_rec(&rs, &cs));
            }
        }
        out
    }

    /// Pfaffians of all principal `size`×`size` submatrices, lexicographic.
    pub fn pfaffians(&self, size: usize) -> Result<Vec<Polynomial<F>>> {
        if !self.is_alternating() {
            return Err(Error::AlternatingRequired);
        }
        Ok(subsets(self.rows, size)
            .iter()
            .map(|s| self.pf_rec(s))
            .collect())
    }

    fn ring(&self) -> &Arc<Ring<F>> {
        self.entries
            .first()
            .expect("empty matrix has no ring")
            .ring()
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{MonomialOrder, PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alt_ring<F: Field>(field: F, n: usize) -> (Arc<Ring<F>>, PolyMatrix<F>) {
        let mut names = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                names.push(format!("x{i}{j}"));
            }
        }
        let ring = Ring::new(field, names, MonomialOrder::Grevlex).unwrap();
        let m = PolyMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                Polynomial::var_named(&ring, &format!("x{}{}", i + 1, j + 1)).unwrap()
            }
            std::cmp::Ordering::Equal => Polynomial::zero(&ring),
            std::cmp::Ordering::Greater => {
                Polynomial::var_named(&ring, &format!("x{}{}", j + 1, i + 1))
                    .unwrap()
                    .neg()
            }
        });
        (ring, m)
    }

    #[test]
    fn small_pfaffians() {
        let (_, m) = alt_ring(Rationals, 2);
        assert_eq!(m.pfaffian().unwrap().to_string(), "x12");
        let (_, m) = alt_ring(Rationals, 4);
        assert_eq!(
            m.pfaffian().unwrap().to_string(),
            "x14*x23 - x13*x24 + x12*x34"
        );
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 4, 6] {
            let (ring, m) = alt_ring(f, n);
            let pf = m.pfaffian().unwrap();
            let det = m.determinant().unwrap();
            for _ in 0..10 {
                let pt: Vec<u64> = (0..ring.nvars()).map(|_| f.random(&mut rng)).collect();
                let a = pf.eval(&pt);
                assert_eq!(f.mul(&a, &a), det.eval(&pt));
            }
        }
    }

    #[test]
    fn non_alternating_is_rejected() {
        let ring = Ring::new(Rationals, vec!["a".into()], MonomialOrder::Grevlex).unwrap();
        let m = PolyMatrix::from_fn(2, 2, |_, _| Polynomial::var(&ring, 0));
        assert_eq!(m.pfaffian().unwrap_err(), Error::AlternatingRequired);
    }

    #[test]
    fn generic_two_by_two_minor() {
        let ring = Ring::new(
            Rationals,
            vec![
                "x_1_1".into(),
                "x_1_2".into(),
                "x_2_1".into(),
                "x_2_2".into(),
            ],
            MonomialOrder::Grevlex,
        )
        .unwrap();
        let x = PolyMatrix::indeterminates(&ring, "x", 2, 2).unwrap();
        let m = x.minors(2);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].to_string(), "-x_1_2*x_2_1 + x_1_1*x_2_2");
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }
}
