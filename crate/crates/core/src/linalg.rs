//! Dense matrices over a [`Field`] context.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::polycore::Field;

#[derive(Clone)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| self.field.is_zero(&self.field.sub(a, b)))
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: &F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn random(field: &F, rows: usize, cols: usize, rng: &mut (impl Rng + ?Sized)) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    /// The standard alternating form on 2t coordinates.
    pub fn omega(field: &F, t: usize) -> Self {
        let mut m = Self::zeros(field, 2 * t, 2 * t);
        for b in 0..t {
            m.set(2 * b, 2 * b + 1, field.one());
            m.set(2 * b + 1, 2 * b, field.neg(&field.one()));
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = &self.field;
        Self::from_fn(f, self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.mul(c, self.get(i, j))
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.field.neg(self.get(i, j))
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let cols: Vec<usize> = range.collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn rows_range(&self, range: std::ops::Range<usize>) -> Self {
        let rows: Vec<usize> = range.collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(field: &F, rows: usize, cols: &[Vec<F::Elem>]) -> Self {
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(&self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let f = &self.field;
        Self::from_fn(
            f,
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => f.zero(),
            },
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_alternating(&self) -> bool {
        let f = &self.field;
        self.is_square()
            && (0..self.rows).all(|i| {
                f.is_zero(self.get(i, i))
                    && (0..i).all(|j| f.is_zero(&f.add(self.get(i, j), self.get(j, i))))
            })
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Row echelon form by Gaussian elimination; returns (echelon, pivot columns, sign of the permutation).
    fn echelon(&self) -> (Self, Vec<usize>, bool) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut odd = false;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
                odd = !odd;
            }
            let inv = f.inv(m.get(r, c)).unwrap();
            for i in r + 1..m.rows {
                if f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, odd)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn determinant(&self) -> F::Elem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let f = &self.field;
        let (m, pivots, odd) = self.echelon();
        if pivots.len() < self.rows {
            return f.zero();
        }
        let mut d = f.one();
        for i in 0..self.rows {
            d = f.mul(&d, m.get(i, i));
        }
        if odd {
            f.neg(&d)
        } else {
            d
        }
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::InvalidParams(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let f = &self.field;
        let mut a = self.hstack(&Self::identity(f, n));
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !f.is_zero(a.get(i, c)))
                .ok_or_else(|| Error::Singular(format!("no pivot in column {c}")))?;
            a.swap_rows(p, c);
            let inv = f.inv(a.get(c, c)).unwrap();
            for j in 0..2 * n {
                let v = f.mul(a.get(c, j), &inv);
                a.set(c, j, v);
            }
            for i in 0..n {
                if i == c || f.is_zero(a.get(i, c)) {
                    continue;
                }
                let factor = a.get(i, c).clone();
                for j in 0..2 * n {
                    let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(c, j)));
                    a.set(i, j, v);
                }
            }
        }
        Ok(a.columns(n..2 * n))
    }

    /// Solves `self · X = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        Ok(self.inverse()?.mul(rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_and_determinant() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[2, 1], &[5, 3]]);
        assert_eq!(q.format(&a.determinant()), "1");
        let inv = a.inverse().unwrap();
        assert_eq!(inv, Matrix::from_i64(&q, &[&[3, -1], &[-5, 2]]));
        let s = Matrix::from_i64(&q, &[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_err());
        assert_eq!(s.rank(), 1);
        assert!(q.is_zero(&s.determinant()));
    }

    #[test]
    fn random_inverses_mod_p() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = Matrix::random(&f, 4, 4, &mut rng);
            match a.inverse() {
                Ok(inv) => {
                    assert_eq!(a.mul(&inv), Matrix::identity(&f, 4));
                    assert_ne!(a.determinant(), 0);
                }
                Err(_) => assert_eq!(a.determinant(), 0),
            }
        }
    }

    #[test]
    fn omega_properties() {
        let f = PrimeField::new(7).unwrap();
        let o = Matrix::omega(&f, 3);
        assert!(o.is_alternating());
        assert_eq!(o.mul(&o), Matrix::identity(&f, 6).neg());
        assert_eq!(o.determinant(), 1);
        assert_eq!(o.transpose(), o.neg());
    }
}
