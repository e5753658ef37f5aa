//! Congruence normal forms A ↦ αᵗAα for alternating and symmetric matrices,
//! and the square-root sections of M ↦ MᵗΩM and M ↦ MᵗM built from them.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polycore::Field;

fn permutation_to_front<F: Field>(f: &F, n: usize, front: &[usize]) -> Matrix<F> {
    let mut order: Vec<usize> = front.to_vec();
    order.extend((0..n).filter(|i| !front.contains(i)));
    Matrix::from_fn(
        f,
        n,
        n,
        |r, c| if order[c] == r { f.one() } else { f.zero() },
    )
}

fn bilinear<F: Field>(f: &F, a: &Matrix<F>, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (i, xi) in x.iter().enumerate() {
        if f.is_zero(xi) {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            acc = f.add(&acc, &f.mul(xi, &f.mul(a.get(i, j), yj)));
        }
    }
    acc
}

/// α with αᵗAα = diag(Ω₂, A′) for alternating A with A[i][j] ≠ 0
/// (0-based pivot). The first two columns of α are eᵢ/aᵢⱼ and eⱼ.
pub fn alt_block_reduce<F: Field>(a: &Matrix<F>, pivot: (usize, usize)) -> Result<Matrix<F>> {
    let f = a.field().clone();
    if !a.is_square() || !a.is_alternating() {
        return Err(Error::AlternatingRequired);
    }
    let n = a.rows();
    let (i, j) = pivot;
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidParams(format!(
            "pivot ({i}, {j}) outside a {n} x {n} matrix"
        )));
    }
    let inv = f.inv(a.get(i, j)).ok_or(Error::ZeroPivot(i, j))?;
    let p = permutation_to_front(&f, n, &[i, j]);
    let b = p.transpose().mul(a).mul(&p);
    let unit = |k: usize| -> Vec<F::Elem> {
        (0..n)
            .map(|r| if r == k { f.one() } else { f.zero() })
            .collect()
    };
    let b0: Vec<F::Elem> = unit(0).iter().map(|x| f.mul(x, &inv)).collect();
    let b1 = unit(1);
    let mut cols = vec![b0.clone(), b1.clone()];
    for k in 2..n {
        let ek = unit(k);
        let c1 = f.neg(&bilinear(&f, &b, &ek, &b1));
        let c0 = bilinear(&f, &b, &ek, &b0);
        let col: Vec<F::Elem> = (0..n)
            .map(|r| f.add(&ek[r], &f.add(&f.mul(&c1, &b0[r]), &f.mul(&c0, &b1[r]))))
            .collect();
        cols.push(col);
    }
    Ok(p.mul(&Matrix::from_columns(&f, n, &cols)))
}

/// M with MᵗΩ_{2k}M = A for invertible alternating A.
///
/// For k = 1 this is diag(a₁₂, 1). Larger sizes split off an Ω₂ block with
/// [`alt_block_reduce`] at the first nonzero entry of row one and recurse.
pub fn alt_sqrt_section<F: Field>(a: &Matrix<F>) -> Result<Matrix<F>> {
    let f = a.field().clone();
    if !a.is_square() || !a.is_alternating() {
        return Err(Error::AlternatingRequired);
    }
    let n = a.rows();
    if n == 0 || !n.is_multiple_of(2) || f.is_zero(&a.determinant()) {
        return Err(Error::Singular(
            "alternating input is not invertible".into(),
        ));
    }
    if n == 2 {
        let mut m = Matrix::identity(&f, 2);
        m.set(0, 0, a.get(0, 1).clone());
        return Ok(m);
    }
    let j = (1..n)
        .find(|&j| !f.is_zero(a.get(0, j)))
        .expect("invertible matrix has a nonzero first row");
    let alpha = alt_block_reduce(a, (0, j))?;
    let reduced = alpha.transpose().mul(a).mul(&alpha);
    let rest: Vec<usize> = (2..n).collect();
    let inner = alt_sqrt_section(&reduced.submatrix(&rest, &rest))?;
    Ok(Matrix::identity(&f, 2)
        .block_diag(&inner)
        .mul(&alpha.inverse()?))
}

/// α with αᵗAα = diag(u, A′), u ≠ 0, for nonzero symmetric A in odd
/// characteristic. The pivot u is normalized to 1 whenever it is a square.
///
/// Pivot search: a₁₁ if nonzero; otherwise the first a₁ₖ ≠ 0, adding row k
/// to row 1 when that makes the corner nonzero and swapping k to the front
/// when aₖₖ carries the pivot instead; otherwise any other nonzero entry.
pub fn sym_block_reduce<F: Field>(a: &Matrix<F>) -> Result<Matrix<F>> {
    let f = a.field().clone();
    if f.characteristic() == 2 {
        return Err(Error::Precondition(
            "symmetric reduction needs characteristic other than two".into(),
        ));
    }
    if !a.is_square() || !a.is_symmetric() {
        return Err(Error::Precondition("input is not symmetric".into()));
    }
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let n = a.rows();
    let unit = |k: usize| -> Vec<F::Elem> {
        (0..n)
            .map(|r| if r == k { f.one() } else { f.zero() })
            .collect()
    };
    let sum = |x: usize, y: usize| -> Vec<F::Elem> {
        (0..n)
            .map(|r| if r == x || r == y { f.one() } else { f.zero() })
            .collect()
    };

    let (front, b0) = if !f.is_zero(a.get(0, 0)) {
        (0, unit(0))
    } else if let Some(k) = (1..n).find(|&k| !f.is_zero(a.get(0, k))) {
        let corner = f.add(&f.add(a.get(0, k), a.get(0, k)), a.get(k, k));
        if f.is_zero(&corner) {
            (k, unit(k))
        } else {
            (0, sum(0, k))
        }
    } else if let Some(d) = (1..n).find(|&d| !f.is_zero(a.get(d, d))) {
        (d, unit(d))
    } else {
        let (i, j) = (1..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !f.is_zero(a.get(i, j)))
            .expect("nonzero symmetric matrix with zero diagonal has a nonzero off-diagonal entry");
        (i, sum(i, j))
    };

    let u = bilinear(&f, a, &b0, &b0);
    let b0 = match f.sqrt(&u) {
        Some(s) => {
            let si = f.inv(&s).unwrap();
            b0.iter().map(|x| f.mul(x, &si)).collect()
        }
        None => b0,
    };
    let u = bilinear(&f, a, &b0, &b0);
    let ui = f.inv(&u).unwrap();
    let mut cols = vec![b0.clone()];
    for k in (0..n).filter(|&k| k != front) {
        let ek = unit(k);
        let c = f.neg(&f.mul(&bilinear(&f, a, &ek, &b0), &ui));
        cols.push((0..n).map(|r| f.add(&ek[r], &f.mul(&c, &b0[r]))).collect());
    }
    Ok(Matrix::from_columns(&f, n, &cols))
}

/// M with MᵗM = A for invertible symmetric A, by repeated
/// [`sym_block_reduce`]. A pivot that is not a square is an
/// [`Error::Nonresidue`].
pub fn sym_sqrt_section<F: Field>(a: &Matrix<F>) -> Result<Matrix<F>> {
    let f = a.field().clone();
    if !a.is_square() || !a.is_symmetric() {
        return Err(Error::Precondition("input is not symmetric".into()));
    }
    let n = a.rows();
    if n == 0 || f.is_zero(&a.determinant()) {
        return Err(Error::Singular("symmetric input is not invertible".into()));
    }
    let alpha = sym_block_reduce(a)?;
    let reduced = alpha.transpose().mul(a).mul(&alpha);
    if !f.is_one(reduced.get(0, 0)) {
        return Err(Error::Nonresidue(format!(
            "pivot {} is not a square",
            f.format(reduced.get(0, 0))
        )));
    }
    let one = Matrix::identity(&f, 1);
    let n_block = if n == 1 {
        one
    } else {
        let rest: Vec<usize> = (1..n).collect();
        one.block_diag(&sym_sqrt_section(&reduced.submatrix(&rest, &rest))?)
    };
    Ok(n_block.mul(&alpha.inverse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{ComplexFloats, PrimeField, Rationals};
    use num_complex::Complex64;

    #[test]
    fn omega_is_already_reduced() {
        let q = Rationals;
        let om = Matrix::omega(&q, 2);
        assert_eq!(
            alt_block_reduce(&om, (0, 1)).unwrap(),
            Matrix::identity(&q, 4)
        );
    }

    #[test]
    fn alternating_reduction_of_a_dense_matrix() {
        let q = Rationals;
        let a = Matrix::from_i64(
            &q,
            &[
                &[0, 3, 1, -2],
                &[-3, 0, 5, 4],
                &[-1, -5, 0, 7],
                &[2, -4, -7, 0],
            ],
        );
        let alpha = alt_block_reduce(&a, (0, 1)).unwrap();
        let b = alpha.transpose().mul(&a).mul(&alpha);
        assert_eq!(b.submatrix(&[0, 1], &[0, 1]), Matrix::omega(&q, 1));
        assert!(b.submatrix(&[0, 1], &[2, 3]).is_zero());
        assert!(!q.is_zero(&alpha.determinant()));
        let s = Matrix::from_i64(
            &q,
            &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]],
        );
        assert_eq!(alt_block_reduce(&s, (0, 1)), Err(Error::ZeroPivot(0, 1)));
    }

    #[test]
    fn alternating_sections() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[0, 5], &[-5, 0]]);
        assert_eq!(
            alt_sqrt_section(&a).unwrap(),
            Matrix::from_i64(&q, &[&[5, 0], &[0, 1]])
        );
        assert_eq!(
            alt_sqrt_section(&Matrix::omega(&q, 3)).unwrap(),
            Matrix::identity(&q, 6)
        );
        let f = PrimeField::new(101).unwrap();
        let a = Matrix::from_i64(
            &f,
            &[
                &[0, 0, 2, 9],
                &[0, 0, -4, 1],
                &[-2, 4, 0, 6],
                &[-9, -1, -6, 0],
            ],
        );
        let m = alt_sqrt_section(&a).unwrap();
        assert_eq!(m.transpose().mul(&Matrix::omega(&f, 2)).mul(&m), a);
        let singular = Matrix::from_i64(&q, &[&[0, 0], &[0, 0]]);
        assert!(matches!(
            alt_sqrt_section(&singular),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn symmetric_reduction() {
        let q = Rationals;
        assert_eq!(
            sym_block_reduce(&Matrix::identity(&q, 3)).unwrap(),
            Matrix::identity(&q, 3)
        );
        let f = PrimeField::new(5).unwrap();
        let a = Matrix::from_i64(&f, &[&[0, 1], &[1, 0]]);
        let alpha = sym_block_reduce(&a).unwrap();
        let b = alpha.transpose().mul(&a).mul(&alpha);
        assert_eq!(f.format(b.get(0, 0)), "2");
        assert!(f.is_zero(b.get(0, 1)));
        let f2 = PrimeField::new(2).unwrap();
        assert!(matches!(
            sym_block_reduce(&Matrix::identity(&f2, 2)),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            sym_block_reduce(&Matrix::zeros(&q, 2, 2)),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn corner_cancellation_uses_the_diagonal_entry() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_i64(&f, &[&[0, 1, 0], &[1, -2, 0], &[0, 0, 3]]);
        let alpha = sym_block_reduce(&a).unwrap();
        let b = alpha.transpose().mul(&a).mul(&alpha);
        assert!(f.is_zero(b.get(0, 1)) && f.is_zero(b.get(0, 2)));
        assert!(!f.is_zero(b.get(0, 0)));
    }

    #[test]
    fn symmetric_sections() {
        let q = Rationals;
        assert_eq!(
            sym_sqrt_section(&Matrix::identity(&q, 2)).unwrap(),
            Matrix::identity(&q, 2)
        );
        let d = Matrix::from_i64(&q, &[&[4, 0], &[0, 9]]);
        assert_eq!(
            sym_sqrt_section(&d).unwrap(),
            Matrix::from_i64(&q, &[&[2, 0], &[0, 3]])
        );
        let f = PrimeField::new(5).unwrap();
        assert!(matches!(
            sym_sqrt_section(&Matrix::from_i64(&f, &[&[2]])),
            Err(Error::Nonresidue(_))
        ));

        let c = ComplexFloats::default();
        let g = Matrix::from_fn(&c, 3, 3, |i, j| {
            Complex64::new(
                ((i * 3 + j) as f64).sin() + if i == j { 2.0 } else { 0.0 },
                0.0,
            )
        });
        let spd = g.transpose().mul(&g);
        let m = sym_sqrt_section(&spd).unwrap();
        assert_eq!(m.transpose().mul(&m), spd);
    }
}
