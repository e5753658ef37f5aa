use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polycore::Field;

type Vector<F> = Vec<<F as Field>::Elem>;

fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// ⟨a, b⟩ = aᵗ Ω b.
pub fn symplectic_form<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for p in 0..a.len() / 2 {
        let (i, j) = (2 * p, 2 * p + 1);
        acc = f.add(&acc, &f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i])));
    }
    acc
}

fn axpy<F: Field>(f: &F, y: &mut [F::Elem], c: &F::Elem, x: &[F::Elem]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = f.add(yi, &f.mul(c, xi));
    }
}

fn scaled<F: Field>(f: &F, c: &F::Elem, x: &[F::Elem]) -> Vector<F> {
    x.iter().map(|v| f.mul(c, v)).collect()
}

/// Column `j` of Ω_{2t} in the interleaved basis e₁, f₁, …, e_t, f_t.
pub fn omega_column<F: Field>(f: &F, t: usize, j: usize) -> Vector<F> {
    Matrix::omega(f, t).column(j)
}

/// Symplectic projection of `x` away from the pairs (wⱼ, zⱼ) with ⟨wⱼ, zⱼ⟩ = 1.
fn project<F: Field>(f: &F, x: &[F::Elem], pairs: &[(Vector<F>, Vector<F>)]) -> Vector<F> {
    let mut out = x.to_vec();
    for (w, z) in pairs {
        let a = f.neg(&symplectic_form(f, w, x));
        let b = symplectic_form(f, z, x);
        axpy(f, &mut out, &a, z);
        axpy(f, &mut out, &b, w);
    }
    out
}

/// Extends a symplectic 2t×2k frame to an element of Sp_{2t} by alternating
/// Gram–Schmidt.
///
/// Step i first tries the pair (e_i, f_i). When its pivot ℓᵢ = ⟨wᵢ, zᵢ⟩
/// vanishes, every other ordered pair of columns of Ω is tried before
/// reporting [`Error::PivotDegenerate`].
pub fn symplectic_complete<F: Field>(partial: &Matrix<F>) -> Result<Matrix<F>> {
    let f = partial.field().clone();
    let (rows, cols) = (partial.rows(), partial.cols());
    if rows % 2 != 0 || cols % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "expected a 2t x 2k frame, got {rows} x {cols}"
        )));
    }
    let (t, k) = (rows / 2, cols / 2);
    if k == 0 || k >= t {
        return Err(Error::InvalidParams(format!(
            "need 0 < k < t, got t = {t}, k = {k}"
        )));
    }
    let gram = partial.transpose().mul(&Matrix::omega(&f, t)).mul(partial);
    if gram != Matrix::omega(&f, k) {
        return Err(Error::Precondition(
            "frame is not symplectic: Mt Omega M != Omega".into(),
        ));
    }
    let basis: Vec<Vector<F>> = (0..rows).map(|j| omega_column(&f, t, j)).collect();
    let mut pairs: Vec<(Vector<F>, Vector<F>)> = (0..k)
        .map(|j| (partial.column(2 * j), partial.column(2 * j + 1)))
        .collect();
    for i in k..t {
        let preferred = std::iter::once((2 * i, 2 * i + 1));
        let others = (0..rows)
            .flat_map(|a| (0..rows).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b);
        let mut found = None;
        for (a, b) in preferred.chain(others) {
            let w = project(&f, &basis[a], &pairs);
            let z = project(&f, &basis[b], &pairs);
            let ell = symplectic_form(&f, &w, &z);
            if let Some(inv) = f.inv(&ell) {
                found = Some((scaled(&f, &inv, &w), z));
                break;
            }
        }
        let pair = found.ok_or_else(|| {
            Error::PivotDegenerate(format!("no basis pair completes step {}", i + 1))
        })?;
        pairs.push(pair);
    }
    let columns: Vec<Vector<F>> = pairs.into_iter().flat_map(|(w, z)| [w, z]).collect();
    Ok(Matrix::from_columns(&f, rows, &columns))
}

/// Extends an orthonormal t×k frame to an orthogonal t×t matrix by
/// Gram–Schmidt, adjoining the square roots of the pivots ℓᵢ = ⟨wᵢ, wᵢ⟩.
///
/// Standard basis vectors whose projection is isotropic are skipped. A pivot
/// without a square root in the field is an [`Error::Nonresidue`].
pub fn orthogonal_complete<F: Field>(partial: &Matrix<F>) -> Result<Matrix<F>> {
    let f = partial.field().clone();
    let (t, k) = (partial.rows(), partial.cols());
    if k > t {
        return Err(Error::InvalidParams(format!(
            "need k <= t, got t = {t}, k = {k}"
        )));
    }
    if partial.transpose().mul(partial) != Matrix::identity(&f, k) {
        return Err(Error::Precondition(
            "frame is not orthonormal: Mt M != 1".into(),
        ));
    }
    let mut cols: Vec<Vector<F>> = (0..k).map(|j| partial.column(j)).collect();
    let mut next = 0;
    while cols.len() < t {
        let mut chosen = None;
        while next < t {
            let e: Vector<F> = (0..t)
                .map(|r| if r == next { f.one() } else { f.zero() })
                .collect();
            next += 1;
            let mut w = e.clone();
            for c in &cols {
                let a = f.neg(&dot(&f, &e, c));
                axpy(&f, &mut w, &a, c);
            }
            let ell = dot(&f, &w, &w);
            if f.is_zero(&ell) {
                continue;
            }
            let s = f.sqrt(&ell).ok_or_else(|| {
                Error::Nonresidue(format!("pivot {} has no square root", f.format(&ell)))
            })?;
            chosen = Some(scaled(&f, &f.inv(&s).unwrap(), &w));
            break;
        }
        let col = chosen.ok_or_else(|| {
            Error::PivotDegenerate(
                "every remaining basis vector projects to an isotropic vector".into(),
            )
        })?;
        cols.push(col);
    }
    Ok(Matrix::from_columns(&f, t, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{ComplexFloats, PrimeField, Rationals};

    #[test]
    fn standard_frame_is_a_fixed_point() {
        let q = Rationals;
        let om = Matrix::omega(&q, 2);
        let m = symplectic_complete(&om.columns(0..2)).unwrap();
        assert_eq!(m, om);
    }

    #[test]
    fn completion_is_symplectic_and_extends() {
        let f = PrimeField::new(7).unwrap();
        let partial = Matrix::from_i64(&f, &[&[1, 0], &[0, 1], &[1, 0], &[0, 0]]);
        let m = symplectic_complete(&partial).unwrap();
        assert_eq!(m.columns(0..2), partial);
        assert_eq!(
            m.transpose().mul(&Matrix::omega(&f, 2)).mul(&m),
            Matrix::omega(&f, 2)
        );
    }

    #[test]
    fn non_symplectic_frame_is_rejected() {
        let q = Rationals;
        let partial = Matrix::from_i64(&q, &[&[1, 0], &[0, 2], &[0, 0], &[0, 0]]);
        assert!(matches!(
            symplectic_complete(&partial),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            symplectic_complete(&Matrix::omega(&q, 2)),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn orthogonal_completion() {
        let q = Rationals;
        let id = Matrix::identity(&q, 3);
        assert_eq!(orthogonal_complete(&id.columns(0..2)).unwrap(), id);

        let c = ComplexFloats::default();
        let (s, co) = (0.6_f64, 0.8_f64);
        let partial = Matrix::from_fn(&c, 3, 1, |i, _| [co, s, 0.0][i].into());
        let m = orthogonal_complete(&partial).unwrap();
        assert_eq!(m.transpose().mul(&m), Matrix::identity(&c, 3));
    }

    #[test]
    fn nonresidue_pivot_is_reported() {
        let f = PrimeField::new(5).unwrap();
        let partial = Matrix::from_i64(&f, &[&[2], &[1], &[1]]);
        assert!(matches!(
            orthogonal_complete(&partial),
            Err(Error::Nonresidue(_))
        ));
    }
}
