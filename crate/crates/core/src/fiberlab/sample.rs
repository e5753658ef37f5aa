//! Random elements of the groups and strata used by the chart suites.

use rand::Rng;

use crate::linalg::Matrix;
use crate::polycore::Field;

pub fn nonzero<F: Field, R: Rng + ?Sized>(f: &F, rng: &mut R) -> F::Elem {
    loop {
        let x = f.random(rng);
        if !f.is_zero(&x) {
            return x;
        }
    }
}

pub fn invertible<F: Field, R: Rng + ?Sized>(f: &F, n: usize, rng: &mut R) -> Matrix<F> {
    loop {
        let m = Matrix::random(f, n, n, rng);
        if !f.is_zero(&m.determinant()) {
            return m;
        }
    }
}

/// Product of 2·(2t) random symplectic transvections x ↦ x + c⟨x, v⟩v.
pub fn symplectic<F: Field, R: Rng + ?Sized>(f: &F, t: usize, rng: &mut R) -> Matrix<F> {
    let n = 2 * t;
    let om = Matrix::omega(f, t);
    let mut g = Matrix::identity(f, n);
    for _ in 0..2 * n {
        let v = Matrix::random(f, n, 1, rng);
        let c = f.random(rng);
        let tv = Matrix::identity(f, n).add(&v.mul(&v.transpose()).mul(&om.transpose()).scale(&c));
        g = tv.mul(&g);
    }
    g
}

/// Product of random reflections x ↦ x − 2⟨x, v⟩/⟨v, v⟩ · v along anisotropic v.
pub fn orthogonal<F: Field, R: Rng + ?Sized>(f: &F, t: usize, rng: &mut R) -> Matrix<F> {
    let mut g = Matrix::identity(f, t);
    let two = f.from_i64(2);
    for _ in 0..2 * t {
        let v = Matrix::random(f, t, 1, rng);
        let vv = v.transpose().mul(&v);
        let Some(inv) = f.inv(vv.get(0, 0)) else {
            continue;
        };
        let r = Matrix::identity(f, t).sub(&v.mul(&v.transpose()).scale(&f.mul(&two, &inv)));
        g = r.mul(&g);
    }
    g
}

/// Random 2t×n matrix with NᵗΩN = 0: a random matrix supported on the
/// Lagrangian rows 1, 3, 5, … moved by a random symplectic matrix.
pub fn isotropic_alt<F: Field, R: Rng + ?Sized>(
    f: &F,
    t: usize,
    n: usize,
    rng: &mut R,
) -> Matrix<F> {
    let base = Matrix::from_fn(f, 2 * t, n, |i, _| {
        if i % 2 == 0 {
            f.random(rng)
        } else {
            f.zero()
        }
    });
    symplectic(f, t, rng).mul(&base)
}

/// Random t×n matrix with NᵗN = 0, built from an isotropic vector when
/// −1 is a square and zero otherwise.
pub fn isotropic_sym<F: Field, R: Rng + ?Sized>(
    f: &F,
    t: usize,
    n: usize,
    rng: &mut R,
) -> Matrix<F> {
    let Some(i) = f.sqrt(&f.neg(&f.one())) else {
        return Matrix::zeros(f, t, n);
    };
    if t < 2 {
        return Matrix::zeros(f, t, n);
    }
    let w = Matrix::from_fn(f, t, 1, |r, _| match r {
        0 => f.one(),
        1 => i.clone(),
        _ => f.zero(),
    });
    let row = Matrix::random(f, 1, n, rng);
    orthogonal(f, t, rng).mul(&w.mul(&row))
}

/// Random (A, B) with AB = 0, A of size a×t and B of size t×b.
pub fn zero_product<F: Field, R: Rng + ?Sized>(
    f: &F,
    a: usize,
    t: usize,
    b: usize,
    rng: &mut R,
) -> (Matrix<F>, Matrix<F>) {
    let split = if t == 0 { 0 } else { rng.gen_range(0..=t) };
    let left = Matrix::from_fn(
        f,
        a,
        t,
        |_, j| if j < split { f.random(rng) } else { f.zero() },
    );
    let right = Matrix::from_fn(
        f,
        t,
        b,
        |i, _| if i >= split { f.random(rng) } else { f.zero() },
    );
    let g = invertible(f, t, rng);
    let gi = g.inverse().expect("invertible");
    (left.mul(&g), gi.mul(&right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_satisfy_their_equations() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = symplectic(&f, 3, &mut rng);
        assert_eq!(
            g.transpose().mul(&Matrix::omega(&f, 3)).mul(&g),
            Matrix::omega(&f, 3)
        );
        let o = orthogonal(&f, 4, &mut rng);
        assert_eq!(o.transpose().mul(&o), Matrix::identity(&f, 4));
        let n = isotropic_alt(&f, 2, 3, &mut rng);
        assert!(n.transpose().mul(&Matrix::omega(&f, 2)).mul(&n).is_zero());
        let n = isotropic_sym(&f, 3, 2, &mut rng);
        assert!(n.transpose().mul(&n).is_zero());
        let (a, b) = zero_product(&f, 2, 3, 2, &mut rng);
        assert!(a.mul(&b).is_zero());
    }
}
