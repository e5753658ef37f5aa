use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Dense complex matrix in double precision, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..rows * cols).map(|x| f(x / cols, x % cols)).collect();
        ComplexMatrix { rows, cols, data }
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| {
            if i == j {
                d[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// self + c·1.
    pub fn shift(&self, c: Complex64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            if i == j {
                self.get(i, j) + c
            } else {
                self.get(i, j)
            }
        })
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn real_part(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).re).collect())
            .collect()
    }

    fn imag_part(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).im).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Tolerance { eps })
        } else {
            Err(Error::InvalidParams(format!(
                "tolerance must be positive, got {eps}"
            )))
        }
    }
}

/// f_r(z) = Σᵢ (z − rᵢ² + rᵢ) Πⱼ≠ᵢ (z − rⱼ²) / Πⱼ≠ᵢ (rᵢ² − rⱼ²).
pub fn interpolating_root(r: &[Complex64], z: Complex64) -> Complex64 {
    let sq: Vec<Complex64> = r.iter().map(|x| x * x).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..r.len() {
        let mut num = z - sq[i] + r[i];
        let mut den = Complex64::new(1.0, 0.0);
        for j in (0..r.len()).filter(|&j| j != i) {
            num *= z - sq[j];
            den *= sq[i] - sq[j];
        }
        acc += num / den;
    }
    acc
}

/// f_r evaluated at a square matrix.
pub fn interpolating_root_matrix(r: &[Complex64], u: &ComplexMatrix) -> ComplexMatrix {
    let n = u.rows();
    let sq: Vec<Complex64> = r.iter().map(|x| x * x).collect();
    let mut acc = ComplexMatrix::zeros(n, n);
    for i in 0..r.len() {
        let mut term = u.shift(-(sq[i] - r[i]));
        let mut den = Complex64::new(1.0, 0.0);
        for j in (0..r.len()).filter(|&j| j != i) {
            term = term.mul(&u.shift(-sq[j]));
            den *= sq[i] - sq[j];
        }
        acc = acc.add(&term.scale(den.inv()));
    }
    acc
}

/// Cyclic Jacobi on a real symmetric matrix; returns the orthogonal
/// eigenvector matrix (columns).
fn jacobi_eigenvectors(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (apk, aqk) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (x, y) = (*apk, *aqk);
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    v
}

/// Eigenvalues of a unitary symmetric matrix U = X + iY.
///
/// X and Y are real symmetric and commute, so a real orthogonal basis
/// diagonalizes both; it is found by Jacobi on X + γY and each eigenvalue is
/// read off as the Rayleigh quotient vᵗUv.
pub fn unitary_symmetric_eigenvalues(u: &ComplexMatrix) -> Vec<Complex64> {
    let n = u.rows();
    let gamma = 0.618_033_988_749_894_9;
    let (x, y) = (u.real_part(), u.imag_part());
    let mixed: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| x[i][j] + gamma * y[i][j]).collect())
        .collect();
    let v = jacobi_eigenvectors(mixed);
    (0..n)
        .map(|c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    acc += v[i][c] * u.get(i, j) * v[j][c];
                }
            }
            acc
        })
        .collect()
}

/// Output of [`unitary_sym_sqrt`] with the residuals it was accepted on.
#[derive(Debug, Clone, Serialize)]
pub struct UnitaryRoot {
    #[serde(skip)]
    pub root: ComplexMatrix,
    pub ray_angle: f64,
    pub min_separation: f64,
    pub square_residual: f64,
    pub symmetry_residual: f64,
    pub unitarity_residual: f64,
}

pub const SEPARATION_THRESHOLD: f64 = 1e-6;

/// V = f_{√μ}(U) with V² = U, V unitary and symmetric.
///
/// The branch cut is the ray through the midpoint of the widest angular gap
/// between eigenvalues, so no two chosen roots can sum to zero.
pub fn unitary_sym_sqrt(u: &ComplexMatrix, tol: Tolerance) -> Result<UnitaryRoot> {
    let n = u.rows();
    if n == 0 || u.cols() != n || !u.is_finite() {
        return Err(Error::InvalidParams(
            "expected a nonempty finite square matrix".into(),
        ));
    }
    let pre = u.sub(&u.transpose()).frobenius().max(
        u.adjoint()
            .mul(u)
            .sub(&ComplexMatrix::identity(n))
            .frobenius(),
    );
    if pre >= tol.eps {
        return Err(Error::NotUnitarySymmetric(pre));
    }
    let mu = unitary_symmetric_eigenvalues(u);
    let mut sep = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            sep = sep.min((mu[i] - mu[j]).norm());
        }
    }
    if sep < SEPARATION_THRESHOLD {
        return Err(Error::SpectrumClustered(sep));
    }

    let mut angles: Vec<f64> = mu.iter().map(|z| z.arg().rem_euclid(2.0 * PI)).collect();
    angles.sort_by(|a, b| a.total_cmp(b));
    let mut ray = angles[0] + PI;
    let mut widest = 2.0 * PI;
    if n > 1 {
        widest = 0.0;
        for i in 0..n {
            let a = angles[i];
            let b = if i + 1 < n {
                angles[i + 1]
            } else {
                angles[0] + 2.0 * PI
            };
            if b - a > widest {
                widest = b - a;
                ray = (a + b) / 2.0;
            }
        }
    }
    let roots: Vec<Complex64> = mu
        .iter()
        .map(|z| {
            let rel = (z.arg() - ray).rem_euclid(2.0 * PI);
            Complex64::from_polar(z.norm().sqrt(), (ray + rel) / 2.0 - PI)
        })
        .collect();
    let v = interpolating_root_matrix(&roots, u);
    let out = UnitaryRoot {
        ray_angle: ray.rem_euclid(2.0 * PI),
        min_separation: if n > 1 { sep } else { widest },
        square_residual: v.mul(&v).sub(u).frobenius(),
        symmetry_residual: v.sub(&v.transpose()).frobenius(),
        unitarity_residual: v
            .adjoint()
            .mul(&v)
            .sub(&ComplexMatrix::identity(n))
            .frobenius(),
        root: v,
    };
    let worst = out
        .square_residual
        .max(out.symmetry_residual)
        .max(out.unitarity_residual);
    if worst.is_nan() || worst >= tol.eps {
        return Err(Error::ConstructionDegenerate(format!(
            "square-root residual {worst:e} exceeds tolerance {:e}",
            tol.eps
        )));
    }
    Ok(out)
}

/// Real orthogonal k×k matrix as a product of k Householder reflections.
pub fn random_real_orthogonal<R: Rng + ?Sized>(k: usize, rng: &mut R) -> ComplexMatrix {
    let mut q = ComplexMatrix::identity(k);
    for _ in 0..k {
        let v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if norm2 < 1e-8 {
            continue;
        }
        let h = ComplexMatrix::from_fn(k, k, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            Complex64::new(id - 2.0 * v[i] * v[j] / norm2, 0.0)
        });
        q = q.mul(&h);
    }
    q
}

/// V₀ᵗ D V₀ with V₀ real orthogonal and D unimodular diagonal.
pub fn random_unitary_symmetric<R: Rng + ?Sized>(k: usize, rng: &mut R) -> ComplexMatrix {
    let v0 = random_real_orthogonal(k, rng);
    let d: Vec<Complex64> = (0..k)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)))
        .collect();
    v0.transpose().mul(&ComplexMatrix::diagonal(&d)).mul(&v0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn interpolation_hits_the_parameters() {
        let r1 = [Complex64::new(0.3, 0.7)];
        assert!((interpolating_root(&r1, r1[0] * r1[0]) - r1[0]).norm() < 1e-14);
        let z = Complex64::new(2.0, -1.0);
        assert!((interpolating_root(&r1, z) - (z - r1[0] * r1[0] + r1[0])).norm() < 1e-14);
        let r = [c(1.0), c(2.0)];
        assert!((interpolating_root(&r, c(1.0)) - c(1.0)).norm() < 1e-14);
        assert!((interpolating_root(&r, c(4.0)) - c(2.0)).norm() < 1e-14);
    }

    #[test]
    fn identity_root_is_identity() {
        let out = unitary_sym_sqrt(&ComplexMatrix::identity(1), Tolerance::default()).unwrap();
        assert!(out.root.sub(&ComplexMatrix::identity(1)).frobenius() < 1e-12);
        let clustered = unitary_sym_sqrt(&ComplexMatrix::identity(3), Tolerance::default());
        assert!(matches!(clustered, Err(Error::SpectrumClustered(_))));
    }

    #[test]
    fn rejects_non_unitary_input() {
        let m = ComplexMatrix::diagonal(&[c(2.0), c(1.0)]);
        assert!(matches!(
            unitary_sym_sqrt(&m, Tolerance::default()),
            Err(Error::NotUnitarySymmetric(_))
        ));
        assert!(Tolerance::new(0.0).is_err());
    }

    #[test]
    fn random_roots_have_small_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=5 {
            for _ in 0..10 {
                let u = random_unitary_symmetric(k, &mut rng);
                let out = unitary_sym_sqrt(&u, Tolerance::default()).unwrap();
                assert!(out.square_residual < 1e-9, "k = {k}: {out:?}");
            }
        }
    }

    #[test]
    fn eigenvalues_of_a_diagonal_matrix() {
        let d = [
            Complex64::from_polar(1.0, 0.4),
            Complex64::from_polar(1.0, 2.0),
        ];
        let mut mu = unitary_symmetric_eigenvalues(&ComplexMatrix::diagonal(&d));
        mu.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        assert!((mu[0] - d[0]).norm() < 1e-14 && (mu[1] - d[1]).norm() < 1e-14);
    }
}
