use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::congruence::{alt_sqrt_section, sym_sqrt_section};
use super::frames::{omega_column, orthogonal_complete, symplectic_complete, symplectic_form};
use super::sample;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nullcones::subsets;
use crate::polycore::Field;

/// The unique M_W = [[1_d, X], [0, 1_{n−d}]] for which A·M_W has kernel
/// span(e_{d+1}, …, e_n), given rank A = d with independent leading columns.
pub fn grassmann_kernel_chart<F: Field>(a: &Matrix<F>, d: usize) -> Result<Matrix<F>> {
    let f = a.field().clone();
    let n = a.cols();
    if d > n || a.rank() != d {
        return Err(Error::Precondition(format!(
            "matrix does not have rank {d}"
        )));
    }
    let lead = a.columns(0..d);
    if lead.rank() != d {
        return Err(Error::Singular("leading columns are dependent".into()));
    }
    let mut rows = Vec::new();
    for r in 0..a.rows() {
        let mut trial = rows.clone();
        trial.push(r);
        if lead.submatrix(&trial, &(0..d).collect::<Vec<_>>()).rank() == trial.len() {
            rows = trial;
        }
        if rows.len() == d {
            break;
        }
    }
    let lead_cols: Vec<usize> = (0..d).collect();
    let rest_cols: Vec<usize> = (d..n).collect();
    let x = a
        .submatrix(&rows, &lead_cols)
        .solve(&a.submatrix(&rows, &rest_cols))?
        .neg();
    let mut m = Matrix::identity(&f, n);
    for i in 0..d {
        for j in 0..n - d {
            m.set(i, d + j, x.get(i, j).clone());
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartFamily {
    #[serde(rename = "sp:1")]
    Sp1,
    #[serde(rename = "sp:2")]
    Sp2,
    #[serde(rename = "alt:1")]
    Alt1,
    #[serde(rename = "alt:2")]
    Alt2,
    #[serde(rename = "alt:3")]
    Alt3,
    #[serde(rename = "gl")]
    Gl,
    #[serde(rename = "p")]
    PFiber,
    #[serde(rename = "gen:1")]
    Gen1,
    #[serde(rename = "gen:2")]
    Gen2,
    #[serde(rename = "gen:3")]
    Gen3,
    #[serde(rename = "sym:1")]
    Sym1,
    #[serde(rename = "sym:2")]
    Sym2,
    #[serde(rename = "sym:3")]
    Sym3,
}

/// Kind of open cover over which a chart family trivializes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverKind {
    Zariski,
    Etale,
}

impl ChartFamily {
    pub const ALL: [ChartFamily; 13] = [
        ChartFamily::Sp1,
        ChartFamily::Sp2,
        ChartFamily::Alt1,
        ChartFamily::Alt2,
        ChartFamily::Alt3,
        ChartFamily::Gl,
        ChartFamily::PFiber,
        ChartFamily::Gen1,
        ChartFamily::Gen2,
        ChartFamily::Gen3,
        ChartFamily::Sym1,
        ChartFamily::Sym2,
        ChartFamily::Sym3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChartFamily::Sp1 => "sp:1",
            ChartFamily::Sp2 => "sp:2",
            ChartFamily::Alt1 => "alt:1",
            ChartFamily::Alt2 => "alt:2",
            ChartFamily::Alt3 => "alt:3",
            ChartFamily::Gl => "gl",
            ChartFamily::PFiber => "p",
            ChartFamily::Gen1 => "gen:1",
            ChartFamily::Gen2 => "gen:2",
            ChartFamily::Gen3 => "gen:3",
            ChartFamily::Sym1 => "sym:1",
            ChartFamily::Sym2 => "sym:2",
            ChartFamily::Sym3 => "sym:3",
        }
    }

    /// Sections for sym:2 and sym:3 need square roots, so those charts live
    /// on étale covers; the rest are Zariski.
    pub fn cover(self) -> CoverKind {
        match self {
            ChartFamily::Sym2 | ChartFamily::Sym3 => CoverKind::Etale,
            _ => CoverKind::Zariski,
        }
    }

    pub fn default_params(self) -> ChartParams {
        let p = |m, t, n, k| ChartParams { m, t, n, k };
        match self {
            ChartFamily::Sp1 => p(0, 2, 0, 1),
            ChartFamily::Sp2 => p(0, 3, 0, 2),
            ChartFamily::Alt1 | ChartFamily::Alt2 | ChartFamily::Alt3 => p(0, 2, 4, 1),
            ChartFamily::Gl => p(0, 3, 0, 1),
            ChartFamily::PFiber => p(0, 3, 0, 2),
            ChartFamily::Gen1 | ChartFamily::Gen2 | ChartFamily::Gen3 => p(3, 2, 3, 1),
            ChartFamily::Sym1 | ChartFamily::Sym2 | ChartFamily::Sym3 => p(0, 3, 4, 1),
        }
    }
}

impl fmt::Display for ChartFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChartFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChartFamily::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown chart family `{s}`")))
    }
}

/// Sizes for a chart family. Unused entries are ignored.
///
/// * sp:1 uses t; sp:2 uses t, k (Sp(2t, 2k)).
/// * alt:* use t, n, k (strata of 2t×n matrices, rank 2k).
/// * gl uses t, k (GL(t, k+1) → GL(t, k)); p uses t, k (P(t, k) → P(t, k−1)).
/// * gen:* use m, t, n, k; sym:* use t, n, k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartParams {
    pub m: usize,
    pub t: usize,
    pub n: usize,
    pub k: usize,
}

impl ChartParams {
    pub fn validate(&self, family: ChartFamily) -> Result<()> {
        let ChartParams { m, t, n, k } = *self;
        let ok = match family {
            ChartFamily::Sp1 => t >= 1,
            ChartFamily::Sp2 => 1 < k && k <= t,
            ChartFamily::Alt1 => t >= 1 && n >= 1,
            ChartFamily::Alt2 => 1 <= k && k < t && 2 * t <= n,
            ChartFamily::Alt3 => k < t && 2 * t <= n,
            ChartFamily::Gl => 1 <= k && k < t,
            ChartFamily::PFiber => 1 <= k && k <= t,
            ChartFamily::Gen1 => m >= 1 && t >= 1 && n >= 1,
            ChartFamily::Gen2 => 1 <= k && k < t && t <= m && t <= n,
            ChartFamily::Gen3 => k < t && t <= m && t <= n,
            ChartFamily::Sym1 => t >= 1 && n >= 1,
            ChartFamily::Sym2 => 1 <= k && k < t && t <= n,
            ChartFamily::Sym3 => k < t && t <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{family}: unsupported sizes {self:?}"
            )))
        }
    }
}

/// A point of the total space: one matrix, or a pair (Y, Z) for the
/// generic and P(t, k) families.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSample<F: Field> {
    pub y: Matrix<F>,
    pub z: Option<Matrix<F>>,
}

impl<F: Field> ChartSample<F> {
    pub fn single(y: Matrix<F>) -> Self {
        ChartSample { y, z: None }
    }

    pub fn pair(y: Matrix<F>, z: Matrix<F>) -> Self {
        ChartSample { y, z: Some(z) }
    }

    fn z(&self) -> Result<&Matrix<F>> {
        self.z
            .as_ref()
            .ok_or_else(|| Error::InvalidParams("this chart family needs a matrix pair".into()))
    }
}

/// Outcome of one forward-then-inverse pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    /// Which open set of the cover was used, e.g. "U_2" or "S={1,3}".
    pub chart: String,
    pub exact: bool,
    pub fiber_ok: bool,
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

/// Permutation matrix P with (P·X) = X with rows S moved to the top, via the
/// swaps i ↔ sᵢ in order.
fn swap_permutation<F: Field>(f: &F, n: usize, s: &[usize]) -> Matrix<F> {
    let mut order: Vec<usize> = (0..n).collect();
    for (i, &si) in s.iter().enumerate() {
        order.swap(i, si);
    }
    Matrix::from_fn(
        f,
        n,
        n,
        |r, c| if order[r] == c { f.one() } else { f.zero() },
    )
}

/// Permutation Q with (X·Q) = X with columns S moved to the front.
fn column_front<F: Field>(f: &F, n: usize, s: &[usize]) -> Matrix<F> {
    let mut order: Vec<usize> = s.to_vec();
    order.extend((0..n).filter(|i| !s.contains(i)));
    Matrix::from_fn(
        f,
        n,
        n,
        |r, c| if order[c] == r { f.one() } else { f.zero() },
    )
}

fn label(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("S={{{}}}", parts.join(","))
}

/// First row subset S (lex order) with A(S) invertible.
fn invertible_rows<F: Field>(a: &Matrix<F>) -> Option<Vec<usize>> {
    let k = a.cols();
    let cols = range(0, k);
    subsets(a.rows(), k)
        .into_iter()
        .find(|s| a.submatrix(s, &cols).rank() == k)
}

/// N_A: identity off S, A(S)⁻¹ on S × S.
fn n_matrix<F: Field>(a: &Matrix<F>, s: &[usize]) -> Result<Matrix<F>> {
    let f = a.field();
    let inv = a.submatrix(s, &range(0, a.cols())).inverse()?;
    let mut n = Matrix::identity(f, a.rows());
    for (x, &sx) in s.iter().enumerate() {
        for (y, &sy) in s.iter().enumerate() {
            n.set(sx, sy, inv.get(x, y).clone());
        }
    }
    Ok(n)
}

/// Invertible M with M·A = [[1_k], [0]] for A of full column rank k:
/// N_A, then P_S, then clearing the rows below.
fn gl_normalizer<F: Field>(a: &Matrix<F>) -> Result<(Matrix<F>, Vec<usize>)> {
    let f = a.field().clone();
    let (m, k) = (a.rows(), a.cols());
    let s = invertible_rows(a).ok_or_else(|| Error::OffChart("columns are dependent".into()))?;
    let pn = swap_permutation(&f, m, &s).mul(&n_matrix(a, &s)?);
    let below = pn.mul(a).submatrix(&range(k, m), &range(0, k));
    let mut e = Matrix::identity(&f, m);
    for i in 0..m - k {
        for j in 0..k {
            e.set(k + i, j, f.neg(below.get(i, j)));
        }
    }
    Ok((e.mul(&pn), s))
}

fn alt_gram<F: Field>(y: &Matrix<F>) -> Result<Matrix<F>> {
    if !y.rows().is_multiple_of(2) {
        return Err(Error::InvalidParams(
            "expected an even number of rows".into(),
        ));
    }
    Ok(y.transpose()
        .mul(&Matrix::omega(y.field(), y.rows() / 2))
        .mul(y))
}

fn sym_gram<F: Field>(y: &Matrix<F>) -> Matrix<F> {
    y.transpose().mul(y)
}

/// The leading d×d block of `g` when `g` = diag(block, 0).
fn split_block<F: Field>(g: &Matrix<F>, d: usize) -> Option<Matrix<F>> {
    let (r, c) = (g.rows(), g.cols());
    let top = g.submatrix(&range(0, d), &range(d, c));
    let bottom = g.submatrix(&range(d, r), &range(0, c));
    (top.is_zero() && bottom.is_zero()).then(|| g.submatrix(&range(0, d), &range(0, d)))
}

/// Kernel chart used by alt:1, gen:1, sym:1: M = Q·M_W with Q moving the
/// first independent column subset of `g` to the front.
fn kernel_chart<F: Field>(g: &Matrix<F>) -> Result<(Matrix<F>, String)> {
    let f = g.field().clone();
    let n = g.cols();
    let d = g.rank();
    let rows = range(0, g.rows());
    let s = subsets(n, d)
        .into_iter()
        .find(|s| g.submatrix(&rows, s).rank() == d)
        .expect("a rank-d matrix has d independent columns");
    let q = column_front(&f, n, &s);
    let mw = grassmann_kernel_chart(&g.mul(&q), d)?;
    Ok((q.mul(&mw), label(&s)))
}

fn kernel_is_tail<F: Field>(g: &Matrix<F>, d: usize) -> bool {
    let n = g.cols();
    g.submatrix(&range(0, g.rows()), &range(d, n)).is_zero() && g.columns(0..d).rank() == d
}

fn sp1<F: Field>(y: &Matrix<F>) -> Result<RoundTrip> {
    let f = y.field().clone();
    if y.cols() != 2 || !y.rows().is_multiple_of(2) || y.rows() == 0 {
        return Err(Error::InvalidParams("expected a 2t x 2 matrix".into()));
    }
    let t = y.rows() / 2;
    if alt_gram(y)? != Matrix::omega(&f, 1) {
        return Err(Error::OffChart("sample is not in Sp(2t, 2)".into()));
    }
    let (u, v) = (y.column(0), y.column(1));
    let e = |i: usize| omega_column(&f, t, 2 * i);
    let fi = |i: usize| omega_column(&f, t, 2 * i + 1);
    let lin = |a: &[F::Elem], c: &F::Elem, b: &[F::Elem]| -> Vec<F::Elem> {
        a.iter()
            .zip(b)
            .map(|(x, z)| f.add(x, &f.mul(c, z)))
            .collect()
    };
    if let Some(i) = (0..t).find(|&i| !f.is_zero(&symplectic_form(&f, &u, &fi(i)))) {
        let (ei, fv) = (e(i), fi(i));
        let vp = lin(&v, &symplectic_form(&f, &v, &ei), &fv);
        let fiber_ok = f.is_zero(&symplectic_form(&f, &vp, &ei));
        let s = f
            .div(
                &f.sub(&f.one(), &symplectic_form(&f, &u, &vp)),
                &symplectic_form(&f, &u, &fv),
            )
            .unwrap();
        let back = lin(&vp, &s, &fv);
        return Ok(RoundTrip {
            chart: format!("U_{}", i + 1),
            exact: back == v,
            fiber_ok,
        });
    }
    let i = (0..t)
        .find(|&i| !f.is_zero(&symplectic_form(&f, &u, &e(i))))
        .ok_or_else(|| Error::OffChart("first column is zero".into()))?;
    let (ei, fv) = (e(i), fi(i));
    let vp = lin(&v, &f.neg(&symplectic_form(&f, &v, &fv)), &ei);
    let fiber_ok = f.is_zero(&symplectic_form(&f, &vp, &fv));
    let s = f
        .div(
            &f.sub(&f.one(), &symplectic_form(&f, &u, &vp)),
            &symplectic_form(&f, &u, &ei),
        )
        .unwrap();
    let back = lin(&vp, &s, &ei);
    Ok(RoundTrip {
        chart: format!("U'_{}", i + 1),
        exact: back == v,
        fiber_ok,
    })
}

fn symplectic_inverse<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let om = Matrix::omega(a.field(), a.rows() / 2);
    om.mul(&a.transpose()).mul(&om).neg()
}

fn sp2<F: Field>(y: &Matrix<F>) -> Result<RoundTrip> {
    let f = y.field().clone();
    let (t, k) = (y.rows() / 2, y.cols() / 2);
    if alt_gram(y)? != Matrix::omega(&f, k) {
        return Err(Error::OffChart("sample is not in Sp(2t, 2k)".into()));
    }
    let alpha = symplectic_complete(&y.columns(0..2))?;
    let beta = symplectic_inverse(&alpha).mul(y);
    let head_ok = beta.columns(0..2) == Matrix::identity(&f, 2 * t).columns(0..2)
        && beta.submatrix(&[0, 1], &range(2, 2 * k)).is_zero();
    let mp = beta.submatrix(&range(2, 2 * t), &range(2, 2 * k));
    let fiber_ok = head_ok && alt_gram(&mp)? == Matrix::omega(&f, k - 1);
    let back = alpha.mul(&Matrix::identity(&f, 2).block_diag(&mp));
    Ok(RoundTrip {
        chart: "alpha".into(),
        exact: back == *y,
        fiber_ok,
    })
}

fn alt1<F: Field>(y: &Matrix<F>) -> Result<RoundTrip> {
    let g = alt_gram(y)?;
    let (m, chart) = kernel_chart(&g)?;
    let forward = y.mul(&m);
    let fiber_ok = kernel_is_tail(&alt_gram(&forward)?, g.rank());
    let back = forward.mul(&m.inverse()?);
    Ok(RoundTrip {
        chart,
        exact: back == *y,
        fiber_ok,
    })
}

fn alt2<F: Field>(y: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = y.field().clone();
    let n = y.cols();
    let a = split_block(&alt_gram(y)?, 2 * k)
        .ok_or_else(|| Error::OffChart("Gram matrix is not block diagonal".into()))?;
    if f.is_zero(&a.determinant()) {
        return Err(Error::OffChart("top-left block is singular".into()));
    }
    let psi = alt_sqrt_section(&a)?;
    let rest = Matrix::identity(&f, n - 2 * k);
    let forward = y.mul(&psi.inverse()?.block_diag(&rest));
    let target = Matrix::omega(&f, k).block_diag(&Matrix::zeros(&f, n - 2 * k, n - 2 * k));
    let fiber_ok = alt_gram(&forward)? == target;
    let back = forward.mul(&psi.block_diag(&rest));
    let j = (1..2 * k).find(|&j| !f.is_zero(a.get(0, j))).unwrap_or(1);
    Ok(RoundTrip {
        chart: format!("a_1{} != 0", j + 1),
        exact: back == *y,
        fiber_ok,
    })
}

fn alt3<F: Field>(y: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = y.field().clone();
    let (rows, n) = (y.rows(), y.cols());
    let target = Matrix::omega(&f, k).block_diag(&Matrix::zeros(&f, n - 2 * k, n - 2 * k));
    if alt_gram(y)? != target {
        return Err(Error::OffChart("sample is not in F".into()));
    }
    let alpha = if k == 0 {
        Matrix::identity(&f, rows)
    } else {
        symplectic_complete(&y.columns(0..2 * k))?
    };
    let x = symplectic_inverse(&alpha).mul(y);
    let nblock = x.submatrix(&range(2 * k, rows), &range(2 * k, n));
    let fiber_ok =
        Matrix::identity(&f, 2 * k).block_diag(&nblock) == x && alt_gram(&nblock)?.is_zero();
    Ok(RoundTrip {
        chart: "alpha".into(),
        exact: alpha.mul(&x) == *y,
        fiber_ok,
    })
}

fn gl<F: Field>(y: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = y.field().clone();
    let t = y.rows();
    if y.cols() != k + 1 || y.rank() != k + 1 {
        return Err(Error::OffChart("sample is not in GL(t, k+1)".into()));
    }
    let a = y.columns(0..k);
    let s = invertible_rows(&a)
        .ok_or_else(|| Error::OffChart("base point has dependent columns".into()))?;
    let pn = swap_permutation(&f, t, &s).mul(&n_matrix(&a, &s)?);
    let bt = pn.mul(y);
    let a_s = bt.submatrix(&range(k, t), &range(0, k));
    let head_ok = bt.submatrix(&range(0, k), &range(0, k)) == Matrix::identity(&f, k);
    let b_s = bt.submatrix(&range(0, k), &[k]);
    let c = bt.submatrix(&range(k, t), &[k]).sub(&a_s.mul(&b_s));
    let fiber_ok = head_ok && !c.is_zero();

    let base = pn.mul(&a);
    let rebuilt = base.hstack(&b_s.vstack(&c.add(&base.rows_range(k..t).mul(&b_s))));
    let back = pn.inverse()?.mul(&rebuilt);
    Ok(RoundTrip {
        chart: label(&s),
        exact: back == *y,
        fiber_ok,
    })
}

/// The block map (u, v) ↦ ([[1, 0], [−uB₀ᵗ, u]], [[1, 0], [B₀ᵗ, v]]).
pub fn p_fiber_map<F: Field>(
    b0: &Matrix<F>,
    u: &Matrix<F>,
    v: &Matrix<F>,
) -> (Matrix<F>, Matrix<F>) {
    let f = b0.field().clone();
    let (k1, r) = (b0.rows(), b0.cols());
    let a = Matrix::identity(&f, k1)
        .hstack(&Matrix::zeros(&f, k1, r))
        .vstack(&u.mul(&b0.transpose()).neg().hstack(u));
    let b = Matrix::identity(&f, k1)
        .vstack(&b0.transpose())
        .hstack(&Matrix::zeros(&f, k1, 1).vstack(v));
    (a, b)
}

fn p_fiber<F: Field>(a: &Matrix<F>, b: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = a.field().clone();
    let t = a.cols();
    if a.rows() != k || b.rows() != t || b.cols() != k || a.mul(b) != Matrix::identity(&f, k) {
        return Err(Error::OffChart("sample is not in P(t, k)".into()));
    }
    let k1 = k - 1;
    let a_top = a.rows_range(0..k1);
    let b_left = b.columns(0..k1);
    let normal = Matrix::identity(&f, k1).hstack(&Matrix::zeros(&f, k1, t - k1));
    if a_top != normal || b_left.rows_range(0..k1) != Matrix::identity(&f, k1) {
        return Err(Error::OffChart("base point is not in normal form".into()));
    }
    let b0 = b_left.rows_range(k1..t).transpose();
    let u = a.submatrix(&[k1], &range(k1, t));
    let v = b.submatrix(&range(k1, t), &[k1]);
    let fiber_ok = u.mul(&v) == Matrix::identity(&f, 1);
    let (a2, b2) = p_fiber_map(&b0, &u, &v);
    Ok(RoundTrip {
        chart: "normal".into(),
        exact: a2 == *a && b2 == *b,
        fiber_ok,
    })
}

fn gen1<F: Field>(y: &Matrix<F>, z: &Matrix<F>) -> Result<RoundTrip> {
    let g = y.mul(z);
    let (m, chart) = kernel_chart(&g)?;
    let zf = z.mul(&m);
    let fiber_ok = kernel_is_tail(&y.mul(&zf), g.rank());
    Ok(RoundTrip {
        chart,
        exact: zf.mul(&m.inverse()?) == *z,
        fiber_ok,
    })
}

fn gen2<F: Field>(y: &Matrix<F>, z: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = y.field().clone();
    let (m, n) = (y.rows(), z.cols());
    let g = y.mul(z);
    if !g.submatrix(&range(0, m), &range(k, n)).is_zero() || g.columns(0..k).rank() != k {
        return Err(Error::OffChart(
            "kernel of YZ is not the standard tail".into(),
        ));
    }
    let c = g.columns(0..k);
    let (q, s) = gl_normalizer(&c)?;
    let yf = q.mul(y);
    let target = Matrix::identity(&f, k).block_diag(&Matrix::zeros(&f, m - k, n - k));
    let fiber_ok = yf.mul(z) == target;
    let (q2, _) = gl_normalizer(&c)?;
    Ok(RoundTrip {
        chart: label(&s),
        exact: q2.inverse()?.mul(&yf) == *y,
        fiber_ok,
    })
}

struct Gen3Frame<F: Field> {
    pm: Matrix<F>,
    big_m: Matrix<F>,
    s: Vec<usize>,
}

fn gen3_frame<F: Field>(y1: &Matrix<F>, z1: &Matrix<F>) -> Result<Gen3Frame<F>> {
    let f = y1.field().clone();
    let (k, t) = (y1.rows(), y1.cols());
    let s =
        invertible_rows(z1).ok_or_else(|| Error::OffChart("Z_1 has dependent columns".into()))?;
    let pm = swap_permutation(&f, t, &s).mul(&n_matrix(z1, &s)?);
    let pm_inv = pm.inverse()?;
    let y1p = y1.mul(&pm_inv);
    let c = pm.mul(z1).submatrix(&range(k, t), &range(0, k));
    let lower = c.neg().hstack(&Matrix::identity(&f, t - k));
    Ok(Gen3Frame {
        pm,
        big_m: y1p.vstack(&lower),
        s,
    })
}

fn gen3<F: Field>(y: &Matrix<F>, z: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = y.field().clone();
    let (m, t, n) = (y.rows(), y.cols(), z.cols());
    let target = Matrix::identity(&f, k).block_diag(&Matrix::zeros(&f, m - k, n - k));
    if y.mul(z) != target {
        return Err(Error::OffChart("sample is not in F".into()));
    }
    let (y1, z1) = (y.rows_range(0..k), z.columns(0..k));
    let fr = gen3_frame(&y1, &z1)?;
    let mi = fr.big_m.inverse()?;
    let ypp = y.mul(&fr.pm.inverse()?).mul(&mi);
    let zpp = fr.big_m.mul(&fr.pm).mul(z);
    let yc = ypp.submatrix(&range(k, m), &range(k, t));
    let e = zpp.submatrix(&range(k, t), &range(k, n));
    let shape_ok = ypp == Matrix::identity(&f, k).block_diag(&yc)
        && zpp == Matrix::identity(&f, k).block_diag(&e);
    let fiber_ok = shape_ok && yc.mul(&e).is_zero();

    let fr2 = gen3_frame(&y1, &z1)?;
    let y_back = Matrix::identity(&f, k)
        .block_diag(&yc)
        .mul(&fr2.big_m)
        .mul(&fr2.pm);
    let z_back = fr2
        .pm
        .inverse()?
        .mul(&fr2.big_m.inverse()?)
        .mul(&Matrix::identity(&f, k).block_diag(&e));
    Ok(RoundTrip {
        chart: label(&fr.s),
        exact: y_back == *y && z_back == *z,
        fiber_ok,
    })
}

fn sym1<F: Field>(y: &Matrix<F>) -> Result<RoundTrip> {
    let g = sym_gram(y);
    let (m, chart) = kernel_chart(&g)?;
    let forward = y.mul(&m);
    let fiber_ok = kernel_is_tail(&sym_gram(&forward), g.rank());
    Ok(RoundTrip {
        chart,
        exact: forward.mul(&m.inverse()?) == *y,
        fiber_ok,
    })
}

fn sym2<F: Field>(y: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = y.field().clone();
    let n = y.cols();
    let a = split_block(&sym_gram(y), k)
        .ok_or_else(|| Error::OffChart("Gram matrix is not block diagonal".into()))?;
    if f.is_zero(&a.determinant()) {
        return Err(Error::OffChart("top-left block is singular".into()));
    }
    let psi = sym_sqrt_section(&a)?;
    let rest = Matrix::identity(&f, n - k);
    let forward = y.mul(&psi.inverse()?.block_diag(&rest));
    let target = Matrix::identity(&f, k).block_diag(&Matrix::zeros(&f, n - k, n - k));
    let fiber_ok = sym_gram(&forward) == target;
    Ok(RoundTrip {
        chart: "sqrt".into(),
        exact: forward.mul(&psi.block_diag(&rest)) == *y,
        fiber_ok,
    })
}

fn sym3<F: Field>(y: &Matrix<F>, k: usize) -> Result<RoundTrip> {
    let f = y.field().clone();
    let (t, n) = (y.rows(), y.cols());
    let target = Matrix::identity(&f, k).block_diag(&Matrix::zeros(&f, n - k, n - k));
    if sym_gram(y) != target {
        return Err(Error::OffChart("sample is not in F".into()));
    }
    let alpha = orthogonal_complete(&y.columns(0..k))?;
    let x = alpha.transpose().mul(y);
    let nblock = x.submatrix(&range(k, t), &range(k, n));
    let fiber_ok = Matrix::identity(&f, k).block_diag(&nblock) == x && sym_gram(&nblock).is_zero();
    Ok(RoundTrip {
        chart: "alpha".into(),
        exact: alpha.mul(&x) == *y,
        fiber_ok,
    })
}

/// Applies the chart map of `family` to `sample`, then its inverse, and
/// reports whether the input came back exactly and whether the image lies
/// in the fiber.
pub fn chart_trivializations<F: Field>(
    family: ChartFamily,
    params: ChartParams,
    sample: &ChartSample<F>,
) -> Result<RoundTrip> {
    params.validate(family)?;
    let y = &sample.y;
    let k = params.k;
    match family {
        ChartFamily::Sp1 => sp1(y),
        ChartFamily::Sp2 => sp2(y),
        ChartFamily::Alt1 => alt1(y),
        ChartFamily::Alt2 => alt2(y, k),
        ChartFamily::Alt3 => alt3(y, k),
        ChartFamily::Gl => gl(y, k),
        ChartFamily::PFiber => p_fiber(y, sample.z()?, k),
        ChartFamily::Gen1 => gen1(y, sample.z()?),
        ChartFamily::Gen2 => gen2(y, sample.z()?, k),
        ChartFamily::Gen3 => gen3(y, sample.z()?, k),
        ChartFamily::Sym1 => sym1(y),
        ChartFamily::Sym2 => sym2(y, k),
        ChartFamily::Sym3 => sym3(y, k),
    }
}

fn alt_f_sample<F: Field, R: Rng + ?Sized>(
    f: &F,
    t: usize,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Matrix<F> {
    let nb = sample::isotropic_alt(f, t - k, n - 2 * k, rng);
    sample::symplectic(f, t, rng).mul(&Matrix::identity(f, 2 * k).block_diag(&nb))
}

fn sym_f_sample<F: Field, R: Rng + ?Sized>(
    f: &F,
    t: usize,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Matrix<F> {
    let nb = sample::isotropic_sym(f, t - k, n - k, rng);
    sample::orthogonal(f, t, rng).mul(&Matrix::identity(f, k).block_diag(&nb))
}

fn gen_f_sample<F: Field, R: Rng + ?Sized>(
    f: &F,
    p: ChartParams,
    rng: &mut R,
) -> (Matrix<F>, Matrix<F>) {
    let ChartParams { m, t, n, k } = p;
    let (yc, e) = sample::zero_product(f, m - k, t - k, n - k, rng);
    let g = sample::invertible(f, t, rng);
    let y = Matrix::identity(f, k).block_diag(&yc).mul(&g);
    let z = g
        .inverse()
        .expect("invertible")
        .mul(&Matrix::identity(f, k).block_diag(&e));
    (y, z)
}

/// A random point of the total space of `family`, on some chart.
pub fn random_sample<F: Field, R: Rng + ?Sized>(
    field: &F,
    family: ChartFamily,
    params: ChartParams,
    rng: &mut R,
) -> Result<ChartSample<F>> {
    params.validate(family)?;
    let f = field;
    let ChartParams { m, t, n, k } = params;
    Ok(match family {
        ChartFamily::Sp1 => ChartSample::single(sample::symplectic(f, t, rng).columns(0..2)),
        ChartFamily::Sp2 => ChartSample::single(sample::symplectic(f, t, rng).columns(0..2 * k)),
        ChartFamily::Alt1 => {
            let kk = rng.gen_range(0..=t.min(n / 2));
            let base = if 2 * t <= n && kk < t {
                alt_f_sample(f, t, n, kk, rng)
            } else {
                Matrix::random(f, 2 * t, n, rng)
            };
            ChartSample::single(base.mul(&sample::invertible(f, n, rng)))
        }
        ChartFamily::Alt2 => {
            let phi = sample::invertible(f, 2 * k, rng);
            let base = alt_f_sample(f, t, n, k, rng);
            ChartSample::single(base.mul(&phi.block_diag(&Matrix::identity(f, n - 2 * k))))
        }
        ChartFamily::Alt3 => ChartSample::single(alt_f_sample(f, t, n, k, rng)),
        ChartFamily::Gl => loop {
            let y = Matrix::random(f, t, k + 1, rng);
            if y.rank() == k + 1 {
                break ChartSample::single(y);
            }
        },
        ChartFamily::PFiber => {
            let b0 = Matrix::random(f, k - 1, t - k + 1, rng);
            let r = t - k + 1;
            let u = loop {
                let u = Matrix::random(f, 1, r, rng);
                if !u.is_zero() {
                    break u;
                }
            };
            let mut v = Matrix::random(f, r, 1, rng);
            let j = (0..r).find(|&j| !f.is_zero(u.get(0, j))).unwrap();
            let mut rest = f.zero();
            for i in (0..r).filter(|&i| i != j) {
                rest = f.add(&rest, &f.mul(u.get(0, i), v.get(i, 0)));
            }
            v.set(j, 0, f.div(&f.sub(&f.one(), &rest), u.get(0, j)).unwrap());
            let (a, b) = p_fiber_map(&b0, &u, &v);
            ChartSample::pair(a, b)
        }
        ChartFamily::Gen1 => {
            let kk = rng.gen_range(0..t);
            let (y, z) = gen_f_sample(f, ChartParams { k: kk, ..params }, rng);
            let h = sample::invertible(f, m, rng);
            let h2 = sample::invertible(f, n, rng);
            ChartSample::pair(h.mul(&y), z.mul(&h2))
        }
        ChartFamily::Gen2 => {
            let (y, z) = gen_f_sample(f, params, rng);
            ChartSample::pair(sample::invertible(f, m, rng).mul(&y), z)
        }
        ChartFamily::Gen3 => {
            let (y, z) = gen_f_sample(f, params, rng);
            ChartSample::pair(y, z)
        }
        ChartFamily::Sym1 => {
            let kk = rng.gen_range(0..t);
            let base = sym_f_sample(f, t, n, kk, rng);
            let phi = sample::invertible(f, kk, rng);
            let g = base.mul(&phi.block_diag(&Matrix::identity(f, n - kk)));
            ChartSample::single(g.mul(&sample::invertible(f, n, rng)))
        }
        ChartFamily::Sym2 => {
            let phi = sample::invertible(f, k, rng);
            let base = sym_f_sample(f, t, n, k, rng);
            ChartSample::single(base.mul(&phi.block_diag(&Matrix::identity(f, n - k))))
        }
        ChartFamily::Sym3 => ChartSample::single(sym_f_sample(f, t, n, k, rng)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_chart_examples() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[1, 1]]);
        assert_eq!(
            grassmann_kernel_chart(&a, 1).unwrap(),
            Matrix::from_i64(&q, &[&[1, -1], &[0, 1]])
        );
        let a = Matrix::from_i64(&q, &[&[2, 0, 0], &[0, 3, 0]]);
        assert_eq!(
            grassmann_kernel_chart(&a, 2).unwrap(),
            Matrix::identity(&q, 3)
        );
        let a = Matrix::from_i64(&q, &[&[0, 1]]);
        assert!(matches!(
            grassmann_kernel_chart(&a, 1),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn kernel_chart_is_unique() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[1, 2, 3, 4], &[0, 1, 1, 2], &[1, 3, 4, 6]]);
        let mw = grassmann_kernel_chart(&a, 2).unwrap();
        assert!(a.mul(&mw).columns(2..4).is_zero());
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            let mut bumped = mw.clone();
            bumped.set(i, j, q.add(mw.get(i, j), &q.one()));
            assert!(!a.mul(&bumped).columns(2..4).is_zero());
        }
    }

    #[test]
    fn sp_chart_on_the_standard_frame() {
        let q = Rationals;
        let y = Matrix::omega(&q, 1);
        let rt = chart_trivializations(
            ChartFamily::Sp1,
            ChartFamily::Sp1.default_params(),
            &ChartSample::single(y),
        )
        .unwrap();
        assert_eq!(rt.chart, "U_1");
        assert!(rt.exact && rt.fiber_ok);
    }

    #[test]
    fn p_block_map_lands_in_p() {
        let q = Rationals;
        let u = Matrix::from_i64(&q, &[&[1, 0]]);
        let v = Matrix::from_i64(&q, &[&[1], &[0]]);
        let (a, b) = p_fiber_map(&Matrix::zeros(&q, 0, 2), &u, &v);
        assert_eq!(a.mul(&b), Matrix::identity(&q, 1));
        let b0 = Matrix::from_i64(&q, &[&[3, -2]]);
        let (a, b) = p_fiber_map(&b0, &u, &v);
        assert_eq!(a.mul(&b), Matrix::identity(&q, 2));
    }

    #[test]
    fn generic_f_trivialization_fiber() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = ChartParams {
            m: 2,
            t: 2,
            n: 2,
            k: 1,
        };
        let s = random_sample(&f, ChartFamily::Gen3, p, &mut rng).unwrap();
        let target = Matrix::from_i64(&f, &[&[1, 0], &[0, 0]]);
        assert_eq!(s.y.mul(s.z.as_ref().unwrap()), target);
        let rt = chart_trivializations(ChartFamily::Gen3, p, &s).unwrap();
        assert!(rt.exact && rt.fiber_ok);
    }

    #[test]
    fn every_family_round_trips() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for fam in ChartFamily::ALL {
            let p = fam.default_params();
            let mut done = 0;
            for _ in 0..40 {
                let s = random_sample(&f, fam, p, &mut rng).unwrap();
                match chart_trivializations(fam, p, &s) {
                    Ok(rt) => {
                        assert!(rt.exact && rt.fiber_ok, "{fam}: {rt:?}");
                        done += 1;
                    }
                    Err(Error::Nonresidue(_)) if fam.cover() == CoverKind::Etale => {}
                    Err(e) => panic!("{fam}: {e}"),
                }
            }
            assert!(done >= 10, "{fam}: only {done} round trips");
        }
    }

    #[test]
    fn off_chart_samples_are_reported() {
        let q = Rationals;
        let bad = Matrix::from_i64(&q, &[&[1, 0], &[0, 2]]);
        let r = chart_trivializations(
            ChartFamily::Sp1,
            ChartFamily::Sp1.default_params(),
            &ChartSample::single(bad),
        );
        assert!(matches!(r, Err(Error::OffChart(_))));
        assert_eq!("gen:2".parse::<ChartFamily>().unwrap(), ChartFamily::Gen2);
    }
}
