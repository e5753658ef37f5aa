use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CheckReport;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nullcones::{binom, FamilyParams, Nullcone};
use crate::polycore::{Field, Ideal, MonomialOrder, Polynomial, Ring};

type PMat<F> = Vec<Vec<Polynomial<F>>>;

fn pm_mul<F: Field>(
    ring: &Arc<Ring<F>>,
    a: &PMat<F>,
    b: &PMat<F>,
    inner: usize,
    cols: usize,
) -> PMat<F> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(Polynomial::zero(ring), |acc, k| {
                        acc.add(&row[k].mul(&b[k][j]))
                    })
                })
                .collect()
        })
        .collect()
}

fn pm_transpose<F: Field>(a: &PMat<F>, rows: usize, cols: usize) -> PMat<F> {
    (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].clone()).collect())
        .collect()
}

fn omega_pm<F: Field>(ring: &Arc<Ring<F>>, t: usize) -> PMat<F> {
    let f = ring.field();
    (0..2 * t)
        .map(|i| {
            (0..2 * t)
                .map(|j| {
                    if i % 2 == 0 && j == i + 1 {
                        Polynomial::one(ring)
                    } else if i % 2 == 1 && j + 1 == i {
                        Polynomial::constant(ring, f.neg(&f.one()))
                    } else {
                        Polynomial::zero(ring)
                    }
                })
                .collect()
        })
        .collect()
}

fn var_matrix<F: Field>(
    ring: &Arc<Ring<F>>,
    prefix: &str,
    rows: usize,
    cols: usize,
) -> Result<PMat<F>> {
    (1..=rows)
        .map(|i| {
            (1..=cols)
                .map(|j| Polynomial::var_named(ring, &format!("{prefix}_{i}_{j}")))
                .collect()
        })
        .collect()
}

fn names(prefix: &str, rows: usize, cols: usize) -> Vec<String> {
    (1..=rows)
        .flat_map(|i| (1..=cols).map(move |j| format!("{prefix}_{i}_{j}")))
        .collect()
}

/// Result of comparing both sides of a localization identity after
/// saturating by the chart unit.
struct SaturationOutcome {
    ideal_equal: bool,
    radical_equal: bool,
    witness: Option<String>,
}

/// Eliminates the inverse variable `w` (index 0) from `lhs + (1 − w·u)` and
/// `rhs + (1 − w·u)` and compares the results.
fn compare_saturations<F: Field>(
    ring: &Arc<Ring<F>>,
    lhs: Vec<Polynomial<F>>,
    rhs: Vec<Polynomial<F>>,
    unit: &Polynomial<F>,
) -> Result<SaturationOutcome> {
    let w = Polynomial::var(ring, 0);
    let rab = Polynomial::one(ring).sub(&w.mul(unit));
    let name = ring.vars()[0].clone();
    let mut l = lhs;
    l.push(rab.clone());
    let mut r = rhs;
    r.push(rab);
    let a = Ideal::new(ring, l)?.eliminate(&[&name])?;
    let b = Ideal::new(ring, r)?.eliminate(&[&name])?;
    let ideal_equal = a.equals(&b)?;
    let cmp = a.radical_equal(&b)?;
    Ok(SaturationOutcome {
        ideal_equal,
        radical_equal: cmp.equal,
        witness: cmp.witness.map(|(p, d)| format!("{p} ({d:?})")),
    })
}

/// Rank at a random point (with `w = 1/y11`) of the Jacobian of `funcs` with
/// respect to the non-`w` variables, using the chain rule through `w`.
fn jacobian_rank<F: Field>(
    ring: &Arc<Ring<F>>,
    funcs: &[Polynomial<F>],
    pivot: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<usize>> {
    let field = ring.field();
    let nv = ring.nvars();
    let partials: Vec<Vec<Polynomial<F>>> = funcs
        .iter()
        .map(|f| (0..nv).map(|v| f.derivative(v)).collect())
        .collect();
    let mut best = None;
    for _ in 0..5 {
        let mut pt: Vec<F::Elem> = (0..nv).map(|_| field.random(rng)).collect();
        let Some(winv) = field.inv(&pt[pivot]) else {
            continue;
        };
        pt[0] = winv.clone();
        let w2 = field.mul(&winv, &winv);
        let jac = Matrix::from_fn(field, funcs.len(), nv - 1, |k, c| {
            let v = c + 1;
            let mut d = partials[k][v].eval(&pt);
            if v == pivot {
                let dw = partials[k][0].eval(&pt);
                d = field.sub(&d, &field.mul(&w2, &dw));
            }
            d
        });
        let r = jac.rank();
        best = Some(best.map_or(r, |b: usize| b.max(r)));
        if r == funcs.len().min(nv - 1) {
            break;
        }
    }
    Ok(best)
}

fn localization_report(
    name: &str,
    sat: SaturationOutcome,
    rank: Option<usize>,
    expected_rank: usize,
    start: Instant,
) -> Result<CheckReport> {
    let rank =
        rank.ok_or_else(|| Error::ConstructionDegenerate("every sample point had y11 = 0".into()))?;
    let pass = sat.ideal_equal && sat.radical_equal && rank == expected_rank;
    let mut rep = CheckReport::new(name, pass).with_detail(format!(
        "saturations equal: {}; radicals equal: {}; jacobian rank {rank}/{expected_rank}",
        sat.ideal_equal, sat.radical_equal
    ));
    if let Some(w) = sat.witness {
        rep = rep.with_witness(w);
    }
    Ok(rep.timed(start))
}

fn strict_upper<F: Field>(m: &PMat<F>) -> Vec<Polynomial<F>> {
    let n = m.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| m[i][j].clone())
        .collect()
}

/// After inverting y11, 𝔓 is the Pfaffian nullcone of a smaller matrix Y′
/// plus the n − 1 elements f₂..fₙ of the first row of YᵗΩY.
///
/// Y′ and the fⱼ come from a symplectic change of basis g (with entries in
/// S[1/y11]) moving the first column of Y to e₁.
pub fn check_localization_pfaffian<F: Field>(
    field: F,
    t: usize,
    n: usize,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    if t == 0 || n == 0 {
        return Err(Error::InvalidParams("t and n must be positive".into()));
    }
    let mut vars = vec!["w".to_string()];
    vars.extend(names("y", 2 * t, n));
    let ring = Ring::new(field.clone(), vars, MonomialOrder::Grevlex)?;
    let y = var_matrix(&ring, "y", 2 * t, n)?;
    let w = Polynomial::var(&ring, 0);
    let om = omega_pm(&ring, t);
    let d = 2 * t;
    let v1: Vec<Polynomial<F>> = (0..d).map(|i| y[i][0].clone()).collect();

    // h: symplectic with first column v1
    let mut h: PMat<F> = vec![vec![Polynomial::zero(&ring); d]; d];
    for i in 0..d {
        h[i][0] = v1[i].clone();
    }
    h[1][1] = w.clone();
    for k in 2..d {
        let omega_ek_v1 = if k % 2 == 0 {
            v1[k + 1].clone()
        } else {
            v1[k - 1].neg()
        };
        h[k][k] = Polynomial::one(&ring);
        h[1][k] = omega_ek_v1.mul(&w);
    }
    // g = h⁻¹ = −Ω hᵗ Ω
    let g = pm_mul(
        &ring,
        &pm_mul(&ring, &om, &pm_transpose(&h, d, d), d, d),
        &om,
        d,
        d,
    );
    let g: PMat<F> = g
        .into_iter()
        .map(|row| row.into_iter().map(|p| p.neg()).collect())
        .collect();
    let gy = pm_mul(&ring, &g, &y, d, n);

    let fs: Vec<Polynomial<F>> = (1..n).map(|j| gy[1][j].clone()).collect();
    let yp: PMat<F> = (2..d)
        .map(|i| (1..n).map(|j| gy[i][j].clone()).collect())
        .collect();
    let small = if t > 1 {
        let ypt = pm_transpose(&yp, d - 2, n - 1);
        let prod = pm_mul(
            &ring,
            &pm_mul(&ring, &ypt, &omega_pm(&ring, t - 1), d - 2, d - 2),
            &yp,
            d - 2,
            n - 1,
        );
        strict_upper(&prod)
    } else {
        Vec::new()
    };

    let nc = Nullcone::build(field, FamilyParams::pfaffian(t, n))?;
    let lhs: Vec<Polynomial<F>> = nc
        .ideal
        .generators()
        .iter()
        .map(|p| p.embed_by_name(&ring))
        .collect::<Result<_>>()?;
    let mut rhs = small;
    rhs.extend(fs.iter().cloned());
    let y11 = y[0][0].clone();
    let sat = compare_saturations(&ring, lhs, rhs, &y11)?;

    let mut funcs = v1.clone();
    funcs.extend((1..n).map(|j| gy[0][j].clone()));
    funcs.extend(fs);
    funcs.extend(yp.into_iter().flatten());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = jacobian_rank(&ring, &funcs, 1, &mut rng)?;
    localization_report("localization-pfaffian", sat, rank, 2 * t * n, start)
}

/// After inverting y11, I₁(YZ) is I₁(Y′Z′) plus the first row f₁..fₙ of YZ,
/// where Y′ is the Schur complement of y11 in Y and Z′ drops the first row of Z.
pub fn check_localization_generic<F: Field>(
    field: F,
    m: usize,
    t: usize,
    n: usize,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    if m == 0 || t == 0 || n == 0 {
        return Err(Error::InvalidParams("m, t, n must be positive".into()));
    }
    let mut vars = vec!["w".to_string()];
    vars.extend(names("y", m, t));
    vars.extend(names("z", t, n));
    let ring = Ring::new(field.clone(), vars, MonomialOrder::Grevlex)?;
    let y = var_matrix(&ring, "y", m, t)?;
    let z = var_matrix(&ring, "z", t, n)?;
    let w = Polynomial::var(&ring, 0);

    let yz = pm_mul(&ring, &y, &z, t, n);
    let fs: Vec<Polynomial<F>> = yz[0].clone();
    let yp: PMat<F> = (1..m)
        .map(|i| {
            (1..t)
                .map(|k| y[i][k].sub(&y[i][0].mul(&y[0][k]).mul(&w)))
                .collect()
        })
        .collect();
    let zp: PMat<F> = z[1..].to_vec();
    let ypzp = pm_mul(&ring, &yp, &zp, t - 1, n);

    let lhs: Vec<Polynomial<F>> = yz.iter().flatten().cloned().collect();
    let mut rhs: Vec<Polynomial<F>> = ypzp.into_iter().flatten().collect();
    rhs.extend(fs.iter().cloned());
    let sat = compare_saturations(&ring, lhs, rhs, &y[0][0])?;

    let mut funcs: Vec<Polynomial<F>> = (0..m).map(|i| y[i][0].clone()).collect();
    funcs.extend((1..t).map(|k| y[0][k].clone()));
    funcs.extend(yp.into_iter().flatten());
    funcs.extend(fs);
    funcs.extend(zp.into_iter().flatten());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = jacobian_rank(&ring, &funcs, 1, &mut rng)?;
    localization_report("localization-generic", sat, rank, (m + n) * t, start)
}

/// Generator count of the chart ideal: all of 𝔅 when n < t, else the first
/// row of YᵗY plus ℓ = C(n,2) − C(n+2−t,2) combinations.
pub fn symmetric_chart_count(t: usize, n: usize) -> usize {
    let (t, n) = (t as i64, n as i64);
    if n < t {
        binom(n + 1, 2) as usize
    } else {
        (n + binom(n, 2) - binom(n + 2 - t, 2)) as usize
    }
}

/// In the chart where the first row of Y is (1, 0, …, 0), the entries of the
/// first row of YᵗY and ℓ random combinations of the rest agree with 𝔅 up to
/// radical.
pub fn check_symmetric_localization<F: Field>(
    field: F,
    t: usize,
    n: usize,
    seed: u64,
    retries: usize,
) -> Result<CheckReport> {
    let start = Instant::now();
    if t < 2 {
        return Err(Error::Precondition(
            "the symmetric chart needs t >= 2".into(),
        ));
    }
    if field.characteristic() == 2 {
        return Err(Error::Precondition("characteristic two".into()));
    }
    let ring = Ring::new(
        field.clone(),
        names("y", t, n).into_iter().skip(n).collect(),
        MonomialOrder::Grevlex,
    )?;
    let y: PMat<F> = (0..t)
        .map(|i| {
            (0..n)
                .map(|j| match i {
                    0 if j == 0 => Polynomial::one(&ring),
                    0 => Polynomial::zero(&ring),
                    _ => Polynomial::var_named(&ring, &format!("y_{}_{}", i + 1, j + 1)).unwrap(),
                })
                .collect()
        })
        .collect();
    let yty = pm_mul(&ring, &pm_transpose(&y, t, n), &y, t, n);
    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let b = Ideal::new(
        &ring,
        upper.iter().map(|&(i, j)| yty[i][j].clone()).collect(),
    )?;
    let count = symmetric_chart_count(t, n);

    let first_row: Vec<Polynomial<F>> = (0..n).map(|j| yty[0][j].clone()).collect();
    let block: Vec<Polynomial<F>> = upper
        .iter()
        .filter(|(i, _)| *i >= 1)
        .map(|&(i, j)| yty[i][j].clone())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt in 1..=retries.max(1) {
        let gens = if n < t {
            b.generators().to_vec()
        } else {
            let ell = count - n;
            let mut gens = first_row.clone();
            for _ in 0..ell {
                let mut acc = Polynomial::zero(&ring);
                for e in &block {
                    acc = acc.add(&e.scale(&field.random(&mut rng)));
                }
                gens.push(acc);
            }
            gens
        };
        let c = Ideal::new(&ring, gens)?;
        let cmp = c.radical_equal(&b)?;
        if cmp.equal {
            return Ok(CheckReport::new("localization-symmetric", true)
                .with_detail(format!("chart ideal with {count} generators agrees with the nullcone up to radical (attempt {attempt})"))
                .timed(start));
        }
        last = cmp.witness;
        if n < t {
            break;
        }
    }
    let w = last
        .map(|(p, d)| format!("{p} ({d:?})"))
        .unwrap_or_default();
    Ok(CheckReport::new("localization-symmetric", false)
        .with_witness(w)
        .with_detail(format!(
            "no draw of {count} generators matched after {} attempts",
            retries.max(1)
        ))
        .timed(start))
}

/// For Y = [[y11, 0], [v, A]] (n×n): det(YᵗY) = y11²·det(AᵗA).
pub fn check_det_identity<F: Field>(field: F, n: usize) -> Result<CheckReport> {
    let start = Instant::now();
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    let ring = Ring::new(field, names("y", n, n), MonomialOrder::Grevlex)?;
    let y: PMat<F> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == 0 && j > 0 {
                        Polynomial::zero(&ring)
                    } else {
                        Polynomial::var_named(&ring, &format!("y_{}_{}", i + 1, j + 1)).unwrap()
                    }
                })
                .collect()
        })
        .collect();
    let det = |m: &PMat<F>| -> Result<Polynomial<F>> {
        if m.is_empty() {
            return Ok(Polynomial::one(&ring));
        }
        let k = m.len();
        crate::nullcones::PolyMatrix::from_fn(k, k, |i, j| m[i][j].clone()).determinant()
    };
    let lhs = det(&pm_mul(&ring, &pm_transpose(&y, n, n), &y, n, n))?;
    let a: PMat<F> = (1..n)
        .map(|i| (1..n).map(|j| y[i][j].clone()).collect())
        .collect();
    let ata = pm_mul(&ring, &pm_transpose(&a, n - 1, n - 1), &a, n - 1, n - 1);
    let y11 = y[0][0].clone();
    let rhs = y11.mul(&y11).mul(&det(&ata)?);
    let diff = lhs.sub(&rhs);
    let mut rep = CheckReport::new("det-identity", diff.is_zero())
        .with_detail(format!("n = {n}, det(YtY) has {} terms", lhs.len()));
    if !diff.is_zero() {
        rep = rep.with_witness(diff.to_string());
    }
    Ok(rep.timed(start))
}

/// Over 𝔽₂ the radical of 𝔅 (t = 2) is generated by the n linear forms
/// y_1_j + y_2_j. Over other fields the same comparison fails.
pub fn check_char2_example<F: Field>(field: F, n: usize) -> Result<CheckReport> {
    let start = Instant::now();
    let nc = Nullcone::build(field, FamilyParams::symmetric(2, n))?;
    let lin: Vec<Polynomial<F>> = (1..=n)
        .map(|j| {
            let a = Polynomial::var_named(&nc.ring, &format!("y_1_{j}"))?;
            let b = Polynomial::var_named(&nc.ring, &format!("y_2_{j}"))?;
            Ok(a.add(&b))
        })
        .collect::<Result<_>>()?;
    let lin = Ideal::new(&nc.ring, lin)?;
    let cmp = nc.ideal.radical_equal(&lin)?;
    let mut rep = CheckReport::new("char2-linear-forms", cmp.equal).with_detail(format!(
        "characteristic {}, n = {n}",
        nc.ring.field().characteristic()
    ));
    if let Some((w, d)) = cmp.witness {
        rep = rep.with_witness(format!("{w} ({d:?})"));
    }
    Ok(rep.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{PrimeField, Rationals};

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn char2_example() {
        assert!(check_char2_example(fp(2), 2).unwrap().pass);
        assert!(check_char2_example(fp(2), 3).unwrap().pass);
        let r = check_char2_example(fp(3), 2).unwrap();
        assert!(!r.pass);
        assert!(r.witness.is_some());
    }

    #[test]
    fn det_identity_small() {
        for n in 1..=3 {
            assert!(
                check_det_identity(Rationals, n).unwrap().pass,
                "n = {n}"
            );
        }
    }

    #[test]
    fn pfaffian_localizations() {
        let r = check_localization_pfaffian(fp(32003), 1, 3, 0).unwrap();
        assert!(r.pass, "{r:?}");
        let r = check_localization_pfaffian(fp(32003), 2, 2, 0).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn generic_localizations() {
        let r = check_localization_generic(fp(32003), 2, 2, 2, 0).unwrap();
        assert!(r.pass, "{r:?}");
        let r = check_localization_generic(fp(32003), 2, 1, 2, 0).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn symmetric_chart() {
        assert_eq!(symmetric_chart_count(2, 2), 2);
        assert_eq!(symmetric_chart_count(3, 3), 5);
        assert_eq!(symmetric_chart_count(2, 3), 3);
        let r = check_symmetric_localization(fp(32009), 2, 2, 0, 20).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(check_symmetric_localization(fp(32009), 1, 2, 0, 20).is_err());
    }
}
