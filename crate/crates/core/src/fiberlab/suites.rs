//! Seeded property suites over the constructions in this module.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::charts::{chart_trivializations, random_sample, ChartFamily, ChartParams, CoverKind};
use super::congruence::alt_sqrt_section;
use super::frames::symplectic_complete;
use super::sample;
use super::unitary::{random_unitary_symmetric, unitary_sym_sqrt, Tolerance};
use crate::certificates::CheckReport;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polycore::Field;

const ATTEMPTS_PER_SAMPLE: usize = 8;

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs forward-then-inverse round trips until `samples` have succeeded.
///
/// Samples whose square roots do not exist in the field are skipped on the
/// étale families and counted in the detail line.
pub fn chart_suite<F: Field>(
    field: &F,
    family: ChartFamily,
    params: ChartParams,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    params.validate(family)?;
    let start = Instant::now();
    let name = format!("chart {family}");
    let (mut done, mut skipped) = (0, 0);
    for index in 0..samples * ATTEMPTS_PER_SAMPLE {
        if done == samples {
            break;
        }
        let mut rng = rng_for(seed, index);
        let s = random_sample(field, family, params, &mut rng)?;
        match chart_trivializations(family, params, &s) {
            Ok(rt) if rt.exact && rt.fiber_ok => done += 1,
            Ok(rt) => {
                let w = format!(
                    "sample {index} on chart {}: exact={} fiber_ok={}",
                    rt.chart, rt.exact, rt.fiber_ok
                );
                return Ok(CheckReport::new(name, false).with_witness(w).timed(start));
            }
            Err(Error::Nonresidue(_)) if family.cover() == CoverKind::Etale => skipped += 1,
            Err(e) => {
                let w = format!("sample {index}: {e}");
                return Ok(CheckReport::new(name, false).with_witness(w).timed(start));
            }
        }
    }
    let detail = format!("{done} exact round trips, {skipped} skipped for nonresidues");
    Ok(CheckReport::new(name, done == samples)
        .with_detail(detail)
        .timed(start))
}

/// Completes the first 2k columns of random symplectic matrices and checks
/// MᵗΩM = Ω together with the extension property.
pub fn symplectic_suite<F: Field>(
    field: &F,
    t: usize,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    if k == 0 || k >= t {
        return Err(Error::InvalidParams(format!(
            "need 0 < k < t, got t = {t}, k = {k}"
        )));
    }
    let start = Instant::now();
    let name = format!("symplectic_complete t={t} k={k}");
    let om = Matrix::omega(field, t);
    for index in 0..samples {
        let mut rng = rng_for(seed, index);
        let partial = sample::symplectic(field, t, &mut rng).columns(0..2 * k);
        let outcome = symplectic_complete(&partial)
            .map(|m| m.columns(0..2 * k) == partial && m.transpose().mul(&om).mul(&m) == om);
        match outcome {
            Ok(true) => {}
            Ok(false) => {
                return Ok(CheckReport::new(name, false)
                    .with_witness(format!("sample {index}: identity fails"))
                    .timed(start))
            }
            Err(e) => {
                return Ok(CheckReport::new(name, false)
                    .with_witness(format!("sample {index}: {e}"))
                    .timed(start))
            }
        }
    }
    Ok(CheckReport::new(name, true)
        .with_detail(format!("{samples} exact completions"))
        .timed(start))
}

/// Random invertible alternating 2k×2k matrix.
pub fn random_invertible_alternating<F: Field, R: rand::Rng + ?Sized>(
    field: &F,
    k: usize,
    rng: &mut R,
) -> Matrix<F> {
    loop {
        let b = Matrix::random(field, 2 * k, 2 * k, rng);
        let a = b.sub(&b.transpose());
        if !field.is_zero(&a.determinant()) {
            return a;
        }
    }
}

/// Checks MᵗΩM = A for the section M of random invertible alternating A.
pub fn alt_sqrt_suite<F: Field>(
    field: &F,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    let start = Instant::now();
    let name = format!("alt_sqrt_section k={k}");
    let om = Matrix::omega(field, k);
    for index in 0..samples {
        let mut rng = rng_for(seed, index);
        let a = random_invertible_alternating(field, k, &mut rng);
        let ok = alt_sqrt_section(&a).map(|m| m.transpose().mul(&om).mul(&m) == a);
        match ok {
            Ok(true) => {}
            Ok(false) => {
                return Ok(CheckReport::new(name, false)
                    .with_witness(format!("sample {index}: MtOM != A"))
                    .timed(start))
            }
            Err(e) => {
                return Ok(CheckReport::new(name, false)
                    .with_witness(format!("sample {index}: {e}"))
                    .timed(start))
            }
        }
    }
    Ok(CheckReport::new(name, true)
        .with_detail(format!("{samples} exact sections"))
        .timed(start))
}

/// Square roots of random unitary symmetric k×k matrices, all residuals
/// below `tol`. Clustered spectra are skipped.
pub fn unitary_suite(k: usize, samples: usize, seed: u64, tol: Tolerance) -> Result<CheckReport> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    let start = Instant::now();
    let name = format!("unitary_sym_sqrt k={k}");
    let (mut done, mut skipped, mut worst) = (0, 0, 0.0_f64);
    for index in 0..samples * ATTEMPTS_PER_SAMPLE {
        if done == samples {
            break;
        }
        let mut rng = rng_for(seed, index);
        let u = random_unitary_symmetric(k, &mut rng);
        match unitary_sym_sqrt(&u, tol) {
            Ok(r) => {
                worst = worst
                    .max(r.square_residual)
                    .max(r.symmetry_residual)
                    .max(r.unitarity_residual);
                done += 1;
            }
            Err(Error::SpectrumClustered(_)) => skipped += 1,
            Err(e) => {
                return Ok(CheckReport::new(name, false)
                    .with_witness(format!("sample {index}: {e}"))
                    .timed(start))
            }
        }
    }
    let detail =
        format!("{done} roots, max residual {worst:.3e}, {skipped} clustered spectra skipped");
    Ok(CheckReport::new(name, done == samples)
        .with_detail(detail)
        .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{PrimeField, Rationals};

    #[test]
    fn small_suites_pass() {
        let f = PrimeField::new(101).unwrap();
        for fam in ChartFamily::ALL {
            let r = chart_suite(&f, fam, fam.default_params(), 20, 3).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(
            symplectic_suite(&PrimeField::new(7).unwrap(), 3, 1, 20, 1)
                .unwrap()
                .pass
        );
        assert!(symplectic_suite(&Rationals, 2, 1, 10, 1).unwrap().pass);
        assert!(alt_sqrt_suite(&f, 2, 20, 1).unwrap().pass);
        assert!(unitary_suite(3, 10, 1, Tolerance::default()).unwrap().pass);
    }

    #[test]
    fn invalid_sizes_are_rejected() {
        let f = PrimeField::new(101).unwrap();
        assert!(symplectic_suite(&f, 2, 2, 1, 0).is_err());
        assert!(alt_sqrt_suite(&f, 0, 1, 0).is_err());
    }
}
