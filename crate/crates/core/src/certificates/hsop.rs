use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CheckReport;
use crate::error::{Error, Result};
use crate::nullcones::{FamilyParams, Nullcone, Presentation};
use crate::polycore::{Field, FieldSpec, Ideal, Monomial, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Number of candidate generators; `None` means the arithmetic-rank formula.
    pub count: Option<usize>,
    /// Fresh samples drawn (from the same seeded stream) while the hsop check fails.
    pub retries: usize,
    /// Smallest odd characteristic accepted.
    pub min_prime: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            count: None,
            retries: 20,
            min_prime: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AraCertificate {
    pub params: FamilyParams,
    pub field: FieldSpec,
    pub seed: u64,
    pub ara_formula: i64,
    pub candidate_count: usize,
    pub attempts: usize,
    pub generators_in_r: Vec<String>,
    pub generators_in_s: Vec<String>,
    pub transcript: Vec<CheckReport>,
    pub verified: bool,
}

impl AraCertificate {
    pub fn without_timing(mut self) -> Self {
        self.transcript = self
            .transcript
            .into_iter()
            .map(CheckReport::without_timing)
            .collect();
        self
    }
}

fn check_field<F: Field>(field: &F, min_prime: u64) -> Result<()> {
    match field.characteristic() {
        2 => Err(Error::Precondition(
            "certificates need characteristic other than two; use the char-2 example check instead"
                .into(),
        )),
        0 => Ok(()),
        p if p < min_prime => Err(Error::Precondition(format!(
            "prime {p} is below the minimum {min_prime}"
        ))),
        _ => Ok(()),
    }
}

fn draw<F: Field>(
    pres: &Presentation<F>,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Vec<Polynomial<F>> {
    let field = pres.ring.field();
    let nvars = pres.ring.nvars();
    (0..count)
        .map(|_| {
            let terms: Vec<(Monomial, F::Elem)> = (0..nvars)
                .map(|k| (Monomial::var(nvars, k), field.random(rng)))
                .collect();
            Polynomial::from_terms(&pres.ring, terms)
        })
        .collect()
}

/// `count` random linear combinations of the invariant entries, as
/// polynomials in the presentation ring; deterministic in `seed`.
pub fn sample_hsop<F: Field>(
    field: F,
    params: FamilyParams,
    seed: u64,
    count: Option<usize>,
) -> Result<Vec<Polynomial<F>>> {
    let pres = Presentation::build(field, params)?;
    let count = count.unwrap_or(params.formulas().ara as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(draw(&pres, &mut rng, count))
}

fn hsop_check<F: Field>(pres: &Presentation<F>, cands: &[Polynomial<F>]) -> Result<CheckReport> {
    let start = Instant::now();
    let ideal = pres.defining.add_generators(cands.iter().cloned())?;
    let dim = ideal.krull_dimension()?;
    Ok(CheckReport::new("hsop-check", dim == 0)
        .with_detail(format!("dim K[X]/(defining ideal + candidates) = {dim}"))
        .timed(start))
}

fn transcript<F: Field>(
    nc: &Nullcone<F>,
    pres: &Presentation<F>,
    cands: &[Polynomial<F>],
) -> Result<(Vec<CheckReport>, Vec<Polynomial<F>>)> {
    let mut reports = vec![hsop_check(pres, cands)?];

    let start = Instant::now();
    let images: Vec<Polynomial<F>> = cands.iter().map(|c| pres.map_to_nullcone(nc, c)).collect();
    let mut subset = CheckReport::new("radical-subset", true);
    for img in &images {
        if !nc.ideal.contains(img)? {
            subset = CheckReport::new("radical-subset", false).with_witness(img.to_string());
            break;
        }
    }
    reports.push(subset.timed(start));

    let start = Instant::now();
    let cand_ideal = Ideal::new(&nc.ring, images.clone())?;
    let superset = match cand_ideal.radical_contains(&nc.ideal)? {
        None => CheckReport::new("radical-superset", true),
        Some(w) => CheckReport::new("radical-superset", false)
            .with_witness(w.to_string())
            .with_detail("nullcone generator outside the radical of the candidate ideal"),
    };
    reports.push(superset.timed(start));
    Ok((reports, images))
}

/// Runs all three checks on explicitly supplied candidates (no retries).
pub fn verify_certificate<F: Field>(
    field: F,
    params: FamilyParams,
    seed: u64,
    candidates: &[Polynomial<F>],
) -> Result<AraCertificate> {
    check_field(&field, 3)?;
    let nc = Nullcone::build(field.clone(), params)?;
    let pres = Presentation::build(field.clone(), params)?;
    if let Some(c) = candidates.iter().find(|c| **c.ring() != *pres.ring) {
        return Err(Error::RingMismatch(format!(
            "candidate `{c}` is not in the presentation ring"
        )));
    }
    assemble(&field, params, seed, 1, &nc, &pres, candidates)
}

fn assemble<F: Field>(
    field: &F,
    params: FamilyParams,
    seed: u64,
    attempts: usize,
    nc: &Nullcone<F>,
    pres: &Presentation<F>,
    cands: &[Polynomial<F>],
) -> Result<AraCertificate> {
    let (reports, images) = transcript(nc, pres, cands)?;
    Ok(AraCertificate {
        params,
        field: field.spec(),
        seed,
        ara_formula: params.formulas().ara,
        candidate_count: cands.len(),
        attempts,
        generators_in_r: cands.iter().map(|c| c.to_string()).collect(),
        generators_in_s: images.iter().map(|c| c.to_string()).collect(),
        verified: reports.iter().all(|r| r.pass),
        transcript: reports,
    })
}

/// Samples candidates until the hsop check passes (at most `retries`
/// draws), then records the full verification.
pub fn certify<F: Field>(
    field: F,
    params: FamilyParams,
    seed: u64,
    opts: &CertifyOptions,
) -> Result<AraCertificate> {
    check_field(&field, opts.min_prime)?;
    let nc = Nullcone::build(field.clone(), params)?;
    let pres = Presentation::build(field.clone(), params)?;
    let count = opts.count.unwrap_or(params.formulas().ara as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=opts.retries.max(1) {
        let cands = draw(&pres, &mut rng, count);
        if hsop_check(&pres, &cands)?.pass {
            return assemble(&field, params, seed, attempt, &nc, &pres, &cands);
        }
    }
    Err(Error::RetryExhausted(opts.retries.max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{PrimeField, Rationals};

    #[test]
    fn principal_case_is_a_multiple_of_the_determinant() {
        let params = FamilyParams::pfaffian(1, 2);
        let cands = sample_hsop(Rationals, params, 5, None).unwrap();
        assert_eq!(cands.len(), 1);
        let cert = verify_certificate(Rationals, params, 5, &cands).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.generators_in_s.len(), 1);
    }

    #[test]
    fn pfaffian_one_three_certifies() {
        let cert = certify(
            PrimeField::new(32003).unwrap(),
            FamilyParams::pfaffian(1, 3),
            42,
            &CertifyOptions::default(),
        )
        .unwrap();
        assert!(cert.verified, "{cert:?}");
        assert_eq!(cert.candidate_count, 3);
        assert_eq!(cert.transcript.len(), 3);
    }

    #[test]
    fn too_few_candidates_leave_a_witness() {
        let params = FamilyParams::pfaffian(1, 3);
        let cands = sample_hsop(Rationals, params, 1, Some(2)).unwrap();
        let cert = verify_certificate(Rationals, params, 1, &cands).unwrap();
        assert!(!cert.verified);
        let sup = cert
            .transcript
            .iter()
            .find(|r| r.name == "radical-superset")
            .unwrap();
        assert!(!sup.pass);
        assert!(sup.witness.is_some());
    }

    #[test]
    fn seeds_are_reproducible() {
        let f = PrimeField::new(32003).unwrap();
        let params = FamilyParams::symmetric(2, 2);
        let a = certify(f, params, 7, &CertifyOptions::default())
            .unwrap()
            .without_timing();
        let b = certify(f, params, 7, &CertifyOptions::default())
            .unwrap()
            .without_timing();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(sample_hsop(f, params, 7, None).unwrap().len(), 3);
    }

    #[test]
    fn characteristic_two_is_refused() {
        let err = certify(
            PrimeField::new(2).unwrap(),
            FamilyParams::symmetric(2, 2),
            0,
            &CertifyOptions::default(),
        );
        assert!(matches!(err, Err(Error::Precondition(_))));
    }
}
