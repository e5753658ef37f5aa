use std::time::Instant;

use super::CheckReport;
use crate::error::{Error, Result};
use crate::nullcones::{FamilyParams, Nullcone};
use crate::polycore::{Field, Ideal, RadicalComparison};

fn report<F: Field>(
    name: &str,
    cmp: RadicalComparison<F>,
    detail: String,
    start: Instant,
) -> CheckReport {
    let mut rep = CheckReport::new(name, cmp.equal).with_detail(detail);
    if let Some((w, d)) = cmp.witness {
        rep = rep.with_witness(format!("{w} ({d:?})"));
    }
    rep.timed(start)
}

fn generic(field: impl Field, m: usize, t: usize, n: usize) -> Result<Nullcone<impl Field>> {
    Nullcone::build(field, FamilyParams::generic(m, t, n))
}

/// 𝔞_ℓ, the intersection of 𝔭_{i,t−i} for i = 0..=ℓ.
fn a_ell<F: Field>(nc: &Nullcone<F>, ell: usize) -> Result<Ideal<F>> {
    let t = nc.params.t;
    let parts = (0..=ell)
        .map(|i| nc.variety_of_complexes(i, t - i))
        .collect::<Result<Vec<_>>>()?;
    Ideal::intersect_all(&parts)
}

/// I₁(YZ) agrees up to radical with the intersection of the 𝔭ᵢⱼ, i + j = t.
pub fn check_intersection<F: Field>(field: F, m: usize, t: usize, n: usize) -> Result<CheckReport> {
    let start = Instant::now();
    let nc = generic(field, m, t, n)?;
    let cmp = nc.ideal.radical_equal(&a_ell(&nc, t)?)?;
    Ok(report(
        "intersection",
        cmp,
        format!("(m, t, n) = ({m}, {t}, {n})"),
        start,
    ))
}

/// 𝔭_{ℓ,t−ℓ−1} = 𝔞_ℓ + 𝔭_{ℓ+1,t−ℓ−1} up to radical.
pub fn check_intersect_pij<F: Field>(
    field: F,
    m: usize,
    t: usize,
    n: usize,
    ell: usize,
) -> Result<CheckReport> {
    let start = Instant::now();
    if ell + 1 > t {
        return Err(Error::InvalidParams(format!(
            "need ell < t; got ell = {ell}, t = {t}"
        )));
    }
    let nc = generic(field, m, t, n)?;
    let lhs = nc.variety_of_complexes(ell, t - ell - 1)?;
    let rhs = a_ell(&nc, ell)?.add(&nc.variety_of_complexes(ell + 1, t - ell - 1)?)?;
    let cmp = lhs.radical_equal(&rhs)?;
    Ok(report(
        "intersect-pij",
        cmp,
        format!("(m, t, n) = ({m}, {t}, {n}), ell = {ell}"),
        start,
    ))
}

/// When t = 1: I₁(YZ) agrees up to radical with I₁(Y) ∩ I₁(Z).
pub fn check_t1_decomposition<F: Field>(field: F, m: usize, n: usize) -> Result<CheckReport> {
    let start = Instant::now();
    let nc = generic(field, m, 1, n)?;
    let both = nc.entries_of_y()?.intersect(&nc.entries_of_z()?)?;
    let cmp = nc.ideal.radical_equal(&both)?;
    Ok(report(
        "t1-decomposition",
        cmp,
        format!("(m, n) = ({m}, {n})"),
        start,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::Rationals;

    #[test]
    fn two_by_two_identities() {
        assert!(check_intersection(Rationals, 2, 2, 2).unwrap().pass);
        assert!(check_intersection(Rationals, 2, 1, 2).unwrap().pass);
        for ell in 0..2 {
            assert!(
                check_intersect_pij(Rationals, 2, 2, 2, ell).unwrap().pass,
                "ell = {ell}"
            );
        }
        assert!(check_t1_decomposition(Rationals, 2, 2).unwrap().pass);
        assert!(check_intersect_pij(Rationals, 2, 2, 2, 2).is_err());
    }

    #[test]
    fn a_single_component_is_not_enough() {
        let nc = generic(Rationals, 2, 1, 2).unwrap();
        let cmp = nc.ideal.radical_equal(&nc.entries_of_y().unwrap()).unwrap();
        assert!(!cmp.equal);
        assert!(cmp.witness.is_some());
    }
}
