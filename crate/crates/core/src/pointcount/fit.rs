use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::strata::{big_as_number, enumerate_with_budget, Space, StratumParams, StratumSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FitSample {
    pub q: u64,
    #[serde(serialize_with = "big_as_number")]
    pub count: BigUint,
}

/// Interpolation result. `coefficients` are in ascending degree and present
/// only when a fit with integer coefficients reproduced every sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyFit {
    pub space: Space,
    pub params: StratumParams,
    pub degree_bound: usize,
    pub samples: Vec<FitSample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    pub no_fit: bool,
}

impl PolyFit {
    /// Value of the fitted polynomial at q.
    pub fn eval(&self, q: u64) -> Option<BigInt> {
        let coeffs = self.coefficients.as_ref()?;
        let q = BigInt::from(q);
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &q + c.parse::<BigInt>().ok()?;
        }
        Some(acc)
    }
}

/// Coefficients (ascending) of the Lagrange interpolant through `points`.
fn interpolate(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = points.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * &scale;
        }
    }
    out
}

fn render(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (d, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let coef = if mag.is_one() && d > 0 {
            String::new()
        } else {
            mag.to_string()
        };
        out.push_str(&match d {
            0 => coef,
            1 => format!("{coef}q"),
            _ => format!("{coef}q^{d}"),
        });
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Fits an integer polynomial of degree ≤ `degree` (default: the ambient
/// dimension) to enumerated counts at the given primes.
///
/// The interpolant is built from the first degree+1 samples and must have
/// integer coefficients and reproduce every later sample.
pub fn poly_fit(
    space: Space,
    params: StratumParams,
    primes: &[u64],
    degree: Option<usize>,
    budget: u128,
) -> Result<PolyFit> {
    let bound = degree.unwrap_or_else(|| StratumSpec::new(space, params, 2).ambient_dim());
    if primes.len() < bound + 1 {
        return Err(Error::InvalidParams(format!(
            "degree bound {bound} needs at least {} primes",
            bound + 1
        )));
    }
    let mut samples = Vec::with_capacity(primes.len());
    for &q in primes {
        let r = enumerate_with_budget(&StratumSpec::new(space, params, q), budget)?;
        samples.push(FitSample { q, count: r.count });
    }
    let rat = |s: &FitSample| {
        (
            BigRational::from_integer(BigInt::from(s.q)),
            BigRational::from_integer(BigInt::from(s.count.clone())),
        )
    };
    let points: Vec<_> = samples[..=bound].iter().map(rat).collect();
    let coeffs = interpolate(&points);
    let integral = coeffs.iter().all(|c| c.is_integer());
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.to_integer()).collect();
    let mut fit = PolyFit {
        space,
        params,
        degree_bound: bound,
        samples,
        coefficients: None,
        polynomial: None,
        no_fit: true,
    };
    if integral {
        let mut last = ints.len();
        while last > 1 && ints[last - 1].is_zero() {
            last -= 1;
        }
        let trimmed = &ints[..last];
        fit.coefficients = Some(trimmed.iter().map(|c| c.to_string()).collect());
        let reproduces = fit
            .samples
            .iter()
            .all(|s| fit.eval(s.q) == Some(BigInt::from(s.count.clone())));
        if reproduces {
            fit.polynomial = Some(render(trimmed));
            fit.no_fit = false;
        } else {
            fit.coefficients = None;
        }
    }
    Ok(fit)
}

/// Degree of the fitted polynomial, if any.
pub fn fitted_degree(fit: &PolyFit) -> Option<usize> {
    fit.coefficients.as_ref().map(|c| c.len().saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcount::DEFAULT_BUDGET;

    #[test]
    fn nullcone_two_by_two_is_polynomial() {
        let p = StratumParams::new(0, 1, 2, 0);
        let fit = poly_fit(Space::XAlt, p, &[3, 5, 7, 11], Some(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(fit.polynomial.as_deref(), Some("q^3 + q^2 - q"));
        assert_eq!(fit.eval(3), Some(BigInt::from(33)));
        let fit = poly_fit(Space::XAlt, p, &[3, 5, 7, 11, 13], None, DEFAULT_BUDGET).unwrap();
        assert_eq!(fit.polynomial.as_deref(), Some("q^3 + q^2 - q"));
        assert_eq!(fitted_degree(&fit), Some(3));
    }

    #[test]
    fn alt_two_fits_q_minus_one() {
        let fit = poly_fit(
            Space::Alt,
            StratumParams::new(0, 0, 0, 1),
            &[3, 5, 7],
            None,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(fit.polynomial.as_deref(), Some("q - 1"));
    }

    #[test]
    fn circle_has_no_single_polynomial() {
        let fit = poly_fit(
            Space::O,
            StratumParams::new(0, 2, 0, 1),
            &[3, 5, 7, 11, 13],
            None,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(fit.no_fit);
        assert!(fit.polynomial.is_none());
    }

    #[test]
    fn too_few_primes_is_an_error() {
        assert!(poly_fit(
            Space::Alt,
            StratumParams::new(0, 0, 0, 2),
            &[3, 5],
            None,
            DEFAULT_BUDGET
        )
        .is_err());
    }
}
