use num_bigint::BigUint;
use num_traits::Pow;

use super::strata::{Space, StratumParams, StratumSpec};
use crate::error::{Error, Result};

fn pow(q: &BigUint, e: usize) -> BigUint {
    Pow::pow(q, e)
}

fn sp(q: &BigUint, t: usize, k: usize) -> BigUint {
    (0..k).map(|i| sp_first_pair(q, t - i)).product()
}

fn sp_first_pair(q: &BigUint, t: usize) -> BigUint {
    (pow(q, 2 * t) - 1u32) * pow(q, 2 * t - 1)
}

fn alt(q: &BigUint, k: usize) -> BigUint {
    (1..=k)
        .map(|j| (pow(q, 2 * j - 1) - 1u32) * pow(q, 2 * j - 2))
        .product()
}

fn p_first(q: &BigUint, t: usize) -> BigUint {
    (pow(q, t) - 1u32) * pow(q, t - 1)
}

fn p(q: &BigUint, t: usize, k: usize) -> BigUint {
    (1..=k).map(|j| p_first(q, t - j + 1)).product()
}

fn gl(q: &BigUint, m: usize, k: usize) -> BigUint {
    (0..k).map(|i| pow(q, m) - pow(q, i)).product()
}

fn gaussian_binomial(q: &BigUint, n: usize, k: usize) -> BigUint {
    let num: BigUint = (0..k).map(|i| pow(q, n - i) - 1u32).product();
    let den: BigUint = (1..=k).map(|i| pow(q, i) - 1u32).product();
    num / den
}

/// Point count from the bundle recursions, for the spaces that have one.
pub fn closed_count(space: Space, params: StratumParams, q: u64) -> Result<BigUint> {
    StratumSpec::new(space, params, q).validate()?;
    let qb = BigUint::from(q);
    let StratumParams { t, n, m, k } = params;
    Ok(match space {
        Space::Sp => sp(&qb, t, k),
        Space::Alt => alt(&qb, k),
        Space::GL => gl(&qb, m, k),
        Space::P => p(&qb, t, k),
        Space::Gr => gaussian_binomial(&qb, n, k),
        other => return Err(Error::InvalidParams(format!("no closed count for {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn cc(space: Space, m: usize, t: usize, n: usize, k: usize, q: u64) -> u64 {
        u64::try_from(&closed_count(space, StratumParams::new(m, t, n, k), q).unwrap()).unwrap()
    }

    #[test]
    fn recursions_match_hand_values() {
        assert_eq!(cc(Space::Sp, 0, 1, 0, 1, 3), 24);
        assert_eq!(cc(Space::Sp, 0, 2, 0, 2, 2), 720);
        assert_eq!(cc(Space::Alt, 0, 0, 0, 1, 3), 2);
        assert_eq!(cc(Space::Alt, 0, 0, 0, 2, 2), 28);
        assert_eq!(cc(Space::P, 0, 2, 0, 1, 3), 24);
        assert_eq!(cc(Space::GL, 3, 0, 0, 2, 2), 42);
        assert_eq!(cc(Space::Gr, 0, 0, 3, 1, 3), 13);
        assert_eq!(cc(Space::Gr, 0, 0, 4, 2, 2), 35);
        assert!(closed_count(Space::Sp, StratumParams::new(0, 3, 0, 0), 5)
            .unwrap()
            .is_one());
    }

    #[test]
    fn strata_without_recursions_are_rejected() {
        assert!(closed_count(Space::O, StratumParams::new(0, 2, 0, 1), 3).is_err());
    }
}
