use serde::Serialize;

use super::{Family, FamilyParams};

/// Binomial coefficient with `binom(i, j) = 0` whenever `i < j` (also for negative `i`).
pub fn binom(i: i64, j: i64) -> i64 {
    if j < 0 || i < j {
        return 0;
    }
    let j = j.min(i - j);
    (0..j).fold(1i64, |acc, k| acc * (i - k) / (k + 1))
}

/// Closed-form numerics for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Formulas {
    pub height: i64,
    pub ara: i64,
    pub invariant_ring_dim: i64,
    pub stci: bool,
}

impl Formulas {
    pub fn of(p: &FamilyParams) -> Self {
        let ara = ara(p);
        Formulas {
            height: height(p),
            ara,
            invariant_ring_dim: ara,
            stci: stci(p),
        }
    }
}

fn height(p: &FamilyParams) -> i64 {
    let (t, n) = (p.t as i64, p.n as i64);
    match p.family {
        Family::Pfaffian => {
            if n <= t + 1 {
                binom(n, 2)
            } else {
                n * t - binom(t + 1, 2)
            }
        }
        Family::Generic => {
            let m = p.m() as i64;
            (0..=t)
                .map(|i| generic_component_height(m, t, n, i.min(m), (t - i).min(n)))
                .min()
                .unwrap()
        }
        Family::Symmetric => {
            if 2 * n <= t + 1 {
                binom(n + 1, 2)
            } else {
                let s = t / 2;
                if t % 2 == 0 {
                    n * s - binom(s, 2)
                } else {
                    n * s + n - binom(s + 1, 2)
                }
            }
        }
    }
}

/// Height of 𝔭ᵢⱼ for an m×t by t×n pair.
pub fn generic_component_height(m: i64, t: i64, n: i64, i: i64, j: i64) -> i64 {
    (m - i) * (t - i) + (n - j) * (t - j) + i * j
}

fn ara(p: &FamilyParams) -> i64 {
    let (t, n) = (p.t as i64, p.n as i64);
    match p.family {
        Family::Pfaffian => binom(n, 2) - binom(n - 2 * t, 2),
        Family::Generic => {
            let m = p.m() as i64;
            if t < m.min(n) {
                m * t + n * t - t * t
            } else {
                m * n
            }
        }
        Family::Symmetric => binom(n + 1, 2) - binom(n + 1 - t, 2),
    }
}

fn stci(p: &FamilyParams) -> bool {
    let (t, n) = (p.t, p.n);
    match p.family {
        Family::Pfaffian => n <= t + 1,
        Family::Generic => p.m() + n <= t + 1,
        Family::Symmetric => t == 1 || 2 * n <= t + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(1, 2), 0);
        assert_eq!(binom(-3, 2), 0);
        assert_eq!(binom(4, 0), 1);
        assert_eq!(binom(0, 0), 1);
    }

    #[test]
    fn documented_values() {
        let f = FamilyParams::pfaffian(1, 3).formulas();
        assert_eq!((f.ara, f.height), (3, 2));
        assert_eq!(FamilyParams::generic(2, 1, 2).formulas().ara, 3);
        let f = FamilyParams::symmetric(2, 2).formulas();
        assert_eq!((f.ara, f.height), (3, 2));
        assert_eq!(FamilyParams::generic(2, 2, 2).formulas().height, 3);
        assert_eq!(generic_component_height(2, 2, 2, 1, 1), 3);
    }

    #[test]
    fn ara_dominates_height_with_equality_exactly_on_stci() {
        for t in 1..=6 {
            for n in 1..=9 {
                let mut grid = vec![FamilyParams::pfaffian(t, n), FamilyParams::symmetric(t, n)];
                grid.extend((1..=7).map(|m| FamilyParams::generic(m, t, n)));
                for p in grid {
                    let f = p.formulas();
                    assert!(
                        f.ara >= f.height,
                        "{p}: ara {} < height {}",
                        f.ara,
                        f.height
                    );
                    assert_eq!(f.ara == f.height, f.stci, "{p}: {f:?}");
                }
            }
        }
    }
}
