use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use super::fp::{Fp, Mat};
use crate::error::{Error, Result};
use crate::polycore::field::is_prime;

/// Default cap on the number of ambient points a single enumeration visits.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    #[serde(rename = "X_alt")]
    XAlt,
    #[serde(rename = "G_alt")]
    GAlt,
    #[serde(rename = "F_alt")]
    FAlt,
    #[serde(rename = "X_gen")]
    XGen,
    #[serde(rename = "G_gen")]
    GGen,
    #[serde(rename = "F_gen")]
    FGen,
    #[serde(rename = "X_sym")]
    XSym,
    #[serde(rename = "G_sym")]
    GSym,
    #[serde(rename = "F_sym")]
    FSym,
    Sp,
    GL,
    P,
    O,
    Sym,
    Alt,
    Gr,
}

impl Space {
    pub const ALL: [Space; 16] = [
        Space::XAlt,
        Space::GAlt,
        Space::FAlt,
        Space::XGen,
        Space::GGen,
        Space::FGen,
        Space::XSym,
        Space::GSym,
        Space::FSym,
        Space::Sp,
        Space::GL,
        Space::P,
        Space::O,
        Space::Sym,
        Space::Alt,
        Space::Gr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Space::XAlt => "X_alt",
            Space::GAlt => "G_alt",
            Space::FAlt => "F_alt",
            Space::XGen => "X_gen",
            Space::GGen => "G_gen",
            Space::FGen => "F_gen",
            Space::XSym => "X_sym",
            Space::GSym => "G_sym",
            Space::FSym => "F_sym",
            Space::Sp => "Sp",
            Space::GL => "GL",
            Space::P => "P",
            Space::O => "O",
            Space::Sym => "Sym",
            Space::Alt => "Alt",
            Space::Gr => "Gr",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Space::ALL
            .into_iter()
            .find(|sp| sp.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown space `{s}`")))
    }
}

/// Size parameters. Each space reads only the entries it needs:
///
/// | space | meaning |
/// |---|---|
/// | `X/G/F_alt` | 2t×n matrices Y, rank YᵗΩY = 2k |
/// | `X/G/F_gen` | pairs (m×t, t×n), rank YZ = k |
/// | `X/G/F_sym` | t×n matrices Y, rank YᵗY = k |
/// | `Sp` | Sp(2t, 2k) |
/// | `GL` | GL(m, k), m×k of rank k |
/// | `P` | P(t, k), pairs (k×t, t×k) with AB = 1 |
/// | `O` | O(t, k), t×k with MᵗM = 1 |
/// | `Sym`, `Alt` | invertible k×k symmetric, 2k×2k alternating |
/// | `Gr` | Gr(k, n), k-planes in n-space |
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumParams {
    pub t: usize,
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl StratumParams {
    pub fn new(m: usize, t: usize, n: usize, k: usize) -> Self {
        StratumParams { t, n, m, k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumSpec {
    pub space: Space,
    pub params: StratumParams,
    pub q: u64,
}

impl StratumSpec {
    pub fn new(space: Space, params: StratumParams, q: u64) -> Self {
        StratumSpec { space, params, q }
    }

    /// Number of free matrix entries the enumeration ranges over.
    pub fn ambient_dim(&self) -> usize {
        let StratumParams { t, n, m, k } = self.params;
        match self.space {
            Space::XAlt | Space::GAlt | Space::FAlt => 2 * t * n,
            Space::XGen | Space::GGen | Space::FGen => t * (m + n),
            Space::XSym | Space::GSym | Space::FSym => t * n,
            Space::Sp => 4 * t * k,
            Space::GL => m * k,
            Space::P => 2 * t * k,
            Space::O => t * k,
            Space::Sym => k * (k + 1) / 2,
            Space::Alt => k * (2 * k).saturating_sub(1),
            Space::Gr => k * n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.q) {
            return Err(Error::InvalidParams(format!("q = {} is not prime", self.q)));
        }
        let StratumParams { t, n, m, k } = self.params;
        let ok = match self.space {
            Space::XAlt | Space::GAlt | Space::FAlt => k <= t && 2 * t <= n,
            Space::XGen | Space::GGen | Space::FGen => k <= m.min(t).min(n),
            Space::XSym | Space::GSym | Space::FSym => k <= t.min(n),
            Space::Sp | Space::P | Space::O => k <= t,
            Space::GL => k <= m,
            Space::Sym | Space::Alt => true,
            Space::Gr => k <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{}: parameters {:?} out of range",
                self.space, self.params
            )))
        }
    }

    /// q^ambient, or a budget error when that exceeds `budget`.
    pub fn check_budget(&self, budget: u128) -> Result<u128> {
        let total = (self.q as u128)
            .checked_pow(self.ambient_dim() as u32)
            .unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget,
            });
        }
        Ok(total)
    }
}

impl fmt::Display for StratumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let StratumParams { t, n, m, k } = self.params;
        write!(f, "{} m={m} t={t} n={n} k={k} q={}", self.space, self.q)
    }
}

/// Serializes as a JSON number when it fits in u64 and as a decimal string otherwise.
pub(crate) fn big_as_number<S: Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub spec: StratumSpec,
    #[serde(serialize_with = "big_as_number")]
    pub count: BigUint,
    #[serde(serialize_with = "big_as_number")]
    pub enumerated_total: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CountReport {
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

fn is_rref(a: &Mat) -> bool {
    let mut last: Option<usize> = None;
    for r in 0..a.rows {
        let Some(p) = (0..a.cols).find(|&c| a.get(r, c) != 0) else {
            return false;
        };
        if a.get(r, p) != 1 || last.is_some_and(|l| p <= l) {
            return false;
        }
        if (0..a.rows).any(|o| o != r && a.get(o, p) != 0) {
            return false;
        }
        last = Some(p);
    }
    true
}

/// The membership test for `spec`, on the row-major entry vector.
fn membership(spec: &StratumSpec) -> impl Fn(&[u64]) -> bool + Sync + '_ {
    let fp = Fp { q: spec.q };
    let StratumParams { t, n, m, k } = spec.params;
    move |e: &[u64]| -> bool {
        match spec.space {
            Space::XAlt => fp.rank(&fp.alt_gram(&Mat::from_slice(2 * t, n, e))) == 2 * k,
            Space::GAlt => {
                fp.corner_rank(&fp.alt_gram(&Mat::from_slice(2 * t, n, e)), 2 * k) == Some(2 * k)
            }
            Space::FAlt => {
                fp.alt_gram(&Mat::from_slice(2 * t, n, e)) == Mat::corner(n, n, 2 * k, true, &fp)
            }
            Space::XGen | Space::GGen | Space::FGen => {
                let y = Mat::from_slice(m, t, e);
                let z = Mat::from_slice(t, n, &e[m * t..]);
                let yz = fp.mul(&y, &z);
                match spec.space {
                    Space::XGen => fp.rank(&yz) == k,
                    Space::GGen => {
                        (0..m).all(|i| (k..n).all(|j| yz.get(i, j) == 0)) && {
                            let mut c = Mat::zeros(m, k);
                            for i in 0..m {
                                for j in 0..k {
                                    c.set(i, j, yz.get(i, j));
                                }
                            }
                            fp.rank(&c) == k
                        }
                    }
                    _ => yz == Mat::corner(m, n, k, false, &fp),
                }
            }
            Space::XSym => fp.rank(&fp.sym_gram(&Mat::from_slice(t, n, e))) == k,
            Space::GSym => fp.corner_rank(&fp.sym_gram(&Mat::from_slice(t, n, e)), k) == Some(k),
            Space::FSym => {
                fp.sym_gram(&Mat::from_slice(t, n, e)) == Mat::corner(n, n, k, false, &fp)
            }
            Space::Sp => {
                fp.alt_gram(&Mat::from_slice(2 * t, 2 * k, e))
                    == Mat::corner(2 * k, 2 * k, 2 * k, true, &fp)
            }
            Space::GL => fp.rank(&Mat::from_slice(m, k, e)) == k,
            Space::P => {
                let a = Mat::from_slice(k, t, e);
                let b = Mat::from_slice(t, k, &e[k * t..]);
                fp.mul(&a, &b) == Mat::corner(k, k, k, false, &fp)
            }
            Space::O => fp.sym_gram(&Mat::from_slice(t, k, e)) == Mat::corner(k, k, k, false, &fp),
            Space::Sym => {
                let mut s = Mat::zeros(k, k);
                let mut it = e.iter();
                for i in 0..k {
                    for j in i..k {
                        let v = *it.next().unwrap();
                        s.set(i, j, v);
                        s.set(j, i, v);
                    }
                }
                fp.rank(&s) == k
            }
            Space::Alt => {
                let d = 2 * k;
                let mut a = Mat::zeros(d, d);
                let mut it = e.iter();
                for i in 0..d {
                    for j in i + 1..d {
                        let v = *it.next().unwrap();
                        a.set(i, j, v);
                        a.set(j, i, (spec.q - v) % spec.q);
                    }
                }
                fp.rank(&a) == d
            }
            Space::Gr => is_rref(&Mat::from_slice(k, n, e)),
        }
    }
}

/// Number of entry vectors in 𝔽_q^dim accepted by `accept`, sharded over the
/// leading entries and summed.
pub(crate) fn tally(q: u64, dim: usize, accept: &(impl Fn(&[u64]) -> bool + Sync)) -> u64 {
    let lead = (0..=dim).find(|&s| q.pow(s as u32) >= 256).unwrap_or(dim);
    let shards = q.pow(lead as u32);
    (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut e = vec![0u64; dim];
            let mut rest = shard;
            for i in (0..lead).rev() {
                e[i] = rest % q;
                rest /= q;
            }
            let mut count = 0u64;
            loop {
                if accept(&e) {
                    count += 1;
                }
                let mut i = dim;
                loop {
                    if i == lead {
                        return count;
                    }
                    i -= 1;
                    e[i] += 1;
                    if e[i] < q {
                        break;
                    }
                    e[i] = 0;
                }
            }
        })
        .sum()
}

/// Exhaustive count of `spec` within [`DEFAULT_BUDGET`].
pub fn enumerate(spec: &StratumSpec) -> Result<CountReport> {
    enumerate_with_budget(spec, DEFAULT_BUDGET)
}

pub fn enumerate_with_budget(spec: &StratumSpec, budget: u128) -> Result<CountReport> {
    spec.validate()?;
    let total = spec.check_budget(budget)?;
    let start = Instant::now();
    let accept = membership(spec);
    let count = tally(spec.q, spec.ambient_dim(), &accept);
    Ok(CountReport {
        spec: *spec,
        count: BigUint::from(count),
        enumerated_total: BigUint::from(total),
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(space: Space, m: usize, t: usize, n: usize, k: usize, q: u64) -> u64 {
        let spec = StratumSpec::new(space, StratumParams::new(m, t, n, k), q);
        u64::try_from(&enumerate(&spec).unwrap().count).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(Space::Sp, 0, 1, 0, 1, 3), 24);
        assert_eq!(count(Space::Alt, 0, 0, 0, 1, 3), 2);
        assert_eq!(count(Space::XAlt, 0, 1, 2, 0, 3), 33);
        assert_eq!(count(Space::P, 0, 2, 0, 1, 3), 24);
        assert_eq!(count(Space::GL, 3, 0, 0, 2, 2), 42);
        assert_eq!(count(Space::Gr, 0, 0, 3, 1, 3), 13);
        assert_eq!(count(Space::O, 0, 2, 0, 1, 3), 4);
        assert_eq!(count(Space::O, 0, 2, 0, 1, 5), 4);
        assert_eq!(count(Space::Sym, 0, 0, 0, 1, 5), 4);
    }

    #[test]
    fn empty_matrices_count_once() {
        assert_eq!(count(Space::XAlt, 0, 0, 1, 0, 3), 1);
        assert_eq!(count(Space::Sp, 0, 1, 0, 0, 3), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let spec = StratumSpec::new(Space::XAlt, StratumParams::new(0, 2, 4, 0), 3);
        assert!(matches!(
            enumerate(&spec),
            Err(Error::BudgetExceeded { .. })
        ));
        let spec = StratumSpec::new(Space::GL, StratumParams::new(2, 0, 0, 1), 4);
        assert!(matches!(enumerate(&spec), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn names_round_trip() {
        for s in Space::ALL {
            assert_eq!(s.name().parse::<Space>().unwrap(), s);
        }
    }
}
