//! Coefficient fields.
//!
//! A [`Field`] is a context object: elements are plain values and every
//! operation goes through the context, so a prime field can carry its
//! modulus without storing it in each coefficient.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    /// A square root inside the field, if one exists.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Uniform sample (prime fields) or a small nonzero-biased integer (rationals).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn spec(&self) -> FieldSpec;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// True when every element is represented exactly.
    fn is_exact(&self) -> bool {
        true
    }

    /// Sign used by the text format: true when the element prints with a leading minus.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Serializable description of an exact coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    /// Approximate complex floats; only the matrix routines accept this.
    ComplexFloat,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "p={p}"),
            FieldSpec::ComplexFloat => write!(f, "complex"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rational") || s == "QQ" || s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let digits = s.strip_prefix("p=").unwrap_or(s);
        let p: u64 = digits.parse().map_err(|_| {
            Error::Parse(format!(
                "field spec `{s}` is neither `rational` nor `p=<prime>`"
            ))
        })?;
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }
}

// ---------------------------------------------------------------------------
// Rationals

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = a.numer().sqrt();
        let d = a.denom().sqrt();
        if &(&n * &n) == a.numer() && &(&d * &d) == a.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        // {-20, ..., 20} \ {0}
        let mut v = 0i64;
        while v == 0 {
            v = rng.gen_range(-20..=20);
        }
        self.from_i64(v)
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad rational `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

// ---------------------------------------------------------------------------
// Prime fields

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Legendre symbol: 1, p-1 (i.e. -1), or 0.
    pub fn legendre(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a % 2;
        }
        self.pow(&(a % self.p), (self.p - 1) / 2)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on i128
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        tonelli_shanks(*a % self.p, self.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u64) -> String {
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad residue `{s}` mod {}", self.p));
        if let Some((n, d)) = s.split_once('/') {
            let n = self.parse(n)?;
            let d = self.parse(d)?;
            return self.div(&n, &d).ok_or_else(bad);
        }
        let v: BigInt = s.parse().map_err(|_| bad())?;
        let r = v.mod_floor(&BigInt::from(self.p));
        Ok(r.to_u64().expect("residue fits"))
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn is_negative(&self, a: &u64) -> bool {
        *a > self.p / 2
    }
}

/// Square root modulo an odd prime (Tonelli–Shanks); p = 2 handled directly.
pub fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let f = PrimeField { p };
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if f.legendre(a) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(f.pow(&a, (p + 1) / 4));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while f.legendre(z) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = f.pow(&z, q);
    let mut t = f.pow(&a, q);
    let mut r = f.pow(&a, q.div_ceil(2));
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = f.mul(&tt, &tt);
            i += 1;
        }
        let b = f.pow(&c, 1u64 << (m - i - 1));
        m = i;
        c = f.mul(&b, &b);
        t = f.mul(&t, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &sp in &SMALL {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Complex floats (matrix routines only)

/// Double-precision complex numbers with a zero threshold.
///
/// Not an exact field: `is_zero` compares against `eps`. The Gröbner code
/// never sees this type; it exists so the matrix constructions can run the
/// same algorithm over ℂ as over a prime field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFloats {
    pub eps: f64,
}

impl Default for ComplexFloats {
    fn default() -> Self {
        ComplexFloats { eps: 1e-12 }
    }
}

impl Field for ComplexFloats {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(&self, v: i64) -> Complex64 {
        Complex64::new(v as f64, 0.0)
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        if self.is_zero(a) {
            None
        } else {
            Some(a.inv())
        }
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.norm() <= self.eps
    }
    fn is_one(&self, a: &Complex64) -> bool {
        (a - self.one()).norm() <= self.eps
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &Complex64) -> Option<Complex64> {
        Some(a.sqrt())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }
    fn format(&self, a: &Complex64) -> String {
        format!("{a}")
    }
    fn parse(&self, s: &str) -> Result<Complex64> {
        s.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad complex `{s}`")))
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::ComplexFloat
    }
    fn is_exact(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(32003));
        assert!(is_prime(3203));
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
        assert!(PrimeField::new(32004).is_err());
    }

    #[test]
    fn prime_field_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3, 101, 32003, 18446744073709551557] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..200 {
                let a = f.random(&mut rng);
                if a == 0 {
                    assert!(f.inv(&a).is_none());
                    continue;
                }
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), 1);
                assert!(ai < p);
            }
        }
    }

    #[test]
    fn rationals_normalize() {
        let q = Rationals;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(q.format(&a), "-3/2");
        assert_eq!(q.format(&q.mul(&a, &q.inv(&a).unwrap())), "1");
        assert_eq!(
            q.sqrt(&q.parse("9/4").unwrap()),
            Some(q.parse("3/2").unwrap())
        );
        assert_eq!(q.sqrt(&q.from_i64(2)), None);
    }

    #[test]
    fn square_roots_mod_p() {
        // residues mod 5 are {1, 4}
        assert!(tonelli_shanks(2, 5).is_none());
        assert!(tonelli_shanks(3, 5).is_none());
        for p in [5u64, 13, 17, 101, 32003, 32009] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p.min(400) {
                match tonelli_shanks(a, p) {
                    Some(r) => assert_eq!(f.mul(&r, &r), a),
                    None => assert_eq!(f.legendre(a), p - 1),
                }
            }
        }
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!(
            "rational".parse::<FieldSpec>().unwrap(),
            FieldSpec::Rational
        );
        assert_eq!(
            "p=32003".parse::<FieldSpec>().unwrap(),
            FieldSpec::Prime(32003)
        );
        assert!("p=32004".parse::<FieldSpec>().is_err());
        assert!("banana".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn symmetric_residue_format() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.format(&6), "-1");
        assert_eq!(f.format(&3), "3");
        assert_eq!(f.parse("-1").unwrap(), 6);
        assert_eq!(f.parse("1/2").unwrap(), 4);
    }
}
