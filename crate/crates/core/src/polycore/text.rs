//! Polynomial wire format.
//!
//! Terms in descending monomial order joined by ` + ` / ` - `; a coefficient
//! prints as `a` or `a/b` and is omitted when it is 1 on a non-constant term;
//! factors are `name` or `name^e` joined by `*`. The zero polynomial is `0`.

use std::sync::Arc;

use super::field::Field;
use super::poly::{Monomial, Polynomial, Ring};
use crate::error::{Error, Result};

pub fn format_polynomial<F: Field>(p: &Polynomial<F>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let field = p.field();
    let vars = p.ring().vars();
    let mut out = String::new();
    for (k, t) in p.terms().iter().enumerate() {
        let neg = field.is_negative(&t.coeff);
        let mag = if neg {
            field.neg(&t.coeff)
        } else {
            t.coeff.clone()
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if t.mono.is_one() || !field.is_one(&mag) {
            factors.push(field.format(&mag));
        }
        for (i, &e) in t.mono.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars[i].clone()),
                _ => factors.push(format!("{}^{}", vars[i], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

pub fn parse_polynomial<F: Field>(ring: &Arc<Ring<F>>, s: &str) -> Result<Polynomial<F>> {
    let field = ring.field();
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into signed terms at top-level +/- (not following `^` or `/` or `*`)
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let chars: Vec<char> = src.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let prev = if i == 0 { None } else { Some(chars[i - 1]) };
        let splits = (c == '+' || c == '-') && !matches!(prev, Some('^') | Some('/') | Some('*'));
        if splits {
            if !cur.is_empty() {
                pieces.push((neg, std::mem::take(&mut cur)));
                neg = false;
            }
            if c == '-' {
                neg = !neg;
            }
        } else {
            cur.push(c);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("trailing sign in `{s}`")));
    }
    pieces.push((neg, cur));

    let n = ring.nvars();
    let mut terms = Vec::with_capacity(pieces.len());
    for (neg, piece) in pieces {
        let mut coeff = field.one();
        let mut exps = vec![0u32; n];
        for factor in piece.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{piece}`")));
            }
            let starts_numeric = factor
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_digit() || c == '-');
            if starts_numeric {
                coeff = field.mul(&coeff, &field.parse(factor)?);
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((name, e)) => {
                    let e: u32 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                    (name, e)
                }
                None => (factor, 1),
            };
            let i = ring
                .var_index(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
            exps[i] += e;
        }
        if neg {
            coeff = field.neg(&coeff);
        }
        terms.push((Monomial::new(exps), coeff));
    }
    Ok(Polynomial::from_terms(ring, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::field::{PrimeField, Rationals};
    use crate::polycore::poly::MonomialOrder;

    fn qring(vars: &[&str]) -> Arc<Ring<Rationals>> {
        Ring::new(
            Rationals,
            vars.iter().map(|s| s.to_string()).collect(),
            MonomialOrder::Grevlex,
        )
        .unwrap()
    }

    #[test]
    fn formats_in_descending_order() {
        let r = qring(&["x", "y"]);
        let p = Polynomial::parse(&r, "y^2 + x^2 - 3/2*x*y + 1").unwrap();
        assert_eq!(p.to_string(), "x^2 - 3/2*x*y + y^2 + 1");
        assert_eq!(Polynomial::parse(&r, "x - x").unwrap().to_string(), "0");
        assert_eq!(Polynomial::parse(&r, "-x").unwrap().to_string(), "-x");
        assert_eq!(Polynomial::parse(&r, "-2").unwrap().to_string(), "-2");
    }

    #[test]
    fn round_trip_prime_field() {
        let f = PrimeField::new(32003).unwrap();
        let r = Ring::new(
            f,
            vec!["y_1_1".into(), "y_2_1".into()],
            MonomialOrder::Grevlex,
        )
        .unwrap();
        let p = Polynomial::parse(&r, "y_1_1^2 - 5*y_1_1*y_2_1 + 16002").unwrap();
        let text = p.to_string();
        assert_eq!(Polynomial::parse(&r, &text).unwrap(), p);
    }

    #[test]
    fn rejects_garbage() {
        let r = qring(&["x"]);
        assert!(Polynomial::parse(&r, "z").is_err());
        assert!(Polynomial::parse(&r, "x +").is_err());
        assert!(Polynomial::parse(&r, "x^a").is_err());
        assert!(Polynomial::parse(&r, "").is_err());
    }
}
