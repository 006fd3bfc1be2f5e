//! Arbitrary-precision rational scalars and the canonical primitive-integer
//! representative shared by points, lines and coefficient vectors.
//!
//! `Rat` keeps the invariants the rest of the crate relies on (reduced
//! fraction, positive denominator, zero as 0/1). The canonical form of a
//! projective vector is the integer vector with cleared denominators,
//! content 1 and positive first nonzero entry; it is unique per ray, which
//! is what makes exact hashing of census objects possible.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar: reduced, denominator > 0, zero is 0/1.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational n/d, reduced on construction.
pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q`, omitting `/q` when q = 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`. Rejects q = 0.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidScene(format!("bad rational literal {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::InvalidScene(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, den))
        }
    }
}

/// Clears denominators and divides by the content; the first nonzero entry
/// is made positive. Returns the zero vector unchanged.
pub fn primitive_from_rats(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for q in v {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    primitive_from_ints(ints)
}

/// Content-1, sign-normalized form of an integer vector.
pub fn primitive_from_ints(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v;
    }
    for x in &mut v {
        *x = &*x / &g;
    }
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut v {
                *x = -&*x;
            }
        }
    }
    v
}

pub fn ints_to_rats(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "3/4", "-22/7", "0"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert_eq!(rat_to_string(&rat_from_str("6/4").unwrap()), "3/2");
        assert_eq!(rat_to_string(&rat_from_str("5/-10").unwrap()), "-1/2");
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("x").is_err());
    }

    #[test]
    fn primitive_is_scale_invariant_and_idempotent() {
        let v = vec![ratio(2, 3), ratio(-4, 9), rat(0)];
        let p = primitive_from_rats(&v);
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
        let scaled: Vec<Rat> = v.iter().map(|q| q * ratio(-7, 5)).collect();
        assert_eq!(primitive_from_rats(&scaled), p);
        assert_eq!(primitive_from_ints(p.clone()), p);
    }
}
