//! Exact rational scalars and the `"p/q"` string encoding used on every
//! external surface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` (surrounding whitespace allowed).
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical string form: `"p/q"`, or `"p"` for integers.
pub fn fmt(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator may individually overflow f64
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn pow(q: &Rational, e: u32) -> Rational {
    num_traits::pow(q.clone(), e as usize)
}

pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// Exact rational `n`-th root of `q` if one exists (real root; odd `n` for negative `q`).
pub fn exact_root(q: &Rational, n: u32) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    if q.is_negative() {
        if n.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-q, n).map(|r| -r);
    }
    let rn = q.numer().nth_root(n);
    let rd = q.denom().nth_root(n);
    if num_traits::pow(rn.clone(), n as usize) == *q.numer()
        && num_traits::pow(rd.clone(), n as usize) == *q.denom()
    {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// Rational bracket `[lo, hi]` of the real `n`-th root of `q >= 0` with
/// `hi - lo <= width`. Collapses to a point when the root is rational.
pub fn root_bracket(q: &Rational, n: u32, width: &Rational) -> (Rational, Rational) {
    assert!(!q.is_negative(), "root_bracket of a negative number");
    assert!(width.is_positive(), "bracket width must be positive");
    if let Some(r) = exact_root(q, n) {
        return (r.clone(), r);
    }
    let mut lo = Rational::zero();
    let mut hi = if q > &Rational::one() {
        q.clone()
    } else {
        Rational::one()
    };
    let two = int(2);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        if pow(&mid, n) <= *q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_opt {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&super::fmt(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| super::parse(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&super::fmt(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse("1/2").unwrap(), frac(1, 2));
        assert_eq!(parse(" -6/4 ").unwrap(), frac(-3, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x/2").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let q = parse("4/-6").unwrap();
        assert_eq!(q.numer(), &BigInt::from(-2));
        assert_eq!(q.denom(), &BigInt::from(3));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&frac(9, 4), 2), Some(frac(3, 2)));
        assert_eq!(exact_root(&frac(-8, 27), 3), Some(frac(-2, 3)));
        assert_eq!(exact_root(&int(2), 2), None);
        assert_eq!(exact_root(&int(-4), 2), None);
    }

    #[test]
    fn sqrt_three_bracket() {
        let w = frac(1, 1_000_000);
        let (lo, hi) = root_bracket(&int(3), 2, &w);
        assert!(&hi - &lo <= w);
        assert!(pow(&lo, 2) <= int(3) && pow(&hi, 2) >= int(3));
    }

    proptest! {
        #[test]
        fn string_form_round_trips(p in -10_000i64..10_000, q in 1i64..10_000) {
            let r = frac(p, q);
            prop_assert_eq!(parse(&fmt(&r)).unwrap(), r);
        }
    }
}
