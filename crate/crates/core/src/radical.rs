//! Exact sign decisions for small combinations of real `n`-th roots.
//!
//! Used by the log-concavity check, which compares `vol^{1/n}` values without
//! ever forming a floating-point root.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{frac, int, pow, root_bracket, Rational};

/// Compares `lam * p^{1/n} + mu * q^{1/n}` against `m^{1/n}`.
///
/// All of `lam, mu, p, q, m` must be non-negative. Supported for `n <= 3`,
/// where equality can be detected exactly.
pub fn cmp_root_sum(
    n: u32,
    lam: &Rational,
    p: &Rational,
    mu: &Rational,
    q: &Rational,
    m: &Rational,
) -> Result<Ordering> {
    for v in [lam, p, mu, q, m] {
        if v.is_negative() {
            return Err(Error::Range(format!(
                "negative operand {v} in root comparison"
            )));
        }
    }
    let exact_zero = match n {
        1 => return Ok((lam * p + mu * q).cmp(m)),
        2 => {
            // lam*sqrt(p) + mu*sqrt(q) = sqrt(m)  <=>  t >= 0 and t^2 = 4 lam^2 mu^2 p q
            let t = m - lam * lam * p - mu * mu * q;
            !t.is_negative() && &t * &t == int(4) * lam * lam * mu * mu * p * q
        }
        3 => {
            // A + B + C = 0 with real cube roots  <=>  (A^3+B^3+C^3)^3 = 27 (ABC)^3
            let a3 = pow(lam, 3) * p;
            let b3 = pow(mu, 3) * q;
            let c3 = -m.clone();
            let s = &a3 + &b3 + &c3;
            pow(&s, 3) == int(27) * a3 * b3 * c3
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "exact root comparison in dimension {n} (supported: n <= 3)"
            )))
        }
    };
    if exact_zero {
        return Ok(Ordering::Equal);
    }
    // Nonzero difference: refine rational brackets until the sign separates.
    let mut width = frac(1, 1024);
    loop {
        let (pl, ph) = root_bracket(p, n, &width);
        let (ql, qh) = root_bracket(q, n, &width);
        let (ml, mh) = root_bracket(m, n, &width);
        let lo = lam * &pl + mu * &ql - &mh;
        let hi = lam * &ph + mu * &qh - &ml;
        if lo.is_positive() {
            return Ok(Ordering::Greater);
        }
        if hi.is_negative() {
            return Ok(Ordering::Less);
        }
        debug_assert!(!(lo.is_zero() && hi.is_zero()));
        width /= int(1024);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn square_roots() {
        // sqrt(2) + sqrt(8) = sqrt(18)
        let one = int(1);
        assert_eq!(
            cmp_root_sum(2, &one, &int(2), &one, &int(8), &int(18)).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            cmp_root_sum(2, &one, &int(2), &one, &int(8), &int(19)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            cmp_root_sum(2, &one, &int(2), &one, &int(8), &int(17)).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn cube_roots() {
        // cbrt(2) + cbrt(16) = 3 cbrt(2) = cbrt(54)
        let one = int(1);
        assert_eq!(
            cmp_root_sum(3, &one, &int(2), &one, &int(16), &int(54)).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            cmp_root_sum(3, &one, &int(2), &one, &int(16), &int(55)).unwrap(),
            Ordering::Less
        );
        let h = frac(1, 2);
        // (cbrt(1) + cbrt(8))/2 = 3/2 ; (3/2)^3 = 27/8
        assert_eq!(
            cmp_root_sum(3, &h, &int(1), &h, &int(8), &frac(27, 8)).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            cmp_root_sum(3, &h, &int(1), &h, &int(8), &frac(26, 8)).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn zero_terms() {
        let h = frac(1, 2);
        assert_eq!(
            cmp_root_sum(2, &h, &int(0), &h, &int(0), &int(0)).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            cmp_root_sum(3, &h, &int(8), &h, &int(0), &int(1)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn rejects_high_dimension() {
        let one = int(1);
        assert!(cmp_root_sum(4, &one, &one, &one, &one, &one).is_err());
    }
}
