//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, int, Rational};

/// Coefficients in ascending degree; trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    #[serde(with = "rational::serde_vec")]
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1 * x`
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Rational::zero());
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / int(k as i64 + 1)),
        );
        Self::new(out)
    }

    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// Unique polynomial of degree `< points.len()` through the given nodes
    /// (Newton divided differences). Abscissae must be distinct.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let m = points.len();
        let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
        let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..m {
            for i in (level..m).rev() {
                let denom = xs[i] - xs[i - level];
                assert!(!denom.is_zero(), "repeated interpolation node");
                dd[i] = (&dd[i] - &dd[i - 1]) / denom;
            }
        }
        // Horner expansion of the Newton form into monomial coefficients.
        let mut acc = Self::zero();
        for i in (0..m).rev() {
            let factor = Self::linear(-xs[i].clone(), Rational::one());
            acc = &(&acc * &factor) + &Self::constant(dd[i].clone());
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}
