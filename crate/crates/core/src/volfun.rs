//! Exact piecewise-polynomial volume curves `x -> vol(L - xF)` and the
//! inequality checks that every geometric curve must pass.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::radical::cmp_root_sum;
use crate::rational::{self, frac, int, pow, Rational};

/// Interior samples per piece used by the monotonicity/non-negativity scan.
const SCAN_SAMPLES: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise")]
pub struct PiecewisePolynomial {
    #[serde(with = "rational::serde_vec")]
    breakpoints: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

#[derive(Deserialize)]
struct RawPiecewise {
    #[serde(with = "rational::serde_vec")]
    breakpoints: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

impl TryFrom<RawPiecewise> for PiecewisePolynomial {
    type Error = Error;
    fn try_from(raw: RawPiecewise) -> Result<Self> {
        PiecewisePolynomial::new(raw.breakpoints, raw.pieces)
    }
}

impl PiecewisePolynomial {
    /// `pieces[k]` lives on `[breakpoints[k], breakpoints[k + 1]]`.
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Polynomial>) -> Result<Self> {
        if pieces.is_empty() || breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidCurve(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCurve(format!(
                "breakpoints not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        for k in 1..pieces.len() {
            let x = &breakpoints[k];
            let (l, r) = (pieces[k - 1].eval(x), pieces[k].eval(x));
            if l != r {
                return Err(Error::InvalidCurve(format!(
                    "discontinuity at x = {x}: left {l}, right {r}"
                )));
            }
        }
        Ok(PiecewisePolynomial {
            breakpoints,
            pieces,
        })
    }

    pub fn single(lo: Rational, hi: Rational, p: Polynomial) -> Result<Self> {
        Self::new(vec![lo, hi], vec![p])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let (lo, hi) = self.domain();
        lo <= x && x <= hi
    }

    fn piece_index(&self, x: &Rational) -> Result<usize> {
        if !self.contains(x) {
            let (lo, hi) = self.domain();
            return Err(Error::Range(format!("x = {x} outside [{lo}, {hi}]")));
        }
        // first piece whose right end is >= x; continuity makes the choice at
        // a breakpoint irrelevant
        Ok(self.breakpoints[1..]
            .iter()
            .position(|b| x <= b)
            .unwrap_or(self.pieces.len() - 1))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        Ok(self.pieces[self.piece_index(x)?].eval(x))
    }

    /// One-sided derivatives at `x`: `(left, right)`. At the domain ends the
    /// missing side repeats the available one.
    pub fn derivatives_at(&self, x: &Rational) -> Result<(Rational, Rational)> {
        let k = self.piece_index(x)?;
        let here = self.pieces[k].derivative().eval(x);
        if k + 1 < self.pieces.len() && *x == self.breakpoints[k + 1] {
            let right = self.pieces[k + 1].derivative().eval(x);
            return Ok((here, right));
        }
        Ok((here.clone(), here))
    }

    pub fn max_degree(&self) -> usize {
        self.pieces
            .iter()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Merges adjacent pieces carrying the same polynomial.
    pub fn simplified(&self) -> Self {
        let mut bps = vec![self.breakpoints[0].clone()];
        let mut pieces: Vec<Polynomial> = Vec::new();
        for (k, p) in self.pieces.iter().enumerate() {
            if pieces.last() == Some(p) {
                *bps.last_mut().unwrap() = self.breakpoints[k + 1].clone();
            } else {
                pieces.push(p.clone());
                bps.push(self.breakpoints[k + 1].clone());
            }
        }
        PiecewisePolynomial {
            breakpoints: bps,
            pieces,
        }
    }

    /// Same function on the same domain, ignoring redundant breakpoints.
    pub fn same_function(&self, other: &Self) -> bool {
        self.simplified() == other.simplified()
    }
}

/// `∫_a^b pp(x) dx`, exactly.
pub fn integrate(pp: &PiecewisePolynomial, a: &Rational, b: &Rational) -> Result<Rational> {
    if a > b {
        return Err(Error::Range(format!(
            "integration bounds reversed: {a} > {b}"
        )));
    }
    if !pp.contains(a) || !pp.contains(b) {
        let (lo, hi) = pp.domain();
        return Err(Error::Range(format!("[{a}, {b}] not within [{lo}, {hi}]")));
    }
    let mut total = Rational::zero();
    for (k, piece) in pp.pieces.iter().enumerate() {
        let lo = rational::max(a, &pp.breakpoints[k]);
        let hi = rational::min(b, &pp.breakpoints[k + 1]);
        if lo < hi {
            total += piece.integrate(&lo, &hi);
        }
    }
    Ok(total)
}

/// The function `x -> vol(L - xF)` on `[0, tau]`, identically zero beyond.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct VolumeCurve {
    dimension: usize,
    #[serde(with = "rational::serde_str")]
    total_volume: Rational,
    #[serde(with = "rational::serde_str")]
    tau: Rational,
    body: PiecewisePolynomial,
}

#[derive(Deserialize)]
struct RawCurve {
    dimension: usize,
    #[serde(with = "rational::serde_str")]
    total_volume: Rational,
    #[serde(with = "rational::serde_str")]
    tau: Rational,
    body: PiecewisePolynomial,
}

impl TryFrom<RawCurve> for VolumeCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        let curve = VolumeCurve::new(raw.body, raw.dimension)?;
        if curve.tau != raw.tau || curve.total_volume != raw.total_volume {
            return Err(Error::InvalidCurve(
                "tau/total_volume disagree with the curve body".into(),
            ));
        }
        Ok(curve)
    }
}

impl VolumeCurve {
    /// Validates the volume-curve axioms: domain `[0, tau]` with `tau > 0`,
    /// `body(0) = L^n > 0`, `body(tau) = 0`, degree at most `n`, and a
    /// non-negative, non-increasing body (scanned exactly on sample points).
    pub fn new(body: PiecewisePolynomial, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidCurve("dimension must be positive".into()));
        }
        let (lo, hi) = body.domain();
        if !lo.is_zero() {
            return Err(Error::InvalidCurve(format!(
                "domain starts at {lo}, expected 0"
            )));
        }
        let tau = hi.clone();
        let total_volume = body.eval(&Rational::zero())?;
        if !total_volume.is_positive() {
            return Err(Error::InvalidCurve(format!(
                "vol(0) = {total_volume} is not positive"
            )));
        }
        let end = body.eval(&tau)?;
        if !end.is_zero() {
            return Err(Error::InvalidCurve(format!("vol(tau) = {end}, expected 0")));
        }
        if body.max_degree() > dimension {
            return Err(Error::InvalidCurve(format!(
                "piece of degree {} exceeds dimension {dimension}",
                body.max_degree()
            )));
        }
        for (k, piece) in body.pieces().iter().enumerate() {
            let (a, b) = (&body.breakpoints()[k], &body.breakpoints()[k + 1]);
            let d = piece.derivative();
            let mut prev: Option<Rational> = None;
            for s in 0..=SCAN_SAMPLES {
                let x = a + (b - a) * frac(s, SCAN_SAMPLES);
                let v = piece.eval(&x);
                if v.is_negative() {
                    return Err(Error::InvalidCurve(format!("vol({x}) = {v} < 0")));
                }
                if d.eval(&x).is_positive() {
                    return Err(Error::InvalidCurve(format!("vol increasing at x = {x}")));
                }
                if prev.as_ref().is_some_and(|p| &v > p) {
                    return Err(Error::InvalidCurve(format!(
                        "vol increasing before x = {x}"
                    )));
                }
                prev = Some(v);
            }
        }
        Ok(VolumeCurve {
            dimension,
            total_volume,
            tau,
            body,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `(L^n)`
    pub fn total_volume(&self) -> &Rational {
        &self.total_volume
    }

    pub fn tau(&self) -> &Rational {
        &self.tau
    }

    pub fn body(&self) -> &PiecewisePolynomial {
        &self.body
    }

    /// `vol(L - xF)` for any `x >= 0`.
    pub fn value(&self, x: &Rational) -> Result<Rational> {
        if x.is_negative() {
            return Err(Error::Range(format!("x = {x} is negative")));
        }
        if x >= &self.tau {
            return Ok(Rational::zero());
        }
        self.body.eval(x)
    }

    /// `∫_0^∞ vol(L - xF) dx`
    pub fn integral(&self) -> Rational {
        integrate(&self.body, &Rational::zero(), &self.tau).expect("full domain")
    }

    /// `n + 1` evenly spaced points `0, tau/steps, ..., tau`.
    pub fn uniform_grid(&self, steps: usize) -> Vec<Rational> {
        let steps = steps.max(1) as i64;
        (0..=steps).map(|k| &self.tau * frac(k, steps)).collect()
    }

    /// CSV with header `x,vol,x_exact,vol_exact`.
    pub fn to_csv(&self, grid: &[Rational]) -> Result<String> {
        let mut out = String::from("x,vol,x_exact,vol_exact\n");
        for x in grid {
            let v = self.value(x)?;
            writeln!(
                out,
                "{},{},{},{}",
                rational::to_f64(x),
                rational::to_f64(&v),
                rational::fmt(x),
                rational::fmt(&v)
            )
            .unwrap();
        }
        Ok(out)
    }
}

/// `S = (1/L^n) ∫_0^τ vol(L - xF) dx`.
pub fn expected_vanishing(curve: &VolumeCurve) -> Rational {
    curve.integral() / curve.total_volume()
}

/// `S <= n/(n+1) * tau`
pub fn check_tau_upper(curve: &VolumeCurve) -> bool {
    let n = curve.dimension() as i64;
    expected_vanishing(curve) <= frac(n, n + 1) * curve.tau()
}

/// `vol(x) >= (1 - x/tau)^n * L^n` at every sample.
pub fn check_fujita_lower(curve: &VolumeCurve, samples: &[Rational]) -> Result<bool> {
    let n = curve.dimension() as u32;
    for x in samples {
        if !curve.body().contains(x) {
            return Err(Error::Range(format!(
                "sample {x} outside [0, {}]",
                curve.tau()
            )));
        }
        let bound = pow(&(Rational::one() - x / curve.tau()), n) * curve.total_volume();
        if curve.value(x)? < bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `vol(λx + (1-λ)y)^{1/n} >= λ vol(x)^{1/n} + (1-λ) vol(y)^{1/n}` at every
/// triple `(x, y, λ)`, decided exactly.
pub fn check_log_concavity(
    curve: &VolumeCurve,
    triples: &[(Rational, Rational, Rational)],
) -> Result<bool> {
    let n = curve.dimension() as u32;
    for (x, y, lam) in triples {
        for p in [x, y] {
            if !curve.body().contains(p) {
                return Err(Error::Range(format!(
                    "point {p} outside [0, {}]",
                    curve.tau()
                )));
            }
        }
        if !lam.is_positive() || lam >= &Rational::one() {
            return Err(Error::Range(format!("lambda = {lam} not in (0, 1)")));
        }
        let mu = Rational::one() - lam;
        let mid = lam * x + &mu * y;
        let ord = cmp_root_sum(
            n,
            lam,
            &curve.value(x)?,
            &mu,
            &curve.value(y)?,
            &curve.value(&mid)?,
        )?;
        if ord == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Grid of `(x, y, λ)` triples over `[0, tau]` for concavity scans.
pub fn concavity_triples(curve: &VolumeCurve, steps: i64) -> Vec<(Rational, Rational, Rational)> {
    let lambdas = [frac(1, 2), frac(1, 3), frac(3, 4)];
    let pts: Vec<Rational> = (0..=steps).map(|k| curve.tau() * frac(k, steps)).collect();
    let mut out = Vec::new();
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            for l in &lambdas {
                out.push((x.clone(), y.clone(), l.clone()));
            }
        }
    }
    out
}

/// Linear curve `L - x` on `[0, L]`, the one-dimensional model.
pub fn linear_curve(degree: &Rational) -> Result<VolumeCurve> {
    let body = PiecewisePolynomial::single(
        Rational::zero(),
        degree.clone(),
        Polynomial::linear(degree.clone(), int(-1)),
    )?;
    VolumeCurve::new(body, 1)
}
