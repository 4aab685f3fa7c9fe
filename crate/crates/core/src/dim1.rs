//! Log Fano pairs `(P^1, Σ c_i [p_i])`: invariants at every point, exact
//! stability verdicts, and pullbacks along the cyclic covers `t -> t^m`.
//!
//! On a curve the prime divisors over `X` are exactly its closed points, so
//! the minimum of β̂ over the marked points and one generic point decides
//! uniform K-stability outright.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::invariants::{make_report, InvariantReport};
use crate::rational::{self, exact_root, int, Rational};
use crate::volfun::{linear_curve, VolumeCurve};

/// A closed point of `P^1`.
///
/// `Preimage` names one of the non-rational preimages of `of` under
/// `t -> t^degree`; rational preimages are always stored as `Finite`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum P1Point {
    Finite(Rational),
    Infinity,
    Preimage {
        of: Box<P1Point>,
        degree: u32,
        branch: u32,
    },
}

impl P1Point {
    pub fn zero() -> Self {
        P1Point::Finite(Rational::zero())
    }

    pub fn finite(q: Rational) -> Self {
        P1Point::Finite(q)
    }

    fn is_branch_point(&self) -> bool {
        matches!(self, P1Point::Infinity) || matches!(self, P1Point::Finite(q) if q.is_zero())
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(q) => write!(f, "{q}"),
            P1Point::Infinity => write!(f, "inf"),
            P1Point::Preimage { of, degree, branch } => write!(f, "root({degree},{branch},{of})"),
        }
    }
}

impl FromStr for P1Point {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(P1Point::Infinity);
        }
        if let Some(inner) = t.strip_prefix("root(").and_then(|r| r.strip_suffix(')')) {
            let bad = || Error::Parse(format!("malformed point {s:?}"));
            let mut parts = inner.splitn(3, ',');
            let degree: u32 = parts
                .next()
                .ok_or_else(bad)?
                .trim()
                .parse()
                .map_err(|_| bad())?;
            let branch: u32 = parts
                .next()
                .ok_or_else(bad)?
                .trim()
                .parse()
                .map_err(|_| bad())?;
            let of: P1Point = parts.next().ok_or_else(bad)?.parse()?;
            return Ok(P1Point::Preimage {
                of: Box::new(of),
                degree,
                branch,
            });
        }
        Ok(P1Point::Finite(rational::parse(t)?))
    }
}

impl Serialize for P1Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for P1Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub at: P1Point,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
}

impl MarkedPoint {
    pub fn new(at: P1Point, c: Rational) -> Self {
        MarkedPoint { at, c }
    }
}

/// `(P^1, Σ c_i [p_i])` with every `c_i ∈ (0,1)` and `Σ c_i < 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawP1Pair")]
pub struct P1Pair {
    points: Vec<MarkedPoint>,
}

#[derive(Deserialize)]
struct RawP1Pair {
    #[serde(default)]
    points: Vec<MarkedPoint>,
}

impl TryFrom<RawP1Pair> for P1Pair {
    type Error = Error;
    fn try_from(raw: RawP1Pair) -> Result<Self> {
        P1Pair::new(raw.points)
    }
}

impl P1Pair {
    pub fn new(points: Vec<MarkedPoint>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            if !p.c.is_positive() || p.c >= Rational::one() {
                return Err(Error::Precondition(format!(
                    "points[{i}].c = {} at {} is not in (0, 1) (klt)",
                    p.c, p.at
                )));
            }
            if !seen.insert(&p.at) {
                return Err(Error::Precondition(format!(
                    "points[{i}]: duplicate point {}",
                    p.at
                )));
            }
        }
        let pair = P1Pair { points };
        if !pair.degree().is_positive() {
            return Err(Error::Precondition(format!(
                "sum of coefficients {} is not < 2 (log Fano)",
                int(2) - pair.degree()
            )));
        }
        Ok(pair)
    }

    /// The empty boundary.
    pub fn trivial() -> Self {
        P1Pair { points: Vec::new() }
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    /// `deg L = 2 - Σ c_i`.
    pub fn degree(&self) -> Rational {
        self.points.iter().fold(int(2), |acc, p| acc - &p.c)
    }

    pub fn coefficient(&self, at: &P1Point) -> Rational {
        self.points
            .iter()
            .find(|p| &p.at == at)
            .map_or_else(Rational::zero, |p| p.c.clone())
    }

    /// Marked points in input order, then the generic point.
    pub fn valuations(&self) -> Vec<P1Valuation> {
        self.points
            .iter()
            .map(|p| P1Valuation::Point(p.at.clone()))
            .chain(std::iter::once(P1Valuation::Generic))
            .collect()
    }

    /// Same boundary up to reordering.
    pub fn same_boundary(&self, other: &P1Pair) -> bool {
        self.points.len() == other.points.len()
            && self.points.iter().all(|p| other.coefficient(&p.at) == p.c)
    }
}

/// A point of `P^1`, or any point off the boundary support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum P1Valuation {
    Point(P1Point),
    Generic,
}

impl fmt::Display for P1Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Valuation::Point(p) => write!(f, "[{p}]"),
            P1Valuation::Generic => write!(f, "generic"),
        }
    }
}

impl Serialize for P1Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            P1Valuation::Point(p) => s.collect_str(p),
            P1Valuation::Generic => s.serialize_str("generic"),
        }
    }
}

impl<'de> Deserialize<'de> for P1Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "generic" {
            return Ok(P1Valuation::Generic);
        }
        s.parse()
            .map(P1Valuation::Point)
            .map_err(serde::de::Error::custom)
    }
}

fn coefficient_of(pair: &P1Pair, v: &P1Valuation) -> Rational {
    match v {
        P1Valuation::Point(p) => pair.coefficient(p),
        P1Valuation::Generic => Rational::zero(),
    }
}

/// `vol(L - x[p]) = deg L - x` on `[0, deg L]`, the same for every point.
pub fn p1_volume_curve(pair: &P1Pair, _v: &P1Valuation) -> VolumeCurve {
    linear_curve(&pair.degree()).expect("deg L > 0 is a pair invariant")
}

/// `A = 1 - c_v`.
pub fn p1_log_discrepancy(pair: &P1Pair, v: &P1Valuation) -> Rational {
    Rational::one() - coefficient_of(pair, v)
}

pub fn p1_report(pair: &P1Pair, v: &P1Valuation) -> InvariantReport {
    let curve = p1_volume_curve(pair, v);
    make_report(1, &pair.degree(), &p1_log_discrepancy(pair, v), &curve)
        .expect("curve built from the same pair")
}

/// Closed form `β̂ = 1 - deg L / (2A)`.
pub fn p1_betahat(pair: &P1Pair, v: &P1Valuation) -> Rational {
    Rational::one() - pair.degree() / (int(2) * p1_log_discrepancy(pair, v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    UniformlyKStable {
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
    },
    KSemistableOnly {
        witness: P1Valuation,
    },
    Unstable {
        witness: P1Valuation,
        #[serde(with = "rational::serde_str")]
        betahat: Rational,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct P1Evaluation {
    pub verdict: Verdict,
    #[serde(with = "rational::serde_str")]
    pub epsilon_star: Rational,
    pub reports: Vec<(P1Valuation, InvariantReport)>,
}

pub fn p1_evaluate(pair: &P1Pair) -> P1Evaluation {
    let reports: Vec<(P1Valuation, InvariantReport)> = pair
        .valuations()
        .into_iter()
        .map(|v| {
            let r = p1_report(pair, &v);
            (v, r)
        })
        .collect();
    let (witness, min) = reports
        .iter()
        .fold(
            None::<(&P1Valuation, &Rational)>,
            |best, (v, r)| match best {
                Some((_, b)) if b <= &r.betahat => best,
                _ => Some((v, &r.betahat)),
            },
        )
        .expect("generic point is always present");
    let (witness, epsilon_star) = (witness.clone(), min.clone());
    let verdict = if epsilon_star.is_positive() {
        Verdict::UniformlyKStable {
            epsilon: epsilon_star.clone(),
        }
    } else if epsilon_star.is_zero() {
        Verdict::KSemistableOnly { witness }
    } else {
        Verdict::Unstable {
            witness,
            betahat: epsilon_star.clone(),
        }
    };
    P1Evaluation {
        verdict,
        epsilon_star,
        reports,
    }
}

pub fn p1_verdict(pair: &P1Pair) -> Verdict {
    p1_evaluate(pair).verdict
}

/// The cover `t -> t^m`, totally ramified over `0` and `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct CyclicCover {
    degree: u32,
}

impl CyclicCover {
    pub fn new(degree: u32) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Precondition(format!(
                "cover degree {degree} must be >= 2"
            )));
        }
        Ok(CyclicCover { degree })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Preimages of `p` with their ramification indices.
    pub fn preimages(&self, p: &P1Point) -> Vec<(P1Point, u32)> {
        let m = self.degree;
        if p.is_branch_point() {
            return vec![(p.clone(), m)];
        }
        let mut rational_roots = Vec::new();
        if let P1Point::Finite(q) = p {
            if let Some(r) = exact_root(&q.abs(), m) {
                if q.is_positive() {
                    rational_roots.push(r.clone());
                    if m.is_multiple_of(2) {
                        rational_roots.push(-r);
                    }
                } else if m % 2 == 1 {
                    rational_roots.push(-r);
                }
            }
        }
        let rest = m - rational_roots.len() as u32;
        rational_roots
            .into_iter()
            .map(|r| (P1Point::Finite(r), 1))
            .chain((0..rest).map(|branch| {
                (
                    P1Point::Preimage {
                        of: Box::new(p.clone()),
                        degree: m,
                        branch,
                    },
                    1,
                )
            }))
            .collect()
    }

    pub fn preimage_valuations(&self, v: &P1Valuation) -> Vec<(P1Valuation, u32)> {
        match v {
            P1Valuation::Point(p) => self
                .preimages(p)
                .into_iter()
                .map(|(q, r)| (P1Valuation::Point(q), r))
                .collect(),
            P1Valuation::Generic => vec![(P1Valuation::Generic, 1)],
        }
    }
}

impl TryFrom<u32> for CyclicCover {
    type Error = Error;
    fn try_from(m: u32) -> Result<Self> {
        CyclicCover::new(m)
    }
}

impl From<CyclicCover> for u32 {
    fn from(c: CyclicCover) -> u32 {
        c.degree
    }
}

/// The boundary `Δ'` with `φ^*(K + Δ) = K' + Δ'` (ramification formula).
pub fn cover_pullback(pair: &P1Pair, cover: &CyclicCover) -> Result<P1Pair> {
    let m = int(cover.degree as i64);
    let mut out = Vec::new();
    for branch in [P1Point::zero(), P1Point::Infinity] {
        let c = &m * pair.coefficient(&branch) - (&m - int(1));
        if c.is_negative() {
            return Err(Error::CoverIncompatible(format!(
                "coefficient {c} at {branch} after pullback by t^{}",
                cover.degree
            )));
        }
        if c.is_positive() {
            out.push(MarkedPoint::new(branch, c));
        }
    }
    for p in pair.points.iter().filter(|p| !p.at.is_branch_point()) {
        out.extend(
            cover
                .preimages(&p.at)
                .into_iter()
                .map(|(q, _)| MarkedPoint::new(q, p.c.clone())),
        );
    }
    P1Pair::new(out)
}

/// `vol_{X'}(φ^*(L - x[v])) = m · vol_X(L - x[v])`.
///
/// `φ^*[v]` has degree `m`, so its upstairs volume is read off the upstairs
/// curve at `m·x`.
pub fn check_cover_volume(
    pair: &P1Pair,
    cover: &CyclicCover,
    v: &P1Valuation,
    x: &Rational,
) -> Result<bool> {
    let down = p1_volume_curve(pair, v);
    if x.is_negative() || x > down.tau() {
        return Err(Error::Range(format!("x = {x} outside [0, {}]", down.tau())));
    }
    let up_pair = cover_pullback(pair, cover)?;
    let (up_v, _) = cover.preimage_valuations(v).swap_remove(0);
    let up = p1_volume_curve(&up_pair, &up_v);
    let m = int(cover.degree as i64);
    Ok(up.value(&(&m * x))? == m * down.value(x)?)
}

/// `ε*(X, Δ) >= ε*(X', Δ')`.
pub fn check_cover_monotonicity(pair: &P1Pair, cover: &CyclicCover) -> Result<bool> {
    let up = cover_pullback(pair, cover)?;
    Ok(p1_evaluate(pair).epsilon_star >= p1_evaluate(&up).epsilon_star)
}
