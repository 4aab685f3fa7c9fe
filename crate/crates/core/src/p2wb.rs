//! Closed-form invariants of plt blowups over `P^2`: plane curves of degree
//! `d` and weighted blowups with coprime weights `a >= b` at a smooth point.
//!
//! For a weighted blowup `A = a + b`, `F^2 = -1/(ab)`, and the pseudo-effective
//! threshold `τ` is only known to lie in `[3√(ab), 3a]`, so `τ` is an input.
//! With `ε = 9ab/τ` (the nef threshold),
//!
//! ```text
//! vol(x) = 9 (1 - x²/(ετ))            on [0, ε]
//!        = 9 (τ - x)² / (τ (τ - ε))   on [ε, τ]
//! β̂      = 1 - (ε + τ) / (3 (a + b))
//! ```

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{make_report, InvariantReport};
use crate::poly::Polynomial;
use crate::rational::{self, frac, int, root_bracket, Rational};
use crate::toric::{moment_polytope, toric_evaluate, FanPair, LatticeVector};
use crate::volfun::{PiecewisePolynomial, VolumeCurve};

/// Default width of rational brackets around `√(ab)`.
pub fn default_bracket_width() -> Rational {
    frac(1, 1_000_000)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPlaneCase")]
pub struct PlaneDivisorCase {
    pub d: u32,
}

#[derive(Deserialize)]
struct RawPlaneCase {
    d: u32,
}

impl TryFrom<RawPlaneCase> for PlaneDivisorCase {
    type Error = Error;
    fn try_from(raw: RawPlaneCase) -> Result<Self> {
        PlaneDivisorCase::new(raw.d)
    }
}

impl PlaneDivisorCase {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Precondition("degree d must be >= 1".into()));
        }
        Ok(PlaneDivisorCase { d })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneDivisorResult {
    pub d: u32,
    pub curve: VolumeCurve,
    pub report: InvariantReport,
}

/// `vol = (3 - dx)²` on `[0, 3/d]`, `A = 1`.
pub fn plane_divisor_report(case: &PlaneDivisorCase) -> Result<PlaneDivisorResult> {
    let d = case.d as i64;
    let body = PiecewisePolynomial::single(
        Rational::zero(),
        frac(3, d),
        Polynomial::linear(int(3), int(-d)).pow(2),
    )?;
    let curve = VolumeCurve::new(body, 2)?;
    let report = make_report(2, &int(9), &Rational::one(), &curve)?;
    if report.betahat != frac(d - 1, d) {
        return Err(Error::Consistency(format!(
            "betahat {} != (d-1)/d for d = {d}",
            report.betahat
        )));
    }
    Ok(PlaneDivisorResult {
        d: case.d,
        curve,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct WeightedBlowupDescriptor {
    pub a: u32,
    pub b: u32,
    #[serde(
        with = "rational::serde_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub tau: Option<Rational>,
}

#[derive(Deserialize)]
struct RawDescriptor {
    a: u32,
    b: u32,
    #[serde(with = "rational::serde_opt", default)]
    tau: Option<Rational>,
}

impl TryFrom<RawDescriptor> for WeightedBlowupDescriptor {
    type Error = Error;
    fn try_from(raw: RawDescriptor) -> Result<Self> {
        WeightedBlowupDescriptor::new(raw.a, raw.b, raw.tau)
    }
}

fn check_weights(a: u32, b: u32) -> Result<()> {
    if b < 1 || a < b {
        return Err(Error::Precondition(format!(
            "weights ({a}, {b}) must satisfy a >= b >= 1"
        )));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::Precondition(format!(
            "weights ({a}, {b}) are not coprime"
        )));
    }
    Ok(())
}

/// Whether `τ ∈ [3√(ab), 3a]`, decided by squaring the left end.
pub fn tau_admissible(a: u32, b: u32, tau: &Rational) -> bool {
    let (a, b) = (a as i64, b as i64);
    tau * tau >= int(9 * a * b) && tau <= &int(3 * a)
}

impl WeightedBlowupDescriptor {
    pub fn new(a: u32, b: u32, tau: Option<Rational>) -> Result<Self> {
        check_weights(a, b)?;
        if let Some(t) = &tau {
            if !tau_admissible(a, b, t) {
                return Err(Error::Precondition(format!(
                    "tau = {t} outside the window [3·sqrt({}), {}]",
                    a as u64 * b as u64,
                    3 * a
                )));
            }
        }
        Ok(WeightedBlowupDescriptor { a, b, tau })
    }

    pub fn log_discrepancy(&self) -> Rational {
        int(self.a as i64 + self.b as i64)
    }

    /// `(F²)_Y = -1/(ab)`
    pub fn self_intersection(&self) -> Rational {
        -frac(1, self.a as i64 * self.b as i64)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedBlowupResult {
    pub a: u32,
    pub b: u32,
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_str")]
    pub self_intersection: Rational,
    pub curve: VolumeCurve,
    pub report: InvariantReport,
}

/// `β̂ = 1 - (ε + τ)/(3(a+b))` with `ε = 9ab/τ`, no curve needed.
pub fn wb_betahat_closed_form(a: u32, b: u32, tau: &Rational) -> Rational {
    let ab = int(a as i64 * b as i64);
    let eps = int(9) * ab / tau;
    Rational::one() - (eps + tau) / int(3 * (a as i64 + b as i64))
}

/// The two-branch curve for admissible `τ`; a single branch when `ε = τ`.
pub fn wb_curve(tau: &Rational, epsilon: &Rational) -> Result<VolumeCurve> {
    let nine = int(9);
    let first = Polynomial::new(vec![
        nine.clone(),
        Rational::zero(),
        -&nine / (epsilon * tau),
    ]);
    let body = if epsilon == tau {
        PiecewisePolynomial::single(Rational::zero(), tau.clone(), first)?
    } else {
        let c = &nine / (tau * (tau - epsilon));
        let second = Polynomial::linear(tau.clone(), int(-1)).pow(2).scale(&c);
        PiecewisePolynomial::new(
            vec![Rational::zero(), epsilon.clone(), tau.clone()],
            vec![first, second],
        )?
    };
    VolumeCurve::new(body, 2)
}

pub fn wb_report(desc: &WeightedBlowupDescriptor) -> Result<WeightedBlowupResult> {
    let tau = desc
        .tau
        .clone()
        .ok_or_else(|| Error::Precondition("wb_report needs tau".into()))?;
    let ab = int(desc.a as i64 * desc.b as i64);
    let epsilon = int(9) * &ab / &tau;
    let curve = wb_curve(&tau, &epsilon)?;
    let report = make_report(2, &int(9), &desc.log_discrepancy(), &curve)?;
    let closed = wb_betahat_closed_form(desc.a, desc.b, &tau);
    if report.betahat != closed {
        return Err(Error::Consistency(format!(
            "integrated betahat {} != closed form {closed}",
            report.betahat
        )));
    }
    Ok(WeightedBlowupResult {
        a: desc.a,
        b: desc.b,
        tau,
        epsilon,
        self_intersection: desc.self_intersection(),
        curve,
        report,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaHatRange {
    pub a: u32,
    pub b: u32,
    /// Minimum of β̂ over the admissible window.
    #[serde(with = "rational::serde_str")]
    pub min: Rational,
    #[serde(with = "rational::serde_str")]
    pub min_at_tau: Rational,
    pub min_at: String,
    pub positivity: bool,
    /// Bracket of the left window end `3√(ab)`.
    #[serde(with = "rational::serde_vec")]
    pub tau_lower: Vec<Rational>,
    /// Bracket of β̂ at the left end, `1 - 2√(ab)/(a+b)`.
    #[serde(with = "rational::serde_vec")]
    pub betahat_at_lower: Vec<Rational>,
}

/// Minimum of β̂ over `τ ∈ [3√(ab), 3a]`.
///
/// `τ + 9ab/τ` has derivative `1 - 9ab/τ² >= 0` on the window, so β̂ is
/// non-increasing in `τ` and the minimum sits at `τ = 3a`, where it is
/// evaluated exactly through [`wb_report`].
pub fn wb_betahat_range(a: u32, b: u32, width: &Rational) -> Result<BetaHatRange> {
    check_weights(a, b)?;
    let top = int(3 * a as i64);
    let at_top = wb_report(&WeightedBlowupDescriptor::new(a, b, Some(top.clone()))?)?;
    let min = at_top.report.betahat;
    let ab = int(a as i64 * b as i64);
    let (q_lo, q_hi) = root_bracket(&ab, 2, width);
    let sum = int(a as i64 + b as i64);
    let two = int(2);
    Ok(BetaHatRange {
        a,
        b,
        positivity: min >= Rational::zero(),
        min,
        min_at: format!("tau = 3a = {top}"),
        min_at_tau: top,
        tau_lower: vec![int(3) * &q_lo, int(3) * &q_hi],
        betahat_at_lower: vec![
            Rational::one() - &two * &q_hi / &sum,
            Rational::one() - &two * &q_lo / &sum,
        ],
    })
}

/// `k + 1` admissible rational `τ` from `3a` down to (a rational upper
/// bracket of) `3√(ab)`, evenly spaced.
pub fn admissible_taus(a: u32, b: u32, k: usize, width: &Rational) -> Vec<Rational> {
    let top = int(3 * a as i64);
    let (_, q_hi) = root_bracket(&int(a as i64 * b as i64), 2, width);
    let bottom = rational::min(&(int(3) * q_hi), &top);
    let k = k.max(1) as i64;
    (0..=k)
        .map(|j| &top - (&top - &bottom) * frac(j, k))
        .filter(|t| tau_admissible(a, b, t))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ToricAgreement {
    pub a: u32,
    pub b: u32,
    pub curves_identical: bool,
    #[serde(with = "rational::serde_str")]
    pub toric_betahat: Rational,
    #[serde(with = "rational::serde_str")]
    pub closed_form_betahat: Rational,
    /// Toric breakpoints of the slice curve; `[0, 3b, 3a]` expected.
    #[serde(with = "rational::serde_vec")]
    pub toric_breakpoints: Vec<Rational>,
}

impl ToricAgreement {
    pub fn holds(&self) -> bool {
        self.curves_identical && self.toric_betahat.is_zero() && self.closed_form_betahat.is_zero()
    }
}

/// Compares the torus-fixed-point specialization `v = (a, b)` on the `P^2`
/// moment triangle with the closed form at `τ = 3a`.
pub fn wb_toric_agreement(a: u32, b: u32) -> Result<ToricAgreement> {
    let closed = wb_report(&WeightedBlowupDescriptor::new(
        a,
        b,
        Some(int(3 * a as i64)),
    )?)?;
    let fp = FanPair::projective_plane();
    let p = moment_polytope(&fp)?;
    let toric = toric_evaluate(&fp, &p, &LatticeVector::new(vec![a as i64, b as i64]))?;
    Ok(ToricAgreement {
        a,
        b,
        curves_identical: toric.curve.body().same_function(closed.curve.body())
            && toric.curve.tau() == closed.curve.tau(),
        toric_betahat: toric.report.betahat,
        closed_form_betahat: closed.report.betahat,
        toric_breakpoints: toric.curve.body().breakpoints().to_vec(),
    })
}

pub fn wb_consistency_with_toric(a: u32, b: u32) -> Result<bool> {
    Ok(wb_toric_agreement(a, b)?.holds())
}

/// Coprime `(a, b)` with `1 <= b <= a <= max_a`.
pub fn coprime_weights(max_a: u32) -> Vec<(u32, u32)> {
    (1..=max_a)
        .flat_map(|a| {
            (1..=a)
                .filter(move |&b| a.gcd(&b) == 1)
                .map(move |b| (a, b))
        })
        .collect()
}
