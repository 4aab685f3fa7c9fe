//! β, β̂ and j from a volume curve plus a log discrepancy, and the conversions
//! between the δ- and ε-threshold formulations.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Rational};
use crate::volfun::{expected_vanishing, VolumeCurve};

/// Invariants of one valuation on one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: usize,
    #[serde(rename = "Ln", with = "rational::serde_str")]
    pub total_volume: Rational,
    /// Log discrepancy `A(F)`.
    #[serde(rename = "A", with = "rational::serde_str")]
    pub log_discrepancy: Rational,
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    /// Normalized expected vanishing `S = (1/L^n) ∫ vol`.
    #[serde(rename = "S", with = "rational::serde_str")]
    pub expected_vanishing: Rational,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    #[serde(with = "rational::serde_str")]
    pub betahat: Rational,
    #[serde(with = "rational::serde_str")]
    pub j: Rational,
}

/// Floating-point view of a report, for humans only.
#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    #[serde(rename = "Ln")]
    pub total_volume: f64,
    #[serde(rename = "A")]
    pub log_discrepancy: f64,
    pub tau: f64,
    #[serde(rename = "S")]
    pub expected_vanishing: f64,
    pub beta: f64,
    pub betahat: f64,
    pub j: f64,
}

impl InvariantReport {
    pub fn approx(&self) -> ApproxReport {
        ApproxReport {
            total_volume: rational::to_f64(&self.total_volume),
            log_discrepancy: rational::to_f64(&self.log_discrepancy),
            tau: rational::to_f64(&self.tau),
            expected_vanishing: rational::to_f64(&self.expected_vanishing),
            beta: rational::to_f64(&self.beta),
            betahat: rational::to_f64(&self.betahat),
            j: rational::to_f64(&self.j),
        }
    }

    /// `j = (τ - A) L^n + β`
    pub fn j_identity_holds(&self) -> bool {
        self.j == (&self.tau - &self.log_discrepancy) * &self.total_volume + &self.beta
    }
}

pub fn make_report(
    n: usize,
    total_volume: &Rational,
    log_discrepancy: &Rational,
    curve: &VolumeCurve,
) -> Result<InvariantReport> {
    if curve.dimension() != n {
        return Err(Error::Consistency(format!(
            "curve has dimension {}, expected {n}",
            curve.dimension()
        )));
    }
    if curve.total_volume() != total_volume {
        return Err(Error::Consistency(format!(
            "curve has L^n = {}, expected {total_volume}",
            curve.total_volume()
        )));
    }
    if !log_discrepancy.is_positive() {
        return Err(Error::Precondition(format!(
            "log discrepancy {log_discrepancy} must be positive"
        )));
    }
    let s = expected_vanishing(curve);
    let tau = curve.tau().clone();
    let beta = (log_discrepancy - &s) * total_volume;
    let betahat = Rational::one() - &s / log_discrepancy;
    let j = (&tau - &s) * total_volume;
    Ok(InvariantReport {
        n,
        total_volume: total_volume.clone(),
        log_discrepancy: log_discrepancy.clone(),
        tau,
        expected_vanishing: s,
        beta,
        betahat,
        j,
    })
}

/// `1/(n+1)` when `τ <= A`, a certified lower bound for β̂ needing no curve.
pub fn quick_positive_bound(
    log_discrepancy: &Rational,
    tau: &Rational,
    n: usize,
) -> Option<Rational> {
    (tau <= log_discrepancy).then(|| frac(1, n as i64 + 1))
}

/// `δ' = δ / (1 - δ)`; also maps `ε` to `ε'`.
pub fn to_primed(t: &Rational) -> Result<Rational> {
    if !t.is_positive() || t >= &Rational::one() {
        return Err(Error::Range(format!("{t} not in (0, 1)")));
    }
    Ok(t / (Rational::one() - t))
}

/// `δ = δ' / (1 + δ')`; also maps `ε'` to `ε`.
pub fn from_primed(t: &Rational) -> Result<Rational> {
    if !t.is_positive() {
        return Err(Error::Range(format!("{t} not in (0, ∞)")));
    }
    Ok(t / (Rational::one() + t))
}

/// `δ' = ε'/(n+1)`: inequality (two) at ε' implies inequality (one) at this δ'.
pub fn delta_from_epsilon(epsilon_prime: &Rational, n: usize) -> Rational {
    epsilon_prime / int(n as i64 + 1)
}

/// Returns `(ε', θ)`: inequality (one) at δ' implies inequality (two) at ε'.
pub fn epsilon_from_delta(delta_prime: &Rational, n: usize) -> (Rational, Rational) {
    let n = n as i64;
    let two_d = int(2) * delta_prime;
    let theta = rational::max(&frac(2 * n, 2 * n + 1), &(&two_d / (&two_d + int(1))));
    let t = delta_prime * (Rational::one() - &theta) / &theta;
    let first = &t / (Rational::one() - &t);
    let eps = rational::min(&first, &frac(1, 2 * n + 1));
    (eps, theta)
}

/// Inequality (one): `(1+δ')A - δ'τ >= S`; equivalently `β >= δ j`.
pub fn predicate_one(report: &InvariantReport, delta_prime: &Rational) -> bool {
    (Rational::one() + delta_prime) * &report.log_discrepancy - delta_prime * &report.tau
        >= report.expected_vanishing
}

/// Inequality (two): `A >= (1+ε') S`; equivalently `β̂ >= ε`.
pub fn predicate_two(report: &InvariantReport, epsilon_prime: &Rational) -> bool {
    report.log_discrepancy >= (Rational::one() + epsilon_prime) * &report.expected_vanishing
}

/// The full set of threshold parameters in both normalizations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdParams {
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "rational::serde_str")]
    pub delta_prime: Rational,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_str")]
    pub epsilon_prime: Rational,
    /// Present only when ε' was produced from δ'.
    #[serde(
        with = "rational::serde_opt",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub theta: Option<Rational>,
}

impl ThresholdParams {
    /// Start from `δ ∈ (0,1)` and derive `ε'` through `epsilon_from_delta`.
    pub fn from_delta(delta: &Rational, n: usize) -> Result<Self> {
        let delta_prime = to_primed(delta)?;
        let (epsilon_prime, theta) = epsilon_from_delta(&delta_prime, n);
        Ok(ThresholdParams {
            n,
            delta: delta.clone(),
            delta_prime,
            epsilon: from_primed(&epsilon_prime)?,
            epsilon_prime,
            theta: Some(theta),
        })
    }

    /// Start from `ε ∈ (0,1)` and derive `δ'` through `delta_from_epsilon`.
    pub fn from_epsilon(epsilon: &Rational, n: usize) -> Result<Self> {
        let epsilon_prime = to_primed(epsilon)?;
        let delta_prime = delta_from_epsilon(&epsilon_prime, n);
        Ok(ThresholdParams {
            n,
            delta: from_primed(&delta_prime)?,
            delta_prime,
            epsilon: epsilon.clone(),
            epsilon_prime,
            theta: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::volfun::{linear_curve, PiecewisePolynomial};
    use proptest::prelude::*;

    fn plane_curve(d: i64) -> VolumeCurve {
        let body = PiecewisePolynomial::single(
            int(0),
            frac(3, d),
            Polynomial::linear(int(3), int(-d)).pow(2),
        )
        .unwrap();
        VolumeCurve::new(body, 2).unwrap()
    }

    #[test]
    fn report_examples() {
        let r = make_report(1, &int(2), &int(1), &linear_curve(&int(2)).unwrap()).unwrap();
        assert_eq!(
            (
                r.betahat.clone(),
                r.beta.clone(),
                r.j.clone(),
                r.tau.clone()
            ),
            (int(0), int(0), int(2), int(2))
        );
        let line = make_report(2, &int(9), &int(1), &plane_curve(1)).unwrap();
        assert_eq!(line.betahat, int(0));
        let conic = make_report(2, &int(9), &int(1), &plane_curve(2)).unwrap();
        assert_eq!(conic.betahat, frac(1, 2));
        assert_eq!(conic.expected_vanishing, frac(1, 2));
        for r in [r, line, conic] {
            assert!(r.j_identity_holds());
            assert!(r.j.is_positive());
            assert!(r.expected_vanishing < r.tau);
        }
    }

    #[test]
    fn report_consistency_errors() {
        let c = linear_curve(&int(2)).unwrap();
        assert!(matches!(
            make_report(2, &int(2), &int(1), &c),
            Err(Error::Consistency(_))
        ));
        assert!(matches!(
            make_report(1, &int(3), &int(1), &c),
            Err(Error::Consistency(_))
        ));
        assert!(matches!(
            make_report(1, &int(2), &int(0), &c),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn quick_bound_examples() {
        assert_eq!(quick_positive_bound(&int(3), &int(2), 2), Some(frac(1, 3)));
        assert_eq!(quick_positive_bound(&int(1), &int(1), 1), Some(frac(1, 2)));
        assert_eq!(quick_positive_bound(&int(1), &int(3), 2), None);
    }

    #[test]
    fn conversion_examples() {
        assert_eq!(delta_from_epsilon(&int(1), 2), frac(1, 3));
        assert_eq!(delta_from_epsilon(&frac(1, 5), 2), frac(1, 15));
        assert_eq!(delta_from_epsilon(&int(3), 1), frac(3, 2));

        assert_eq!(epsilon_from_delta(&int(1), 2), (frac(1, 5), frac(4, 5)));
        assert_eq!(epsilon_from_delta(&int(1), 1), (frac(1, 3), frac(2, 3)));
        assert_eq!(
            epsilon_from_delta(&frac(1, 100), 2),
            (frac(1, 399), frac(4, 5))
        );
    }

    #[test]
    fn threshold_params() {
        let p = ThresholdParams::from_delta(&frac(1, 2), 2).unwrap();
        assert_eq!(p.delta_prime, int(1));
        assert_eq!(p.theta, Some(frac(4, 5)));
        assert_eq!(p.epsilon_prime, frac(1, 5));
        assert_eq!(p.epsilon, frac(1, 6));
        let q = ThresholdParams::from_epsilon(&frac(1, 2), 2).unwrap();
        assert_eq!(
            (q.epsilon_prime, q.delta_prime, q.delta),
            (int(1), frac(1, 3), frac(1, 4))
        );
        assert!(matches!(
            ThresholdParams::from_delta(&int(1), 2),
            Err(Error::Range(_))
        ));
        assert!(ThresholdParams::from_epsilon(&int(0), 2).is_err());
    }

    #[test]
    fn conic_saturates_predicate_two() {
        let conic = make_report(2, &int(9), &int(1), &plane_curve(2)).unwrap();
        assert!(predicate_two(&conic, &int(1)));
        assert!(!predicate_two(&conic, &frac(101, 100)));
    }

    fn arb_report() -> impl Strategy<Value = InvariantReport> {
        // linear P1-style curves with arbitrary positive A
        (1i64..40, 1i64..10, 1i64..40, 1i64..10).prop_map(|(ln, lq, a, aq)| {
            let ln = frac(ln, lq);
            make_report(1, &ln, &frac(a, aq), &linear_curve(&ln).unwrap()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn predicate_two_is_betahat_bound(r in arb_report(), e in 1i64..50, q in 1i64..50) {
            let eps_prime = frac(e, q);
            let eps = from_primed(&eps_prime).unwrap();
            prop_assert_eq!(predicate_two(&r, &eps_prime), r.betahat >= eps);
        }

        #[test]
        fn predicate_one_is_beta_vs_j(r in arb_report(), d in 1i64..50, q in 1i64..50) {
            let delta_prime = frac(d, q);
            let delta = from_primed(&delta_prime).unwrap();
            prop_assert_eq!(predicate_one(&r, &delta_prime), r.beta >= &delta * &r.j);
        }

        #[test]
        fn claims_hold_on_linear_curves(r in arb_report(), p in 1i64..50, q in 1i64..50) {
            let t = frac(p, q);
            prop_assert!(r.j_identity_holds());
            if predicate_two(&r, &t) {
                prop_assert!(predicate_one(&r, &delta_from_epsilon(&t, r.n)));
            }
            if predicate_one(&r, &t) {
                prop_assert!(predicate_two(&r, &epsilon_from_delta(&t, r.n).0));
            }
        }

        #[test]
        fn primed_round_trip(p in 1i64..99) {
            let t = frac(p, 100);
            prop_assert_eq!(from_primed(&to_primed(&t).unwrap()).unwrap(), t);
        }
    }
}
