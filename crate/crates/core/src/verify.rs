//! Named property suites over generated geometric fixtures.
//!
//! Every suite is deterministic given its [`VerifyOptions`].

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dim1::{p1_report, p1_volume_curve, MarkedPoint, P1Pair, P1Point};
use crate::error::{Error, Result};
use crate::invariants::{
    delta_from_epsilon, epsilon_from_delta, predicate_one, predicate_two, quick_positive_bound,
    InvariantReport,
};
use crate::p2wb::{
    admissible_taus, coprime_weights, default_bracket_width, plane_divisor_report, wb_report,
    wb_toric_agreement, PlaneDivisorCase, WeightedBlowupDescriptor,
};
use crate::rational::{self, frac, int, Rational};
use crate::toric::{
    lattice_volume_estimate, moment_polytope, primitive_vectors, toric_evaluate, FanPair,
    LatticeVector,
};
use crate::volfun::{
    check_fujita_lower, check_log_concavity, check_tau_upper, concavity_triples, VolumeCurve,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Inequalities,
    ToricVsP2wb,
    LatticeLimit,
    WeightedBlowup,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Inequalities,
        Suite::ToricVsP2wb,
        Suite::LatticeLimit,
        Suite::WeightedBlowup,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Inequalities => "inequalities",
            Suite::ToricVsP2wb => "toric-vs-p2wb",
            Suite::LatticeLimit => "lattice-limit",
            Suite::WeightedBlowup => "weighted-blowup",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Suite::ALL.iter().map(Suite::name).collect();
                Error::Parse(format!("unknown suite {s:?} (known: {})", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random pairs generated per randomized family.
    pub samples: usize,
    pub max_a: u32,
    pub k: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 7,
            samples: 60,
            max_a: 10,
            k: 30,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub evaluated: usize,
    pub failures: usize,
    /// First failing case, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str) -> Self {
        CheckResult {
            name: name.into(),
            evaluated: 0,
            failures: 0,
            first_failure: None,
        }
    }

    pub fn record(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.evaluated += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(label);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub fixtures: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// A curve produced by one of the geometric constructions, with its report.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub label: String,
    pub curve: VolumeCurve,
    pub report: InvariantReport,
}

fn random_p1_pair(rng: &mut ChaCha8Rng) -> P1Pair {
    loop {
        let count = rng.random_range(0..=4);
        let mut points = Vec::new();
        let mut used = Vec::new();
        for i in 0..count {
            let at = if i == 0 && rng.random_bool(0.3) {
                P1Point::Infinity
            } else {
                let q = frac(rng.random_range(-6..=6), rng.random_range(1..=3));
                if used.contains(&q) {
                    continue;
                }
                used.push(q.clone());
                P1Point::Finite(q)
            };
            let den = rng.random_range(2..=12);
            points.push(MarkedPoint::new(at, frac(rng.random_range(1..den), den)));
        }
        if let Ok(p) = P1Pair::new(points) {
            return p;
        }
    }
}

fn random_coefficients(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    (0..count)
        .map(|_| {
            if rng.random_bool(0.4) {
                Rational::from_integer(0.into())
            } else {
                let den = rng.random_range(2..=6);
                frac(rng.random_range(1..den), den)
            }
        })
        .collect()
}

fn toric_fixtures(label: &str, fp: &FanPair, radius: i64, out: &mut Vec<Fixture>) -> Result<()> {
    let p = moment_polytope(fp)?;
    for v in primitive_vectors(fp.dim(), radius) {
        let e = toric_evaluate(fp, &p, &v)?;
        out.push(Fixture {
            label: format!("{label} v={v}"),
            curve: e.curve,
            report: e.report,
        });
    }
    Ok(())
}

/// The geometric curve population for the inequality suite: random `P^1`
/// pairs, toric sweeps on `P^2`, `P^1 x P^1` (plain and with random
/// boundaries) and `P^3`, plus the closed-form plane cases.
pub fn geometric_fixtures(opts: &VerifyOptions) -> Result<Vec<Fixture>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    for i in 0..opts.samples {
        let pair = random_p1_pair(&mut rng);
        for v in pair.valuations() {
            out.push(Fixture {
                label: format!("p1 #{i} {v}"),
                curve: p1_volume_curve(&pair, &v),
                report: p1_report(&pair, &v),
            });
        }
    }
    toric_fixtures("P2", &FanPair::projective_plane(), 4, &mut out)?;
    toric_fixtures("P1xP1", &FanPair::p1_x_p1(), 3, &mut out)?;
    for i in 0..(opts.samples / 20).max(1) {
        let c = random_coefficients(&mut rng, 4);
        let fp = FanPair::p1_x_p1().with_coefficients(c)?;
        toric_fixtures(&format!("P1xP1+D #{i}"), &fp, 2, &mut out)?;
        let c = random_coefficients(&mut rng, 3);
        let fp = FanPair::projective_plane().with_coefficients(c)?;
        toric_fixtures(&format!("P2+D #{i}"), &fp, 2, &mut out)?;
    }
    toric_fixtures("P3", &FanPair::projective_space3(), 1, &mut out)?;
    for d in 1..=5 {
        let r = plane_divisor_report(&PlaneDivisorCase::new(d)?)?;
        out.push(Fixture {
            label: format!("plane d={d}"),
            curve: r.curve,
            report: r.report,
        });
    }
    for (a, b) in coprime_weights(4) {
        for tau in admissible_taus(a, b, 2, &default_bracket_width()) {
            let r = wb_report(&WeightedBlowupDescriptor::new(a, b, Some(tau.clone()))?)?;
            out.push(Fixture {
                label: format!("wb ({a},{b}) tau={tau}"),
                curve: r.curve,
                report: r.report,
            });
        }
    }
    Ok(out)
}

/// Parameters for the implication checks: a few random values plus the
/// thresholds at which the hypothesis holds with equality.
fn implication_params(r: &InvariantReport, rng: &mut ChaCha8Rng) -> (Vec<Rational>, Vec<Rational>) {
    let mut eps = vec![frac(rng.random_range(1..40), rng.random_range(1..40))];
    let mut deltas = vec![frac(rng.random_range(1..40), rng.random_range(1..40))];
    // β̂ = ε exactly when ε' = β̂/(1-β̂)
    if r.betahat.is_positive() && r.betahat < Rational::one() {
        eps.push(&r.betahat / (Rational::one() - &r.betahat));
    }
    // (1+δ')A - δ'τ = S exactly when δ' = (A-S)/(τ-A)
    let (a, s, t) = (&r.log_discrepancy, &r.expected_vanishing, &r.tau);
    if t > a && a > s {
        deltas.push((a - s) / (t - a));
    }
    (eps, deltas)
}

/// Runs the per-curve inequality checks over `fixtures`. `seed` drives the
/// random parameters of the implication checks.
pub fn check_fixtures(fixtures: &[Fixture], seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut axioms = CheckResult::new("volume_curve_axioms");
    let mut tau_upper = CheckResult::new("tau_upper_bound");
    let mut fujita = CheckResult::new("fujita_lower_bound");
    let mut concave = CheckResult::new("log_concavity");
    let mut quick = CheckResult::new("quick_bound_when_tau_le_A");
    let mut j_ident = CheckResult::new("j_identity");
    let mut report_inv = CheckResult::new("report_invariants");
    let mut two_one = CheckResult::new("two_implies_one");
    let mut one_two = CheckResult::new("one_implies_two");

    for f in fixtures {
        let r = &f.report;
        let c = &f.curve;
        let axioms_ok = VolumeCurve::new(c.body().clone(), c.dimension()).as_ref() == Ok(c)
            && c.body().max_degree() <= c.dimension();
        axioms.record(axioms_ok, || f.label.clone());
        tau_upper.record(check_tau_upper(c), || f.label.clone());
        fujita.record(check_fujita_lower(c, &c.uniform_grid(9))?, || {
            f.label.clone()
        });
        if c.dimension() <= 3 {
            concave.record(check_log_concavity(c, &concavity_triples(c, 4))?, || {
                f.label.clone()
            });
        }
        if let Some(bound) = quick_positive_bound(&r.log_discrepancy, &r.tau, r.n) {
            quick.record(r.betahat >= bound, || f.label.clone());
        }
        j_ident.record(r.j_identity_holds(), || f.label.clone());
        let betahat_def = Rational::one() - &r.expected_vanishing / &r.log_discrepancy;
        report_inv.record(
            r.j.is_positive() && r.expected_vanishing < r.tau && r.betahat == betahat_def,
            || f.label.clone(),
        );
        let (eps, deltas) = implication_params(r, &mut rng);
        for e in &eps {
            if predicate_two(r, e) {
                two_one.record(predicate_one(r, &delta_from_epsilon(e, r.n)), || {
                    format!("{} eps'={}", f.label, rational::fmt(e))
                });
            }
        }
        for d in &deltas {
            if predicate_one(r, d) {
                one_two.record(predicate_two(r, &epsilon_from_delta(d, r.n).0), || {
                    format!("{} delta'={}", f.label, rational::fmt(d))
                });
            }
        }
    }
    Ok(vec![
        axioms, tau_upper, fujita, concave, quick, j_ident, report_inv, two_one, one_two,
    ])
}

fn inequalities(opts: &VerifyOptions) -> Result<SuiteReport> {
    let fixtures = geometric_fixtures(opts)?;
    Ok(SuiteReport {
        suite: Suite::Inequalities,
        seed: opts.seed,
        fixtures: fixtures.len(),
        checks: check_fixtures(&fixtures, opts.seed)?,
    })
}

fn toric_vs_p2wb(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut agree = CheckResult::new("toric_curve_equals_closed_form");
    let mut breaks = CheckResult::new("nef_threshold_is_toric_breakpoint");
    let weights = coprime_weights(opts.max_a);
    for &(a, b) in &weights {
        let t = wb_toric_agreement(a, b)?;
        agree.record(t.holds(), || format!("({a},{b})"));
        let eps = int(3 * b as i64);
        breaks.record(t.toric_breakpoints.contains(&eps), || format!("({a},{b})"));
    }
    Ok(SuiteReport {
        suite: Suite::ToricVsP2wb,
        seed: opts.seed,
        fixtures: weights.len(),
        checks: vec![agree, breaks],
    })
}

/// Relative error tolerance of the lattice estimate at the configured `k`.
pub const LATTICE_TOLERANCE: (i64, i64) = (1, 10);

fn lattice_limit(opts: &VerifyOptions) -> Result<SuiteReport> {
    let fp = FanPair::projective_plane();
    let p = moment_polytope(&fp)?;
    let mut close = CheckResult::new("lattice_estimate_within_tolerance");
    let tol = frac(LATTICE_TOLERANCE.0, LATTICE_TOLERANCE.1);
    let vs = [
        LatticeVector::new(vec![1, 0]),
        LatticeVector::new(vec![2, 1]),
    ];
    for v in &vs {
        let curve = toric_evaluate(&fp, &p, v)?.curve;
        for x in [int(0), frac(1, 2), int(1)] {
            let exact = curve.value(&x)?;
            let est = lattice_volume_estimate(&p, v, opts.k, &x)?;
            let err = ((&est - &exact) / &exact).abs();
            close.record(err < tol, || {
                format!(
                    "v={v} x={x} k={} rel err {}",
                    opts.k,
                    rational::to_f64(&err)
                )
            });
        }
    }
    Ok(SuiteReport {
        suite: Suite::LatticeLimit,
        seed: opts.seed,
        fixtures: vs.len(),
        checks: vec![close],
    })
}

fn weighted_blowup(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut product = CheckResult::new("eps_times_tau_is_9ab");
    let mut betahat = CheckResult::new("integrated_betahat_matches_closed_form");
    let mut slope = CheckResult::new("branches_match_at_eps");
    let mut nonneg = CheckResult::new("betahat_nonnegative_on_window");
    let mut minimum = CheckResult::new("window_minimum_is_zero_at_3a");
    let weights = coprime_weights(opts.max_a);
    for &(a, b) in &weights {
        let ab = int(a as i64 * b as i64);
        for tau in admissible_taus(a, b, 4, &default_bracket_width()) {
            let label = || format!("({a},{b}) tau={tau}");
            let r = wb_report(&WeightedBlowupDescriptor::new(a, b, Some(tau.clone()))?)?;
            product.record(&r.epsilon * &r.tau == int(9) * &ab, label);
            let closed = Rational::one() - (&r.epsilon + &r.tau) / int(3 * (a + b) as i64);
            betahat.record(r.report.betahat == closed, label);
            let (l, rt) = r.curve.body().derivatives_at(&r.epsilon)?;
            let value_ok = r.curve.body().pieces().len() == 1
                || r.curve.body().pieces()[0].eval(&r.epsilon)
                    == r.curve.body().pieces()[1].eval(&r.epsilon);
            slope.record(value_ok && l == rt, label);
            nonneg.record(!r.report.betahat.is_negative(), label);
        }
        let top = wb_report(&WeightedBlowupDescriptor::new(
            a,
            b,
            Some(int(3 * a as i64)),
        )?)?;
        minimum.record(
            top.report.betahat == Rational::from_integer(0.into()),
            || format!("({a},{b})"),
        );
    }
    Ok(SuiteReport {
        suite: Suite::WeightedBlowup,
        seed: opts.seed,
        fixtures: weights.len(),
        checks: vec![product, betahat, slope, nonneg, minimum],
    })
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    log::info!("running suite {suite} with {opts:?}");
    match suite {
        Suite::Inequalities => inequalities(opts),
        Suite::ToricVsP2wb => toric_vs_p2wb(opts),
        Suite::LatticeLimit => lattice_limit(opts),
        Suite::WeightedBlowup => weighted_blowup(opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn fixtures_are_deterministic() {
        let opts = VerifyOptions {
            samples: 10,
            ..Default::default()
        };
        let a: Vec<_> = geometric_fixtures(&opts)
            .unwrap()
            .into_iter()
            .map(|f| f.report)
            .collect();
        let b: Vec<_> = geometric_fixtures(&opts)
            .unwrap()
            .into_iter()
            .map(|f| f.report)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn small_suites_pass() {
        let opts = VerifyOptions {
            samples: 10,
            max_a: 5,
            k: 30,
            seed: 3,
        };
        for s in [
            Suite::ToricVsP2wb,
            Suite::LatticeLimit,
            Suite::WeightedBlowup,
        ] {
            let r = run_suite(s, &opts).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
