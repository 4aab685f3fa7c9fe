use std::fmt::Write as _;

use kstab_core::invariants::ApproxReport;
use kstab_core::p2wb::BetaHatRange;
use kstab_core::rational::{self, Rational};
use kstab_core::toric::PolytopeView;
use kstab_core::verify::{CheckResult, Suite};
use kstab_core::{InvariantReport, ThresholdParams, Verdict, VolumeCurve};
use serde::Serialize;

use crate::descriptor::PairDescriptor;

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub valuation: String,
    pub report: InvariantReport,
    #[serde(with = "rational::serde_opt", skip_serializing_if = "Option::is_none")]
    pub beta_barycenter: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxReport>,
    #[serde(skip)]
    pub curve: VolumeCurve,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summary {
    P1 {
        #[serde(flatten)]
        verdict: Verdict,
        #[serde(with = "rational::serde_str")]
        epsilon_star: Rational,
    },
    Toric {
        polytope: PolytopeView,
        #[serde(skip_serializing_if = "Option::is_none")]
        radius: Option<i64>,
        minimum: String,
        #[serde(with = "rational::serde_str")]
        min_betahat: Rational,
    },
    PlaneDivisor {
        d: u32,
    },
    WeightedBlowup {
        a: u32,
        b: u32,
        #[serde(with = "rational::serde_str")]
        tau: Rational,
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        #[serde(with = "rational::serde_str")]
        self_intersection: Rational,
    },
    WeightedBlowupWindow {
        ranges: Vec<BetaHatRange>,
    },
    Suite {
        suite: Suite,
        fixtures: usize,
    },
    Convert(ThresholdParams),
}

/// Everything a command produced. Deterministic unless `wall_time_ms` is set.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PairDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub evaluations: Vec<Evaluation>,
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: &str, summary: Summary) -> Self {
        RunReport {
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            input: None,
            seed: None,
            evaluations: Vec::new(),
            summary,
            checks: Vec::new(),
            passed: true,
            wall_time_ms: None,
        }
    }

    pub fn with_checks(mut self, checks: Vec<CheckResult>) -> Self {
        self.passed = checks.iter().all(CheckResult::passed);
        self.checks = checks;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Curves of all evaluations, one row per grid point, prefixed by the valuation.
    pub fn to_csv(&self, steps: usize) -> kstab_core::Result<String> {
        let mut out = String::from("valuation,x,vol,x_exact,vol_exact\n");
        for e in &self.evaluations {
            let csv = e.curve.to_csv(&e.curve.uniform_grid(steps))?;
            for line in csv.lines().skip(1) {
                writeln!(out, "{},{line}", csv_field(&e.valuation)).unwrap();
            }
        }
        Ok(out)
    }

    pub fn to_text(&self, float: bool) -> String {
        let q = |x: &Rational| {
            if float {
                format!("{} (~{:.6})", rational::fmt(x), rational::to_f64(x))
            } else {
                rational::fmt(x)
            }
        };
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "kstab {} {}", self.version, self.command).unwrap();
        if let Some(label) = self.input.as_ref().and_then(|i| i.label.as_ref()) {
            writeln!(w, "label: {label}").unwrap();
        }
        match &self.summary {
            Summary::P1 {
                verdict,
                epsilon_star,
            } => {
                let v = match verdict {
                    Verdict::UniformlyKStable { epsilon } => {
                        format!("uniformly K-stable, epsilon = {}", q(epsilon))
                    }
                    Verdict::KSemistableOnly { witness } => {
                        format!("K-semistable, not uniformly K-stable (witness {witness})")
                    }
                    Verdict::Unstable { witness, betahat } => {
                        format!("K-unstable (witness {witness}, betahat = {})", q(betahat))
                    }
                };
                writeln!(w, "verdict: {v}").unwrap();
                writeln!(w, "epsilon*: {}", q(epsilon_star)).unwrap();
            }
            Summary::Toric {
                radius,
                minimum,
                min_betahat,
                polytope,
            } => {
                writeln!(
                    w,
                    "polytope vertices: {}",
                    polytope
                        .vertices
                        .iter()
                        .map(|v| format!("({})", v.join(",")))
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
                if let Some(r) = radius {
                    writeln!(w, "sweep radius: {r}").unwrap();
                }
                writeln!(w, "minimum betahat: {} at v = {minimum}", q(min_betahat)).unwrap();
            }
            Summary::PlaneDivisor { d } => writeln!(w, "plane curve of degree {d}").unwrap(),
            Summary::WeightedBlowup {
                a,
                b,
                tau,
                epsilon,
                self_intersection,
            } => {
                writeln!(
                    w,
                    "weights ({a},{b}), tau = {}, epsilon = {}, E^2 = {}",
                    q(tau),
                    q(epsilon),
                    q(self_intersection)
                )
                .unwrap();
            }
            Summary::WeightedBlowupWindow { ranges } => {
                for r in ranges {
                    writeln!(
                        w,
                        "({},{}): min betahat = {} at {}, betahat at left end in [{}, {}]",
                        r.a,
                        r.b,
                        q(&r.min),
                        r.min_at,
                        q(&r.betahat_at_lower[0]),
                        q(&r.betahat_at_lower[1])
                    )
                    .unwrap();
                }
            }
            Summary::Suite { suite, fixtures } => {
                writeln!(w, "suite {suite}: {fixtures} fixtures").unwrap();
            }
            Summary::Convert(t) => {
                writeln!(w, "n = {}", t.n).unwrap();
                writeln!(w, "delta = {}", q(&t.delta)).unwrap();
                writeln!(w, "delta' = {}", q(&t.delta_prime)).unwrap();
                if let Some(theta) = &t.theta {
                    writeln!(w, "theta = {}", q(theta)).unwrap();
                }
                writeln!(w, "epsilon = {}", q(&t.epsilon)).unwrap();
                writeln!(w, "epsilon' = {}", q(&t.epsilon_prime)).unwrap();
            }
        }
        for e in &self.evaluations {
            let r = &e.report;
            write!(
                w,
                "{}: A = {}, tau = {}, S = {}, beta = {}, betahat = {}, j = {}",
                e.valuation,
                q(&r.log_discrepancy),
                q(&r.tau),
                q(&r.expected_vanishing),
                q(&r.beta),
                q(&r.betahat),
                q(&r.j)
            )
            .unwrap();
            if let Some(b) = &e.beta_barycenter {
                write!(w, ", beta (barycenter) = {}", q(b)).unwrap();
            }
            writeln!(w).unwrap();
        }
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            write!(w, "check {}: {status} ({} evaluated", c.name, c.evaluated).unwrap();
            if let Some(f) = &c.first_failure {
                write!(w, ", {} failures, first: {f}", c.failures).unwrap();
            }
            writeln!(w, ")").unwrap();
        }
        if let Some(ms) = self.wall_time_ms {
            writeln!(w, "wall time: {ms} ms").unwrap();
        }
        writeln!(w, "{}", if self.passed { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
