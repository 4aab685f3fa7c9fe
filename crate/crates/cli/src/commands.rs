use std::time::Instant;

use kstab_core::dim1::{p1_evaluate, p1_volume_curve};
use kstab_core::p2wb::{
    admissible_taus, coprime_weights, default_bracket_width, plane_divisor_report,
    wb_betahat_range, wb_report,
};
use kstab_core::rational::{self, Rational};
use kstab_core::toric::{moment_polytope, toric_evaluate, toric_sweep, ToricEvaluation};
use kstab_core::verify::{check_fixtures, run_suite, CheckResult, Fixture, Suite, VerifyOptions};
use kstab_core::{
    Error, FanPair, LatticeVector, P1Pair, PlaneDivisorCase, ThresholdParams,
    WeightedBlowupDescriptor,
};

use crate::descriptor::{PairDescriptor, PairKind};
use crate::error::{CliError, Result};
use crate::report::{Evaluation, RunReport, Summary};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_RADIUS: i64 = 3;

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub seed: u64,
    /// Sweep radius for toric pairs when no single `v` is given.
    pub radius: i64,
    /// Evaluate only this toric valuation.
    pub v: Option<LatticeVector>,
    pub float: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            seed: DEFAULT_SEED,
            radius: DEFAULT_RADIUS,
            v: None,
            float: false,
        }
    }
}

fn evaluation(
    label: String,
    fixture: (kstab_core::VolumeCurve, kstab_core::InvariantReport),
    opts: &EvalOptions,
) -> Evaluation {
    let (curve, report) = fixture;
    Evaluation {
        valuation: label,
        approx: opts.float.then(|| report.approx()),
        report,
        beta_barycenter: None,
        curve,
    }
}

fn toric_entry(e: ToricEvaluation, opts: &EvalOptions) -> Evaluation {
    let mut out = evaluation(e.v.to_string(), (e.curve, e.report), opts);
    out.beta_barycenter = Some(e.beta_barycenter);
    out
}

fn eval_p1(pair: &P1Pair, opts: &EvalOptions) -> (Vec<Evaluation>, Summary) {
    let result = p1_evaluate(pair);
    let evaluations = result
        .reports
        .into_iter()
        .map(|(v, r)| evaluation(v.to_string(), (p1_volume_curve(pair, &v), r), opts))
        .collect();
    (
        evaluations,
        Summary::P1 {
            verdict: result.verdict,
            epsilon_star: result.epsilon_star,
        },
    )
}

fn eval_toric(fp: &FanPair, opts: &EvalOptions) -> Result<(Vec<Evaluation>, Summary)> {
    let p = moment_polytope(fp)?;
    let (entries, radius) = match &opts.v {
        Some(v) => (vec![toric_evaluate(fp, &p, v)?], None),
        None => (toric_sweep(fp, opts.radius)?.entries, Some(opts.radius)),
    };
    let first = entries
        .first()
        .ok_or_else(|| CliError::Usage("no primitive vectors in range".into()))?;
    let summary = Summary::Toric {
        polytope: (&p).into(),
        radius,
        minimum: first.v.to_string(),
        min_betahat: first.report.betahat.clone(),
    };
    Ok((
        entries.into_iter().map(|e| toric_entry(e, opts)).collect(),
        summary,
    ))
}

fn eval_plane(case: &PlaneDivisorCase, opts: &EvalOptions) -> Result<(Vec<Evaluation>, Summary)> {
    let r = plane_divisor_report(case)?;
    let e = evaluation(format!("ord_C (deg {})", r.d), (r.curve, r.report), opts);
    Ok((vec![e], Summary::PlaneDivisor { d: case.d }))
}

fn eval_weighted(
    desc: &WeightedBlowupDescriptor,
    opts: &EvalOptions,
) -> Result<(Vec<Evaluation>, Summary)> {
    let (a, b) = (desc.a, desc.b);
    if desc.tau.is_some() {
        let r = wb_report(desc)?;
        let summary = Summary::WeightedBlowup {
            a,
            b,
            tau: r.tau.clone(),
            epsilon: r.epsilon.clone(),
            self_intersection: r.self_intersection.clone(),
        };
        let e = evaluation(
            format!("wt({a},{b}) tau={}", rational::fmt(&r.tau)),
            (r.curve, r.report),
            opts,
        );
        return Ok((vec![e], summary));
    }
    let width = default_bracket_width();
    let range = wb_betahat_range(a, b, &width)?;
    let mut evaluations = Vec::new();
    for tau in admissible_taus(a, b, 4, &width) {
        let r = wb_report(&WeightedBlowupDescriptor::new(a, b, Some(tau.clone()))?)?;
        evaluations.push(evaluation(
            format!("wt({a},{b}) tau={}", rational::fmt(&tau)),
            (r.curve, r.report),
            opts,
        ));
    }
    evaluations.dedup_by(|x, y| x.valuation == y.valuation);
    Ok((
        evaluations,
        Summary::WeightedBlowupWindow {
            ranges: vec![range],
        },
    ))
}

fn timed<T>(timing: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, Option<u128>)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, timing.then(|| start.elapsed().as_millis())))
}

/// Evaluates a descriptor, then runs the per-curve inequality checks on every
/// curve it produced.
pub fn cmd_eval(desc: &PairDescriptor, opts: &EvalOptions, timing: bool) -> Result<RunReport> {
    let kind = desc.kind().map_err(CliError::Usage)?;
    let ((evaluations, summary, checks), ms) = timed(timing, || {
        let (evaluations, summary) = match kind {
            PairKind::P1(p) => eval_p1(p, opts),
            PairKind::Toric(fp) => eval_toric(fp, opts)?,
            PairKind::PlaneDivisor(c) => eval_plane(c, opts)?,
            PairKind::WeightedBlowup(d) => eval_weighted(d, opts)?,
        };
        let fixtures: Vec<Fixture> = evaluations
            .iter()
            .map(|e| Fixture {
                label: e.valuation.clone(),
                curve: e.curve.clone(),
                report: e.report.clone(),
            })
            .collect();
        let checks = check_fixtures(&fixtures, opts.seed)?;
        Ok((evaluations, summary, checks))
    })?;
    let mut report = RunReport::new("eval", summary).with_checks(checks);
    report.input = Some(desc.clone());
    report.seed = Some(opts.seed);
    report.evaluations = evaluations;
    report.wall_time_ms = ms;
    Ok(report)
}

/// Minimum of β̂ over the admissible window for every coprime pair up to `max_a`.
pub fn cmd_p2wb_sweep(max_a: u32, timing: bool) -> Result<RunReport> {
    let ((ranges, check), ms) = timed(timing, || {
        let width = default_bracket_width();
        let mut check = CheckResult::new("betahat_nonnegative_on_window");
        let mut ranges = Vec::new();
        for (a, b) in coprime_weights(max_a) {
            let r = wb_betahat_range(a, b, &width)?;
            check.record(r.positivity, || format!("({a},{b})"));
            ranges.push(r);
        }
        Ok((ranges, check))
    })?;
    let mut report = RunReport::new("p2wb sweep", Summary::WeightedBlowupWindow { ranges })
        .with_checks(vec![check]);
    report.wall_time_ms = ms;
    Ok(report)
}

pub fn cmd_verify(suite: Suite, opts: &VerifyOptions, timing: bool) -> Result<RunReport> {
    let (r, ms) = timed(timing, || Ok(run_suite(suite, opts)?))?;
    let mut report = RunReport::new(
        "verify",
        Summary::Suite {
            suite,
            fixtures: r.fixtures,
        },
    )
    .with_checks(r.checks);
    report.seed = Some(opts.seed);
    report.wall_time_ms = ms;
    Ok(report)
}

pub enum ConvertFrom {
    Delta(Rational),
    Epsilon(Rational),
}

pub fn cmd_convert(from: ConvertFrom, n: usize) -> Result<RunReport> {
    if n == 0 {
        return Err(Error::Range("dimension n must be >= 1".into()).into());
    }
    let params = match from {
        ConvertFrom::Delta(d) => ThresholdParams::from_delta(&d, n)?,
        ConvertFrom::Epsilon(e) => ThresholdParams::from_epsilon(&e, n)?,
    };
    Ok(RunReport::new("convert", Summary::Convert(params)))
}
