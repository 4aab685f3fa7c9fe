use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kstab_cli::commands::{DEFAULT_RADIUS, DEFAULT_SEED};
use kstab_cli::{
    cmd_convert, cmd_eval, cmd_p2wb_sweep, cmd_verify, CliError, ConvertFrom, EvalOptions,
    PairDescriptor, Result, RunReport,
};
use kstab_core::rational::{self, Rational};
use kstab_core::verify::{Suite, VerifyOptions};
use kstab_core::{
    FanPair, LatticeVector, MarkedPoint, P1Pair, P1Point, PlaneDivisorCase,
    WeightedBlowupDescriptor,
};

/// Exact valuative K-stability invariants.
#[derive(Parser)]
#[command(name = "kstab", version)]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Also show floating-point approximations.
    #[arg(long, global = true)]
    float: bool,
    /// Write the volume curves of every evaluation as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Grid steps per curve in the CSV export.
    #[arg(long, global = true, default_value_t = 32)]
    csv_steps: usize,
    /// Record wall time in the report (output is then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate any descriptor file (JSON, or TOML by extension).
    Eval {
        file: PathBuf,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Pairs on the projective line.
    #[command(subcommand)]
    P1(P1Command),
    /// Toric pairs.
    #[command(subcommand)]
    Toric(ToricCommand),
    /// Plane curves and weighted blowups of the plane.
    #[command(subcommand)]
    P2wb(P2wbCommand),
    /// Convert between the delta and epsilon threshold forms.
    Convert {
        #[arg(long, value_parser = parse_rational, conflicts_with = "epsilon", required_unless_present = "epsilon")]
        delta: Option<Rational>,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Run a property suite (inequalities, toric-vs-p2wb, lattice-limit, weighted-blowup, all).
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = VerifyOptions::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = VerifyOptions::default().max_a)]
        max_a: u32,
        #[arg(long, default_value_t = VerifyOptions::default().k)]
        k: u32,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Toric sweep radius.
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    radius: i64,
    /// A single toric valuation, e.g. `1,0`.
    #[arg(long, value_parser = parse_vector)]
    v: Option<LatticeVector>,
}

#[derive(Subcommand)]
enum P1Command {
    /// Evaluate from a file or from `--mark POINT:COEFF` options.
    Eval {
        file: Option<PathBuf>,
        /// A boundary point, e.g. `0:1/2`, `inf:1/3`, `-2/3:1/4`.
        #[arg(
            long = "mark",
            short = 'm',
            value_name = "POINT:COEFF",
            conflicts_with = "file"
        )]
        marks: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct FanSource {
    file: Option<PathBuf>,
    /// Built-in fan: p1, p2, p1xp1, p3.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    fan: Option<String>,
    /// Boundary coefficients for the built-in fan, comma separated.
    #[arg(long, requires = "fan", value_delimiter = ',', value_parser = parse_rational)]
    coefficients: Vec<Rational>,
}

#[derive(Subcommand)]
enum ToricCommand {
    /// Evaluate one valuation.
    Eval {
        #[command(flatten)]
        source: FanSource,
        #[arg(long, value_parser = parse_vector)]
        v: LatticeVector,
    },
    /// Evaluate every primitive vector up to a radius, sorted by betahat.
    Sweep {
        #[command(flatten)]
        source: FanSource,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: i64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum P2wbCommand {
    /// A plane curve of degree `--d`, or weights `--a --b` with optional `--tau`.
    Eval {
        #[arg(long, conflicts_with_all = ["a", "b", "tau"], required_unless_present = "a")]
        d: Option<u32>,
        #[arg(long, requires = "b")]
        a: Option<u32>,
        #[arg(long, requires = "a")]
        b: Option<u32>,
        #[arg(long, value_parser = parse_rational)]
        tau: Option<Rational>,
    },
    /// Minimum betahat over the admissible window for all coprime weights.
    Sweep {
        #[arg(long, default_value_t = 20)]
        max_a: u32,
    },
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_vector(s: &str) -> std::result::Result<LatticeVector, String> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(LatticeVector::new)
}

fn parse_mark(s: &str) -> Result<MarkedPoint> {
    let (at, c) = s
        .rsplit_once(':')
        .ok_or_else(|| CliError::Usage(format!("mark {s:?} is not POINT:COEFF")))?;
    let at: P1Point = at.parse()?;
    Ok(MarkedPoint::new(at, rational::parse(c)?))
}

fn builtin_fan(name: &str) -> Result<FanPair> {
    Ok(match name {
        "p1" => FanPair::projective_line(),
        "p2" => FanPair::projective_plane(),
        "p1xp1" => FanPair::p1_x_p1(),
        "p3" => FanPair::projective_space3(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown fan {other:?} (known: p1, p2, p1xp1, p3)"
            )))
        }
    })
}

fn fan_descriptor(source: FanSource) -> Result<PairDescriptor> {
    match (source.file, source.fan) {
        (Some(path), _) => {
            let d = PairDescriptor::load(&path)?;
            if d.toric.is_none() {
                return Err(CliError::Usage(format!(
                    "{} is not a toric descriptor",
                    path.display()
                )));
            }
            Ok(d)
        }
        (None, Some(name)) => {
            let mut fp = builtin_fan(&name)?;
            if !source.coefficients.is_empty() {
                fp = fp.with_coefficients(source.coefficients)?;
            }
            let mut d = PairDescriptor::from_toric(fp);
            d.label = Some(name);
            Ok(d)
        }
        (None, None) => Err(CliError::Usage("give a descriptor file or --fan".into())),
    }
}

fn run_verify(name: &str, opts: &VerifyOptions, timing: bool) -> Result<Vec<RunReport>> {
    let suites = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse()?]
    };
    suites
        .into_iter()
        .map(|s| cmd_verify(s, opts, timing))
        .collect()
}

fn run(command: Command, out: &Output) -> Result<Vec<RunReport>> {
    let timing = out.timing;
    let eval_opts = |seed, radius, v| EvalOptions {
        seed,
        radius,
        v,
        float: out.float,
    };
    let report = match command {
        Command::Eval { file, eval } => {
            let desc = PairDescriptor::load(&file)?;
            cmd_eval(&desc, &eval_opts(eval.seed, eval.radius, eval.v), timing)?
        }
        Command::P1(P1Command::Eval { file, marks, seed }) => {
            let desc = match file {
                Some(path) => {
                    let d = PairDescriptor::load(&path)?;
                    if d.p1.is_none() {
                        return Err(CliError::Usage(format!(
                            "{} is not a p1 descriptor",
                            path.display()
                        )));
                    }
                    d
                }
                None => {
                    let points = marks
                        .iter()
                        .map(|m| parse_mark(m))
                        .collect::<Result<Vec<_>>>()?;
                    PairDescriptor::from_p1(P1Pair::new(points)?)
                }
            };
            cmd_eval(&desc, &eval_opts(seed, DEFAULT_RADIUS, None), timing)?
        }
        Command::Toric(ToricCommand::Eval { source, v }) => {
            let desc = fan_descriptor(source)?;
            cmd_eval(
                &desc,
                &eval_opts(DEFAULT_SEED, DEFAULT_RADIUS, Some(v)),
                timing,
            )?
        }
        Command::Toric(ToricCommand::Sweep {
            source,
            radius,
            seed,
        }) => {
            let desc = fan_descriptor(source)?;
            cmd_eval(&desc, &eval_opts(seed, radius, None), timing)?
        }
        Command::P2wb(P2wbCommand::Eval { d, a, b, tau }) => {
            let desc = match (d, a, b) {
                (Some(d), _, _) => PairDescriptor::from_plane_divisor(PlaneDivisorCase::new(d)?),
                (None, Some(a), Some(b)) => {
                    PairDescriptor::from_weighted_blowup(WeightedBlowupDescriptor::new(a, b, tau)?)
                }
                _ => return Err(CliError::Usage("give --d or both --a and --b".into())),
            };
            cmd_eval(
                &desc,
                &eval_opts(DEFAULT_SEED, DEFAULT_RADIUS, None),
                timing,
            )?
        }
        Command::P2wb(P2wbCommand::Sweep { max_a }) => cmd_p2wb_sweep(max_a, timing)?,
        Command::Convert { delta, epsilon, n } => {
            let from = match (delta, epsilon) {
                (Some(d), None) => ConvertFrom::Delta(d),
                (None, Some(e)) => ConvertFrom::Epsilon(e),
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --delta, --epsilon".into(),
                    ))
                }
            };
            cmd_convert(from, n)?
        }
        Command::Verify {
            suite,
            seed,
            samples,
            max_a,
            k,
        } => {
            return run_verify(
                &suite,
                &VerifyOptions {
                    seed,
                    samples,
                    max_a,
                    k,
                },
                timing,
            );
        }
    };
    Ok(vec![report])
}

fn emit(reports: &[RunReport], out: &Output) -> Result<()> {
    for r in reports {
        if out.json {
            print!("{}", r.to_json());
        } else {
            print!("{}", r.to_text(out.float));
        }
    }
    if let Some(path) = &out.csv {
        let mut csv = String::new();
        for (i, r) in reports.iter().enumerate() {
            let body = r.to_csv(out.csv_steps)?;
            csv.push_str(if i == 0 {
                &body
            } else {
                body.split_once('\n').map_or("", |x| x.1)
            });
        }
        write_file(path, &csv)?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("KSTAB_LOG")).init();
    let cli = Cli::parse();
    match run_and_emit(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run_and_emit(cli: Cli) -> Result<bool> {
    let reports = run(cli.command, &cli.out)?;
    emit(&reports, &cli.out)?;
    Ok(reports.iter().all(|r| r.passed))
}
