//! Command-line surface: instance I/O, solver invocation, harness suites,
//! and certificate verification. All randomness flows from one `--seed`
//! through the library's counter-based splittable generator, and every
//! output file echoes the run configuration, so identical (input, seed,
//! version) produce byte-identical outputs. Wall time goes to stderr, never
//! into the file.
//!
//! Exit codes: 0 success, 1 theorem-violation candidate or verification
//! failure, 2 malformed input.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use quanthelly::body::{Body, HPolytope};
use quanthelly::helly::suites::{run_suite, TheoremSuite};
use quanthelly::helly::john::john_counterexample;
use quanthelly::lp_type::{self, ball};
use quanthelly::rng::{derive_seed, RNG_SCHEME};
use quanthelly::solvers::{min_eps_approx, simultaneous_approx, ApproxClass, WitnessProblem};
use quanthelly::tverberg::{quantitative_tverberg, ChartKind, TverbergCertificate};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "quanthelly", version, about = "Witness-set solvers and Helly/Tverberg harnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChartArg {
    Zonotope,
    Hconvex,
    EllipsoidDet,
    EllipsoidSum,
    Segment,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximum-volume axis-parallel box in a family intersection
    SolveBox(SolveArgs),
    /// Maximum-volume zonotope with fixed directions
    SolveZonotope(SolveArgs),
    /// Maximum-volume inscribed ellipsoid (free/centered/axis-parallel)
    SolveEllipsoid(SolveArgs),
    /// Maximum-volume H-convex set
    SolveHconvex(SolveArgs),
    /// Simultaneous ε-approximation feasibility / smallest ε
    Approx(SolveArgs),
    /// LP-type benchmark: per-trial oracle-call counts as CSV
    LptypeBench {
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Helly theorem suite over seeded planted instances
    HellyTest {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the John contact-point counterexample family and certificate
    Counterexample {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantitative Tverberg partition search over a witness family
    Tverberg {
        #[arg(long, value_enum)]
        chart: ChartArg,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the independent audit on a stored certificate
    Verify {
        #[arg(long)]
        cert: PathBuf,
        /// Audit slack override (support gaps and threshold)
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Echoed into every output file.
#[derive(Debug, Serialize)]
struct RunConfig {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output_path: Option<String>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct SolveInput {
    problem: ProblemInput,
    #[serde(default)]
    options: serde_json::Value,
}

#[derive(Debug, Deserialize)]
struct ProblemInput {
    family: Vec<HPolytope>,
    #[serde(default)]
    witness_class: Option<quanthelly::solvers::WitnessClass>,
    #[serde(default)]
    objective: Option<quanthelly::solvers::Objective>,
    /// approx-only fields
    #[serde(default)]
    approx_class: Option<ApproxClassInput>,
    #[serde(default)]
    eps: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ApproxClassInput {
    AxisBox,
    Zonotope { directions: Vec<Vec<f64>> },
}

#[derive(Debug, Deserialize)]
struct TverbergInput {
    witnesses: Vec<Body>,
    #[serde(default)]
    directions: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    hset: Option<Vec<Vec<f64>>>,
}

fn write_output(path: &Option<PathBuf>, payload: &serde_json::Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(payload)?;
    match path {
        Some(p) => std::fs::write(p, text.as_bytes())
            .with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn envelope(config: RunConfig, result: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "config": config,
        "version": VERSION,
        "rng": RNG_SCHEME,
        "result": result,
    })
}

fn init_threads() {
    if let Ok(v) = std::env::var("QH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Run with the given argv (including program name). Returns the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exits
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    let started = Instant::now();
    let outcome = dispatch(cli.command);
    eprintln!("wall_time_s: {:.3}", started.elapsed().as_secs_f64());
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn parse_solve_input(path: &PathBuf) -> anyhow::Result<SolveInput> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).context("parsing problem JSON")
}

fn dispatch(cmd: Command) -> anyhow::Result<i32> {
    match cmd {
        Command::SolveBox(a) => solve_command("solve-box", a, |input, _seed| {
            let p = WitnessProblem::new(
                input.problem.family.clone(),
                input
                    .problem
                    .witness_class
                    .clone()
                    .unwrap_or(quanthelly::solvers::WitnessClass::AxisBox),
                input
                    .problem
                    .objective
                    .unwrap_or(quanthelly::solvers::Objective::Volume),
            )?;
            Ok(serde_json::to_value(p.solve(0)?)?)
        }),
        Command::SolveZonotope(a) => solve_command("solve-zonotope", a, |input, _| {
            let class = input
                .problem
                .witness_class
                .clone()
                .ok_or_else(|| quanthelly::GeomError::InvalidInput("witness_class required".into()))?;
            let p = WitnessProblem::new(
                input.problem.family.clone(),
                class,
                input
                    .problem
                    .objective
                    .unwrap_or(quanthelly::solvers::Objective::Volume),
            )?;
            Ok(serde_json::to_value(p.solve(0)?)?)
        }),
        Command::SolveEllipsoid(a) => solve_command("solve-ellipsoid", a, |input, _| {
            let class = input
                .problem
                .witness_class
                .clone()
                .unwrap_or(quanthelly::solvers::WitnessClass::Ellipsoid);
            let p = WitnessProblem::new(
                input.problem.family.clone(),
                class,
                input
                    .problem
                    .objective
                    .unwrap_or(quanthelly::solvers::Objective::Volume),
            )?;
            Ok(serde_json::to_value(p.solve(0)?)?)
        }),
        Command::SolveHconvex(a) => solve_command("solve-hconvex", a, |input, _| {
            let class = input
                .problem
                .witness_class
                .clone()
                .ok_or_else(|| quanthelly::GeomError::InvalidInput("witness_class with hset required".into()))?;
            let p = WitnessProblem::new(
                input.problem.family.clone(),
                class,
                input
                    .problem
                    .objective
                    .unwrap_or(quanthelly::solvers::Objective::Volume),
            )?;
            Ok(serde_json::to_value(p.solve(0)?)?)
        }),
        Command::Approx(a) => solve_command("approx", a, |input, _| {
            let class = match &input.problem.approx_class {
                Some(ApproxClassInput::AxisBox) | None => ApproxClass::AxisBox,
                Some(ApproxClassInput::Zonotope { directions }) => ApproxClass::Zonotope {
                    directions: directions.clone(),
                },
            };
            match input.problem.eps {
                Some(eps) => {
                    let res = simultaneous_approx(&input.problem.family, &class, eps)?;
                    Ok(serde_json::json!({
                        "feasible": res.feasible,
                        "eps": eps,
                        "witness": res.witness,
                        "translate": res.translate,
                    }))
                }
                None => {
                    let (eps, witness, translate) = min_eps_approx(&input.problem.family, &class)?;
                    Ok(serde_json::json!({
                        "eps_star": eps,
                        "witness": witness,
                        "translate": translate,
                    }))
                }
            }
        }),
        Command::LptypeBench {
            sizes,
            trials,
            seed,
            out,
        } => {
            let mut csv = String::from("n,trial,seed,oracle_calls,violation_tests,objective\n");
            for &n in &sizes {
                for t in 0..trials {
                    let trial_seed = derive_seed(seed, (n as u64) << 20 | t as u64);
                    let mut rng = quanthelly::rng::seeded_rng(trial_seed, 1);
                    use rand::Rng;
                    let pts: Vec<[f64; 2]> = (0..n)
                        .map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
                        .collect();
                    let out = lp_type::solve(&ball::problem(pts), trial_seed)
                        .map_err(|e| anyhow!("bench solve failed: {e}"))?;
                    csv.push_str(&format!(
                        "{n},{t},{trial_seed},{},{},{}\n",
                        out.stats.oracle_calls, out.stats.violation_tests, out.solution.radius
                    ));
                }
            }
            match out {
                Some(p) => std::fs::write(&p, csv.as_bytes())?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Command::HellyTest {
            theorem,
            d,
            trials,
            seed,
            out,
        } => {
            let suite = TheoremSuite::parse(&theorem)
                .ok_or_else(|| anyhow!("unknown theorem suite '{theorem}'"))?;
            let report = run_suite(suite, d, trials, seed)?;
            let config = RunConfig {
                command: "helly-test".into(),
                input_path: None,
                output_path: out.as_ref().map(|p| p.display().to_string()),
                seed,
                trials: Some(trials),
                dimension: Some(d),
            };
            let passed = report.passed();
            write_output(&out, &envelope(config, serde_json::to_value(&report)?))?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Counterexample { d, out } => {
            let (family, cert) = john_counterexample(d)?;
            let config = RunConfig {
                command: "counterexample".into(),
                input_path: None,
                output_path: out.as_ref().map(|p| p.display().to_string()),
                seed: 0,
                trials: None,
                dimension: Some(d),
            };
            let result = serde_json::json!({
                "family": family,
                "certificate": cert,
            });
            write_output(&out, &envelope(config, result))?;
            Ok(0)
        }
        Command::Tverberg {
            chart,
            r,
            threshold,
            input,
            out,
        } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let parsed: TverbergInput = serde_json::from_str(&text).context("parsing witnesses")?;
            let kind = match chart {
                ChartArg::Zonotope => ChartKind::Zonotope {
                    directions: parsed
                        .directions
                        .clone()
                        .ok_or_else(|| anyhow!("zonotope chart needs \"directions\""))?,
                },
                ChartArg::Hconvex => ChartKind::HConvex {
                    hset: parsed
                        .hset
                        .clone()
                        .ok_or_else(|| anyhow!("hconvex chart needs \"hset\""))?,
                },
                ChartArg::EllipsoidDet => ChartKind::EllipsoidDet,
                ChartArg::EllipsoidSum => ChartKind::EllipsoidSum,
                ChartArg::Segment => ChartKind::Segment,
            };
            let config = RunConfig {
                command: "tverberg".into(),
                input_path: Some(input.display().to_string()),
                output_path: out.as_ref().map(|p| p.display().to_string()),
                seed: 0,
                trials: None,
                dimension: parsed.witnesses.first().map(|b| b.dim()),
            };
            match quantitative_tverberg(&parsed.witnesses, kind, r, threshold) {
                Ok(cert) => {
                    write_output(&out, &envelope(config, serde_json::to_value(&cert)?))?;
                    Ok(0)
                }
                Err(quanthelly::GeomError::NotFound) => {
                    let note = if quanthelly::tverberg::is_prime_power(r) {
                        "theorem-violation candidate: no partition found for prime-power r"
                    } else {
                        "no partition found; r is not a prime power, existence is open"
                    };
                    let result = serde_json::json!({
                        "status": "not_found",
                        "note": note,
                        "witnesses": parsed.witnesses,
                    });
                    write_output(&out, &envelope(config, result))?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { cert, tol } => {
            let text = std::fs::read_to_string(&cert)
                .with_context(|| format!("reading {}", cert.display()))?;
            // Accept both raw certificates and enveloped CLI outputs.
            let parsed: TverbergCertificate = match serde_json::from_str(&text) {
                Ok(c) => c,
                Err(_) => {
                    let v: serde_json::Value =
                        serde_json::from_str(&text).context("parsing certificate JSON")?;
                    serde_json::from_value(
                        v.get("result")
                            .cloned()
                            .ok_or_else(|| anyhow!("no certificate payload"))?,
                    )
                    .context("parsing certificate payload")?
                }
            };
            let ok = quanthelly::tverberg::verify_certificate_with(&parsed, tol)?;
            println!("{}", serde_json::json!({ "verified": ok, "tol": tol }));
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn solve_command(
    name: &str,
    args: SolveArgs,
    f: impl Fn(&SolveInput, u64) -> anyhow::Result<serde_json::Value>,
) -> anyhow::Result<i32> {
    let input = parse_solve_input(&args.input)?;
    let config = RunConfig {
        command: name.into(),
        input_path: Some(args.input.display().to_string()),
        output_path: args.out.as_ref().map(|p| p.display().to_string()),
        seed: args.seed,
        trials: None,
        dimension: input.problem.family.first().map(|p| p.dim),
    };
    let _ = &input.options;
    let result = f(&input, args.seed)?;
    write_output(&args.out, &envelope(config, result))?;
    Ok(0)
}
