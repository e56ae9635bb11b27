use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use c60_core::exec::Execution;
use c60_core::graph::buckyball;
use c60_core::green::{
    c0_via_diagonal, c0_via_trace, c_of_a_closed_form, green_matrix_with, limit_at_zero, pseudo_green_with, CRoutes,
};
use c60_core::linalg::{charpoly, format_rational, int, parse_rational, ratio, to_f64, BigRational, RationalMatrix};
use c60_core::reference;
use c60_core::sobolev::{run_trials, trials_to_jsonl, Mode};
use c60_core::spectral::{build_spectral_table, cross_validate, numeric_eigenvalues};
use c60_core::verify::{verify_all, VerifyOptions};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const SCHEMA_VERSION: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "c60", version, about = "Exact spectral constants of the buckyball graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Comma-separated positive rationals, e.g. 1/10,1,10
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_a)]
    a_values: Vec<BigRational>,

    /// Seed for randomized trials and relabelings
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of randomized Sobolev trials
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,

    /// Worker threads; 1 runs everything sequentially
    #[arg(long, global = true)]
    parallel: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The buckyball graph (json, dot, or csv edge list)
    BuildGraph,
    /// Characteristic polynomial of the Laplacian
    Charpoly,
    /// Numeric eigenvalues and the exact factor table
    Spectrum {
        /// With csv, emit the 60 sorted eigenvalues instead of the table
        #[arg(long)]
        eigenvalues: bool,
    },
    /// Pseudo-Green matrix, or G(a) for each --a-values entry
    Green,
    /// C0, C(a) and their cross-checks
    Constants,
    /// Run every exact check; exits 1 if any fails
    VerifyAll {
        /// Also write the mean-zero trial records as JSON lines
        #[arg(long)]
        trial_log: Option<PathBuf>,
    },
    /// Tabulate C(a) and C(a) − 1/(60a)
    SampleCa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

fn parse_a(s: &str) -> Result<BigRational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

/// Failures split by exit code.
enum Failure {
    Config(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn unsupported(cmd: &str, format: Format) -> Failure {
    config(format!("{cmd} does not support --format {format:?}").to_lowercase())
}

fn exec_for(cli: &Cli) -> Result<Execution, Failure> {
    match cli.parallel {
        Some(0) => Err(config("--parallel needs at least one thread")),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Runtime(anyhow!(e)))?;
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::default()),
    }
}

fn with_schema(mut v: Value) -> Value {
    v["schema_version"] = json!(SCHEMA_VERSION);
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn rational_json(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

fn matrix_csv(out: &mut String, label: &str, m: &RationalMatrix) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push_str(&format!("{label},{i},{j},{}\n", format_rational(&m[(i, j)])));
        }
    }
}

fn build_graph(format: Format) -> Result<String, Failure> {
    let g = buckyball();
    Ok(match format {
        Format::Json => pretty(&with_schema(g.to_json().map_err(|e| anyhow!(e))?)),
        Format::Dot => g.to_dot(),
        Format::Csv => {
            let mut s = String::from("i,j\n");
            for (a, b) in g.edges() {
                s.push_str(&format!("{a},{b}\n"));
            }
            s
        }
    })
}

fn charpoly_cmd(format: Format, exec: Execution) -> Result<String, Failure> {
    let p = charpoly(&buckyball().laplacian(), exec).map_err(|e| anyhow!(e))?;
    match format {
        Format::Json => {
            let factors: Vec<Value> = reference::charpoly_factors()
                .iter()
                .map(|(f, e)| json!({ "factor": f.to_json(), "text": f.to_string(), "exponent": e }))
                .collect();
            Ok(pretty(&with_schema(json!({
                "coefficients": p.to_json(),
                "degree": p.degree(),
                "factors": factors,
                "matches_factor_product": p == reference::charpoly_product(),
            }))))
        }
        Format::Csv => {
            let mut s = String::from("degree,coefficient\n");
            for (i, c) in p.coeffs().iter().enumerate() {
                s.push_str(&format!("{i},{c}\n"));
            }
            Ok(s)
        }
        Format::Dot => Err(unsupported("charpoly", format)),
    }
}

fn spectrum_cmd(format: Format, eigenvalues: bool, exec: Execution) -> Result<String, Failure> {
    let a = buckyball().laplacian();
    let p = charpoly(&a, exec).map_err(|e| anyhow!(e))?;
    let table = build_spectral_table(&p).map_err(|e| anyhow!(e))?;
    let num = numeric_eigenvalues(&a).map_err(|e| anyhow!(e))?;
    match format {
        Format::Csv if eigenvalues => Ok(num.to_csv()),
        Format::Csv => Ok(table.to_csv()),
        Format::Json => {
            let report = cross_validate(&num, &table).map_err(|e| anyhow!(e))?;
            Ok(pretty(&with_schema(json!({
                "table": table.to_json(),
                "eigenvalues": num.values,
                "residual": num.residual,
                "max_deviation": report.max_deviation,
                "within_tolerance": report.within_tolerance,
                "cluster_sizes": report.cluster_sizes,
            }))))
        }
        Format::Dot => Err(unsupported("spectrum", format)),
    }
}

fn green_cmd(format: Format, a_values: &[BigRational], exec: Execution) -> Result<String, Failure> {
    let a = buckyball().laplacian();
    let mut mats: Vec<(Option<BigRational>, RationalMatrix)> = Vec::new();
    if a_values.is_empty() {
        mats.push((None, pseudo_green_with(&a, exec).map_err(|e| anyhow!(e))?.0));
    }
    for v in a_values {
        mats.push((Some(v.clone()), green_matrix_with(&a, v, exec).map_err(|e| anyhow!(e))?.0));
    }
    match format {
        Format::Json => {
            let items: Vec<Value> = mats
                .iter()
                .map(|(v, m)| {
                    json!({
                        "a": v.as_ref().map(rational_json),
                        "kind": if v.is_some() { "green" } else { "pseudo_green" },
                        "diagonal": rational_json(&m[(0, 0)]),
                        "matrix": m.to_json(),
                    })
                })
                .collect();
            Ok(pretty(&with_schema(json!({ "matrices": items }))))
        }
        Format::Csv => {
            let mut s = String::from("a,row,col,value\n");
            for (v, m) in &mats {
                let label = v.as_ref().map_or_else(|| "pseudo".to_string(), format_rational);
                matrix_csv(&mut s, &label, m);
            }
            Ok(s)
        }
        Format::Dot => Err(unsupported("green", format)),
    }
}

fn constants_cmd(format: Format, a_values: &[BigRational], exec: Execution) -> Result<String, Failure> {
    let a = buckyball().laplacian();
    let p = charpoly(&a, exec).map_err(|e| anyhow!(e))?;
    let (g_star, _) = pseudo_green_with(&a, exec).map_err(|e| anyhow!(e))?;
    let c0_diag = c0_via_diagonal(&g_star).map_err(|e| anyhow!(e))?;
    let c0_trace = c0_via_trace(&p).map_err(|e| anyhow!(e))?;
    let routes = CRoutes::compute(&a, &p, exec).map_err(|e| anyhow!(e))?;
    let c = c_of_a_closed_form(&p);
    let limit = limit_at_zero(&c, &int(60)).ok();
    let c0 = reference::c0();
    let checks = json!({
        "c0_routes": c0_diag == c0 && c0_trace == c0,
        "c_of_a_routes": routes.agreed().is_ok(),
        "limit_identity": limit.as_ref() == Some(&c0),
    });
    let samples: Vec<(BigRational, BigRational)> =
        a_values.iter().map(|v| (v.clone(), c.eval(v).expect("positive a is not a pole"))).collect();
    match format {
        Format::Json => {
            let d_factors: Vec<Value> =
                reference::DAMPED_DENOMINATOR_FACTORS.iter().map(|f| json!(f.iter().map(|x| x.to_string()).collect::<Vec<_>>())).collect();
            let c_values: Vec<Value> = samples
                .iter()
                .map(|(v, x)| json!({ "a": rational_json(v), "value": rational_json(x), "decimal": to_f64(x) }))
                .collect();
            Ok(pretty(&with_schema(json!({
                "c0": rational_json(&c0_diag),
                "c0_decimal": to_f64(&c0_diag),
                "N": c.numerator().to_json(),
                "D": c.denominator().to_json(),
                "D_factors": d_factors,
                "c_of_a": c_values,
                "checks": checks,
            }))))
        }
        Format::Csv => {
            let mut s = String::from("name,value,decimal\n");
            s.push_str(&format!("c0,{},{}\n", format_rational(&c0_diag), to_f64(&c0_diag)));
            for (v, x) in &samples {
                s.push_str(&format!("C({}),{},{}\n", format_rational(v), format_rational(x), to_f64(x)));
            }
            Ok(s)
        }
        Format::Dot => Err(unsupported("constants", format)),
    }
}

/// `{1, 2, 5}·10^k` for `k = −2..=2`.
fn default_grid() -> Vec<BigRational> {
    let mut out = Vec::new();
    for k in -2i32..=2 {
        for m in [1i64, 2, 5] {
            out.push(if k < 0 { ratio(m, 10i64.pow(k.unsigned_abs())) } else { int(m * 10i64.pow(k as u32)) });
        }
    }
    out
}

fn sample_ca_cmd(format: Format, a_values: &[BigRational]) -> Result<String, Failure> {
    let points = if a_values.is_empty() { default_grid() } else { a_values.to_vec() };
    let c = reference::damped_constant();
    let rows: Vec<(BigRational, BigRational, BigRational)> = points
        .iter()
        .map(|a| {
            let value = c.eval(a).expect("positive a is not a pole");
            let regular = &value - BigRational::new(1.into(), 60.into()) / a;
            (a.clone(), value, regular)
        })
        .collect();
    match format {
        Format::Csv => {
            let mut s = String::from("a,c,c_decimal,c_minus_pole,c_minus_pole_decimal\n");
            for (a, v, r) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    format_rational(a),
                    format_rational(v),
                    to_f64(v),
                    format_rational(r),
                    to_f64(r)
                ));
            }
            Ok(s)
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(a, v, r)| {
                    json!({
                        "a": rational_json(a),
                        "c": rational_json(v),
                        "c_decimal": to_f64(v),
                        "c_minus_pole": rational_json(r),
                        "c_minus_pole_decimal": to_f64(r),
                    })
                })
                .collect();
            Ok(pretty(&with_schema(json!({ "samples": items }))))
        }
        Format::Dot => Err(unsupported("sample-ca", format)),
    }
}

fn verify_cmd(cli: &Cli, trial_log: Option<&PathBuf>, exec: Execution) -> Result<(String, bool), Failure> {
    if cli.format != Format::Json {
        return Err(unsupported("verify-all", cli.format));
    }
    let mut opts = VerifyOptions { seed: cli.seed, trials: cli.trials, exec, ..Default::default() };
    if !cli.a_values.is_empty() {
        opts.a_values = cli.a_values.clone();
    }
    let report = verify_all(&opts);
    if let Some(path) = trial_log {
        let a = buckyball().laplacian();
        let records = run_trials(&a, &reference::c0(), &Mode::MeanZero, cli.seed, cli.trials, exec).map_err(|e| anyhow!(e))?;
        fs::write(path, trials_to_jsonl(&records)).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut out = report.to_json();
    out["seed"] = json!(cli.seed);
    out["trials"] = json!(cli.trials);
    Ok((pretty(&with_schema(out)), report.all_passed()))
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Some(bad) = cli.a_values.iter().find(|a| *a <= &int(0)) {
        return Err(config(format!("--a-values must be positive, got {}", format_rational(bad))));
    }
    let exec = exec_for(cli)?;
    if cli.format == Format::Dot && !matches!(cli.command, Command::BuildGraph) {
        return Err(config("--format dot is only available for build-graph"));
    }
    let (text, passed) = match &cli.command {
        Command::BuildGraph => (build_graph(cli.format)?, true),
        Command::Charpoly => (charpoly_cmd(cli.format, exec)?, true),
        Command::Spectrum { eigenvalues } => (spectrum_cmd(cli.format, *eigenvalues, exec)?, true),
        Command::Green => (green_cmd(cli.format, &cli.a_values, exec)?, true),
        Command::Constants => (constants_cmd(cli.format, &cli.a_values, exec)?, true),
        Command::VerifyAll { trial_log } => verify_cmd(cli, trial_log.as_ref(), exec)?,
        Command::SampleCa => (sample_ca_cmd(cli.format, &cli.a_values)?, true),
    };
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout")?,
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
