use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};
use ydcat_cli::scenario::DEFAULT_TOL;
use ydcat_cli::{load_scenario, run_scenario, CliError, CliResult, Report, Scenario, Step};

#[derive(Parser)]
#[command(name = "ydcat", version, about = "Verify Yetter-Drinfeld algebras, tensor functors and Poisson boundaries numerically")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hopf axioms of a fixture, a provider or a subgroup surjection.
    Validate(Common),
    /// Irreducibles, conjugate equations, quantum dimensions and fusion.
    Irreps(Common),
    /// Yetter-Drinfeld and braided-commutativity axioms of an algebra.
    Ydcheck(Common),
    /// Morphism spaces of the category of an algebra.
    Categorify(Common),
    /// Reconstruct an algebra from a category.
    Reconstruct(Common),
    /// Algebra -> category -> algebra, or category -> algebra -> category.
    Roundtrip(Common),
    /// Quotient coideals, subgroup recovery and coideal enumeration.
    Coideal(Common),
    /// Galois map, the displayed identity and the spectral functor.
    Galois(Common),
    /// States, Markov operators, harmonic elements and boundaries.
    Poisson(Common),
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// `finite:<fixture path>` or `suq2:q=<q>,L=<half-integer>`.
    #[arg(long)]
    provider: Option<String>,
    /// Hopf fixture; shorthand for `--provider finite:<path>`.
    #[arg(long)]
    fixture: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Truncation level as a half-integer, e.g. `3/2`.
    #[arg(long)]
    level: Option<String>,
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long)]
    category: Option<String>,
    #[arg(long)]
    subgroup: Option<String>,
    #[arg(long)]
    check: Option<String>,
    /// Measure as JSON, e.g. `{"U2": 1}`.
    #[arg(long)]
    measure: Option<String>,
    /// Extra step parameter `key=value`; the value is read as JSON when it parses.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Write the JSON report here and print a summary instead.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn json_or_string(v: &str) -> Value {
    serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()))
}

fn single_step(op: &str, c: &Common) -> CliResult<Scenario> {
    let mut params = Map::new();
    let mut set = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            params.insert(k.to_string(), v);
        }
    };
    let provider = match (&c.provider, &c.fixture) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(f)) => Some(format!("finite:{}", f.display())),
        (None, None) => None,
    };
    set("level", c.level.clone().map(Value::String));
    set("algebra", c.algebra.clone().map(Value::String));
    set("category", c.category.clone().map(Value::String));
    set("subgroup", c.subgroup.clone().map(Value::String));
    set("check", c.check.clone().map(Value::String));
    if let Some(m) = &c.measure {
        let v: Value = serde_json::from_str(m).map_err(|e| CliError::BadParam(format!("--measure: {e}")))?;
        set("measure", Some(v));
    }
    if op == "validate" && provider.is_none() {
        return Err(CliError::BadParam("validate needs --fixture or --provider".into()));
    }
    for kv in &c.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::BadParam(format!("--param `{kv}` is not key=value")))?;
        params.insert(k.to_string(), json_or_string(v));
    }
    Ok(Scenario {
        name: op.to_string(),
        seed: c.seed,
        tol: c.tol,
        provider,
        steps: vec![Step {
            op: op.to_string(),
            label: None,
            tol: None,
            max_seconds: None,
            params,
        }],
    })
}

fn emit(report: &Report, out: Option<&Path>) -> CliResult<()> {
    let json = report.to_json()?;
    match out {
        Some(path) => {
            std::fs::write(path, json + "\n").map_err(ydcat::Error::Io)?;
            print!("{}", report.summary());
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<i32> {
    let (scenario, base, out) = match cli.cmd {
        Cmd::Run {
            scenario,
            seed,
            tol,
            report,
        } => {
            let (mut s, base) = load_scenario(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            if let Some(tol) = tol {
                s.tol = tol;
            }
            (s, base, report)
        }
        Cmd::Validate(c) => (single_step("validate", &c)?, PathBuf::from("."), c.report),
        Cmd::Irreps(c) => (single_step("irreps", &c)?, PathBuf::from("."), c.report),
        Cmd::Ydcheck(c) => (single_step("ydcheck", &c)?, PathBuf::from("."), c.report),
        Cmd::Categorify(c) => (single_step("categorify", &c)?, PathBuf::from("."), c.report),
        Cmd::Reconstruct(c) => (single_step("reconstruct", &c)?, PathBuf::from("."), c.report),
        Cmd::Roundtrip(c) => (single_step("roundtrip", &c)?, PathBuf::from("."), c.report),
        Cmd::Coideal(c) => (single_step("coideal", &c)?, PathBuf::from("."), c.report),
        Cmd::Galois(c) => (single_step("galois", &c)?, PathBuf::from("."), c.report),
        Cmd::Poisson(c) => (single_step("poisson", &c)?, PathBuf::from("."), c.report),
    };
    let report = run_scenario(&scenario, &base)?;
    emit(&report, out.as_deref())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("ydcat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
