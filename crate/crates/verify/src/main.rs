use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use supcone::{Backend, Rational, Scalar};
use supcone_verify::eval::evaluate;
use supcone_verify::{replay, run_suite, ModelSpec, Mutation, RunConfig, Suite, SuiteReport, VerifyError, VerifyResult};

#[derive(Debug, Parser)]
#[command(name = "supcone", version, about = "Randomized verifier for the supcone kernel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Rational,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a property suite on generated (or fixed) models.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BackendArg::Rational)]
        backend: BackendArg,
        /// Use this model for every trial instead of generating one.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Corrupt one identity; the run is then expected to fail.
        #[arg(long = "mutate")]
        mutation: Option<Mutation>,
    },
    /// Evaluate an expression over the named vectors of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = BackendArg::Rational)]
        backend: BackendArg,
    },
    /// Re-run a counterexample stored in a report.
    Replay {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

fn eval_with<S: Scalar>(spec: &ModelSpec, expr: &str) -> VerifyResult<String> {
    let model = spec.instantiate::<S>()?;
    let value = evaluate(&model, expr)?;
    Ok(serde_json::to_string_pretty(&value.to_json()).expect("json value serializes"))
}

fn run(cli: Cli) -> VerifyResult<bool> {
    match cli.command {
        Command::Verify {
            suite,
            trials,
            seed,
            backend,
            model,
            report,
            mutation,
        } => {
            let mut cfg = RunConfig::new(suite, trials, seed, backend.into());
            cfg.model = model.as_deref().map(ModelSpec::load).transpose()?;
            cfg.mutation = mutation;
            let out = run_suite(&cfg)?;
            print!("{}", out.summary());
            if let Some(path) = report {
                out.save(&path)?;
            }
            Ok(out.passed)
        }
        Command::Eval { model, expr, backend } => {
            let spec = ModelSpec::load(&model)?;
            let text = match Backend::from(backend) {
                Backend::Rational => eval_with::<Rational>(&spec, &expr)?,
                Backend::Float => eval_with::<f64>(&spec, &expr)?,
            };
            println!("{text}");
            Ok(true)
        }
        Command::Replay { report, index } => {
            let report = SuiteReport::load(&report)?;
            let cx = report
                .counterexamples
                .get(index)
                .ok_or_else(|| VerifyError::Usage(format!("report has {} counterexample(s)", report.counterexamples.len())))?;
            match replay(cx)? {
                Some(f) => {
                    println!("reproduced {}: {}\n  lhs = {}\n  rhs = {}", cx.property, f.identity, f.lhs, f.rhs);
                    Ok(false)
                }
                None => {
                    println!("{} no longer fails", cx.property);
                    Ok(true)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
