use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use upt_core::experiment::{list_experiments, run_experiment, ExperimentDescriptor, RunMode};

#[derive(Parser)]
#[command(
    name = "upt",
    version,
    about = "Seeded, reproducible experiments for the unitary property-testing toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a registered experiment and emit its JSON report
    Run(RunArgs),
    /// List registered experiments and their parameters
    List {
        /// Emit the registry as machine-readable JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment name; see `upt list`
    #[arg(long, short = 'e')]
    experiment: String,

    /// Root RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Report file path; the report goes to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override an experiment parameter; repeatable
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,

    /// Override the experiment's default trial count
    #[arg(long)]
    trials: Option<u64>,

    /// Use exact probabilities where available (the default)
    #[arg(long, conflicts_with = "sampled")]
    exact: bool,

    /// Use sampled estimators where the experiment has a sampled variant
    #[arg(long)]
    sampled: bool,

    /// Worker thread count; defaults to all cores
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List { json } => {
            if let Err(e) = emit(&mut io::stdout().lock(), &registry_text(json)) {
                eprintln!("error: cannot write listing: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args),
    }
}

/// Writes to a stream, treating a consumer that closed the pipe early
/// (`upt list | head`) as normal termination rather than an error.
fn emit(stream: &mut dyn Write, text: &str) -> io::Result<()> {
    match stream.write_all(text.as_bytes()).and_then(|()| stream.flush()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

fn registry_text(json: bool) -> String {
    let entries = list_experiments();
    if json {
        let mut s = serde_json::to_string_pretty(&entries).expect("registry serializes");
        s.push('\n');
        return s;
    }
    let mut s = String::new();
    for e in entries {
        let _ = writeln!(s, "{}", e.name);
        let _ = writeln!(s, "  {}", e.summary);
        let _ = writeln!(s, "  default trials: {}", e.default_trials);
        for p in e.params {
            let _ = writeln!(s, "  --param {}: {}", p.key, p.help);
        }
        let _ = writeln!(s);
    }
    s
}

fn run(args: RunArgs) -> ExitCode {
    if let Some(n) = args.threads {
        // rayon reads this when building its global pool on first use
        std::env::set_var("RAYON_NUM_THREADS", n.to_string());
    }
    let mut params = BTreeMap::new();
    for raw in &args.params {
        let Some((key, value)) = raw.split_once('=') else {
            eprintln!("error: --param expects KEY=VALUE, got {raw:?}");
            return ExitCode::from(2);
        };
        params.insert(key.to_string(), value.to_string());
    }
    let desc = ExperimentDescriptor {
        name: args.experiment.clone(),
        params,
        seed: args.seed,
        trials: args.trials,
        mode: if args.sampled {
            RunMode::Sampled
        } else {
            RunMode::Exact
        },
        out_path: args.out.as_ref().map(|p| p.display().to_string()),
    };
    let report = match run_experiment(&desc) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut lines = String::new();
    for c in &report.checks {
        let _ = writeln!(
            lines,
            "{} {}: {} {} {}",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.observed,
            c.op,
            c.bound
        );
    }
    // diagnostics only; losing them must not change the verdict
    let _ = emit(&mut io::stderr().lock(), &lines);
    let json = report.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            let _ = emit(&mut io::stdout().lock(), &format!("report written to {}\n", path.display()));
        }
        None => {
            if let Err(e) = emit(&mut io::stdout().lock(), &json) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
