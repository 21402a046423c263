use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prli::config::ExperimentConfig;
use prli::error::RunError;
use prli::experiments::{self, Fault, RunSummary, VerifyOptions, VerifySignal};

#[derive(Parser)]
#[command(name = "prli", about = "Model-free optimization with a periodically reset integrator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce worked example 1, 2 or 3.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Directory for artifacts (defaults to the paths in the built-in configs).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a JSON experiment config.
    Run {
        config: PathBuf,
        /// Refuse schemes whose step-size conditions fail.
        #[arg(long)]
        strict: bool,
        /// Override the output prefix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the plant timescale of a plant config.
    Sweep {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon: Vec<f64>,
    },
    /// Run the property suite.
    Verify {
        #[arg(long)]
        strict: bool,
        /// Inject a fault (integrator_x10).
        #[arg(long)]
        fault: Option<Fault>,
        /// Signal used by the suite: example or sinusoidal.
        #[arg(long, default_value = "example")]
        signal: VerifySignal,
        #[arg(long, default_value_t = experiments::DEFAULT_SEED)]
        seed: u64,
    },
}

fn print_summary(s: &RunSummary) {
    for w in &s.validation.warnings {
        eprintln!("warning: {}: {w}", s.name);
    }
    let target: Vec<String> = s.target.iter().map(|v| format!("{v:.4}")).collect();
    print!("{:<16} {:<10} jumps {:>3}  target ({})", s.name, s.scheme, s.jumps_completed, target.join(", "));
    if let Some(c) = &s.convergence {
        print!("  final {:.4}  window sup {:.4}", c.final_distance, c.ultimate_bound_estimate);
        if let Some(j) = c.jumps_to(0.5) {
            print!("  <=0.5 at jump {j}");
        }
    }
    if let Some(r) = &s.integrator_bound {
        print!("  p-bound violations {}", r.violations.len());
    }
    if let Some(d) = s.max_infeasibility {
        print!("  infeasibility {d:.1e}");
    }
    println!();
    if let Some(e) = &s.escape {
        eprintln!("escape: {}: {e}", s.name);
    }
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, RunError> {
    Ok(ExperimentConfig::load(path)?)
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Example { which, out } => {
            let (report, _) = experiments::run_example(which, out.as_deref())?;
            for s in &report.runs {
                print_summary(s);
            }
            if let Some(rank) = &report.ranking {
                for r in rank {
                    println!("rank {} {:<10} jumps to 0.5: {:?}", r.rank, r.label, r.jumps);
                }
            }
            if let Some(d) = report.deviation_from_static {
                println!("max post-jump deviation from the static arc: {d:.4}");
            }
        }
        Command::Run { config, strict, out } => {
            let mut cfg = load(&config)?;
            cfg.strict |= strict;
            if let Some(out) = out {
                cfg = cfg.with_output(out);
            }
            let outcome = experiments::simulate(&cfg)?;
            print_summary(&outcome.summary);
            experiments::write_outcome(&outcome)?;
            if outcome.summary.escape.is_some() {
                let last = outcome.arc.last().expect("nonempty");
                return Err(RunError::Escape { t: last.t, j: last.j });
            }
        }
        Command::Sweep { config, epsilon } => {
            let cfg = load(&config)?;
            let table = experiments::run_sweep(&cfg, &epsilon)?;
            println!("{:>10} {:>10} {:>12}", "epsilon", "step", "deviation");
            for r in &table.rows {
                match (r.deviation, &r.escape) {
                    (Some(d), _) => println!("{:>10} {:>10.1e} {:>12.6}", r.epsilon, r.step, d),
                    (None, Some(e)) => println!("{:>10} {:>10.1e} {:>12}  {e}", r.epsilon, r.step, "escape"),
                    _ => {}
                }
            }
            if table.rows.iter().any(|r| r.escape.is_some()) {
                let r = table.rows.iter().find(|r| r.escape.is_some()).unwrap();
                eprintln!("escape at epsilon = {}", r.epsilon);
                return Err(RunError::Escape { t: f64::NAN, j: 0 });
            }
        }
        Command::Verify { strict, fault, signal, seed } => {
            let report = experiments::verify(&VerifyOptions { strict, fault, signal, seed });
            print!("{}", report.render());
            if !report.passed() {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                return Err(RunError::Verification(failed.join(", ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
