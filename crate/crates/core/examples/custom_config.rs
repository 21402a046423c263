//! Load a JSON config, tweak it, and run it. Pass a path to use your own file.

use prli::config::{ExperimentConfig, EXAMPLE2_PGD};
use prli::experiments::run_config;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::load(path.as_ref())?,
        None => ExperimentConfig::parse(EXAMPLE2_PGD, "example2_pgd.json")?,
    };
    cfg.a = 0.05;
    cfg.jumps = Some(80);
    cfg = cfg.with_output("out/custom");
    let outcome = run_config(&cfg)?;
    let c = outcome.summary.convergence.unwrap();
    println!("{}: final distance {:.4}, window sup {:.4}", cfg.name, c.final_distance, c.ultimate_bound_estimate);
    println!("wrote {} and {}", cfg.csv_path().display(), cfg.summary_path().display());
    Ok(())
}
