//! Deviation of the plant-in-the-loop arc from the static arc as the plant
//! gets faster.

use prli::config::{ExperimentConfig, EXAMPLE3_PLANT};
use prli::experiments::run_sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::parse(EXAMPLE3_PLANT, "example3_plant.json")?.with_output("out/sweep");
    let table = run_sweep(&cfg, &[0.1, 0.03, 0.01, 0.003, 0.001])?;
    for r in &table.rows {
        println!("eps {:<6} step {:.0e}  deviation {:?}", r.epsilon, r.step, r.deviation);
    }
    println!("shrinking within 10%: {}", table.shrinking(0.1));
    Ok(())
}
