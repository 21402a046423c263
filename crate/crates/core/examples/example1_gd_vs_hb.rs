//! Gradient descent and heavy ball driven by the resetting integrator on the
//! three-dimensional quadratic. Writes arc CSVs under `out/`.

use prli::experiments::run_example;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (report, outcomes) = run_example(1, Some("out".as_ref()))?;
    for o in &outcomes {
        let c = o.summary.convergence.as_ref().expect("50 jumps");
        println!(
            "{:<10} reaches 0.5 at jump {:?}, final distance {:.4}",
            o.summary.scheme,
            c.jumps_to(0.5),
            c.final_distance
        );
        for w in &o.summary.validation.warnings {
            println!("  warning: {w}");
        }
    }
    for r in report.ranking.unwrap() {
        println!("rank {}: {}", r.rank, r.label);
    }
    Ok(())
}
