//! Projected descent acting on a first-order plant `εθ̇ = u − θ` that is only
//! observed through its output.

use prli::experiments::run_example;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (report, outcomes) = run_example(3, Some("out".as_ref()))?;
    let s = &outcomes[0].summary;
    println!("epsilon {:?}, step {}", s.epsilon, s.step);
    println!("final distance {:.4}", s.convergence.as_ref().unwrap().final_distance);
    println!("max deviation from the static arc {:.4}", report.deviation_from_static.unwrap());
    Ok(())
}
