//! Projected descent onto the ball of radius 3.

use prli::experiments::run_example;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, outcomes) = run_example(2, Some("out".as_ref()))?;
    let s = &outcomes[0].summary;
    println!("constrained minimizer {:?}", s.target);
    println!("final distance {:.4}", s.convergence.as_ref().unwrap().final_distance);
    println!("worst post-jump infeasibility {:e}", s.max_infeasibility.unwrap());
    Ok(())
}
