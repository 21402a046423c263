//! How far the measurement-only oracle is from the true gradient as the dither
//! amplitude shrinks, next to the uniform remainder bound.

use prli::cost::example_quadratic;
use prli::linalg::Vector;
use prli::oracle::{quadrature_oracle, remainder_bound, OracleConfig};
use prli::signals::example_signal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cost = example_quadratic();
    let u = Vector::from_vec(vec![4.0, -3.0, 0.5]);
    let grad = cost.gradient(&u)?;
    for a in [1.0, 0.1, 0.01, 0.001] {
        let cfg = OracleConfig::with_signal(a, example_signal(true))?;
        let est = quadrature_oracle(&cost, &u, &cfg)?;
        let bound = remainder_bound(cfg.signal().sup_norm(), 3.0, a);
        println!("a = {a:<6} |estimate - gradient| = {:.3e}   bound {:.3e}", (est - &grad).norm(), bound);
    }
    Ok(())
}
