//! A user-defined nonlinear plant closed around projected descent.

use prli::cost::ConvexFeasibleSet;
use prli::hybrid::{solve, SolveHorizon};
use prli::linalg::Vector;
use prli::optimizers::pgd_scheme;
use prli::oracle::OracleConfig;
use prli::plants::{build_interconnected, plant_step_control, steady_state_cost, CompactBound, Plant};
use prli::signals::sinusoidal_upe;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // εθ̇ = tanh(u) − θ, y = (θ₁ − 0.5)² + (θ₂ + 0.2)²
    let plant = Plant::new(
        2,
        2,
        0.02,
        |th: &Vector, u: &Vector| u.map(f64::tanh) - th,
        |th: &Vector, _: &Vector| (th[0] - 0.5).powi(2) + (th[1] + 0.2).powi(2),
    )?
    .with_steady_state(|u: &Vector| u.map(f64::tanh));

    let oracle = OracleConfig::with_signal(0.05, sinusoidal_upe(2)?)?;
    let scheme = pgd_scheme(0.5, ConvexFeasibleSet::ball(Vector::zeros(2), 2.0)?);
    let u0 = Vector::zeros(2);
    let bound = CompactBound::default_for(&u0, &plant, &oracle);
    let step = plant_step_control(&plant, 1e-3);
    let sys = build_interconnected(plant.clone(), scheme, oracle, bound)?;
    let arc = solve(&sys, &sys.initial_state(&u0, &Vector::zeros(2)), SolveHorizon::jumps(40), step)?;

    let l = sys.state_layout();
    let u = l.u(&arc.last().unwrap().x);
    let phi = steady_state_cost(&plant)?;
    println!("u after 40 updates: ({:.4}, {:.4}), steady-state cost {:.2e}", u[0], u[1], phi.value(&u));
    println!("atanh targets:      ({:.4}, {:.4})", 0.5f64.atanh(), (-0.2f64).atanh());
    Ok(())
}
