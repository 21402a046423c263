//! The property suite, once clean and once with the integrator scaled by 10.

use prli::experiments::{verify, Fault, VerifyOptions};

fn main() {
    let clean = verify(&VerifyOptions::default());
    print!("{}", clean.render());
    let faulty = verify(&VerifyOptions {
        fault: Some(Fault::IntegratorX10),
        ..Default::default()
    });
    let c = faulty.checks.iter().find(|c| c.name == "integrator_bound").unwrap();
    println!("with fault: {} {}", if c.passed { "PASS" } else { "FAIL" }, c.detail);
}
