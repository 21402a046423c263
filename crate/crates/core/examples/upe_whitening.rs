//! Certify the moments of a few signals and whiten a raw piecewise-linear one.

use prli::signals::{certify_moments, piecewise_linear_upe, sinusoidal_upe, whiten, PiecewiseLinearNodes, Quadrature};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = Quadrature::default();
    for n in [1, 3, 8] {
        let s = sinusoidal_upe(n)?;
        let r = certify_moments(&s, &quad);
        println!("sinusoidal n={n}: M_v {:.4}, mean {:.1e}, cov {:.1e}", s.sup_norm(), r.mean, r.covariance);
    }

    let raw = piecewise_linear_upe(PiecewiseLinearNodes::example());
    let r = certify_moments(&raw, &quad);
    println!("raw nodes:  mean {:.1e}, cov {:.1e}", r.mean, r.covariance);
    let white = whiten(&raw, &quad)?;
    let r = white.certify(&quad)?;
    println!("whitened:   mean {:.1e}, cov {:.1e}, M_v {:.4}", r.mean, r.covariance, white.sup_norm());

    // a signal with only two independent directions cannot be whitened in 3-D
    let flat = PiecewiseLinearNodes::from_rows(&[
        vec![1.0, -1.0, 0.0],
        vec![-1.0, 1.0, 0.0],
        vec![1.0, 1.0, 0.0],
        vec![-1.0, -1.0, 0.0],
    ])?;
    match whiten(&piecewise_linear_upe(flat), &quad) {
        Ok(_) => println!("unexpected: flat signal whitened"),
        Err(e) => println!("flat signal: {e}"),
    }
    Ok(())
}
