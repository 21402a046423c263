//! Zeroth-order gradient oracle built from dithered cost measurements.
//!
//! The closed-form oracle is `Φ̄_a(u) = a⁻¹∫₀¹ φ(u + a·v(τ))·v(τ) dτ`. The same
//! quantity is produced in real time by integrating `dp/dτ = φ(u + a·v(τ))·v(τ)`
//! from `p(0) = 0` and reading `a⁻¹·p(1)`.

use std::sync::Arc;

use crate::cost::Measure;
use crate::error::OracleError;
use crate::linalg::Vector;
use crate::signals::{Quadrature, UpeSignal};

/// Dither amplitude used throughout the worked examples.
pub const DEFAULT_AMPLITUDE: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    amplitude: f64,
    signal: Arc<UpeSignal>,
    quadrature: Quadrature,
    table: Arc<Vec<(f64, Vector)>>,
}

impl OracleConfig {
    /// Negative amplitudes are fine; zero is rejected.
    pub fn new(amplitude: f64, signal: UpeSignal, quadrature: Quadrature) -> Result<Self, OracleError> {
        if amplitude == 0.0 || !amplitude.is_finite() {
            return Err(OracleError::ZeroAmplitude);
        }
        let table = Arc::new(signal.tabulate(&quadrature));
        Ok(OracleConfig {
            amplitude,
            signal: Arc::new(signal),
            quadrature,
            table,
        })
    }

    pub fn with_signal(amplitude: f64, signal: UpeSignal) -> Result<Self, OracleError> {
        Self::new(amplitude, signal, Quadrature::default())
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn signal(&self) -> &UpeSignal {
        &self.signal
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quadrature
    }

    pub fn dim(&self) -> usize {
        self.signal.dim()
    }

    fn check_dim(&self, u: &Vector) -> Result<(), OracleError> {
        if u.len() != self.dim() {
            return Err(OracleError::DimensionMismatch {
                signal: self.dim(),
                input: u.len(),
            });
        }
        Ok(())
    }
}

/// `Φ̄_a(u)` by composite quadrature over the precomputed signal table.
pub fn quadrature_oracle(
    measure: &dyn Measure,
    u: &Vector,
    cfg: &OracleConfig,
) -> Result<Vector, OracleError> {
    cfg.check_dim(u)?;
    let a = cfg.amplitude;
    let mut acc = Vector::zeros(u.len());
    let mut probe = u.clone();
    for (w, v) in cfg.table.iter() {
        probe.copy_from(u);
        probe.axpy(a, v, 1.0);
        acc.axpy(w * measure.measure(&probe), v, 1.0);
    }
    Ok(acc / a)
}

/// `Φ_a(u, τ) = φ(u + a·v(τ))·v(τ)`, the integrand of the resetting integrator.
pub fn integrator_rhs(
    measure: &dyn Measure,
    u_held: &Vector,
    cfg: &OracleConfig,
    tau: f64,
) -> Result<Vector, OracleError> {
    cfg.check_dim(u_held)?;
    let v = cfg.signal.eval(tau)?;
    Ok(dithered_rhs(measure, u_held, cfg.amplitude, &v))
}

pub(crate) fn dithered_rhs(measure: &dyn Measure, u: &Vector, a: f64, v: &Vector) -> Vector {
    let probe = u + v * a;
    v * measure.measure(&probe)
}

/// Uniform bound `M_v³·L_φ·|a|` on the oracle remainder `Φ̄_a − ∇φ`.
pub fn remainder_bound(sup_norm: f64, lipschitz: f64, amplitude: f64) -> f64 {
    sup_norm.powi(3) * lipschitz * amplitude.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{example_quadratic, CostFunction, FnMeasure};
    use crate::signals::{example_signal, sinusoidal_upe};
    use approx::assert_relative_eq;

    fn origin() -> Vector {
        Vector::zeros(3)
    }

    #[test]
    fn zero_amplitude_rejected() {
        let err = OracleConfig::with_signal(0.0, sinusoidal_upe(3).unwrap()).unwrap_err();
        assert_eq!(err, OracleError::ZeroAmplitude);
    }

    #[test]
    fn constants_are_invisible() {
        let cfg = OracleConfig::with_signal(0.1, sinusoidal_upe(3).unwrap()).unwrap();
        let c = FnMeasure::new(3, |_: &Vector| 5.0);
        let g = quadrature_oracle(&c, &Vector::from_vec(vec![1.0, 2.0, 3.0]), &cfg).unwrap();
        assert!(g.norm() < 1e-9, "{g}");
    }

    #[test]
    fn small_amplitude_recovers_gradient() {
        let cfg = OracleConfig::with_signal(1e-6, example_signal(true)).unwrap();
        let g = quadrature_oracle(&example_quadratic(), &origin(), &cfg).unwrap();
        assert!((g - Vector::from_vec(vec![-7.0, 1.0, -11.0])).norm() < 1e-3);
    }

    #[test]
    fn rhs_matches_direct_evaluation() {
        let cfg = OracleConfig::with_signal(0.1, sinusoidal_upe(3).unwrap()).unwrap();
        let cost = example_quadratic();
        let got = integrator_rhs(&cost, &origin(), &cfg, 0.25).unwrap();
        let v = Vector::from_vec(vec![
            2f64.sqrt() * (std::f64::consts::PI / 2.0).sin(),
            2f64.sqrt() * std::f64::consts::PI.sin(),
            2f64.sqrt() * (1.5 * std::f64::consts::PI).sin(),
        ]);
        let expected = &v * cost.value(&(&v * 0.1));
        assert!((got - expected).norm() < 1e-12);
    }

    #[test]
    fn rhs_vanishes_where_signal_does() {
        let cfg = OracleConfig::with_signal(0.1, sinusoidal_upe(3).unwrap()).unwrap();
        let got = integrator_rhs(&example_quadratic(), &origin(), &cfg, 0.0).unwrap();
        assert!(got.norm() < 1e-15);
        let c = FnMeasure::new(3, |_: &Vector| 2.5);
        let got = integrator_rhs(&c, &origin(), &cfg, 0.1).unwrap();
        let v = cfg.signal().eval(0.1).unwrap();
        assert!((got - v * 2.5).norm() < 1e-15);
    }

    #[test]
    fn rhs_outside_window_is_an_error() {
        let cfg = OracleConfig::with_signal(0.1, sinusoidal_upe(3).unwrap()).unwrap();
        assert!(integrator_rhs(&example_quadratic(), &origin(), &cfg, 1.01).is_err());
    }

    #[test]
    fn remainder_bound_arithmetic() {
        assert_eq!(remainder_bound(1.0, 1.0, 0.0), 0.0);
        assert_relative_eq!(remainder_bound(6f64.sqrt(), 3.0, 0.1), 4.409081537009721, epsilon = 1e-12);
        assert_relative_eq!(remainder_bound(2.0, 1.0, -0.5), 4.0);
    }

    #[test]
    fn dimension_mismatch() {
        let cfg = OracleConfig::with_signal(0.1, sinusoidal_upe(2).unwrap()).unwrap();
        assert!(matches!(
            quadrature_oracle(&example_quadratic(), &origin(), &cfg),
            Err(OracleError::DimensionMismatch { signal: 2, input: 3 })
        ));
    }

    #[test]
    fn linear_in_the_cost() {
        let cfg = OracleConfig::with_signal(0.1, example_signal(true)).unwrap();
        let f1 = example_quadratic();
        let f2 = CostFunction::from_value(3, |u| (u[0] * 0.3).sin() + u[1] * u[2]);
        let mix = f1.combine(2.0, &f2, -0.7);
        let u = Vector::from_vec(vec![0.4, -1.1, 2.0]);
        let lhs = quadrature_oracle(&mix, &u, &cfg).unwrap();
        let rhs = quadrature_oracle(&f1, &u, &cfg).unwrap() * 2.0
            - quadrature_oracle(&f2, &u, &cfg).unwrap() * 0.7;
        assert!((lhs - rhs).norm() < 1e-9);
    }
}
