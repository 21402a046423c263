//! Unbiased persistently exciting (UPE) exploration signals on `[0, 1]`.
//!
//! A UPE signal `v` is continuous with `∫v = 0` and `∫vvᵀ = I`. Signals here
//! carry their sup-norm `M_v` and a moment tolerance, and report the interior
//! points where they are not smooth so that quadrature and flow integration can
//! split there.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use crate::error::SignalError;
use crate::linalg::{sym_apply, sym_eigenvalues, Matrix, Vector};

/// Smallest covariance eigenvalue accepted by [`whiten`].
pub const MIN_EXCITATION: f64 = 1e-10;
/// Tolerance attached to analytic signals such as [`sinusoidal_upe`].
pub const ANALYTIC_TOLERANCE: f64 = 1e-6;
/// Tolerance attached to raw user signals before whitening.
pub const RAW_TOLERANCE: f64 = 1e-3;
/// Tolerance attached to the output of [`whiten`].
pub const WHITENED_TOLERANCE: f64 = 1e-9;

/// Node values of the three-segment exploration signal used in the worked examples.
pub const EXAMPLE_NODES: [[f64; 3]; 4] = [
    [1.5993, 1.7234, 1.9678],
    [0.6653, -1.8544, -0.8478],
    [-1.7934, 0.2314, 1.1533],
    [0.6570, 1.5225, -2.5788],
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Midpoint,
    #[default]
    Simpson,
}

/// Composite quadrature on `[0, 1]`, split at signal breakpoints.
///
/// `panels` is the total number of panels; each smooth piece receives a share
/// proportional to its length (at least one).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub panels: usize,
    pub rule: QuadratureRule,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            panels: 4096,
            rule: QuadratureRule::Simpson,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureNode {
    pub tau: f64,
    pub weight: f64,
}

impl Quadrature {
    pub fn new(panels: usize, rule: QuadratureRule) -> Result<Self, SignalError> {
        if panels < 2 {
            return Err(SignalError::InvalidQuadrature(panels));
        }
        Ok(Quadrature { panels, rule })
    }

    pub fn simpson(panels: usize) -> Result<Self, SignalError> {
        Self::new(panels, QuadratureRule::Simpson)
    }

    pub fn midpoint(panels: usize) -> Result<Self, SignalError> {
        Self::new(panels, QuadratureRule::Midpoint)
    }

    /// Nodes and weights on `[0, 1]` with pieces split at `breakpoints`.
    ///
    /// The right end of an interior piece is evaluated at the left limit of its
    /// breakpoint, so piecewise-defined signals are sampled from the correct side.
    pub fn nodes(&self, breakpoints: &[f64]) -> Vec<QuadratureNode> {
        let mut edges = Vec::with_capacity(breakpoints.len() + 2);
        edges.push(0.0);
        edges.extend(breakpoints.iter().copied().filter(|b| *b > 0.0 && *b < 1.0));
        edges.push(1.0);

        let mut out = Vec::new();
        for win in edges.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            let len = hi - lo;
            let count = ((self.panels as f64) * len).round().max(1.0) as usize;
            let h = len / count as f64;
            let right = if hi < 1.0 { hi.next_down() } else { hi };
            match self.rule {
                QuadratureRule::Midpoint => {
                    for i in 0..count {
                        out.push(QuadratureNode {
                            tau: lo + (i as f64 + 0.5) * h,
                            weight: h,
                        });
                    }
                }
                QuadratureRule::Simpson => {
                    out.push(QuadratureNode {
                        tau: lo,
                        weight: h / 6.0,
                    });
                    for i in 0..count {
                        out.push(QuadratureNode {
                            tau: lo + (i as f64 + 0.5) * h,
                            weight: 4.0 * h / 6.0,
                        });
                        let end = if i + 1 == count {
                            right
                        } else {
                            lo + (i + 1) as f64 * h
                        };
                        let w = if i + 1 == count { h / 6.0 } else { 2.0 * h / 6.0 };
                        out.push(QuadratureNode { tau: end, weight: w });
                    }
                }
            }
        }
        out
    }
}

/// Interpolation form for piecewise-linear node data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiecewiseForm {
    /// `(1−s)·v^k + s·v^{k+1}`, continuous.
    Interpolant,
    /// `v^k + s·v^{k+1}` on segment `k`; discontinuous at the segment ends.
    Literal,
}

/// `K + 1` node vectors defining `K` equal-length segments on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearNodes {
    nodes: Vec<Vector>,
}

impl PiecewiseLinearNodes {
    pub fn new(nodes: Vec<Vector>) -> Result<Self, SignalError> {
        if nodes.len() < 2 {
            return Err(SignalError::TooFewNodes(nodes.len()));
        }
        let n = nodes[0].len();
        if n == 0 {
            return Err(SignalError::InvalidDimension);
        }
        for (index, node) in nodes.iter().enumerate() {
            if node.len() != n {
                return Err(SignalError::DimensionMismatch {
                    index,
                    expected: n,
                    found: node.len(),
                });
            }
        }
        Ok(PiecewiseLinearNodes { nodes })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SignalError> {
        Self::new(rows.iter().map(|r| Vector::from_vec(r.clone())).collect())
    }

    pub fn example() -> Self {
        PiecewiseLinearNodes {
            nodes: EXAMPLE_NODES
                .iter()
                .map(|r| Vector::from_row_slice(r))
                .collect(),
        }
    }

    pub fn nodes(&self) -> &[Vector] {
        &self.nodes
    }

    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].len()
    }
}

type SignalFn = Arc<dyn Fn(f64) -> Vector + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Sinusoidal,
    Piecewise {
        nodes: Vec<Vector>,
        form: PiecewiseForm,
    },
    Affine {
        base: Arc<UpeSignal>,
        shift: Vector,
        transform: Matrix,
    },
    Custom(SignalFn),
}

/// An exploration signal `v: [0, 1] → ℝⁿ`. Immutable once built.
#[derive(Clone)]
pub struct UpeSignal {
    dim: usize,
    shape: Shape,
    sup_norm: f64,
    moment_tolerance: f64,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for UpeSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.shape {
            Shape::Sinusoidal => "sinusoidal",
            Shape::Piecewise { form: PiecewiseForm::Interpolant, .. } => "piecewise_linear",
            Shape::Piecewise { form: PiecewiseForm::Literal, .. } => "piecewise_literal",
            Shape::Affine { .. } => "affine",
            Shape::Custom(_) => "custom",
        };
        f.debug_struct("UpeSignal")
            .field("kind", &kind)
            .field("dim", &self.dim)
            .field("sup_norm", &self.sup_norm)
            .field("moment_tolerance", &self.moment_tolerance)
            .finish()
    }
}

/// Residuals of the two UPE moment conditions.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct MomentResiduals {
    /// `‖∫v‖₂`
    pub mean: f64,
    /// `‖∫vvᵀ − I‖_F`
    pub covariance: f64,
}

impl MomentResiduals {
    pub fn max(&self) -> f64 {
        self.mean.max(self.covariance)
    }
}

/// `v(τ) = √2·(sin 2πτ, sin 4πτ, …, sin 2nπτ)`.
pub fn sinusoidal_upe(n: usize) -> Result<UpeSignal, SignalError> {
    if n == 0 {
        return Err(SignalError::InvalidDimension);
    }
    Ok(UpeSignal {
        dim: n,
        shape: Shape::Sinusoidal,
        sup_norm: (2.0 * n as f64).sqrt(),
        moment_tolerance: ANALYTIC_TOLERANCE,
        breakpoints: Vec::new(),
    })
}

/// Continuous piecewise-linear interpolant of the nodes.
pub fn piecewise_linear_upe(nodes: PiecewiseLinearNodes) -> UpeSignal {
    piecewise(nodes, PiecewiseForm::Interpolant)
}

/// The segment formula `v^k + (Kτ−k)·v^{k+1}` evaluated literally, kept for comparison.
pub fn piecewise_literal_upe(nodes: PiecewiseLinearNodes) -> UpeSignal {
    piecewise(nodes, PiecewiseForm::Literal)
}

fn piecewise(nodes: PiecewiseLinearNodes, form: PiecewiseForm) -> UpeSignal {
    let k = nodes.segments();
    let breakpoints = (1..k).map(|i| i as f64 / k as f64).collect();
    let nodes = nodes.nodes;
    let sup_norm = match form {
        PiecewiseForm::Interpolant => nodes.iter().map(Vector::norm).fold(0.0, f64::max),
        PiecewiseForm::Literal => nodes
            .windows(2)
            .flat_map(|w| [w[0].norm(), (&w[0] + &w[1]).norm()])
            .fold(0.0, f64::max),
    };
    UpeSignal {
        dim: nodes[0].len(),
        shape: Shape::Piecewise { nodes, form },
        sup_norm,
        moment_tolerance: RAW_TOLERANCE,
        breakpoints,
    }
}

/// The example signal, whitened (the default) or as the raw interpolant.
pub fn example_signal(whitened: bool) -> UpeSignal {
    let raw = piecewise_linear_upe(PiecewiseLinearNodes::example());
    if whitened {
        whiten(&raw, &Quadrature::default()).expect("example nodes are persistently exciting")
    } else {
        raw
    }
}

const SUP_SAMPLES: usize = 16384;

impl UpeSignal {
    /// Wrap an arbitrary continuous function. `breakpoints` lists interior
    /// points in `(0, 1)` where the function may fail to be smooth. The
    /// sup-norm is estimated on a uniform grid plus the breakpoints.
    pub fn custom<F>(dim: usize, f: F, breakpoints: Vec<f64>) -> Result<Self, SignalError>
    where
        F: Fn(f64) -> Vector + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(SignalError::InvalidDimension);
        }
        let probe = f(0.0);
        if probe.len() != dim {
            return Err(SignalError::DimensionMismatch {
                index: 0,
                expected: dim,
                found: probe.len(),
            });
        }
        let mut signal = UpeSignal {
            dim,
            shape: Shape::Custom(Arc::new(f)),
            sup_norm: 0.0,
            moment_tolerance: RAW_TOLERANCE,
            breakpoints: sorted_breakpoints(breakpoints),
        };
        signal.sup_norm = signal.sampled_sup();
        Ok(signal)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `M_v = sup ‖v(τ)‖`.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn moment_tolerance(&self) -> f64 {
        self.moment_tolerance
    }

    pub fn with_moment_tolerance(mut self, tol: f64) -> Self {
        self.moment_tolerance = tol.max(0.0);
        self
    }

    /// Interior points of `(0, 1)` where the signal is not smooth.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, tau: f64) -> Result<Vector, SignalError> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(SignalError::OutOfDomain(tau));
        }
        Ok(self.value(tau))
    }

    /// Unchecked evaluation for callers that keep `τ ∈ [0, 1]` by construction.
    pub(crate) fn value(&self, tau: f64) -> Vector {
        match &self.shape {
            Shape::Sinusoidal => Vector::from_fn(self.dim, |i, _| {
                SQRT_2 * (2.0 * PI * (i + 1) as f64 * tau).sin()
            }),
            Shape::Piecewise { nodes, form } => {
                let k = nodes.len() - 1;
                let scaled = tau * k as f64;
                let seg = (scaled.floor() as usize).min(k - 1);
                let s = scaled - seg as f64;
                match form {
                    PiecewiseForm::Interpolant => &nodes[seg] * (1.0 - s) + &nodes[seg + 1] * s,
                    PiecewiseForm::Literal => &nodes[seg] + &nodes[seg + 1] * s,
                }
            }
            Shape::Affine {
                base,
                shift,
                transform,
            } => transform * (base.value(tau) - shift),
            Shape::Custom(f) => f(tau),
        }
    }

    /// `τ ↦ U·v(τ)` for a square matrix `U`. Orthogonal `U` preserves the UPE
    /// moments and the sup-norm.
    pub fn transformed(&self, transform: Matrix) -> Result<Self, SignalError> {
        if transform.nrows() != self.dim || transform.ncols() != self.dim {
            return Err(SignalError::DimensionMismatch {
                index: 0,
                expected: self.dim,
                found: transform.nrows(),
            });
        }
        let zero = Vector::zeros(self.dim);
        Ok(self.affine(zero, transform, self.moment_tolerance))
    }

    fn affine(&self, shift: Vector, transform: Matrix, moment_tolerance: f64) -> Self {
        if let Shape::Piecewise {
            nodes,
            form: PiecewiseForm::Interpolant,
        } = &self.shape
        {
            // affine images of an interpolant are again interpolants
            let mapped = nodes.iter().map(|v| &transform * (v - &shift)).collect();
            let pw = PiecewiseLinearNodes::new(mapped).expect("dimension preserved");
            return piecewise_linear_upe(pw).with_moment_tolerance(moment_tolerance);
        }
        let mut out = UpeSignal {
            dim: self.dim,
            shape: Shape::Affine {
                base: Arc::new(self.clone()),
                shift,
                transform,
            },
            sup_norm: 0.0,
            moment_tolerance,
            breakpoints: self.breakpoints.clone(),
        };
        out.sup_norm = out.sampled_sup();
        out
    }

    fn sampled_sup(&self) -> f64 {
        let grid = (0..=SUP_SAMPLES).map(|i| i as f64 / SUP_SAMPLES as f64);
        let kinks = self
            .breakpoints
            .iter()
            .flat_map(|b| [b.next_down(), *b]);
        grid.chain(kinks)
            .map(|t| self.value(t).norm())
            .fold(0.0, f64::max)
    }

    /// Moment residuals, failing if either exceeds the signal's tolerance.
    pub fn certify(&self, quadrature: &Quadrature) -> Result<MomentResiduals, SignalError> {
        let r = certify_moments(self, quadrature);
        if r.mean <= self.moment_tolerance && r.covariance <= self.moment_tolerance {
            Ok(r)
        } else {
            Err(SignalError::NotUnbiased {
                mean: r.mean,
                covariance: r.covariance,
                tolerance: self.moment_tolerance,
            })
        }
    }

    /// Signal values at the quadrature nodes, paired with their weights.
    pub fn tabulate(&self, quadrature: &Quadrature) -> Vec<(f64, Vector)> {
        quadrature
            .nodes(&self.breakpoints)
            .into_iter()
            .map(|node| (node.weight, self.value(node.tau)))
            .collect()
    }
}

fn sorted_breakpoints(mut b: Vec<f64>) -> Vec<f64> {
    b.retain(|x| *x > 0.0 && *x < 1.0);
    b.sort_by(|x, y| x.total_cmp(y));
    b.dedup();
    b
}

fn first_two_moments(signal: &UpeSignal, quadrature: &Quadrature) -> (Vector, Matrix) {
    let n = signal.dim();
    let mut mean = Vector::zeros(n);
    let mut second = Matrix::zeros(n, n);
    for (w, v) in signal.tabulate(quadrature) {
        mean.axpy(w, &v, 1.0);
        second.ger(w, &v, &v, 1.0);
    }
    (mean, second)
}

/// `‖∫v‖₂` and `‖∫vvᵀ − I‖_F` under composite quadrature.
pub fn certify_moments(signal: &UpeSignal, quadrature: &Quadrature) -> MomentResiduals {
    let (mean, second) = first_two_moments(signal, quadrature);
    let n = signal.dim();
    MomentResiduals {
        mean: mean.norm(),
        covariance: (second - Matrix::identity(n, n)).norm(),
    }
}

/// Turn a persistently exciting signal into a UPE signal:
/// `v(τ) = Q_v^{-1/2}(ρ(τ) − ρ̄)` with `Q_v = ∫ρρᵀ − ρ̄ρ̄ᵀ`.
pub fn whiten(raw: &UpeSignal, quadrature: &Quadrature) -> Result<UpeSignal, SignalError> {
    let (mean, second) = first_two_moments(raw, quadrature);
    let cov = second - &mean * mean.transpose();
    let lambda_min = sym_eigenvalues(&cov)[0];
    if !(lambda_min > MIN_EXCITATION) {
        return Err(SignalError::NotPersistentlyExciting { lambda_min });
    }
    let inv_sqrt = sym_apply(&cov, |l| 1.0 / l.sqrt());
    let out = raw.affine(mean, inv_sqrt, WHITENED_TOLERANCE);
    out.certify(quadrature)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fine_midpoint(signal: &UpeSignal, points: usize) -> (Vector, Matrix) {
        // plain midpoint rule, no breakpoint splitting
        let n = signal.dim();
        let mut mean = Vector::zeros(n);
        let mut second = Matrix::zeros(n, n);
        let h = 1.0 / points as f64;
        for i in 0..points {
            let v = signal.eval((i as f64 + 0.5) * h).unwrap();
            mean += &v * h;
            second += &v * v.transpose() * h;
        }
        (mean, second)
    }

    #[test]
    fn sinusoidal_values() {
        let v = sinusoidal_upe(1).unwrap();
        assert_relative_eq!(v.eval(0.25).unwrap()[0], SQRT_2, epsilon = 1e-15);
        let v3 = sinusoidal_upe(3).unwrap();
        assert!(v3.eval(0.0).unwrap().iter().all(|x| x.abs() < 1e-15));
        assert_relative_eq!(v3.sup_norm(), 6f64.sqrt());
    }

    #[test]
    fn sinusoidal_rejects_zero_dimension() {
        assert_eq!(sinusoidal_upe(0).unwrap_err(), SignalError::InvalidDimension);
    }

    #[test]
    fn sinusoidal_moments_match_independent_midpoint() {
        let v = sinusoidal_upe(2).unwrap();
        let (mean, second) = fine_midpoint(&v, 10_000);
        assert!(mean.norm() < 1e-6);
        assert!((second - Matrix::identity(2, 2)).norm() < 1e-6);
        let r = certify_moments(&sinusoidal_upe(3).unwrap(), &Quadrature::simpson(10_000).unwrap());
        assert!(r.max() <= 1e-6);
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let v = sinusoidal_upe(2).unwrap();
        assert_eq!(v.eval(1.5).unwrap_err(), SignalError::OutOfDomain(1.5));
        assert!(v.eval(-1e-9).is_err());
        assert!(v.eval(1.0).is_ok());
    }

    #[test]
    fn example_interpolant_mean_is_trapezoid_of_nodes() {
        let v = piecewise_linear_upe(PiecewiseLinearNodes::example());
        let n: Vec<Vector> = PiecewiseLinearNodes::example().nodes().to_vec();
        let closed = (&n[0] + &n[1] * 2.0 + &n[2] * 2.0 + &n[3]) / 6.0;
        assert!(closed.norm() < 1e-3);
        let (mean, _) = fine_midpoint(&v, 30_000);
        assert!((mean - closed).norm() < 1e-9);
        assert_relative_eq!(v.sup_norm(), n[0].norm(), epsilon = 1e-12);
        assert!((v.sup_norm() - 3.066).abs() < 1e-3);
    }

    #[test]
    fn interpolant_is_continuous_at_knots() {
        let v = piecewise_linear_upe(PiecewiseLinearNodes::example());
        for b in v.breakpoints() {
            let left = v.eval(b.next_down()).unwrap();
            let right = v.eval(*b).unwrap();
            assert!((left - right).norm() < 1e-12);
        }
    }

    #[test]
    fn literal_form_jumps_at_knots() {
        let v = piecewise_literal_upe(PiecewiseLinearNodes::example());
        let left = v.eval((1.0f64 / 3.0).next_down()).unwrap();
        let right = v.eval(1.0 / 3.0).unwrap();
        assert!((left - right).norm() > 0.5);
    }

    #[test]
    fn constant_two_node_signal_fails_certification() {
        let c = Vector::from_vec(vec![1.0, -2.0]);
        let v = piecewise_linear_upe(PiecewiseLinearNodes::new(vec![c.clone(), c]).unwrap());
        let r = certify_moments(&v, &Quadrature::default());
        assert_relative_eq!(r.mean, 5f64.sqrt(), epsilon = 1e-12);
        assert!(v.certify(&Quadrature::default()).is_err());
        let z = Vector::zeros(2);
        let zero = piecewise_linear_upe(PiecewiseLinearNodes::new(vec![z.clone(), z]).unwrap());
        assert_eq!(certify_moments(&zero, &Quadrature::default()).mean, 0.0);
    }

    #[test]
    fn zero_signal_covariance_residual_is_identity_norm() {
        let z = UpeSignal::custom(3, |_| Vector::zeros(3), vec![]).unwrap();
        let r = certify_moments(&z, &Quadrature::default());
        assert_eq!(r.mean, 0.0);
        assert_relative_eq!(r.covariance, 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn node_dimension_mismatch() {
        let err = PiecewiseLinearNodes::new(vec![Vector::zeros(2), Vector::zeros(3)]).unwrap_err();
        assert!(matches!(err, SignalError::DimensionMismatch { index: 1, .. }));
        assert_eq!(
            PiecewiseLinearNodes::new(vec![Vector::zeros(2)]).unwrap_err(),
            SignalError::TooFewNodes(1)
        );
    }

    #[test]
    fn whitening_a_white_signal_is_identity() {
        let v = sinusoidal_upe(2).unwrap();
        let w = whiten(&v, &Quadrature::default()).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!((w.eval(t).unwrap() - v.eval(t).unwrap()).norm() < 1e-6);
        }
    }

    #[test]
    fn whitening_constant_fails() {
        let c = Vector::from_vec(vec![0.3, 0.7, -1.0]);
        let raw = UpeSignal::custom(3, move |_| c.clone(), vec![]).unwrap();
        assert!(matches!(
            whiten(&raw, &Quadrature::default()),
            Err(SignalError::NotPersistentlyExciting { .. })
        ));
    }

    #[test]
    fn whitened_example_certifies_tightly() {
        let w = example_signal(true);
        let r = certify_moments(&w, &Quadrature::default());
        assert!(r.mean <= 1e-9 && r.covariance <= 1e-9, "{r:?}");
        // independent check with a fine plain midpoint rule
        let (mean, second) = fine_midpoint(&w, 60_000);
        assert!(mean.norm() < 1e-6);
        assert!((second - Matrix::identity(3, 3)).norm() < 1e-6);
    }

    #[test]
    fn whitening_custom_signal_uses_affine_wrapper() {
        let raw = UpeSignal::custom(
            2,
            |t| Vector::from_vec(vec![t, (3.0 * t).cos() + 0.2]),
            vec![],
        )
        .unwrap();
        let w = whiten(&raw, &Quadrature::default()).unwrap();
        let r = certify_moments(&w, &Quadrature::simpson(8000).unwrap());
        assert!(r.max() < 1e-9);
        let sampled = (0..=1000)
            .map(|i| w.eval(i as f64 / 1000.0).unwrap().norm())
            .fold(0.0, f64::max);
        assert!(sampled <= w.sup_norm() + 1e-12);
    }

    #[test]
    fn simpson_nodes_sum_to_one() {
        let q = Quadrature::default();
        let total: f64 = q.nodes(&[1.0 / 3.0, 2.0 / 3.0]).iter().map(|n| n.weight).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-13);
        let m = Quadrature::midpoint(100).unwrap();
        let total: f64 = m.nodes(&[]).iter().map(|n| n.weight).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-13);
        assert!(Quadrature::simpson(1).is_err());
    }
}
