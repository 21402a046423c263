//! Cost functions with regularity metadata, sampling probes, and convex feasible sets.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CostError;
use crate::linalg::{asymmetry, sym_apply, sym_eigenvalues, Matrix, Vector};

/// Scalar measurement access to a cost. This is all the oracle ever sees.
pub trait Measure: Send + Sync {
    fn dim(&self) -> usize;
    fn measure(&self, u: &Vector) -> f64;
}

/// A closure with a declared input dimension.
pub struct FnMeasure<F> {
    dim: usize,
    f: F,
}

impl<F> FnMeasure<F>
where
    F: Fn(&Vector) -> f64 + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnMeasure { dim, f }
    }
}

impl<F> Measure for FnMeasure<F>
where
    F: Fn(&Vector) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn measure(&self, u: &Vector) -> f64 {
        (self.f)(u)
    }
}

type ValueFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// Value/gradient pair plus what is known about the cost.
#[derive(Clone)]
pub struct CostFunction {
    dim: usize,
    value: ValueFn,
    gradient: Option<GradFn>,
    lipschitz: Option<f64>,
    strong_convexity: Option<f64>,
    minimizer: Option<Vector>,
    indefinite: bool,
    hessian: Option<Matrix>,
}

impl fmt::Debug for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CostFunction")
            .field("dim", &self.dim)
            .field("has_gradient", &self.gradient.is_some())
            .field("lipschitz", &self.lipschitz)
            .field("strong_convexity", &self.strong_convexity)
            .field("minimizer", &self.minimizer.as_ref().map(|m| m.as_slice().to_vec()))
            .finish()
    }
}

impl Measure for CostFunction {
    fn dim(&self) -> usize {
        self.dim
    }
    fn measure(&self, u: &Vector) -> f64 {
        (self.value)(u)
    }
}

impl CostFunction {
    /// Measurement-only cost with no metadata.
    pub fn from_value<F>(dim: usize, value: F) -> Self
    where
        F: Fn(&Vector) -> f64 + Send + Sync + 'static,
    {
        CostFunction {
            dim,
            value: Arc::new(value),
            gradient: None,
            lipschitz: None,
            strong_convexity: None,
            minimizer: None,
            indefinite: false,
            hessian: None,
        }
    }

    pub fn with_gradient<G>(mut self, gradient: G) -> Self
    where
        G: Fn(&Vector) -> Vector + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_strong_convexity(mut self, mu: f64) -> Self {
        self.strong_convexity = Some(mu);
        self
    }

    pub fn with_minimizer(mut self, u_star: Vector) -> Self {
        self.minimizer = Some(u_star);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, u: &Vector) -> f64 {
        (self.value)(u)
    }

    pub fn gradient(&self, u: &Vector) -> Result<Vector, CostError> {
        self.gradient
            .as_ref()
            .map(|g| g(u))
            .ok_or(CostError::MissingGradient)
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn strong_convexity(&self) -> Option<f64> {
        self.strong_convexity
    }

    pub fn minimizer(&self) -> Option<&Vector> {
        self.minimizer.as_ref()
    }

    /// Set when a quadratic was built from an indefinite matrix.
    pub fn indefinite_warning(&self) -> bool {
        self.indefinite
    }

    /// Hessian, when the cost is a quadratic.
    pub fn hessian(&self) -> Option<&Matrix> {
        self.hessian.as_ref()
    }

    /// `α·self + β·other`, keeping gradients when both have them.
    pub fn combine(&self, alpha: f64, other: &CostFunction, beta: f64) -> CostFunction {
        let (f1, f2) = (self.value.clone(), other.value.clone());
        let mut out = CostFunction::from_value(self.dim, move |u| alpha * f1(u) + beta * f2(u));
        if let (Some(g1), Some(g2)) = (self.gradient.clone(), other.gradient.clone()) {
            out = out.with_gradient(move |u| g1(u) * alpha + g2(u) * beta);
        }
        out
    }
}

/// `φ(u) = ½(u−u*)ᵀQ(u−u*) + offset`.
pub fn quadratic_cost(q: Matrix, u_star: Vector, offset: f64) -> Result<CostFunction, CostError> {
    let n = u_star.len();
    if q.nrows() != n || q.ncols() != n {
        return Err(CostError::Shape {
            rows: q.nrows(),
            cols: q.ncols(),
            expected: n,
        });
    }
    let asym = asymmetry(&q);
    let scale = q.amax().max(1.0);
    if asym > 1e-12 * scale {
        return Err(CostError::NotSymmetric(asym));
    }
    let q = (&q + q.transpose()) * 0.5;
    let ev = sym_eigenvalues(&q);
    let (lo, hi) = (ev[0], ev[n - 1]);
    let indefinite = lo < -1e-12 * scale;
    let lipschitz = lo.abs().max(hi.abs());

    let (qv, sv) = (q.clone(), u_star.clone());
    let (qg, sg) = (q.clone(), u_star.clone());
    let mut cost = CostFunction::from_value(n, move |u| {
        let d = u - &sv;
        0.5 * d.dot(&(&qv * &d)) + offset
    })
    .with_gradient(move |u| &qg * (u - &sg))
    .with_minimizer(u_star);
    if lipschitz > 0.0 {
        cost = cost.with_lipschitz(lipschitz);
    }
    if lo > 1e-12 * scale {
        cost = cost.with_strong_convexity(lo);
    }
    cost.indefinite = indefinite;
    cost.hessian = Some(q);
    Ok(cost)
}

/// The quadratic used by the worked examples: `u* = (1, −1, 5)`, offset −20.
pub fn example_quadratic() -> CostFunction {
    let q = Matrix::from_row_slice(3, 3, &[2.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 2.0]);
    quadratic_cost(q, example_minimizer(), -20.0).expect("symmetric")
}

pub fn example_minimizer() -> Vector {
    Vector::from_vec(vec![1.0, -1.0, 5.0])
}

/// `Q^{1/2}` of a symmetric PSD matrix.
pub fn matrix_sqrt(q: &Matrix) -> Matrix {
    sym_apply(q, |l| l.max(0.0).sqrt())
}

/// Central finite-difference gradient with step `1e-6·(1+‖u‖)`.
pub fn finite_difference_gradient(measure: &dyn Measure, u: &Vector) -> Vector {
    let h = 1e-6 * (1.0 + u.norm());
    Vector::from_fn(u.len(), |i, _| {
        let mut up = u.clone();
        let mut dn = u.clone();
        up[i] += h;
        dn[i] -= h;
        (measure.measure(&up) - measure.measure(&dn)) / (2.0 * h)
    })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ProbeCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst sample found, with the checked quantity at that sample.
    pub worst: Option<(Vec<f64>, f64)>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ProbeReport {
    pub checks: Vec<ProbeCheck>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&ProbeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub(crate) fn sample_ball(rng: &mut ChaCha8Rng, center: &Vector, radius: f64) -> Vector {
    let n = center.len();
    loop {
        let x = Vector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
        if x.norm() <= 1.0 {
            return center + x * radius;
        }
    }
}

/// Sample the sign and growth conditions of the PL-type regularity assumption
/// around the declared minimizer: positivity of `φ(u)−φ(u*)`, nonvanishing
/// gradient off `u*`, and a difference-quotient Lipschitz estimate.
pub fn probe_regularity(
    cost: &CostFunction,
    samples: usize,
    radius: f64,
) -> Result<ProbeReport, CostError> {
    let u_star = cost.minimizer().ok_or(CostError::MissingMinimizer)?.clone();
    if !cost.has_gradient() {
        return Err(CostError::MissingGradient);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let f_star = cost.value(&u_star);
    let points: Vec<Vector> = (0..samples.max(2))
        .map(|_| sample_ball(&mut rng, &u_star, radius))
        .collect();

    let mut pos_worst: Option<(Vector, f64)> = None;
    let mut grad_worst: Option<(Vector, f64)> = None;
    for u in points.iter().filter(|u| (*u - &u_star).norm() > 0.0) {
        let gap = cost.value(u) - f_star;
        if pos_worst.as_ref().is_none_or(|(_, g)| gap < *g) {
            pos_worst = Some((u.clone(), gap));
        }
        let gnorm = cost.gradient(u)?.norm();
        if grad_worst.as_ref().is_none_or(|(_, g)| gnorm < *g) {
            grad_worst = Some((u.clone(), gnorm));
        }
    }

    let mut lip_worst: Option<(Vector, f64)> = None;
    for pair in points.windows(2) {
        let du = (&pair[0] - &pair[1]).norm();
        if du == 0.0 {
            continue;
        }
        let ratio = (cost.gradient(&pair[0])? - cost.gradient(&pair[1])?).norm() / du;
        if lip_worst.as_ref().is_none_or(|(_, r)| ratio > *r) {
            lip_worst = Some((pair[0].clone(), ratio));
        }
    }

    let as_pair = |w: &Option<(Vector, f64)>| w.as_ref().map(|(u, x)| (u.as_slice().to_vec(), *x));
    let mut checks = vec![
        ProbeCheck {
            name: "positivity",
            passed: pos_worst.as_ref().is_none_or(|(_, g)| *g > 0.0),
            worst: as_pair(&pos_worst),
            note: None,
        },
        ProbeCheck {
            name: "nonvanishing_gradient",
            passed: grad_worst.as_ref().is_none_or(|(_, g)| *g > 0.0),
            worst: as_pair(&grad_worst),
            note: None,
        },
    ];
    checks.push(match cost.lipschitz() {
        Some(l) => ProbeCheck {
            name: "lipschitz",
            passed: lip_worst
                .as_ref()
                .is_none_or(|(_, r)| *r <= l * (1.0 + 1e-9)),
            worst: as_pair(&lip_worst),
            note: Some(format!("declared L = {l}")),
        },
        None => ProbeCheck {
            name: "lipschitz",
            passed: true,
            worst: as_pair(&lip_worst),
            note: Some("no Lipschitz constant declared; estimate only".into()),
        },
    });
    Ok(ProbeReport { checks })
}

/// Closed convex sets with closed-form Euclidean projections.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConvexFeasibleSet {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Halfspace { normal: Vec<f64>, offset: f64 },
}

// Points this close to the boundary count as inside, so projecting twice is a no-op.
const BOUNDARY_SLACK: f64 = 4.0 * f64::EPSILON;

impl ConvexFeasibleSet {
    pub fn ball(center: Vector, radius: f64) -> Result<Self, CostError> {
        ConvexFeasibleSet::Ball {
            center: center.as_slice().to_vec(),
            radius,
        }
        .validated()
    }

    pub fn boxed(lower: Vector, upper: Vector) -> Result<Self, CostError> {
        ConvexFeasibleSet::Box {
            lower: lower.as_slice().to_vec(),
            upper: upper.as_slice().to_vec(),
        }
        .validated()
    }

    pub fn halfspace(normal: Vector, offset: f64) -> Result<Self, CostError> {
        ConvexFeasibleSet::Halfspace {
            normal: normal.as_slice().to_vec(),
            offset,
        }
        .validated()
    }

    /// `{u : ‖u‖ ≤ 3}` in ℝ³, the feasible set of the constrained example.
    pub fn example_ball() -> Self {
        ConvexFeasibleSet::Ball {
            center: vec![0.0; 3],
            radius: 3.0,
        }
    }

    /// Check nonemptiness and well-formedness (after deserialization, say).
    pub fn validated(self) -> Result<Self, CostError> {
        let bad = |m: &str| Err(CostError::InvalidSet(m.to_string()));
        match &self {
            ConvexFeasibleSet::Ball { center, radius } => {
                if center.is_empty() {
                    return bad("empty center");
                }
                if !(*radius > 0.0) || !radius.is_finite() {
                    return bad("radius must be positive");
                }
            }
            ConvexFeasibleSet::Box { lower, upper } => {
                if lower.is_empty() || lower.len() != upper.len() {
                    return bad("lower and upper must have equal positive length");
                }
                if lower.iter().zip(upper).any(|(l, u)| !(l <= u)) {
                    return bad("lower must not exceed upper");
                }
            }
            ConvexFeasibleSet::Halfspace { normal, offset } => {
                if normal.is_empty() || normal.iter().all(|x| *x == 0.0) {
                    return bad("normal must be nonzero");
                }
                if !offset.is_finite() {
                    return bad("offset must be finite");
                }
            }
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexFeasibleSet::Ball { center, .. } => center.len(),
            ConvexFeasibleSet::Box { lower, .. } => lower.len(),
            ConvexFeasibleSet::Halfspace { normal, .. } => normal.len(),
        }
    }

    pub fn contains(&self, u: &Vector) -> bool {
        match self {
            ConvexFeasibleSet::Ball { center, radius } => {
                (u - Vector::from_row_slice(center)).norm() <= radius * (1.0 + BOUNDARY_SLACK)
            }
            ConvexFeasibleSet::Box { lower, upper } => u
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(x, (l, h))| l <= x && x <= h),
            ConvexFeasibleSet::Halfspace { normal, offset } => {
                let a = Vector::from_row_slice(normal);
                a.dot(u) - offset <= BOUNDARY_SLACK * (offset.abs() + a.norm() * u.norm())
            }
        }
    }

    /// Euclidean projection `P_U(u) = argmin_{ũ∈U} ‖u − ũ‖`.
    pub fn project(&self, u: &Vector) -> Vector {
        if self.contains(u) {
            return u.clone();
        }
        match self {
            ConvexFeasibleSet::Ball { center, radius } => {
                let c = Vector::from_row_slice(center);
                let d = u - &c;
                let norm = d.norm();
                c + d * (radius / norm)
            }
            ConvexFeasibleSet::Box { lower, upper } => {
                Vector::from_fn(u.len(), |i, _| u[i].clamp(lower[i], upper[i]))
            }
            ConvexFeasibleSet::Halfspace { normal, offset } => {
                let a = Vector::from_row_slice(normal);
                let excess = (a.dot(u) - offset).max(0.0);
                u - &a * (excess / a.norm_squared())
            }
        }
    }
}
