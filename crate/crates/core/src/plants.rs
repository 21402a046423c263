//! Dynamic plants `εθ̇ = f(θ, u)`, `y = ψ(θ, u)` and the interconnection of a
//! plant with the resetting integrator.

use std::fmt;
use std::sync::Arc;

use crate::cost::{quadratic_cost, CostFunction, Measure};
use crate::error::PlantError;
use crate::hybrid::{timer_horizon, timer_settle, HybridSystem, StateLayout};
use crate::linalg::{Matrix, Vector};
use crate::optimizers::OptimizerScheme;
use crate::oracle::OracleConfig;

type Dynamics = Arc<dyn Fn(&Vector, &Vector) -> Vector + Send + Sync>;
type Output = Arc<dyn Fn(&Vector, &Vector) -> f64 + Send + Sync>;
type SteadyState = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

#[derive(Clone)]
pub struct Plant {
    state_dim: usize,
    input_dim: usize,
    dynamics: Dynamics,
    output: Output,
    steady_state: Option<SteadyState>,
    epsilon: f64,
}

impl fmt::Debug for Plant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plant")
            .field("state_dim", &self.state_dim)
            .field("input_dim", &self.input_dim)
            .field("epsilon", &self.epsilon)
            .field("steady_state", &self.steady_state.is_some())
            .finish()
    }
}

impl Plant {
    pub fn new<F, Y>(state_dim: usize, input_dim: usize, epsilon: f64, f: F, psi: Y) -> Result<Self, PlantError>
    where
        F: Fn(&Vector, &Vector) -> Vector + Send + Sync + 'static,
        Y: Fn(&Vector, &Vector) -> f64 + Send + Sync + 'static,
    {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(PlantError::InvalidEpsilon(epsilon));
        }
        Ok(Plant {
            state_dim,
            input_dim,
            dynamics: Arc::new(f),
            output: Arc::new(psi),
            steady_state: None,
            epsilon,
        })
    }

    /// Declare the quasi-steady-state map `χ` with `f(χ(u), u) = 0`.
    pub fn with_steady_state<C>(mut self, chi: C) -> Self
    where
        C: Fn(&Vector) -> Vector + Send + Sync + 'static,
    {
        self.steady_state = Some(Arc::new(chi));
        self
    }

    /// `f = u − θ`, `ψ = ½(θ−u*)ᵀQ(θ−u*) − 20` with the example quadratic.
    pub fn example3(epsilon: f64) -> Result<Self, PlantError> {
        let psi = crate::cost::example_quadratic();
        Plant::new(3, 3, epsilon, |theta, u| u - theta, move |theta, _| psi.value(theta))
            .map(|p| p.with_steady_state(|u| u.clone()))
    }

    /// `εθ̇ = Aθ + Bu` with Hurwitz `A`, measured through `ψ(θ) = ½(θ−c)ᵀQ(θ−c) + offset`.
    pub fn linear(a: Matrix, b: Matrix, psi: CostFunction, epsilon: f64) -> Result<Self, PlantError> {
        let l = a.nrows();
        if a.ncols() != l || b.nrows() != l || psi.dim() != l {
            return Err(PlantError::DimensionMismatch(format!(
                "A is {}x{}, B is {}x{}, psi takes {}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                psi.dim()
            )));
        }
        let max_re = a
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        if max_re >= 0.0 {
            return Err(PlantError::NotHurwitz(max_re));
        }
        let lu = a.clone().lu();
        let gain = -lu.solve(&b).ok_or(PlantError::NotHurwitz(max_re))?;
        let n = b.ncols();
        Plant::new(l, n, epsilon, move |theta, u| &a * theta + &b * u, move |theta, _| psi.value(theta))
            .map(|p| p.with_steady_state(move |u| &gain * u))
    }

    /// `f = u − θ` with an output that ignores θ: the static cost seen through a plant wrapper.
    pub fn memoryless(cost: CostFunction, epsilon: f64) -> Result<Self, PlantError> {
        let n = cost.dim();
        Plant::new(n, n, epsilon, |theta, u| u - theta, move |_, u| cost.value(u))
            .map(|p| p.with_steady_state(|u| u.clone()))
    }

    /// Linear plant with quadratic output given a Hessian, center and offset.
    pub fn linear_quadratic(
        a: Matrix,
        b: Matrix,
        q: Matrix,
        center: Vector,
        offset: f64,
        epsilon: f64,
    ) -> Result<Self, PlantError> {
        let psi = quadratic_cost(q, center, offset)?;
        Self::linear(a, b, psi, epsilon)
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self, PlantError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(PlantError::InvalidEpsilon(epsilon));
        }
        let mut p = self.clone();
        p.epsilon = epsilon;
        Ok(p)
    }

    pub fn f(&self, theta: &Vector, u: &Vector) -> Vector {
        (self.dynamics)(theta, u)
    }

    pub fn psi(&self, theta: &Vector, u: &Vector) -> f64 {
        (self.output)(theta, u)
    }

    pub fn chi(&self, u: &Vector) -> Option<Vector> {
        self.steady_state.as_ref().map(|c| c(u))
    }

    /// Largest `‖f(χ(u),u)‖ / (1+‖u‖)` over the given inputs.
    pub fn steady_state_residual(&self, inputs: &[Vector]) -> Option<f64> {
        let chi = self.steady_state.as_ref()?;
        Some(
            inputs
                .iter()
                .map(|u| self.f(&chi(u), u).norm() / (1.0 + u.norm()))
                .fold(0.0, f64::max),
        )
    }
}

/// The measurement-only cost `u ↦ ψ(χ(u), u)`.
pub fn steady_state_cost(plant: &Plant) -> Result<CostFunction, PlantError> {
    let chi = plant
        .steady_state
        .clone()
        .ok_or_else(|| PlantError::DimensionMismatch("plant declares no steady-state map".into()))?;
    let psi = plant.output.clone();
    Ok(CostFunction::from_value(plant.input_dim, move |u| psi(&chi(u), u)))
}

/// Explicit integration step for the stiff flow.
pub fn plant_step_control(plant: &Plant, step: f64) -> f64 {
    step.min(plant.epsilon / 10.0)
}

/// Axis-aligned box `lo ≤ x ≤ hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSet {
    pub lo: Vector,
    pub hi: Vector,
}

impl BoxSet {
    pub fn centered(center: &Vector, half_width: f64) -> Self {
        BoxSet {
            lo: center.add_scalar(-half_width),
            hi: center.add_scalar(half_width),
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(self.hi.iter()))
            .all(|(v, (l, h))| *l <= *v && *v <= *h)
    }

    pub fn inflate(&self, margin: f64) -> Self {
        BoxSet {
            lo: self.lo.add_scalar(-margin),
            hi: self.hi.add_scalar(margin),
        }
    }

    /// `k` points per axis, corners included.
    pub fn grid(&self, k: usize) -> Vec<Vector> {
        let d = self.lo.len();
        let k = k.max(2);
        let total = k.pow(d as u32);
        (0..total)
            .map(|mut idx| {
                Vector::from_fn(d, |i, _| {
                    let s = (idx % k) as f64 / (k - 1) as f64;
                    idx /= k;
                    self.lo[i] + s * (self.hi[i] - self.lo[i])
                })
            })
            .collect()
    }

    fn bounding(points: &[Vector]) -> Self {
        let d = points[0].len();
        let mut lo = Vector::from_element(d, f64::INFINITY);
        let mut hi = Vector::from_element(d, f64::NEG_INFINITY);
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        BoxSet { lo, hi }
    }
}

/// The compact restriction `K` in `(η, p)` space.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactBound {
    pub eta: BoxSet,
    pub p_half_width: f64,
}

const GRID_PER_AXIS: usize = 5;

impl CompactBound {
    /// `η` box of half-width `10·max(1, ‖η₀‖∞)` around the origin, `p` box
    /// scaled from the plant output over that box.
    pub fn default_for(eta0: &Vector, plant: &Plant, cfg: &OracleConfig) -> Self {
        let half = 10.0 * eta0.amax().max(1.0);
        let eta = BoxSet::centered(&Vector::zeros(eta0.len()), half);
        let n = plant.input_dim;
        let inputs = BoxSet {
            lo: eta.lo.rows(0, n).into_owned(),
            hi: eta.hi.rows(0, n).into_owned(),
        }
        .inflate(cfg.amplitude().abs() * cfg.signal().sup_norm());
        let peak = inputs
            .grid(GRID_PER_AXIS)
            .iter()
            .filter_map(|u| plant.chi(u).map(|th| plant.psi(&th, u).abs()))
            .fold(1.0, f64::max);
        CompactBound {
            eta,
            p_half_width: 10.0 * cfg.signal().sup_norm() * peak,
        }
    }
}

/// `Θ`: a box around `χ` evaluated on a grid of `K_U`, inflated by `a·M_v`.
pub fn plant_state_box(plant: &Plant, u_box: &BoxSet, cfg: &OracleConfig) -> Result<BoxSet, PlantError> {
    let margin = cfg.amplitude().abs() * cfg.signal().sup_norm();
    let inputs = u_box.inflate(margin).grid(GRID_PER_AXIS);
    let states: Vec<Vector> = inputs
        .iter()
        .map(|u| plant.chi(u))
        .collect::<Option<_>>()
        .ok_or_else(|| PlantError::DimensionMismatch("plant declares no steady-state map".into()))?;
    Ok(BoxSet::bounding(&states).inflate(margin))
}

/// `ξ = (η, p, τ, θ)` with `F_ε = (0, v(τ)·y, 1, ε⁻¹f(θ, h(η)+a·v(τ)))` and
/// `G = (g(η, a⁻¹p), 0, 0, θ)`, restricted to `K × [0,1] × Θ`.
#[derive(Clone)]
pub struct InterconnectedSystem {
    plant: Plant,
    scheme: OptimizerScheme,
    cfg: OracleConfig,
    layout: StateLayout,
    bound: CompactBound,
    theta_box: BoxSet,
}

impl fmt::Debug for InterconnectedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InterconnectedSystem")
            .field("plant", &self.plant)
            .field("scheme", &self.scheme)
            .field("bound", &self.bound)
            .field("theta_box", &self.theta_box)
            .finish()
    }
}

pub fn build_interconnected(
    plant: Plant,
    scheme: OptimizerScheme,
    cfg: OracleConfig,
    bound: CompactBound,
) -> Result<InterconnectedSystem, PlantError> {
    let n = cfg.dim();
    if plant.input_dim != n {
        return Err(PlantError::DimensionMismatch(format!(
            "plant takes {} inputs, signal has dimension {n}",
            plant.input_dim
        )));
    }
    scheme.check(n).map_err(PlantError::DimensionMismatch)?;
    let layout = StateLayout {
        n,
        m: scheme.aux_dim(n),
        plant: plant.state_dim,
    };
    if bound.eta.lo.len() != layout.eta_len() {
        return Err(PlantError::DimensionMismatch(format!(
            "compact bound has {} coordinates, eta has {}",
            bound.eta.lo.len(),
            layout.eta_len()
        )));
    }
    let u_box = BoxSet {
        lo: bound.eta.lo.rows(0, n).into_owned(),
        hi: bound.eta.hi.rows(0, n).into_owned(),
    };
    let theta_box = plant_state_box(&plant, &u_box, &cfg)?;
    Ok(InterconnectedSystem {
        plant,
        scheme,
        cfg,
        layout,
        bound,
        theta_box,
    })
}

impl InterconnectedSystem {
    pub fn state_layout(&self) -> StateLayout {
        self.layout
    }

    pub fn plant(&self) -> &Plant {
        &self.plant
    }

    pub fn scheme(&self) -> &OptimizerScheme {
        &self.scheme
    }

    pub fn oracle(&self) -> &OracleConfig {
        &self.cfg
    }

    pub fn bound(&self) -> &CompactBound {
        &self.bound
    }

    pub fn theta_box(&self) -> &BoxSet {
        &self.theta_box
    }

    pub fn initial_state(&self, u0: &Vector, theta0: &Vector) -> Vector {
        let eta = self.scheme.initial_eta(u0);
        self.layout
            .assemble(&eta, &Vector::zeros(self.layout.n), 0.0, Some(theta0))
    }

    fn in_restriction(&self, x: &Vector) -> bool {
        let l = self.layout;
        self.bound.eta.contains(&l.eta(x))
            && l.p(x).amax() <= self.bound.p_half_width
            && self.theta_box.contains(&l.theta(x))
    }

    fn dithered_input(&self, x: &Vector) -> Vector {
        let l = self.layout;
        let v = self.cfg.signal().value(l.tau(x).clamp(0.0, 1.0));
        l.u(x) + v * self.cfg.amplitude()
    }
}

impl HybridSystem for InterconnectedSystem {
    fn state_dim(&self) -> usize {
        self.layout.total()
    }

    fn in_flow_set(&self, x: &Vector) -> bool {
        (0.0..=1.0).contains(&self.layout.tau(x)) && self.in_restriction(x)
    }

    fn in_jump_set(&self, x: &Vector) -> bool {
        self.layout.tau(x) == 1.0 && self.in_restriction(x)
    }

    fn flow(&self, x: &Vector) -> Vector {
        let l = self.layout;
        let v = self.cfg.signal().value(l.tau(x).clamp(0.0, 1.0));
        let input = l.u(x) + &v * self.cfg.amplitude();
        let theta = l.theta(x);
        let y = self.plant.psi(&theta, &input);
        let mut dx = Vector::zeros(l.total());
        dx.rows_mut(l.p_start(), l.n).copy_from(&(v * y));
        dx[l.tau_index()] = 1.0;
        let dtheta = self.plant.f(&theta, &input) / self.plant.epsilon;
        dx.rows_mut(l.theta_start(), l.plant).copy_from(&dtheta);
        dx
    }

    fn jump(&self, x: &Vector) -> Vector {
        let l = self.layout;
        let estimate = l.p(x) / self.cfg.amplitude();
        let eta = self.scheme.update(&l.eta(x), &estimate);
        l.assemble(&eta, &Vector::zeros(l.n), 0.0, Some(&l.theta(x)))
    }

    fn flow_horizon(&self, x: &Vector) -> Option<f64> {
        Some(timer_horizon(self.cfg.signal().breakpoints(), self.layout.tau(x)))
    }

    fn settle(&self, mut x: Vector) -> Vector {
        let i = self.layout.tau_index();
        x[i] = timer_settle(self.cfg.signal().breakpoints(), x[i]);
        x
    }

    fn output(&self, x: &Vector) -> Option<f64> {
        Some(self.plant.psi(&self.layout.theta(x), &self.dithered_input(x)))
    }

    fn layout(&self) -> Option<StateLayout> {
        Some(self.layout)
    }
}

/// Adapter so a plant's steady-state cost can be handed to anything that takes a [`Measure`].
pub fn steady_state_measure(plant: &Plant) -> Result<Arc<dyn Measure>, PlantError> {
    Ok(Arc::new(steady_state_cost(plant)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{example_quadratic, ConvexFeasibleSet};
    use crate::hybrid::{build_prli, solve, SolveHorizon};
    use crate::optimizers::pgd_scheme;
    use crate::signals::example_signal;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn v(xs: &[f64]) -> Vector {
        Vector::from_vec(xs.to_vec())
    }

    fn cfg() -> OracleConfig {
        OracleConfig::with_signal(0.1, example_signal(true)).unwrap()
    }

    #[test]
    fn example3_steady_state_cost_is_the_quadratic() {
        let plant = Plant::example3(0.01).unwrap();
        let phi = steady_state_cost(&plant).unwrap();
        assert!(!phi.has_gradient());
        let q = example_quadratic();
        for u in [v(&[0.0, 0.0, 0.0]), v(&[1.0, -2.0, 3.5]), v(&[-7.0, 4.0, 0.1])] {
            assert_eq!(phi.value(&u), q.value(&u));
        }
    }

    #[test]
    fn identity_plant_with_norm_output() {
        let plant = Plant::new(2, 2, 1.0, |th, u| u - th, |_, u| u.norm_squared())
            .unwrap()
            .with_steady_state(|u| u.clone());
        let phi = steady_state_cost(&plant).unwrap();
        assert_eq!(phi.value(&v(&[3.0, 4.0])), 25.0);
    }

    #[test]
    fn linear_plant_steady_state() {
        let a = Matrix::from_row_slice(2, 2, &[-2.0, 1.0, 0.0, -3.0]);
        let b = Matrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let plant =
            Plant::linear_quadratic(a.clone(), b.clone(), Matrix::identity(2, 2), Vector::zeros(2), 0.0, 0.1)
                .unwrap();
        let inputs: Vec<Vector> = (-5..=5).map(|k| v(&[k as f64 * 0.7])).collect();
        assert!(plant.steady_state_residual(&inputs).unwrap() <= 1e-9);
        // θ = −A⁻¹B u by hand
        let th = plant.chi(&v(&[1.0])).unwrap();
        assert!((th - v(&[5.0 / 6.0, 2.0 / 3.0])).norm() < 1e-12);
    }

    #[test]
    fn non_hurwitz_rejected() {
        let a = Matrix::from_row_slice(1, 1, &[0.5]);
        let b = Matrix::from_row_slice(1, 1, &[1.0]);
        let r = Plant::linear_quadratic(a, b, Matrix::identity(1, 1), Vector::zeros(1), 0.0, 0.1);
        assert!(matches!(r, Err(PlantError::NotHurwitz(_))));
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert_eq!(Plant::example3(0.0).unwrap_err(), PlantError::InvalidEpsilon(0.0));
        assert!(Plant::example3(-1.0).is_err());
    }

    #[test]
    fn step_control() {
        let p = Plant::example3(0.01).unwrap();
        assert_eq!(plant_step_control(&p, 1e-3), 1e-3);
        let p = Plant::example3(1e-4).unwrap();
        assert!((plant_step_control(&p, 1e-3) - 1e-5).abs() < 1e-20);
        assert_eq!(plant_step_control(&p, 1e-6), 1e-6);
    }

    fn example3_system(eps: f64) -> InterconnectedSystem {
        let plant = Plant::example3(eps).unwrap();
        let scheme = pgd_scheme(0.5, ConvexFeasibleSet::example_ball());
        let bound = CompactBound::default_for(&Vector::zeros(3), &plant, &cfg());
        build_interconnected(plant, scheme, cfg(), bound).unwrap()
    }

    #[test]
    fn theta_is_unchanged_across_jumps() {
        let sys = example3_system(0.01);
        let l = sys.state_layout();
        let x = l.assemble(&v(&[0.5, 0.5, 0.5]), &v(&[0.1, 0.2, 0.3]), 1.0, Some(&v(&[1.0, -2.0, 3.0])));
        assert!(sys.in_jump_set(&x));
        let y = sys.jump(&x);
        assert_eq!(l.theta(&y), v(&[1.0, -2.0, 3.0]));
        assert_eq!(l.tau(&y), 0.0);
        assert_eq!(l.p(&y), Vector::zeros(3));
    }

    #[test]
    fn stable_over_one_flow_phase() {
        let sys = example3_system(0.01);
        let x0 = sys.initial_state(&Vector::zeros(3), &Vector::zeros(3));
        let step = plant_step_control(sys.plant(), 1e-3);
        let arc = solve(&sys, &x0, SolveHorizon::jumps(1), step).unwrap();
        assert_eq!(arc.jumps(), 1);
        let l = sys.state_layout();
        for s in &arc.samples {
            assert!(l.theta(&s.x).amax() < 1.0);
        }
    }

    #[test]
    fn settled_plant_output_tracks_static_cost() {
        let sys = example3_system(0.01);
        let u0 = v(&[0.5, -0.5, 1.0]);
        let a = sys.oracle().amplitude();
        let theta0 = &u0 + sys.oracle().signal().value(0.0) * a;
        let x0 = sys.initial_state(&u0, &theta0);
        let arc = solve(&sys, &x0, SolveHorizon::jumps(1), 1e-3).unwrap();
        let q = example_quadratic();
        let mut worst: f64 = 0.0;
        for s in arc.samples.iter().filter(|s| s.j == 0) {
            let tau = sys.state_layout().tau(&s.x);
            let probe = &u0 + sys.oracle().signal().value(tau) * a;
            worst = worst.max((s.output.unwrap() - q.value(&probe)).abs());
        }
        // lag of a first-order plant driven at rate a·|v̇|, times |∇φ| along the probe
        assert!(worst < 0.25, "{worst}");
        assert!(worst > 0.0);
    }

    #[test]
    fn leaving_the_compact_bound_escapes() {
        let plant = Plant::example3(0.01).unwrap();
        let scheme = pgd_scheme(0.5, ConvexFeasibleSet::example_ball());
        let mut bound = CompactBound::default_for(&Vector::zeros(3), &plant, &cfg());
        bound.p_half_width = 1e-3;
        let sys = build_interconnected(plant, scheme, cfg(), bound).unwrap();
        let x0 = sys.initial_state(&Vector::zeros(3), &Vector::zeros(3));
        let err = solve(&sys, &x0, SolveHorizon::jumps(3), 1e-3).unwrap_err();
        assert!(matches!(err, crate::error::HybridError::SolverEscape { j: 0, .. }));
    }

    #[test]
    fn steady_state_map_only_used_at_construction() {
        let calls = Arc::new(AtomicUsize::new(0));
        let counter = calls.clone();
        let psi = example_quadratic();
        let plant = Plant::new(3, 3, 0.01, |th, u| u - th, move |th, _| psi.value(th))
            .unwrap()
            .with_steady_state(move |u| {
                counter.fetch_add(1, Ordering::SeqCst);
                u.clone()
            });
        let scheme = pgd_scheme(0.5, ConvexFeasibleSet::example_ball());
        let bound = CompactBound::default_for(&Vector::zeros(3), &plant, &cfg());
        let sys = build_interconnected(plant, scheme, cfg(), bound).unwrap();
        let before = calls.load(Ordering::SeqCst);
        let x0 = sys.initial_state(&Vector::zeros(3), &Vector::zeros(3));
        solve(&sys, &x0, SolveHorizon::jumps(2), 1e-3).unwrap();
        assert_eq!(calls.load(Ordering::SeqCst), before);
    }

    #[test]
    fn memoryless_stub_reproduces_static_arc() {
        let cost = example_quadratic();
        let plant = Plant::memoryless(cost.clone(), 0.01).unwrap();
        let scheme = pgd_scheme(0.5, ConvexFeasibleSet::example_ball());
        let bound = CompactBound::default_for(&Vector::zeros(3), &plant, &cfg());
        let sys = build_interconnected(plant, scheme.clone(), cfg(), bound).unwrap();
        let hybrid = solve(&sys, &sys.initial_state(&Vector::zeros(3), &Vector::zeros(3)), SolveHorizon::jumps(5), 1e-3)
            .unwrap();
        let stat = build_prli(Arc::new(cost), scheme, cfg()).unwrap();
        let reference = solve(&stat, &stat.initial_state(&Vector::zeros(3)), SolveHorizon::jumps(5), 1e-3).unwrap();
        let l = sys.state_layout();
        let sl = stat.state_layout();
        for (a, b) in hybrid.states_at_jumps().iter().zip(reference.states_at_jumps()) {
            assert!((l.u(&a.x) - sl.u(&b.x)).norm() < 1e-12);
        }
    }

    #[test]
    fn theta_box_covers_steady_states() {
        let sys = example3_system(0.01);
        let tb = sys.theta_box();
        assert!(tb.contains(&Vector::from_element(3, 10.0)));
        assert!(tb.contains(&Vector::from_element(3, -10.0)));
        assert!(!tb.contains(&Vector::from_element(3, 20.0)));
    }

    #[test]
    fn grid_has_corners() {
        let b = BoxSet::centered(&Vector::zeros(2), 1.0);
        let g = b.grid(3);
        assert_eq!(g.len(), 9);
        assert!(g.contains(&v(&[-1.0, -1.0])));
        assert!(g.contains(&v(&[1.0, 1.0])));
        assert!(g.contains(&v(&[0.0, 0.0])));
    }
}
