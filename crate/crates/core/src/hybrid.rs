//! Hybrid dynamical systems `H = (C, F, D, G)`, a fixed-step executor that
//! records solutions on hybrid time domains, and the resetting-integrator
//! system built from an optimizer and an oracle.

use std::fmt::Write as _;
use std::io::{self, BufRead};
use std::sync::Arc;

use crate::cost::Measure;
use crate::error::HybridError;
use crate::linalg::Vector;
use crate::optimizers::OptimizerScheme;
use crate::oracle::{dithered_rhs, OracleConfig};

/// Default flow step for static-cost runs.
pub const DEFAULT_STEP: f64 = 1e-3;

pub trait HybridSystem {
    fn state_dim(&self) -> usize;
    fn in_flow_set(&self, x: &Vector) -> bool;
    fn in_jump_set(&self, x: &Vector) -> bool;
    fn flow(&self, x: &Vector) -> Vector;
    fn jump(&self, x: &Vector) -> Vector;

    /// Flow time until the next point where a step must end: the jump set, or a
    /// kink of the flow map. `None` lets the solver step freely.
    fn flow_horizon(&self, _x: &Vector) -> Option<f64> {
        None
    }

    /// Applied to a state that flowed for exactly its [`flow_horizon`](Self::flow_horizon).
    fn settle(&self, x: Vector) -> Vector {
        x
    }

    /// Scalar output recorded alongside every sample.
    fn output(&self, _x: &Vector) -> Option<f64> {
        None
    }

    fn layout(&self) -> Option<StateLayout> {
        None
    }
}

/// Where `u`, `w`, `p`, `τ` and the plant state `θ` sit in a flat state vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateLayout {
    pub n: usize,
    pub m: usize,
    pub plant: usize,
}

impl StateLayout {
    pub fn eta_len(&self) -> usize {
        self.n + self.m
    }
    pub fn p_start(&self) -> usize {
        self.n + self.m
    }
    pub fn tau_index(&self) -> usize {
        2 * self.n + self.m
    }
    pub fn theta_start(&self) -> usize {
        2 * self.n + self.m + 1
    }
    pub fn total(&self) -> usize {
        self.theta_start() + self.plant
    }

    pub fn u(&self, x: &Vector) -> Vector {
        x.rows(0, self.n).into_owned()
    }
    pub fn eta(&self, x: &Vector) -> Vector {
        x.rows(0, self.eta_len()).into_owned()
    }
    pub fn p(&self, x: &Vector) -> Vector {
        x.rows(self.p_start(), self.n).into_owned()
    }
    pub fn tau(&self, x: &Vector) -> f64 {
        x[self.tau_index()]
    }
    pub fn theta(&self, x: &Vector) -> Vector {
        x.rows(self.theta_start(), self.plant).into_owned()
    }

    pub fn assemble(&self, eta: &Vector, p: &Vector, tau: f64, theta: Option<&Vector>) -> Vector {
        let mut x = Vector::zeros(self.total());
        x.rows_mut(0, self.eta_len()).copy_from(eta);
        x.rows_mut(self.p_start(), self.n).copy_from(p);
        x[self.tau_index()] = tau;
        if let Some(th) = theta {
            x.rows_mut(self.theta_start(), self.plant).copy_from(th);
        }
        x
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["t".to_string(), "j".into(), "tau".into()];
        cols.extend((1..=self.n).map(|i| format!("u_{i}")));
        cols.extend((1..=self.m).map(|i| format!("w_{i}")));
        cols.extend((1..=self.n).map(|i| format!("p_{i}")));
        cols.push("phi".into());
        cols.extend((1..=self.plant).map(|i| format!("theta_{i}")));
        cols.join(",")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcSample {
    pub t: f64,
    pub j: usize,
    pub x: Vector,
    pub output: Option<f64>,
}

/// A solution recorded on its hybrid time domain: every accepted flow step and
/// every post-jump state.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HybridArc {
    pub samples: Vec<ArcSample>,
    /// `t_j` for `j = 1, 2, …`
    pub jump_times: Vec<f64>,
    pub layout: Option<StateLayout>,
}

impl HybridArc {
    pub fn jumps(&self) -> usize {
        self.jump_times.len()
    }

    /// Index of the first sample with jump counter `j`, i.e. the state at `(t_j, j)`.
    pub fn jump_index(&self, j: usize) -> Option<usize> {
        let idx = self.samples.partition_point(|s| s.j < j);
        (idx < self.samples.len() && self.samples[idx].j == j).then_some(idx)
    }

    /// States at `(t_j, j)` for `j = 0..=jumps`.
    pub fn states_at_jumps(&self) -> Vec<&ArcSample> {
        (0..=self.jumps())
            .filter_map(|j| self.jump_index(j).map(|i| &self.samples[i]))
            .collect()
    }

    pub fn last(&self) -> Option<&ArcSample> {
        self.samples.last()
    }

    /// CSV with header `t,j,tau,u_*,w_*,p_*,phi[,theta_*]`.
    pub fn to_csv(&self) -> Result<String, HybridError> {
        let layout = self
            .layout
            .ok_or_else(|| HybridError::DimensionMismatch("arc has no state layout".into()))?;
        let mut out = layout.csv_header();
        out.push('\n');
        for s in &self.samples {
            write!(out, "{},{},{}", s.t, s.j, layout.tau(&s.x)).unwrap();
            for i in 0..layout.eta_len() {
                write!(out, ",{}", s.x[i]).unwrap();
            }
            for i in 0..layout.n {
                write!(out, ",{}", s.x[layout.p_start() + i]).unwrap();
            }
            match s.output {
                Some(y) => write!(out, ",{y}").unwrap(),
                None => out.push_str(",NaN"),
            }
            for i in 0..layout.plant {
                write!(out, ",{}", s.x[layout.theta_start() + i]).unwrap();
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// Parse an arc written by [`to_csv`](Self::to_csv).
    pub fn read_csv(reader: impl BufRead) -> io::Result<HybridArc> {
        let bad = |m: String| io::Error::new(io::ErrorKind::InvalidData, m);
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| bad("empty arc file".into()))??;
        let cols: Vec<&str> = header.split(',').collect();
        let count = |prefix: &str| cols.iter().filter(|c| c.starts_with(prefix)).count();
        let layout = StateLayout {
            n: count("u_"),
            m: count("w_"),
            plant: count("theta_"),
        };
        if layout.csv_header() != header {
            return Err(bad(format!("unexpected header: {header}")));
        }
        let mut arc = HybridArc {
            layout: Some(layout),
            ..Default::default()
        };
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols.len() {
                return Err(bad(format!("line {}: expected {} fields", lineno + 2, cols.len())));
            }
            let num = |i: usize| -> io::Result<f64> {
                fields[i]
                    .parse::<f64>()
                    .map_err(|e| bad(format!("line {}: {e}", lineno + 2)))
            };
            let t = num(0)?;
            let j: usize = fields[1]
                .parse()
                .map_err(|e| bad(format!("line {}: {e}", lineno + 2)))?;
            let mut x = Vector::zeros(layout.total());
            x[layout.tau_index()] = num(2)?;
            let mut col = 3;
            for i in 0..layout.eta_len() {
                x[i] = num(col)?;
                col += 1;
            }
            for i in 0..layout.n {
                x[layout.p_start() + i] = num(col)?;
                col += 1;
            }
            let y = num(col)?;
            col += 1;
            for i in 0..layout.plant {
                x[layout.theta_start() + i] = num(col)?;
                col += 1;
            }
            if j > arc.jump_times.len() {
                arc.jump_times.push(t);
            }
            arc.samples.push(ArcSample {
                t,
                j,
                x,
                output: (!y.is_nan()).then_some(y),
            });
        }
        Ok(arc)
    }
}

/// Stop after `max_j` jumps or at continuous time `max_t`, whichever comes first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveHorizon {
    pub max_t: f64,
    pub max_j: usize,
}

impl SolveHorizon {
    /// Horizon for a resetting-integrator run of `jumps` updates started at `τ = 0`.
    pub fn jumps(jumps: usize) -> Self {
        SolveHorizon {
            max_t: jumps as f64 + 1.0,
            max_j: jumps,
        }
    }
}

fn rk4_step<S: HybridSystem + ?Sized>(sys: &S, x: &Vector, h: f64) -> Vector {
    let k1 = sys.flow(x);
    let k2 = sys.flow(&(x + &k1 * (h / 2.0)));
    let k3 = sys.flow(&(x + &k2 * (h / 2.0)));
    let k4 = sys.flow(&(x + &k3 * h));
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Simulate `sys` from `x0` with fixed-step RK4 flows and priority to jumps.
pub fn solve<S: HybridSystem + ?Sized>(
    sys: &S,
    x0: &Vector,
    horizon: SolveHorizon,
    step: f64,
) -> Result<HybridArc, HybridError> {
    if !(step > 0.0) {
        return Err(HybridError::InvalidStep(step));
    }
    if x0.len() != sys.state_dim() {
        return Err(HybridError::DimensionMismatch(format!(
            "initial state has length {}, system expects {}",
            x0.len(),
            sys.state_dim()
        )));
    }
    if !sys.in_flow_set(x0) && !sys.in_jump_set(x0) {
        return Err(HybridError::InvalidInitialCondition);
    }
    let mut arc = HybridArc {
        layout: sys.layout(),
        ..Default::default()
    };
    let mut t = 0.0;
    let mut j = 0;
    let mut x = x0.clone();
    arc.samples.push(ArcSample {
        t,
        j,
        output: sys.output(&x),
        x: x.clone(),
    });

    while j < horizon.max_j && t < horizon.max_t {
        if sys.in_jump_set(&x) {
            x = sys.jump(&x);
            j += 1;
            arc.jump_times.push(t);
            arc.samples.push(ArcSample {
                t,
                j,
                output: sys.output(&x),
                x: x.clone(),
            });
            continue;
        }
        let mut h = step.min(horizon.max_t - t);
        let mut at_horizon = false;
        if let Some(hz) = sys.flow_horizon(&x) {
            if hz <= h {
                h = hz;
                at_horizon = true;
            }
        }
        let mut next = rk4_step(sys, &x, h);
        if at_horizon {
            next = sys.settle(next);
        }
        if !sys.in_flow_set(&next) && !sys.in_jump_set(&next) {
            return Err(HybridError::SolverEscape {
                t,
                j,
                arc: Box::new(arc),
            });
        }
        t += h;
        x = next;
        arc.samples.push(ArcSample {
            t,
            j,
            output: sys.output(&x),
            x: x.clone(),
        });
    }
    Ok(arc)
}

/// Exploration timer shared by the resetting-integrator systems: flows stop at
/// the signal's breakpoints and at `τ = 1`.
pub(crate) fn timer_horizon(breakpoints: &[f64], tau: f64) -> f64 {
    let stop = breakpoints
        .iter()
        .copied()
        .find(|b| *b > tau + 1e-12)
        .unwrap_or(1.0);
    stop - tau
}

pub(crate) fn timer_settle(breakpoints: &[f64], tau: f64) -> f64 {
    breakpoints
        .iter()
        .copied()
        .chain(std::iter::once(1.0))
        .find(|b| (b - tau).abs() < 1e-9)
        .unwrap_or(tau)
}

/// The resetting-integrator system: state `ξ = (η, p, τ)`,
/// `C = ℝ^{n+m}×ℝⁿ×[0,1]`, `D = ℝ^{n+m}×ℝⁿ×{1}`,
/// `F(ξ) = (0, Φ_a(h(η), τ), 1)`, `G(ξ) = (g(η, a⁻¹p), 0, 0)`.
#[derive(Clone)]
pub struct PrliSystem {
    measure: Arc<dyn Measure>,
    scheme: OptimizerScheme,
    cfg: OracleConfig,
    layout: StateLayout,
}

impl std::fmt::Debug for PrliSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrliSystem")
            .field("scheme", &self.scheme)
            .field("amplitude", &self.cfg.amplitude())
            .field("layout", &self.layout)
            .finish()
    }
}

pub fn build_prli(
    measure: Arc<dyn Measure>,
    scheme: OptimizerScheme,
    cfg: OracleConfig,
) -> Result<PrliSystem, HybridError> {
    let n = cfg.dim();
    if measure.dim() != n {
        return Err(HybridError::DimensionMismatch(format!(
            "cost has dimension {}, signal has {n}",
            measure.dim()
        )));
    }
    scheme.check(n).map_err(HybridError::DimensionMismatch)?;
    let layout = StateLayout {
        n,
        m: scheme.aux_dim(n),
        plant: 0,
    };
    Ok(PrliSystem {
        measure,
        scheme,
        cfg,
        layout,
    })
}

impl PrliSystem {
    pub fn scheme(&self) -> &OptimizerScheme {
        &self.scheme
    }

    pub fn oracle(&self) -> &OracleConfig {
        &self.cfg
    }

    pub fn state_layout(&self) -> StateLayout {
        self.layout
    }

    /// `ξ(0,0) = (η₀, 0, 0)`.
    pub fn initial_state(&self, u0: &Vector) -> Vector {
        let eta = self.scheme.initial_eta(u0);
        self.layout
            .assemble(&eta, &Vector::zeros(self.layout.n), 0.0, None)
    }

    /// Starting with `τ ≠ 0` or `p ≠ 0` makes the first update `O(1/a)` off.
    pub fn first_jump_hazard(&self, x0: &Vector) -> bool {
        self.layout.tau(x0) != 0.0 || self.layout.p(x0).iter().any(|v| *v != 0.0)
    }
}

impl HybridSystem for PrliSystem {
    fn state_dim(&self) -> usize {
        self.layout.total()
    }

    fn in_flow_set(&self, x: &Vector) -> bool {
        (0.0..=1.0).contains(&self.layout.tau(x))
    }

    fn in_jump_set(&self, x: &Vector) -> bool {
        self.layout.tau(x) == 1.0
    }

    fn flow(&self, x: &Vector) -> Vector {
        let l = self.layout;
        let tau = l.tau(x).clamp(0.0, 1.0);
        let v = self.cfg.signal().value(tau);
        let dp = dithered_rhs(self.measure.as_ref(), &l.u(x), self.cfg.amplitude(), &v);
        let mut dx = Vector::zeros(l.total());
        dx.rows_mut(l.p_start(), l.n).copy_from(&dp);
        dx[l.tau_index()] = 1.0;
        dx
    }

    fn jump(&self, x: &Vector) -> Vector {
        let l = self.layout;
        let estimate = l.p(x) / self.cfg.amplitude();
        let eta = self.scheme.update(&l.eta(x), &estimate);
        l.assemble(&eta, &Vector::zeros(l.n), 0.0, None)
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
        let l = self.layout;
        let v = self.cfg.signal().value(l.tau(x).clamp(0.0, 1.0));
        Some(self.measure.measure(&(l.u(x) + v * self.cfg.amplitude())))
    }

    fn layout(&self) -> Option<StateLayout> {
        Some(self.layout)
    }
}

/// Iterate the reduced discrete system `η⁺ = g(η, oracle(h(η)))`.
pub fn discrete_trajectory(
    scheme: &OptimizerScheme,
    mut oracle: impl FnMut(&Vector) -> Vector,
    eta0: &Vector,
    n: usize,
    steps: usize,
) -> Vec<Vector> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(eta0.clone());
    for _ in 0..steps {
        let eta = out.last().unwrap();
        let f = oracle(&scheme.extract(eta, n));
        out.push(scheme.update(eta, &f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{example_quadratic, CostFunction};
    use crate::optimizers::gd_scheme;
    use crate::oracle::quadrature_oracle;
    use crate::signals::{example_signal, sinusoidal_upe};
    use approx::assert_relative_eq;

    /// `τ̇ = 1` on `[0, 1]`, reset to 0 at 1.
    struct Timer;

    impl HybridSystem for Timer {
        fn state_dim(&self) -> usize {
            1
        }
        fn in_flow_set(&self, x: &Vector) -> bool {
            (0.0..=1.0).contains(&x[0])
        }
        fn in_jump_set(&self, x: &Vector) -> bool {
            x[0] == 1.0
        }
        fn flow(&self, _: &Vector) -> Vector {
            Vector::from_element(1, 1.0)
        }
        fn jump(&self, _: &Vector) -> Vector {
            Vector::zeros(1)
        }
        fn flow_horizon(&self, x: &Vector) -> Option<f64> {
            Some(1.0 - x[0])
        }
        fn settle(&self, _: Vector) -> Vector {
            Vector::from_element(1, 1.0)
        }
    }

    /// Same timer with no horizon hint; must escape by overshooting.
    struct BlindTimer;

    impl HybridSystem for BlindTimer {
        fn state_dim(&self) -> usize {
            1
        }
        fn in_flow_set(&self, x: &Vector) -> bool {
            (0.0..=1.0).contains(&x[0])
        }
        fn in_jump_set(&self, x: &Vector) -> bool {
            x[0] == 1.0
        }
        fn flow(&self, _: &Vector) -> Vector {
            Vector::from_element(1, 1.0)
        }
        fn jump(&self, _: &Vector) -> Vector {
            Vector::zeros(1)
        }
    }

    #[test]
    fn timer_jump_times() {
        let arc = solve(
            &Timer,
            &Vector::from_element(1, 0.25),
            SolveHorizon { max_t: 4.0, max_j: 10 },
            0.1,
        )
        .unwrap();
        let expected = [0.75, 1.75, 2.75, 3.75];
        assert_eq!(arc.jumps(), expected.len());
        for (t, e) in arc.jump_times.iter().zip(expected) {
            assert!((t - e).abs() < 1e-12, "{t} vs {e}");
        }
        // lexicographic (t, j) ordering, j increments by one
        for w in arc.samples.windows(2) {
            assert!(w[1].t >= w[0].t);
            assert!(w[1].j == w[0].j || w[1].j == w[0].j + 1);
        }
    }

    #[test]
    fn start_in_jump_set_jumps_first() {
        let arc = solve(&Timer, &Vector::from_element(1, 1.0), SolveHorizon { max_t: 1.5, max_j: 5 }, 0.1).unwrap();
        assert_eq!(arc.jump_times[0], 0.0);
        assert_eq!(arc.samples[1].j, 1);
    }

    #[test]
    fn invalid_initial_condition() {
        let err = solve(&Timer, &Vector::from_element(1, 1.5), SolveHorizon::jumps(3), 0.1).unwrap_err();
        assert_eq!(err, HybridError::InvalidInitialCondition);
    }

    #[test]
    fn overshoot_reports_escape() {
        let err = solve(&BlindTimer, &Vector::from_element(1, 0.05), SolveHorizon::jumps(3), 0.1).unwrap_err();
        match err {
            HybridError::SolverEscape { j, arc, .. } => {
                assert_eq!(j, 0);
                assert!(!arc.samples.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn example_gd_system(a: f64) -> PrliSystem {
        let cfg = OracleConfig::with_signal(a, example_signal(true)).unwrap();
        build_prli(Arc::new(example_quadratic()), gd_scheme(0.5), cfg).unwrap()
    }

    #[test]
    fn one_flow_phase_gives_scaled_oracle() {
        let sys = example_gd_system(0.1);
        let x0 = sys.initial_state(&Vector::from_vec(vec![0.5, 2.0, -1.0]));
        let arc = solve(&sys, &x0, SolveHorizon::jumps(1), DEFAULT_STEP).unwrap();
        let last = &arc.samples[arc.samples.len() - 2];
        let l = sys.state_layout();
        assert_eq!(l.tau(&last.x), 1.0);
        let expected =
            quadrature_oracle(&example_quadratic(), &l.u(&x0), sys.oracle()).unwrap() * 0.1;
        assert!((l.p(&last.x) - expected).norm() < 1e-9);
    }

    #[test]
    fn jump_resets_integrator_and_timer() {
        let sys = example_gd_system(0.1);
        let l = sys.state_layout();
        let x = l.assemble(&Vector::zeros(3), &Vector::from_vec(vec![1.0, 2.0, 3.0]), 1.0, None);
        let y = sys.jump(&x);
        assert_eq!(l.p(&y), Vector::zeros(3));
        assert_eq!(l.tau(&y), 0.0);
        assert_eq!(l.u(&y), Vector::from_vec(vec![-5.0, -10.0, -15.0]));
    }

    #[test]
    fn exact_gradient_jump_is_gd_step() {
        let sys = example_gd_system(0.1);
        let l = sys.state_layout();
        let c = example_quadratic();
        let u = Vector::from_vec(vec![2.0, 0.0, 1.0]);
        let p = c.gradient(&u).unwrap() * 0.1;
        let y = sys.jump(&l.assemble(&u, &p, 1.0, None));
        let gd = gd_scheme(0.5).update(&u, &c.gradient(&u).unwrap());
        assert!((l.u(&y) - gd).norm() < 1e-14);
    }

    #[test]
    fn prli_arc_matches_reduced_discrete_system() {
        let sys = example_gd_system(0.1);
        let u0 = Vector::zeros(3);
        let arc = solve(&sys, &sys.initial_state(&u0), SolveHorizon::jumps(20), DEFAULT_STEP).unwrap();
        let cost = example_quadratic();
        let discrete = discrete_trajectory(
            &gd_scheme(0.5),
            |u| quadrature_oracle(&cost, u, sys.oracle()).unwrap(),
            &u0,
            3,
            20,
        );
        let l = sys.state_layout();
        for (j, s) in arc.states_at_jumps().iter().enumerate() {
            let err = (l.eta(&s.x) - &discrete[j]).norm();
            assert!(err <= 1e-6 * (j.max(1) as f64), "jump {j}: {err}");
            if j >= 1 {
                assert_eq!(l.p(&s.x), Vector::zeros(3));
                assert_eq!(l.tau(&s.x), 0.0);
            }
        }
    }

    #[test]
    fn inter_jump_period_is_one() {
        let cfg = OracleConfig::with_signal(0.1, sinusoidal_upe(3).unwrap()).unwrap();
        let sys = build_prli(Arc::new(example_quadratic()), gd_scheme(0.5), cfg).unwrap();
        let arc = solve(&sys, &sys.initial_state(&Vector::zeros(3)), SolveHorizon::jumps(10), 3e-3).unwrap();
        assert!(arc.jump_times[0] <= 1.0 + 1e-12);
        for w in arc.jump_times.windows(2) {
            assert!((w[1] - w[0] - 1.0).abs() <= 3e-3);
        }
    }

    #[test]
    fn discrete_gd_one_step_and_zero_steps() {
        let c = example_quadratic();
        let traj = discrete_trajectory(&gd_scheme(0.5), |u| c.gradient(u).unwrap(), &Vector::zeros(3), 3, 1);
        assert_eq!(traj[1], Vector::from_vec(vec![3.5, -0.5, 5.5]));
        let traj = discrete_trajectory(&gd_scheme(0.5), |u| c.gradient(u).unwrap(), &Vector::zeros(3), 3, 0);
        assert_eq!(traj.len(), 1);
    }

    #[test]
    fn build_rejects_dimension_mismatch() {
        let cfg = OracleConfig::with_signal(0.1, sinusoidal_upe(2).unwrap()).unwrap();
        assert!(build_prli(Arc::new(example_quadratic()), gd_scheme(0.5), cfg).is_err());
    }

    #[test]
    fn hazard_flag() {
        let sys = example_gd_system(0.1);
        let l = sys.state_layout();
        assert!(!sys.first_jump_hazard(&sys.initial_state(&Vector::zeros(3))));
        let x = l.assemble(&Vector::zeros(3), &Vector::zeros(3), 0.4, None);
        assert!(sys.first_jump_hazard(&x));
    }

    #[test]
    fn csv_round_trip_and_header() {
        let sys = example_gd_system(0.1);
        let arc = solve(&sys, &sys.initial_state(&Vector::zeros(3)), SolveHorizon::jumps(2), 0.05).unwrap();
        let csv = arc.to_csv().unwrap();
        assert!(csv.starts_with("t,j,tau,u_1,u_2,u_3,p_1,p_2,p_3,phi\n"));
        let back = HybridArc::read_csv(csv.as_bytes()).unwrap();
        assert_eq!(back, arc);
    }

    #[test]
    fn measurement_only_cost_drives_the_system() {
        let c = example_quadratic();
        let blind = CostFunction::from_value(3, move |u| c.value(u));
        let cfg = OracleConfig::with_signal(0.1, example_signal(true)).unwrap();
        let sys = build_prli(Arc::new(blind), gd_scheme(0.5), cfg).unwrap();
        let arc = solve(&sys, &sys.initial_state(&Vector::zeros(3)), SolveHorizon::jumps(1), 1e-2).unwrap();
        assert_relative_eq!(arc.jump_times[0], 1.0, epsilon = 1e-9);
    }
}
