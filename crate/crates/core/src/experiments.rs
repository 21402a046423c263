//! Config-driven runs, the worked examples, `ε` sweeps and the verification suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    compare_schemes, convergence_report, integrator_bound_check, limit_set_box, max_jump_deviation,
    scale_integrator, sgpas_sweep, ConvergenceReport, IntegratorBoundReport, LimitSetBox, SchemeRank,
    SweepSetup, SweepTable,
};
use crate::config::{ExperimentConfig, EXAMPLE1_GD, EXAMPLE1_HB, EXAMPLE2_PGD, EXAMPLE3_PLANT};
use crate::cost::{example_minimizer, example_quadratic, finite_difference_gradient, ConvexFeasibleSet, Measure};
use crate::error::{HybridError, RunError, SignalError};
use crate::hybrid::{build_prli, discrete_trajectory, solve, HybridArc, SolveHorizon, DEFAULT_STEP};
use crate::linalg::Vector;
use crate::optimizers::{
    decrement_check, fixed_point, gd_scheme, iss_envelope_check, lyapunov_value, pgd_scheme, validate,
    IssConstants, IssReport, OptimizerScheme,
};
use crate::oracle::{quadrature_oracle, remainder_bound, OracleConfig};
use crate::plants::{build_interconnected, plant_step_control, steady_state_cost, CompactBound};
use crate::signals::{example_signal, sinusoidal_upe, whiten, Quadrature, UpeSignal, ANALYTIC_TOLERANCE, WHITENED_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub name: String,
    pub scheme: &'static str,
    pub epsilon: Option<f64>,
    pub step: f64,
    pub jumps_requested: usize,
    pub jumps_completed: usize,
    pub validation: IssReport,
    pub first_jump_hazard: bool,
    pub target: Vec<f64>,
    pub convergence: Option<ConvergenceReport>,
    pub integrator_bound: Option<IntegratorBoundReport>,
    pub limit_set: Option<LimitSetBox>,
    /// Largest `dist(u(t_j,j), U)` over post-jump iterates, for projected schemes.
    pub max_infeasibility: Option<f64>,
    pub escape: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub config: ExperimentConfig,
    pub arc: HybridArc,
    pub summary: RunSummary,
}

/// Fixed point of the scheme driven by the exact (or finite-difference) gradient:
/// the minimizer, or the constrained minimizer for projected descent.
pub fn scheme_target(scheme: &OptimizerScheme, measure: &dyn Measure, gradient: Option<&dyn Fn(&Vector) -> Vector>, u0: &Vector) -> Vector {
    let n = u0.len();
    match scheme {
        // momentum does not move the fixed point
        OptimizerScheme::HeavyBall { gamma, .. } => target_with(&gd_scheme(*gamma), measure, gradient, u0, n),
        _ => target_with(scheme, measure, gradient, u0, n),
    }
}

fn target_with(
    scheme: &OptimizerScheme,
    measure: &dyn Measure,
    gradient: Option<&dyn Fn(&Vector) -> Vector>,
    u0: &Vector,
    n: usize,
) -> Vector {
    let eta = match gradient {
        Some(g) => fixed_point(scheme, g, u0, n, 1e-14, 100_000),
        None => fixed_point(scheme, |u| finite_difference_gradient(measure, u), u0, n, 1e-12, 100_000),
    };
    scheme.extract(&eta, n)
}

fn infeasibility(set: &ConvexFeasibleSet, u: &Vector) -> f64 {
    (u - set.project(u)).norm()
}

/// Run one configuration without touching the filesystem. A solver escape is
/// reported in the summary with the partial arc.
pub fn simulate(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let oracle = cfg.build_oracle()?;
    let (l, mu) = cfg.regularity()?;
    let mut validation = validate(&cfg.scheme, l, mu).map_err(|e| crate::error::ConfigError::invalid("scheme", e))?;
    if cfg.strict {
        validation = validation.strict().map_err(|e| RunError::Strict(e.to_string()))?;
    }
    let u0 = Vector::from_vec(cfg.initial_u.clone());
    let jumps = cfg.jump_budget();
    let horizon = SolveHorizon::jumps(jumps);

    let (result, measure, step, epsilon, hazard): (Result<HybridArc, HybridError>, Arc<dyn Measure>, f64, Option<f64>, bool) =
        if let Some(cost) = cfg.build_cost()? {
            let cost = Arc::new(cost);
            let sys = build_prli(cost.clone(), cfg.scheme.clone(), oracle.clone())?;
            let x0 = sys.initial_state(&u0);
            (solve(&sys, &x0, horizon, cfg.step), cost, cfg.step, None, sys.first_jump_hazard(&x0))
        } else {
            let plant = cfg.build_plant()?.expect("validated");
            let phi: Arc<dyn Measure> = Arc::new(steady_state_cost(&plant)?);
            let eta0 = cfg.scheme.initial_eta(&u0);
            let bound = CompactBound::default_for(&eta0, &plant, &oracle);
            let step = plant_step_control(&plant, cfg.step);
            let eps = plant.epsilon();
            let sys = build_interconnected(plant, cfg.scheme.clone(), oracle.clone(), bound)?;
            let theta0 = cfg
                .initial_theta
                .clone()
                .map(Vector::from_vec)
                .unwrap_or_else(|| Vector::zeros(sys.plant().state_dim()));
            if theta0.len() != sys.plant().state_dim() {
                return Err(crate::error::ConfigError::invalid("initial_theta", "length does not match the plant state").into());
            }
            let x0 = sys.initial_state(&u0, &theta0);
            (solve(&sys, &x0, horizon, step), phi, step, Some(eps), false)
        };

    let (arc, escape) = match result {
        Ok(arc) => (arc, None),
        Err(HybridError::SolverEscape { t, j, arc }) => (*arc, Some(format!("left the flow and jump sets at t = {t}, j = {j}"))),
        Err(e) => return Err(e.into()),
    };

    let exact = cfg.build_cost()?;
    let grad = exact.as_ref().filter(|c| c.has_gradient()).map(|c| {
        let c = c.clone();
        move |u: &Vector| c.gradient(u).expect("declared")
    });
    let target = match (&exact, &cfg.scheme) {
        (Some(c), OptimizerScheme::Gd { .. } | OptimizerScheme::HeavyBall { .. }) if c.minimizer().is_some() => {
            c.minimizer().unwrap().clone()
        }
        _ => scheme_target(&cfg.scheme, measure.as_ref(), grad.as_ref().map(|g| g as &dyn Fn(&Vector) -> Vector), &u0),
    };

    let lyap_cost = exact.clone().or_else(|| {
        cfg.build_plant().ok().flatten().and_then(|p| steady_state_cost(&p).ok())
    });
    let lyap = |eta: &Vector| -> f64 {
        match &lyap_cost {
            Some(c) if !matches!(cfg.scheme, OptimizerScheme::Pgd { .. }) => {
                lyapunov_with_target(&cfg.scheme, c, eta, &target)
            }
            _ => (cfg.scheme.extract(eta, u0.len()) - &target).norm(),
        }
    };
    let convergence = (arc.jumps() >= crate::analysis::MIN_JUMPS)
        .then(|| convergence_report(&arc, &target, Some(&lyap)))
        .transpose()?;
    let integrator_bound = match &exact {
        Some(c) if escape.is_none() => Some(integrator_bound_check(&arc, c, &oracle)?),
        _ => None,
    };
    let limit_set = match &exact {
        Some(c) if arc.jumps() >= crate::analysis::MIN_JUMPS => Some(limit_set_box(&arc, c, &oracle)?),
        _ => None,
    };
    let max_infeasibility = match &cfg.scheme {
        OptimizerScheme::Pgd { set, .. } => {
            let lay = arc.layout.expect("layout");
            Some(
                (1..=arc.jumps())
                    .filter_map(|j| arc.jump_index(j))
                    .map(|i| infeasibility(set, &lay.u(&arc.samples[i].x)))
                    .fold(0.0, f64::max),
            )
        }
        _ => None,
    };

    let summary = RunSummary {
        name: cfg.name.clone(),
        scheme: cfg.scheme.label(),
        epsilon,
        step,
        jumps_requested: jumps,
        jumps_completed: arc.jumps(),
        validation,
        first_jump_hazard: hazard,
        target: target.iter().copied().collect(),
        convergence,
        integrator_bound,
        limit_set,
        max_infeasibility,
        escape,
    };
    Ok(RunOutcome {
        config: cfg.clone(),
        arc,
        summary,
    })
}

/// `V` of the scheme with the cost's minimum value taken at `target`.
fn lyapunov_with_target(scheme: &OptimizerScheme, cost: &crate::cost::CostFunction, eta: &Vector, target: &Vector) -> f64 {
    match cost.minimizer() {
        Some(_) => lyapunov_value(scheme, cost, eta).unwrap_or(f64::NAN),
        None => cost.value(&scheme.extract(eta, target.len())) - cost.value(target),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, contents).map_err(io_err(path))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Write `<output>.csv` and `<output>.summary.json`.
pub fn write_outcome(outcome: &RunOutcome) -> Result<(PathBuf, PathBuf), RunError> {
    let csv = outcome.config.csv_path();
    let summary = outcome.config.summary_path();
    write_file(&csv, &outcome.arc.to_csv()?)?;
    write_file(&summary, &to_json(&outcome.summary))?;
    Ok((csv, summary))
}

/// Simulate, write artifacts, and turn an escape into an error after writing.
pub fn run_config(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let outcome = simulate(cfg)?;
    write_outcome(&outcome)?;
    if outcome.summary.escape.is_some() {
        let last = outcome.arc.last().expect("nonempty arc");
        return Err(RunError::Escape { t: last.t, j: last.j });
    }
    Ok(outcome)
}

pub fn example_configs(which: u8) -> Option<Vec<ExperimentConfig>> {
    let pick = |t: &str, n: &str| ExperimentConfig::builtin(t, n);
    match which {
        1 => Some(vec![pick(EXAMPLE1_GD, "example1_gd.json"), pick(EXAMPLE1_HB, "example1_hb.json")]),
        2 => Some(vec![pick(EXAMPLE2_PGD, "example2_pgd.json")]),
        3 => Some(vec![pick(EXAMPLE3_PLANT, "example3_plant.json")]),
        _ => None,
    }
}

fn relocate(cfg: ExperimentConfig, out_dir: Option<&Path>) -> ExperimentConfig {
    match out_dir {
        Some(dir) => {
            let file = cfg.output.file_name().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(&cfg.name));
            cfg.with_output(dir.join(file))
        }
        None => cfg,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub example: u8,
    pub runs: Vec<RunSummary>,
    /// Example 1: schemes ordered by jumps to reach distance 0.5.
    pub ranking: Option<Vec<SchemeRank>>,
    /// Example 3: max post-jump distance from the static projected-descent arc.
    pub deviation_from_static: Option<f64>,
}

/// Run a worked example and write its artifacts (plus `exampleN.report.json`).
pub fn run_example(which: u8, out_dir: Option<&Path>) -> Result<(ExampleReport, Vec<RunOutcome>), RunError> {
    let configs = example_configs(which)
        .ok_or_else(|| crate::error::ConfigError::invalid("example", format!("no example {which}; choose 1, 2 or 3")))?;
    let mut outcomes = Vec::new();
    for cfg in configs {
        outcomes.push(run_config(&relocate(cfg, out_dir))?);
    }
    let mut report = ExampleReport {
        example: which,
        runs: outcomes.iter().map(|o| o.summary.clone()).collect(),
        ranking: None,
        deviation_from_static: None,
    };
    match which {
        1 => {
            let labeled: Vec<(String, &HybridArc)> =
                outcomes.iter().map(|o| (o.summary.scheme.to_string(), &o.arc)).collect();
            report.ranking = Some(compare_schemes(&labeled, &example_minimizer(), 0.5)?);
        }
        3 => {
            let reference = simulate(&ExperimentConfig::builtin(EXAMPLE2_PGD, "example2_pgd.json"))?;
            let jumps = outcomes[0].summary.jumps_requested;
            report.deviation_from_static = Some(max_jump_deviation(&outcomes[0].arc, &reference.arc, jumps)?);
        }
        _ => {}
    }
    let dir = outcomes[0]
        .config
        .output
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    write_file(&dir.join(format!("example{which}.report.json")), &to_json(&report))?;
    Ok((report, outcomes))
}

/// Sweep `ε` for a plant configuration; writes `<output>.sweep.json`.
pub fn run_sweep(cfg: &ExperimentConfig, epsilons: &[f64]) -> Result<SweepTable, RunError> {
    let plant = cfg
        .build_plant()?
        .ok_or_else(|| crate::error::ConfigError::invalid("plant", "a sweep needs a plant configuration"))?;
    if let Some(bad) = epsilons.iter().find(|e| !(**e > 0.0)) {
        return Err(crate::error::ConfigError::invalid("epsilon", format!("must be positive, got {bad}")).into());
    }
    let setup = SweepSetup {
        plant,
        scheme: cfg.scheme.clone(),
        oracle: cfg.build_oracle()?,
        u0: Vector::from_vec(cfg.initial_u.clone()),
        theta0: cfg
            .initial_theta
            .clone()
            .map(Vector::from_vec)
            .unwrap_or_else(|| Vector::zeros(cfg.dim())),
        jumps: cfg.jump_budget(),
        step: cfg.step,
    };
    let table = match sgpas_sweep(&setup, epsilons) {
        Ok(t) => t,
        Err(crate::error::AnalysisError::TooFewEpsilons(k)) => {
            return Err(crate::error::ConfigError::invalid("epsilon", format!("need at least 2 values, got {k}")).into())
        }
        Err(e) => return Err(e.into()),
    };
    let mut path = cfg.output.as_os_str().to_owned();
    path.push(".sweep.json");
    write_file(Path::new(&path), &to_json(&table))?;
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Multiply every recorded integrator state by 10 before the integrator-bound check.
    IntegratorX10,
}

impl std::str::FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "integrator_x10" | "p_x10" => Ok(Fault::IntegratorX10),
            other => Err(format!("unknown fault `{other}`; available: integrator_x10")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VerifySignal {
    #[default]
    Example,
    Sinusoidal,
}

impl std::str::FromStr for VerifySignal {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "example" | "piecewise_linear" => Ok(VerifySignal::Example),
            "sinusoidal" => Ok(VerifySignal::Sinusoidal),
            other => Err(format!("unknown signal `{other}`; available: example, sinusoidal")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Treat step-size validator warnings of the example schemes as failures.
    pub strict: bool,
    pub fault: Option<Fault>,
    pub signal: VerifySignal,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            strict: false,
            fault: None,
            signal: VerifySignal::Example,
            seed: DEFAULT_SEED,
        }
    }
}

pub const DEFAULT_SEED: u64 = 22;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<PropertyCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{} {:<22} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> PropertyCheck {
    PropertyCheck { name, passed, detail }
}

fn uniform_cube(rng: &mut ChaCha8Rng, n: usize, half: f64) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-half..=half))
}

pub fn verify_signal(choice: VerifySignal) -> UpeSignal {
    match choice {
        VerifySignal::Example => example_signal(true),
        VerifySignal::Sinusoidal => sinusoidal_upe(3).expect("n = 3"),
    }
}

/// Every sinusoidal signal up to `n = 8` and the whitened example pass their
/// tolerances; whitening a constant signal is refused.
pub fn check_upe_moments() -> PropertyCheck {
    let quad = Quadrature::default();
    let mut worst_sin: f64 = 0.0;
    let mut ok = true;
    for n in 1..=8 {
        let r = sinusoidal_upe(n).expect("n > 0").certify(&quad);
        match r {
            Ok(m) => worst_sin = worst_sin.max(m.max()),
            Err(_) => ok = false,
        }
    }
    ok &= worst_sin <= ANALYTIC_TOLERANCE;
    let white = example_signal(true).certify(&quad);
    let white_res = white.as_ref().map(|m| m.max()).unwrap_or(f64::INFINITY);
    ok &= white_res <= WHITENED_TOLERANCE;
    let constant = UpeSignal::custom(3, |_| Vector::from_element(3, 1.0), vec![]).expect("valid");
    let refused = matches!(whiten(&constant, &quad), Err(SignalError::NotPersistentlyExciting { .. }));
    ok &= refused;
    check(
        "upe_moments",
        ok,
        format!("sinusoidal n<=8 residual {worst_sin:.2e}; whitened example {white_res:.2e}; constant refused: {refused}"),
    )
}

/// `max ‖Φ̄_a(u) − ∇φ(u)‖ ≤ M_v³·L·|a|` over sampled `u ∈ [−10,10]³`.
pub fn check_oracle_remainder(signal: &UpeSignal, samples: usize, seed: u64) -> PropertyCheck {
    let cost = example_quadratic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vector> = (0..samples).map(|_| uniform_cube(&mut rng, 3, 10.0)).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.01, 0.1, 1.0] {
        let cfg = OracleConfig::with_signal(a, signal.clone()).expect("a != 0");
        let bound = remainder_bound(signal.sup_norm(), 3.0, a);
        let worst = points
            .iter()
            .map(|u| (quadrature_oracle(&cost, u, &cfg).expect("dims") - cost.gradient(u).expect("declared")).norm())
            .fold(0.0, f64::max);
        ok &= worst <= bound;
        parts.push(format!("a={a}: {worst:.3e} <= {bound:.3e}"));
    }
    check("oracle_remainder", ok, parts.join("; "))
}

/// `a⁻¹p(1)` after one flow phase equals the quadrature oracle.
pub fn check_oracle_equivalence(signal: &UpeSignal, samples: usize, seed: u64) -> PropertyCheck {
    let cost = Arc::new(example_quadratic());
    let cfg = OracleConfig::with_signal(0.1, signal.clone()).expect("a != 0");
    let sys = build_prli(cost.clone(), gd_scheme(0.5), cfg.clone()).expect("dims");
    let lay = sys.state_layout();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe9);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let u = uniform_cube(&mut rng, 3, 10.0);
        let arc = solve(&sys, &sys.initial_state(&u), SolveHorizon::jumps(1), DEFAULT_STEP).expect("no escape");
        let pre = &arc.samples[arc.samples.len() - 2];
        let flow = lay.p(&pre.x) / cfg.amplitude();
        let quad = quadrature_oracle(cost.as_ref(), &u, &cfg).expect("dims");
        worst = worst.max((flow - quad).norm());
    }
    check("oracle_equivalence", worst <= 1e-6, format!("max |p(1)/a - oracle| = {worst:.3e} over {samples} points"))
}

/// Jump spacing, resets, and the integrator bound on the three static example arcs.
pub fn static_example_arcs(signal: &UpeSignal) -> Vec<(&'static str, OptimizerScheme, HybridArc, OracleConfig)> {
    let cost = Arc::new(example_quadratic());
    let cfg = OracleConfig::with_signal(0.1, signal.clone()).expect("a != 0");
    [
        ("gd", gd_scheme(0.5)),
        ("heavy_ball", crate::optimizers::hb_scheme(0.5, 0.125)),
        ("pgd", pgd_scheme(0.5, ConvexFeasibleSet::example_ball())),
    ]
    .into_iter()
    .map(|(name, scheme)| {
        let sys = build_prli(cost.clone(), scheme.clone(), cfg.clone()).expect("dims");
        let arc = solve(&sys, &sys.initial_state(&Vector::zeros(3)), SolveHorizon::jumps(50), DEFAULT_STEP).expect("no escape");
        (name, scheme, arc, cfg.clone())
    })
    .collect()
}

/// `t_1 ≤ 1`, unit spacing between jumps, and `p = 0`, `τ = 0` right after each jump.
pub fn arc_structure_errors(arc: &HybridArc) -> Vec<String> {
    let lay = arc.layout.expect("layout");
    let mut errs = Vec::new();
    if arc.jump_times.first().is_none_or(|t| *t > 1.0 + 1e-12) {
        errs.push(format!("t_1 = {:?}", arc.jump_times.first()));
    }
    for (k, w) in arc.jump_times.windows(2).enumerate() {
        if (w[1] - w[0] - 1.0).abs() > 1e-3 {
            errs.push(format!("t_{} - t_{} = {}", k + 2, k + 1, w[1] - w[0]));
        }
    }
    for j in 1..=arc.jumps() {
        let s = &arc.samples[arc.jump_index(j).expect("present")];
        if lay.p(&s.x).iter().any(|v| *v != 0.0) || lay.tau(&s.x) != 0.0 {
            errs.push(format!("state at jump {j} not reset"));
        }
    }
    errs
}

pub fn check_hybrid_structure(arcs: &[(&'static str, OptimizerScheme, HybridArc, OracleConfig)]) -> PropertyCheck {
    let mut errs = Vec::new();
    for (name, _, arc, _) in arcs {
        errs.extend(arc_structure_errors(arc).into_iter().map(|e| format!("{name}: {e}")));
    }
    check(
        "hybrid_structure",
        errs.is_empty(),
        if errs.is_empty() { format!("{} arcs x 50 jumps", arcs.len()) } else { errs.join("; ") },
    )
}

pub fn check_integrator_bound(arcs: &[(&'static str, OptimizerScheme, HybridArc, OracleConfig)], fault: Option<Fault>) -> PropertyCheck {
    let cost = example_quadratic();
    let mut violations = 0;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (_, _, arc, cfg) in arcs {
        let arc = match fault {
            Some(Fault::IntegratorX10) => scale_integrator(arc, 10.0).expect("layout"),
            None => arc.clone(),
        };
        let r = integrator_bound_check(&arc, &cost, cfg).expect("layout");
        violations += r.violations.len();
        checked += r.checked;
        worst = worst.max(r.worst_ratio);
    }
    check(
        "integrator_bound",
        violations == 0,
        format!("{violations} violations over {checked} samples; worst |p|/bound {worst:.3}"),
    )
}

/// Post-jump `η` of the hybrid arc against the reduced discrete system.
pub fn check_hybrid_vs_discrete(arcs: &[(&'static str, OptimizerScheme, HybridArc, OracleConfig)]) -> PropertyCheck {
    let cost = example_quadratic();
    let mut worst: f64 = 0.0;
    for (_, scheme, arc, cfg) in arcs {
        let lay = arc.layout.expect("layout");
        let eta0 = scheme.initial_eta(&Vector::zeros(3));
        let discrete = discrete_trajectory(scheme, |u| quadrature_oracle(&cost, u, cfg).expect("dims"), &eta0, 3, arc.jumps());
        for (s, d) in arc.states_at_jumps().iter().zip(&discrete) {
            worst = worst.max((lay.eta(&s.x) - d).norm());
        }
    }
    check("hybrid_vs_discrete", worst <= 1e-6, format!("max post-jump |eta - eta_discrete| = {worst:.3e}"))
}

/// Exact-gradient descent satisfies `ΔV ≤ −c₂‖∇V‖²` from sampled starts.
pub fn check_decrement(starts: usize, steps: usize, seed: u64) -> PropertyCheck {
    let cost = example_quadratic();
    let scheme = gd_scheme(0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdec);
    let mut checked = 0;
    let mut violations = 0;
    for _ in 0..starts {
        let u0 = uniform_cube(&mut rng, 3, 10.0);
        let traj = discrete_trajectory(&scheme, |u| cost.gradient(u).expect("declared"), &u0, 3, steps);
        let r = decrement_check(&scheme, &cost, &traj, 0.0).expect("gd");
        checked += r.checked;
        violations += r.violations.len();
    }
    check("lyapunov_decrement", violations == 0, format!("{violations} violations over {checked} steps"))
}

/// Projected descent with injected errors `‖e‖ ≤ ē` stays inside
/// `ρᵏ‖ũ(0)−u♯‖ + γē/(1−ρ)`.
pub fn pgd_envelope_worst(sequences: usize, steps: usize, error_bound: f64, seed: u64) -> (usize, f64) {
    let cost = example_quadratic();
    let set = ConvexFeasibleSet::example_ball();
    let scheme = pgd_scheme(0.5, set.clone());
    let report = validate(&scheme, 3.0, Some(1.0)).expect("mu given");
    let IssConstants::Contraction { rho, gain } = report.constants else {
        unreachable!("projected descent reports a contraction")
    };
    let target = scheme_target(&scheme, &cost, Some(&|u: &Vector| cost.gradient(u).expect("declared")), &Vector::zeros(3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x155);
    let mut violations = 0;
    let mut worst_slack = f64::NEG_INFINITY;
    for _ in 0..sequences {
        let u0 = uniform_cube(&mut rng, 3, 10.0);
        let mut traj = vec![u0];
        for _ in 0..steps {
            let u = traj.last().unwrap();
            let dir = uniform_cube(&mut rng, 3, 1.0);
            let e = if dir.norm() > 0.0 { &dir * (error_bound * rng.random::<f64>() / dir.norm()) } else { dir };
            traj.push(scheme.update(u, &(cost.gradient(u).expect("declared") + e)));
        }
        violations += iss_envelope_check(&traj, &target, rho, gain, error_bound).len();
        let d0 = (&traj[0] - &target).norm();
        for (k, u) in traj.iter().enumerate() {
            let env = rho.powi(k as i32) * d0 + gain * error_bound;
            worst_slack = worst_slack.max((u - &target).norm() - env);
        }
    }
    (violations, worst_slack)
}

pub fn check_pgd_envelope(sequences: usize, seed: u64) -> PropertyCheck {
    let (violations, slack) = pgd_envelope_worst(sequences, 100, 0.5, seed);
    check(
        "pgd_iss_envelope",
        violations == 0,
        format!("{violations} violations over {sequences} error sequences; max distance - envelope {slack:.3e}"),
    )
}

/// Step-size conditions of the example schemes; failures only count in strict mode.
pub fn check_step_sizes(strict: bool) -> PropertyCheck {
    let schemes = [
        gd_scheme(0.5),
        crate::optimizers::hb_scheme(0.5, 0.125),
        pgd_scheme(0.5, ConvexFeasibleSet::example_ball()),
    ];
    let warnings: Vec<String> = schemes
        .iter()
        .filter_map(|s| validate(s, 3.0, Some(1.0)).ok())
        .flat_map(|r| r.warnings)
        .collect();
    let detail = if warnings.is_empty() { "all conditions hold".to_string() } else { warnings.join("; ") };
    check("step_size_conditions", !strict || warnings.is_empty(), detail)
}

pub fn verify(opts: &VerifyOptions) -> VerifyReport {
    let signal = verify_signal(opts.signal);
    let arcs = static_example_arcs(&signal);
    VerifyReport {
        checks: vec![
            check_upe_moments(),
            check_oracle_remainder(&signal, 1000, opts.seed),
            check_oracle_equivalence(&signal, 100, opts.seed),
            check_hybrid_structure(&arcs),
            check_integrator_bound(&arcs, opts.fault),
            check_hybrid_vs_discrete(&arcs),
            check_decrement(1000, 30, opts.seed),
            check_pgd_envelope(1000, opts.seed),
            check_step_sizes(opts.strict),
        ],
    }
}
