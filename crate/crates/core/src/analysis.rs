//! Checks and reports computed from recorded arcs.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{sample_ball, Measure};
use crate::error::{AnalysisError, HybridError};
use crate::hybrid::{build_prli, solve, HybridArc, SolveHorizon, StateLayout};
use crate::linalg::Vector;
use crate::optimizers::OptimizerScheme;
use crate::oracle::OracleConfig;
use crate::plants::{build_interconnected, plant_step_control, steady_state_cost, CompactBound, Plant};

pub const TOLERANCES: [f64; 4] = [1.0, 0.5, 0.1, 0.05];
pub const MIN_JUMPS: usize = 4;
pub const MIN_WINDOW: usize = 10;
pub const BALL_SAMPLES: usize = 1000;
pub const BALL_SEED: u64 = 0x16;
pub const RELATIVE_SLACK: f64 = 1e-6;

fn tolerance_key(t: f64) -> String {
    format!("{t}")
}

fn layout_of(arc: &HybridArc) -> Result<StateLayout, AnalysisError> {
    arc.layout.ok_or(AnalysisError::NoLayout)
}

/// `‖u(t_j, j) − target‖` for `j = 0..=J`.
pub fn jump_distances(arc: &HybridArc, target: &Vector) -> Result<Vec<f64>, AnalysisError> {
    let l = layout_of(arc)?;
    Ok(arc
        .states_at_jumps()
        .iter()
        .map(|s| (l.u(&s.x) - target).norm())
        .collect())
}

/// Number of trailing jumps in the ultimate-bound window.
pub fn window_len(jumps: usize) -> usize {
    jumps.div_ceil(4).max(MIN_WINDOW).min(jumps + 1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub final_distance: f64,
    /// First jump at which the distance is within each tolerance; `None` if never.
    pub jumps_to_tolerance: BTreeMap<String, Option<usize>>,
    pub ultimate_bound_estimate: f64,
    pub window_start: usize,
    pub lyapunov_trace: Vec<(usize, f64)>,
}

impl ConvergenceReport {
    pub fn jumps_to(&self, tolerance: f64) -> Option<usize> {
        self.jumps_to_tolerance
            .get(&tolerance_key(tolerance))
            .copied()
            .flatten()
    }
}

pub fn convergence_report(
    arc: &HybridArc,
    target: &Vector,
    lyapunov: Option<&dyn Fn(&Vector) -> f64>,
) -> Result<ConvergenceReport, AnalysisError> {
    if arc.jumps() < MIN_JUMPS {
        return Err(AnalysisError::TooShort {
            found: arc.jumps(),
            needed: MIN_JUMPS,
        });
    }
    let l = layout_of(arc)?;
    let dist = jump_distances(arc, target)?;
    let jumps_to_tolerance = TOLERANCES
        .iter()
        .map(|&tol| (tolerance_key(tol), dist.iter().position(|d| *d <= tol)))
        .collect();
    let window_start = dist.len() - window_len(arc.jumps());
    let ultimate_bound_estimate = dist[window_start..].iter().copied().fold(0.0, f64::max);
    let lyapunov_trace = match lyapunov {
        Some(v) => arc
            .states_at_jumps()
            .iter()
            .map(|s| (s.j, v(&l.eta(&s.x))))
            .collect(),
        None => Vec::new(),
    };
    Ok(ConvergenceReport {
        final_distance: *dist.last().unwrap(),
        jumps_to_tolerance,
        ultimate_bound_estimate,
        window_start,
        lyapunov_trace,
    })
}

/// `M_v·max_{ũ ∈ a·M_v𝔹} |φ(u + ũ)|`, the ball maximum taken over seeded samples.
pub fn integrator_bound(measure: &dyn Measure, u: &Vector, cfg: &OracleConfig) -> f64 {
    let mv = cfg.signal().sup_norm();
    let radius = cfg.amplitude().abs() * mv;
    let mut rng = ChaCha8Rng::seed_from_u64(BALL_SEED);
    let mut peak = measure.measure(u).abs();
    for _ in 0..BALL_SAMPLES {
        peak = peak.max(measure.measure(&sample_ball(&mut rng, u, radius)).abs());
    }
    mv * peak
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegratorViolation {
    pub sample: usize,
    pub t: f64,
    pub j: usize,
    pub norm: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegratorBoundReport {
    pub checked: usize,
    /// `max ‖p‖ / bound` over checked samples.
    pub worst_ratio: f64,
    pub violations: Vec<IntegratorViolation>,
}

impl IntegratorBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `‖p(t,j)‖ ≤ M_v·max_{ũ∈aM_v𝔹}|φ(h(η(t_j,j)) + ũ)|` at every recorded sample with `j ≥ 1`.
pub fn integrator_bound_check(
    arc: &HybridArc,
    measure: &dyn Measure,
    cfg: &OracleConfig,
) -> Result<IntegratorBoundReport, AnalysisError> {
    let l = layout_of(arc)?;
    let mut bounds: BTreeMap<usize, f64> = BTreeMap::new();
    let mut report = IntegratorBoundReport {
        checked: 0,
        worst_ratio: 0.0,
        violations: Vec::new(),
    };
    for (idx, s) in arc.samples.iter().enumerate().filter(|(_, s)| s.j >= 1) {
        let bound = *bounds.entry(s.j).or_insert_with(|| {
            let start = arc.jump_index(s.j).expect("sample with this jump count exists");
            integrator_bound(measure, &l.u(&arc.samples[start].x), cfg)
        });
        let norm = l.p(&s.x).norm();
        report.checked += 1;
        if bound > 0.0 {
            report.worst_ratio = report.worst_ratio.max(norm / bound);
        }
        if norm > bound * (1.0 + RELATIVE_SLACK) {
            report.violations.push(IntegratorViolation {
                sample: idx,
                t: s.t,
                j: s.j,
                norm,
                bound,
            });
        }
    }
    Ok(report)
}

/// Copy of `arc` with every integrator state multiplied by `factor`.
pub fn scale_integrator(arc: &HybridArc, factor: f64) -> Result<HybridArc, AnalysisError> {
    let l = layout_of(arc)?;
    let mut out = arc.clone();
    for s in &mut out.samples {
        let p = l.p(&s.x) * factor;
        s.x.rows_mut(l.p_start(), l.n).copy_from(&p);
    }
    Ok(out)
}

/// Box containing the empirical limit set: the `η` range over the window and the
/// integrator radius from the worst dithered cost there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSetBox {
    pub eta_lower: Vec<f64>,
    pub eta_upper: Vec<f64>,
    pub p_radius: f64,
    pub observed_p_max: f64,
    pub note: &'static str,
}

pub fn limit_set_box(
    arc: &HybridArc,
    measure: &dyn Measure,
    cfg: &OracleConfig,
) -> Result<LimitSetBox, AnalysisError> {
    if arc.jumps() < MIN_JUMPS {
        return Err(AnalysisError::TooShort {
            found: arc.jumps(),
            needed: MIN_JUMPS,
        });
    }
    let l = layout_of(arc)?;
    let start = arc.jumps() + 1 - window_len(arc.jumps());
    let etas: Vec<Vector> = (start..=arc.jumps())
        .filter_map(|j| arc.jump_index(j))
        .map(|i| l.eta(&arc.samples[i].x))
        .collect();
    let d = l.eta_len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for e in &etas {
        for i in 0..d {
            lo[i] = lo[i].min(e[i]);
            hi[i] = hi[i].max(e[i]);
        }
    }
    let p_radius = etas
        .iter()
        .map(|e| integrator_bound(measure, &e.rows(0, l.n).into_owned(), cfg))
        .fold(0.0, f64::max);
    let first = arc.jump_index(start).unwrap_or(0);
    let observed_p_max = arc.samples[first..]
        .iter()
        .map(|s| l.p(&s.x).norm())
        .fold(0.0, f64::max);
    Ok(LimitSetBox {
        eta_lower: lo,
        eta_upper: hi,
        p_radius,
        observed_p_max,
        note: "evaluated on the empirical limit set; under-approximates the attracting set",
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemeRank {
    pub label: String,
    pub jumps: Option<usize>,
    /// 1-based; tied schemes share a rank, non-convergent schemes come last.
    pub rank: usize,
}

pub fn compare_schemes(
    arcs: &[(String, &HybridArc)],
    target: &Vector,
    tolerance: f64,
) -> Result<Vec<SchemeRank>, AnalysisError> {
    if arcs.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let mut rows = arcs
        .iter()
        .map(|(label, arc)| {
            let jumps = jump_distances(arc, target)?.iter().position(|d| *d <= tolerance);
            Ok(SchemeRank {
                label: label.clone(),
                jumps,
                rank: 0,
            })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    rows.sort_by_key(|r| (r.jumps.is_none(), r.jumps));
    for i in 0..rows.len() {
        rows[i].rank = if i > 0 && rows[i].jumps == rows[i - 1].jumps {
            rows[i - 1].rank
        } else {
            i + 1
        };
    }
    Ok(rows)
}

/// `max_{1≤j≤J} ‖u_a(t_j) − u_b(t_j)‖` over jumps present in both arcs.
pub fn max_jump_deviation(a: &HybridArc, b: &HybridArc, jumps: usize) -> Result<f64, AnalysisError> {
    let (la, lb) = (layout_of(a)?, layout_of(b)?);
    let mut worst: f64 = 0.0;
    for j in 1..=jumps {
        match (a.jump_index(j), b.jump_index(j)) {
            (Some(i), Some(k)) => {
                worst = worst.max((la.u(&a.samples[i].x) - lb.u(&b.samples[k].x)).norm());
            }
            _ => {
                return Err(AnalysisError::TooShort {
                    found: a.jumps().min(b.jumps()),
                    needed: jumps,
                })
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug)]
pub struct SweepSetup {
    pub plant: Plant,
    pub scheme: OptimizerScheme,
    pub oracle: OracleConfig,
    pub u0: Vector,
    pub theta0: Vector,
    pub jumps: usize,
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub step: f64,
    pub deviation: Option<f64>,
    pub escape: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub jumps: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Deviations shrink along the listed `ε` order up to the relative `slack`.
    pub fn shrinking(&self, slack: f64) -> bool {
        let devs: Vec<f64> = self.rows.iter().filter_map(|r| r.deviation).collect();
        devs.len() == self.rows.len() && devs.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
    }

    pub fn deviation_at(&self, epsilon: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.epsilon == epsilon)
            .and_then(|r| r.deviation)
    }
}

/// Interconnected run for one `ε`.
pub fn interconnected_arc(setup: &SweepSetup, epsilon: f64) -> Result<HybridArc, AnalysisError> {
    let plant = setup.plant.with_epsilon(epsilon)?;
    let eta0 = setup.scheme.initial_eta(&setup.u0);
    let bound = CompactBound::default_for(&eta0, &plant, &setup.oracle);
    let step = plant_step_control(&plant, setup.step);
    let sys = build_interconnected(plant, setup.scheme.clone(), setup.oracle.clone(), bound)?;
    let x0 = sys.initial_state(&setup.u0, &setup.theta0);
    Ok(solve(&sys, &x0, SolveHorizon::jumps(setup.jumps), step)?)
}

/// Static reference on the steady-state cost.
pub fn static_reference_arc(setup: &SweepSetup) -> Result<HybridArc, AnalysisError> {
    let cost = steady_state_cost(&setup.plant)?;
    let sys = build_prli(std::sync::Arc::new(cost), setup.scheme.clone(), setup.oracle.clone())?;
    Ok(solve(&sys, &sys.initial_state(&setup.u0), SolveHorizon::jumps(setup.jumps), setup.step)?)
}

pub fn sgpas_sweep(setup: &SweepSetup, epsilons: &[f64]) -> Result<SweepTable, AnalysisError> {
    if epsilons.len() < 2 {
        return Err(AnalysisError::TooFewEpsilons(epsilons.len()));
    }
    let reference = static_reference_arc(setup)?;
    let rows = epsilons
        .par_iter()
        .map(|&eps| {
            let plant = setup.plant.with_epsilon(eps)?;
            let step = plant_step_control(&plant, setup.step);
            let row = match interconnected_arc(setup, eps) {
                Ok(arc) => SweepRow {
                    epsilon: eps,
                    step,
                    deviation: Some(max_jump_deviation(&arc, &reference, setup.jumps)?),
                    escape: None,
                },
                Err(AnalysisError::Hybrid(e @ HybridError::SolverEscape { .. })) => SweepRow {
                    epsilon: eps,
                    step,
                    deviation: None,
                    escape: Some(e.to_string()),
                },
                Err(e) => return Err(e),
            };
            Ok(row)
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    Ok(SweepTable {
        jumps: setup.jumps,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{example_minimizer, example_quadratic, FnMeasure};
    use crate::hybrid::ArcSample;
    use crate::optimizers::{gd_scheme, lyapunov_value};
    use crate::signals::example_signal;
    use std::sync::Arc;

    fn layout() -> StateLayout {
        StateLayout { n: 3, m: 0, plant: 0 }
    }

    fn constant_arc(u: &Vector, jumps: usize) -> HybridArc {
        let l = layout();
        let mut arc = HybridArc {
            layout: Some(l),
            ..Default::default()
        };
        for j in 0..=jumps {
            if j > 0 {
                arc.jump_times.push(j as f64);
            }
            arc.samples.push(ArcSample {
                t: j as f64,
                j,
                x: l.assemble(u, &Vector::zeros(3), 0.0, None),
                output: None,
            });
        }
        arc
    }

    fn example1_gd_arc(jumps: usize) -> (HybridArc, OracleConfig) {
        let cfg = OracleConfig::with_signal(0.1, example_signal(true)).unwrap();
        let sys = build_prli(Arc::new(example_quadratic()), gd_scheme(0.5), cfg.clone()).unwrap();
        let arc = solve(&sys, &sys.initial_state(&Vector::zeros(3)), SolveHorizon::jumps(jumps), 1e-3).unwrap();
        (arc, cfg)
    }

    #[test]
    fn constant_arc_at_target() {
        let target = example_minimizer();
        let r = convergence_report(&constant_arc(&target, 8), &target, None).unwrap();
        assert_eq!(r.final_distance, 0.0);
        for tol in TOLERANCES {
            assert_eq!(r.jumps_to(tol), Some(0));
        }
        assert_eq!(r.ultimate_bound_estimate, 0.0);
    }

    #[test]
    fn short_arcs_rejected() {
        let target = example_minimizer();
        assert_eq!(
            convergence_report(&constant_arc(&target, 3), &target, None).unwrap_err(),
            AnalysisError::TooShort { found: 3, needed: 4 }
        );
    }

    #[test]
    fn window_sizes() {
        assert_eq!(window_len(4), 5);
        assert_eq!(window_len(40), 10);
        assert_eq!(window_len(50), 13);
        assert_eq!(window_len(100), 25);
    }

    #[test]
    fn example1_gd_inside_linear_envelope() {
        let (arc, cfg) = example1_gd_arc(50);
        let c = example_quadratic();
        let v = |eta: &Vector| lyapunov_value(&gd_scheme(0.5), &c, eta).unwrap();
        let r = convergence_report(&arc, &example_minimizer(), Some(&v)).unwrap();
        let remainder = crate::oracle::remainder_bound(cfg.signal().sup_norm(), 3.0, 0.1);
        assert!(r.ultimate_bound_estimate <= remainder * 0.5 / (1.0 - 0.5));
        assert_eq!(r.lyapunov_trace.len(), 51);
        // nonincreasing in tolerance
        let hits: Vec<usize> = TOLERANCES.iter().filter_map(|t| r.jumps_to(*t)).collect();
        assert!(hits.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn example1_integrator_bound_and_fault() {
        let (arc, cfg) = example1_gd_arc(6);
        let c = example_quadratic();
        let r = integrator_bound_check(&arc, &c, &cfg).unwrap();
        assert!(r.passed(), "{:?}", r.violations.first());
        assert!(r.checked > 1000);
        let faulty = scale_integrator(&arc, 10.0).unwrap();
        assert!(!integrator_bound_check(&faulty, &c, &cfg).unwrap().passed());
    }

    #[test]
    fn zero_cost_gives_zero_integrator() {
        let cfg = OracleConfig::with_signal(0.1, example_signal(true)).unwrap();
        let zero = Arc::new(FnMeasure::new(3, |_: &Vector| 0.0));
        let sys = build_prli(zero.clone(), gd_scheme(0.5), cfg.clone()).unwrap();
        let arc = solve(&sys, &sys.initial_state(&Vector::zeros(3)), SolveHorizon::jumps(3), 1e-2).unwrap();
        let r = integrator_bound_check(&arc, zero.as_ref(), &cfg).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn comparison_ties_and_singletons() {
        let (arc, _) = example1_gd_arc(10);
        let target = example_minimizer();
        let one = compare_schemes(&[("gd".into(), &arc)], &target, 0.5).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].rank, 1);
        let two = compare_schemes(&[("a".into(), &arc), ("b".into(), &arc)], &target, 0.5).unwrap();
        assert_eq!(two[0].rank, two[1].rank);
        let far = constant_arc(&Vector::zeros(3), 10);
        let mixed = compare_schemes(&[("never".into(), &far), ("gd".into(), &arc)], &target, 0.5).unwrap();
        assert_eq!(mixed[0].label, "gd");
        assert_eq!(mixed[1].jumps, None);
        assert_eq!(mixed[1].rank, 2);
        assert_eq!(compare_schemes(&[], &target, 0.5).unwrap_err(), AnalysisError::Empty);
    }

    #[test]
    fn limit_set_box_contains_window() {
        let (arc, cfg) = example1_gd_arc(20);
        let b = limit_set_box(&arc, &example_quadratic(), &cfg).unwrap();
        for i in 0..3 {
            assert!(b.eta_lower[i] <= b.eta_upper[i]);
        }
        assert!(b.observed_p_max <= b.p_radius);
    }

    #[test]
    fn sweep_needs_two_epsilons() {
        let setup = SweepSetup {
            plant: Plant::example3(0.01).unwrap(),
            scheme: gd_scheme(0.5),
            oracle: OracleConfig::with_signal(0.1, example_signal(true)).unwrap(),
            u0: Vector::zeros(3),
            theta0: Vector::zeros(3),
            jumps: 3,
            step: 1e-3,
        };
        assert_eq!(
            sgpas_sweep(&setup, &[0.01]).unwrap_err(),
            AnalysisError::TooFewEpsilons(1)
        );
    }

    #[test]
    fn memoryless_sweep_has_no_deviation() {
        let setup = SweepSetup {
            plant: Plant::memoryless(example_quadratic(), 0.1).unwrap(),
            scheme: gd_scheme(0.5),
            oracle: OracleConfig::with_signal(0.1, example_signal(true)).unwrap(),
            u0: Vector::zeros(3),
            theta0: Vector::zeros(3),
            jumps: 4,
            step: 1e-3,
        };
        let t = sgpas_sweep(&setup, &[0.1, 0.05]).unwrap();
        for r in &t.rows {
            assert!(r.deviation.unwrap() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn reports_are_pure() {
        let (arc, _) = example1_gd_arc(8);
        let target = example_minimizer();
        let a = serde_json::to_string(&convergence_report(&arc, &target, None).unwrap()).unwrap();
        let reread = HybridArc::read_csv(arc.to_csv().unwrap().as_bytes()).unwrap();
        let b = serde_json::to_string(&convergence_report(&reread, &target, None).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
