//! Update rules `(h, g)` for gradient descent, Polyak heavy ball and projected
//! gradient descent, their step-size validators, and Lyapunov instrumentation.

use serde::{Deserialize, Serialize};

use crate::cost::{ConvexFeasibleSet, CostFunction};
use crate::error::{CostError, OptimizerError};
use crate::linalg::Vector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OptimizerScheme {
    /// `u⁺ = u − γf`
    Gd { gamma: f64 },
    /// `(u, w)⁺ = (u − γf + ν(u − w), u)`
    HeavyBall { gamma: f64, nu: f64 },
    /// `u⁺ = P_U(u − γf)`
    Pgd { gamma: f64, set: ConvexFeasibleSet },
}

pub fn gd_scheme(gamma: f64) -> OptimizerScheme {
    OptimizerScheme::Gd { gamma }
}

pub fn hb_scheme(gamma: f64, nu: f64) -> OptimizerScheme {
    OptimizerScheme::HeavyBall { gamma, nu }
}

pub fn pgd_scheme(gamma: f64, set: ConvexFeasibleSet) -> OptimizerScheme {
    OptimizerScheme::Pgd { gamma, set }
}

impl OptimizerScheme {
    pub fn gamma(&self) -> f64 {
        match self {
            OptimizerScheme::Gd { gamma }
            | OptimizerScheme::HeavyBall { gamma, .. }
            | OptimizerScheme::Pgd { gamma, .. } => *gamma,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OptimizerScheme::Gd { .. } => "gd",
            OptimizerScheme::HeavyBall { .. } => "heavy_ball",
            OptimizerScheme::Pgd { .. } => "pgd",
        }
    }

    /// Dimension `m` of the auxiliary state `w`.
    pub fn aux_dim(&self, n: usize) -> usize {
        match self {
            OptimizerScheme::HeavyBall { .. } => n,
            _ => 0,
        }
    }

    pub fn state_dim(&self, n: usize) -> usize {
        n + self.aux_dim(n)
    }

    /// `η₀` for a starting parameter `u₀` (heavy ball starts with `w = u`).
    pub fn initial_eta(&self, u0: &Vector) -> Vector {
        match self {
            OptimizerScheme::HeavyBall { .. } => {
                Vector::from_iterator(2 * u0.len(), u0.iter().chain(u0.iter()).copied())
            }
            _ => u0.clone(),
        }
    }

    /// Positivity of the parameters, plus set dimension for PGD.
    pub fn check(&self, n: usize) -> Result<(), String> {
        if !(self.gamma() > 0.0) {
            return Err(format!("gamma must be positive, got {}", self.gamma()));
        }
        match self {
            OptimizerScheme::HeavyBall { nu, .. } if !(*nu >= 0.0) => {
                Err(format!("nu must be nonnegative, got {nu}"))
            }
            OptimizerScheme::Pgd { set, .. } if set.dim() != n => Err(format!(
                "feasible set has dimension {}, parameter has {n}",
                set.dim()
            )),
            _ => Ok(()),
        }
    }

    /// The extraction map `h(η) = u`.
    pub fn extract(&self, eta: &Vector, n: usize) -> Vector {
        eta.rows(0, n).into_owned()
    }

    /// The update map `g(η, f)`.
    pub fn update(&self, eta: &Vector, f: &Vector) -> Vector {
        let n = f.len();
        match self {
            OptimizerScheme::Gd { gamma } => eta - f * *gamma,
            OptimizerScheme::Pgd { gamma, set } => set.project(&(eta - f * *gamma)),
            OptimizerScheme::HeavyBall { gamma, nu } => {
                let u = eta.rows(0, n);
                let w = eta.rows(n, n);
                let next = u - f * *gamma + (u - w) * *nu;
                Vector::from_iterator(2 * n, next.iter().chain(u.iter()).copied())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IssConstants {
    Descent {
        c0: f64,
        c1: f64,
        c2: f64,
        c3: f64,
    },
    HeavyBall {
        c0: f64,
        c1: f64,
        c2: f64,
        c3: f64,
        p11: f64,
        p12: f64,
        p22: f64,
        det: f64,
        trace: f64,
        lambda_min: f64,
    },
    Contraction {
        rho: f64,
        gain: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IssReport {
    pub valid: bool,
    pub constants: IssConstants,
    /// Slack in the binding step-size condition; negative when violated.
    pub margin: f64,
    pub warnings: Vec<String>,
}

impl IssReport {
    /// Upgrade warnings to an error.
    pub fn strict(self) -> Result<Self, OptimizerError> {
        if self.valid {
            Ok(self)
        } else {
            Err(OptimizerError::Strict(self.warnings.join("; ")))
        }
    }

    /// `(c2, c3)` of the decrement condition, where defined.
    pub fn decrement_constants(&self) -> Option<(f64, f64)> {
        match self.constants {
            IssConstants::Descent { c2, c3, .. } | IssConstants::HeavyBall { c2, c3, .. } => {
                Some((c2, c3))
            }
            IssConstants::Contraction { .. } => None,
        }
    }
}

fn c3_of(c0: f64, c1: f64, c2: f64) -> f64 {
    ((c1 * c1 + 4.0 * c0 * c2).sqrt() + c1) / c2
}

/// Check the sufficient step-size conditions and report the ISS constants.
/// Violations produce warnings, not errors; see [`IssReport::strict`].
pub fn validate(
    scheme: &OptimizerScheme,
    lipschitz: f64,
    strong_convexity: Option<f64>,
) -> Result<IssReport, OptimizerError> {
    if !(lipschitz > 0.0) {
        return Err(OptimizerError::InvalidLipschitz(lipschitz));
    }
    let l = lipschitz;
    let mut warnings = Vec::new();
    let report = match scheme {
        OptimizerScheme::Gd { gamma } => {
            let g = *gamma;
            let valid = g > 0.0 && g * l < 2.0;
            if !valid {
                warnings.push(format!("gamma*L = {} outside (0, 2)", g * l));
            }
            let c0 = g * g * l / 2.0;
            let c1 = g * (1.0 + g * l);
            let c2 = g * (1.0 - g * l / 2.0) / 2.0;
            IssReport {
                valid,
                constants: IssConstants::Descent {
                    c0,
                    c1,
                    c2,
                    c3: c3_of(c0, c1, c2),
                },
                margin: 2.0 - g * l,
                warnings,
            }
        }
        OptimizerScheme::HeavyBall { gamma, nu } => {
            let (g, nu) = (*gamma, *nu);
            let gamma_max = 2.0 / (2.0 + l);
            let nu_sq_max = 4.0 * g - 2.0 * g * g * (2.0 + l);
            let nu_max = nu_sq_max.max(0.0).sqrt();
            let gamma_ok = g > 0.0 && g < gamma_max;
            let nu_ok = nu > 0.0 && nu < nu_max;
            if !gamma_ok {
                warnings.push(format!(
                    "heavy ball needs 0 < gamma < 2/(2+L) = {gamma_max}, got {g}"
                ));
            }
            if !nu_ok {
                warnings.push(if nu_sq_max > 0.0 {
                    format!("heavy ball needs 0 < nu < (4*gamma - 2*gamma^2*(2+L))^(1/2) = {nu_max}, got {nu}")
                } else {
                    format!("heavy ball admits no nu at gamma = {g}: 4*gamma - 2*gamma^2*(2+L) = {nu_sq_max} <= 0")
                });
            }
            let lt = 1.0 + l / 2.0;
            let p11 = g * (1.0 - g * lt);
            let p12 = -(nu / 2.0) * (1.0 - 2.0 * g * lt);
            let p22 = 1.0 - lt * nu * nu;
            let det = p11 * p22 - p12 * p12;
            let trace = p11 + p22;
            let lambda_min = trace / 2.0 - ((p11 - p22).powi(2) / 4.0 + p12 * p12).sqrt();
            if gamma_ok && nu_ok && !(det > 0.0 && trace > 0.0) {
                warnings.push("P matrix is not positive definite".into());
            }
            let c0 = g * g * lt;
            let c1 = g * lt * (4.0 + nu * nu).sqrt();
            let c2 = lambda_min / 2.0;
            IssReport {
                valid: gamma_ok && nu_ok,
                constants: IssConstants::HeavyBall {
                    c0,
                    c1,
                    c2,
                    c3: c3_of(c0, c1, c2),
                    p11,
                    p12,
                    p22,
                    det,
                    trace,
                    lambda_min,
                },
                margin: (gamma_max - g).min(nu_max - nu),
                warnings,
            }
        }
        OptimizerScheme::Pgd { gamma, .. } => {
            let mu = strong_convexity.ok_or(OptimizerError::MissingStrongConvexity)?;
            let g = *gamma;
            let valid = g > 0.0 && g * l < 2.0;
            if !valid {
                warnings.push(format!("gamma*L = {} outside (0, 2)", g * l));
            }
            let rho = (1.0 - g * l).abs().max((1.0 - g * mu).abs());
            IssReport {
                valid,
                constants: IssConstants::Contraction {
                    rho,
                    gain: g / (1.0 - rho),
                },
                margin: 1.0 - rho,
                warnings,
            }
        }
    };
    Ok(report)
}

/// `V(u) = φ(u) − φ(u*)`, or `W = V + ‖u − w‖²` for heavy ball.
pub fn lyapunov_value(
    scheme: &OptimizerScheme,
    cost: &CostFunction,
    eta: &Vector,
) -> Result<f64, CostError> {
    let u_star = cost.minimizer().ok_or(CostError::MissingMinimizer)?;
    let n = u_star.len();
    let u = scheme.extract(eta, n);
    let v = cost.value(&u) - cost.value(u_star);
    Ok(match scheme {
        OptimizerScheme::HeavyBall { .. } => v + (&u - eta.rows(n, n)).norm_squared(),
        _ => v,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecrementViolation {
    pub index: usize,
    pub delta: f64,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecrementReport {
    pub c2: f64,
    pub c3: f64,
    /// Steps where the gradient condition held and the decrement was checked.
    pub checked: usize,
    pub violations: Vec<DecrementViolation>,
}

impl DecrementReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `ΔV ≤ −c₂‖∇V‖²` on each consecutive pair of `trajectory` where
/// `‖∇V‖ ≥ c₃·e_max` (heavy ball: `W` and `κ = (∇φ, u − w)`).
pub fn decrement_check(
    scheme: &OptimizerScheme,
    cost: &CostFunction,
    trajectory: &[Vector],
    e_max: f64,
) -> Result<DecrementReport, OptimizerError> {
    let l = cost.lipschitz().ok_or(OptimizerError::Unsupported("a declared Lipschitz constant"))?;
    if matches!(scheme, OptimizerScheme::Pgd { .. }) {
        return Err(OptimizerError::Unsupported(
            "a descent-type scheme; use the ISS envelope for projected descent",
        ));
    }
    let report = validate(scheme, l, cost.strong_convexity())?;
    let (c2, c3) = report.decrement_constants().expect("descent constants");
    let n = cost.dim();
    let mut checked = 0;
    let mut violations = Vec::new();
    for (index, pair) in trajectory.windows(2).enumerate() {
        let u = scheme.extract(&pair[0], n);
        let grad = cost.gradient(&u)?;
        let (measure, kappa_sq) = match scheme {
            OptimizerScheme::HeavyBall { .. } => {
                let gap = (&u - pair[0].rows(n, n)).norm_squared();
                ((grad.norm_squared() + gap).sqrt(), grad.norm_squared() + gap)
            }
            _ => (grad.norm(), grad.norm_squared()),
        };
        if !(measure > 0.0 && measure >= c3 * e_max) {
            continue;
        }
        checked += 1;
        let before = lyapunov_value(scheme, cost, &pair[0])?;
        let delta = lyapunov_value(scheme, cost, &pair[1])? - before;
        let required = -c2 * kappa_sq * (1.0 - 1e-6);
        if delta > required + 1e-12 * (1.0 + before.abs()) {
            violations.push(DecrementViolation {
                index,
                delta,
                required,
            });
        }
    }
    Ok(DecrementReport {
        c2,
        c3,
        checked,
        violations,
    })
}

/// Iterate `u ↦ g(u, ∇φ(u))` until successive iterates differ by less than `tol`.
pub fn fixed_point(
    scheme: &OptimizerScheme,
    gradient: impl Fn(&Vector) -> Vector,
    eta0: &Vector,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Vector {
    let mut eta = eta0.clone();
    for _ in 0..max_iter {
        let next = scheme.update(&eta, &gradient(&scheme.extract(&eta, n)));
        let done = (&next - &eta).norm() < tol;
        eta = next;
        if done {
            break;
        }
    }
    eta
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeViolation {
    pub k: usize,
    pub distance: f64,
    pub envelope: f64,
}

/// Check `‖u(k) − u♯‖ ≤ ρᵏ‖u(0) − u♯‖ + gain·ē + 1e-9` along a trajectory.
pub fn iss_envelope_check(
    trajectory: &[Vector],
    target: &Vector,
    rho: f64,
    gain: f64,
    error_bound: f64,
) -> Vec<EnvelopeViolation> {
    let Some(first) = trajectory.first() else {
        return Vec::new();
    };
    let d0 = (first - target).norm();
    trajectory
        .iter()
        .enumerate()
        .filter_map(|(k, u)| {
            let distance = (u - target).norm();
            let envelope = rho.powi(k as i32) * d0 + gain * error_bound + 1e-9;
            (distance > envelope).then_some(EnvelopeViolation {
                k,
                distance,
                envelope,
            })
        })
        .collect()
}
