//! Experiment configuration files (JSON).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cost::{example_quadratic, quadratic_cost, CostFunction};
use crate::error::ConfigError;
use crate::linalg::{matrix_from_rows, Matrix, Vector};
use crate::optimizers::OptimizerScheme;
use crate::oracle::OracleConfig;
use crate::plants::Plant;
use crate::signals::{
    example_signal, piecewise_linear_upe, piecewise_literal_upe, sinusoidal_upe, whiten,
    PiecewiseLinearNodes, Quadrature, QuadratureRule, UpeSignal,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostSpec {
    /// The worked-example quadratic.
    Example,
    Quadratic {
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
        u_star: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    pub center: Vec<f64>,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlantSpec {
    Example3 {
        epsilon: f64,
    },
    Linear {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
        psi: QuadraticSpec,
        epsilon: f64,
    },
}

impl PlantSpec {
    pub fn epsilon(&self) -> f64 {
        match self {
            PlantSpec::Example3 { epsilon } | PlantSpec::Linear { epsilon, .. } => *epsilon,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeForm {
    #[default]
    Interpolant,
    Literal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSpec {
    Sinusoidal {
        n: usize,
    },
    PiecewiseLinear {
        /// Defaults to the four example nodes.
        #[serde(default)]
        nodes: Option<Vec<Vec<f64>>>,
        #[serde(default = "yes")]
        whiten: bool,
        #[serde(default)]
        form: NodeForm,
    },
}

fn yes() -> bool {
    true
}

fn default_quadrature_points() -> usize {
    Quadrature::default().panels
}

fn default_step() -> f64 {
    crate::hybrid::DEFAULT_STEP
}

fn default_seed() -> u64 {
    crate::experiments::DEFAULT_SEED
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub cost: Option<CostSpec>,
    #[serde(default)]
    pub plant: Option<PlantSpec>,
    pub scheme: OptimizerScheme,
    pub signal: SignalSpec,
    pub a: f64,
    #[serde(default = "default_quadrature_points")]
    pub quadrature_points: usize,
    #[serde(default)]
    pub quadrature_rule: QuadratureRule,
    pub initial_u: Vec<f64>,
    /// Plant state at `t = 0`; defaults to zero.
    #[serde(default)]
    pub initial_theta: Option<Vec<f64>>,
    /// Defaults to 50 for a static cost and 30 for a plant.
    #[serde(default)]
    pub jumps: Option<usize>,
    #[serde(default = "default_step")]
    pub step: f64,
    /// Path prefix for `<output>.csv` and `<output>.summary.json`.
    pub output: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub strict: bool,
}

pub const STATIC_JUMPS: usize = 50;
pub const PLANT_JUMPS: usize = 30;

pub const EXAMPLE1_GD: &str = include_str!("../configs/example1_gd.json");
pub const EXAMPLE1_HB: &str = include_str!("../configs/example1_hb.json");
pub const EXAMPLE2_PGD: &str = include_str!("../configs/example2_pgd.json");
pub const EXAMPLE3_PLANT: &str = include_str!("../configs/example3_plant.json");

fn rows_to_matrix(field: &str, rows: &[Vec<f64>]) -> Result<Matrix, ConfigError> {
    matrix_from_rows(rows).ok_or_else(|| ConfigError::invalid(field, "rows must be nonempty and of equal length"))
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_string(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin(text: &str, name: &str) -> Self {
        Self::parse(text, name).expect("checked-in config is valid")
    }

    pub fn dim(&self) -> usize {
        self.initial_u.len()
    }

    pub fn jump_budget(&self) -> usize {
        self.jumps.unwrap_or(if self.plant.is_some() { PLANT_JUMPS } else { STATIC_JUMPS })
    }

    pub fn csv_path(&self) -> PathBuf {
        suffixed(&self.output, "csv")
    }

    pub fn summary_path(&self) -> PathBuf {
        suffixed(&self.output, "summary.json")
    }

    /// Structural checks that need no numerics beyond the oracle precondition.
    pub fn validate(&self) -> Result<(), ConfigError> {
        match (&self.cost, &self.plant) {
            (Some(_), Some(_)) => return Err(ConfigError::invalid("cost", "give either `cost` or `plant`, not both")),
            (None, None) => return Err(ConfigError::invalid("cost", "one of `cost` or `plant` is required")),
            _ => {}
        }
        if self.a == 0.0 || !self.a.is_finite() {
            return Err(ConfigError::invalid("a", "dither amplitude must be nonzero and finite"));
        }
        if self.jumps == Some(0) {
            return Err(ConfigError::invalid("jumps", "jump budget must be at least 1"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(ConfigError::invalid("step", "flow step must be positive"));
        }
        if self.quadrature_points < 2 {
            return Err(ConfigError::invalid("quadrature_points", "need at least 2 panels"));
        }
        if self.initial_u.is_empty() {
            return Err(ConfigError::invalid("initial_u", "must be nonempty"));
        }
        if let Some(p) = &self.plant {
            if !(p.epsilon() > 0.0) {
                return Err(ConfigError::invalid("plant.epsilon", "must be positive"));
            }
        }
        let n = self.dim();
        self.scheme.check(n).map_err(|m| ConfigError::invalid("scheme", m))?;
        let sig_dim = match &self.signal {
            SignalSpec::Sinusoidal { n } => *n,
            SignalSpec::PiecewiseLinear { nodes: Some(nodes), .. } => nodes.first().map_or(0, Vec::len),
            SignalSpec::PiecewiseLinear { nodes: None, .. } => 3,
        };
        if sig_dim != n {
            return Err(ConfigError::invalid("signal", format!("signal dimension {sig_dim} does not match initial_u ({n})")));
        }
        Ok(())
    }

    pub fn quadrature(&self) -> Result<Quadrature, ConfigError> {
        Quadrature::new(self.quadrature_points, self.quadrature_rule).map_err(|e| ConfigError::invalid("quadrature_points", e))
    }

    pub fn build_signal(&self) -> Result<UpeSignal, ConfigError> {
        let quad = self.quadrature()?;
        let signal = match &self.signal {
            SignalSpec::Sinusoidal { n } => sinusoidal_upe(*n).map_err(|e| ConfigError::invalid("signal.n", e))?,
            SignalSpec::PiecewiseLinear { nodes: None, whiten: true, form: NodeForm::Interpolant } => example_signal(true),
            SignalSpec::PiecewiseLinear { nodes, whiten: w, form } => {
                let nodes = match nodes {
                    Some(rows) => PiecewiseLinearNodes::from_rows(rows).map_err(|e| ConfigError::invalid("signal.nodes", e))?,
                    None => PiecewiseLinearNodes::example(),
                };
                let raw = match form {
                    NodeForm::Interpolant => piecewise_linear_upe(nodes),
                    NodeForm::Literal => piecewise_literal_upe(nodes),
                };
                if *w {
                    whiten(&raw, &quad).map_err(|e| ConfigError::invalid("signal", e))?
                } else {
                    raw
                }
            }
        };
        signal.certify(&quad).map_err(|e| ConfigError::invalid("signal", e))?;
        Ok(signal)
    }

    pub fn build_oracle(&self) -> Result<OracleConfig, ConfigError> {
        OracleConfig::new(self.a, self.build_signal()?, self.quadrature()?).map_err(|e| ConfigError::invalid("a", e))
    }

    pub fn build_cost(&self) -> Result<Option<CostFunction>, ConfigError> {
        match &self.cost {
            None => Ok(None),
            Some(CostSpec::Example) => Ok(Some(example_quadratic())),
            Some(CostSpec::Quadratic { q, u_star, offset }) => {
                let q = rows_to_matrix("cost.q", q)?;
                quadratic_cost(q, Vector::from_vec(u_star.clone()), *offset)
                    .map(Some)
                    .map_err(|e| ConfigError::invalid("cost", e))
            }
        }
    }

    pub fn build_plant(&self) -> Result<Option<Plant>, ConfigError> {
        match &self.plant {
            None => Ok(None),
            Some(PlantSpec::Example3 { epsilon }) => {
                Plant::example3(*epsilon).map(Some).map_err(|e| ConfigError::invalid("plant", e))
            }
            Some(PlantSpec::Linear { a, b, psi, epsilon }) => {
                let a = rows_to_matrix("plant.A", a)?;
                let b = rows_to_matrix("plant.B", b)?;
                let q = rows_to_matrix("plant.psi.q", &psi.q)?;
                Plant::linear_quadratic(a, b, q, Vector::from_vec(psi.center.clone()), psi.offset, *epsilon)
                    .map(Some)
                    .map_err(|e| ConfigError::invalid("plant", e))
            }
        }
    }

    /// Regularity constants `(L, μ)` of the cost seen by the optimizer. For a
    /// plant these come from the model: `φ(u) = ψ(χ(u))` with linear `χ`.
    pub fn regularity(&self) -> Result<(f64, Option<f64>), ConfigError> {
        if let Some(c) = self.build_cost()? {
            let l = c.lipschitz().ok_or_else(|| ConfigError::invalid("cost", "Lipschitz constant unavailable"))?;
            return Ok((l, c.strong_convexity()));
        }
        let hessian = match self.plant.as_ref().expect("validated") {
            PlantSpec::Example3 { .. } => example_quadratic().hessian().cloned().expect("quadratic"),
            PlantSpec::Linear { a, b, psi, .. } => {
                let a = rows_to_matrix("plant.A", a)?;
                let b = rows_to_matrix("plant.B", b)?;
                let q = rows_to_matrix("plant.psi.q", &psi.q)?;
                let g = -a.lu().solve(&b).ok_or_else(|| ConfigError::invalid("plant.A", "singular"))?;
                g.transpose() * q * g
            }
        };
        let ev = crate::linalg::sym_eigenvalues(&hessian);
        let l = ev.iter().map(|e| e.abs()).fold(0.0, f64::max);
        let mu = (ev[0] > 1e-12 * l.max(1.0)).then_some(ev[0]);
        Ok((l, mu))
    }

    pub fn with_output(mut self, output: impl Into<PathBuf>) -> Self {
        self.output = output.into();
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        if let Some(p) = &mut self.plant {
            match p {
                PlantSpec::Example3 { epsilon: e } | PlantSpec::Linear { epsilon: e, .. } => *e = epsilon,
            }
        }
        self
    }
}

fn suffixed(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
