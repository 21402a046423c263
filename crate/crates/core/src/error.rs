use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("signal dimension must be positive")]
    InvalidDimension,
    #[error("a piecewise-linear signal needs at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("node {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("signal evaluated at tau = {0}, outside [0, 1]")]
    OutOfDomain(f64),
    #[error(
        "signal is not persistently exciting: smallest covariance eigenvalue {lambda_min:e} <= 1e-10"
    )]
    NotPersistentlyExciting { lambda_min: f64 },
    #[error("moment certification failed: mean residual {mean:e}, covariance residual {covariance:e}, tolerance {tolerance:e}")]
    NotUnbiased {
        mean: f64,
        covariance: f64,
        tolerance: f64,
    },
    #[error("quadrature needs at least 2 panels, got {0}")]
    InvalidQuadrature(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("matrix is {rows}x{cols}, expected square {expected}x{expected}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("cost has no declared minimizer")]
    MissingMinimizer,
    #[error("cost has no gradient (measurement-only)")]
    MissingGradient,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid feasible set: {0}")]
    InvalidSet(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("dither amplitude must be nonzero")]
    ZeroAmplitude,
    #[error("dimension mismatch: signal has dimension {signal}, input has {input}")]
    DimensionMismatch { signal: usize, input: usize },
    #[error(transparent)]
    Signal(#[from] SignalError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("projected gradient descent needs a strong convexity constant")]
    MissingStrongConvexity,
    #[error("Lipschitz constant must be positive, got {0}")]
    InvalidLipschitz(f64),
    #[error("step-size conditions violated: {0}")]
    Strict(String),
    #[error("decrement check needs {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Cost(#[from] CostError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HybridError {
    #[error("initial condition is in neither the flow set nor the jump set")]
    InvalidInitialCondition,
    #[error("solution left the flow and jump sets at t = {t}, j = {j}")]
    SolverEscape {
        t: f64,
        j: usize,
        arc: Box<crate::hybrid::HybridArc>,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("flow step must be positive, got {0}")]
    InvalidStep(f64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlantError {
    #[error("timescale epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("plant matrix A is not Hurwitz (max real part {0})")]
    NotHurwitz(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Hybrid(#[from] HybridError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("arc has {found} jumps, need at least {needed}")]
    TooShort { found: usize, needed: usize },
    #[error("arc carries no PRLI state layout")]
    NoLayout,
    #[error("sweep needs at least 2 epsilon values, got {0}")]
    TooFewEpsilons(usize),
    #[error("no arcs to compare")]
    Empty,
    #[error(transparent)]
    Hybrid(#[from] HybridError),
    #[error(transparent)]
    Plant(#[from] PlantError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, message: impl ToString) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("step-size validation failed in strict mode: {0}")]
    Strict(String),
    #[error("solver escape at t = {t}, j = {j}")]
    Escape { t: f64, j: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Hybrid(HybridError),
    #[error(transparent)]
    Plant(PlantError),
}

impl RunError {
    /// 0 success, 1 verification failure, 2 configuration error, 3 solver escape, 4 I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Strict(_) => 2,
            RunError::Escape { .. } => 3,
            RunError::Io { .. } => 4,
            RunError::Verification(_) | RunError::Analysis(_) | RunError::Hybrid(_) | RunError::Plant(_) => 1,
        }
    }
}

impl From<HybridError> for RunError {
    fn from(e: HybridError) -> Self {
        match e {
            HybridError::SolverEscape { t, j, .. } => RunError::Escape { t, j },
            other => RunError::Hybrid(other),
        }
    }
}

impl From<PlantError> for RunError {
    fn from(e: PlantError) -> Self {
        match e {
            PlantError::Hybrid(h) => h.into(),
            other => RunError::Plant(other),
        }
    }
}
