use thiserror::Error;

use crate::field::NodalCountReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial operands have different arity")]
    ArityMismatch,
    #[error("degree {n} is below the minimum {min}")]
    DegreeTooSmall { n: usize, min: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("spectral limit must be non-negative, got {0}")]
    NegativeLimit(f64),
    #[error("unsupported domain: {0}")]
    Unsupported(String),
    #[error("invalid domain parameters: {0}")]
    InvalidDomain(String),
    #[error("{0} is not an eigenvalue of the domain")]
    NotAnEigenvalue(f64),
    #[error("inadmissible mode index: {0}")]
    InadmissibleMode(String),
    #[error("point {0:?} is outside the domain chart")]
    OutsideChart(Vec<f64>),
    #[error("limit {limit} exceeds the completeness bound {bound} of the enumeration")]
    LimitTooLarge { limit: f64, bound: f64 },
    #[error("only {found} eigenvalues found below the search bound, {wanted} requested")]
    TooFewEigenvalues { found: usize, wanted: usize },
    #[error("bessel zero index {0} outside the supported range 1..=10")]
    ZeroIndexOutOfRange(usize),
    #[error("bessel order {0} outside the supported range 0..=8")]
    OrderOutOfRange(usize),
    #[error("root search did not converge")]
    NoConvergence,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("grid resolution {0} is below the minimum of 8 cells per axis")]
    ResolutionTooSmall(usize),
    #[error("grid has {got} axes but the chart has {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("cracks are only supported on two-dimensional charts")]
    CracksNeed2d,
    #[error("crack has zero length")]
    DegenerateCrack,
    #[error("cell center {0:?} lies on a crack")]
    CenterOnCrack(Vec<f64>),
    #[error("field is not finite at {0:?}")]
    NonFinite(Vec<f64>),
    #[error("nodal line extraction needs a two-dimensional chart, got {0} dimensions")]
    NotPlanar(usize),
    #[error("unsupported chart dimension {0}")]
    UnsupportedDimension(usize),
    #[error("empty refinement ladder")]
    EmptyLadder,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("parameter {name} = {value} is out of range: {reason}")]
    ParamOutOfRange { name: String, value: f64, reason: String },
    #[error("unknown parameter {0:?}")]
    UnknownParam(String),
    #[error("count did not stabilise under refinement: {0:?}")]
    Unstable(Box<NodalCountReport>),
    #[error("requested {d} nodal domains is infeasible with these cracks")]
    Infeasible { d: usize },
    #[error("least-squares fit is degenerate")]
    DegenerateFit,
    #[error("eigenvalue multiplicity detected: {0}")]
    Multiplicity(String),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("canvas has zero area")]
    EmptyCanvas,
    #[error("cube slices need a three-dimensional field")]
    NotCube,
    #[error("at least one slice level is required")]
    NoLevels,
}
