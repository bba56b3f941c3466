//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent p = {0} outside (1, ∞)")]
    InvalidExponent(f64),

    #[error("entry count {got} does not match index label size {expected}")]
    LabelMismatch { expected: usize, got: usize },

    #[error("operator shape ({rows}, {cols}) does not match labels ({cod}, {dom})")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        cod: usize,
        dom: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("negative powers of the symbol need an inverse operator")]
    MissingInverse,

    #[error("supplied inverse fails T·T⁻¹ = I (defect {0:.3e})")]
    BadInverse(f64),

    #[error("λ is numerically on the symbol curve (clearance {clearance:.3e} ≤ guard {guard:.3e})")]
    OnCurve { clearance: f64, guard: f64 },

    #[error("empty operator family")]
    EmptyFamily,

    #[error("window [{lo}, {hi}] too small: need [{need_lo}, {need_hi}]")]
    WindowTooSmall {
        lo: i64,
        hi: i64,
        need_lo: i64,
        need_hi: i64,
    },

    #[error("stage {stage} infeasible at dimension {dim}: best defect {best:.3e} ≥ ε = {eps:.3e}")]
    InfeasibleStage {
        stage: usize,
        dim: usize,
        best: f64,
        eps: f64,
    },

    #[error("supplied block vector {index} is not fixed by A_{{n+1}} − A_{{n-2}} (defect {defect:.3e})")]
    RangeViolation { index: usize, defect: f64 },

    #[error("operator is not block-tridiagonal: block ({i}, {j}) has norm {norm:.3e}")]
    NotTridiagonal { i: usize, j: usize, norm: f64 },

    #[error("exact sign enumeration limited to r ≤ {limit}, got r = {got}")]
    TooManySigns { limit: usize, got: usize },

    #[error("zero vector not allowed for {0}")]
    ZeroVector(&'static str),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resolvent blows up on the contour near z = {re:.6} + {im:.6}i")]
    SpectralGap { re: f64, im: f64 },

    #[error("feasibility threshold violated: {0}")]
    Feasibility(String),

    #[error("operator is not an isometry on probes (worst ratio {0:.6e})")]
    NonIsometry(f64),

    #[error("operator is not a surjective partial isometry ({0})")]
    NonPartialIsometry(String),

    #[error("r-schedule too short: need indices up to {need}, got {got}")]
    ScheduleTooShort { need: usize, got: usize },

    #[error("probe distortion {found:.6e} exceeds declared β = {beta:.6e}")]
    LDistortion { found: f64, beta: f64 },

    #[error("continuity budget: grid cannot resolve modulus γ = {gamma:.3e}")]
    ContinuityBudget { gamma: f64 },

    #[error("points must lie in [0,1]^d (offender at index {0})")]
    PointOutOfBox(usize),

    #[error("{0}")]
    Invalid(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
