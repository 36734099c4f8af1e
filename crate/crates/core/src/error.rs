use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lengths must be positive and finite (L = {length}, M = {depth})")]
    NonPositiveLength { length: f64, depth: f64 },
    #[error("angle integers must be at least 1 (q = {q}, r = {r})")]
    InvalidAngleInteger { q: i64, r: i64 },
    #[error("q = r = 1 gives two right angles, which is not a triangular prism")]
    DegenerateBothHalfPi,
    #[error("index {0} must be nonnegative")]
    NegativeIndex(i64),
    #[error("edge-wave index m = {m} is out of range for angle integer {q}")]
    IndexOutOfRange { q: u32, m: u32 },
    #[error("tangent factor at multiple {multiple} of pi/(2*{q}) is at a pole")]
    TangentPole { q: u32, multiple: u32 },
    #[error("point ({x}, {y}) lies outside the sector")]
    OutsideSector { x: f64, y: f64 },
    #[error("point ({x}, {y}) lies outside the triangle")]
    OutsideTriangle { x: f64, y: f64 },
    #[error("argument {value} outside the domain [{lo}, {hi}]")]
    DomainError { value: f64, lo: f64, hi: f64 },
    #[error("sigma = {sigma} is not above the cutoff lambda_n = {cutoff}")]
    BelowCutoff { sigma: f64, cutoff: f64 },
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),
    #[error("quantization residual {residual:e} too large to define the matching constant")]
    QUndefined { residual: f64 },
    #[error("the wall lines do not meet below the sloshing side")]
    DegenerateTriangle,
    #[error("element {cell} has zero or negative area")]
    SingularElement { cell: usize },
    #[error("factorization failed at pivot {pivot}")]
    FactorizationFailure { pivot: usize },
    #[error("requested {requested} modes but only {available} sloshing unknowns exist")]
    InsufficientModes { requested: usize, available: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("mesh parse error: {0}")]
    MeshFormat(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
