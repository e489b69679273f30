use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("zero input")]
    ZeroInput,
    #[error("pole at point {0}")]
    Pole(String),
    #[error("reducible minimal polynomial {0}")]
    ReducibleField(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("cannot split {0} over the active field")]
    Unsplit(String),

    #[error("constant map")]
    ConstantMap,
    #[error("singular Möbius matrix")]
    SingularMobius,
    #[error("irregular singularity at {0}")]
    Irregular(String),
    #[error("exponent outside field at {0}")]
    ExponentOutsideField(String),

    #[error("not coprime")]
    NotCoprime,
    #[error("degree condition violated (apply Möbius first): N = {n}, M = {m}")]
    DegreeCondition { n: usize, m: usize },
    #[error("not Belyi: deg Λ = {lambda_deg} ≠ {expected}")]
    NotBelyi { lambda_deg: usize, expected: usize },
    #[error("not Heun-compatible")]
    NotHeunCompatible,
    #[error("invalid cycle type: {0}")]
    CycleType(String),

    #[error("wrong singularity count: {0}")]
    WrongSingularCount(usize),
    #[error("apparent singularity present at {0}")]
    ApparentSingularity(String),
    #[error("not Lamé: θᵢ ≠ 1/2")]
    NotLame,
    #[error("degenerate cubic: repeated root")]
    DegenerateCubic,
    #[error("inconsistent series: {0}")]
    InconsistentSeries(String),
    #[error("resonance at order {0}")]
    Resonance(usize),
    #[error("invalid Heun parameters: {0}")]
    InvalidHeun(String),

    #[error("no convergence after {0} terms")]
    NoConvergence(usize),
    #[error("gamma pole: γ is a nonpositive integer")]
    GammaPole,
    #[error("point too close to singularity: {0}")]
    TooCloseToSingularity(String),
    #[error("point outside convergence disk: {0}")]
    OutsideDisk(String),

    #[error("fixture error: {0}")]
    Fixture(String),
}
