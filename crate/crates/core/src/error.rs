use thiserror::Error;

/// Typed failures shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmfError {
    #[error("invalid weight {0}")]
    InvalidWeight(i64),
    #[error("series is not invertible (zero leading coefficient)")]
    NotInvertible,
    #[error("precision not certifiable: Im(tau) = {im} below floor {floor}")]
    PrecisionNotCertifiable { im: f64, floor: f64 },
    #[error("heterogeneous weight: {0} vs {1}")]
    HeterogeneousWeight(i64, i64),
    #[error("division by a form of positive depth")]
    DivisionByQuasi,
    #[error("division by zero")]
    DivisionByZero,
    #[error("inapplicable parameters: {0}")]
    Inapplicable(String),
    #[error("point lies on the branch cut")]
    BranchCut,
    #[error("Hurwitz zeta shift is a nonpositive integer")]
    ZetaShiftPole,
    #[error("growth contract violated: {0}")]
    Growth(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("partition error: {0}")]
    Partition(String),
    #[error("search degeneracy: {0}")]
    SearchDegeneracy(String),
    #[error("contour geometry infeasible: {0}")]
    Geometry(String),
    #[error("missing pole: {0}")]
    MissingPole(String),
    #[error("Im(alpha) equals t0 (case boundary)")]
    CaseBoundary,
    #[error("s is within the exclusion radius of a pole at {pole}; residue {residue_re} + {residue_im}i")]
    NearPole { pole: i64, residue_re: String, residue_im: String },
    #[error("{0} is not a pole of Lambda")]
    NotAPole(i64),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, QmfError>;
