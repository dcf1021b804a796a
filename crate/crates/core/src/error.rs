use thiserror::Error;

/// Errors raised by the exact geometry and optimization routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative radicand {0}")]
    InvalidRadicand(String),
    #[error("quadratic extensions sqrt({0}) and sqrt({1}) cannot be combined")]
    MixedRadicands(String, String),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("sphere pair is degenerate (identical centers)")]
    DegeneratePair,
    #[error("inversion center lies on the object")]
    CenterOnObject,
    #[error("input contains coincident circles")]
    CoincidentInput,
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point does not lie on the double-sphere")]
    NotOnVariety,
    #[error("tangent bases are taken at different basepoints")]
    MixedBasepoints,
    #[error("tangent bases must have pairwise distinct centers")]
    MixedCenters,
    #[error("circle lies in a vertical plane")]
    VerticalCircle,
    #[error("slope lift has a pole (x2-extremal point)")]
    PoleAtExtremal,
    #[error("lens points lie on different half-ellipses of a projection")]
    SplitByExtremal,
    #[error("value {0} is outside the admissible range")]
    OutOfRange(String),
    #[error("tight term set mismatch: {0}")]
    TightSetMismatch(String),
    #[error("locus circle of radius^2 {0} has no rational points")]
    NonRationalLocus(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
