use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    InvalidMatrix,
    #[error("spectrum is not strictly ordered with unit trace: ({0}, {1}, {2})")]
    InvalidSpectrum(f64, f64, f64),
    #[error("vector is not unit length: |n| = {0}")]
    InvalidUnitVector(f64),
    #[error("matrix is not a rotation")]
    InvalidRotation,
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("eigenvalue ordering violated: s1 <= t1 <= t2 <= t3 <= s3 fails")]
    OrderingError,
    #[error("lambda = {0} is not admissible (negative square {1})")]
    NotAdmissible(f64, f64),
    #[error("lambda = 1 carries no rank-one connection")]
    DegenerateLambda,
    #[error("eigenvalue matching failed, max deviation {0}")]
    ConnectionFailure(f64),
    #[error("denominator {0} below threshold in F")]
    SingularDenominator(f64),
    #[error("curve solve failed to bracket at driving coordinate {0}")]
    CurveSolveFailure(f64),
    #[error("z = {0} lies outside [s1, s3]")]
    ZOutOfRange(f64),
    #[error("branch equation violated: |z1 - z2| = {0}")]
    NotOnT2Curve(f64),
    #[error("uniaxial input: repeated eigenvalues")]
    UniaxialInput,
    #[error("barycenter is off the lamination segment, residual {0}")]
    NotOnSegment(f64),
    #[error("barycenter weight p = {0} is degenerate")]
    DegenerateBarycenter(f64),
    #[error("difference is not rank one, second singular value {0}")]
    NotRankOne(f64),
    #[error("atom is not the stated convex combination, residual {0}")]
    NotConvexCombination(f64),
    #[error("lamination drifted at generation {0}: {1}")]
    ConstructionDrift(u32, Box<Error>),
    #[error("boundary arcs fail to meet, gap {0}")]
    BoundaryGap(f64),
    #[error("no chord endpoints found for the witness line")]
    WitnessFailure,
    #[error("sampled comparison point ({0}, {1}, {2}) escapes the region")]
    InclusionViolation(f64, f64, f64),
    #[error("closed-form identity residual {0} exceeds tolerance")]
    IdentityFailure(f64),
    #[error("cubic root bracket has no sign change")]
    RootBracketFailure,
    #[error("Tr S = {0} inconsistent with the cubic for theta")]
    ThetaInconsistent(f64),
    #[error("eigenvalue {0} outside [s1, s3]")]
    OutOfKStarRange(f64),
    #[error("|cos| = {0} exceeds 1 in angle recovery")]
    AngleOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
