use thiserror::Error;

/// All failure modes of the pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("zero vector: all coordinates negligible at the working scale")]
    ZeroVector,
    #[error("root finder failed to converge within the iteration cap")]
    NoConvergence,
    #[error("fit is rank deficient: second-smallest singular value {0:.3e} below tolerance")]
    RankDeficient(f64),
    #[error("quartic is not smooth: singular point detected")]
    NotSmooth,
    #[error("bitangent count mismatch: found {0} certified lines, expected 28")]
    CountMismatch(usize),
    #[error("tuple count mismatch: detected {0} twelve-tuples, expected 63")]
    TupleCountMismatch(usize),
    #[error("a fitted cubic contains more than 12 of the 28 points")]
    ExcessIncidence,
    #[error("combinatorial structure inconsistent with the level-2 model: {0}")]
    InconsistentStructure(String),
    #[error("pairing hypothesis rejected: {0}")]
    InconsistentPairing(String),
    #[error("pair statistic fails to separate pairs from non-pairs")]
    PairingAmbiguous,
    #[error("chord construction degenerate: point and its translate coincide")]
    DegenerateChord,
    #[error("degenerate configuration (reducible or nodal tuple cubic): {0}")]
    DegenerateConfiguration(String),
    #[error("tangent/third-intersection extraction degenerate")]
    TangentFailure,
    #[error("chord pullback did not select a unique pair: {0}")]
    PullbackAmbiguity(String),
    #[error("input lines violate general position: {0}")]
    GeneralPositionFailure(String),
    #[error("the 7 lines are not an Aronhold system of a common smooth quartic: {0}")]
    NotAronhold(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
