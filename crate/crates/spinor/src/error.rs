use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unsupported class-group dimension {0}")]
    Dimension(u32),
    #[error("malformed field model: {0}")]
    Malformed(String),
    #[error("unknown square-class label `{0}`")]
    UnknownLabel(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("element is zero to working precision {precision}")]
    IndeterminateAtPrecision { precision: u32 },
    #[error("precision {have} is below the required {needed}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("unsupported extension: {0}")]
    UnsupportedExtension(String),
    #[error("cannot parse field element `{0}`")]
    Parse(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which defining inequality of a good BONG failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BongCondition {
    UnitParity,
    Goodness,
    TwoE,
    Defect,
}

impl std::fmt::Display for BongCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BongCondition::UnitParity => "unit part has odd order",
            BongCondition::Goodness => "R_i <= R_{i+2}",
            BongCondition::TwoE => "R_{i+1}-R_i+2e >= 0",
            BongCondition::Defect => "R_{i+1}-R_i+d(-a_i a_{i+1}) >= 0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("not a good BONG at index {index}: {condition}")]
    BadBong { index: usize, condition: BongCondition },
    #[error("ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("transform index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("eta is not in g(a_{{i+1}}/a_i) at index {0}")]
    EtaNotInG(usize),
    #[error("eta must be a unit class")]
    EtaNotUnit,
    #[error("lattice does not have property A")]
    NotPropertyA,
    #[error("(a, R) is not in A")]
    NotInA,
    #[error("order {0} has the wrong parity for the class")]
    ParityMismatch(i64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(&'static str),
    #[error("lattices live over different field models")]
    ModelMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("inconsistent pair: {0}")]
    InconsistentPair(String),
    #[error("recursion depth bound {0} exceeded")]
    DepthExceeded(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("a {sub}-dimensional space cannot embed in a {ambient}-dimensional one")]
    Dimension { sub: usize, ambient: usize },
    #[error("no {dim}-dimensional space with Hasse invariant {hasse} and this determinant")]
    NoSuchSpace { dim: usize, hasse: i8 },
}
