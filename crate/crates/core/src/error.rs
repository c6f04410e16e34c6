use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime below 256")]
    NotPrime(u32),
    #[error("extension degree must be positive, got {0}")]
    BadDegree(u32),
    #[error("field of order {p}^{e} exceeds the supported size")]
    TooLarge { p: u32, e: u32 },
    #[error("defining polynomial is not the canonical one for this field")]
    NonCanonicalModulus,
    #[error("no field embedding between the given fields")]
    NoEmbedding,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram text: {0}")]
    MalformedText(String),
    #[error("partition is not weakly decreasing: {0:?}")]
    NotWeaklyDecreasing(Vec<u32>),
    #[error("mu must satisfy mu_i < lambda_i in every position (position {0})")]
    MuNotStrictlyBelowLambda(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("diagram does not fit alpha_{p}({r},{s})")]
    InvalidDiagramForParams { p: u16, r: u32, s: u32 },
    #[error("column of dimension {dim} exceeds the bound {bound}")]
    ColumnTooTall { dim: u64, bound: u64 },
    #[error("modules are defined over different algebras or fields")]
    ParamsMismatch,
    #[error("action matrices do not respect the grading")]
    NotGraded,
    #[error("module invariant violated: {0}")]
    InvariantViolation(String),
    #[error("bad module data: {0}")]
    BadData(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("no split found and no certificate produced after {0} samples")]
    BudgetExhausted(usize),
    #[error("radical computation failed: {0}")]
    RadicalAlgorithmFailure(String),
    #[error("splitting needs F_{p}^{needed}, above the extension cap {cap}")]
    ExtensionCapExceeded { p: u32, needed: u32, cap: u32 },
    #[error("module of dimension {dim} is above the size cap {cap}")]
    SizeCapExceeded { dim: usize, cap: usize },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomSolverError {
    #[error("module is not cyclic")]
    NotCyclic,
    #[error("module is not generated in degree (0,0)")]
    NotGeneratedAtOrigin,
    #[error("coefficients do not solve the hom system")]
    CoeffsNotASolution,
    #[error("column heights are not all 0 or {h} modulo {modulus}")]
    ColumnResidueViolation { h: u64, modulus: u64 },
    #[error("precondition failed: {0}")]
    PreconditionViolation(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemisError {
    #[error("objects {0} and {1} are isomorphic")]
    DuplicateObject(String, String),
    #[error("object {0} is negligible or decomposable")]
    NotSimple(String),
    #[error("non-negligible summand of dimension {dim} in {left} x {right} matches no listed object")]
    UnmatchedNonNegligibleSummand { left: String, right: String, dim: usize },
    #[error("closure did not stabilise within {0} objects")]
    ClosureCapExceeded(usize),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}
