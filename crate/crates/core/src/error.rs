use thiserror::Error;

/// Errors across the toolkit. Budget exhaustion is an error variant rather
/// than a silent wrong answer: callers decide whether "inconclusive" is
/// acceptable.
#[derive(Debug, Error)]
pub enum CoxError {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("unknown generator token {0:?}")]
    UnknownGenerator(String),

    #[error("word uses a generator outside this system")]
    MixedSystems,

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("operation needs an element of infinite order: {0}")]
    FiniteOrderPrecondition(String),

    #[error("operation needs a standard element (trivial closure conjugator), got conjugator {0:?}")]
    NotStandard(String),

    #[error("closure step matched neither alternative for w={w:?}, s={s:?}")]
    ClosureStepUndecided { w: String, s: String },

    #[error("subset enumeration too large: {0} free generators (cap 20)")]
    OvergroupBound(usize),

    #[error("building instance requires a right-angled system (all bonds 2 or infinite)")]
    NotRightAngled,

    #[error("thickness must be at least 2 for every generator, got {0} for {1}")]
    BadThickness(u32, String),

    #[error("residue of type {0} is infinite; supply an enumeration radius")]
    InfiniteResidue(String),

    #[error("projection is not unique on this input (space violates building axioms)")]
    NonUniqueProjection,

    #[error("retraction center {0} is not a chamber of the apartment")]
    ChamberOutsideApartment(String),

    #[error("pattern word must be reduced and cyclically reduced")]
    PatternNotReduced,

    #[error("axis construction needs a rank-one element, got {0}")]
    NotRankOneElement(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("element is not in the commutator subgroup (nontrivial abelianization image)")]
    NotInCommutatorSubgroup,

    #[error("defect is zero but the homogenization is nonzero; f is a homomorphism, scl bound undefined")]
    ZeroDefect,

    #[error("word length budget exceeded: power would have length {0}, cap {1}")]
    WordLengthBudget(usize, usize),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoxError>;
