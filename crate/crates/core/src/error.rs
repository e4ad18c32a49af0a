use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed group: {0}")]
    Malformed(String),

    #[error("not a Latin square: {0}")]
    NotLatinSquare(String),

    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),

    #[error("group order {found} exceeds the limit {limit}")]
    OrderExceeded { found: usize, limit: usize },

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("order mismatch: character has order {character}, action has order {action}")]
    OrderMismatch { character: u32, action: u32 },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("quotient is not cyclic")]
    NotCyclic,

    #[error("star condition fails: χ(auts[{k}]({element})) ≠ χ({element})")]
    StarFails { element: usize, k: usize },

    #[error("given elements do not generate the group ({reached} of {order} reached)")]
    NotGenerating { reached: usize, order: usize },

    #[error("homomorphism violated at ({0}, {1}), residual {2:.3e}")]
    Homomorphism(usize, usize, f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("representations live on different groups")]
    GroupMismatch,

    #[error("no intertwiner exists: {0}")]
    NoIntertwiner(String),

    #[error("representation is not irreducible")]
    NotIrreducible,

    #[error("Schur scalar check failed, residual {0:.3e}")]
    NotScalar(f64),

    #[error("block scalars disagree: {0}")]
    ScalarMismatch(String),

    #[error("orbit structure violated: {0}")]
    OrbitStructure(String),

    #[error("representation is not invariant under the quotient action: {0}")]
    NotInvariant(String),

    #[error("eigenvalue clustering ambiguous after {0} attempts")]
    Ambiguous(usize),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}
