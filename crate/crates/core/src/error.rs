use thiserror::Error;

/// Errors raised by the library.
///
/// Failures of a bound check are not errors: they are reported as
/// [`Verdict::Undecidable`](crate::report::Verdict) entries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("minimal polynomial must be monic of degree at least 1")]
    BadMinimalPolynomial,
    #[error("integral basis matrix is singular")]
    BasisSingular,
    #[error("integral basis is not closed under multiplication: {0}")]
    BasisNotIntegral(String),
    #[error("invalid automorphism #{index}: {reason}")]
    AutomorphismInvalid { index: usize, reason: String },
    #[error("root isolation failed at {bits} bits")]
    IsolationFailed { bits: u32 },
    #[error("not divisible")]
    NotDivisible,
    #[error("element is not integral")]
    NotIntegral,
    #[error("linear congruence has no solution")]
    NoSolution,
    #[error("elements are not coprime (lattice index {index})")]
    NotCoprime { index: String },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("division by a series that vanishes modulo t^N")]
    ZeroDivisor,
    #[error("constant term is not a unit")]
    NotUnit,
    #[error("matrix is not congruent to the identity modulo t")]
    NotNearIdentity,
    #[error("determinant vanishes modulo t^N")]
    SingularModTN,
    #[error("no root of unity of order {0} in the field")]
    NoRootOfUnity(u32),
    #[error("valuation condition failed: v(p_1) = {e} but v(p_{index}) = {other}")]
    ValuationConditionFailed { e: usize, index: usize, other: String },
    #[error("constant term of p_0 is non-zero after normalization")]
    ConstantTermNonzero,
    #[error("polynomial is not normalized: {0}")]
    NotNormalized(String),
    #[error("group axiom violated: {0}")]
    GroupAxiom(String),
    #[error("action is not by automorphisms: {0}")]
    NotAutomorphismAction(String),
    #[error("generator listing is not a bijection onto H")]
    ListingNotBijective,
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("index set J is empty")]
    EmptyJ,
    #[error("a_1 is not fixed by the Galois group")]
    A1NotRational,
    #[error("computation cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
