use alloc::string::String;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("index out of domain: {0}")]
    IndexOutOfDomain(String),
    #[error("ambiguous rules for the pair {0}")]
    AmbiguousRule(String),
    #[error("overlapping rules for the pair {0}")]
    Overlap(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("integer overflow while evaluating {0}")]
    Overflow(String),
    #[error("invalid weighting: {0}")]
    InvalidWeighting(String),
    #[error("weight window is not finite for generator `{0}`")]
    WindowUnbounded(String),
    #[error("layer {0} cannot be filled by brackets of lower layers")]
    LayerDeficient(usize),
    #[error("derivations come from different quotients")]
    MixedQuotients,
    #[error("torus was computed on a different window: {0}")]
    WindowMismatch(String),
    #[error("Jacobi identity fails: {0}")]
    JacobiFailure(String),
    #[error("complement acts nilpotently on the generators: {0}")]
    RadicalViolation(String),
    #[error("codimension {codim} exceeds dim N/N^2 = {bound}")]
    CodimBound { codim: usize, bound: usize },
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("not alternating: {0}")]
    NotAlternating(String),
    #[error("product leaves the monomial cone: {0}")]
    DomainEscape(String),
    #[error("exponential series does not terminate on the quotient")]
    NonTerminating,
    #[error("unsupported: {0}")]
    Unsupported(String),
}
