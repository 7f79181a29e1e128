//! Crate-wide error type.

use crate::projective::ProjPoint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    // ---- field construction ----
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension exponent must be positive")]
    ZeroExponent,
    #[error("field size q^2 = {0} exceeds the table cap 2^20")]
    FieldTooLarge(u128),
    #[error("defining polynomial must be monic of degree {expected}, got degree {got}")]
    BadPolynomialDegree { expected: usize, got: usize },
    #[error("defining polynomial is reducible over GF({p})")]
    ReduciblePolynomial { p: u64 },

    // ---- field arithmetic ----
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("element index {idx} out of range for a field of {order} elements")]
    ElementOutOfRange { idx: u64, order: u64 },
    #[error("coefficient vector has wrong length: expected {expected}, got {got}")]
    BadCoefficientVector { expected: usize, got: usize },
    #[error("element is not in the subfield GF(q)")]
    NotInSubfield,
    #[error("norm equation N(x) = a has no solution for a = 0")]
    NormOfZero,

    // ---- projective ----
    #[error("the zero vector does not represent a projective point")]
    ZeroVector,
    #[error("Baer subline requires three distinct collinear points")]
    SublineBadInput,
    #[error("point set contains a duplicate point")]
    DuplicatePoint,

    // ---- hermitian ----
    #[error("point is not on the Hermitian surface")]
    NotOnSurface,
    #[error("line point has no collinear partner in the set")]
    NoCollinearPartner { line_point: ProjPoint },
    #[error("line point has more than one collinear partner in the set")]
    AmbiguousCollinearPartner {
        line_point: ProjPoint,
        first: ProjPoint,
        second: ProjPoint,
    },
    #[error("correspondence is not injective: two line points share a partner")]
    NotInjective { partner: ProjPoint },

    // ---- invariants ----
    #[error("Segre invariant undefined: a pair of the triple is collinear")]
    CollinearPair,
    #[error("parameters t1 and t2 must be distinct")]
    EqualParameters,
    #[error("parameter must lie in the subfield GF(q)")]
    ParameterNotInSubfield,

    // ---- constructions ----
    #[error("x does not satisfy x + x^q = 2 x^(q+1)")]
    BadStandardFormParameter,
    #[error("omega must satisfy N(omega) = -1")]
    BadOmega,
    #[error("function table must satisfy f(0) = 0")]
    NonzeroAtZero,
    #[error("no admissible parameters found by exhaustive scan")]
    NoParametersFound,

    // ---- group ----
    #[error("matrix does not preserve the Hermitian form up to a scalar")]
    NotUnitary,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("points must be noncollinear on the surface")]
    CollinearInput,
    #[error("triple is not in perspective")]
    NotInPerspective,
    #[error("set contains no perspective triple")]
    NoPerspectiveTriple,
    #[error("set has the wrong cardinality: expected {expected}, got {got}")]
    WrongCardinality { expected: usize, got: usize },

    // ---- verify / search / cli ----
    #[error("unknown statement id: {0}")]
    UnknownStatement(String),
    #[error("q = {0} is not supported for this check")]
    UnsupportedQ(u64),
    #[error("invalid search configuration: {0}")]
    BadSearchConfig(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("serialization error: {0}")]
    Serialization(String),
    #[error("point does not belong to the enumerated surface")]
    NotInAmbient,
}
