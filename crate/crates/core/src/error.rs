use thiserror::Error;

use crate::arith::IntVec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("cone or polyhedron is not pointed")]
    NotPointed,

    #[error("semigroup is not normal")]
    NotNormal,

    #[error("dimension {dim} exceeds the supported bound {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("enumeration budget exceeded ({0} points)")]
    Budget(usize),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("constraint does not lie on any listed hyperplane (member {member}, constraint {constraint})")]
    UnknownHyperplane { member: usize, constraint: usize },

    #[error("inconsistent saturation data: {0}")]
    InconsistentSaturation(String),

    #[error("ideal parent is not a free monoid N^n")]
    NotFreeParent,

    #[error("ideal generator {0:?} is not in the parent semigroup")]
    IdealGeneratorOutside(IntVec),

    #[error("rule set has no strictly positive linear functional")]
    NoPositiveFunctional,

    #[error("position {0:?} has no move path to the endpoint set")]
    UnreachablePosition(IntVec),

    #[error("defeated positions are not an order ideal: {lower:?} precedes {upper:?}")]
    NotOrderIdeal { lower: IntVec, upper: IntVec },

    #[error("defeated position {0:?} is not a lattice point of the ambient polyhedron")]
    DefeatedOutsideBoard(IntVec),

    #[error("move set contains the zero vector")]
    ZeroMove,

    #[error("solved window too small: need threshold {needed}, have {available}")]
    InsufficientWindow { needed: i64, available: i64 },

    #[error("board is not a monoid: {0}")]
    NotMonoidBoard(String),

    #[error("operation is not well defined on classes: {0:?} and {1:?}")]
    IllDefined(IntVec, IntVec),

    #[error("quotient is not certified")]
    Uncertified,

    #[error("invalid monoid table: {0}")]
    InvalidMonoid(String),

    #[error("morphism is not well defined on the semigroup: {0:?}")]
    MorphismIllDefined(IntVec),

    #[error("element {0} is not in the monoid")]
    UnknownElement(usize),

    #[error("image semigroup is not pointed")]
    NonPointedImage,

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
