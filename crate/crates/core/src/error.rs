use thiserror::Error;

use crate::fincat::{MorId, ObjId};

/// Errors raised on malformed input or broken preconditions.
///
/// Axiom violations found by the validators are reported as data
/// (see the various `*Report` types), never through this enum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object id {0}")]
    UnknownObject(ObjId),
    #[error("unknown morphism id {0}")]
    UnknownMorphism(MorId),
    #[error("category exceeds cap: {what} = {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("ill-typed composition entry {g} . {f} = {h}: {reason}")]
    IllTypedComposition {
        g: MorId,
        f: MorId,
        h: MorId,
        reason: &'static str,
    },
    #[error("identity for object {0} is missing or ill-typed")]
    BadIdentity(ObjId),
    #[error("morphisms {0} and {1} do not share a source")]
    SourceMismatch(MorId, MorId),
    #[error("morphisms {0} and {1} do not share a target")]
    TargetMismatch(MorId, MorId),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polygon level {0} is below 2")]
    LevelTooSmall(usize),
    #[error("level {level} exceeds truncation {truncation}")]
    LevelOverflow { level: usize, truncation: usize },
    #[error("not a triangulation: {0}")]
    NotATriangulation(String),
    #[error("vertex {vertex} is out of range for P_{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("map is not order-preserving: {0:?}")]
    NotOrderPreserving(Vec<usize>),
    #[error("morphism {0} is not a cofibration")]
    NotACofibration(MorId),
    #[error("missing pushout of {cofibration} along {along}")]
    MissingPushout { cofibration: MorId, along: MorId },
    #[error("bounded mode needs a size rank on every object (object {0} has none)")]
    MissingRank(ObjId),
    #[error("seed violates the generated-subcategory hypothesis: {0}")]
    BadSeed(String),
    #[error("not a subcategory of the ambient category: {0}")]
    NotASubcategory(String),
    #[error("enumeration budget of {0} items exceeded")]
    BudgetExceeded(usize),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
