//! Explicit finite categories, functors between them, and exhaustive
//! universal-property searches.

mod category;
mod functor;
mod natural;
mod universal;

pub use category::{
    CategoryViolation, Embedding, FinCategory, FinCategoryBuilder, Limits, MorId, MorphismRecord,
    ObjId, ValidationReport,
};
pub use functor::{FinFunctor, FunctorViolation};
pub use natural::{
    all_natural_transformations, diagram_isomorphic, find_natural_isomorphism,
    find_natural_transformation, is_natural, ComponentFilter,
};
pub use universal::{
    all_pullbacks, all_pushouts, find_pullback, find_pushout, is_pullback, is_pushout,
    pushout_mediator, squares_isomorphic_under_span, CommutativeSquare, PushoutSquare,
};

/// Runs the category axiom checks.
pub fn validate_category(c: &FinCategory) -> ValidationReport {
    c.validate()
}

/// True iff `f` has a two-sided inverse.
pub fn is_isomorphism(c: &FinCategory, f: MorId) -> crate::Result<bool> {
    c.is_isomorphism(f)
}
