//! Toolkit for object-oriented frameworks whose variation points are
//! marked with Boolean tagged values.
//!
//! The pipeline is: [`dsl::parse`] a `.umlf` model, [`validate`] its tags,
//! rewrite variable methods and extensible classes into extensible
//! interfaces with [`transform::transform_all`], emit skeletons with
//! [`codegen::generate`], and finally [`instantiate::instantiate`] the
//! framework against an application's `.inst` spec.

pub mod classify;
pub mod codegen;
pub mod conformance;
pub mod diagnostic;
pub mod diff;
pub mod dsl;
pub mod instantiate;
pub mod model;
pub mod transform;
mod validate;

pub use classify::{classify_variation_points, ClassifyError, VariationPoint, VpKind};
pub use diagnostic::{Code, Diagnostic, Severity};
pub use diff::{element_paths, structural_diff, Change, DiffEntry, DiffReport};
pub use model::{
    AttributeDecl, ClassDecl, ClassKind, ClauseForm, ClauseScope, Event, MethodDecl, MethodRef,
    Model, Param, RelKind, Relationship, RestrictionClause, SequencePattern, Tag, TagSet, Timing,
    Visibility,
};
pub use validate::validate;
