//! Implementation models: structure-preserving rewrites that turn variable
//! methods and extensible classes into extensible interfaces.
//!
//! | model       | applies to                                      |
//! |-------------|-------------------------------------------------|
//! | strategy    | dynamic variable methods                        |
//! | unification | static variable methods, static extensible classes |
//! | hook-list   | dynamic extensible classes                      |
//! | mop         | dynamic variable methods                        |

use std::fmt;

use thiserror::Error;

use crate::classify::{classify_variation_points, ClassifyError, VariationPoint, VpKind};
use crate::diagnostic::{self, Diagnostic};
use crate::model::{Model, Timing};
use crate::validate;

mod bindings;
mod rewrites;

pub use bindings::{parse_bindings, print_bindings};
pub use rewrites::{apply_hook_list, apply_mop, apply_strategy, apply_unification};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    Strategy,
    Unification,
    HookList,
    Mop,
}

impl ModelId {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Strategy => "strategy",
            ModelId::Unification => "unification",
            ModelId::HookList => "hook-list",
            ModelId::Mop => "mop",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        catalog().iter().map(|m| m.id).find(|id| id.as_str() == s)
    }

    pub fn descriptor(self) -> &'static ImplementationModel {
        catalog()
            .iter()
            .find(|m| m.id == self)
            .expect("catalog covers every id")
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    VariableMethod,
    ExtensibleClass,
    ExtensibleInterface,
}

impl PointKind {
    pub fn of(vp: &VariationPoint) -> Self {
        match vp.kind {
            VpKind::VariableMethod { .. } => PointKind::VariableMethod,
            VpKind::ExtensibleClass { .. } => PointKind::ExtensibleClass,
            VpKind::ExtensibleInterface { .. } => PointKind::ExtensibleInterface,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    MethodName,
    DescribedFlags,
}

#[derive(Debug)]
pub struct ImplementationModel {
    pub id: ModelId,
    pub applies_to: &'static [(PointKind, Timing)],
    pub param_schema: &'static [(&'static str, ParamKind)],
}

impl ImplementationModel {
    pub fn applies(&self, vp: &VariationPoint) -> bool {
        self.applies_to.contains(&(PointKind::of(vp), vp.timing))
    }
}

static CATALOG: [ImplementationModel; 4] = [
    ImplementationModel {
        id: ModelId::Strategy,
        applies_to: &[(PointKind::VariableMethod, Timing::Dynamic)],
        param_schema: &[],
    },
    ImplementationModel {
        id: ModelId::Unification,
        applies_to: &[
            (PointKind::VariableMethod, Timing::Static),
            (PointKind::ExtensibleClass, Timing::Static),
        ],
        param_schema: &[],
    },
    ImplementationModel {
        id: ModelId::HookList,
        applies_to: &[(PointKind::ExtensibleClass, Timing::Dynamic)],
        param_schema: &[("before", ParamKind::MethodName)],
    },
    ImplementationModel {
        id: ModelId::Mop,
        applies_to: &[(PointKind::VariableMethod, Timing::Dynamic)],
        param_schema: &[("params", ParamKind::DescribedFlags)],
    },
];

pub fn catalog() -> &'static [ImplementationModel] {
    &CATALOG
}

/// A Boolean MOP parameter and what setting it means.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MopParam {
    pub name: String,
    pub description: Option<String>,
}

impl MopParam {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            description: None,
        }
    }

    pub fn described(name: impl Into<String>, description: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            description: Some(description.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rewrite {
    Strategy,
    Unification,
    HookList { before: String },
    Mop { params: Vec<MopParam> },
}

impl Rewrite {
    pub fn id(&self) -> ModelId {
        match self {
            Rewrite::Strategy => ModelId::Strategy,
            Rewrite::Unification => ModelId::Unification,
            Rewrite::HookList { .. } => ModelId::HookList,
            Rewrite::Mop { .. } => ModelId::Mop,
        }
    }
}

/// What a binding names: `Class.method` or `Class`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Locus {
    pub class: String,
    pub method: Option<String>,
}

impl Locus {
    pub fn method(class: impl Into<String>, method: impl Into<String>) -> Self {
        Self {
            class: class.into(),
            method: Some(method.into()),
        }
    }

    pub fn class(class: impl Into<String>) -> Self {
        Self {
            class: class.into(),
            method: None,
        }
    }

    pub fn matches(&self, vp: &VariationPoint) -> bool {
        match (&vp.kind, &self.method) {
            (VpKind::VariableMethod { class, method }, Some(m)) => {
                *class == self.class && method == m
            }
            (VpKind::ExtensibleClass { class }, None) => *class == self.class,
            _ => false,
        }
    }
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.method {
            Some(m) => write!(f, "{}.{m}", self.class),
            None => f.write_str(&self.class),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub locus: Locus,
    pub rewrite: Rewrite,
}

impl Binding {
    pub fn new(locus: Locus, rewrite: Rewrite) -> Self {
        Self { locus, rewrite }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input model has validation errors:\n{}", diagnostic::render(.0).trim_end())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("`{0}` already exists")]
    NameCollision(String),
    #[error("{model} does not apply to {kind} {locus} ({timing})")]
    Inapplicable {
        locus: String,
        model: ModelId,
        kind: &'static str,
        timing: Timing,
    },
    #[error("{0} is not a variable method or extensible class")]
    UnknownLocus(String),
    #[error("{0} is bound more than once")]
    DuplicateBinding(String),
    #[error("no binding for variation point {0}")]
    Uncovered(String),
    #[error("hook-list invocation point `{method}` is not a method of {class}")]
    UnresolvedBefore { class: String, method: String },
    #[error("mop needs at least one parameter")]
    EmptyParams,
    #[error("duplicate mop parameter `{0}`")]
    DuplicateParam(String),
    #[error("{class} already has an aggregation with reserved role `{role}`")]
    ReservedRole { class: String, role: String },
    #[error("{class} is already an extension point with {existing} timing")]
    ConflictingExtensionPoint { class: String, existing: Timing },
    #[error("rewrite produced an invalid model:\n{}", diagnostic::render(.0).trim_end())]
    Postcondition(Vec<Diagnostic>),
}

/// Applies every binding, in classification order of their loci, and
/// checks that the result has only extensible-interface variation points.
/// Reserved roles are checked here against the input; one class may end up
/// with several `strategy` or `mop` aggregations of its own making.
pub fn transform_all(model: &Model, bindings: &[Binding]) -> Result<Model, TransformError> {
    let diags = validate(model);
    if diagnostic::has_errors(&diags) {
        return Err(TransformError::Invalid(
            diags.into_iter().filter(Diagnostic::is_error).collect(),
        ));
    }
    let points = classify_variation_points(model)?;

    let mut plan: Vec<(usize, &Binding)> = Vec::new();
    for b in bindings {
        let at = points
            .iter()
            .position(|vp| b.locus.matches(vp))
            .ok_or_else(|| TransformError::UnknownLocus(b.locus.to_string()))?;
        if plan.iter().any(|(i, _)| *i == at) {
            return Err(TransformError::DuplicateBinding(b.locus.to_string()));
        }
        let vp = &points[at];
        if !b.rewrite.id().descriptor().applies(vp) {
            return Err(TransformError::Inapplicable {
                locus: b.locus.to_string(),
                model: b.rewrite.id(),
                kind: vp.kind_name(),
                timing: vp.timing,
            });
        }
        plan.push((at, b));
    }
    for (i, vp) in points.iter().enumerate() {
        let eliminable = !matches!(vp.kind, VpKind::ExtensibleInterface { .. });
        if eliminable && !plan.iter().any(|(at, _)| *at == i) {
            return Err(TransformError::Uncovered(vp.path(&model.name)));
        }
    }
    for (at, b) in &plan {
        let role = match b.rewrite {
            Rewrite::Strategy => "strategy",
            Rewrite::HookList { .. } => "hooks",
            Rewrite::Mop { .. } => "mop",
            Rewrite::Unification => continue,
        };
        let class = points[*at].class();
        let taken = model
            .relationships
            .iter()
            .any(|r| r.source == class && r.has_role(role));
        if taken {
            return Err(TransformError::ReservedRole {
                class: class.to_string(),
                role: role.to_string(),
            });
        }
    }
    plan.sort_by_key(|(at, _)| *at);

    let mut out = model.clone();
    for (at, b) in plan {
        let vp = &points[at];
        out = match &b.rewrite {
            Rewrite::Strategy => apply_strategy(&out, vp)?,
            Rewrite::Unification => apply_unification(&out, vp)?,
            Rewrite::HookList { before } => apply_hook_list(&out, vp, before)?,
            Rewrite::Mop { params } => apply_mop(&out, vp, params)?,
        };
    }

    let post = validate(&out);
    if diagnostic::has_errors(&post) {
        return Err(TransformError::Postcondition(
            post.into_iter().filter(Diagnostic::is_error).collect(),
        ));
    }
    Ok(out)
}
