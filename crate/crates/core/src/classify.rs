//! Variation-point classification.

use std::fmt;

use thiserror::Error;

use crate::model::{path, Model, RelKind, Tag, TagSet, Timing};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VpKind {
    VariableMethod {
        class: String,
        method: String,
    },
    ExtensibleClass {
        class: String,
    },
    /// The locus is the `{incomplete}` relationship at `index`.
    ExtensibleInterface {
        index: usize,
        relation: RelKind,
        child: String,
        parent: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariationPoint {
    pub kind: VpKind,
    pub timing: Timing,
}

impl VariationPoint {
    pub fn path(&self, model: &str) -> String {
        match &self.kind {
            VpKind::VariableMethod { class, method } => path::member(model, class, method),
            VpKind::ExtensibleClass { class } => path::class(model, class),
            VpKind::ExtensibleInterface { index, .. } => path::relationship(model, *index),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            VpKind::VariableMethod { .. } => "variable-method",
            VpKind::ExtensibleClass { .. } => "extensible-class",
            VpKind::ExtensibleInterface { .. } => "extensible-interface",
        }
    }

    /// The class name the point lives on (parent class for interfaces).
    pub fn class(&self) -> &str {
        match &self.kind {
            VpKind::VariableMethod { class, .. } | VpKind::ExtensibleClass { class } => class,
            VpKind::ExtensibleInterface { parent, .. } => parent,
        }
    }
}

impl fmt::Display for VariationPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            VpKind::VariableMethod { class, method } => {
                write!(f, "variable-method {class}.{method} {}", self.timing)
            }
            VpKind::ExtensibleClass { class } => {
                write!(f, "extensible-class {class} {}", self.timing)
            }
            VpKind::ExtensibleInterface {
                index,
                relation,
                child,
                parent,
            } => write!(
                f,
                "extensible-interface {parent} ({relation} {child} -> {parent}, rel[{index}]) {}",
                self.timing
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("variation point {path} carries neither {{static}} nor {{dynamic}}")]
    MissingTiming { path: String },
    #[error("variation point {path} carries both {{static}} and {{dynamic}}")]
    ConflictingTiming { path: String },
}

fn timing_of(tags: &TagSet, path: String) -> Result<Timing, ClassifyError> {
    match (tags.contains(Tag::Static), tags.contains(Tag::Dynamic)) {
        (true, false) => Ok(Timing::Static),
        (false, true) => Ok(Timing::Dynamic),
        (false, false) => Err(ClassifyError::MissingTiming { path }),
        (true, true) => Err(ClassifyError::ConflictingTiming { path }),
    }
}

/// Lists variable methods, then extensible classes, then extensible
/// interfaces; each group in declaration order.
pub fn classify_variation_points(model: &Model) -> Result<Vec<VariationPoint>, ClassifyError> {
    let mut out = Vec::new();
    for class in &model.classes {
        for method in class
            .methods
            .iter()
            .filter(|m| m.tags.contains(Tag::Variable))
        {
            let timing = timing_of(
                &method.tags,
                path::member(&model.name, &class.name, &method.name),
            )?;
            out.push(VariationPoint {
                kind: VpKind::VariableMethod {
                    class: class.name.clone(),
                    method: method.name.clone(),
                },
                timing,
            });
        }
    }
    for class in model
        .classes
        .iter()
        .filter(|c| c.tags.contains(Tag::Extensible))
    {
        let timing = timing_of(&class.tags, path::class(&model.name, &class.name))?;
        out.push(VariationPoint {
            kind: VpKind::ExtensibleClass {
                class: class.name.clone(),
            },
            timing,
        });
    }
    for (index, rel) in model.relationships.iter().enumerate() {
        if rel.is_incomplete() {
            let timing = timing_of(&rel.tags, path::relationship(&model.name, index))?;
            out.push(VariationPoint {
                kind: VpKind::ExtensibleInterface {
                    index,
                    relation: rel.kind,
                    child: rel.source.clone(),
                    parent: rel.target.clone(),
                },
                timing,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassDecl, MethodDecl, Relationship};

    #[test]
    fn empty_model_has_no_points() {
        assert!(classify_variation_points(&Model::new("M"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn missing_and_conflicting_timing_raise() {
        let mut m = Model::new("M");
        let mut c = ClassDecl::new("C");
        let mut meth = MethodDecl::new("run");
        meth.tags.insert(Tag::Variable);
        c.methods.push(meth);
        m.classes.push(c);
        assert_eq!(
            classify_variation_points(&m),
            Err(ClassifyError::MissingTiming {
                path: "M.C.run".into()
            })
        );
        let meth = &mut m.classes[0].methods[0];
        meth.tags.insert(Tag::Static);
        meth.tags.insert(Tag::Dynamic);
        assert!(matches!(
            classify_variation_points(&m),
            Err(ClassifyError::ConflictingTiming { .. })
        ));
    }

    #[test]
    fn incomplete_aggregation_is_not_an_interface_point() {
        let mut m = Model::new("M");
        m.classes.extend([ClassDecl::new("A"), ClassDecl::new("B")]);
        let mut r = Relationship::new(RelKind::Aggregation, "A", "B");
        r.tags.insert(Tag::Incomplete);
        m.relationships.push(r);
        assert!(classify_variation_points(&m).unwrap().is_empty());
    }
}
