//! Tag applicability and well-formedness rules (`UMLF-E001`..`UMLF-W002`).

use crate::diagnostic::{Code, Diagnostic};
use crate::model::{path, ClassDecl, ClauseForm, ClauseScope, Model, Tag, TagSet};

/// Checks `model` against the rule catalog. Output is sorted by element
/// path, then code.
pub fn validate(model: &Model) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let m = model.name.as_str();

    for class in &model.classes {
        let p = path::class(m, &class.name);
        misplaced(&mut out, &p, &class.tags, &[Tag::Variable, Tag::Incomplete]);
        timing(
            &mut out,
            &p,
            &class.tags,
            class.tags.contains(Tag::Extensible),
        );
        appl_class(&mut out, model, class, &p);
        if model.has_incomplete_child(&class.name) && class.abstract_methods().next().is_none() {
            out.push(Diagnostic::new(
                Code::W001,
                &p,
                format!(
                    "extensible interface {} declares no abstract methods",
                    class.name
                ),
            ));
        }

        for method in &class.methods {
            let mp = path::member(m, &class.name, &method.name);
            misplaced(
                &mut out,
                &mp,
                &method.tags,
                &[Tag::Extensible, Tag::Incomplete],
            );
            timing(
                &mut out,
                &mp,
                &method.tags,
                method.tags.contains(Tag::Variable),
            );
        }

        let open = class.tags.contains(Tag::Extensible) || is_extension_parent(model, class);
        for (i, clause) in class.constraints.iter().enumerate() {
            let cp = path::constraint(m, &class.name, i);
            if clause.scope == ClauseScope::ForAllNewMethods && !open {
                out.push(Diagnostic::new(
                    Code::E007,
                    &cp,
                    format!(
                        "for-all-new-methods clause on {}, which is neither extensible nor an extensible interface",
                        class.name
                    ),
                ));
            }
            if let ClauseForm::Preserves(attr) = &clause.form {
                let owner = clause.origin.as_deref().unwrap_or(&class.name);
                if !model.resolves_attribute(owner, attr) {
                    out.push(Diagnostic::new(
                        Code::E010,
                        &cp,
                        format!("preserves names `{attr}`, which {owner} does not declare"),
                    ));
                }
            }
        }
    }

    for (i, rel) in model.relationships.iter().enumerate() {
        let p = path::relationship(m, i);
        let mut forbidden = vec![Tag::Variable, Tag::Extensible];
        if !rel.kind.is_inheritance() {
            forbidden.push(Tag::Incomplete);
        }
        misplaced(&mut out, &p, &rel.tags, &forbidden);
        timing(&mut out, &p, &rel.tags, rel.is_incomplete());
    }

    for seq in &model.sequences {
        let on_variation_point = match model.class(&seq.owner.class) {
            Some(class) => match class.method(&seq.owner.method) {
                Some(method) => {
                    method.tags.contains(Tag::Variable)
                        || (method.is_abstract && is_extension_parent(model, class))
                        || is_mop(model, class)
                }
                None => false,
            },
            None => false,
        };
        if !on_variation_point {
            out.push(Diagnostic::new(
                Code::W002,
                path::sequence(m, &seq.name),
                format!(
                    "sequence {} constrains {}, which is not a variation point",
                    seq.name, seq.owner
                ),
            ));
        }
    }

    out.sort_by(|a, b| (&a.path, a.code).cmp(&(&b.path, b.code)));
    out
}

/// Extension parents stay so after instantiation completes them with
/// application classes.
fn is_extension_parent(model: &Model, class: &ClassDecl) -> bool {
    class.extension_point.is_some()
        || model.has_incomplete_child(&class.name)
        || model.relationships.iter().any(|r| {
            r.kind.is_inheritance()
                && r.target == class.name
                && model
                    .class(&r.source)
                    .is_some_and(|c| c.tags.contains(Tag::ApplClass))
        })
}

/// A MOP class fixes the admissible behaviors of the method it took over.
fn is_mop(model: &Model, class: &ClassDecl) -> bool {
    model
        .relationships
        .iter()
        .any(|r| r.target == class.name && r.has_role("mop"))
}

/// Reports `{variable}`, `{extensible}`, `{incomplete}` found in `forbidden`,
/// and `{optional}`, which no tag set may carry.
fn misplaced(out: &mut Vec<Diagnostic>, p: &str, tags: &TagSet, forbidden: &[Tag]) {
    for &tag in forbidden {
        if tags.contains(tag) {
            let code = match tag {
                Tag::Variable => Code::E001,
                Tag::Extensible => Code::E002,
                _ => Code::E003,
            };
            out.push(Diagnostic::new(
                code,
                p,
                format!("{{{tag}}} does not apply here"),
            ));
        }
    }
    if tags.contains(Tag::Optional) {
        out.push(Diagnostic::new(
            Code::E008,
            p,
            "{optional} applies only to sequence events",
        ));
    }
}

fn timing(out: &mut Vec<Diagnostic>, p: &str, tags: &TagSet, is_locus: bool) {
    let st = tags.contains(Tag::Static);
    let dy = tags.contains(Tag::Dynamic);
    if is_locus {
        if !st && !dy {
            out.push(Diagnostic::new(
                Code::E004,
                p,
                "variation point needs {static} or {dynamic}",
            ));
        } else if st && dy {
            out.push(Diagnostic::new(
                Code::E005,
                p,
                "variation point carries both {static} and {dynamic}",
            ));
        }
    } else if st || dy {
        out.push(Diagnostic::new(
            Code::E009,
            p,
            "timing tag on an element that is not a variation point",
        ));
    }
}

fn appl_class(out: &mut Vec<Diagnostic>, model: &Model, class: &ClassDecl, p: &str) {
    if !class.tags.contains(Tag::ApplClass) {
        return;
    }
    // Instantiation completes the generalizations of application classes.
    let completed = model.instance.is_some();
    let ok = model.relationships.iter().any(|r| {
        r.kind.is_inheritance() && r.source == class.name && (r.is_incomplete() || completed)
    });
    if !ok {
        out.push(Diagnostic::new(
            Code::E006,
            p,
            format!(
                "application class {} has no {{incomplete}} generalization",
                class.name
            ),
        ));
    }
}
