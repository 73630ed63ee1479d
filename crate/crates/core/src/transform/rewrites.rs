use std::collections::HashSet;

use super::{ModelId, MopParam, TransformError};
use crate::classify::{VariationPoint, VpKind};
use crate::model::{
    upper_camel, AttributeDecl, ClassDecl, ClassKind, ClauseForm, ClauseScope, MethodDecl,
    MethodRef, Model, Param, RelKind, Relationship, RestrictionClause, Tag, Timing, Visibility,
};

fn inapplicable(vp: &VariationPoint, model: ModelId) -> TransformError {
    let locus = match &vp.kind {
        VpKind::VariableMethod { class, method } => format!("{class}.{method}"),
        VpKind::ExtensibleClass { class } => class.clone(),
        VpKind::ExtensibleInterface { child, parent, .. } => format!("{child} -> {parent}"),
    };
    TransformError::Inapplicable {
        locus,
        model,
        kind: vp.kind_name(),
        timing: vp.timing,
    }
}

fn variable_method(
    vp: &VariationPoint,
    timing: Timing,
    id: ModelId,
) -> Result<(&str, &str), TransformError> {
    match &vp.kind {
        VpKind::VariableMethod { class, method } if vp.timing == timing => Ok((class, method)),
        _ => Err(inapplicable(vp, id)),
    }
}

fn ensure_free(model: &Model, name: &str) -> Result<(), TransformError> {
    if model.class(name).is_some() {
        Err(TransformError::NameCollision(name.to_string()))
    } else {
        Ok(())
    }
}

fn locate<'m>(model: &'m Model, class: &str, method: &str) -> (&'m ClassDecl, &'m MethodDecl) {
    let c = model.class(class).expect("variation point class exists");
    let m = c.method(method).expect("variable method exists");
    (c, m)
}

/// Moves clauses scoped to `method` from `from` onto `to`, recording where
/// their attribute names resolve.
fn move_method_clauses(from: &mut ClassDecl, to: &mut ClassDecl, method: &str) {
    let origin = from.name.clone();
    let (moved, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut from.constraints)
        .into_iter()
        .partition(|c| c.is_on_method(method));
    from.constraints = kept;
    for mut clause in moved {
        if matches!(clause.form, ClauseForm::Preserves(_)) && clause.origin.is_none() {
            clause.origin = Some(origin.clone());
        }
        to.constraints.push(clause);
    }
}

fn reattach_patterns(model: &mut Model, from: &MethodRef, to: &MethodRef) {
    for p in model.sequences.iter_mut().filter(|p| &p.owner == from) {
        p.owner = to.clone();
    }
}

/// Strategy: the variable method moves to a new abstract hook class that
/// the template class aggregates under role `strategy`.
pub fn apply_strategy(model: &Model, vp: &VariationPoint) -> Result<Model, TransformError> {
    let (class, method) = variable_method(vp, Timing::Dynamic, ModelId::Strategy)?;
    let hook_name = format!("{}Strategy", upper_camel(method));
    ensure_free(model, &hook_name)?;
    let (_, original) = locate(model, class, method);

    let mut out = model.clone();
    let mut hook = ClassDecl::new(&hook_name);
    hook.is_abstract = true;
    hook.tags.insert(Tag::SeparationHook);
    hook.extension_point = Some(Timing::Dynamic);
    hook.methods.push(MethodDecl {
        name: method.to_string(),
        params: original.params.clone(),
        return_type: original.return_type.clone(),
        visibility: Visibility::Public,
        is_abstract: true,
        ..MethodDecl::default()
    });

    let template = out.class_mut(class).expect("class exists");
    template.methods.retain(|m| m.name != method);
    template.tags.insert(Tag::SeparationTemplate);
    move_method_clauses(template, &mut hook, method);

    reattach_patterns(
        &mut out,
        &MethodRef::new(class, method),
        &MethodRef::new(&hook_name, method),
    );
    out.classes.push(hook);
    out.relationships.push(
        Relationship::new(RelKind::Aggregation, class, &hook_name).with_role("strategy", "1"),
    );
    Ok(out)
}

/// Unification: template and hook stay in one class, which becomes an
/// abstract extension point completed by subclassing.
pub fn apply_unification(model: &Model, vp: &VariationPoint) -> Result<Model, TransformError> {
    if vp.timing != Timing::Static {
        return Err(inapplicable(vp, ModelId::Unification));
    }
    let mut out = model.clone();
    let (class_name, method) = match &vp.kind {
        VpKind::VariableMethod { class, method } => (class.as_str(), Some(method.as_str())),
        VpKind::ExtensibleClass { class } => (class.as_str(), None),
        VpKind::ExtensibleInterface { .. } => return Err(inapplicable(vp, ModelId::Unification)),
    };
    let class = out.class_mut(class_name).expect("class exists");
    if let Some(existing) = class.extension_point {
        if existing != Timing::Static {
            return Err(TransformError::ConflictingExtensionPoint {
                class: class_name.to_string(),
                existing,
            });
        }
    }
    class.extension_point = Some(Timing::Static);
    if class.kind == ClassKind::Class {
        class.is_abstract = true;
    }
    match method {
        Some(method) => {
            let m = class.method_mut(method).expect("variable method exists");
            m.is_abstract = true;
            m.tags.remove(Tag::Variable);
            m.tags.remove(Tag::Static);
        }
        None => {
            class.tags.remove(Tag::Extensible);
            class.tags.remove(Tag::Static);
        }
    }
    Ok(out)
}

/// Hook list: new methods become hooks in a `<Class>Hook` interface that
/// the class iterates before `before` runs.
pub fn apply_hook_list(
    model: &Model,
    vp: &VariationPoint,
    before: &str,
) -> Result<Model, TransformError> {
    let class_name = match &vp.kind {
        VpKind::ExtensibleClass { class } if vp.timing == Timing::Dynamic => class.as_str(),
        _ => return Err(inapplicable(vp, ModelId::HookList)),
    };
    let original = model.class(class_name).expect("class exists");
    if original.method(before).is_none() {
        return Err(TransformError::UnresolvedBefore {
            class: class_name.to_string(),
            method: before.to_string(),
        });
    }
    let hook_name = format!("{class_name}Hook");
    ensure_free(model, &hook_name)?;
    for member in ["addHook", "removeHook"] {
        if original.has_member(member) {
            return Err(TransformError::NameCollision(format!(
                "{class_name}.{member}"
            )));
        }
    }

    let mut out = model.clone();
    let mut hook = ClassDecl::new(&hook_name);
    hook.kind = ClassKind::Interface;
    hook.tags.insert(Tag::SeparationHook);
    hook.extension_point = Some(Timing::Dynamic);
    hook.methods.push(MethodDecl {
        name: "invoke".into(),
        is_abstract: true,
        ..MethodDecl::default()
    });

    let snapshot = out.clone();
    let class = out.class_mut(class_name).expect("class exists");
    class.tags.remove(Tag::Extensible);
    class.tags.remove(Tag::Dynamic);
    class.tags.insert(Tag::SeparationTemplate);
    for name in ["addHook", "removeHook"] {
        class.methods.push(MethodDecl {
            name: name.into(),
            params: vec![Param::new("h", &hook_name)],
            is_abstract: class.kind == ClassKind::Interface,
            ..MethodDecl::default()
        });
    }
    class
        .method_mut(before)
        .expect("checked above")
        .invokes_hooks = true;

    let (moved, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut class.constraints)
        .into_iter()
        .partition(|c| c.scope == ClauseScope::ForAllNewMethods);
    class.constraints = kept;
    for clause in moved {
        let origin = clause
            .origin
            .clone()
            .unwrap_or_else(|| class_name.to_string());
        // Hooks reach the class only through its public interface.
        let private = match &clause.form {
            ClauseForm::Preserves(attr) => snapshot
                .class(&origin)
                .and_then(|c| c.attribute(attr))
                .is_some_and(|a| a.visibility == Visibility::Private),
            _ => false,
        };
        hook.constraints.push(RestrictionClause {
            scope: ClauseScope::Method("invoke".into()),
            origin: match clause.form {
                ClauseForm::Preserves(_) => Some(origin),
                _ => clause.origin,
            },
            satisfied_by_construction: clause.satisfied_by_construction || private,
            form: clause.form,
        });
    }

    out.classes.push(hook);
    out.relationships.push(
        Relationship::new(RelKind::Aggregation, class_name, &hook_name).with_role("hooks", "0..*"),
    );
    Ok(out)
}

/// MOP: the variable method moves to a concrete `<Method>MOP` class whose
/// behavior is selected by Boolean parameters.
pub fn apply_mop(
    model: &Model,
    vp: &VariationPoint,
    params: &[MopParam],
) -> Result<Model, TransformError> {
    let (class, method) = variable_method(vp, Timing::Dynamic, ModelId::Mop)?;
    if params.is_empty() {
        return Err(TransformError::EmptyParams);
    }
    let mut seen = HashSet::new();
    for p in params {
        if !seen.insert(p.name.as_str()) {
            return Err(TransformError::DuplicateParam(p.name.clone()));
        }
    }
    let mop_name = format!("{}MOP", upper_camel(method));
    ensure_free(model, &mop_name)?;
    let (_, original) = locate(model, class, method);
    if params.iter().any(|p| p.name == method) {
        return Err(TransformError::DuplicateParam(method.to_string()));
    }

    let mut out = model.clone();
    let mut mop = ClassDecl::new(&mop_name);
    for p in params {
        let mut attr = AttributeDecl::new(&p.name, "Boolean", Visibility::Private);
        attr.note = p.description.clone();
        mop.attributes.push(attr);
    }
    mop.methods.push(MethodDecl {
        name: method.to_string(),
        params: original.params.clone(),
        return_type: original.return_type.clone(),
        visibility: Visibility::Public,
        ..MethodDecl::default()
    });

    let owner = out.class_mut(class).expect("class exists");
    owner.methods.retain(|m| m.name != method);
    move_method_clauses(owner, &mut mop, method);

    reattach_patterns(
        &mut out,
        &MethodRef::new(class, method),
        &MethodRef::new(&mop_name, method),
    );
    out.classes.push(mop);
    out.relationships
        .push(Relationship::new(RelKind::Aggregation, class, &mop_name).with_role("mop", "1"));
    Ok(out)
}
