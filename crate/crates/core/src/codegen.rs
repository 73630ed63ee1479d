//! Skeleton emitter. One `<Class>.skel` file per class in a neutral,
//! language-agnostic syntax; see `docs/skel-format.md`.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::diagnostic::{self, Diagnostic};
use crate::dsl::quote;
use crate::model::{
    ClassDecl, ClassKind, ClauseForm, ClauseScope, MethodDecl, Model, RelKind, Relationship,
    RestrictionClause, Tag, Timing, Visibility,
};
use crate::validate;

/// Relative path to file text, ordered by path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileSet {
    pub files: BTreeMap<String, String>,
}

impl FileSet {
    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn get(&self, path: &str) -> Option<&str> {
        self.files.get(path).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.files.iter().map(|(p, t)| (p.as_str(), t.as_str()))
    }

    /// Paths whose text differs between the two sets, including paths
    /// present in only one.
    pub fn changed_paths(&self, other: &FileSet) -> Vec<String> {
        let mut out: Vec<String> = self
            .files
            .iter()
            .filter(|(p, t)| other.files.get(*p) != Some(t))
            .map(|(p, _)| p.clone())
            .collect();
        out.extend(
            other
                .files
                .keys()
                .filter(|p| !self.files.contains_key(*p))
                .cloned(),
        );
        out.sort();
        out
    }
}

pub fn file_name(class: &str) -> String {
    format!("{class}.skel")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("model has validation errors:\n{}", diagnostic::render(.0).trim_end())]
pub struct GenerateError(pub Vec<Diagnostic>);

pub fn generate(model: &Model) -> Result<FileSet, GenerateError> {
    let diags = validate(model);
    if diagnostic::has_errors(&diags) {
        return Err(GenerateError(
            diags.into_iter().filter(Diagnostic::is_error).collect(),
        ));
    }
    let files = model
        .classes
        .iter()
        .map(|c| (file_name(&c.name), render_class(model, c)))
        .collect();
    Ok(FileSet { files })
}

/// Timing of the extensible interface `class` opens, if it is one.
fn hot_spot(model: &Model, class: &ClassDecl) -> Option<Timing> {
    let incomplete: Vec<Option<Timing>> = model
        .relationships
        .iter()
        .filter(|r| r.is_incomplete() && r.target == class.name)
        .map(|r| r.tags.timing())
        .collect();
    if incomplete.is_empty() {
        return class.extension_point;
    }
    if incomplete.contains(&Some(Timing::Dynamic)) || class.extension_point == Some(Timing::Dynamic)
    {
        Some(Timing::Dynamic)
    } else {
        Some(Timing::Static)
    }
}

fn params(m: &MethodDecl) -> String {
    m.params
        .iter()
        .map(|p| format!("{}: {}", p.name, p.type_name))
        .collect::<Vec<_>>()
        .join(", ")
}

fn signature(m: &MethodDecl) -> String {
    match &m.return_type {
        Some(r) => format!("{}({}): {r}", m.name, params(m)),
        None => format!("{}({})", m.name, params(m)),
    }
}

fn restriction(c: &RestrictionClause) -> String {
    let scope = match &c.scope {
        ClauseScope::ForAllNewMethods => "for-all-new-methods".to_string(),
        ClauseScope::Method(m) => format!("method {m}"),
    };
    let form = match &c.form {
        ClauseForm::Preserves(a) => match &c.origin {
            Some(o) => format!("preserves {o}.{a}"),
            None => format!("preserves {a}"),
        },
        ClauseForm::Pure => "pure".to_string(),
        ClauseForm::Opaque(t) => format!("text {}", quote(t)),
    };
    if c.satisfied_by_construction {
        format!("@RESTRICTION({scope}, {form}, satisfied-by-construction)")
    } else {
        format!("@RESTRICTION({scope}, {form})")
    }
}

fn field(r: &Relationship) -> String {
    let role = r.role.clone().unwrap_or_else(|| {
        let mut chars = r.target.chars();
        chars
            .next()
            .map(|c| c.to_lowercase().chain(chars).collect())
            .unwrap_or_default()
    });
    let kind = match r.kind {
        RelKind::Aggregation => "has",
        _ => "uses",
    };
    match &r.multiplicity {
        Some(m) => format!("  {kind} {role}: {} [{m}];", r.target),
        None => format!("  {kind} {role}: {};", r.target),
    }
}

fn render_class(model: &Model, c: &ClassDecl) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "// skeleton of {}.{}", model.name, c.name);

    let mut extends: Vec<&str> = c.supertypes.iter().map(String::as_str).collect();
    for r in model
        .relationships
        .iter()
        .filter(|r| r.kind.is_inheritance() && r.source == c.name)
    {
        if !extends.contains(&r.target.as_str()) {
            extends.push(&r.target);
        }
    }
    let kind = match c.kind {
        ClassKind::Class => "class",
        ClassKind::Interface => "interface",
    };
    let _ = write!(
        out,
        "{}{kind} {}",
        if c.is_abstract { "abstract " } else { "" },
        c.name
    );
    if !extends.is_empty() {
        let _ = write!(out, " : {}", extends.join(", "));
    }
    out.push_str(" {\n");

    if !c.tags.is_empty() {
        let names: Vec<&str> = c.tags.iter().map(Tag::name).collect();
        let _ = writeln!(out, "  // @TAGS({})", names.join(", "));
    }
    for a in &c.attributes {
        let _ = write!(out, "  {} {}: {};", a.visibility, a.name, a.type_name);
        if let Some(note) = &a.note {
            let _ = write!(out, " // {note}");
        }
        out.push('\n');
    }
    let owned: Vec<&Relationship> = model
        .relationships
        .iter()
        .filter(|r| r.source == c.name && !r.kind.is_inheritance())
        .collect();
    for r in &owned {
        out.push_str(&field(r));
        out.push('\n');
    }
    for k in &c.constraints {
        let _ = writeln!(out, "  // {}", restriction(k));
    }

    let hot = hot_spot(model, c);
    let hook_field = owned
        .iter()
        .find(|r| r.has_role("hooks"))
        .and_then(|r| r.role.clone());
    for m in &c.methods {
        for p in model
            .sequences
            .iter()
            .filter(|p| p.owner.class == c.name && p.owner.method == m.name)
        {
            let _ = writeln!(out, "  // @SEQUENCE({p})");
        }
        if !m.tags.is_empty() {
            let names: Vec<&str> = m.tags.iter().map(Tag::name).collect();
            let _ = writeln!(out, "  // @TAGS({})", names.join(", "));
        }
        if m.is_abstract {
            if let Some(t) = hot {
                let _ = writeln!(out, "  // @HOT-SPOT(extensible-interface, {t})");
            }
            let _ = writeln!(out, "  {} abstract {};", m.visibility, signature(m));
        } else if m.invokes_hooks {
            let _ = writeln!(out, "  {} {} {{", m.visibility, signature(m));
            let field = hook_field.as_deref().unwrap_or("hooks");
            let _ = writeln!(out, "    // @INVOKE-HOOKS({field}, invoke())");
            out.push_str("  }\n");
        } else {
            let _ = writeln!(out, "  {} {} {{ }}", m.visibility, signature(m));
        }
    }

    // Methods moved out by strategy or MOP are delegated back.
    for r in owned
        .iter()
        .filter(|r| r.has_role("strategy") || r.has_role("mop"))
    {
        let role = r.role.as_deref().unwrap_or_default();
        let Some(target) = model.class(&r.target) else {
            continue;
        };
        let delegated = target
            .methods
            .iter()
            .filter(|m| m.visibility == Visibility::Public && !c.has_member(&m.name));
        for m in delegated {
            let args: Vec<&str> = m.params.iter().map(|p| p.name.as_str()).collect();
            let _ = writeln!(out, "  public {} {{", signature(m));
            let _ = writeln!(
                out,
                "    // @DELEGATE({role}.{}({}))",
                m.name,
                args.join(", ")
            );
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    #[test]
    fn empty_model_has_no_files() {
        assert!(generate(&Model::new("M")).unwrap().is_empty());
    }

    #[test]
    fn invalid_model_is_refused() {
        let m = parse("model M { class A { tags { extensible } } }").unwrap();
        assert!(generate(&m).is_err());
    }

    #[test]
    fn framework_inventory_and_markers() {
        let m = parse(include_str!("../tests/fixtures/fig8.umlf")).unwrap();
        let files = generate(&m).unwrap();
        assert_eq!(files.len(), 8);
        let strategy = files.get("SelectCourseStrategy.skel").unwrap();
        assert!(strategy.contains(
            "// @HOT-SPOT(extensible-interface, dynamic)\n  public abstract selectCourse();"
        ));
        let template = files.get("SelectCourse.skel").unwrap();
        assert!(template.contains("// @DELEGATE(strategy.selectCourse())"));
        let show = files.get("ShowCourse.skel").unwrap();
        assert!(show.contains("// @INVOKE-HOOKS(hooks, invoke())"));
        assert!(show.contains("has hooks: ShowCourseHook [0..*];"));
        let hook = files.get("ShowCourseHook.skel").unwrap();
        assert!(hook.contains("@RESTRICTION(method invoke, preserves ShowCourse.fSelectedCourse)"));
        assert_eq!(generate(&m).unwrap(), files);
    }
}
