//! Framework instantiation: obligations of a transformed framework, and the
//! checks and rewrite that turn an instantiation spec into an application
//! model.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::classify::{classify_variation_points, VpKind};
use crate::conformance::{check_effects, conforms, EffectSummary, Mode};
use crate::diagnostic::{self, Code, Diagnostic};
use crate::diff::element_paths;
use crate::model::{
    path, ClassDecl, ClassKind, ClauseScope, InstanceInfo, MethodDecl, Model, MopConfig, Param,
    RelKind, Relationship, RestrictionClause, SequencePattern, Tag, Timing, Visibility,
};
use crate::validate;

mod spec;

pub use spec::{parse_spec, print_spec};

/// One extensible interface the application must complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub interface: String,
    pub abstract_methods: Vec<MethodDecl>,
    pub clauses: Vec<RestrictionClause>,
    pub patterns: Vec<SequencePattern>,
    pub timing: Timing,
}

impl Obligation {
    /// Clauses an implementation of `method` must respect.
    pub fn clauses_for(&self, method: &str) -> Vec<RestrictionClause> {
        self.clauses
            .iter()
            .filter(|c| c.scope == ClauseScope::ForAllNewMethods || c.is_on_method(method))
            .cloned()
            .collect()
    }

    pub fn patterns_for<'a>(
        &'a self,
        method: &'a str,
    ) -> impl Iterator<Item = &'a SequencePattern> + 'a {
        self.patterns
            .iter()
            .filter(move |p| p.owner.method == method)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodImpl {
    pub name: String,
    pub params: Vec<Param>,
    pub effects: EffectSummary,
}

impl MethodImpl {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            effects: EffectSummary::default(),
        }
    }

    fn param_types(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.type_name.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppClassSpec {
    pub name: String,
    pub supertype: String,
    /// Implementations of the supertype's abstract methods and new methods,
    /// told apart by name.
    pub methods: Vec<MethodImpl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstantiationSpec {
    pub instance_name: String,
    pub framework: String,
    pub classes: Vec<AppClassSpec>,
    pub configs: Vec<MopConfig>,
}

impl InstantiationSpec {
    pub fn new(instance_name: impl Into<String>, framework: impl Into<String>) -> Self {
        Self {
            instance_name: instance_name.into(),
            framework: framework.into(),
            classes: Vec::new(),
            configs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObligationError {
    #[error("{0} is still a variable method or extensible class; transform the framework first")]
    Untransformed(String),
    #[error(transparent)]
    Classify(#[from] crate::classify::ClassifyError),
}

/// Lists the extensible interfaces of `framework` in class declaration
/// order.
pub fn list_obligations(framework: &Model) -> Result<Vec<Obligation>, ObligationError> {
    for vp in classify_variation_points(framework)? {
        if !matches!(vp.kind, VpKind::ExtensibleInterface { .. }) {
            return Err(ObligationError::Untransformed(vp.path(&framework.name)));
        }
    }
    Ok(framework
        .extension_parents()
        .into_iter()
        .map(|c| obligation(framework, c))
        .collect())
}

fn obligation(model: &Model, class: &ClassDecl) -> Obligation {
    let incomplete: Vec<Option<Timing>> = model
        .relationships
        .iter()
        .filter(|r| r.is_incomplete() && r.target == class.name)
        .map(|r| r.tags.timing())
        .collect();
    let timing = if incomplete.contains(&Some(Timing::Dynamic))
        || class.extension_point == Some(Timing::Dynamic)
    {
        Timing::Dynamic
    } else {
        Timing::Static
    };
    let abstract_methods: Vec<MethodDecl> = class.abstract_methods().cloned().collect();
    let patterns = model
        .sequences
        .iter()
        .filter(|p| {
            p.owner.class == class.name && abstract_methods.iter().any(|m| m.name == p.owner.method)
        })
        .cloned()
        .collect();
    Obligation {
        interface: class.name.clone(),
        abstract_methods,
        clauses: class.constraints.clone(),
        patterns,
        timing,
    }
}

/// Diagnostics plus the dynamic obligations the spec instantiates, which the
/// application may complete at runtime.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub diagnostics: Vec<Diagnostic>,
    pub runtime_capable: Vec<String>,
}

pub fn verify_instance(framework: &Model, spec: &InstantiationSpec) -> Vec<Diagnostic> {
    verify_report(framework, spec).diagnostics
}

pub fn verify_report(framework: &Model, spec: &InstantiationSpec) -> VerifyReport {
    verify_with(framework, spec, Mode::Strict)
}

pub fn verify_with(framework: &Model, spec: &InstantiationSpec, mode: Mode) -> VerifyReport {
    let m = framework.name.as_str();
    let mut out: Vec<Diagnostic> = validate(framework)
        .into_iter()
        .filter(Diagnostic::is_error)
        .collect();
    let mut runtime_capable = Vec::new();

    if spec.framework != framework.name {
        out.push(Diagnostic::new(
            Code::E204,
            path::instance(m),
            format!(
                "spec instantiates {}, not {}",
                spec.framework, framework.name
            ),
        ));
    }
    if let Ok(points) = classify_variation_points(framework) {
        for vp in points {
            if !matches!(vp.kind, VpKind::ExtensibleInterface { .. }) {
                out.push(Diagnostic::new(
                    Code::E200,
                    vp.path(m),
                    format!(
                        "{} must be transformed before instantiation",
                        vp.kind_name()
                    ),
                ));
            }
        }
    }
    let obligations: Vec<Obligation> = framework
        .extension_parents()
        .into_iter()
        .map(|c| obligation(framework, c))
        .collect();

    let mut names = BTreeSet::new();
    for app in &spec.classes {
        let cp = path::class(m, &app.name);
        if framework.class(&app.name).is_some() || !names.insert(app.name.as_str()) {
            out.push(Diagnostic::new(
                Code::E206,
                &cp,
                format!("class {} already exists", app.name),
            ));
        }
        let Some(ob) = obligations.iter().find(|o| o.interface == app.supertype) else {
            out.push(Diagnostic::new(
                Code::E203,
                &cp,
                format!(
                    "{} is not an extensible interface of {}",
                    app.supertype, framework.name
                ),
            ));
            continue;
        };
        if ob.timing == Timing::Dynamic && !runtime_capable.contains(&ob.interface) {
            runtime_capable.push(ob.interface.clone());
        }
        let owner = framework
            .class(&ob.interface)
            .expect("obligation class exists");

        for required in &ob.abstract_methods {
            if !app.methods.iter().any(|i| i.name == required.name) {
                out.push(Diagnostic::new(
                    Code::E201,
                    &cp,
                    format!("{} does not implement {}", app.name, required.signature()),
                ));
            }
        }
        for imp in &app.methods {
            let mp = path::member(m, &app.name, &imp.name);
            match ob.abstract_methods.iter().find(|a| a.name == imp.name) {
                Some(required) => {
                    let expected: Vec<&str> = required
                        .params
                        .iter()
                        .map(|p| p.type_name.as_str())
                        .collect();
                    if imp.param_types() != expected {
                        out.push(Diagnostic::new(
                            Code::E207,
                            &mp,
                            format!("expected {}", required.signature()),
                        ));
                    }
                    out.extend(check_effects(
                        &imp.effects,
                        &ob.clauses_for(&imp.name),
                        owner,
                        &mp,
                    ));
                    for pattern in ob.patterns_for(&imp.name) {
                        match &imp.effects.trace {
                            None => out.push(Diagnostic::new(
                                Code::W201,
                                &mp,
                                format!("no trace given for {}", pattern.name),
                            )),
                            Some(trace) => {
                                if let Some(v) = conforms(trace, pattern, mode).first_violation {
                                    out.push(Diagnostic::new(
                                        Code::E202,
                                        &mp,
                                        format!(
                                            "trace {trace} breaks {} at position {}: expected {}",
                                            pattern.name, v.position, v.expected
                                        ),
                                    ));
                                }
                            }
                        }
                    }
                }
                // A new method runs wherever the interface's methods do, so
                // every clause of the interface applies.
                None => out.extend(check_effects(&imp.effects, &ob.clauses, owner, &mp)),
            }
        }
    }

    let mut configured = BTreeSet::new();
    for cfg in &spec.configs {
        let cp = path::class(m, &cfg.class);
        if !configured.insert(cfg.class.as_str()) {
            out.push(Diagnostic::new(
                Code::E205,
                &cp,
                "configured more than once",
            ));
            continue;
        }
        let is_mop = framework
            .relationships
            .iter()
            .any(|r| r.target == cfg.class && r.has_role("mop"));
        let Some(class) = framework.class(&cfg.class).filter(|_| is_mop) else {
            out.push(Diagnostic::new(
                Code::E205,
                &cp,
                format!("{} is not a MOP class of {}", cfg.class, framework.name),
            ));
            continue;
        };
        let declared: BTreeSet<&str> = class
            .attributes
            .iter()
            .filter(|a| a.type_name == "Boolean")
            .map(|a| a.name.as_str())
            .collect();
        let mut given = BTreeSet::new();
        for (key, _) in &cfg.values {
            if !declared.contains(key.as_str()) {
                out.push(Diagnostic::new(
                    Code::E205,
                    &cp,
                    format!("{} has no parameter {key}", cfg.class),
                ));
            } else if !given.insert(key.as_str()) {
                out.push(Diagnostic::new(
                    Code::E205,
                    &cp,
                    format!("{key} set more than once"),
                ));
            }
        }
        for missing in declared.difference(&given) {
            out.push(Diagnostic::new(
                Code::E205,
                &cp,
                format!("parameter {missing} of {} is not set", cfg.class),
            ));
        }
    }

    out.sort_by(|a, b| (&a.path, a.code).cmp(&(&b.path, b.code)));
    out.dedup();
    VerifyReport {
        diagnostics: out,
        runtime_capable,
    }
}

/// Builds the application model, or returns the verification errors.
pub fn instantiate(framework: &Model, spec: &InstantiationSpec) -> Result<Model, Vec<Diagnostic>> {
    instantiate_with(framework, spec, Mode::Strict)
}

pub fn instantiate_with(
    framework: &Model,
    spec: &InstantiationSpec,
    mode: Mode,
) -> Result<Model, Vec<Diagnostic>> {
    let diags = verify_with(framework, spec, mode).diagnostics;
    if diagnostic::has_errors(&diags) {
        return Err(diags);
    }

    let mut out = framework.clone();
    let mut satisfied: Vec<&str> = Vec::new();
    for app in &spec.classes {
        let sup = framework.class(&app.supertype).expect("verified");
        let required: Vec<&MethodDecl> = sup.abstract_methods().collect();
        let mut class = ClassDecl::new(&app.name);
        class.tags.insert(Tag::ApplClass);
        if sup.tags.contains(Tag::SeparationHook) {
            class.tags.insert(Tag::CHook);
        }
        for imp in &app.methods {
            let return_type = required
                .iter()
                .find(|m| m.name == imp.name)
                .and_then(|m| m.return_type.clone());
            class.methods.push(MethodDecl {
                name: imp.name.clone(),
                params: imp.params.clone(),
                return_type,
                visibility: Visibility::Public,
                ..MethodDecl::default()
            });
        }
        out.classes.push(class);
        let kind = match sup.kind {
            ClassKind::Class => RelKind::Generalization,
            ClassKind::Interface => RelKind::Realization,
        };
        out.relationships
            .push(Relationship::new(kind, &app.name, &app.supertype));
        if !satisfied.contains(&app.supertype.as_str()) {
            satisfied.push(&app.supertype);
        }
    }

    for name in satisfied {
        if let Some(c) = out.class_mut(name) {
            c.extension_point = None;
        }
        for r in out
            .relationships
            .iter_mut()
            .filter(|r| r.target == name && r.is_incomplete())
        {
            r.tags.remove(Tag::Incomplete);
            r.tags.remove(Tag::Static);
            r.tags.remove(Tag::Dynamic);
        }
    }

    let mut configs = out.instance.take().map(|i| i.configs).unwrap_or_default();
    for cfg in &spec.configs {
        configs.retain(|c| c.class != cfg.class);
        configs.push(cfg.clone());
    }
    out.instance = Some(InstanceInfo {
        name: spec.instance_name.clone(),
        configs,
    });
    Ok(out)
}

/// Element paths of `framework` that instantiating with `spec` leaves
/// alone: everything except the obligations it completes and their
/// `{incomplete}` relationships.
pub fn untouched_paths(framework: &Model, spec: &InstantiationSpec) -> BTreeSet<String> {
    let m = framework.name.as_str();
    let completed: BTreeSet<&str> = spec.classes.iter().map(|c| c.supertype.as_str()).collect();
    let mut out = element_paths(framework);
    out.remove(&path::instance(m));
    for class in &framework.classes {
        if completed.contains(class.name.as_str()) && class.extension_point.is_some() {
            out.remove(&path::class(m, &class.name));
        }
    }
    for (i, r) in framework.relationships.iter().enumerate() {
        if r.is_incomplete() && completed.contains(r.target.as_str()) {
            out.remove(&path::relationship(m, i));
        }
    }
    out
}

/// Clauses and patterns a method named `method` in an app class of `ob` is
/// checked against.
pub fn restrictions_for<'a>(
    ob: &'a Obligation,
    method: &str,
) -> (Vec<RestrictionClause>, Vec<&'a SequencePattern>) {
    let patterns = ob
        .patterns
        .iter()
        .filter(|p| p.owner.method == method)
        .collect();
    let clauses = if ob.abstract_methods.iter().any(|m| m.name == method) {
        ob.clauses_for(method)
    } else {
        ob.clauses.clone()
    };
    (clauses, patterns)
}
