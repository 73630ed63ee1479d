//! In-memory model graph: classes, relationships, sequence patterns and
//! restriction clauses, plus the tagged-value vocabulary.
//!
//! Models are plain values. Every operation in this crate takes a `&Model`
//! and returns a fresh one; nothing mutates its input.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Element kinds a tag may be attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Class,
    Method,
    Generalization,
    Realization,
    Aggregation,
    Association,
    Constraint,
    Event,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ElementKind::Class => "class",
            ElementKind::Method => "method",
            ElementKind::Generalization => "generalization",
            ElementKind::Realization => "realization",
            ElementKind::Aggregation => "aggregation",
            ElementKind::Association => "association",
            ElementKind::Constraint => "constraint",
            ElementKind::Event => "event",
        };
        f.write_str(s)
    }
}

/// The Boolean tag vocabulary. Variant order is registry order, which is
/// also the canonical print order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Variable,
    Extensible,
    Incomplete,
    ApplClass,
    Static,
    Dynamic,
    ForAllNewMethods,
    Optional,
    SeparationTemplate,
    SeparationHook,
    CHook,
}

/// Registry entry for one tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TagDef {
    pub tag: Tag,
    pub name: &'static str,
    pub applies_to: &'static [ElementKind],
    pub meaning: &'static str,
}

use ElementKind as K;

const LOCI: &[ElementKind] = &[K::Method, K::Class, K::Generalization, K::Realization];

pub const TAG_REGISTRY: &[TagDef] = &[
    TagDef {
        tag: Tag::Variable,
        name: "variable",
        applies_to: &[K::Method],
        meaning: "the method must be implemented during framework instantiation",
    },
    TagDef {
        tag: Tag::Extensible,
        name: "extensible",
        applies_to: &[K::Class],
        meaning: "the class interface depends on the instantiation; new methods may be added",
    },
    TagDef {
        tag: Tag::Incomplete,
        name: "incomplete",
        applies_to: &[K::Generalization, K::Realization],
        meaning: "new subclasses may be added in this generalization or realization",
    },
    TagDef {
        tag: Tag::ApplClass,
        name: "appl-class",
        applies_to: &[K::Class],
        meaning: "the class exists only in framework instances",
    },
    TagDef {
        tag: Tag::Static,
        name: "static",
        applies_to: LOCI,
        meaning: "the variation point does not require runtime instantiation",
    },
    TagDef {
        tag: Tag::Dynamic,
        name: "dynamic",
        applies_to: LOCI,
        meaning: "the variation point requires runtime instantiation",
    },
    TagDef {
        tag: Tag::ForAllNewMethods,
        name: "for-all-new-methods",
        applies_to: &[K::Constraint],
        meaning: "the constraint holds for all newly introduced methods",
    },
    TagDef {
        tag: Tag::Optional,
        name: "optional",
        applies_to: &[K::Event],
        meaning: "the event is not obliged to occur",
    },
    TagDef {
        tag: Tag::SeparationTemplate,
        name: "separation-template",
        applies_to: &[K::Class],
        meaning: "template role of the Separation meta-pattern",
    },
    TagDef {
        tag: Tag::SeparationHook,
        name: "separation-hook",
        applies_to: &[K::Class],
        meaning: "hook role of the Separation meta-pattern",
    },
    TagDef {
        tag: Tag::CHook,
        name: "c-hook",
        applies_to: &[K::Class],
        meaning: "application class playing the role of a concrete hook",
    },
];

impl Tag {
    pub fn def(self) -> &'static TagDef {
        TAG_REGISTRY
            .iter()
            .find(|d| d.tag == self)
            .expect("every tag is registered")
    }

    pub fn name(self) -> &'static str {
        self.def().name
    }

    pub fn all() -> impl Iterator<Item = Tag> {
        TAG_REGISTRY.iter().map(|d| d.tag)
    }

    pub fn applies_to(self, kind: ElementKind) -> bool {
        self.def().applies_to.contains(&kind)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl FromStr for Tag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TAG_REGISTRY
            .iter()
            .find(|d| d.name == s)
            .map(|d| d.tag)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

/// Set of tags on one element, iterated in registry order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TagSet(BTreeSet<Tag>);

impl TagSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, tag: Tag) -> bool {
        self.0.contains(&tag)
    }

    pub fn insert(&mut self, tag: Tag) -> bool {
        self.0.insert(tag)
    }

    pub fn remove(&mut self, tag: Tag) -> bool {
        self.0.remove(&tag)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Tag> + '_ {
        self.0.iter().copied()
    }

    /// Timing carried by this set, if exactly one of the two timing tags is present.
    pub fn timing(&self) -> Option<Timing> {
        match (self.contains(Tag::Static), self.contains(Tag::Dynamic)) {
            (true, false) => Some(Timing::Static),
            (false, true) => Some(Timing::Dynamic),
            _ => None,
        }
    }
}

impl FromIterator<Tag> for TagSet {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        TagSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[Tag; N]> for TagSet {
    fn from(tags: [Tag; N]) -> Self {
        tags.into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Timing {
    Static,
    Dynamic,
}

impl Timing {
    pub fn tag(self) -> Tag {
        match self {
            Timing::Static => Tag::Static,
            Timing::Dynamic => Tag::Dynamic,
        }
    }
}

impl fmt::Display for Timing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Timing::Static => "static",
            Timing::Dynamic => "dynamic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ClassKind {
    #[default]
    Class,
    Interface,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Class => "class",
            ClassKind::Interface => "interface",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Visibility {
    #[default]
    Public,
    Protected,
    Private,
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Visibility::Public => "public",
            Visibility::Protected => "protected",
            Visibility::Private => "private",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub type_name: String,
}

impl Param {
    pub fn new(name: impl Into<String>, type_name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            type_name: type_name.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub return_type: Option<String>,
    pub visibility: Visibility,
    pub is_abstract: bool,
    pub tags: TagSet,
    /// Set by the hook-list rewrite: the hook list is iterated before this
    /// method runs.
    pub invokes_hooks: bool,
}

impl MethodDecl {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    /// `name(p: T, ...)[: R]`
    pub fn signature(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|p| format!("{}: {}", p.name, p.type_name))
            .collect();
        match &self.return_type {
            Some(r) => format!("{}({}): {}", self.name, params.join(", "), r),
            None => format!("{}({})", self.name, params.join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttributeDecl {
    pub name: String,
    pub type_name: String,
    pub visibility: Visibility,
    /// Free-form description, e.g. the meaning of a MOP parameter.
    pub note: Option<String>,
}

impl AttributeDecl {
    pub fn new(
        name: impl Into<String>,
        type_name: impl Into<String>,
        visibility: Visibility,
    ) -> Self {
        Self {
            name: name.into(),
            type_name: type_name.into(),
            visibility,
            note: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClauseScope {
    Method(String),
    ForAllNewMethods,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClauseForm {
    Preserves(String),
    Pure,
    Opaque(String),
}

/// An instantiation restriction attached to a class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictionClause {
    pub scope: ClauseScope,
    pub form: ClauseForm,
    /// Class the clause was written against, when it has since been moved
    /// to another class by a rewrite. Attribute names resolve here.
    pub origin: Option<String>,
    pub satisfied_by_construction: bool,
}

impl RestrictionClause {
    pub fn new(scope: ClauseScope, form: ClauseForm) -> Self {
        Self {
            scope,
            form,
            origin: None,
            satisfied_by_construction: false,
        }
    }

    /// Whether the clause applies to the given method name (ignores
    /// for-all-new-methods scoping).
    pub fn is_on_method(&self, method: &str) -> bool {
        matches!(&self.scope, ClauseScope::Method(m) if m == method)
    }
}

impl fmt::Display for RestrictionClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.scope {
            ClauseScope::Method(m) => write!(f, "on {m}: ")?,
            ClauseScope::ForAllNewMethods => f.write_str("for all new methods: ")?,
        }
        match &self.form {
            ClauseForm::Preserves(a) => write!(f, "preserves {a}")?,
            ClauseForm::Pure => f.write_str("pure")?,
            ClauseForm::Opaque(t) => write!(f, "{t:?}")?,
        }
        if let Some(o) = &self.origin {
            write!(f, " (from {o})")?;
        }
        if self.satisfied_by_construction {
            f.write_str(" [satisfied by construction]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ClassDecl {
    pub name: String,
    pub kind: ClassKind,
    pub is_abstract: bool,
    pub supertypes: Vec<String>,
    pub attributes: Vec<AttributeDecl>,
    pub methods: Vec<MethodDecl>,
    pub tags: TagSet,
    pub constraints: Vec<RestrictionClause>,
    /// Marks the class itself as an extensible interface: instances complete
    /// it by subclassing, with the given timing. Set by rewrites.
    pub extension_point: Option<Timing>,
}

impl ClassDecl {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn method(&self, name: &str) -> Option<&MethodDecl> {
        self.methods.iter().find(|m| m.name == name)
    }

    pub fn method_mut(&mut self, name: &str) -> Option<&mut MethodDecl> {
        self.methods.iter_mut().find(|m| m.name == name)
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeDecl> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn has_member(&self, name: &str) -> bool {
        self.method(name).is_some() || self.attribute(name).is_some()
    }

    pub fn abstract_methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.methods.iter().filter(|m| m.is_abstract)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelKind {
    Generalization,
    Realization,
    Aggregation,
    Association,
}

impl RelKind {
    pub fn element_kind(self) -> ElementKind {
        match self {
            RelKind::Generalization => ElementKind::Generalization,
            RelKind::Realization => ElementKind::Realization,
            RelKind::Aggregation => ElementKind::Aggregation,
            RelKind::Association => ElementKind::Association,
        }
    }

    pub fn is_inheritance(self) -> bool {
        matches!(self, RelKind::Generalization | RelKind::Realization)
    }
}

impl fmt::Display for RelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.element_kind().fmt(f)
    }
}

/// Roles the rewrites attach to the aggregations they create.
pub const RESERVED_ROLES: &[&str] = &["strategy", "hooks", "mop"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relationship {
    pub kind: RelKind,
    /// For inheritance relationships the child; for aggregations the whole.
    pub source: String,
    pub target: String,
    pub role: Option<String>,
    pub multiplicity: Option<String>,
    pub tags: TagSet,
}

impl Relationship {
    pub fn new(kind: RelKind, source: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            kind,
            source: source.into(),
            target: target.into(),
            role: None,
            multiplicity: None,
            tags: TagSet::new(),
        }
    }

    pub fn with_role(mut self, role: &str, multiplicity: &str) -> Self {
        self.role = Some(role.to_string());
        self.multiplicity = Some(multiplicity.to_string());
        self
    }

    pub fn is_incomplete(&self) -> bool {
        self.kind.is_inheritance() && self.tags.contains(Tag::Incomplete)
    }

    pub fn has_role(&self, role: &str) -> bool {
        self.role.as_deref() == Some(role)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub name: String,
    pub optional: bool,
}

impl Event {
    pub fn mandatory(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            optional: false,
        }
    }

    pub fn optional(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            optional: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MethodRef {
    pub class: String,
    pub method: String,
}

impl MethodRef {
    pub fn new(class: impl Into<String>, method: impl Into<String>) -> Self {
        Self {
            class: class.into(),
            method: method.into(),
        }
    }
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.class, self.method)
    }
}

/// Allowed interaction order for implementations of one method.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequencePattern {
    pub name: String,
    pub owner: MethodRef,
    pub events: Vec<Event>,
}

impl SequencePattern {
    pub fn optional_count(&self) -> usize {
        self.events.iter().filter(|e| e.optional).count()
    }

    pub fn contains_event(&self, name: &str) -> bool {
        self.events.iter().any(|e| e.name == name)
    }
}

impl fmt::Display for SequencePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let events: Vec<String> = self
            .events
            .iter()
            .map(|e| {
                if e.optional {
                    format!("{}?", e.name)
                } else {
                    e.name.clone()
                }
            })
            .collect();
        write!(f, "{} for {}: {}", self.name, self.owner, events.join(", "))
    }
}

/// Parameter values supplied for one MOP class by an instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MopConfig {
    pub class: String,
    pub values: Vec<(String, bool)>,
}

/// Present on models produced by instantiation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InstanceInfo {
    pub name: String,
    pub configs: Vec<MopConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Model {
    pub name: String,
    pub classes: Vec<ClassDecl>,
    pub relationships: Vec<Relationship>,
    pub sequences: Vec<SequencePattern>,
    pub instance: Option<InstanceInfo>,
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn class_mut(&mut self, name: &str) -> Option<&mut ClassDecl> {
        self.classes.iter_mut().find(|c| c.name == name)
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn method(&self, r: &MethodRef) -> Option<&MethodDecl> {
        self.class(&r.class).and_then(|c| c.method(&r.method))
    }

    pub fn patterns_on<'a>(
        &'a self,
        r: &'a MethodRef,
    ) -> impl Iterator<Item = &'a SequencePattern> + 'a {
        self.sequences.iter().filter(move |p| &p.owner == r)
    }

    /// Classes that are extensible interfaces: targets of an `{incomplete}`
    /// generalization/realization, or classes carrying an extension-point
    /// marker. Declaration order.
    pub fn extension_parents(&self) -> Vec<&ClassDecl> {
        self.classes
            .iter()
            .filter(|c| c.extension_point.is_some() || self.has_incomplete_child(&c.name))
            .collect()
    }

    pub fn has_incomplete_child(&self, class: &str) -> bool {
        self.relationships
            .iter()
            .any(|r| r.is_incomplete() && r.target == class)
    }

    /// Direct supertypes: inline supertypes followed by inheritance targets.
    pub fn parents_of(&self, class: &str) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        if let Some(c) = self.class(class) {
            out.extend(c.supertypes.iter().map(String::as_str));
        }
        for r in &self.relationships {
            if r.kind.is_inheritance() && r.source == class && !out.contains(&r.target.as_str()) {
                out.push(&r.target);
            }
        }
        out
    }

    /// The class and all its transitive ancestors that are declared in the
    /// model, nearest first.
    pub fn lineage(&self, class: &str) -> Vec<&ClassDecl> {
        let mut seen: Vec<&str> = Vec::new();
        let mut queue = vec![class];
        let mut out = Vec::new();
        while let Some(name) = queue.first().copied() {
            queue.remove(0);
            if seen.contains(&name) {
                continue;
            }
            seen.push(name);
            if let Some(c) = self.class(name) {
                out.push(c);
                queue.extend(self.parents_of(name));
            }
        }
        out
    }

    /// Whether `attr` is declared on `class` or one of its ancestors.
    pub fn resolves_attribute(&self, class: &str, attr: &str) -> bool {
        self.lineage(class)
            .iter()
            .any(|c| c.attribute(attr).is_some())
    }
}

/// Element path helpers: dotted names, positional indices for relationships
/// and clauses.
pub mod path {
    pub fn class(model: &str, class: &str) -> String {
        format!("{model}.{class}")
    }

    pub fn member(model: &str, class: &str, member: &str) -> String {
        format!("{model}.{class}.{member}")
    }

    pub fn constraint(model: &str, class: &str, index: usize) -> String {
        format!("{model}.{class}.constraint[{index}]")
    }

    pub fn relationship(model: &str, index: usize) -> String {
        format!("{model}.rel[{index}]")
    }

    pub fn sequence(model: &str, name: &str) -> String {
        format!("{model}.sequence[{name}]")
    }

    pub fn event(model: &str, sequence: &str, event: &str) -> String {
        format!("{model}.sequence[{sequence}].{event}")
    }

    pub fn instance(model: &str) -> String {
        format!("{model}.instance")
    }
}

/// `selectCourse` -> `SelectCourse`.
pub fn upper_camel(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_exactly_the_vocabulary() {
        let names: Vec<&str> = TAG_REGISTRY.iter().map(|d| d.name).collect();
        assert_eq!(
            names,
            [
                "variable",
                "extensible",
                "incomplete",
                "appl-class",
                "static",
                "dynamic",
                "for-all-new-methods",
                "optional",
                "separation-template",
                "separation-hook",
                "c-hook"
            ]
        );
        for d in TAG_REGISTRY {
            assert_eq!(d.name.parse::<Tag>().unwrap(), d.tag);
        }
        assert!("extensble".parse::<Tag>().is_err());
    }

    #[test]
    fn tagset_iterates_in_registry_order() {
        let set = TagSet::from([Tag::Dynamic, Tag::Variable, Tag::CHook]);
        let order: Vec<Tag> = set.iter().collect();
        assert_eq!(order, [Tag::Variable, Tag::Dynamic, Tag::CHook]);
    }

    #[test]
    fn timing_requires_exactly_one_tag() {
        assert_eq!(TagSet::from([Tag::Static]).timing(), Some(Timing::Static));
        assert_eq!(TagSet::from([Tag::Dynamic]).timing(), Some(Timing::Dynamic));
        assert_eq!(TagSet::from([Tag::Static, Tag::Dynamic]).timing(), None);
        assert_eq!(TagSet::new().timing(), None);
    }

    #[test]
    fn upper_camel_capitalises_first_letter() {
        assert_eq!(upper_camel("selectCourse"), "SelectCourse");
        assert_eq!(upper_camel("X"), "X");
        assert_eq!(upper_camel(""), "");
    }

    #[test]
    fn lineage_follows_relationships_and_supertypes() {
        let mut m = Model::new("M");
        let mut a = ClassDecl::new("A");
        a.attributes
            .push(AttributeDecl::new("x", "int", Visibility::Private));
        let mut b = ClassDecl::new("B");
        b.supertypes.push("A".into());
        m.classes.extend([a, b, ClassDecl::new("C")]);
        m.relationships
            .push(Relationship::new(RelKind::Generalization, "C", "B"));
        let names: Vec<&str> = m.lineage("C").iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["C", "B", "A"]);
        assert!(m.resolves_attribute("C", "x"));
        assert!(!m.resolves_attribute("A", "y"));
    }

    #[test]
    fn models_compare_by_value() {
        let mut a = Model::new("M");
        a.classes.push(ClassDecl::new("X"));
        let mut b = Model::new("M");
        let mut x = ClassDecl::new("Y");
        x.name = "X".into();
        b.classes.push(x);
        assert_eq!(a, b);
    }
}
