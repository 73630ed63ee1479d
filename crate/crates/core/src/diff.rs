//! Structural comparison of two models.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{path, ClassDecl, Model, Relationship};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Change {
    Added,
    Removed,
    Changed,
}

impl fmt::Display for Change {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Change::Added => "+",
            Change::Removed => "-",
            Change::Changed => "~",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffEntry {
    pub change: Change,
    /// Path in the left model for removed/changed entries, in the right
    /// model for added ones.
    pub path: String,
    pub detail: String,
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.change, self.path, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub entries: Vec<DiffEntry>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn paths(&self, change: Change) -> BTreeSet<&str> {
        self.entries
            .iter()
            .filter(|e| e.change == change)
            .map(|e| e.path.as_str())
            .collect()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

struct Collector<'s> {
    scope: Option<&'s BTreeSet<String>>,
    entries: Vec<DiffEntry>,
}

impl Collector<'_> {
    fn push(&mut self, change: Change, path: String, detail: impl Into<String>) {
        if self.scope.is_none_or(|s| s.contains(&path)) {
            self.entries.push(DiffEntry {
                change,
                path,
                detail: detail.into(),
            });
        }
    }
}

/// Compares `a` against `b`. With a scope, only entries whose path is in
/// the scope are reported.
pub fn structural_diff(a: &Model, b: &Model, scope: Option<&BTreeSet<String>>) -> DiffReport {
    let mut out = Collector {
        scope,
        entries: Vec::new(),
    };
    let m = a.name.as_str();

    if a.name != b.name {
        out.push(
            Change::Changed,
            a.name.clone(),
            format!("model renamed to {}", b.name),
        );
    }
    if a.instance != b.instance {
        let detail = match (&a.instance, &b.instance) {
            (None, Some(i)) => format!("instance {} recorded", i.name),
            (Some(i), None) => format!("instance {} dropped", i.name),
            _ => "instance metadata changed".to_string(),
        };
        out.push(Change::Changed, path::instance(m), detail);
    }

    for ca in &a.classes {
        match b.class(&ca.name) {
            None => out.push(
                Change::Removed,
                path::class(m, &ca.name),
                format!("{} {}", ca.kind, ca.name),
            ),
            Some(cb) => diff_class(&mut out, m, ca, cb),
        }
    }
    for cb in &b.classes {
        if a.class(&cb.name).is_none() {
            out.push(
                Change::Added,
                path::class(&b.name, &cb.name),
                format!("{} {}", cb.kind, cb.name),
            );
        }
    }

    diff_relationships(&mut out, a, b);

    for pa in &a.sequences {
        match b.sequences.iter().find(|p| p.name == pa.name) {
            None => out.push(Change::Removed, path::sequence(m, &pa.name), pa.to_string()),
            Some(pb) if pa != pb => out.push(
                Change::Changed,
                path::sequence(m, &pa.name),
                format!("{pa} => {pb}"),
            ),
            Some(_) => {}
        }
    }
    for pb in &b.sequences {
        if !a.sequences.iter().any(|p| p.name == pb.name) {
            out.push(
                Change::Added,
                path::sequence(&b.name, &pb.name),
                pb.to_string(),
            );
        }
    }

    DiffReport {
        entries: out.entries,
    }
}

/// Every element path of `model`, in the form [`structural_diff`] reports.
pub fn element_paths(model: &Model) -> BTreeSet<String> {
    let m = model.name.as_str();
    let mut out = BTreeSet::from([m.to_string(), path::instance(m)]);
    for c in &model.classes {
        out.insert(path::class(m, &c.name));
        out.extend(
            c.attributes
                .iter()
                .map(|a| path::member(m, &c.name, &a.name)),
        );
        out.extend(c.methods.iter().map(|x| path::member(m, &c.name, &x.name)));
        out.extend((0..c.constraints.len()).map(|i| path::constraint(m, &c.name, i)));
    }
    out.extend((0..model.relationships.len()).map(|i| path::relationship(m, i)));
    out.extend(model.sequences.iter().map(|s| path::sequence(m, &s.name)));
    out
}

fn class_header(c: &ClassDecl) -> String {
    let tags: Vec<&str> = c.tags.iter().map(|t| t.name()).collect();
    format!(
        "{}{} {} : [{}] tags [{}]{}",
        if c.is_abstract { "abstract " } else { "" },
        c.kind,
        c.name,
        c.supertypes.join(", "),
        tags.join(", "),
        c.extension_point
            .map(|t| format!(" extension-point {t}"))
            .unwrap_or_default()
    )
}

fn diff_class(out: &mut Collector<'_>, model: &str, ca: &ClassDecl, cb: &ClassDecl) {
    let class_path = path::class(model, &ca.name);
    let ha = class_header(ca);
    let hb = class_header(cb);
    if ha != hb {
        out.push(Change::Changed, class_path.clone(), format!("{ha} => {hb}"));
    }

    diff_members(
        out,
        &class_path,
        &ca.attributes,
        &cb.attributes,
        |x| x.name.as_str(),
        |x| {
            format!(
                "attr {} : {} {}{}",
                x.name,
                x.type_name,
                x.visibility,
                x.note
                    .as_ref()
                    .map(|n| format!(" note {n:?}"))
                    .unwrap_or_default()
            )
        },
    );
    diff_members(
        out,
        &class_path,
        &ca.methods,
        &cb.methods,
        |x| x.name.as_str(),
        |x| {
            let tags: Vec<&str> = x.tags.iter().map(|t| t.name()).collect();
            format!(
                "method {} {}{} tags [{}]{}",
                x.signature(),
                x.visibility,
                if x.is_abstract { " abstract" } else { "" },
                tags.join(", "),
                if x.invokes_hooks {
                    " invokes-hooks"
                } else {
                    ""
                }
            )
        },
    );

    let n = ca.constraints.len().max(cb.constraints.len());
    for i in 0..n {
        let p = format!("{class_path}.constraint[{i}]");
        match (ca.constraints.get(i), cb.constraints.get(i)) {
            (Some(x), Some(y)) if x != y => out.push(Change::Changed, p, format!("{x} => {y}")),
            (Some(x), None) => out.push(Change::Removed, p, x.to_string()),
            (None, Some(y)) => out.push(Change::Added, p, y.to_string()),
            _ => {}
        }
    }
}

fn diff_members<T: PartialEq>(
    out: &mut Collector<'_>,
    class_path: &str,
    a: &[T],
    b: &[T],
    name: impl Fn(&T) -> &str,
    render: impl Fn(&T) -> String,
) {
    let mut removed: Vec<usize> = Vec::new();
    let mut added: Vec<usize> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        match b.iter().find(|y| name(y) == name(x)) {
            None => removed.push(i),
            Some(y) if x != y => out.push(
                Change::Changed,
                format!("{class_path}.{}", name(x)),
                format!("{} => {}", render(x), render(y)),
            ),
            Some(_) => {}
        }
    }
    for (j, y) in b.iter().enumerate() {
        if !a.iter().any(|x| name(x) == name(y)) {
            added.push(j);
        }
    }
    // An unmatched member on each side at the same position is a rename.
    let renamed: Vec<usize> = removed
        .iter()
        .copied()
        .filter(|i| added.contains(i))
        .collect();
    for i in &renamed {
        out.push(
            Change::Changed,
            format!("{class_path}.{}", name(&a[*i])),
            format!("{} => {}", render(&a[*i]), render(&b[*i])),
        );
    }
    for i in removed.iter().filter(|i| !renamed.contains(i)) {
        out.push(
            Change::Removed,
            format!("{class_path}.{}", name(&a[*i])),
            render(&a[*i]),
        );
    }
    for j in added.iter().filter(|j| !renamed.contains(j)) {
        out.push(
            Change::Added,
            format!("{class_path}.{}", name(&b[*j])),
            render(&b[*j]),
        );
    }
}

fn rel_key(r: &Relationship) -> (crate::model::RelKind, &str, &str, Option<&str>) {
    (r.kind, &r.source, &r.target, r.role.as_deref())
}

fn rel_text(r: &Relationship) -> String {
    let tags: Vec<&str> = r.tags.iter().map(|t| t.name()).collect();
    let mut s = format!("{} {} -> {}", r.kind, r.source, r.target);
    if let Some(role) = &r.role {
        s.push_str(&format!(" role {role}"));
    }
    if let Some(mult) = &r.multiplicity {
        s.push_str(&format!(" mult {mult:?}"));
    }
    if !tags.is_empty() {
        s.push_str(&format!(" tags [{}]", tags.join(", ")));
    }
    s
}

/// Relationships pair up by (kind, source, target, role), in order.
fn diff_relationships(out: &mut Collector<'_>, a: &Model, b: &Model) {
    let mut used = vec![false; b.relationships.len()];
    for (i, ra) in a.relationships.iter().enumerate() {
        let matched = b
            .relationships
            .iter()
            .enumerate()
            .find(|(j, rb)| !used[*j] && rel_key(rb) == rel_key(ra));
        match matched {
            None => out.push(
                Change::Removed,
                path::relationship(&a.name, i),
                rel_text(ra),
            ),
            Some((j, rb)) => {
                used[j] = true;
                if ra != rb {
                    out.push(
                        Change::Changed,
                        path::relationship(&a.name, i),
                        format!("{} => {}", rel_text(ra), rel_text(rb)),
                    );
                }
            }
        }
    }
    for (j, rb) in b.relationships.iter().enumerate() {
        if !used[j] {
            out.push(Change::Added, path::relationship(&b.name, j), rel_text(rb));
        }
    }
}
