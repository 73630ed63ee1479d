use std::fmt::Write;

use super::quote;
use crate::model::{ClassDecl, ClassKind, ClauseForm, ClauseScope, Model, Relationship, TagSet};

fn tags(set: &TagSet) -> String {
    let names: Vec<&str> = set.iter().map(|t| t.name()).collect();
    format!("tags {{ {} }}", names.join(", "))
}

/// Canonical text for `model`: two-space indent, one member per line, tags
/// in registry order, LF line endings.
pub fn print(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {} {{", model.name);
    for class in &model.classes {
        print_class(&mut out, class);
    }
    for rel in &model.relationships {
        print_relationship(&mut out, rel);
    }
    for seq in &model.sequences {
        let _ = writeln!(
            out,
            "  sequence {} for {}.{} {{",
            seq.name, seq.owner.class, seq.owner.method
        );
        for e in &seq.events {
            if e.optional {
                let _ = writeln!(out, "    event {} {{ optional }}", e.name);
            } else {
                let _ = writeln!(out, "    event {}", e.name);
            }
        }
        out.push_str("  }\n");
    }
    if let Some(inst) = &model.instance {
        let _ = writeln!(out, "  instance {}", inst.name);
        for cfg in &inst.configs {
            let _ = writeln!(out, "  configure {} {{", cfg.class);
            for (k, v) in &cfg.values {
                let _ = writeln!(out, "    {k} = {v}");
            }
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}

fn print_class(out: &mut String, c: &ClassDecl) {
    let _ = write!(
        out,
        "  {}{} {}",
        if c.is_abstract { "abstract " } else { "" },
        match c.kind {
            ClassKind::Class => "class",
            ClassKind::Interface => "interface",
        },
        c.name
    );
    if !c.supertypes.is_empty() {
        let _ = write!(out, " : {}", c.supertypes.join(", "));
    }
    out.push_str(" {\n");
    if !c.tags.is_empty() {
        let _ = writeln!(out, "    {}", tags(&c.tags));
    }
    if let Some(t) = c.extension_point {
        let _ = writeln!(out, "    extension-point {t}");
    }
    for a in &c.attributes {
        let _ = write!(
            out,
            "    attr {} : {} {{ {}",
            a.name, a.type_name, a.visibility
        );
        if let Some(note) = &a.note {
            let _ = write!(out, " note {}", quote(note));
        }
        out.push_str(" }\n");
    }
    for m in &c.methods {
        let params: Vec<String> = m
            .params
            .iter()
            .map(|p| format!("{}: {}", p.name, p.type_name))
            .collect();
        let _ = write!(out, "    method {}({})", m.name, params.join(", "));
        if let Some(r) = &m.return_type {
            let _ = write!(out, ": {r}");
        }
        let _ = write!(out, " {{ {}", m.visibility);
        if m.is_abstract {
            out.push_str(" abstract");
        }
        if m.invokes_hooks {
            out.push_str(" invokes-hooks");
        }
        if !m.tags.is_empty() {
            let _ = write!(out, " {}", tags(&m.tags));
        }
        out.push_str(" }\n");
    }
    for k in &c.constraints {
        out.push_str("    constraint ");
        match &k.scope {
            ClauseScope::ForAllNewMethods => out.push_str("forAllNewMethods"),
            ClauseScope::Method(m) => {
                let _ = write!(out, "on {m}");
            }
        }
        match &k.form {
            ClauseForm::Preserves(a) => {
                let _ = write!(out, " preserves {a}");
                if let Some(o) = &k.origin {
                    let _ = write!(out, " from {o}");
                }
            }
            ClauseForm::Pure => out.push_str(" pure"),
            ClauseForm::Opaque(t) => {
                let _ = write!(out, " text {}", quote(t));
            }
        }
        if k.satisfied_by_construction {
            out.push_str(" by-construction");
        }
        out.push('\n');
    }
    out.push_str("  }\n");
}

fn print_relationship(out: &mut String, r: &Relationship) {
    let _ = write!(out, "  {} {} -> {}", r.kind, r.source, r.target);
    if let Some(role) = &r.role {
        let _ = write!(out, " role {role}");
    }
    if let Some(mult) = &r.multiplicity {
        let _ = write!(out, " mult {}", quote(mult));
    }
    if !r.tags.is_empty() {
        let _ = write!(out, " {{ {} }}", tags(&r.tags));
    }
    out.push('\n');
}
