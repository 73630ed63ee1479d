//! Instantiation restrictions: sequence-pattern conformance of traces and
//! effect summaries against restriction clauses.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::{ClassDecl, ClauseForm, RestrictionClause, SequencePattern};

/// Upper bound on optional events accepted by [`expand`].
pub const MAX_OPTIONAL_EVENTS: usize = 16;

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace {
    pub events: Vec<String>,
}

impl Trace {
    pub fn new<I, S>(events: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            events: events.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.events.join(", "))
    }
}

/// Declared effects of one method implementation; stands in for its body.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EffectSummary {
    pub reads: BTreeSet<String>,
    pub writes: BTreeSet<String>,
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// The trace is the pattern with some optional events deleted.
    #[default]
    Strict,
    /// As strict, after discarding events outside the pattern's alphabet.
    Loose,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index into the trace where conformance first fails; the trace length
    /// when the trace ends too early.
    pub position: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceResult {
    pub first_violation: Option<Violation>,
}

impl ConformanceResult {
    pub fn conforms(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `trace` against `pattern`. Event names within a pattern are
/// unique, so each trace event can match at most one pattern position and a
/// single left-to-right scan decides conformance.
pub fn conforms(trace: &Trace, pattern: &SequencePattern, mode: Mode) -> ConformanceResult {
    let events: Vec<(usize, &str)> = match mode {
        Mode::Strict => trace
            .events
            .iter()
            .map(String::as_str)
            .enumerate()
            .collect(),
        Mode::Loose => trace
            .events
            .iter()
            .enumerate()
            .filter(|(_, e)| pattern.contains_event(e))
            .map(|(i, e)| (i, e.as_str()))
            .collect(),
    };

    let mut next = 0; // next pattern position that may still match
    for &(at, event) in &events {
        let found = pattern.events[next..].iter().position(|e| e.name == event);
        match found {
            Some(offset) => {
                let skipped = &pattern.events[next..next + offset];
                if let Some(missing) = skipped.iter().find(|e| !e.optional) {
                    return violation(at, format!("`{}` before `{event}`", missing.name));
                }
                next += offset + 1;
            }
            None => {
                let expected = if pattern.contains_event(event) {
                    format!("no repeated or out-of-order `{event}`")
                } else {
                    format!("an event of {}, not `{event}`", pattern.name)
                };
                return violation(at, expected);
            }
        }
    }
    if let Some(missing) = pattern.events[next..].iter().find(|e| !e.optional) {
        return violation(trace.len(), format!("`{}`", missing.name));
    }
    ConformanceResult {
        first_violation: None,
    }
}

fn violation(position: usize, expected: String) -> ConformanceResult {
    ConformanceResult {
        first_violation: Some(Violation { position, expected }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pattern {pattern} has {optional} optional events; at most {MAX_OPTIONAL_EVENTS} can be expanded")]
pub struct TooManyOptionals {
    pub pattern: String,
    pub optional: usize,
}

/// Every strict-mode admissible trace of `pattern`: one per subset of its
/// optional events.
pub fn expand(pattern: &SequencePattern) -> Result<BTreeSet<Trace>, TooManyOptionals> {
    let optional: Vec<usize> = pattern
        .events
        .iter()
        .enumerate()
        .filter(|(_, e)| e.optional)
        .map(|(i, _)| i)
        .collect();
    if optional.len() > MAX_OPTIONAL_EVENTS {
        return Err(TooManyOptionals {
            pattern: pattern.name.clone(),
            optional: optional.len(),
        });
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..(1u32 << optional.len()) {
        let dropped: HashSet<usize> = optional
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &i)| i)
            .collect();
        out.insert(Trace::new(
            pattern
                .events
                .iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, e)| e.name.clone()),
        ));
    }
    Ok(out)
}

/// Checks declared effects against restriction clauses. `path` locates the
/// method being checked in diagnostics.
pub fn check_effects(
    summary: &EffectSummary,
    clauses: &[RestrictionClause],
    owning_class: &ClassDecl,
    path: &str,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for clause in clauses.iter().filter(|c| !c.satisfied_by_construction) {
        let owner = clause.origin.as_deref().unwrap_or(&owning_class.name);
        match &clause.form {
            ClauseForm::Preserves(attr) => {
                if summary.writes.contains(attr) {
                    out.push(Diagnostic::new(
                        Code::E101,
                        path,
                        format!("writes {attr}, which {owner} requires to be preserved"),
                    ));
                }
            }
            ClauseForm::Pure => {
                if !summary.writes.is_empty() {
                    let writes: Vec<&str> = summary.writes.iter().map(String::as_str).collect();
                    out.push(Diagnostic::new(
                        Code::E102,
                        path,
                        format!("restricted to be pure but writes {}", writes.join(", ")),
                    ));
                }
            }
            ClauseForm::Opaque(text) => out.push(Diagnostic::new(
                Code::W101,
                path,
                format!("restriction {text:?} is carried but not checked"),
            )),
        }
    }
    out
}
