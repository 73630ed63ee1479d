//! Instantiation spec format (`.inst`).
//!
//! ```text
//! instance SimpleApp of WebEdu {
//!   class SimpleSelect : SelectCourseStrategy {
//!     method selectCourse() { reads { fLogin } trace [showSelectionPage] }
//!   }
//!   configure SelectCourseMOP { login = true }
//! }
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;

use super::{AppClassSpec, InstantiationSpec, MethodImpl};
use crate::conformance::{EffectSummary, Trace};
use crate::dsl::lexer::{tokenize, Cursor, TokenKind};
use crate::dsl::ParseError;
use crate::model::{MopConfig, Param};

type PResult<T> = Result<T, ParseError>;

pub fn parse_spec(src: &str) -> Result<InstantiationSpec, Vec<ParseError>> {
    let tokens = tokenize(src).map_err(|e| vec![e])?;
    let mut cur = Cursor::new(tokens);
    let mut errors = Vec::new();
    let spec = match header(&mut cur) {
        Ok(mut spec) => {
            body(&mut cur, &mut spec, &mut errors);
            Some(spec)
        }
        Err(e) => {
            errors.push(e);
            None
        }
    };
    match spec {
        Some(spec) if errors.is_empty() => Ok(spec),
        _ => {
            errors.sort_by_key(|e| (e.line, e.column));
            Err(errors)
        }
    }
}

fn header(cur: &mut Cursor) -> PResult<InstantiationSpec> {
    cur.expect_word("instance")?;
    let (name, _) = cur.ident("an instance name")?;
    cur.expect_word("of")?;
    let (framework, _) = cur.ident("a framework model name")?;
    cur.expect(&TokenKind::LBrace)?;
    Ok(InstantiationSpec::new(name, framework))
}

fn body(cur: &mut Cursor, spec: &mut InstantiationSpec, errors: &mut Vec<ParseError>) {
    let mut classes = HashSet::new();
    let mut configured = HashSet::new();
    loop {
        if cur.eat(&TokenKind::RBrace) {
            if !cur.at_eof() {
                errors.push(cur.error("end of input"));
            }
            return;
        }
        if cur.at_eof() {
            errors.push(cur.error("`}`"));
            return;
        }
        let pos = cur.pos();
        let start = cur.checkpoint();
        let item = if cur.is_word("class") {
            app_class(cur).map(|c| {
                if !classes.insert(c.name.clone()) {
                    errors.push(ParseError::new(
                        pos,
                        "a new class name",
                        format!("duplicate class `{}`", c.name),
                    ));
                }
                spec.classes.push(c);
            })
        } else if cur.is_word("configure") {
            config(cur).map(|c| {
                if !configured.insert(c.class.clone()) {
                    errors.push(ParseError::new(
                        pos,
                        "one configure block per class",
                        format!("second `configure {}`", c.class),
                    ));
                }
                spec.configs.push(c);
            })
        } else {
            Err(cur.error("`class`, `configure` or `}`"))
        };
        if let Err(e) = item {
            errors.push(e);
            cur.rewind(start);
            skip_item(cur);
        }
    }
}

/// Skips the item at the cursor: up to its balanced closing brace, the
/// next item keyword starting a line, or the brace closing the instance.
fn skip_item(cur: &mut Cursor) {
    let mut depth = 0usize;
    cur.advance();
    while !cur.at_eof() {
        if cur.starts_line() && (cur.is_word("class") || cur.is_word("configure")) {
            return;
        }
        match cur.peek_kind() {
            TokenKind::LBrace => depth += 1,
            TokenKind::RBrace if depth == 0 => return,
            TokenKind::RBrace => {
                depth -= 1;
                if depth == 0 {
                    cur.advance();
                    return;
                }
            }
            _ => {}
        }
        cur.advance();
    }
}

fn app_class(cur: &mut Cursor) -> PResult<AppClassSpec> {
    cur.expect_word("class")?;
    let (name, _) = cur.ident("a class name")?;
    cur.expect(&TokenKind::Colon)?;
    let (supertype, _) = cur.ident("an extensible interface name")?;
    cur.expect(&TokenKind::LBrace)?;
    let mut methods: Vec<MethodImpl> = Vec::new();
    while !cur.eat(&TokenKind::RBrace) {
        let pos = cur.pos();
        let m = method(cur)?;
        if methods.iter().any(|x| x.name == m.name) {
            return Err(ParseError::new(
                pos,
                "a new method name",
                format!("duplicate method `{}`", m.name),
            ));
        }
        methods.push(m);
    }
    Ok(AppClassSpec {
        name,
        supertype,
        methods,
    })
}

fn method(cur: &mut Cursor) -> PResult<MethodImpl> {
    cur.expect_word("method")?;
    let (name, _) = cur.ident("a method name")?;
    let mut imp = MethodImpl::new(name);
    cur.expect(&TokenKind::LParen)?;
    if !cur.eat(&TokenKind::RParen) {
        loop {
            let (pname, pos) = cur.ident("a parameter name")?;
            cur.expect(&TokenKind::Colon)?;
            let (ty, _) = cur.ident("a type name")?;
            if imp.params.iter().any(|p| p.name == pname) {
                return Err(ParseError::new(
                    pos,
                    "a new parameter name",
                    format!("duplicate parameter `{pname}`"),
                ));
            }
            imp.params.push(Param::new(pname, ty));
            if !cur.eat(&TokenKind::Comma) {
                break;
            }
        }
        cur.expect(&TokenKind::RParen)?;
    }
    cur.expect(&TokenKind::LBrace)?;
    if cur.eat_word("reads") {
        imp.effects.reads = names(cur, &TokenKind::LBrace, &TokenKind::RBrace)?;
    }
    if cur.eat_word("writes") {
        imp.effects.writes = names(cur, &TokenKind::LBrace, &TokenKind::RBrace)?;
    }
    if cur.eat_word("trace") {
        cur.expect(&TokenKind::LBracket)?;
        let mut events = Vec::new();
        if !cur.eat(&TokenKind::RBracket) {
            loop {
                events.push(cur.ident("an event name")?.0);
                if !cur.eat(&TokenKind::Comma) {
                    break;
                }
            }
            cur.expect(&TokenKind::RBracket)?;
        }
        imp.effects.trace = Some(Trace { events });
    }
    if !cur.is(&TokenKind::RBrace) {
        return Err(cur.error("`reads`, `writes`, `trace` or `}`"));
    }
    cur.advance();
    Ok(imp)
}

fn names(cur: &mut Cursor, open: &TokenKind, close: &TokenKind) -> PResult<BTreeSet<String>> {
    cur.expect(open)?;
    let mut out = BTreeSet::new();
    if cur.eat(close) {
        return Ok(out);
    }
    loop {
        let (name, pos) = cur.ident("an attribute name")?;
        if !out.insert(name.clone()) {
            return Err(ParseError::new(
                pos,
                "distinct names",
                format!("`{name}` twice"),
            ));
        }
        if !cur.eat(&TokenKind::Comma) {
            break;
        }
    }
    cur.expect(close)?;
    Ok(out)
}

fn config(cur: &mut Cursor) -> PResult<MopConfig> {
    cur.expect_word("configure")?;
    let (class, _) = cur.ident("a MOP class name")?;
    cur.expect(&TokenKind::LBrace)?;
    let mut values: Vec<(String, bool)> = Vec::new();
    while !cur.eat(&TokenKind::RBrace) {
        let (key, pos) = cur.ident("a parameter name or `}`")?;
        cur.expect(&TokenKind::Eq)?;
        let value = if cur.eat_word("true") {
            true
        } else if cur.eat_word("false") {
            false
        } else {
            return Err(cur.error("`true` or `false`"));
        };
        if values.iter().any(|(k, _)| *k == key) {
            return Err(ParseError::new(
                pos,
                "each parameter once",
                format!("`{key}` set twice"),
            ));
        }
        values.push((key, value));
    }
    Ok(MopConfig { class, values })
}

fn list<'a>(items: impl Iterator<Item = &'a String>) -> String {
    items.map(String::as_str).collect::<Vec<_>>().join(", ")
}

fn effects(e: &EffectSummary) -> String {
    let mut parts = Vec::new();
    if !e.reads.is_empty() {
        parts.push(format!("reads {{ {} }}", list(e.reads.iter())));
    }
    if !e.writes.is_empty() {
        parts.push(format!("writes {{ {} }}", list(e.writes.iter())));
    }
    if let Some(t) = &e.trace {
        parts.push(format!("trace [{}]", list(t.events.iter())));
    }
    parts.join(" ")
}

/// Canonical text of `spec`; [`parse_spec`] reads it back unchanged.
pub fn print_spec(spec: &InstantiationSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "instance {} of {} {{",
        spec.instance_name, spec.framework
    );
    for c in &spec.classes {
        let _ = writeln!(out, "  class {} : {} {{", c.name, c.supertype);
        for m in &c.methods {
            let params: Vec<String> = m
                .params
                .iter()
                .map(|p| format!("{}: {}", p.name, p.type_name))
                .collect();
            let body = effects(&m.effects);
            if body.is_empty() {
                let _ = writeln!(out, "    method {}({}) {{ }}", m.name, params.join(", "));
            } else {
                let _ = writeln!(
                    out,
                    "    method {}({}) {{ {body} }}",
                    m.name,
                    params.join(", ")
                );
            }
        }
        out.push_str("  }\n");
    }
    for cfg in &spec.configs {
        let _ = writeln!(out, "  configure {} {{", cfg.class);
        for (k, v) in &cfg.values {
            let _ = writeln!(out, "    {k} = {v}");
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
