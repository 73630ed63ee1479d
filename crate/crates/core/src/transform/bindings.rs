//! Bindings file: one `Class[.method] => model[(args)]` per line.
//!
//! ```text
//! SelectCourse.selectCourse => strategy
//! ShowCourse => hook-list(before = showContent)
//! Login.login => mop(major = "major users only", validate)
//! ```

use super::{Binding, Locus, ModelId, MopParam, Rewrite};
use crate::dsl::lexer::{tokenize, Cursor, TokenKind};
use crate::dsl::{quote, ParseError};

pub fn parse_bindings(src: &str) -> Result<Vec<Binding>, Vec<ParseError>> {
    let tokens = tokenize(src).map_err(|e| vec![e])?;
    let mut cur = Cursor::new(tokens);
    let mut out = Vec::new();
    let mut errors = Vec::new();
    while !cur.at_eof() {
        let start = cur.pos();
        match binding(&mut cur) {
            Ok(b) => out.push(b),
            Err(e) => {
                errors.push(e);
                if cur.pos() == start {
                    cur.advance();
                }
                while !cur.at_eof() && !cur.starts_line() {
                    cur.advance();
                }
            }
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

fn binding(cur: &mut Cursor) -> Result<Binding, ParseError> {
    if !cur.starts_line() {
        return Err(cur.error("a binding on a new line"));
    }
    let (class, _) = cur.ident("a class name")?;
    let locus = if cur.eat(&TokenKind::Dot) {
        Locus::method(class, cur.ident("a method name")?.0)
    } else {
        Locus::class(class)
    };
    cur.expect(&TokenKind::FatArrow)?;
    let at = cur.pos();
    let (name, _) = cur.ident("an implementation model")?;
    let id = ModelId::parse(&name).ok_or_else(|| {
        ParseError::new(
            at,
            "strategy, unification, hook-list or mop",
            format!("`{name}`"),
        )
    })?;
    let rewrite = match id {
        ModelId::Strategy => Rewrite::Strategy,
        ModelId::Unification => Rewrite::Unification,
        ModelId::HookList => {
            cur.expect(&TokenKind::LParen)?;
            cur.expect_word("before")?;
            cur.expect(&TokenKind::Eq)?;
            let (before, _) = cur.ident("a method name")?;
            cur.expect(&TokenKind::RParen)?;
            Rewrite::HookList { before }
        }
        ModelId::Mop => {
            cur.expect(&TokenKind::LParen)?;
            let mut params = Vec::new();
            loop {
                let (name, _) = cur.ident("a parameter name")?;
                params.push(if cur.eat(&TokenKind::Eq) {
                    MopParam::described(name, cur.string("a description string")?)
                } else {
                    MopParam::new(name)
                });
                if !cur.eat(&TokenKind::Comma) {
                    break;
                }
            }
            cur.expect(&TokenKind::RParen)?;
            Rewrite::Mop { params }
        }
    };
    Ok(Binding::new(locus, rewrite))
}

pub fn print_bindings(bindings: &[Binding]) -> String {
    let mut out = String::new();
    for b in bindings {
        out.push_str(&format!("{} => {}", b.locus, b.rewrite.id()));
        match &b.rewrite {
            Rewrite::HookList { before } => out.push_str(&format!("(before = {before})")),
            Rewrite::Mop { params } => {
                let items: Vec<String> = params
                    .iter()
                    .map(|p| match &p.description {
                        Some(d) => format!("{} = {}", p.name, quote(d)),
                        None => p.name.clone(),
                    })
                    .collect();
                out.push_str(&format!("({})", items.join(", ")));
            }
            Rewrite::Strategy | Rewrite::Unification => {}
        }
        out.push('\n');
    }
    out
}
