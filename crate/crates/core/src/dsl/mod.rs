//! Textual model format (`.umlf`): parser and canonical printer.
//!
//! ```text
//! model WebEdu {
//!   abstract class SelectCourse {
//!     method selectCourse() { public abstract tags { variable, dynamic } }
//!   }
//!   generalization Student -> Actor { tags { incomplete, static } }
//! }
//! ```
//!
//! The full grammar is in `docs/umlf-format.md`.

use std::fmt;

pub mod lexer;
mod parser;
mod printer;

pub use parser::parse;
pub use printer::print;

use lexer::Pos;

/// A syntax or resolution error. Line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub fn new(pos: Pos, expected: impl Into<String>, found: impl Into<String>) -> Self {
        Self {
            line: pos.line,
            column: pos.column,
            expected: expected.into(),
            found: found.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: expected {}, found {}",
            self.line, self.column, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

/// Renders a list of parse errors one per line, prefixed with `origin`.
pub fn render_errors(origin: &str, errors: &[ParseError]) -> String {
    errors.iter().map(|e| format!("{origin}:{e}\n")).collect()
}

/// Quotes a string literal for any of the text formats.
pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
