use std::io::IsTerminal;

use umlf::{Diagnostic, Severity};

/// ANSI colouring, on only for terminals and unless `UMLF_COLOR=0`.
#[derive(Debug, Clone, Copy)]
pub struct Style {
    color: bool,
}

impl Style {
    pub fn detect() -> Self {
        let disabled = std::env::var("UMLF_COLOR").is_ok_and(|v| v == "0");
        Self {
            color: !disabled && std::io::stdout().is_terminal() && std::io::stderr().is_terminal(),
        }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    pub fn error(&self, text: &str) -> String {
        self.paint("1;31", text)
    }

    pub fn diagnostics(&self, diags: &[Diagnostic]) -> String {
        diags
            .iter()
            .map(|d| {
                let line = d.to_string();
                let sev = d.severity.to_string();
                let head = match d.severity {
                    Severity::Error => self.paint("1;31", &sev),
                    Severity::Warning => self.paint("1;33", &sev),
                };
                format!("{head}{}\n", &line[sev.len()..])
            })
            .collect()
    }
}
