//! Diagnostics and the rule catalog.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

macro_rules! catalog {
    ($( $variant:ident => $code:literal, $sev:ident, $summary:literal; )*) => {
        /// Every diagnostic code the toolkit can emit.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Code {
            $( $variant, )*
        }

        impl Code {
            pub const ALL: &'static [Code] = &[ $( Code::$variant, )* ];

            pub fn as_str(self) -> &'static str {
                match self { $( Code::$variant => $code, )* }
            }

            pub fn severity(self) -> Severity {
                match self { $( Code::$variant => Severity::$sev, )* }
            }

            pub fn summary(self) -> &'static str {
                match self { $( Code::$variant => $summary, )* }
            }
        }
    };
}

catalog! {
    // model validation
    E001 => "UMLF-E001", Error, "{variable} on a non-method element";
    E002 => "UMLF-E002", Error, "{extensible} on a non-class element";
    E003 => "UMLF-E003", Error, "{incomplete} on an element other than a generalization or realization";
    E004 => "UMLF-E004", Error, "variation point carries neither {static} nor {dynamic}";
    E005 => "UMLF-E005", Error, "variation point carries both {static} and {dynamic}";
    E006 => "UMLF-E006", Error, "{appl-class} class without an {incomplete} generalization to its supertype";
    E007 => "UMLF-E007", Error, "for-all-new-methods clause on a class that is not extensible and not an extensible interface";
    E008 => "UMLF-E008", Error, "{optional} outside a sequence event";
    E009 => "UMLF-E009", Error, "{static}/{dynamic} on an element that is not a variation point";
    E010 => "UMLF-E010", Error, "preserves-clause names an undeclared attribute";
    W001 => "UMLF-W001", Warning, "extensible interface declares no abstract methods";
    W002 => "UMLF-W002", Warning, "sequence pattern attached to a method that is not a variation point";
    // effect checking
    E101 => "UMLF-E101", Error, "method writes an attribute its restriction requires to be preserved";
    E102 => "UMLF-E102", Error, "method restricted to be pure writes attributes";
    W101 => "UMLF-W101", Warning, "opaque restriction carried unchecked";
    // instantiation
    E200 => "UMLF-E200", Error, "framework still contains variable methods or extensible classes";
    E201 => "UMLF-E201", Error, "abstract method of the extensible interface is not implemented";
    E202 => "UMLF-E202", Error, "method trace does not conform to its sequence pattern";
    E203 => "UMLF-E203", Error, "supertype is not an extensible interface of the framework";
    E204 => "UMLF-E204", Error, "instantiation spec targets a different framework";
    E205 => "UMLF-E205", Error, "invalid MOP configuration";
    E206 => "UMLF-E206", Error, "application class name collides with an existing class";
    E207 => "UMLF-E207", Error, "method implementation does not match the declared signature";
    W201 => "UMLF-W201", Warning, "no trace supplied; sequence pattern unchecked";
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The validator's twelve rules, in catalog order.
pub const VALIDATOR_RULES: &[Code] = &[
    Code::E001,
    Code::E002,
    Code::E003,
    Code::E004,
    Code::E005,
    Code::E006,
    Code::E007,
    Code::E008,
    Code::E009,
    Code::E010,
    Code::W001,
    Code::W002,
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: Code, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code,
            severity: code.severity(),
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `<severity> <code> <path>: <message>`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {}",
            self.severity, self.code, self.path, self.message
        )
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// One line per diagnostic, trailing newline included.
pub fn render(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{d}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_format_is_stable() {
        let d = Diagnostic::new(
            Code::E005,
            "WebEdu.SelectCourse.selectCourse",
            "both timing tags",
        );
        assert_eq!(
            d.to_string(),
            "error UMLF-E005 WebEdu.SelectCourse.selectCourse: both timing tags"
        );
        let w = Diagnostic::new(Code::W001, "M.A", "no abstract methods");
        assert_eq!(w.severity, Severity::Warning);
        assert!(!has_errors(std::slice::from_ref(&w)));
        assert_eq!(render(&[w]), "warning UMLF-W001 M.A: no abstract methods\n");
    }

    #[test]
    fn codes_are_unique() {
        let mut seen = std::collections::HashSet::new();
        for c in Code::ALL {
            assert!(seen.insert(c.as_str()), "duplicate {c}");
            assert!(c.as_str().starts_with("UMLF-"));
        }
        assert_eq!(VALIDATOR_RULES.len(), 12);
    }
}
