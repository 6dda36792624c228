//! On-disk transcript formats.
//!
//! Two formats are supported and carry exactly the same information:
//!
//! * [`dsl`] — the line-oriented `.cpt` dialect, meant to be written and
//!   diffed by hand;
//! * [`interchange`] — a strict JSON document for programmatic exchange.
//!
//! Both parsers are all-or-nothing: they either return a transcript that
//! passes [`crate::validate_transcript`] with no violations, or a list of
//! positioned diagnostics and no transcript at all.

pub mod dsl;
pub mod interchange;

use std::fmt;

/// What a diagnostic is complaining about.
///
/// `InvalidTranscript` marks input that parsed structurally but failed a
/// transcript-level validation rule; the message carries the specific
/// violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticCode {
    BadKeyword,
    BadNumber,
    UnterminatedString,
    UnknownKind,
    DuplicateHeader,
    MissingHeader,
    InvalidTranscript,
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagnosticCode::BadKeyword => "BadKeyword",
            DiagnosticCode::BadNumber => "BadNumber",
            DiagnosticCode::UnterminatedString => "UnterminatedString",
            DiagnosticCode::UnknownKind => "UnknownKind",
            DiagnosticCode::DuplicateHeader => "DuplicateHeader",
            DiagnosticCode::MissingHeader => "MissingHeader",
            DiagnosticCode::InvalidTranscript => "InvalidTranscript",
        };
        f.write_str(s)
    }
}

/// A positioned parse failure. `line` and `column` are 1-based and point
/// at the offending token (character columns, not bytes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: u32,
    pub column: u32,
    pub code: DiagnosticCode,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn new(line: u32, column: u32, code: DiagnosticCode, message: impl Into<String>) -> Self {
        ParseDiagnostic { line, column, code, message: message.into() }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} {} {}", self.line, self.column, self.code, self.message)
    }
}
