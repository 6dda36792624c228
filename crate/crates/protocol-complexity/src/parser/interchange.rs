//! The JSON interchange document for transcripts.
//!
//! The wire shape mirrors [`Transcript`] directly:
//!
//! ```json
//! {
//!   "protocol_id": "car04",
//!   "task_name": "car_elevation",
//!   "duration_s": 300.0,
//!   "subject_meta": {"experience": "4_years"},
//!   "events": [
//!     {"seq": 0, "role": "helper", "kind": "instruct", "t_s": 1.0,
//!      "text": "place the jack", "refs": null}
//!   ]
//! }
//! ```
//!
//! `refs` may be omitted or `null` when the event carries no explicit
//! cue references. Unknown fields are rejected. Like the line dialect,
//! parsing is all-or-nothing: either a fully validated transcript comes
//! back, or diagnostics and nothing else.

use super::{DiagnosticCode, ParseDiagnostic};
use crate::transcript::{validate_transcript, Transcript};

fn classify(err: &serde_json::Error) -> DiagnosticCode {
    if err.is_syntax() || err.is_eof() {
        return DiagnosticCode::BadKeyword;
    }
    let msg = err.to_string();
    if msg.starts_with("missing field") {
        DiagnosticCode::MissingHeader
    } else if msg.starts_with("unknown variant") {
        DiagnosticCode::UnknownKind
    } else if msg.starts_with("invalid type") || msg.starts_with("invalid value") {
        DiagnosticCode::BadNumber
    } else {
        DiagnosticCode::BadKeyword
    }
}

/// Parses a JSON interchange document into a validated transcript.
pub fn parse_interchange(src: &str) -> Result<Transcript, Vec<ParseDiagnostic>> {
    let transcript: Transcript = match serde_json::from_str(src) {
        Ok(t) => t,
        Err(e) => {
            let line = (e.line() as u32).max(1);
            let column = (e.column() as u32).max(1);
            return Err(vec![ParseDiagnostic::new(line, column, classify(&e), e.to_string())]);
        }
    };

    let violations = validate_transcript(&transcript);
    if !violations.is_empty() {
        return Err(violations
            .iter()
            .map(|v| ParseDiagnostic::new(1, 1, DiagnosticCode::InvalidTranscript, v.to_string()))
            .collect());
    }
    Ok(transcript)
}

/// Serializes a valid transcript as pretty-printed JSON with a trailing
/// newline. Rejects transcripts that do not validate cleanly.
pub fn to_interchange(t: &Transcript) -> Result<String, Vec<crate::transcript::Violation>> {
    let violations = validate_transcript(t);
    if !violations.is_empty() {
        return Err(violations);
    }
    let mut out = serde_json::to_string_pretty(t).expect("transcripts serialize");
    out.push('\n');
    Ok(out)
}
