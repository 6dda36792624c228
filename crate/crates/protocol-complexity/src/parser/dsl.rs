//! The line-oriented `.cpt` transcript dialect.
//!
//! ```text
//! # car elevation, subject 04
//! @protocol car04
//! @task car_elevation
//! @duration 300
//! @meta experience=4_years
//! H INSTRUCT t=1.0 "place the jack under the pinch point"
//! W ACTION_OK t=20.0 refs=0 "jack placed"
//! W COMPLETE t=25.0 "done"
//! ```
//!
//! Headers come first (`@protocol`, `@task`, `@duration` required, `@meta`
//! optional and repeatable), then one event per line:
//! `<H|W> <KIND> t=<seconds> [refs=<seq,...>] "<text>"`. Lines whose first
//! non-blank character is `#` are comments. Input may be LF or CRLF;
//! [`to_dsl`] always emits LF. Numbers are plain decimals with an optional
//! fraction — no exponents, signs, or locale separators. Sequence numbers
//! are implicit in line order.
//!
//! Parsing is all-or-nothing and collects every diagnostic it can; a
//! successful parse always yields a transcript with zero validation
//! violations, so `parse_dsl(to_dsl(t))` is the identity on valid
//! transcripts.

use super::{DiagnosticCode, ParseDiagnostic};
use crate::transcript::{validate_transcript, Event, EventKind, Role, Transcript, Violation};
use std::collections::BTreeMap;

fn kind_from_keyword(word: &str) -> Option<EventKind> {
    Some(match word {
        "INSTRUCT" => EventKind::Instruct,
        "INFO" => EventKind::Info,
        "MIDCUE" => EventKind::MidActionCue,
        "ACTION_OK" => EventKind::ActionOk,
        "ACTION_WRONG" => EventKind::ActionWrong,
        "ACTION_PARTIAL" => EventKind::ActionPartial,
        "ACK" => EventKind::Ack,
        "QUESTION" => EventKind::Question,
        "COMPLETE" => EventKind::Complete,
        _ => return None,
    })
}

/// `<digits>` or `<digits>.<digits>`; nothing else.
fn is_plain_decimal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i == 0 {
        return false;
    }
    if i == b.len() {
        return true;
    }
    if b[i] != b'.' {
        return false;
    }
    i += 1;
    let frac = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    i == b.len() && i > frac
}

/// Character-based scanner over one line; columns are 1-based.
struct Scan {
    chars: Vec<char>,
    pos: usize,
}

impl Scan {
    fn new(line: &str) -> Self {
        Scan { chars: line.chars().collect(), pos: 0 }
    }

    fn col(&self) -> u32 {
        self.pos as u32 + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    /// Consumes a run of non-whitespace characters; returns its start column.
    fn take_word(&mut self) -> (u32, String) {
        let col = self.col();
        let mut word = String::new();
        while matches!(self.peek(), Some(c) if !c.is_whitespace()) {
            word.push(self.bump().unwrap());
        }
        (col, word)
    }

    fn rest(&self) -> String {
        self.chars[self.pos..].iter().collect()
    }
}

struct ParsedEvent {
    role: Role,
    kind: EventKind,
    t: f64,
    refs: Option<Vec<u32>>,
    text: String,
}

fn parse_event_line(line_no: u32, line: &str) -> Result<ParsedEvent, ParseDiagnostic> {
    let diag = |col: u32, code: DiagnosticCode, msg: &str| {
        Err(ParseDiagnostic::new(line_no, col, code, msg))
    };

    let mut s = Scan::new(line);
    s.skip_ws();

    let (role_col, role_word) = s.take_word();
    let role = match role_word.as_str() {
        "H" => Role::Helper,
        "W" => Role::Worker,
        _ => return diag(role_col, DiagnosticCode::BadKeyword, "expected role H or W"),
    };

    s.skip_ws();
    let (kind_col, kind_word) = s.take_word();
    let kind = match kind_from_keyword(&kind_word) {
        Some(k) => k,
        None => {
            let msg = format!("unknown event kind `{kind_word}`");
            return Err(ParseDiagnostic::new(line_no, kind_col, DiagnosticCode::UnknownKind, msg));
        }
    };

    s.skip_ws();
    let (t_col, t_word) = s.take_word();
    let Some(t_value) = t_word.strip_prefix("t=") else {
        return diag(t_col, DiagnosticCode::BadKeyword, "expected t=<seconds>");
    };
    if !is_plain_decimal(t_value) {
        return diag(t_col + 2, DiagnosticCode::BadNumber, "time must be a plain decimal");
    }
    let t: f64 = t_value.parse().expect("plain decimal parses as f64");

    s.skip_ws();
    let refs = if s.peek() != Some('"') {
        let (refs_col, refs_word) = s.take_word();
        let Some(list) = refs_word.strip_prefix("refs=") else {
            return diag(refs_col, DiagnosticCode::BadKeyword, "expected refs=<seq,...> or quoted text");
        };
        let mut refs = Vec::new();
        let mut offset = 5u32; // chars consumed by "refs="
        for part in list.split(',') {
            let part_col = refs_col + offset;
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return diag(part_col, DiagnosticCode::BadNumber, "refs must be a comma-separated list of event numbers");
            }
            match part.parse::<u32>() {
                Ok(r) => refs.push(r),
                Err(_) => {
                    return diag(part_col, DiagnosticCode::BadNumber, "event reference out of range")
                }
            }
            offset += part.chars().count() as u32 + 1;
        }
        s.skip_ws();
        Some(refs)
    } else {
        None
    };

    let quote_col = s.col();
    if s.bump() != Some('"') {
        return diag(quote_col, DiagnosticCode::BadKeyword, "expected quoted event text");
    }
    let mut text = String::new();
    loop {
        match s.bump() {
            None => {
                return diag(quote_col, DiagnosticCode::UnterminatedString, "event text is missing its closing quote")
            }
            Some('"') => break,
            Some('\\') => {
                let esc_col = s.col() - 1;
                match s.bump() {
                    Some('n') => text.push('\n'),
                    Some('r') => text.push('\r'),
                    Some('t') => text.push('\t'),
                    Some('\\') => text.push('\\'),
                    Some('"') => text.push('"'),
                    _ => {
                        return diag(esc_col, DiagnosticCode::BadKeyword, "unknown escape sequence in event text")
                    }
                }
            }
            Some(c) => text.push(c),
        }
    }

    s.skip_ws();
    if !s.at_end() {
        return diag(s.col(), DiagnosticCode::BadKeyword, "unexpected trailing characters after event text");
    }

    Ok(ParsedEvent { role, kind, t, refs, text })
}

#[derive(Default)]
struct Headers {
    protocol: Option<(String, u32)>,
    task: Option<(String, u32)>,
    duration: Option<(f64, u32)>,
    // A malformed @duration value already gets its own diagnostic; this keeps
    // the header from also being reported as missing.
    duration_seen: bool,
    meta: BTreeMap<String, (String, u32)>,
}

fn parse_directive(
    line_no: u32,
    line: &str,
    headers: &mut Headers,
    diags: &mut Vec<ParseDiagnostic>,
) {
    let mut s = Scan::new(line);
    s.skip_ws();
    let (dir_col, directive) = s.take_word();
    s.skip_ws();
    let value_col = s.col();
    let value = s.rest().trim_end().to_string();

    match directive.as_str() {
        "@protocol" => {
            if headers.protocol.is_some() {
                diags.push(ParseDiagnostic::new(line_no, dir_col, DiagnosticCode::DuplicateHeader, "@protocol given twice"));
            } else {
                headers.protocol = Some((value, line_no));
            }
        }
        "@task" => {
            if headers.task.is_some() {
                diags.push(ParseDiagnostic::new(line_no, dir_col, DiagnosticCode::DuplicateHeader, "@task given twice"));
            } else {
                headers.task = Some((value, line_no));
            }
        }
        "@duration" => {
            if headers.duration_seen {
                diags.push(ParseDiagnostic::new(line_no, dir_col, DiagnosticCode::DuplicateHeader, "@duration given twice"));
            } else if !is_plain_decimal(&value) {
                headers.duration_seen = true;
                diags.push(ParseDiagnostic::new(line_no, value_col, DiagnosticCode::BadNumber, "duration must be a plain decimal"));
            } else {
                headers.duration_seen = true;
                headers.duration = Some((value.parse().expect("plain decimal parses as f64"), line_no));
            }
        }
        "@meta" => match value.split_once('=') {
            Some((k, v)) => {
                let key = k.trim_end().to_string();
                let val = v.trim_start().to_string();
                if headers.meta.contains_key(&key) {
                    diags.push(ParseDiagnostic::new(line_no, value_col, DiagnosticCode::DuplicateHeader, format!("@meta key {key:?} given twice")));
                } else {
                    headers.meta.insert(key, (val, line_no));
                }
            }
            None => diags.push(ParseDiagnostic::new(line_no, value_col, DiagnosticCode::BadKeyword, "expected @meta key=value")),
        },
        _ => diags.push(ParseDiagnostic::new(line_no, dir_col, DiagnosticCode::BadKeyword, format!("unknown directive `{directive}`"))),
    }
}

/// Maps a validation violation back to the source line that produced it.
fn violation_position(
    v: &Violation,
    headers: &Headers,
    event_lines: &[u32],
    eof: (u32, u32),
) -> (u32, u32) {
    let event_line = |seq: u32| {
        event_lines.get(seq as usize).copied().map(|l| (l, 1)).unwrap_or(eof)
    };
    match v {
        Violation::NoEvents => eof,
        Violation::BadOpening { seq }
        | Violation::RoleKindMismatch { seq }
        | Violation::NonDenseSeq { seq, .. }
        | Violation::BadTime { seq }
        | Violation::NonMonotoneTime { seq }
        | Violation::MisplacedComplete { seq }
        | Violation::EmptyRefs { seq }
        | Violation::DanglingRef { seq, .. } => event_line(*seq),
        Violation::BadDuration => headers.duration.as_ref().map(|&(_, l)| (l, 1)).unwrap_or(eof),
        Violation::BadIdentifier { field } => {
            let line = if *field == "protocol_id" {
                headers.protocol.as_ref().map(|&(_, l)| l)
            } else {
                headers.task.as_ref().map(|&(_, l)| l)
            };
            line.map(|l| (l, 1)).unwrap_or(eof)
        }
        Violation::BadMetaKey { key } | Violation::BadMetaValue { key } => {
            headers.meta.get(key).map(|&(_, l)| (l, 1)).unwrap_or(eof)
        }
    }
}

/// Parses `.cpt` source into a validated transcript.
///
/// All-or-nothing: on failure every collectable diagnostic is returned,
/// sorted by position, and no partial transcript escapes. On success the
/// result is guaranteed to have no validation violations.
pub fn parse_dsl(src: &str) -> Result<Transcript, Vec<ParseDiagnostic>> {
    let mut diags = Vec::new();
    let mut headers = Headers::default();
    let mut events: Vec<Event> = Vec::new();
    let mut event_lines: Vec<u32> = Vec::new();
    let mut seen_event = false;

    let lines: Vec<&str> = src.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    // A trailing newline produces one empty trailing segment; it is not a line.
    let line_count = if lines.last() == Some(&"") { lines.len() - 1 } else { lines.len() };

    for (idx, raw) in lines.iter().take(line_count).enumerate() {
        let line_no = idx as u32 + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('@') {
            if seen_event {
                let col = raw.chars().take_while(|c| c.is_whitespace()).count() as u32 + 1;
                diags.push(ParseDiagnostic::new(line_no, col, DiagnosticCode::BadKeyword, "header directive after the first event"));
            } else {
                parse_directive(line_no, raw, &mut headers, &mut diags);
            }
            continue;
        }
        seen_event = true;
        match parse_event_line(line_no, raw) {
            Ok(p) => {
                events.push(Event {
                    seq: events.len() as u32,
                    role: p.role,
                    kind: p.kind,
                    t: p.t,
                    text: p.text,
                    explicit_refs: p.refs,
                });
                event_lines.push(line_no);
            }
            Err(d) => diags.push(d),
        }
    }

    let eof_line = line_count.max(1) as u32;
    let eof_col = lines
        .get(line_count.wrapping_sub(1))
        .map(|l| l.chars().count() as u32 + 1)
        .unwrap_or(1);
    let eof = (eof_line, eof_col);

    for (name, present) in [
        ("@protocol", headers.protocol.is_some()),
        ("@task", headers.task.is_some()),
        ("@duration", headers.duration_seen),
    ] {
        if !present {
            diags.push(ParseDiagnostic::new(eof.0, eof.1, DiagnosticCode::MissingHeader, format!("missing required header {name}")));
        }
    }

    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(diags);
    }

    let transcript = Transcript {
        protocol_id: headers.protocol.as_ref().unwrap().0.clone(),
        task_name: headers.task.as_ref().unwrap().0.clone(),
        duration: headers.duration.unwrap().0,
        subject_meta: headers.meta.iter().map(|(k, (v, _))| (k.clone(), v.clone())).collect(),
        events,
    };

    let violations = validate_transcript(&transcript);
    if !violations.is_empty() {
        let mut diags: Vec<ParseDiagnostic> = violations
            .iter()
            .map(|v| {
                let (line, col) = violation_position(v, &headers, &event_lines, eof);
                ParseDiagnostic::new(line, col, DiagnosticCode::InvalidTranscript, v.to_string())
            })
            .collect();
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(diags);
    }

    Ok(transcript)
}

fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out
}

/// Shortest decimal form that parses back to the identical `f64`.
fn fmt_seconds(x: f64) -> String {
    format!("{x}")
}

/// Serializes a valid transcript to canonical `.cpt` text: LF line ends,
/// headers first, metadata sorted by key, one event per line. Rejects
/// transcripts that do not validate cleanly.
pub fn to_dsl(t: &Transcript) -> Result<String, Vec<Violation>> {
    let violations = validate_transcript(t);
    if !violations.is_empty() {
        return Err(violations);
    }

    let mut out = String::new();
    out.push_str(&format!("@protocol {}\n", t.protocol_id));
    out.push_str(&format!("@task {}\n", t.task_name));
    out.push_str(&format!("@duration {}\n", fmt_seconds(t.duration)));
    for (k, v) in &t.subject_meta {
        out.push_str(&format!("@meta {k}={v}\n"));
    }
    for e in &t.events {
        let role = match e.role {
            Role::Helper => 'H',
            Role::Worker => 'W',
        };
        out.push_str(&format!("{role} {} t={}", e.kind, fmt_seconds(e.t)));
        if let Some(refs) = &e.explicit_refs {
            let list: Vec<String> = refs.iter().map(|r| r.to_string()).collect();
            out.push_str(&format!(" refs={}", list.join(",")));
        }
        out.push_str(&format!(" \"{}\"\n", escape_text(&e.text)));
    }
    Ok(out)
}
