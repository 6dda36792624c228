//! Event-level model of a collaboration transcript.
//!
//! A transcript is the ordered record of one helper/worker session: who
//! produced each utterance or action, what kind of move it was, when it
//! happened, and (optionally) which earlier events it drew information
//! from. Validation is deliberately non-fatal: [`validate_transcript`]
//! returns every rule violation as data so callers can report all of them
//! at once.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Which side of the collaboration produced an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Helper,
    Worker,
}

/// The kind of move an event records.
///
/// Kinds partition by role: `Instruct`, `Info`, and `MidActionCue` are
/// helper moves; the rest are worker moves. `Complete` is the terminal
/// worker confirmation and may appear at most once, as the final event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Instruct,
    Info,
    MidActionCue,
    ActionOk,
    ActionWrong,
    ActionPartial,
    Ack,
    Question,
    Complete,
}

impl EventKind {
    /// The role this kind belongs to.
    pub fn role(self) -> Role {
        match self {
            EventKind::Instruct | EventKind::Info | EventKind::MidActionCue => Role::Helper,
            _ => Role::Worker,
        }
    }

    /// All kinds, in canonical order.
    pub const ALL: [EventKind; 9] = [
        EventKind::Instruct,
        EventKind::Info,
        EventKind::MidActionCue,
        EventKind::ActionOk,
        EventKind::ActionWrong,
        EventKind::ActionPartial,
        EventKind::Ack,
        EventKind::Question,
        EventKind::Complete,
    ];
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EventKind::Instruct => "INSTRUCT",
            EventKind::Info => "INFO",
            EventKind::MidActionCue => "MIDCUE",
            EventKind::ActionOk => "ACTION_OK",
            EventKind::ActionWrong => "ACTION_WRONG",
            EventKind::ActionPartial => "ACTION_PARTIAL",
            EventKind::Ack => "ACK",
            EventKind::Question => "QUESTION",
            EventKind::Complete => "COMPLETE",
        };
        f.write_str(s)
    }
}

/// One utterance or action in a transcript.
///
/// `explicit_refs`, when present, names the earlier events this one drew
/// information from; it overrides the default assumption that an event
/// responds to its immediate predecessor. References may repeat: a single
/// source event can supply more than one cue (say, a spoken instruction
/// plus a pointing gesture).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    pub seq: u32,
    pub role: Role,
    pub kind: EventKind,
    /// Seconds from session start.
    #[serde(rename = "t_s")]
    pub t: f64,
    pub text: String,
    #[serde(rename = "refs", default, skip_serializing_if = "Option::is_none")]
    pub explicit_refs: Option<Vec<u32>>,
}

/// A full session record.
///
/// `subject_meta` is opaque key-value annotation (experience level,
/// modality, ...). It is carried through every pipeline stage untouched
/// and never interpreted, except that the `analyze` report can copy one
/// chosen key into its grouping column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transcript {
    pub protocol_id: String,
    pub task_name: String,
    /// Total session length in seconds; never less than the last event time.
    #[serde(rename = "duration_s")]
    pub duration: f64,
    pub subject_meta: BTreeMap<String, String>,
    pub events: Vec<Event>,
}

/// A single validation failure. Violations are data, not errors: a caller
/// gets the complete list in one pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The transcript has no events at all.
    NoEvents,
    /// The first event is not a helper `Instruct` or `Info`.
    BadOpening { seq: u32 },
    /// An event's kind belongs to the other role.
    RoleKindMismatch { seq: u32 },
    /// `seq` values must be exactly `0..events.len()` in order.
    NonDenseSeq { seq: u32, expected: u32 },
    /// A timestamp is negative, `-0`, or not finite.
    BadTime { seq: u32 },
    /// A timestamp is smaller than its predecessor's.
    NonMonotoneTime { seq: u32 },
    /// `Complete` somewhere other than the final event (or repeated).
    MisplacedComplete { seq: u32 },
    /// `explicit_refs` is present but empty.
    EmptyRefs { seq: u32 },
    /// A reference does not point strictly backwards.
    DanglingRef { seq: u32, reference: u32 },
    /// Duration is non-positive, not finite, or less than the last event time.
    BadDuration,
    /// `protocol_id` or `task_name` is empty, untrimmed, or contains control characters.
    BadIdentifier { field: &'static str },
    /// A metadata key is empty or contains whitespace, `=`, or control characters.
    BadMetaKey { key: String },
    /// A metadata value is untrimmed or contains line breaks.
    BadMetaValue { key: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoEvents => write!(f, "transcript has no events"),
            Violation::BadOpening { seq } => {
                write!(f, "event {seq}: transcript must open with a helper INSTRUCT or INFO")
            }
            Violation::RoleKindMismatch { seq } => {
                write!(f, "event {seq}: kind does not belong to the stated role")
            }
            Violation::NonDenseSeq { seq, expected } => {
                write!(f, "event {seq}: expected seq {expected} (seqs must be dense and ordered)")
            }
            Violation::BadTime { seq } => write!(f, "event {seq}: time must be finite and >= 0"),
            Violation::NonMonotoneTime { seq } => {
                write!(f, "event {seq}: time goes backwards")
            }
            Violation::MisplacedComplete { seq } => {
                write!(f, "event {seq}: COMPLETE is only allowed once, as the final event")
            }
            Violation::EmptyRefs { seq } => {
                write!(f, "event {seq}: refs present but empty")
            }
            Violation::DanglingRef { seq, reference } => {
                write!(f, "event {seq}: ref {reference} does not point to an earlier event")
            }
            Violation::BadDuration => {
                write!(f, "duration must be finite, positive, and >= the last event time")
            }
            Violation::BadIdentifier { field } => {
                write!(f, "{field} must be non-empty, trimmed, and free of control characters")
            }
            Violation::BadMetaKey { key } => {
                write!(f, "meta key {key:?} must be non-empty without whitespace, '=', or control characters")
            }
            Violation::BadMetaValue { key } => {
                write!(f, "meta value for {key:?} must be trimmed and single-line")
            }
        }
    }
}

fn check_identifier(value: &str, field: &'static str, out: &mut Vec<Violation>) {
    if value.is_empty() || value != value.trim() || value.chars().any(|c| c.is_control()) {
        out.push(Violation::BadIdentifier { field });
    }
}

/// Checks every well-formedness rule and returns all violations found.
///
/// An empty result means the transcript is valid: events are densely
/// numbered with non-decreasing, non-negative times; roles and kinds
/// agree; the session opens with a helper `Instruct`/`Info`; `Complete`
/// appears at most once and only at the end; references point strictly
/// backwards; the duration covers the last event; and the identifying
/// strings and metadata are representable in both on-disk formats.
pub fn validate_transcript(t: &Transcript) -> Vec<Violation> {
    let mut out = Vec::new();

    check_identifier(&t.protocol_id, "protocol_id", &mut out);
    check_identifier(&t.task_name, "task_name", &mut out);
    for (key, value) in &t.subject_meta {
        if key.is_empty()
            || key.chars().any(|c| c.is_whitespace() || c == '=' || c.is_control())
        {
            out.push(Violation::BadMetaKey { key: key.clone() });
        }
        if value != value.trim() || value.contains('\n') || value.contains('\r') {
            out.push(Violation::BadMetaValue { key: key.clone() });
        }
    }

    if t.events.is_empty() {
        out.push(Violation::NoEvents);
    } else {
        let first = &t.events[0];
        if first.role != Role::Helper
            || !matches!(first.kind, EventKind::Instruct | EventKind::Info)
        {
            out.push(Violation::BadOpening { seq: first.seq });
        }

        let last_index = t.events.len() - 1;
        let mut prev_t = 0.0f64;
        for (i, e) in t.events.iter().enumerate() {
            if e.seq as usize != i {
                out.push(Violation::NonDenseSeq { seq: e.seq, expected: i as u32 });
            }
            if e.kind.role() != e.role {
                out.push(Violation::RoleKindMismatch { seq: e.seq });
            }
            if !e.t.is_finite() || e.t < 0.0 || (e.t == 0.0 && e.t.is_sign_negative()) {
                out.push(Violation::BadTime { seq: e.seq });
            } else if i > 0 && e.t < prev_t {
                out.push(Violation::NonMonotoneTime { seq: e.seq });
            }
            if e.t.is_finite() {
                prev_t = e.t.max(prev_t);
            }
            if e.kind == EventKind::Complete && i != last_index {
                out.push(Violation::MisplacedComplete { seq: e.seq });
            }
            match &e.explicit_refs {
                Some(refs) if refs.is_empty() => out.push(Violation::EmptyRefs { seq: e.seq }),
                Some(refs) => {
                    for &r in refs {
                        if r >= e.seq {
                            out.push(Violation::DanglingRef { seq: e.seq, reference: r });
                        }
                    }
                }
                None => {}
            }
        }

        let last_t = t.events[last_index].t;
        if !t.duration.is_finite() || t.duration <= 0.0 || (last_t.is_finite() && t.duration < last_t)
        {
            out.push(Violation::BadDuration);
        }
    }

    out
}

/// Convenience constructor for well-formed transcripts.
///
/// Sequencing is automatic and each event's role is derived from its kind,
/// so a builder-made transcript can only violate the temporal or duration
/// rules if the caller feeds it bad values. `build` does not validate;
/// run [`validate_transcript`] on the result where it matters.
#[derive(Debug, Clone)]
pub struct TranscriptBuilder {
    protocol_id: String,
    task_name: String,
    duration: Option<f64>,
    subject_meta: BTreeMap<String, String>,
    events: Vec<Event>,
}

impl TranscriptBuilder {
    pub fn new(protocol_id: impl Into<String>, task_name: impl Into<String>) -> Self {
        TranscriptBuilder {
            protocol_id: protocol_id.into(),
            task_name: task_name.into(),
            duration: None,
            subject_meta: BTreeMap::new(),
            events: Vec::new(),
        }
    }

    pub fn meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.subject_meta.insert(key.into(), value.into());
        self
    }

    /// Appends an event; the role comes from the kind.
    pub fn event(mut self, kind: EventKind, t: f64, text: impl Into<String>) -> Self {
        let seq = self.events.len() as u32;
        self.events.push(Event {
            seq,
            role: kind.role(),
            kind,
            t,
            text: text.into(),
            explicit_refs: None,
        });
        self
    }

    /// Appends an event with explicit information-cue references.
    pub fn event_with_refs(
        mut self,
        kind: EventKind,
        t: f64,
        text: impl Into<String>,
        refs: &[u32],
    ) -> Self {
        let seq = self.events.len() as u32;
        self.events.push(Event {
            seq,
            role: kind.role(),
            kind,
            t,
            text: text.into(),
            explicit_refs: Some(refs.to_vec()),
        });
        self
    }

    pub fn duration(mut self, duration: f64) -> Self {
        self.duration = Some(duration);
        self
    }

    /// Finishes the transcript. Without an explicit duration the last
    /// event time is used.
    pub fn build(self) -> Transcript {
        let fallback = self.events.last().map(|e| e.t).unwrap_or(0.0);
        Transcript {
            protocol_id: self.protocol_id,
            task_name: self.task_name,
            duration: self.duration.unwrap_or(fallback),
            subject_meta: self.subject_meta,
            events: self.events,
        }
    }
}
