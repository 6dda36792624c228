//! Event/information-cue graph construction, atomic-task segmentation, and
//! task classification.
//!
//! Every event in a transcript becomes a vertex; information-cues become
//! directed forward edges. An event with explicit references receives
//! exactly those in-edges (duplicates allowed — repeated references model
//! multi-modal cues as parallel edges); an event without references receives
//! one inferred in-edge from its immediate predecessor. The final event
//! additionally feeds a synthetic sink through a terminal-completion edge,
//! which counts toward that event's out-degree while the sink itself stays
//! out of every complexity sum.
//!
//! Segmentation cuts the event sequence into atomic tasks: a helper event
//! opens a new task only when the previous task has reached a closing
//! worker action. Each task is then classified into one of five interaction
//! patterns (or left irregular).

use crate::baseline::ProtocolShape;
use crate::transcript::{validate_transcript, EventKind, Role, Transcript, Violation};
use std::fmt;

/// Why an edge exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// The target event explicitly referenced the source event.
    ExplicitRef,
    /// Chain default: an event with no references draws on its predecessor.
    InferredAdjacency,
    /// The final event's cue into the synthetic sink.
    TerminalCompletion,
}

impl fmt::Display for EdgeOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeOrigin::ExplicitRef => "explicit_ref",
            EdgeOrigin::InferredAdjacency => "inferred_adjacency",
            EdgeOrigin::TerminalCompletion => "terminal_completion",
        })
    }
}

/// One directed information-cue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CueEdge {
    pub from_seq: u32,
    /// Target event, or the sink ordinal (= event count) for the terminal edge.
    pub to_seq: u32,
    pub origin: EdgeOrigin,
}

/// Interaction pattern of one atomic task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskType {
    /// Single instruction executed correctly.
    TypeI,
    /// Wrong action, corrected through clarifying information.
    TypeII,
    /// Partial action followed by a reiterated instruction.
    TypeIII,
    /// Instruction delivered in acknowledged installments.
    TypeIV,
    /// Prolonged action steered by mid-action cues.
    TypeV,
    Irregular,
}

impl fmt::Display for TaskType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskType::TypeI => "I",
            TaskType::TypeII => "II",
            TaskType::TypeIII => "III",
            TaskType::TypeIV => "IV",
            TaskType::TypeV => "V",
            TaskType::Irregular => "irregular",
        })
    }
}

/// One contiguous helper-initiated slice of the transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicTask {
    pub task_index: usize,
    /// Contiguous event ordinals belonging to this task.
    pub event_seqs: Vec<u32>,
    /// The helper event that opened the task (always the first ordinal).
    pub root_helper_seq: u32,
    pub task_type: TaskType,
}

impl AtomicTask {
    pub fn start_seq(&self) -> u32 {
        self.event_seqs[0]
    }

    pub fn end_seq(&self) -> u32 {
        *self.event_seqs.last().expect("tasks are non-empty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    /// The transcript failed validation; graphs are built from clean input only.
    InvalidTranscript(Vec<Violation>),
    /// The event sequence cannot be segmented into atomic tasks.
    IrregularStructure { seq: u32, reason: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::InvalidTranscript(violations) => {
                let details: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                write!(f, "transcript failed validation: {}", details.join("; "))
            }
            GraphError::IrregularStructure { seq, reason } => {
                write!(f, "irregular structure at event {seq}: {reason}")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// The full cue graph: events plus one synthetic sink, cue edges, the task
/// partition, and the extracted protocol shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolGraph {
    pub edges: Vec<CueEdge>,
    pub tasks: Vec<AtomicTask>,
    pub shape: ProtocolShape,
    roles: Vec<Role>,
}

impl ProtocolGraph {
    /// Number of real (non-sink) nodes.
    pub fn event_count(&self) -> usize {
        self.roles.len()
    }

    /// Ordinal of the synthetic sink.
    pub fn sink_seq(&self) -> u32 {
        self.roles.len() as u32
    }

    pub fn role(&self, seq: u32) -> Option<Role> {
        self.roles.get(seq as usize).copied()
    }

    pub(crate) fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// Per-event degree (in + out) over the full edge list. Edges into the
    /// sink count on their source side only.
    pub fn degree_table(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.roles.len()];
        for e in &self.edges {
            if let Some(d) = deg.get_mut(e.from_seq as usize) {
                *d += 1;
            }
            if let Some(d) = deg.get_mut(e.to_seq as usize) {
                *d += 1;
            }
        }
        deg
    }

    /// Plain-text edge list, one `from to origin` line per edge; the sink
    /// target is spelled `sink`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            if e.to_seq == self.sink_seq() {
                out.push_str(&format!("{} sink {}\n", e.from_seq, e.origin));
            } else {
                out.push_str(&format!("{} {} {}\n", e.from_seq, e.to_seq, e.origin));
            }
        }
        out
    }

    /// Task table CSV with a fixed header.
    pub fn to_task_csv(&self) -> String {
        let mut out = String::from("task_index,start_seq,end_seq,type\n");
        for t in &self.tasks {
            out.push_str(&format!("{},{},{},{}\n", t.task_index, t.start_seq(), t.end_seq(), t.task_type));
        }
        out
    }
}

fn closes_task(kind: EventKind) -> bool {
    matches!(kind, EventKind::ActionOk | EventKind::Complete)
}

fn segment_valid(t: &Transcript) -> Result<Vec<AtomicTask>, GraphError> {
    let mut spans: Vec<(u32, u32)> = Vec::new();
    let mut current_start: Option<u32> = None;
    let mut last_worker: Option<EventKind> = None;

    for e in &t.events {
        match e.role {
            Role::Helper => {
                match current_start {
                    None => current_start = Some(e.seq),
                    Some(start) => {
                        if last_worker.is_some_and(closes_task) {
                            spans.push((start, e.seq - 1));
                            current_start = Some(e.seq);
                            last_worker = None;
                        }
                        // Otherwise the helper is clarifying or continuing an
                        // installment and stays inside the open task.
                    }
                }
            }
            Role::Worker => {
                if current_start.is_none() {
                    return Err(GraphError::IrregularStructure {
                        seq: e.seq,
                        reason: "worker event before any helper event".to_string(),
                    });
                }
                last_worker = Some(e.kind);
            }
        }
    }

    let last_seq = t.events.last().expect("validated transcripts are non-empty").seq;
    match last_worker {
        Some(EventKind::ActionOk) | Some(EventKind::Ack) | Some(EventKind::Complete) => {
            spans.push((current_start.expect("an open task exists"), last_seq));
        }
        _ => {
            return Err(GraphError::IrregularStructure {
                seq: last_seq,
                reason: "final task never reaches a closing worker event".to_string(),
            })
        }
    }

    Ok(spans
        .into_iter()
        .enumerate()
        .map(|(task_index, (start, end))| {
            let event_seqs: Vec<u32> = (start..=end).collect();
            let task_type = classify_span(t, start, end);
            AtomicTask { task_index, event_seqs, root_helper_seq: start, task_type }
        })
        .collect())
}

/// Splits a valid transcript into atomic tasks. A helper event opens a new
/// task only when the previous worker event closed the current one
/// (`ACTION_OK` or `COMPLETE`); a trailing `ACK` may close the final task.
pub fn segment_tasks(t: &Transcript) -> Result<Vec<AtomicTask>, GraphError> {
    let violations = validate_transcript(t);
    if !violations.is_empty() {
        return Err(GraphError::InvalidTranscript(violations));
    }
    segment_valid(t)
}

fn classify_span(t: &Transcript, start: u32, end: u32) -> TaskType {
    let events = &t.events[start as usize..=end as usize];
    let kinds: Vec<EventKind> = events.iter().map(|e| e.kind).collect();

    let closing_after = |from: usize| {
        kinds[from..].iter().any(|k| closes_task(*k))
    };

    // Wrong action corrected by information, eventually closed.
    let type_ii = kinds.iter().enumerate().any(|(i, k)| {
        *k == EventKind::ActionWrong
            && kinds[i..].iter().enumerate().any(|(j, k2)| *k2 == EventKind::Info && closing_after(i + j))
    });
    if type_ii {
        return TaskType::TypeII;
    }

    // Partial action answered by a reiterated instruction.
    let type_iii = kinds.iter().enumerate().any(|(i, k)| {
        *k == EventKind::ActionPartial && kinds[i..].iter().any(|k2| *k2 == EventKind::Instruct)
    });
    if type_iii {
        return TaskType::TypeIII;
    }

    // Mid-action cue between an instruction and the closing action.
    let type_v = kinds.iter().enumerate().any(|(i, k)| {
        *k == EventKind::Instruct
            && kinds[i..].iter().enumerate().any(|(j, k2)| *k2 == EventKind::MidActionCue && closing_after(i + j))
    });
    if type_v {
        return TaskType::TypeV;
    }

    // Opens with at least two acknowledged information installments.
    let installments = kinds
        .chunks(2)
        .take_while(|pair| {
            pair.len() == 2
                && pair[0] == EventKind::Info
                && matches!(pair[1], EventKind::Ack | EventKind::Question)
        })
        .count();
    if kinds.first() == Some(&EventKind::Info) && installments >= 2 {
        return TaskType::TypeIV;
    }

    // One instruction, every response a correct action (the last may be the
    // terminal completion).
    let type_i = kinds.first() == Some(&EventKind::Instruct)
        && kinds.len() >= 2
        && kinds[1..kinds.len() - 1].iter().all(|k| *k == EventKind::ActionOk)
        && closes_task(kinds[kinds.len() - 1]);
    if type_i {
        return TaskType::TypeI;
    }

    TaskType::Irregular
}

/// Classifies one segmented task. Precedence for mixed signatures:
/// II > III > V > IV, then I, otherwise `Irregular`.
pub fn classify_task(task: &AtomicTask, t: &Transcript) -> TaskType {
    classify_span(t, task.start_seq(), task.end_seq())
}

/// Builds the cue graph of a valid transcript: explicit-reference edges,
/// inferred chain edges for unreferenced events, and the terminal-completion
/// edge into the sink.
pub fn build_graph(t: &Transcript) -> Result<ProtocolGraph, GraphError> {
    let violations = validate_transcript(t);
    if !violations.is_empty() {
        return Err(GraphError::InvalidTranscript(violations));
    }
    let tasks = segment_valid(t)?;

    let mut edges = Vec::with_capacity(t.events.len() + 1);
    for e in t.events.iter().skip(1) {
        match &e.explicit_refs {
            Some(refs) => {
                for &r in refs {
                    edges.push(CueEdge { from_seq: r, to_seq: e.seq, origin: EdgeOrigin::ExplicitRef });
                }
            }
            None => {
                edges.push(CueEdge { from_seq: e.seq - 1, to_seq: e.seq, origin: EdgeOrigin::InferredAdjacency });
            }
        }
    }
    let last = t.events.last().expect("validated transcripts are non-empty").seq;
    edges.push(CueEdge {
        from_seq: last,
        to_seq: t.events.len() as u32,
        origin: EdgeOrigin::TerminalCompletion,
    });

    let roles: Vec<Role> = t.events.iter().map(|e| e.role).collect();
    let shape = crate::baseline::shape_from_parts(&tasks, &edges, &roles);
    Ok(ProtocolGraph { edges, tasks, shape, roles })
}
