//! Complexity analysis for remote-collaboration protocols.
//!
//! A *protocol* is the recorded exchange between a helper (who can see and
//! talk) and a worker (who manipulates the physical task): instructions,
//! clarifications, acknowledgements, and actions. This crate models such a
//! transcript as a directed graph of information cues, scores it with
//! entropy-style complexity metrics, and compares the score against the
//! cheapest protocol that could have accomplished the same exchange.
//!
//! The pipeline, end to end:
//!
//! 1. [`transcript`] — the event-level data model and its validation rules.
//! 2. [`parser`] — a line-oriented `.cpt` dialect and a JSON interchange
//!    format, both round-trip safe.
//! 3. [`graph`] — segmentation into atomic tasks, task classification, and
//!    the information-cue graph.
//! 4. [`metrics`] — information content, per-event complexity, and the
//!    protocol complexity index (PCI).
//! 5. [`baseline`] — the optimal-protocol lower bound (OPCI) and gap/ratio
//!    reporting.
//! 6. [`analytics`] — regression of completion time on PCI, running means,
//!    and cohort comparison.
//!
//! The crate is primarily a library; each major capability has a runnable
//! demo under `examples/`:
//!
//! ```text
//! cargo run -p protocol-complexity --example parse_and_validate
//! cargo run -p protocol-complexity --example atomic_tasks
//! cargo run -p protocol-complexity --example complexity_report
//! cargo run -p protocol-complexity --example optimal_baseline
//! cargo run -p protocol-complexity --example sensitivity_sweep
//! cargo run -p protocol-complexity --example regression_analysis
//! cargo run -p protocol-complexity --example interchange_roundtrip
//! ```
//!
//! A thin `pci` binary wraps the same pipeline for batch use; see the
//! repository README for the subcommands and file formats.

pub mod analytics;
pub mod baseline;
pub mod cli;
pub mod graph;
pub mod metrics;
pub mod parser;
pub mod report;
pub mod stats;
pub mod synth;
pub mod transcript;

pub use analytics::{
    cohort_compare, cumulative_average, ols_time_on_pci, AnalyticsError, CohortRecord,
    CohortSummary, RegressionResult,
};
pub use baseline::{opci, opci_oracle, optimality_gap, shape_of, BaselineError, OptimalityGap, ProtocolShape};
pub use graph::{
    build_graph, classify_task, segment_tasks, AtomicTask, CueEdge, EdgeOrigin, GraphError,
    ProtocolGraph, TaskType,
};
pub use metrics::{
    entropy_per_element, event_complexity, event_ic, information_content, performance_index,
    protocol_complexity, sensitivity_sweep, uniform_pci, GroupDistribution, MetricsError, SweepRow,
};
pub use parser::dsl::{parse_dsl, to_dsl};
pub use parser::interchange::{parse_interchange, to_interchange};
pub use parser::{DiagnosticCode, ParseDiagnostic};
pub use report::{complexity_report, ComplexityReport, EventComplexity};
pub use synth::minimal_transcript;
pub use transcript::{
    validate_transcript, Event, EventKind, Role, Transcript, TranscriptBuilder, Violation,
};
