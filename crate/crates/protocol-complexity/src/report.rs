//! Per-protocol complexity report: per-event cue counts and bits, the
//! protocol totals, the optimal baseline, and derived ratios.

use crate::baseline::{opci, optimality_gap};
use crate::graph::{build_graph, GraphError};
use crate::metrics::{event_complexity, protocol_complexity};
use crate::transcript::Transcript;

/// One event's cue count and complexity contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventComplexity {
    pub seq: u32,
    /// IC: in-degree + out-degree.
    pub ic: u32,
    /// EC: ic·log₂ic bits.
    pub ec: f64,
}

/// Full analysis of one transcript.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub per_event: Vec<EventComplexity>,
    /// Σ ec, bits.
    pub pci: f64,
    /// Optimal baseline for the protocol's shape, bits.
    pub opci: f64,
    /// pci / duration, bits per second.
    pub performance_index: f64,
    /// Seconds.
    pub duration: f64,
    /// pci / opci. Expected ≥ 1 on chain-structured protocols; reported
    /// as observed, never clamped.
    pub ratio: f64,
}

/// Analyzes one valid transcript end to end.
pub fn complexity_report(t: &Transcript) -> Result<ComplexityReport, GraphError> {
    let g = build_graph(t)?;
    let per_event: Vec<EventComplexity> = g
        .degree_table()
        .iter()
        .enumerate()
        .map(|(seq, &ic)| EventComplexity { seq: seq as u32, ic, ec: event_complexity(ic) })
        .collect();
    let pci = protocol_complexity(&g);
    let opci_bits = opci(&g.shape);
    let gap = optimality_gap(pci, opci_bits)
        .expect("a segmented protocol has at least one worker, so its baseline is positive");
    Ok(ComplexityReport {
        per_event,
        pci,
        opci: opci_bits,
        performance_index: pci / t.duration,
        duration: t.duration,
        ratio: gap.ratio,
    })
}
