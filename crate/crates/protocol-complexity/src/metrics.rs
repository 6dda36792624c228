//! Information-theoretic quantities over groupings and cue graphs: entropy,
//! information content, per-event and whole-protocol complexity, the
//! performance index, and the uniform-degree sensitivity model.
//!
//! All quantities are bits (or bits/second, bits/element where noted) and
//! follow the conventions 0·log₂0 = 0 and 1·log₂1 = 0, so isolated and
//! degree-one nodes contribute nothing.

use crate::graph::ProtocolGraph;
use std::fmt;

/// x·log₂x with the 0·log₂0 = 0 convention (extended to all x ≤ 0).
pub(crate) fn xlog2(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    /// Distributions must contain at least one group.
    EmptyDistribution,
    /// Every group must contain at least one element.
    ZeroGroupSize { index: usize },
    /// The ordinal does not name a real (non-sink) event.
    UnknownEvent { seq: u32 },
    /// Rates require a positive, finite duration.
    NonPositiveDuration { duration: f64 },
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::EmptyDistribution => write!(f, "distribution has no groups"),
            MetricsError::ZeroGroupSize { index } => write!(f, "group {index} is empty"),
            MetricsError::UnknownEvent { seq } => write!(f, "no event with ordinal {seq}"),
            MetricsError::NonPositiveDuration { duration } => {
                write!(f, "duration must be positive, got {duration}")
            }
        }
    }
}

impl std::error::Error for MetricsError {}

/// How N elements fall into k groups of sizes N₁..N_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDistribution {
    group_sizes: Vec<u64>,
    total: u64,
}

impl GroupDistribution {
    pub fn new(group_sizes: Vec<u64>) -> Result<Self, MetricsError> {
        if group_sizes.is_empty() {
            return Err(MetricsError::EmptyDistribution);
        }
        if let Some(index) = group_sizes.iter().position(|&n| n == 0) {
            return Err(MetricsError::ZeroGroupSize { index });
        }
        let total = group_sizes.iter().sum();
        Ok(GroupDistribution { group_sizes, total })
    }

    pub fn group_sizes(&self) -> &[u64] {
        &self.group_sizes
    }

    /// N: total element count.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// k: number of groups.
    pub fn group_count(&self) -> usize {
        self.group_sizes.len()
    }
}

/// Shannon entropy per element: Ĥ = −Σ (Nᵢ/N)·log₂(Nᵢ/N), in [0, log₂k].
pub fn entropy_per_element(d: &GroupDistribution) -> f64 {
    let n = d.total as f64;
    -d.group_sizes.iter().map(|&size| xlog2(size as f64 / n)).sum::<f64>()
}

/// Information content of the grouping: I = Σ Nᵢ·log₂Nᵢ, the drop from
/// maximum entropy N·log₂N to the realized total entropy N·Ĥ. Zero exactly
/// when every group is a singleton.
pub fn information_content(d: &GroupDistribution) -> f64 {
    d.group_sizes.iter().map(|&size| xlog2(size as f64)).sum()
}

/// IC of one event: in-degree + out-degree over the full edge list,
/// terminal edge included.
pub fn event_ic(g: &ProtocolGraph, seq: u32) -> Result<u32, MetricsError> {
    if (seq as usize) >= g.event_count() {
        return Err(MetricsError::UnknownEvent { seq });
    }
    Ok(g.edges
        .iter()
        .map(|e| u32::from(e.from_seq == seq) + u32::from(e.to_seq == seq))
        .sum())
}

/// EC of one event: ic·log₂ic bits.
pub fn event_complexity(ic: u32) -> f64 {
    xlog2(ic as f64)
}

/// PCI: Σ event_complexity over all real nodes, in bits. The sink never
/// contributes a term; its incoming edge is already counted in the final
/// event's degree.
pub fn protocol_complexity(g: &ProtocolGraph) -> f64 {
    g.degree_table().iter().map(|&d| xlog2(d as f64)).sum()
}

/// P_I: complexity per second of protocol time.
pub fn performance_index(pci: f64, duration: f64) -> Result<f64, MetricsError> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(MetricsError::NonPositiveDuration { duration });
    }
    Ok(pci / duration)
}

/// Complexity of a uniform protocol: k events all carrying `ic` cues each,
/// PCI = k·ic·log₂ic. Fractional arguments arise from percentage sweeps.
pub fn uniform_pci(k: f64, ic: f64) -> f64 {
    k * xlog2(ic)
}

/// One row of the sensitivity sweep at a given percentage increase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub pct: f64,
    /// PCI with the cue count raised by pct, event count at base.
    pub pci_vs_ic: f64,
    /// PCI with the event count raised by pct, cue count at base.
    pub pci_vs_k: f64,
}

/// Sweeps [`uniform_pci`] over percentage increases applied to one axis at
/// a time. With equal bases the cue-count column dominates for every
/// positive percentage: x·log₂x outgrows the linear event-count term.
pub fn sensitivity_sweep(base_k: f64, base_ic: f64, pct_steps: &[f64]) -> Vec<SweepRow> {
    pct_steps
        .iter()
        .map(|&pct| SweepRow {
            pct,
            pci_vs_ic: uniform_pci(base_k, base_ic * (1.0 + pct / 100.0)),
            pci_vs_k: uniform_pci(base_k * (1.0 + pct / 100.0), base_ic),
        })
        .collect()
}

/// The default sweep grid: 10% to 5000% in steps of 10.
pub fn default_sensitivity_steps() -> Vec<f64> {
    (1..=500).map(|i| (i * 10) as f64).collect()
}
