//! Synthesis of minimal transcripts: for any constructed shape, a
//! transcript whose cue graph meets every degree lower bound with equality,
//! so its complexity equals the optimal baseline exactly.
//!
//! The construction stars each task around its opening helper: every
//! non-final worker of a task cites the helper twice (a multi-modal cue
//! pair — two parallel edges), the final worker cites it once and chains
//! into the next task's helper, and the last worker of the last task closes
//! the protocol with the terminal completion. Resulting degrees: root
//! helper 2L−1, each later opening helper 2Nᵢ, every worker exactly 2.

use crate::baseline::ProtocolShape;
use crate::transcript::{EventKind, Transcript, TranscriptBuilder};

/// Builds the minimal transcript of a constructed shape (every task worker
/// count ≥ 1, as [`ProtocolShape::new`] enforces).
///
/// Each event is stamped at t = its ordinal with the duration one second
/// past the final event, and every task classifies as a correct execution.
///
/// # Panics
/// If the shape has an empty task; extracted shapes with zero-worker tasks
/// have no minimal realization.
pub fn minimal_transcript(shape: &ProtocolShape, protocol_id: &str, task_name: &str) -> Transcript {
    assert!(shape.root_workers >= 1, "minimal transcripts require a worker in the root task");
    assert!(
        shape.branch_workers.iter().all(|&n| n >= 1),
        "minimal transcripts require a worker in every task"
    );

    let task_sizes: Vec<u32> = std::iter::once(shape.root_workers)
        .chain(shape.branch_workers.iter().copied())
        .collect();
    let last_task = task_sizes.len() - 1;

    let mut b = TranscriptBuilder::new(protocol_id, task_name);
    let mut seq: u32 = 0;
    let mut prev_leaf: Option<u32> = None;

    for (task, &workers) in task_sizes.iter().enumerate() {
        let helper = seq;
        let text = format!("instruct segment {}", task + 1);
        b = match prev_leaf {
            None => b.event(EventKind::Instruct, helper as f64, text),
            Some(leaf) => b.event_with_refs(EventKind::Instruct, helper as f64, text, &[leaf]),
        };
        seq += 1;

        for w in 0..workers {
            let is_leaf = w == workers - 1;
            let kind = if is_leaf && task == last_task { EventKind::Complete } else { EventKind::ActionOk };
            let text = if kind == EventKind::Complete { "task complete" } else { "step done" };
            let refs: &[u32] = if is_leaf { &[helper] } else { &[helper, helper] };
            b = b.event_with_refs(kind, seq as f64, text, refs);
            if is_leaf {
                prev_leaf = Some(seq);
            }
            seq += 1;
        }
    }

    b.duration(seq as f64).build()
}
