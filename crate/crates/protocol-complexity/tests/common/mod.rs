//! Seeded generators and independent oracles shared by the integration
//! suites. Everything here derives from the documented transcript rules
//! alone, never from the graph machinery under test.

use protocol_complexity::{EventKind, Transcript, TranscriptBuilder};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Event texts that stress quoting, escapes, and non-ASCII content.
const TEXTS: &[&str] = &[
    "",
    "Lift the jack now.",
    "say \"left\" twice",
    "tab\there",
    "line\nbreak",
    "back\\slash path",
    "trailing space ",
    "  leading indent",
    "π ≈ 3.14159",
    "quote at end\"",
    "\rcarriage first",
    "mixed \t\n\\\" soup",
];

const META_KEYS: &[&str] = &["subject", "experience", "modality", "site", "camera"];
const META_VALUES: &[&str] = &["s01", "novice", "expert", "audio_video", "lab-2", "", "π/2", "two words"];

/// One task worth of event kinds following the requested pattern (1–5).
pub fn task_pattern(ty: u8, rng: &mut ChaCha8Rng) -> Vec<EventKind> {
    use EventKind::*;
    match ty {
        1 => {
            let mut v = vec![Instruct];
            for _ in 0..rng.gen_range(1..=3) {
                v.push(ActionOk);
            }
            v
        }
        2 => {
            let mut v = vec![Instruct];
            for _ in 0..rng.gen_range(1..=2) {
                v.push(ActionWrong);
                v.push(Info);
            }
            v.push(ActionOk);
            v
        }
        3 => {
            let mut v = vec![Instruct];
            for _ in 0..rng.gen_range(1..=2) {
                v.push(ActionPartial);
                v.push(Instruct);
            }
            v.push(ActionOk);
            v
        }
        4 => {
            let mut v = Vec::new();
            for _ in 0..rng.gen_range(2..=3) {
                v.push(Info);
                v.push(if rng.gen_bool(0.5) { Ack } else { Question });
            }
            v.push(Instruct);
            v.push(ActionOk);
            v
        }
        5 => {
            let mut v = vec![Instruct];
            if rng.gen_bool(0.5) {
                v.push(ActionPartial);
            }
            v.push(MidActionCue);
            v.push(ActionOk);
            v
        }
        _ => unreachable!("task patterns are numbered 1..=5"),
    }
}

fn assemble(
    id: &str,
    kinds: &[EventKind],
    with_refs: bool,
    with_meta: bool,
    rng: &mut ChaCha8Rng,
) -> Transcript {
    let mut b = TranscriptBuilder::new(id, "synthetic-task");
    if with_meta {
        for _ in 0..rng.gen_range(0..=3) {
            let k = *META_KEYS.choose(rng).unwrap();
            let v = *META_VALUES.choose(rng).unwrap();
            b = b.meta(k, v);
        }
    }
    let mut t = 0.0;
    for (seq, &kind) in kinds.iter().enumerate() {
        t += rng.gen_range(0.0..=12.0);
        let text = *TEXTS.choose(rng).unwrap();
        if with_refs && seq > 0 && rng.gen_bool(0.25) {
            let refs: Vec<u32> =
                (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..seq as u32)).collect();
            b = b.event_with_refs(kind, t, text, &refs);
        } else {
            b = b.event(kind, t, text);
        }
    }
    b.duration(t + rng.gen_range(0.0..=60.0)).build()
}

/// A validation-clean transcript of up to 200 events: random task patterns,
/// random backward references (repeats allowed), tricky texts and metadata.
pub fn random_transcript(id: u32, rng: &mut ChaCha8Rng) -> Transcript {
    use EventKind::*;
    let n_tasks = rng.gen_range(1..=40);
    let mut kinds = Vec::new();
    for _ in 0..n_tasks {
        kinds.extend(task_pattern(rng.gen_range(1..=5), rng));
        if kinds.len() > 190 {
            break;
        }
    }
    match rng.gen_range(0..3) {
        0 => {
            let last = kinds.len() - 1;
            kinds[last] = Complete;
        }
        1 => kinds.push(Complete),
        _ => {}
    }
    assemble(&format!("proto-{id:04}"), &kinds, true, true, rng)
}

/// A plain chain transcript (no explicit references) whose tasks follow
/// `types` in order, closed by a terminal Complete confirmation.
pub fn chain_transcript(id: &str, types: &[u8], rng: &mut ChaCha8Rng) -> Transcript {
    let mut kinds = Vec::new();
    for &ty in types {
        kinds.extend(task_pattern(ty, rng));
    }
    kinds.push(EventKind::Complete);
    assemble(id, &kinds, false, false, rng)
}

/// PCI recomputed straight from the transcript rules, without the graph
/// builder: each non-initial event contributes edges from its explicit
/// references (or its predecessor), and the final event emits the terminal
/// completion cue.
pub fn pci_degree_oracle(t: &Transcript) -> f64 {
    let n = t.events.len();
    let mut degree = vec![0u64; n];
    for (i, e) in t.events.iter().enumerate().skip(1) {
        match &e.explicit_refs {
            Some(refs) => {
                for &r in refs {
                    degree[r as usize] += 1;
                    degree[i] += 1;
                }
            }
            None => {
                degree[i - 1] += 1;
                degree[i] += 1;
            }
        }
    }
    if n > 0 {
        degree[n - 1] += 1;
    }
    degree
        .iter()
        .map(|&d| if d > 1 { d as f64 * (d as f64).log2() } else { 0.0 })
        .sum()
}
