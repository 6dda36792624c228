//! Score one session end to end: per-event information cues and event
//! complexity, the protocol complexity index, the optimal baseline, and
//! the performance index.

use protocol_complexity::{complexity_report, parse_dsl};
use std::path::Path;

fn main() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/car_elevation/car01.cpt");
    let src = std::fs::read_to_string(&fixture).expect("fixture is bundled with the crate");
    let transcript = parse_dsl(&src).expect("the bundled fixture is valid");

    let report = complexity_report(&transcript).expect("the fixture segments cleanly");

    println!("busiest events of {:?}:", transcript.protocol_id);
    let mut by_ec = report.per_event.clone();
    by_ec.sort_by(|a, b| b.ec.total_cmp(&a.ec).then(a.seq.cmp(&b.seq)));
    for e in by_ec.iter().take(5) {
        println!(
            "  event {:>2}  ic={}  ec={:.3} bits  {:?}",
            e.seq, e.ic, e.ec, transcript.events[e.seq as usize].text
        );
    }

    println!();
    println!("pci          {:>10.3} bits", report.pci);
    println!("opci         {:>10.3} bits", report.opci);
    println!("gap          {:>10.3} bits", report.pci - report.opci);
    println!("ratio        {:>10.3}", report.ratio);
    println!("duration     {:>10.3} s", report.duration);
    println!("performance  {:>10.3} bits/s", report.performance_index);
}
