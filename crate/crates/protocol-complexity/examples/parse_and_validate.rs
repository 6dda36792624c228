//! Parse a transcript from the line-oriented `.cpt` dialect and show how
//! defects surface as positioned diagnostics instead of panics.

use protocol_complexity::parse_dsl;
use std::path::Path;

fn main() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/unit/typeii.cpt");
    let src = std::fs::read_to_string(&fixture).expect("fixture is bundled with the crate");

    let transcript = parse_dsl(&src).expect("the bundled fixture is valid");
    println!("parsed {:?} ({} events)", transcript.protocol_id, transcript.events.len());
    for e in &transcript.events {
        println!("  {:>2}  {:<6} {:<13} t={:<6} {:?}", e.seq, format!("{:?}", e.role), e.kind, e.t, e.text);
    }

    // The same text with a typo'd time: every problem is reported at once,
    // each with a line and column.
    let broken = src.replace("t=16.0", "t=sixteen");
    match parse_dsl(&broken) {
        Ok(_) => unreachable!("the typo must be caught"),
        Err(diags) => {
            println!("\nbroken variant produced {} diagnostic(s):", diags.len());
            for d in diags {
                println!("  {d}");
            }
        }
    }
}
