//! The two wire formats carry the same model: a session written in the
//! line dialect converts to JSON interchange and back without losing a
//! field, a timestamp, or a byte of text.

use protocol_complexity::{parse_dsl, parse_interchange, to_dsl, to_interchange};
use std::path::Path;

fn main() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/unit/typeii.cpt");
    let src = std::fs::read_to_string(&fixture).expect("fixture is bundled with the crate");
    let original = parse_dsl(&src).expect("the bundled fixture is valid");

    let json = to_interchange(&original).expect("a parsed transcript is always serializable");
    println!("{json}\n");

    let from_json = parse_interchange(&json).expect("own output parses back");
    assert_eq!(original, from_json, "dsl -> json -> model must be lossless");

    let dsl = to_dsl(&from_json).expect("a parsed transcript is always serializable");
    let from_dsl = parse_dsl(&dsl).expect("own output parses back");
    assert_eq!(original, from_dsl, "json -> dsl -> model must be lossless");

    println!("round trips hold: dsl -> json -> dsl preserves every field");
}
