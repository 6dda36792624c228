//! The optimal baseline: the cheapest protocol that still grounds every
//! instruction, from its closed form, cross-checked by brute force, and
//! attained by a synthesized minimal transcript.

use protocol_complexity::{
    build_graph, minimal_transcript, opci, opci_oracle, optimality_gap, protocol_complexity,
    ProtocolShape,
};

fn main() {
    let shapes = [
        ProtocolShape::new(1, vec![]).unwrap(),
        ProtocolShape::new(1, vec![1]).unwrap(),
        ProtocolShape::new(2, vec![2, 1]).unwrap(),
        ProtocolShape::new(3, vec![2]).unwrap(),
    ];

    println!("{:<18} {:>12} {:>12}", "shape", "closed form", "brute force");
    for shape in &shapes {
        let closed = opci(shape);
        let brute = opci_oracle(shape).expect("small shapes stay within the search budget");
        println!("{:<18} {:>12.6} {:>12.6}", shape.to_string(), closed, brute);
        assert!((closed - brute).abs() < 1e-9);
    }

    // A star-topology transcript hits the bound exactly: every degree sits
    // on its constraint.
    let shape = ProtocolShape::new(2, vec![2, 1]).unwrap();
    let t = minimal_transcript(&shape, "star", "demo");
    let g = build_graph(&t).expect("synthesized transcripts are valid");
    let pci = protocol_complexity(&g);
    let gap = optimality_gap(pci, opci(&shape)).expect("baseline is positive");
    println!(
        "\nminimal transcript for {shape}: pci {:.6}, gap {:.6}, ratio {:.6}",
        pci, gap.gap, gap.ratio
    );
}
