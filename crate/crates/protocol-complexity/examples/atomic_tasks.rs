//! Segment a session into atomic tasks — one helper instruction plus the
//! grounding around it — and classify each task's interaction pattern.

use protocol_complexity::{parse_dsl, segment_tasks};
use std::path::Path;

fn main() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/car_elevation/car01.cpt");
    let src = std::fs::read_to_string(&fixture).expect("fixture is bundled with the crate");
    let transcript = parse_dsl(&src).expect("the bundled fixture is valid");

    let tasks = segment_tasks(&transcript).expect("the fixture segments cleanly");
    println!("{:?}: {} events in {} atomic tasks\n", transcript.protocol_id, transcript.events.len(), tasks.len());
    println!("{:<6} {:>6} {:>6}   {:<5} opening line", "task", "start", "end", "type");
    for task in &tasks {
        let opening = &transcript.events[task.root_helper_seq as usize].text;
        println!(
            "{:<6} {:>6} {:>6}   {:<5} {:?}",
            task.task_index,
            task.start_seq(),
            task.end_seq(),
            task.task_type.to_string(),
            opening
        );
    }
}
