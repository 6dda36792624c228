//! Cohort analytics over the bundled corpus: fit completion time against
//! complexity across every session, then compare experience groups on
//! their mean distance from the optimal baseline.

use protocol_complexity::{cohort_compare, complexity_report, ols_time_on_pci, parse_dsl, CohortRecord};
use std::path::Path;

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut records = Vec::new();

    for corpus in ["car_elevation", "faucet"] {
        let mut paths: Vec<_> = std::fs::read_dir(fixtures.join(corpus))
            .expect("fixture corpus is bundled with the crate")
            .map(|e| e.unwrap().path())
            .collect();
        paths.sort();

        for path in paths {
            let src = std::fs::read_to_string(&path).unwrap();
            let t = parse_dsl(&src).expect("the bundled corpus is valid");
            let r = complexity_report(&t).expect("the bundled corpus analyzes cleanly");
            records.push(CohortRecord {
                protocol_id: t.protocol_id.clone(),
                pci: r.pci,
                opci: r.opci,
                duration: r.duration,
                performance_index: r.performance_index,
                group_key: t.subject_meta.get("experience").cloned(),
            });
        }
    }

    println!("{:<14} {:>10} {:>10} {:>10}   group", "protocol", "pci", "opci", "duration");
    for r in &records {
        println!(
            "{:<14} {:>10.3} {:>10.3} {:>10.1}   {}",
            r.protocol_id,
            r.pci,
            r.opci,
            r.duration,
            r.group_key.as_deref().unwrap_or("-")
        );
    }

    let fit = ols_time_on_pci(&records).expect("corpus has enough sessions to fit");
    println!("\ntime = {:.3} + {:.3} * pci  (n = {}, r² = {:.3}, p = {:.4})", fit.intercept, fit.slope, fit.n, fit.r_squared, fit.p_value_slope);

    println!("\n{:<14} {:>3} {:>10} {:>10} {:>10}", "group", "n", "mean pci", "mean opci", "mean gap");
    for row in cohort_compare(&records).expect("every bundled session carries an experience tag") {
        println!(
            "{:<14} {:>3} {:>10.3} {:>10.3} {:>10.3}",
            row.group_key, row.n, row.mean_pci, row.mean_opci, row.mean_gap
        );
    }
}
