//! Runs every seeded property at its default size and prints one line each.

use gaplab::verify::{self, Caps, GAP_REDUCTIONS, PRESERVING_REDUCTIONS};

fn main() -> gaplab::Result<()> {
    let caps = Caps::default();
    let seed = 7;
    let mut reports = Vec::new();
    for r in PRESERVING_REDUCTIONS {
        reports.push(verify::check_solution_preservation(r, 200, &caps, seed)?);
    }
    for r in GAP_REDUCTIONS {
        reports.push(verify::check_gap_transport(r, 200, &caps, seed)?);
    }
    reports.push(verify::check_diag_family(100, &caps, seed));
    reports.push(verify::check_fast_solver(1000, &caps, seed));
    reports.push(verify::check_constants_oracle(300, &caps, seed));
    reports.push(verify::check_galois_soundness(100, seed));
    reports.push(verify::check_weak_base_goldens());
    for r in &reports {
        println!("{}", r.summary());
        for f in r.failures.iter().take(2) {
            println!("  seed {}: observed {}; expected {}", f.seed, f.observed, f.expected);
        }
    }
    Ok(())
}
