//! Computes the six weak bases by closure and reports their redundancy.

use gaplab::post::{redundancy_report, weak_base, Coclone};

fn main() -> gaplab::Result<()> {
    for c in Coclone::HARD {
        let r = weak_base(c)?;
        let report = redundancy_report(&r);
        println!("{c}: {} x {}, irredundant: {}", r.len(), r.arity(), report.irredundant());
        print!("{}", r.to_matrix_string());
    }
    Ok(())
}
