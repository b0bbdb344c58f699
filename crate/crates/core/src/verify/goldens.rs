//! Weak-base matrices as printed in the source article, and their comparison
//! with the computed closures.

use std::time::Instant;

use crate::post::{classify, redundancy_report, weak_base, Coclone};
use crate::relation::Relation;
use crate::template::Template;
use crate::verify::PropertyReport;

/// The columns relation.
pub const PRINTED_COLS3: [&str; 3] = ["10001101", "01010101", "00111001"];

/// Closure under negation, as printed (6 x 8).
pub const PRINTED_N2: [&str; 6] = ["10001101", "01000101", "00111001", "01110010", "10111010", "11000110"];

/// Closure under the constant 1, as printed (4 x 8).
pub const PRINTED_I1: [&str; 4] = ["10011001", "01010101", "00101101", "11111111"];

/// Closure under both constants, as printed (5 x 8).
pub const PRINTED_I: [&str; 5] = ["10011001", "01010101", "00101101", "00000000", "11111111"];

/// Closure under negation and constants, as printed (8 x 8).
pub const PRINTED_N: [&str; 8] =
    ["10001101", "01000101", "00111001", "01110010", "10111010", "11000110", "00000000", "11111111"];

/// The closure under the constant 0, derived from the columns relation plus
/// the all-ones row by swapping 0 and 1 and then exchanging columns
/// 1-3 with 4-6 and 7 with 8, which maps the swapped columns back to the
/// columns order.
pub fn derived_i0() -> Relation {
    let ones = Relation::from_rows(2, &PRINTED_COLS3)
        .and_then(|c| c.union(&Relation::from_rows(2, &["11111111"])?))
        .expect("well formed");
    let order = [3, 4, 5, 0, 1, 2, 7, 6];
    let swapped = ones.map_values(2, |b| 1 - b).expect("boolean");
    swapped.project(&order).expect("coordinates in range")
}

/// Printed (or derived) golden for each co-clone, in criterion order.
pub fn goldens() -> Vec<(Coclone, &'static str, Relation)> {
    let rel = |rows: &[&str]| Relation::from_rows(2, rows).expect("well formed");
    vec![
        (Coclone::II2, "Cols3", rel(&PRINTED_COLS3)),
        (Coclone::IN2, "N2(Cols3)", rel(&PRINTED_N2)),
        (Coclone::II1, "I1(Cols3)", rel(&PRINTED_I1)),
        (Coclone::II, "I(Cols3)", rel(&PRINTED_I)),
        (Coclone::IN, "N(Cols3)", rel(&PRINTED_N)),
        (Coclone::II0, "I0(Cols3), derived", derived_i0()),
    ]
}

/// Rows in one relation but not the other, as `-row` / `+row` strings.
pub fn row_diff(computed: &Relation, printed: &Relation) -> String {
    let show = |r: &[u8]| r.iter().map(|b| char::from(b'0' + b)).collect::<String>();
    let missing = printed.rows().filter(|r| !computed.contains(r)).map(|r| format!("-{}", show(r)));
    let extra = computed.rows().filter(|r| !printed.contains(r)).map(|r| format!("+{}", show(r)));
    missing.chain(extra).collect::<Vec<_>>().join(" ")
}

/// Compares each computed weak base with its golden as a set of rows, then
/// re-checks that each weak base classifies to its co-clone and is irredundant.
pub fn check_weak_base_goldens() -> PropertyReport {
    let start = Instant::now();
    let mut report = PropertyReport::new("weak-base-goldens", 0);
    for (coclone, label, golden) in goldens() {
        report.trials += 1;
        let computed = match weak_base(coclone) {
            Ok(r) => r,
            Err(e) => {
                report.fail(0, label.into(), e.to_string(), "a relation");
                continue;
            }
        };
        if computed == golden {
            report.hit("matrix");
        } else {
            report.fail(0, label.into(), format!("differs: {}", row_diff(&computed, &golden)), "bit-exact match");
        }
        match classify(&Template::single("r", computed.clone())) {
            Ok(c) if c.coclone == coclone => report.hit("classification"),
            Ok(c) => report.fail(0, label.into(), c.coclone.to_string(), coclone.to_string()),
            Err(e) => report.fail(0, label.into(), e.to_string(), coclone.to_string()),
        }
        if redundancy_report(&computed).irredundant() {
            report.hit("irredundant");
        } else {
            report.fail(0, label.into(), format!("{:?}", redundancy_report(&computed)), "irredundant");
        }
    }
    report.elapsed = start.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_i0_is_the_computed_closure() {
        assert_eq!(derived_i0(), weak_base(Coclone::II0).unwrap());
    }

    #[test]
    fn printed_matrices_differ_only_where_recorded() {
        let by = |c| goldens().into_iter().find(|g| g.0 == c).unwrap().2;
        assert_eq!(weak_base(Coclone::II2).unwrap(), by(Coclone::II2));
        // the printed negation closure has column 4 flipped in rows 2 and 5
        assert_eq!(row_diff(&weak_base(Coclone::IN2).unwrap(), &by(Coclone::IN2)), "-01000101 -10111010 +01010101 +10101010");
        // the printed constant closures have columns 4 and 6 exchanged
        let swapped = by(Coclone::II1).project(&[0, 1, 2, 5, 4, 3, 6, 7]).unwrap();
        assert_eq!(swapped, weak_base(Coclone::II1).unwrap());
    }
}
