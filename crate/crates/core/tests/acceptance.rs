//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line; the
//! tolerances are the constants below.

use std::time::{Duration, Instant};

use gaplab::corpus::{self, Kind, ENTRIES};
use gaplab::galois::{boolean, polymorphisms};
use gaplab::post::{classify, classify_probes, is_core, redundancy_report, verdict, weak_base, Coclone, Complexity, ProbeReport};
use gaplab::relation::named;
use gaplab::verify::goldens::{goldens, row_diff};
use gaplab::verify::{self, Caps, PropertyReport, GAP_MIN_HITS, GAP_REDUCTIONS};
use gaplab::Template;

const SEED: u64 = 7;
const PRESERVATION_TRIALS: usize = 200;
const PRESERVATION_RUNTIME: Duration = Duration::from_secs(60);
const GAP_TRIALS: usize = 200;
const FAST_TRIALS: usize = 1000;
const CONSTANTS_TRIALS: usize = 300;
const DIAG_TRIALS: usize = 100;
const GALOIS_TRIALS: usize = 100;
const CAPS: Caps = Caps { max_vars: 12, max_constraints: 8 };

/// Rows by which each printed matrix differs from the computed closure:
/// `-` rows are printed but not in the closure, `+` rows the reverse.
const PRINTED_DIFFS: [(&str, &str); 6] = [
    ("Cols3", ""),
    ("N2(Cols3)", "-01000101 -10111010 +01010101 +10101010"),
    ("I1(Cols3)", "-00101101 -10011001 +00111001 +10001101"),
    ("I(Cols3)", "-00101101 -10011001 +00111001 +10001101"),
    ("N(Cols3)", "-01000101 -10111010 +01010101 +10101010"),
    ("I0(Cols3), derived", ""),
];

fn line(n: usize, title: &str, ok: bool, detail: &str) -> bool {
    println!("criterion {n} {title}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    ok
}

fn reports_line(n: usize, title: &str, reports: &[PropertyReport], extra: impl Fn(&PropertyReport) -> bool) -> bool {
    let bad: Vec<&str> = reports.iter().filter(|r| !r.passed() || !extra(r)).map(|r| r.name.as_str()).collect();
    for r in reports {
        println!("  {}", r.summary());
    }
    let detail = if bad.is_empty() { format!("{} properties", reports.len()) } else { format!("failing: {}", bad.join(", ")) };
    line(n, title, bad.is_empty(), &detail)
}

/// Criterion 1 compares against the matrices as printed. Four of them
/// disagree with the closure in a way recorded in `PRINTED_DIFFS`.
fn weak_base_goldens() -> bool {
    let mut mismatched = Vec::new();
    for ((coclone, label, golden), (expected_label, expected_diff)) in goldens().into_iter().zip(PRINTED_DIFFS) {
        assert_eq!(label, expected_label);
        let diff = row_diff(&weak_base(coclone).unwrap(), &golden);
        // the disagreement is exactly the recorded one, nothing more
        assert_eq!(diff, expected_diff, "{label}");
        if !diff.is_empty() {
            mismatched.push(label);
        }
    }
    let ok = mismatched.is_empty();
    line(1, "weak-base goldens", ok, &format!("bit-exact except {}", mismatched.join(", ")))
}

/// Probe flags read off the full lists of polymorphisms of arity 1 to 3.
fn probes_by_enumeration(t: &Template) -> ProbeReport {
    let rels = t.relations();
    let has = |op: gaplab::galois::Operation| polymorphisms(&rels, 2, op.arity()).unwrap().contains(&op);
    ProbeReport {
        has_not: has(boolean::not()),
        has_c0: has(boolean::c0()),
        has_c1: has(boolean::c1()),
        has_and: has(boolean::and()),
        has_or: has(boolean::or()),
        has_maj: has(boolean::maj()),
        has_min: has(boolean::minority()),
    }
}

fn classification_suite() -> bool {
    let mut cases: Vec<(String, Template, &str)> = vec![
        ("plus1in3".into(), Template::single("r", named::one_in_three()), "II2"),
        ("nae3".into(), Template::single("r", named::nae3()), "IN2"),
        ("implication".into(), Template::single("r", named::implication()), "TRACTABLE(∧)"),
        ("xor".into(), Template::single("r", named::xor2()), "TRACTABLE(min)"),
        ("or2".into(), Template::single("r", named::or2()), "TRACTABLE(∨)"),
    ];
    for c in Coclone::HARD {
        cases.push((format!("weak base {c}"), Template::single("r", weak_base(c).unwrap()), Box::leak(c.to_string().into_boxed_str())));
    }
    let mut bad = Vec::new();
    for (name, t, expected) in &cases {
        let got = classify(t).unwrap();
        let enumerated = probes_by_enumeration(t);
        if got.coclone.to_string() != *expected || got.probes != enumerated || classify_probes(enumerated) != got.coclone {
            bad.push(format!("{name}: {}", got.coclone));
        }
    }
    line(2, "classification suite", bad.is_empty(), &if bad.is_empty() { format!("{} languages", cases.len()) } else { bad.join("; ") })
}

fn irredundancy() -> bool {
    let bad: Vec<String> =
        Coclone::HARD.iter().filter(|&&c| !redundancy_report(&weak_base(c).unwrap()).irredundant()).map(|c| c.to_string()).collect();
    line(3, "irredundancy", bad.is_empty(), &if bad.is_empty() { "six weak bases".to_string() } else { bad.join(", ") })
}

fn solution_preservation() -> bool {
    let reports: Vec<PropertyReport> = ["rewrite-ca", "star", "subalgebra"]
        .iter()
        .map(|r| verify::check_solution_preservation(r, PRESERVATION_TRIALS, &CAPS, SEED).unwrap())
        .collect();
    reports_line(4, "solution preservation", &reports, |r| r.trials >= PRESERVATION_TRIALS && r.elapsed <= PRESERVATION_RUNTIME)
}

fn gap_transport() -> bool {
    let reports: Vec<PropertyReport> =
        GAP_REDUCTIONS.iter().map(|r| verify::check_gap_transport(r, GAP_TRIALS, &CAPS, SEED).unwrap()).collect();
    reports_line(5, "gap transport", &reports, |r| r.hits.len() == 2 && r.hits.iter().all(|(_, n)| *n >= GAP_MIN_HITS))
}

fn oracle_equivalence() -> bool {
    let reports = [
        verify::check_fast_solver(FAST_TRIALS, &CAPS, SEED),
        verify::check_constants_oracle(CONSTANTS_TRIALS, &CAPS, SEED),
    ];
    reports_line(6, "oracle equivalence", &reports, |r| r.trials >= if r.name == "fast-solver" { FAST_TRIALS } else { CONSTANTS_TRIALS })
}

fn diag_equivalence() -> bool {
    let caps = Caps { max_vars: 8, ..CAPS };
    let reports = [verify::check_diag_family(DIAG_TRIALS, &caps, SEED)];
    reports_line(7, "diag family equivalence", &reports, |r| r.trials >= DIAG_TRIALS)
}

fn schaefer_recovery() -> bool {
    let mut checked = Vec::new();
    let mut bad = Vec::new();
    for e in ENTRIES.iter().filter(|e| e.kind == Kind::Language) {
        let t = corpus::language(e.name).unwrap();
        if !is_core(&t).unwrap() {
            continue;
        }
        let c = classify(&t).unwrap().coclone;
        let hard = verdict(c).csp == Complexity::NpComplete;
        if hard != matches!(c, Coclone::II2 | Coclone::IN2) {
            bad.push(e.name);
        }
        checked.push(e.name);
    }
    let detail = if bad.is_empty() { format!("cores: {}", checked.join(", ")) } else { format!("mismatch: {}", bad.join(", ")) };
    line(8, "Schaefer recovery", bad.is_empty() && !checked.is_empty(), &detail)
}

fn galois_soundness() -> bool {
    let reports = [verify::check_galois_soundness(GALOIS_TRIALS, SEED)];
    reports_line(9, "Galois soundness", &reports, |r| r.trials >= GALOIS_TRIALS)
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let first = weak_base_goldens();
    let rest = [
        classification_suite(),
        irredundancy(),
        solution_preservation(),
        gap_transport(),
        oracle_equivalence(),
        diag_equivalence(),
        schaefer_recovery(),
        galois_soundness(),
    ];
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    // criterion 1 fails against the printed matrices; its exact diff is asserted above
    assert!(!first);
    assert!(rest.iter().all(|&ok| ok), "criteria 2-9 must pass");
}
