//! Seeded generators, brute-force oracles and the property harness that
//! checks reductions and solvers against them.

pub mod gen;
pub mod goldens;
pub mod oracle;
pub mod properties;

use std::fmt::Write as _;
use std::time::Duration;

pub use gen::{gen_instance, GenOptions};
pub use goldens::check_weak_base_goldens;
pub use oracle::{brute_local_robust, brute_sep, brute_solutions, Class};
pub use properties::{
    check_constants_oracle, check_diag_family, check_fast_solver, check_galois_soundness, check_gap_transport,
    check_preservation_with, check_solution_preservation, run_property, Params, GAP_MIN_HITS, GAP_REDUCTIONS,
    PRESERVING_REDUCTIONS, PROPERTIES,
};

/// Size limits for generated source instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_vars: usize,
    pub max_constraints: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vars: 12, max_constraints: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// Seed of the failing trial; the base seed for quota failures.
    pub seed: u64,
    pub source: String,
    pub observed: String,
    pub expected: String,
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    pub failures: Vec<Failure>,
    /// In-class trial counts, by class label.
    pub hits: Vec<(String, usize)>,
    /// Trials whose source fell in no declared class.
    pub skipped: usize,
    pub elapsed: Duration,
}

impl PropertyReport {
    pub(crate) fn new(name: &str, seed: u64) -> Self {
        PropertyReport {
            name: name.to_string(),
            seed,
            trials: 0,
            failures: Vec::new(),
            hits: Vec::new(),
            skipped: 0,
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn hits_for(&self, label: &str) -> usize {
        self.hits.iter().find(|(l, _)| l == label).map_or(0, |&(_, n)| n)
    }

    pub(crate) fn hit(&mut self, label: &str) {
        match self.hits.iter_mut().find(|(l, _)| l == label) {
            Some((_, n)) => *n += 1,
            None => self.hits.push((label.to_string(), 1)),
        }
    }

    pub(crate) fn fail(&mut self, seed: u64, source: String, observed: impl Into<String>, expected: impl Into<String>) {
        self.failures.push(Failure { seed, source, observed: observed.into(), expected: expected.into() });
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        let hits: Vec<String> = self.hits.iter().map(|(l, n)| format!("{l}={n}")).collect();
        format!(
            "{} {}: {} trials, {} failures, hits [{}], skipped {}, {:.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.trials,
            self.failures.len(),
            hits.join(", "),
            self.skipped,
            self.elapsed.as_secs_f64()
        )
    }

    /// Stable `key: value` lines; identical inputs give identical text.
    pub fn to_structured(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "property: {}", self.name);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s, "trials: {}", self.trials);
        let _ = writeln!(s, "pass: {}", self.passed());
        for (l, n) in &self.hits {
            let _ = writeln!(s, "hits: {l} {n}");
        }
        let _ = writeln!(s, "skipped: {}", self.skipped);
        let _ = writeln!(s, "failures: {}", self.failures.len());
        for f in &self.failures {
            let _ = writeln!(s, "failure.seed: {}", f.seed);
            let _ = writeln!(s, "failure.observed: {}", f.observed);
            let _ = writeln!(s, "failure.expected: {}", f.expected);
            for line in f.source.lines() {
                let _ = writeln!(s, "failure.source: {line}");
            }
        }
        s
    }
}

/// Seed of trial `t` under base seed `seed`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed ^ (t as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}
