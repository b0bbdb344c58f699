//! Exact deciders, polynomial-time solvers for tractable languages, and the
//! reduction of SEP and robustness to CSP with constants.

pub mod constants;
pub mod deciders;
pub mod engine;
pub mod fast;

pub use constants::{idempotent_language, robust_via_constants, sep_via_constants, with_constants, OracleAnswer};
pub use deciders::{
    all_solutions, conjoin, count_solutions, decide_equiv, decide_impl, decide_ntriv, decide_robust, decide_sep,
    solve_csp, solve_pinned, RobustReport, SepReport,
};
pub use fast::{solve_fast, solve_with_witness};
