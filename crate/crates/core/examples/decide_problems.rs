//! CSP, NTriv, SEP and 2-robust satisfiability on the worked instances.

use gaplab::corpus;
use gaplab::pp::projections_family;
use gaplab::solvers::{decide_ntriv, decide_robust, decide_sep, solve_csp};

fn main() -> gaplab::Result<()> {
    for name in ["one-clause", "k4", "one-clause-star", "one-clause-sharp"] {
        let i = corpus::instance(name)?;
        let family = projections_family(i.template());
        let csp = solve_csp(&i).map(|s| i.format_assignment(&s));
        println!("{name}");
        println!("  csp:    {}", csp.unwrap_or_else(|| "none".into()));
        println!("  ntriv:  {}", decide_ntriv(&i).is_some());
        println!("  sep:    {}", decide_sep(&i).answer);
        println!("  robust: {}", decide_robust(&i, 2, &family)?.answer);
    }
    Ok(())
}
