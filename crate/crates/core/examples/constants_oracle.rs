//! SEP and 2-robustness decided through CSP queries with constants.

use gaplab::corpus;
use gaplab::pp::projections_family;
use gaplab::solvers::{robust_via_constants, sep_via_constants, solve_csp};
use gaplab::Instance;

fn main() -> gaplab::Result<()> {
    let mut oracle = |q: &Instance| Ok(solve_csp(q).is_some());
    for name in ["one-clause", "k4"] {
        let i = corpus::instance(name)?;
        let sep = sep_via_constants(&i, &mut oracle)?;
        let robust = robust_via_constants(&i, 2, &projections_family(i.template()), &mut oracle)?;
        println!("{name}: sep {} ({} queries), robust {} ({} queries)", sep.answer, sep.queries, robust.answer, robust.queries);
    }
    Ok(())
}
