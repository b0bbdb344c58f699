//! The star, sharp and column-swap reductions on one 1-in-3 clause.

use gaplab::corpus;
use gaplab::format::{write_certificate, write_instance};
use gaplab::post::Coclone;
use gaplab::reductions::{chi2_reduction, chi_reduction, sharp_reduction, star_reduction};
use gaplab::solvers::all_solutions;

fn main() -> gaplab::Result<()> {
    let source = corpus::instance("one-clause")?;
    let star = star_reduction(&source)?;
    print!("{}", write_instance(&star.target));
    print!("{}", write_certificate(&source, &star));
    println!("star solutions: {:?}", all_solutions(&star.target));
    let sharp = sharp_reduction(&source)?;
    println!("sharp solutions: {}", all_solutions(&sharp.target).len());
    for target in [Coclone::II1, Coclone::II0, Coclone::II] {
        let t = chi_reduction(&star.target, target)?;
        println!("{}: {} solutions", t.reduction, all_solutions(&t.target).len());
    }
    let chi2 = chi2_reduction(&sharp.target)?;
    println!("chi2: {} solutions", all_solutions(&chi2.target).len());
    Ok(())
}
