//! Homomorphic image, subalgebra and power reductions with their certificates.

use gaplab::corpus;
use gaplab::format::write_certificate;
use gaplab::pp::projections_family;
use gaplab::reductions::{flatten_power, hom_image_reduction, subalgebra_reduction};
use gaplab::relation::Relation;
use gaplab::solvers::all_solutions;
use gaplab::{Instance, Template};
use std::sync::Arc;

fn main() -> gaplab::Result<()> {
    let source = corpus::instance("one-clause")?;
    let family = projections_family(source.template());
    let hom = hom_image_reduction(&source, &[0, 1, 1], &family)?;
    println!("hom-image: {} target solutions", all_solutions(&hom.target).len());
    print!("{}", write_certificate(&source, &hom));
    let sub = subalgebra_reduction(&source, 3, &[0, 2], &family)?;
    println!("subalgebra: {:?}", all_solutions(&sub.target));

    // the square of 1-in-3 on pairs of bits, read over {0,1}
    let square = Relation::new(4, 1, [[1u8], [2]])?;
    let t = Arc::new(Template::single("s", square));
    let mut i = Instance::with_variables(t, &["u", "v"])?;
    i.add_constraint("s", &["u"])?;
    i.add_constraint("s", &["v"])?;
    let flat = flatten_power(&i, 2, 2, &projections_family(i.template()))?;
    print!("{}", write_certificate(&i, &flat));
    Ok(())
}
