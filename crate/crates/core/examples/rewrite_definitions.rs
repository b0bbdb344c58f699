//! Rewriting an instance through quantifier-free definitions.

use std::sync::Arc;

use gaplab::format::{parse_formula, write_instance};
use gaplab::reductions::rewrite_ca;
use gaplab::relation::named;
use gaplab::{Instance, Template};

fn main() -> gaplab::Result<()> {
    let target = Arc::new(Template::single("imp", named::implication()));
    let equal = gaplab::Relation::from_rows(2, &["00", "11"])?;
    let source = Arc::new(Template::single("same", equal));
    let def = parse_formula("formula same free x1 x2 atoms imp(x1,x2) & imp(x2,x1)")?;
    let mut i = Instance::with_variables(source, &["a", "b", "c"])?;
    i.add_constraint("same", &["a", "b"])?;
    i.add_constraint("same", &["b", "c"])?;
    let trace = rewrite_ca(&i, &target, &[def], &[])?;
    print!("{}", write_instance(&trace.target));
    Ok(())
}
