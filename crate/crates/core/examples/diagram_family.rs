//! The diagram family of an instance with constants over the NAE core.

use std::sync::Arc;

use gaplab::format::write_instance;
use gaplab::relation::named;
use gaplab::solvers::{decide_sep, with_constants};
use gaplab::{Instance, Template};

fn main() -> gaplab::Result<()> {
    let core = Arc::new(Template::single("nae", named::nae3()));
    let extended = Arc::new(with_constants(&core));
    let mut i = Instance::with_variables(extended, &["x", "y", "z"])?;
    i.add_constraint("nae", &["x", "y", "z"])?;
    i.add_constraint("const0", &["x"])?;
    let family = gaplab::reductions::diag_family(&i, &core)?;
    println!("{} members; source separable: {}", family.len(), decide_sep(&i).answer);
    for m in &family {
        println!("# case {:?}, separable: {}", m.case_tag, decide_sep(&m.target).answer);
        print!("{}", write_instance(&m.target));
    }
    Ok(())
}
