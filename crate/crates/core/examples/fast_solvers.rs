//! Horn, dual Horn, affine and bijunctive instances solved through their witnesses.

use std::sync::Arc;

use gaplab::post::classify;
use gaplab::relation::named;
use gaplab::solvers::{solve_csp, solve_fast};
use gaplab::verify::{gen_instance, GenOptions};
use gaplab::Template;

fn main() -> gaplab::Result<()> {
    let languages = [
        ("implication", named::implication()),
        ("or2", named::or2()),
        ("xor3", named::xor3()),
        ("xor", named::xor2()),
    ];
    for (name, rel) in languages {
        let t = Arc::new(Template::single(name, rel));
        let c = classify(&t)?;
        let i = gen_instance(&t, 10, 12, 1, &GenOptions::default())?;
        let fast = solve_fast(&i, &c)?;
        println!("{name:<12} {} fast: {:?} search agrees: {}", c.coclone, fast.is_some(), fast.is_some() == solve_csp(&i).is_some());
    }
    Ok(())
}
