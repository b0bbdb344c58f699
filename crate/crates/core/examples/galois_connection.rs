//! Polymorphisms, clone closure and pp-definability for a few Boolean relations.

use gaplab::galois::{boolean, c_closure, clone_closure, coclone_member, polymorphisms, weak_coclone_member};
use gaplab::relation::named;
use gaplab::Template;

fn main() -> gaplab::Result<()> {
    let or = named::or2();
    let binary = polymorphisms(std::slice::from_ref(&or), 2, 2)?;
    println!("binary polymorphisms of OR: {}", binary.len());
    for f in &binary {
        println!("  {}", f.table_string());
    }
    let clone = clone_closure(&[boolean::not()], 2, 2)?;
    println!("operations of arity <= 2 generated by negation: {}", clone.len());
    let closed = c_closure(&named::one_in_three(), &[boolean::not()])?;
    println!("1-in-3 closed under negation has {} rows", closed.len());
    let nae = Template::single("nae", named::nae3());
    let xor = named::xor2();
    println!("xor pp-definable from nae3: {}", coclone_member(&xor, &nae.relations())?.member);
    println!("xor conjunct-atomic over nae3: {}", weak_coclone_member(&xor, &nae, false)?);
    Ok(())
}
