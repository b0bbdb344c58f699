//! Parsing and writing the text format.

use gaplab::format::{parse_document, write_family, write_instance};

const TEXT: &str = "\
# one clause and a projection formula
domain 2
rel plus1in3 arity 3
100 010 001
vars x y z
constraint plus1in3 x y z
formula pi12 free x1 x2 exists w atoms plus1in3(x1,x2,w)
";

fn main() -> gaplab::Result<()> {
    let doc = parse_document(TEXT)?;
    let instance = doc.instance.expect("declared above");
    print!("{}", write_instance(&instance));
    print!("{}", write_family(&doc.family));
    Ok(())
}
