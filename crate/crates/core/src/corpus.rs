//! Built-in languages and worked instances, served as text in the file format.

use crate::error::{Error, Result};
use crate::format::{parse_instance, parse_language, write_instance, write_language};
use crate::instance::Instance;
use crate::post::{weak_base, Coclone};
use crate::reductions::{sharp_reduction, star_reduction};
use crate::relation::{named, Relation};
use crate::template::Template;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Language,
    Instance,
}

#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub kind: Kind,
    pub description: &'static str,
}

const fn lang(name: &'static str, description: &'static str) -> Entry {
    Entry { name, kind: Kind::Language, description }
}

const fn inst(name: &'static str, description: &'static str) -> Entry {
    Entry { name, kind: Kind::Instance, description }
}

pub const ENTRIES: [Entry; 18] = [
    lang("cols3", "the columns relation, weak base of II2"),
    lang("n2", "closure of cols3 under negation, weak base of IN2"),
    lang("i1", "closure of cols3 under the constant 1, weak base of II1"),
    lang("i0", "closure of cols3 under the constant 0, weak base of II0"),
    lang("i", "closure of cols3 under both constants, weak base of II"),
    lang("n", "closure of cols3 under negation and constants, weak base of IN"),
    lang("plus1in3", "positive 1-in-3"),
    lang("nae3", "not-all-equal on three coordinates"),
    lang("or2", "binary OR, dual Horn"),
    lang("implication", "x -> y, Horn and bijunctive"),
    lang("xor", "binary XOR, affine"),
    lang("horn3", "x and y -> z, Horn"),
    lang("xor3", "odd parity on three coordinates, affine"),
    lang("nand2", "binary NAND, Horn"),
    inst("one-clause", "one positive 1-in-3 clause on x y z"),
    inst("k4", "four 1-in-3 clauses on every triple of four variables; unsatisfiable"),
    inst("one-clause-star", "the columns instance built from one-clause"),
    inst("one-clause-sharp", "the negation-closed instance built from one-clause"),
];

pub fn entry(name: &str) -> Result<Entry> {
    ENTRIES.iter().find(|e| e.name == name).copied().ok_or_else(|| Error::Semantic(format!("no corpus entry `{name}`")))
}

fn relation(name: &str) -> Result<Relation> {
    let rel = |rows: &[&str]| Relation::from_rows(2, rows);
    match name {
        "cols3" => weak_base(Coclone::II2),
        "n2" => weak_base(Coclone::IN2),
        "i1" => weak_base(Coclone::II1),
        "i0" => weak_base(Coclone::II0),
        "i" => weak_base(Coclone::II),
        "n" => weak_base(Coclone::IN),
        "plus1in3" => Ok(named::one_in_three()),
        "nae3" => Ok(named::nae3()),
        "or2" => Ok(named::or2()),
        "implication" => Ok(named::implication()),
        "xor" => Ok(named::xor2()),
        "horn3" => rel(&["000", "001", "010", "011", "100", "101", "111"]),
        "xor3" => Ok(named::xor3()),
        "nand2" => rel(&["00", "01", "10"]),
        _ => Err(Error::Semantic(format!("no corpus language `{name}`"))),
    }
}

fn one_in_three(clauses: &[[&str; 3]], vars: &[&str]) -> Result<Instance> {
    let t = std::sync::Arc::new(Template::single("plus1in3", named::one_in_three()));
    let mut i = Instance::with_variables(t, vars)?;
    for c in clauses {
        i.add_constraint("plus1in3", c)?;
    }
    Ok(i)
}

fn build_instance(name: &str) -> Result<Instance> {
    let one = || one_in_three(&[["x", "y", "z"]], &["x", "y", "z"]);
    match name {
        "one-clause" => one(),
        "k4" => one_in_three(
            &[["x", "y", "z"], ["x", "y", "w"], ["x", "z", "w"], ["y", "z", "w"]],
            &["x", "y", "z", "w"],
        ),
        "one-clause-star" => Ok(star_reduction(&one()?)?.target),
        "one-clause-sharp" => Ok(sharp_reduction(&one()?)?.target),
        _ => Err(Error::Semantic(format!("no corpus instance `{name}`"))),
    }
}

/// The entry's file text.
pub fn text(name: &str) -> Result<String> {
    match entry(name)?.kind {
        Kind::Language => Ok(write_language(&Template::single(name, relation(name)?))),
        Kind::Instance => Ok(write_instance(&build_instance(name)?)),
    }
}

/// The language of an entry; for instances, the language they are over.
pub fn language(name: &str) -> Result<Template> {
    parse_language(&text(name)?)
}

pub fn instance(name: &str) -> Result<Instance> {
    match entry(name)?.kind {
        Kind::Instance => parse_instance(&text(name)?),
        Kind::Language => Err(Error::Semantic(format!("corpus entry `{name}` is a language"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::post::classify;

    #[test]
    fn every_entry_round_trips() {
        for e in ENTRIES {
            let t = text(e.name).unwrap();
            let again = match e.kind {
                Kind::Language => write_language(&parse_language(&t).unwrap()),
                Kind::Instance => write_instance(&parse_instance(&t).unwrap()),
            };
            assert_eq!(again, t, "{}", e.name);
        }
    }

    #[test]
    fn weak_bases_classify_to_their_coclones() {
        for (name, c) in [("cols3", "II2"), ("n2", "IN2"), ("i1", "II1"), ("i0", "II0"), ("i", "II"), ("n", "IN")] {
            assert_eq!(classify(&language(name).unwrap()).unwrap().coclone.to_string(), c);
        }
    }

    #[test]
    fn star_instance_text() {
        let t = text("one-clause-star").unwrap();
        assert!(t.contains("vars x y z not:x not:y not:z bot top\n"));
        assert!(t.contains("constraint cols3 x y z not:x not:y not:z bot top\n"));
        assert!(instance("cols3").is_err());
    }
}
