//! Where a Boolean language sits relative to the co-clone `IN`, and what that
//! says about the complexity of its constraint problems.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::galois::{boolean, c_closure, polymorphisms, preserves_all, Operation};
use crate::relation::Relation;
use crate::template::Template;

/// Which probe operations preserve every relation of a language.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProbeReport {
    pub has_not: bool,
    pub has_c0: bool,
    pub has_c1: bool,
    pub has_and: bool,
    pub has_or: bool,
    pub has_maj: bool,
    pub has_min: bool,
}

impl ProbeReport {
    /// Flags in the order `not c0 c1 and or maj min`.
    pub fn flags(&self) -> [(&'static str, bool); 7] {
        [
            ("not", self.has_not),
            ("c0", self.has_c0),
            ("c1", self.has_c1),
            ("and", self.has_and),
            ("or", self.has_or),
            ("maj", self.has_maj),
            ("min", self.has_min),
        ]
    }
}

/// Polymorphism certifying that `IN` is not contained in the co-clone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    And,
    Or,
    Minority,
    Majority,
}

impl Witness {
    pub fn operation(self) -> Operation {
        match self {
            Witness::And => boolean::and(),
            Witness::Or => boolean::or(),
            Witness::Minority => boolean::minority(),
            Witness::Majority => boolean::maj(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Witness::And => "∧",
            Witness::Or => "∨",
            Witness::Minority => "min",
            Witness::Majority => "maj",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coclone {
    II2,
    IN2,
    II0,
    II1,
    II,
    IN,
    Tractable(Witness),
}

impl Coclone {
    /// The six co-clones containing `IN2` or `II0`, `II1`: every hard case.
    pub const HARD: [Coclone; 6] = [Coclone::II2, Coclone::IN2, Coclone::II0, Coclone::II1, Coclone::II, Coclone::IN];

    /// Generators of the clone whose invariants form the co-clone.
    pub fn generators(self) -> Result<Vec<Operation>> {
        use boolean::*;
        Ok(match self {
            Coclone::II2 => vec![],
            Coclone::IN2 => vec![not()],
            Coclone::II0 => vec![c0()],
            Coclone::II1 => vec![c1()],
            Coclone::II => vec![c0(), c1()],
            Coclone::IN => vec![not(), c0()],
            Coclone::Tractable(_) => return Err(Error::UnknownCoclone(self.to_string())),
        })
    }
}

impl fmt::Display for Coclone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coclone::II2 => write!(f, "II2"),
            Coclone::IN2 => write!(f, "IN2"),
            Coclone::II0 => write!(f, "II0"),
            Coclone::II1 => write!(f, "II1"),
            Coclone::II => write!(f, "II"),
            Coclone::IN => write!(f, "IN"),
            Coclone::Tractable(w) => write!(f, "TRACTABLE({})", w.symbol()),
        }
    }
}

impl FromStr for Coclone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "II2" => Coclone::II2,
            "IN2" => Coclone::IN2,
            "II0" => Coclone::II0,
            "II1" => Coclone::II1,
            "II" => Coclone::II,
            "IN" => Coclone::IN,
            _ => return Err(Error::UnknownCoclone(s.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub coclone: Coclone,
    pub probes: ProbeReport,
}

impl Classification {
    pub fn witness(&self) -> Option<Witness> {
        match self.coclone {
            Coclone::Tractable(w) => Some(w),
            _ => None,
        }
    }
}

pub fn probe(template: &Template) -> Result<ProbeReport> {
    probe_relations(&template.relations())
}

pub fn probe_relations(relations: &[Relation]) -> Result<ProbeReport> {
    if relations.iter().any(|r| r.domain_size() != 2) {
        return Err(Error::NonBooleanDomain);
    }
    let has = |f: Operation| preserves_all(&f, relations).expect("Boolean domain checked");
    Ok(ProbeReport {
        has_not: has(boolean::not()),
        has_c0: has(boolean::c0()),
        has_c1: has(boolean::c1()),
        has_and: has(boolean::and()),
        has_or: has(boolean::or()),
        has_maj: has(boolean::maj()),
        has_min: has(boolean::minority()),
    })
}

/// Tractability witnesses are tried in the order ∧, ∨, min, maj.
pub fn classify_probes(p: ProbeReport) -> Coclone {
    if p.has_and {
        return Coclone::Tractable(Witness::And);
    }
    if p.has_or {
        return Coclone::Tractable(Witness::Or);
    }
    if p.has_min {
        return Coclone::Tractable(Witness::Minority);
    }
    if p.has_maj {
        return Coclone::Tractable(Witness::Majority);
    }
    match (p.has_not, p.has_c0, p.has_c1) {
        (false, false, false) => Coclone::II2,
        (true, false, false) => Coclone::IN2,
        (false, true, false) => Coclone::II0,
        (false, false, true) => Coclone::II1,
        (false, true, true) => Coclone::II,
        (true, true, true) => Coclone::IN,
        // negation conjugates the two constants
        (true, _, _) => unreachable!("a negation-closed language has both constants or neither"),
    }
}

pub fn classify(template: &Template) -> Result<Classification> {
    let probes = probe(template)?;
    Ok(Classification { coclone: classify_probes(probes), probes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complexity {
    P,
    NpComplete,
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Complexity::P => "P",
            Complexity::NpComplete => "NP-complete",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gap {
    /// No CSP NO-instance is separable and 2-robust.
    CspVsSepRobust,
    /// No instance without nonconstant solutions is separable and 2-robust.
    NtrivVsSepRobust,
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gap::CspVsSepRobust => "GAP(N_CSP, Y_SEP∩(2,F))",
            Gap::NtrivVsSepRobust => "GAP(N_NTriv, Y_SEP∩(2,F))",
        })
    }
}

pub const PROBLEMS: [&str; 4] = ["CSP", "NTriv", "SEP", "(2,F)-Robust"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub coclone: Coclone,
    pub csp: Complexity,
    pub ntriv: Complexity,
    pub sep: Complexity,
    pub robust: Complexity,
    pub gap: Option<Gap>,
}

impl Verdict {
    pub fn entries(&self) -> [(&'static str, Complexity); 4] {
        [(PROBLEMS[0], self.csp), (PROBLEMS[1], self.ntriv), (PROBLEMS[2], self.sep), (PROBLEMS[3], self.robust)]
    }
}

/// One line: co-clone, problems grouped by complexity, and the gap statement.
impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coclone)?;
        for c in [Complexity::P, Complexity::NpComplete] {
            let names: Vec<&str> = self.entries().iter().filter(|(_, x)| *x == c).map(|(n, _)| *n).collect();
            if !names.is_empty() {
                write!(f, "; {}: {c}", names.join(", "))?;
            }
        }
        match self.gap {
            Some(g) => write!(f, "; {g}"),
            None => write!(f, "; no gap"),
        }
    }
}

pub fn verdict(coclone: Coclone) -> Verdict {
    use Complexity::*;
    match coclone {
        Coclone::II2 | Coclone::IN2 => Verdict {
            coclone,
            csp: NpComplete,
            ntriv: NpComplete,
            sep: NpComplete,
            robust: NpComplete,
            gap: Some(Gap::CspVsSepRobust),
        },
        // a constant map solves every instance, so plain CSP is trivial
        Coclone::II0 | Coclone::II1 | Coclone::II | Coclone::IN => Verdict {
            coclone,
            csp: P,
            ntriv: NpComplete,
            sep: NpComplete,
            robust: NpComplete,
            gap: Some(Gap::NtrivVsSepRobust),
        },
        Coclone::Tractable(_) => Verdict { coclone, csp: P, ntriv: P, sep: P, robust: P, gap: None },
    }
}

/// The 8-ary relation whose columns list every Boolean triple: three unit
/// vectors, their negations, then all zeros and all ones.
pub fn cols3() -> Relation {
    Relation::from_rows(2, &["10001101", "01010101", "00111001"]).expect("well formed")
}

/// Closure of [`cols3`] under the clone generators of the co-clone.
pub fn weak_base(coclone: Coclone) -> Result<Relation> {
    c_closure(&cols3(), &coclone.generators()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundancyReport {
    /// Pairs `(i, j)`, `i < j`, of identical columns (0-based).
    pub equal_column_pairs: Vec<(usize, usize)>,
    /// Coordinates that can be changed freely without leaving the relation.
    pub free_coordinates: Vec<usize>,
}

impl RedundancyReport {
    pub fn top_redundant(&self) -> bool {
        !self.free_coordinates.is_empty()
    }

    pub fn irredundant(&self) -> bool {
        self.equal_column_pairs.is_empty() && self.free_coordinates.is_empty()
    }
}

pub fn redundancy_report(r: &Relation) -> RedundancyReport {
    let k = r.arity();
    let columns: Vec<Vec<u8>> = (0..k).map(|j| r.column(j)).collect();
    let mut equal_column_pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if columns[i] == columns[j] {
                equal_column_pairs.push((i, j));
            }
        }
    }
    let free_coordinates = (0..k)
        .filter(|&i| {
            r.rows().all(|t| {
                let mut u = t.to_vec();
                (0..r.domain_size()).all(|a| {
                    u[i] = a;
                    r.contains(&u)
                })
            })
        })
        .collect();
    RedundancyReport { equal_column_pairs, free_coordinates }
}

/// Whether every unary polymorphism is a bijection.
pub fn is_core(template: &Template) -> Result<bool> {
    Ok(polymorphisms(&template.relations(), template.domain_size(), 1)?.iter().all(Operation::is_bijective))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::named;

    fn lang(r: Relation) -> Template {
        Template::single("r", r)
    }

    #[test]
    fn probe_examples() {
        assert_eq!(probe(&lang(named::one_in_three())).unwrap(), ProbeReport::default());
        assert_eq!(probe(&lang(named::nae3())).unwrap(), ProbeReport { has_not: true, ..Default::default() });
        assert_eq!(
            probe(&lang(named::or2())).unwrap(),
            ProbeReport { has_or: true, has_c1: true, has_maj: true, ..Default::default() }
        );
        assert_eq!(probe(&lang(Relation::equality(3))), Err(Error::NonBooleanDomain));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&lang(named::one_in_three())).unwrap().coclone, Coclone::II2);
        assert_eq!(classify(&lang(named::nae3())).unwrap().coclone, Coclone::IN2);
        assert_eq!(classify(&lang(named::implication())).unwrap().coclone, Coclone::Tractable(Witness::And));
        assert_eq!(classify(&lang(named::xor2())).unwrap().coclone, Coclone::Tractable(Witness::Minority));
        assert_eq!(classify(&lang(named::or2())).unwrap().coclone, Coclone::Tractable(Witness::Or));
    }

    #[test]
    fn verdict_lines() {
        assert_eq!(
            verdict(Coclone::II2).to_string(),
            "II2; CSP, NTriv, SEP, (2,F)-Robust: NP-complete; GAP(N_CSP, Y_SEP∩(2,F))"
        );
        assert_eq!(
            verdict(Coclone::IN).to_string(),
            "IN; CSP: P; NTriv, SEP, (2,F)-Robust: NP-complete; GAP(N_NTriv, Y_SEP∩(2,F))"
        );
        assert_eq!(verdict(Coclone::Tractable(Witness::And)).gap, None);
    }

    #[test]
    fn cols3_shape() {
        let c = cols3();
        assert_eq!((c.len(), c.arity()), (3, 8));
        for j in 0..3 {
            assert_eq!(c.column(j + 3), c.column(j).iter().map(|v| 1 - v).collect::<Vec<_>>());
        }
        assert_eq!(c.column(6), vec![0, 0, 0]);
        assert_eq!(c.column(7), vec![1, 1, 1]);
        assert_eq!(c.project(&[0, 1, 2]).unwrap(), named::one_in_three());
    }

    #[test]
    fn weak_bases_classify_to_themselves() {
        for id in Coclone::HARD {
            let wb = weak_base(id).unwrap();
            assert_eq!(classify(&lang(wb.clone())).unwrap().coclone, id, "{id}");
            assert!(redundancy_report(&wb).irredundant(), "{id}");
        }
        let sizes: Vec<usize> = Coclone::HARD.iter().map(|&id| weak_base(id).unwrap().len()).collect();
        assert_eq!(sizes, vec![3, 6, 4, 4, 5, 8]);
    }

    #[test]
    fn redundancy_examples() {
        let eq = Relation::from_rows(2, &["00", "11"]).unwrap();
        assert_eq!(redundancy_report(&eq).equal_column_pairs, vec![(0, 1)]);
        let full = Relation::full(2, 2).unwrap();
        assert_eq!(redundancy_report(&full).free_coordinates, vec![0, 1]);
        assert!(redundancy_report(&cols3()).irredundant());
    }

    #[test]
    fn cores() {
        assert!(is_core(&lang(named::one_in_three())).unwrap());
        assert!(!is_core(&lang(named::or2())).unwrap());
        assert!(!is_core(&lang(Relation::full(2, 2).unwrap())).unwrap());
        assert!(is_core(&lang(named::nae3())).unwrap());
    }
}
