//! Deciding SEP and (k,F)-Robust with an oracle for CSP over the language
//! extended by all singleton unary relations.

use std::sync::Arc;

use crate::error::Result;
use crate::instance::Instance;
use crate::pp::{derive_f_constraints, PpFormula};
use crate::relation::Relation;
use crate::solvers::deciders::{compatible_assignments, subsets_of_size};
use crate::template::Template;

/// Name of the singleton relation `{(a)}` when it is added to a language.
pub fn constant_name(a: u8) -> String {
    format!("const{a}")
}

/// The language together with every singleton `{(a)}`. Singletons already
/// present (under any name) are not added again.
pub fn with_constants(template: &Template) -> Template {
    let mut out = template.clone();
    for a in 0..template.domain_size() {
        let single = Relation::singleton(template.domain_size(), a).expect("value in range");
        out.insert_or_reuse(&constant_name(a), single).expect("same domain");
    }
    out
}

/// Alias matching the algebraic reading: the relations of the full idempotent reduct.
pub fn idempotent_language(template: &Template) -> Template {
    with_constants(template)
}

/// Outcome of a decision made through a CSP oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub answer: bool,
    pub queries: usize,
}

/// The instance over the constants-extended language, plus a builder for
/// pinned copies.
struct Pinner {
    base: Instance,
    names: Vec<String>,
}

impl Pinner {
    fn new(instance: &Instance) -> Result<Self> {
        let extended = Arc::new(with_constants(instance.template()));
        let names = (0..instance.domain_size())
            .map(|a| {
                let single = Relation::singleton(instance.domain_size(), a).expect("value in range");
                extended.find(&single).expect("added above").to_string()
            })
            .collect();
        Ok(Pinner { base: instance.retarget(extended)?, names })
    }

    fn pinned(&self, pins: &[(usize, u8)]) -> Instance {
        let mut q = self.base.clone();
        for &(v, a) in pins {
            q.push(&self.names[a as usize], vec![v]).expect("unary constraint on a known variable");
        }
        q
    }
}

/// SEP through the oracle: pair `(u, v)` is separated iff some query with
/// `u = a`, `v = b`, `a != b`, is satisfiable.
pub fn sep_via_constants(
    instance: &Instance,
    oracle: &mut dyn FnMut(&Instance) -> Result<bool>,
) -> Result<OracleAnswer> {
    let pinner = Pinner::new(instance)?;
    let d = instance.domain_size();
    let n = instance.num_vars();
    let mut queries = 0;
    for u in 0..n {
        for v in u + 1..n {
            let mut separated = false;
            'values: for a in 0..d {
                for b in (0..d).filter(|&b| b != a) {
                    queries += 1;
                    if oracle(&pinner.pinned(&[(u, a), (v, b)]))? {
                        separated = true;
                        break 'values;
                    }
                }
            }
            if !separated {
                return Ok(OracleAnswer { answer: false, queries });
            }
        }
    }
    Ok(OracleAnswer { answer: true, queries })
}

/// (k,F)-Robust through the oracle: one query per F-compatible assignment on
/// each subset of at most `k` variables, the empty subset included.
pub fn robust_via_constants(
    instance: &Instance,
    k: usize,
    family: &[PpFormula],
    oracle: &mut dyn FnMut(&Instance) -> Result<bool>,
) -> Result<OracleAnswer> {
    let pinner = Pinner::new(instance)?;
    let derived = derive_f_constraints(instance, family)?;
    let n = instance.num_vars();
    let mut queries = 0;
    let mut failure = None;
    for size in 0..=k.min(n) {
        subsets_of_size(n, size, |s| {
            for assignment in compatible_assignments(instance.domain_size(), s, &derived) {
                queries += 1;
                let pins: Vec<(usize, u8)> = s.iter().copied().zip(assignment).collect();
                match oracle(&pinner.pinned(&pins)) {
                    Ok(true) => {}
                    Ok(false) => {
                        failure = Some(Ok(()));
                        return false;
                    }
                    Err(e) => {
                        failure = Some(Err(e));
                        return false;
                    }
                }
            }
            true
        });
        if let Some(f) = failure {
            f?;
            return Ok(OracleAnswer { answer: false, queries });
        }
    }
    Ok(OracleAnswer { answer: true, queries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pp::projections_family;
    use crate::relation::named;
    use crate::solvers::deciders::{decide_robust, decide_sep, solve_csp};

    fn oracle() -> impl FnMut(&Instance) -> Result<bool> {
        |q: &Instance| Ok(solve_csp(q).is_some())
    }

    #[test]
    fn constants_are_added_once() {
        let t = Template::single("or", named::or2());
        let c = with_constants(&t);
        assert_eq!(c.names().collect::<Vec<_>>(), vec!["or", "const0", "const1"]);
        assert_eq!(with_constants(&c), c);
    }

    #[test]
    fn sep_matches_direct() {
        let t = Arc::new(Template::single("or", named::or2()));
        let mut i = Instance::with_variables(t, &["x", "y"]).unwrap();
        i.add_constraint("or", &["x", "y"]).unwrap();
        let got = sep_via_constants(&i, &mut oracle()).unwrap();
        assert_eq!(got, OracleAnswer { answer: true, queries: 1 });
        assert_eq!(got.answer, decide_sep(&i).answer);
    }

    #[test]
    fn robust_query_count() {
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let mut i = Instance::with_variables(t, &["x", "y", "z"]).unwrap();
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        let fam = projections_family(i.template());
        let got = robust_via_constants(&i, 2, &fam, &mut oracle()).unwrap();
        // 1 (empty) + 3 singletons * 2 values + 3 pairs * 3 compatible pairs
        assert_eq!(got, OracleAnswer { answer: true, queries: 1 + 6 + 9 });
        assert_eq!(got.answer, decide_robust(&i, 2, &fam).unwrap().answer);
    }
}
