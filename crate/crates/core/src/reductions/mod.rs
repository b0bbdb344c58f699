//! Instance transformations between constraint languages. Each returns the
//! target instance together with a trace of how the source maps into it.

pub mod algebra;
pub mod diag;
pub mod gadgets;
pub mod rewrite;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::pp::PpFormula;
use crate::solvers::deciders::{decide_sep, solve_csp};
use crate::template::Template;

pub use algebra::{flatten_power, flatten_relation, hom_image_reduction, kernel, preimage, subalgebra_reduction};
pub use diag::{diag_family, diag_family_size};
pub use gadgets::{
    base_template, chi2_reduction, chi_reduction, sharp_reduction, star_lift, star_reduction, weak_base_symbol,
};
pub use rewrite::{rewrite_ca, rewrite_with_equality, substitute_family};

/// A target instance and its correspondence with the source.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub reduction: &'static str,
    /// Fingerprint of the source instance.
    pub source_id: String,
    pub target: Instance,
    /// For each source variable, the target variables it became.
    pub variable_map: Vec<Vec<usize>>,
    /// Target variables that are images of no source variable.
    pub created: Vec<usize>,
    /// The compatibility family translated into the target language.
    pub formula_map: Option<Vec<PpFormula>>,
    /// Which case of a case-split construction fired.
    pub case_tag: Option<u8>,
    pub notes: Vec<String>,
}

impl ReductionTrace {
    fn new(reduction: &'static str, source: &Instance, target: Instance) -> Self {
        ReductionTrace {
            reduction,
            source_id: fingerprint(source),
            target,
            variable_map: Vec::new(),
            created: Vec::new(),
            formula_map: None,
            case_tag: None,
            notes: Vec::new(),
        }
    }

    /// Source variables kept under the same index, the rest created.
    fn identity_map(mut self, source_vars: usize) -> Self {
        self.variable_map = (0..source_vars).map(|v| vec![v]).collect();
        self.created = (source_vars..self.target.num_vars()).collect();
        self
    }
}

/// Stable 64-bit FNV-1a digest of an instance's language, variables and constraints.
pub fn fingerprint(instance: &Instance) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(&[instance.domain_size()]);
    for (name, rel) in instance.template().iter() {
        feed(name.as_bytes());
        feed(&(rel.arity() as u64).to_le_bytes());
        for c in rel.codes() {
            feed(&c.to_le_bytes());
        }
        feed(b";");
    }
    for v in instance.variables() {
        feed(v.as_bytes());
        feed(b",");
    }
    for c in instance.constraints() {
        feed(c.relation.as_bytes());
        for &v in &c.scope {
            feed(&(v as u64).to_le_bytes());
        }
        feed(b";");
    }
    format!("{h:016x}")
}

/// A NO instance of SEP on two variables `x`, `y`.
///
/// With two distinct singleton relations available, `x` is pinned to both.
/// Otherwise the first unsatisfiable instance with at most two constraints
/// over `{x, y}` is taken, or failing that the first one that never separates
/// `x` from `y`. Candidates are ordered by constraint count, relation order
/// and lexicographic scope.
pub fn fixed_no_instance(template: &Arc<Template>) -> Result<Instance> {
    let vars = ["x", "y"];
    let singletons: Vec<(&str, u8)> = template
        .iter()
        .filter(|(_, r)| r.arity() == 1 && r.len() == 1)
        .map(|(n, r)| (n, r.row(0)[0]))
        .collect();
    if let Some(&(first, a)) = singletons.first() {
        if let Some(&(second, _)) = singletons.iter().find(|&&(_, b)| b != a) {
            let mut j = Instance::with_variables(template.clone(), &vars)?;
            j.add_constraint(first, &["x"])?;
            j.add_constraint(second, &["x"])?;
            return Ok(j);
        }
    }
    let mut candidates: Vec<(String, Vec<usize>)> = Vec::new();
    for (name, rel) in template.iter() {
        if rel.arity() > 16 {
            continue;
        }
        for code in 0..1u64 << rel.arity() {
            let scope = (0..rel.arity()).rev().map(|i| (code >> i & 1) as usize).collect();
            candidates.push((name.to_string(), scope));
        }
    }
    let build = |picked: &[&(String, Vec<usize>)]| -> Instance {
        let mut j = Instance::with_variables(template.clone(), &vars).expect("two distinct names");
        for (name, scope) in picked {
            j.push(name, scope.clone()).expect("scope over x and y");
        }
        j
    };
    let mut sep_no = None;
    let mut consider = |j: Instance| -> Option<Instance> {
        if solve_csp(&j).is_none() {
            return Some(j);
        }
        if sep_no.is_none() && !decide_sep(&j).answer {
            sep_no = Some(j);
        }
        None
    };
    for a in &candidates {
        if let Some(j) = consider(build(&[a])) {
            return Ok(j);
        }
    }
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i..] {
            if let Some(j) = consider(build(&[a, b])) {
                return Ok(j);
            }
        }
    }
    sep_no.ok_or_else(|| Error::BadNoInstance("no instance on two variables with at most two constraints is a NO instance".into()))
}

/// Checks that `j` is over a language with the same relations as `template`,
/// is a NO instance of SEP, and is unsatisfiable when the default fixed NO
/// instance shows that CSP over the language is nontrivial.
pub fn check_no_instance(j: &Instance, template: &Arc<Template>) -> Result<()> {
    if j.template().as_ref() != template.as_ref() {
        return Err(Error::BadNoInstance("instance is over a different language".into()));
    }
    if decide_sep(j).answer {
        return Err(Error::BadNoInstance("instance is a YES instance of SEP".into()));
    }
    let nontrivial = fixed_no_instance(template).map(|d| solve_csp(&d).is_none()).unwrap_or(false);
    if nontrivial && solve_csp(j).is_some() {
        return Err(Error::BadNoInstance("CSP over the language is nontrivial but the instance is satisfiable".into()));
    }
    Ok(())
}

/// Union-find whose class representative is always the least member.
pub(crate) struct LeastUnion {
    parent: Vec<usize>,
}

impl LeastUnion {
    pub(crate) fn new(n: usize) -> Self {
        LeastUnion { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    /// Representative of each element, and the index of each representative
    /// among all representatives in increasing order.
    pub(crate) fn compact(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let reps: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        let mut index = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if reps[x] == x {
                index[x] = next;
                next += 1;
            }
        }
        let slot = reps.iter().map(|&r| index[r]).collect();
        (reps, slot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{named, Relation};
    use crate::solvers::constants::with_constants;

    #[test]
    fn no_instance_with_constants_pins_twice() {
        let t = Arc::new(with_constants(&Template::single("R", named::one_in_three())));
        let j = fixed_no_instance(&t).unwrap();
        assert_eq!(j.constraints().len(), 2);
        assert!(solve_csp(&j).is_none());
        check_no_instance(&j, &t).unwrap();
    }

    #[test]
    fn no_instance_by_search() {
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let j = fixed_no_instance(&t).unwrap();
        // R(x,x,x) has no solution
        assert_eq!(j.constraints()[0].scope, vec![0, 0, 0]);
        assert!(solve_csp(&j).is_none());
        let or = Arc::new(Template::single("or", named::or2()));
        let j = fixed_no_instance(&or).unwrap();
        // OR is always satisfiable, but or(x,x) & or(y,y) never separates x and y
        assert!(solve_csp(&j).is_some() && !decide_sep(&j).answer);
        let free = Arc::new(Template::single("t", Relation::full(2, 1).unwrap()));
        assert!(matches!(fixed_no_instance(&free), Err(Error::BadNoInstance(_))));
    }

    #[test]
    fn satisfiable_no_instance_is_rejected_when_csp_is_hard() {
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let mut j = Instance::with_variables(t.clone(), &["x", "y", "z"]).unwrap();
        j.add_constraint("R", &["x", "y", "y"]).unwrap();
        j.add_constraint("R", &["x", "z", "z"]).unwrap();
        assert!(!decide_sep(&j).answer);
        assert!(matches!(check_no_instance(&j, &t), Err(Error::BadNoInstance(_))));
    }

    #[test]
    fn least_union_keeps_smallest() {
        let mut u = LeastUnion::new(5);
        u.union(3, 1);
        u.union(4, 3);
        let (reps, slot) = u.compact();
        assert_eq!(reps, vec![0, 1, 2, 1, 1]);
        assert_eq!(slot, vec![0, 1, 2, 1, 1]);
    }
}
