use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance};
use crate::pp::{derive_f_constraints, FConstraint, PpFormula};
use crate::solvers::engine::Search;
use crate::template::Template;

/// The lexicographically least solution, if any.
pub fn solve_csp(instance: &Instance) -> Option<Assignment> {
    Search::for_instance(instance).first()
}

pub fn count_solutions(instance: &Instance, limit: Option<usize>) -> usize {
    Search::for_instance(instance).count(limit)
}

pub fn all_solutions(instance: &Instance) -> Vec<Assignment> {
    Search::for_instance(instance).solutions(None)
}

/// Search for a solution with `u = a` and `v = b`.
pub fn solve_pinned(instance: &Instance, pins: &[(usize, u8)]) -> Option<Assignment> {
    let mut search = Search::for_instance(instance);
    for &(v, a) in pins {
        search.pin(v, a);
    }
    search.first()
}

/// A solution that is not constant, if one exists.
///
/// Such a solution differs from the first variable somewhere, so it suffices
/// to pin the first variable and one other to distinct values.
pub fn decide_ntriv(instance: &Instance) -> Option<Assignment> {
    let d = instance.domain_size();
    for v in 1..instance.num_vars() {
        for a in 0..d {
            for b in (0..d).filter(|&b| b != a) {
                if let Some(sol) = solve_pinned(instance, &[(0, a), (v, b)]) {
                    return Some(sol);
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SepReport {
    pub answer: bool,
    /// For each pair `u < v` in lexicographic order, a solution with `u != v`.
    /// On a NO answer, the pairs before the failing one.
    pub witnesses: Vec<((usize, usize), Assignment)>,
    pub failing_pair: Option<(usize, usize)>,
}

/// Whether every pair of distinct variables is separated by some solution.
/// With fewer than two variables the answer is vacuously YES.
pub fn decide_sep(instance: &Instance) -> SepReport {
    let n = instance.num_vars();
    let d = instance.domain_size();
    let mut found: Vec<Assignment> = Vec::new();
    let mut witnesses = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let cached = found.iter().find(|s| s[u] != s[v]).cloned();
            let witness = cached.or_else(|| {
                let sol = (0..d)
                    .flat_map(|a| (0..d).filter(move |&b| b != a).map(move |b| (a, b)))
                    .find_map(|(a, b)| solve_pinned(instance, &[(u, a), (v, b)]))?;
                found.push(sol.clone());
                Some(sol)
            });
            match witness {
                Some(sol) => witnesses.push(((u, v), sol)),
                None => return SepReport { answer: false, witnesses, failing_pair: Some((u, v)) },
            }
        }
    }
    SepReport { answer: true, witnesses, failing_pair: None }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustReport {
    pub answer: bool,
    /// Subset and an F-compatible assignment on it with no extension.
    pub counterexample: Option<(Vec<usize>, Vec<u8>)>,
    /// Number of F-compatible partial assignments examined.
    pub checked: usize,
}

/// Subsets of `0..n` of size `size`, in lexicographic order.
pub(crate) fn subsets_of_size(n: usize, size: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut s: Vec<usize> = (0..size).collect();
    if size > n {
        return true;
    }
    loop {
        if !f(&s) {
            return false;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if s[i] < n - size + i {
                s[i] += 1;
                for j in i + 1..size {
                    s[j] = s[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Assignments on `subset` satisfying every derived constraint inside it,
/// in lexicographic order.
pub fn compatible_assignments(domain_size: u8, subset: &[usize], derived: &[FConstraint]) -> Vec<Vec<u8>> {
    let mut local = vec![usize::MAX; subset.iter().max().map_or(0, |m| m + 1)];
    for (i, &v) in subset.iter().enumerate() {
        local[v] = i;
    }
    let mut search = Search::new(domain_size, subset.len());
    for c in derived {
        if c.scope.iter().all(|&v| v < local.len() && local[v] != usize::MAX) {
            search.add(c.scope.iter().map(|&v| local[v]).collect(), &c.relation);
        }
    }
    search.solutions(None)
}

/// Restrictions of solutions to `subset`, in lexicographic order.
fn extendable_assignments(instance: &Instance, subset: &[usize]) -> Vec<Vec<u8>> {
    // renumber so the subset comes first, then project
    let n = instance.num_vars();
    let mut order: Vec<usize> = subset.to_vec();
    order.extend((0..n).filter(|v| !subset.contains(v)));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut search = Search::new(instance.domain_size(), n);
    for c in instance.constraints() {
        search.add(c.scope.iter().map(|&v| pos[v]).collect(), instance.relation(c));
    }
    search.projected(subset.len())
}

/// Whether every F-compatible assignment on at most `k` variables extends to
/// a solution. Subsets are visited by size, then lexicographically, and the
/// first failure is reported.
pub fn decide_robust(instance: &Instance, k: usize, family: &[PpFormula]) -> Result<RobustReport> {
    let derived = derive_f_constraints(instance, family)?;
    let n = instance.num_vars();
    let d = instance.domain_size();
    let mut checked = 0;
    let mut counterexample = None;
    for size in 0..=k.min(n) {
        let complete = subsets_of_size(n, size, |s| {
            let compatible = compatible_assignments(d, s, &derived);
            let extendable = extendable_assignments(instance, s);
            checked += compatible.len();
            if let Some(bad) = compatible.into_iter().find(|a| extendable.binary_search(a).is_err()) {
                counterexample = Some((s.to_vec(), bad));
                return false;
            }
            true
        });
        if !complete {
            break;
        }
    }
    Ok(RobustReport { answer: counterexample.is_none(), counterexample, checked })
}

fn check_same_variables(a: &Instance, b: &Instance) -> Result<()> {
    if a.variables() != b.variables() {
        return Err(Error::InvalidInstance("instances must share their variable list".into()));
    }
    if a.domain_size() != b.domain_size() {
        return Err(Error::DomainMismatch { left: a.domain_size(), right: b.domain_size() });
    }
    Ok(())
}

/// Whether every solution of `first` solves `second`: for each constraint of
/// `second`, `first` plus the complement of that constraint must be unsatisfiable.
pub fn decide_impl(first: &Instance, second: &Instance) -> Result<bool> {
    check_same_variables(first, second)?;
    for c in second.constraints() {
        let Some(outside) = second.relation(c).complement()? else { continue };
        let mut search = Search::for_instance(first);
        search.add(c.scope.clone(), &outside);
        if search.is_satisfiable() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn decide_equiv(first: &Instance, second: &Instance) -> Result<bool> {
    Ok(decide_impl(first, second)? && decide_impl(second, first)?)
}

/// `(V; C1 ∪ C2)` over the union of both templates. Relations of the second
/// instance are renamed on a name clash with different content.
pub fn conjoin(first: &Instance, second: &Instance) -> Result<Instance> {
    check_same_variables(first, second)?;
    let mut template: Template = (**first.template()).clone();
    let mut rename = std::collections::HashMap::new();
    for (name, rel) in second.template().iter() {
        rename.insert(name.to_string(), template.insert_or_reuse(name, rel.clone())?);
    }
    let mut out = first.retarget(Arc::new(template))?;
    for c in second.constraints() {
        out.push(&rename[&c.relation], c.scope.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pp::projections_family;
    use crate::relation::{named, Relation};

    fn single(rel: Relation, scopes: &[&[&str]], vars: &[&str]) -> Instance {
        let t = Arc::new(Template::single("R", rel));
        let mut i = Instance::with_variables(t, vars).unwrap();
        for s in scopes {
            i.add_constraint("R", s).unwrap();
        }
        i
    }

    #[test]
    fn csp_examples() {
        let i = single(named::one_in_three(), &[&["x", "y", "z"]], &["x", "y", "z"]);
        assert_eq!(solve_csp(&i), Some(vec![0, 0, 1]));
        let k4 = single(
            named::one_in_three(),
            &[&["x", "y", "z"], &["x", "y", "w"], &["x", "z", "w"], &["y", "z", "w"]],
            &["x", "y", "z", "w"],
        );
        // every variable would need to be the unique 1 of three clauses
        assert_eq!(solve_csp(&k4), None);
        let lone = single(named::or2(), &[], &["x"]);
        assert_eq!(solve_csp(&lone), Some(vec![0]));
    }

    #[test]
    fn ntriv_examples() {
        let i = single(named::one_in_three(), &[&["x", "y", "z"]], &["x", "y", "z"]);
        assert!(decide_ntriv(&i).is_some());
        assert!(decide_ntriv(&single(named::or2(), &[], &["x"])).is_none());
        let eq = single(Relation::equality(2), &[&["x", "y"]], &["x", "y"]);
        assert!(decide_ntriv(&eq).is_none());
    }

    #[test]
    fn sep_examples() {
        let or = single(named::or2(), &[&["x", "y"]], &["x", "y"]);
        let rep = decide_sep(&or);
        assert!(rep.answer);
        assert_eq!(rep.witnesses, vec![((0, 1), vec![0, 1])]);
        let ones = single(Relation::from_rows(2, &["11"]).unwrap(), &[&["x", "y"]], &["x", "y"]);
        assert_eq!(decide_sep(&ones).failing_pair, Some((0, 1)));
        assert!(decide_sep(&single(named::or2(), &[], &["x"])).answer);
    }

    #[test]
    fn robust_examples() {
        let free = single(named::or2(), &[], &["x", "y"]);
        assert!(decide_robust(&free, 2, &[]).unwrap().answer);
        let i = single(named::one_in_three(), &[&["x", "y", "z"]], &["x", "y", "z"]);
        let fam = projections_family(i.template());
        assert!(decide_robust(&i, 2, &fam).unwrap().answer);
        let eq = single(Relation::from_rows(2, &["00", "11"]).unwrap(), &[&["x", "y"]], &["x", "y"]);
        let rep = decide_robust(&eq, 2, &[]).unwrap();
        assert_eq!(rep.counterexample, Some((vec![0, 1], vec![0, 1])));
    }

    #[test]
    fn impl_and_equiv() {
        let a = single(named::or2(), &[&["x", "y"]], &["x", "y"]);
        let b = single(Relation::from_rows(2, &["11"]).unwrap(), &[&["x", "y"]], &["x", "y"]);
        assert!(decide_equiv(&a, &a).unwrap());
        assert!(!decide_equiv(&a, &b).unwrap());
        assert!(decide_impl(&b, &a).unwrap());
        assert!(!decide_impl(&a, &b).unwrap());
        let both = conjoin(&a, &b).unwrap();
        assert!(decide_impl(&both, &a).unwrap());
        assert_eq!(both.template().len(), 2);
    }

    #[test]
    fn subset_enumeration() {
        let mut seen = Vec::new();
        subsets_of_size(4, 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = 0;
        subsets_of_size(3, 0, |_| {
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }
}
