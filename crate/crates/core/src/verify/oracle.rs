//! Brute-force deciders that share no code with the solvers: plain
//! enumeration, with local compatibility read directly off the constraints.

use std::collections::BTreeSet;

use crate::instance::{Assignment, Instance};

/// Every solution in lexicographic order, by depth-first enumeration that
/// checks each constraint once its last variable is set.
pub fn brute_solutions(instance: &Instance) -> Vec<Assignment> {
    let n = instance.num_vars();
    let d = instance.domain_size();
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut always = true;
    for (ci, c) in instance.constraints().iter().enumerate() {
        match c.scope.iter().max() {
            Some(&last) => due[last].push(ci),
            None => always &= !instance.relation(c).is_empty(),
        }
    }
    let mut out = Vec::new();
    if !always {
        return out;
    }
    let mut a = vec![0u8; n];
    fn go(instance: &Instance, due: &[Vec<usize>], d: u8, v: usize, a: &mut Vec<u8>, out: &mut Vec<Assignment>) {
        if v == a.len() {
            out.push(a.clone());
            return;
        }
        for value in 0..d {
            a[v] = value;
            let ok = due[v].iter().all(|&ci| {
                let c = &instance.constraints()[ci];
                let t: Vec<u8> = c.scope.iter().map(|&u| a[u]).collect();
                instance.relation(c).rows().any(|row| row == t.as_slice())
            });
            if ok {
                go(instance, due, d, v + 1, a, out);
            }
        }
    }
    go(instance, &due, d, 0, &mut a, &mut out);
    out
}

pub fn is_constant(a: &[u8]) -> bool {
    a.windows(2).all(|w| w[0] == w[1])
}

/// No solution, or only constant ones.
pub fn only_trivial(solutions: &[Assignment]) -> bool {
    solutions.iter().all(|s| is_constant(s))
}

/// Every pair of distinct variables differs in some solution; vacuous below two variables.
pub fn brute_sep(n: usize, solutions: &[Assignment]) -> bool {
    (0..n).all(|u| (u + 1..n).all(|v| solutions.iter().any(|s| s[u] != s[v])))
}

/// Whether `alpha` on `subset` is locally compatible: every constraint has
/// a tuple agreeing with `alpha` wherever its scope meets the subset.
pub fn locally_compatible(instance: &Instance, subset: &[usize], alpha: &[u8]) -> bool {
    instance.constraints().iter().all(|c| {
        let touched: Vec<(usize, u8)> = c
            .scope
            .iter()
            .enumerate()
            .filter_map(|(j, v)| subset.iter().position(|s| s == v).map(|i| (j, alpha[i])))
            .collect();
        touched.is_empty() || instance.relation(c).rows().any(|row| touched.iter().all(|&(j, x)| row[j] == x))
    })
}

/// Robust satisfiability for local compatibility: every locally compatible
/// assignment on at most `k` variables (the empty one included) is the
/// restriction of a solution.
pub fn brute_local_robust(instance: &Instance, solutions: &[Assignment], k: usize) -> bool {
    if solutions.is_empty() {
        return false;
    }
    let n = instance.num_vars();
    let d = instance.domain_size();
    let mut subset = Vec::new();
    fn subsets(n: usize, k: usize, start: usize, subset: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if !subset.is_empty() && !f(subset) {
            return false;
        }
        if subset.len() == k {
            return true;
        }
        for v in start..n {
            subset.push(v);
            let ok = subsets(n, k, v + 1, subset, f);
            subset.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    subsets(n, k, 0, &mut subset, &mut |s| {
        let seen: BTreeSet<Vec<u8>> = solutions.iter().map(|sol| s.iter().map(|&v| sol[v]).collect()).collect();
        let total = (d as usize).pow(s.len() as u32);
        (0..total).all(|mut code| {
            let mut alpha = vec![0u8; s.len()];
            for slot in alpha.iter_mut().rev() {
                *slot = (code % d as usize) as u8;
                code /= d as usize;
            }
            !locally_compatible(instance, s, &alpha) || seen.contains(&alpha)
        })
    })
}

/// The instance classes named by the gap properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    /// No solution.
    NoCsp,
    /// No non-constant solution.
    NoNtriv,
    /// Separating, and 2-robust for local compatibility.
    YesSepRobust,
    /// 2-robust for local compatibility.
    YesRobust,
    /// Separating.
    YesSep,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::NoCsp => "N_CSP",
            Class::NoNtriv => "N_NTriv",
            Class::YesSepRobust => "Y_SEP∩(2,F)",
            Class::YesRobust => "Y_(2,F)",
            Class::YesSep => "Y_SEP",
        }
    }

    /// Membership decided by enumeration; `solutions` must be all solutions.
    pub fn contains(self, instance: &Instance, solutions: &[Assignment]) -> bool {
        let n = instance.num_vars();
        match self {
            Class::NoCsp => solutions.is_empty(),
            Class::NoNtriv => only_trivial(solutions),
            Class::YesSepRobust => brute_sep(n, solutions) && brute_local_robust(instance, solutions, 2),
            Class::YesRobust => brute_local_robust(instance, solutions, 2),
            Class::YesSep => brute_sep(n, solutions),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{named, Relation};
    use crate::template::Template;
    use std::sync::Arc;

    fn inst(rel: Relation, scopes: &[&[&str]], vars: &[&str]) -> Instance {
        let mut i = Instance::with_variables(Arc::new(Template::single("R", rel)), vars).unwrap();
        for s in scopes {
            i.add_constraint("R", s).unwrap();
        }
        i
    }

    #[test]
    fn enumeration_matches_definition() {
        let i = inst(named::one_in_three(), &[&["x", "y", "z"]], &["x", "y", "z", "w"]);
        let sols = brute_solutions(&i);
        assert_eq!(sols.len(), 6);
        assert_eq!(sols[0], vec![0, 0, 1, 0]);
        assert!(brute_sep(4, &sols));
    }

    #[test]
    fn local_robustness() {
        let one = inst(named::one_in_three(), &[&["x", "y", "z"]], &["x", "y", "z"]);
        assert!(brute_local_robust(&one, &brute_solutions(&one), 2));
        let eq = inst(Relation::from_rows(2, &["00", "11"]).unwrap(), &[&["x", "y"], &["y", "z"]], &["x", "y", "z"]);
        // x = 0, z = 1 is locally compatible but does not extend
        assert!(!brute_local_robust(&eq, &brute_solutions(&eq), 2));
        assert!(brute_local_robust(&eq, &brute_solutions(&eq), 1));
        let unsat = inst(named::one_in_three(), &[&["x", "x", "x"]], &["x"]);
        assert!(!brute_local_robust(&unsat, &[], 2));
    }

    #[test]
    fn classes() {
        let i = inst(Relation::from_rows(2, &["00", "11"]).unwrap(), &[&["x", "y"]], &["x", "y"]);
        let sols = brute_solutions(&i);
        assert!(Class::NoNtriv.contains(&i, &sols));
        assert!(!Class::NoCsp.contains(&i, &sols));
        assert!(!Class::YesSep.contains(&i, &sols));
    }
}
