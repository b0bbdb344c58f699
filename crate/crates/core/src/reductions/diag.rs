//! From SEP with constants to SEP without them, for core languages, through
//! a family of instances glued to the positive atomic diagram of the template.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::post::is_core;
use crate::reductions::{fixed_no_instance, LeastUnion, ReductionTrace};
use crate::solvers::deciders::subsets_of_size;
use crate::template::Template;

/// Name of the diagram variable for domain element `a`.
pub fn diag_variable(a: u8) -> String {
    format!("diag:{a}")
}

/// `sum_i P(m, i) * C(u, i)`: the number of family members when `m`
/// variables and `u` domain elements are unpinned.
pub fn diag_family_size(m: usize, u: usize) -> u128 {
    let mut total = 0u128;
    for i in 0..=u.min(m) {
        let perms: u128 = (0..i).map(|j| (m - j) as u128).product();
        let choose: u128 = (0..i).map(|j| (u - j) as u128).product::<u128>() / (1..=i as u128).product::<u128>();
        total += perms * choose;
    }
    total
}

enum Role<'a> {
    Kept(&'a str),
    Pin(u8),
}

/// Injective maps from `0..k` into `pool`, as sequences, in lexicographic order.
fn injections(pool: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(pool: &[usize], k: usize, used: &mut Vec<bool>, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for (i, &v) in pool.iter().enumerate() {
            if !used[i] {
                used[i] = true;
                acc.push(v);
                go(pool, k, used, acc, f);
                acc.pop();
                used[i] = false;
            }
        }
    }
    go(pool, k, &mut vec![false; pool.len()], &mut Vec::new(), f);
}

/// Instances over the core language, one of which is a YES instance of SEP
/// exactly when `instance` (over the language with constants) is.
///
/// Constant constraints `v in {a}` become identifications of `v` with the
/// diagram variable of `a`. If two distinct variables are pinned to one
/// element, the family is the fixed NO instance (case 1). Otherwise each
/// member extends the pins by an injection from a set of unused elements into
/// the unpinned variables (case 2); sets and injections are enumerated in
/// lexicographic order, smaller sets first.
pub fn diag_family(instance: &Instance, core: &Arc<Template>) -> Result<Vec<ReductionTrace>> {
    if !is_core(core)? {
        return Err(Error::NotCore);
    }
    let d = core.domain_size();
    if instance.domain_size() != d {
        return Err(Error::DomainMismatch { left: instance.domain_size(), right: d });
    }
    let n = instance.num_vars();
    let mut roles = Vec::new();
    for c in instance.constraints() {
        let rel = instance.relation(c);
        roles.push(match core.find(rel) {
            Some(name) => Role::Kept(name),
            None if rel.arity() == 1 && rel.len() == 1 => Role::Pin(rel.row(0)[0]),
            None => return Err(Error::WrongSourceLanguage(format!("`{}` is neither a core relation nor a constant", c.relation))),
        });
    }
    let mut pinned_to: Vec<Vec<usize>> = vec![Vec::new(); d as usize];
    for (c, role) in instance.constraints().iter().zip(&roles) {
        if let Role::Pin(a) = role {
            let v = c.scope[0];
            if !pinned_to[*a as usize].contains(&v) {
                pinned_to[*a as usize].push(v);
            }
        }
    }
    if let Some(a) = pinned_to.iter().position(|vs| vs.len() > 1) {
        let mut trace = ReductionTrace::new("diag", instance, fixed_no_instance(core)?);
        trace.variable_map = vec![Vec::new(); n];
        trace.created = (0..trace.target.num_vars()).collect();
        trace.case_tag = Some(1);
        trace.notes.push(format!("two distinct variables are pinned to {a}"));
        return Ok(vec![trace]);
    }
    let unused: Vec<u8> = (0..d).filter(|&a| pinned_to[a as usize].is_empty()).collect();
    let mut is_pinned = vec![false; n];
    for vs in &pinned_to {
        for &v in vs {
            is_pinned[v] = true;
        }
    }
    let free: Vec<usize> = (0..n).filter(|&v| !is_pinned[v]).collect();
    let mut family = Vec::new();
    let mut failure = None;
    for size in 0..=unused.len().min(free.len()) {
        subsets_of_size(unused.len(), size, |chosen| {
            let s: Vec<u8> = chosen.iter().map(|&i| unused[i]).collect();
            injections(&free, size, &mut |iota| {
                if failure.is_some() {
                    return;
                }
                let links: Vec<(usize, u8)> = iota.iter().copied().zip(s.iter().copied()).collect();
                match member(instance, core, &roles, &links) {
                    Ok(t) => family.push(t),
                    Err(e) => failure = Some(e),
                }
            });
            failure.is_none()
        });
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(family),
    }
}

fn member(instance: &Instance, core: &Arc<Template>, roles: &[Role], links: &[(usize, u8)]) -> Result<ReductionTrace> {
    let n = instance.num_vars();
    let d = core.domain_size() as usize;
    let mut classes = LeastUnion::new(n + d);
    for (c, role) in instance.constraints().iter().zip(roles) {
        if let Role::Pin(a) = role {
            classes.union(c.scope[0], n + *a as usize);
        }
    }
    for &(v, a) in links {
        classes.union(v, n + a as usize);
    }
    let (reps, index) = classes.compact();
    let mut out = Instance::new(core.clone());
    for x in 0..n + d {
        if reps[x] == x {
            if x < n {
                out.add_variable(instance.name(x))?;
            } else {
                out.add_fresh_variable(&diag_variable((x - n) as u8));
            }
        }
    }
    for (c, role) in instance.constraints().iter().zip(roles) {
        if let Role::Kept(name) = role {
            out.push(name, c.scope.iter().map(|&v| index[v]).collect())?;
        }
    }
    for (name, rel) in core.iter() {
        for row in rel.rows() {
            out.push(name, row.iter().map(|&a| index[n + a as usize]).collect())?;
        }
    }
    let mut trace = ReductionTrace::new("diag", instance, out);
    trace.variable_map = (0..n).map(|v| vec![index[v]]).collect();
    trace.created = (0..d).filter(|&a| reps[n + a] == n + a).map(|a| index[n + a]).collect();
    trace.case_tag = Some(2);
    let shown: Vec<String> = links.iter().map(|&(v, a)| format!("{}->{a}", instance.name(v))).collect();
    trace.notes.push(format!("extension {{{}}}", shown.join(", ")));
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::named;
    use crate::solvers::constants::{constant_name, with_constants};
    use crate::solvers::deciders::decide_sep;

    fn nae_con() -> (Arc<Template>, Arc<Template>) {
        let core = Arc::new(Template::single("nae", named::nae3()));
        (core.clone(), Arc::new(with_constants(&core)))
    }

    #[test]
    fn family_size_formula() {
        assert_eq!(diag_family_size(3, 2), 1 + 3 * 2 + 6);
        let (core, con) = nae_con();
        let mut i = Instance::with_variables(con, &["x", "y", "z"]).unwrap();
        i.add_constraint("nae", &["x", "y", "z"]).unwrap();
        let fam = diag_family(&i, &core).unwrap();
        assert_eq!(fam.len() as u128, diag_family_size(3, 2));
        assert_eq!(fam[0].target.num_vars(), 5);
        assert_eq!(fam[0].target.constraints().len(), 1 + 6);
        assert_eq!(fam[1].notes[0], "extension {x->0}");
    }

    #[test]
    fn two_pins_to_one_value_give_the_no_instance() {
        let (core, con) = nae_con();
        let mut i = Instance::with_variables(con, &["x", "y"]).unwrap();
        i.add_constraint(&constant_name(0), &["x"]).unwrap();
        i.add_constraint(&constant_name(0), &["y"]).unwrap();
        let fam = diag_family(&i, &core).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].case_tag, Some(1));
        assert!(!decide_sep(&fam[0].target).answer);
    }

    #[test]
    fn pinned_variable_merges_with_its_element() {
        let (core, con) = nae_con();
        let mut i = Instance::with_variables(con, &["x", "y", "z"]).unwrap();
        i.add_constraint("nae", &["x", "y", "z"]).unwrap();
        i.add_constraint(&constant_name(1), &["x"]).unwrap();
        let fam = diag_family(&i, &core).unwrap();
        assert_eq!(fam.len() as u128, diag_family_size(2, 1));
        assert_eq!(fam[0].target.variables(), &["x", "y", "z", "diag:0"]);
        let any = fam.iter().any(|t| decide_sep(&t.target).answer);
        assert_eq!(any, decide_sep(&i).answer);
    }

    #[test]
    fn non_cores_are_rejected() {
        let core = Arc::new(Template::single("or", named::or2()));
        let i = Instance::with_variables(core.clone(), &["x"]).unwrap();
        assert!(matches!(diag_family(&i, &core), Err(Error::NotCore)));
    }
}
