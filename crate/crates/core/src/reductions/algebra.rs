//! Reductions along homomorphic images, subalgebras and direct powers.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::pp::{derive_f_constraints, Atom, PpFormula};
use crate::reductions::{LeastUnion, ReductionTrace};
use crate::relation::{space_size, Relation};
use crate::solvers::deciders::compatible_assignments;
use crate::template::Template;

/// `{ t in A^k : phi(t) in r }`, where `phi` maps `A = 0..phi.len()` onto the domain of `r`.
pub fn preimage(r: &Relation, phi: &[u8]) -> Result<Relation> {
    let a = u8::try_from(phi.len()).map_err(|_| Error::InvalidOperation("domain too large".into()))?;
    let fibres: Vec<Vec<u8>> = (0..r.domain_size()).map(|b| (0..a).filter(|&x| phi[x as usize] == b).collect()).collect();
    let mut tuples = Vec::new();
    for row in r.rows() {
        let mut partial: Vec<Vec<u8>> = vec![Vec::new()];
        for &b in row {
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    fibres[b as usize].iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        tuples.extend(partial);
    }
    Relation::new(a, r.arity(), tuples)
}

/// `{ (a, b) : phi(a) = phi(b) }`.
pub fn kernel(phi: &[u8]) -> Result<Relation> {
    let a = u8::try_from(phi.len()).map_err(|_| Error::InvalidOperation("domain too large".into()))?;
    let pairs = (0..a).flat_map(|x| (0..a).filter(move |&y| phi[x as usize] == phi[y as usize]).map(move |y| [x, y]));
    Relation::new(a, 2, pairs)
}

fn check_surjective(phi: &[u8], b: u8) -> Result<()> {
    if phi.iter().any(|&x| x >= b) {
        return Err(Error::InvalidOperation("map leaves the target domain".into()));
    }
    if (0..b).any(|y| !phi.contains(&y)) {
        return Err(Error::NotSurjective);
    }
    Ok(())
}

pub const KERNEL_SYMBOL: &str = "ker";

/// Name of the preimage of a source relation.
pub fn preimage_symbol(name: &str) -> String {
    format!("pre:{name}")
}

/// Pulls an instance over `B` back along a surjection `phi: A -> B`: each
/// relation `r` becomes `pre:r`, and the language also carries `ker`. The
/// family is translated by the same renaming, with equality read as `ker`.
pub fn hom_image_reduction(instance: &Instance, phi: &[u8], family: &[PpFormula]) -> Result<ReductionTrace> {
    check_surjective(phi, instance.domain_size())?;
    let mut relations = Vec::new();
    for (name, rel) in instance.template().iter() {
        relations.push((preimage_symbol(name), preimage(rel, phi)?));
    }
    relations.push((KERNEL_SYMBOL.to_string(), kernel(phi)?));
    let template = Arc::new(Template::new(phi.len() as u8, relations)?);
    let mut out = Instance::with_variables(template, instance.variables())?;
    for c in instance.constraints() {
        out.push(&preimage_symbol(&c.relation), c.scope.clone())?;
    }
    let translated = family
        .iter()
        .map(|rho| {
            let atoms = rho
                .atoms()
                .iter()
                .map(|a| match a {
                    Atom::Rel { symbol, args } => Atom::rel(&preimage_symbol(symbol), args),
                    Atom::Eq(x, y) => Atom::rel(KERNEL_SYMBOL, &[x, y]),
                })
                .collect();
            PpFormula::new(rho.name(), rho.free(), rho.bound(), atoms)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut trace = ReductionTrace::new("hom-image", instance, out).identity_map(instance.num_vars());
    trace.formula_map = Some(translated);
    trace.notes.push(format!("phi = {phi:?}; phi applied to a target solution solves the source"));
    Ok(trace)
}

pub const SUBSET_SYMBOL: &str = "sub";

/// Embeds an instance over `B` into `A = 0..a_size` by `i -> subset[i]` and
/// confines every variable to `B` with a unary `sub` constraint. The family
/// gains the formula `in_sub(x1) := sub(x1)`.
pub fn subalgebra_reduction(instance: &Instance, a_size: u8, subset: &[u8], family: &[PpFormula]) -> Result<ReductionTrace> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) || subset.iter().any(|&x| x >= a_size) {
        return Err(Error::InvalidOperation("subset must be strictly increasing inside the domain".into()));
    }
    if subset.len() != instance.domain_size() as usize {
        return Err(Error::DomainMismatch { left: subset.len() as u8, right: instance.domain_size() });
    }
    let mut relations = Vec::new();
    for (name, rel) in instance.template().iter() {
        relations.push((name.to_string(), rel.map_values(a_size, |v| subset[v as usize])?));
    }
    let mut template = Template::new(a_size, relations)?;
    let sub = Relation::new(a_size, 1, subset.iter().map(|&x| [x]))?;
    let sub_name = template.insert_or_reuse(SUBSET_SYMBOL, sub)?;
    let mut out = Instance::with_variables(Arc::new(template), instance.variables())?;
    for c in instance.constraints() {
        out.push(&c.relation, c.scope.clone())?;
    }
    for v in 0..instance.num_vars() {
        out.push(&sub_name, vec![v])?;
    }
    let mut g = family.to_vec();
    g.push(PpFormula::new("in_sub", &["x1"], &[], vec![Atom::rel(&sub_name, &["x1"])])?);
    let mut trace = ReductionTrace::new("subalgebra", instance, out).identity_map(instance.num_vars());
    trace.formula_map = Some(g);
    trace.notes.push(format!("embedding {subset:?}"));
    Ok(trace)
}

/// Coordinate `p` of the product element `e` of `A^power`, most significant first.
fn coordinate(e: u8, base: u8, power: usize, p: usize) -> u8 {
    let shift = (base as u32).pow((power - 1 - p) as u32);
    ((e as u32 / shift) % base as u32) as u8
}

/// A `k`-ary relation over `A^power`, read as a `power * k`-ary relation over `A`.
pub fn flatten_relation(r: &Relation, base: u8, power: usize) -> Result<Relation> {
    check_power(r.domain_size(), base, power)?;
    let tuples = r
        .rows()
        .map(|row| row.iter().flat_map(|&e| (0..power).map(move |p| coordinate(e, base, power, p))).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    Relation::new(base, r.arity() * power, tuples)
}

fn check_power(domain: u8, base: u8, power: usize) -> Result<()> {
    if power == 0 || base == 0 || space_size(base, power) != Some(domain as u64) {
        return Err(Error::BadProductArity { domain, base, power });
    }
    Ok(())
}

/// Reads an instance over `A^power` as one over `A`. Variable `v` becomes
/// `v#0 .. v#(power-1)`, each constraint one flattened constraint. Local
/// reflection then identifies `v#p` with `u#q` whenever every F-compatible
/// assignment on the pair agrees on those coordinates (for `u = v`, the pair
/// is `v` and the next variable cyclically). Identified variables are
/// replaced by the earliest member of their class.
pub fn flatten_power(instance: &Instance, base: u8, power: usize, family: &[PpFormula]) -> Result<ReductionTrace> {
    let d = instance.domain_size();
    check_power(d, base, power)?;
    let n = instance.num_vars();
    let derived = derive_f_constraints(instance, family)?;
    let slot = |v: usize, p: usize| v * power + p;
    let coord = |e: u8, p: usize| coordinate(e, base, power, p);
    let mut classes = LeastUnion::new(n * power);
    let mut merges = 0;
    for i in 0..n {
        let pair: Vec<usize> = if n >= 2 { vec![i, (i + 1) % n] } else { vec![i] };
        let compat = compatible_assignments(d, &pair, &derived);
        for p in 0..power {
            for q in p + 1..power {
                if compat.iter().all(|a| coord(a[0], p) == coord(a[0], q)) && classes.union(slot(i, p), slot(i, q)) {
                    merges += 1;
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let compat = compatible_assignments(d, &[i, j], &derived);
            for p in 0..power {
                for q in 0..power {
                    if compat.iter().all(|a| coord(a[0], p) == coord(a[1], q)) && classes.union(slot(i, p), slot(j, q)) {
                        merges += 1;
                    }
                }
            }
        }
    }
    let (reps, index) = classes.compact();
    let mut relations = Vec::new();
    for (name, rel) in instance.template().iter() {
        relations.push((name.to_string(), flatten_relation(rel, base, power)?));
    }
    let template = Arc::new(Template::new(base, relations)?);
    let mut out = Instance::new(template);
    for v in 0..n {
        for p in 0..power {
            if reps[slot(v, p)] == slot(v, p) {
                out.add_variable(&format!("{}#{p}", instance.name(v)))?;
            }
        }
    }
    for c in instance.constraints() {
        let scope = c.scope.iter().flat_map(|&v| (0..power).map(move |p| slot(v, p))).map(|s| index[s]).collect();
        out.push(&c.relation, scope)?;
    }
    let mut trace = ReductionTrace::new("flatten-power", instance, out);
    trace.variable_map = (0..n).map(|v| (0..power).map(|p| index[slot(v, p)]).collect()).collect();
    trace.notes.push(format!("local reflection merged {merges} coordinate pairs"));
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pp::projections_family;
    use crate::relation::named;
    use crate::solvers::deciders::{all_solutions, solve_csp};

    #[test]
    fn preimage_and_kernel_of_min() {
        let phi = [0, 1, 1];
        let pre = preimage(&named::or2(), &phi).unwrap();
        assert_eq!(pre.len(), 8);
        assert!(!pre.contains(&[0, 0]));
        let ker = kernel(&phi).unwrap();
        assert_eq!(ker, Relation::new(3, 2, [[0, 0], [1, 1], [1, 2], [2, 1], [2, 2]]).unwrap());
    }

    #[test]
    fn identity_image_is_a_renaming() {
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let mut i = Instance::with_variables(t, &["x", "y", "z"]).unwrap();
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        let trace = hom_image_reduction(&i, &[0, 1], &projections_family(i.template())).unwrap();
        assert_eq!(trace.target.template().get("pre:R").unwrap(), &named::one_in_three());
        assert_eq!(all_solutions(&trace.target), all_solutions(&i));
        let g = trace.formula_map.unwrap();
        assert_eq!(g[0].to_string(), "formula R@1 free x1 exists w2 w3 atoms pre:R(x1,w2,w3)");
        assert_eq!(hom_image_reduction(&i, &[0, 0], &[]).unwrap_err(), Error::NotSurjective);
    }

    #[test]
    fn kernel_replaces_equality_in_the_family() {
        let t = Arc::new(Template::single("R", named::or2()));
        let i = Instance::with_variables(t, &["x"]).unwrap();
        let rho = PpFormula::new("e", &["a", "b"], &[], vec![Atom::eq("a", "b")]).unwrap();
        let trace = hom_image_reduction(&i, &[0, 1, 1], &[rho]).unwrap();
        assert_eq!(trace.formula_map.unwrap()[0].atoms(), &[Atom::rel("ker", &["a", "b"])]);
    }

    #[test]
    fn subalgebra_confines_values() {
        let t = Arc::new(Template::single("or", named::or2()));
        let mut i = Instance::with_variables(t, &["x", "y"]).unwrap();
        i.add_constraint("or", &["x", "y"]).unwrap();
        let trace = subalgebra_reduction(&i, 3, &[0, 1], &[]).unwrap();
        let sols = all_solutions(&trace.target);
        assert_eq!(sols, all_solutions(&i));
        assert_eq!(trace.target.constraints().len(), 3);
        let full = subalgebra_reduction(&i, 2, &[0, 1], &[]).unwrap();
        assert_eq!(all_solutions(&full.target), all_solutions(&i));
        assert_eq!(full.formula_map.unwrap().last().unwrap().name(), "in_sub");
        assert_eq!(subalgebra_reduction(&i, 3, &[], &[]).unwrap_err(), Error::EmptySubset);
        // embedding {0,1} as {0,2}: the value 1 is excluded
        let shifted = subalgebra_reduction(&i, 3, &[0, 2], &[]).unwrap();
        assert!(all_solutions(&shifted.target).iter().all(|s| !s.contains(&1)));
    }

    #[test]
    fn flatten_identity_power() {
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let mut i = Instance::with_variables(t, &["x", "y", "z"]).unwrap();
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        let trace = flatten_power(&i, 2, 1, &[]).unwrap();
        assert_eq!(trace.target.variables(), &["x#0", "y#0", "z#0"]);
        assert_eq!(all_solutions(&trace.target), all_solutions(&i));
        assert!(matches!(flatten_power(&i, 2, 2, &[]), Err(Error::BadProductArity { .. })));
    }

    #[test]
    fn flatten_square() {
        // over {0,1}^2 coded 0..4: the pairs whose first element has equal coordinates
        let r = Relation::new(4, 2, [[0, 1], [0, 2], [3, 1], [3, 2]]).unwrap();
        let flat = flatten_relation(&r, 2, 2).unwrap();
        assert_eq!(flat, Relation::from_rows(2, &["0001", "0010", "1101", "1110"]).unwrap());
        let t = Arc::new(Template::single("r", r));
        let mut i = Instance::with_variables(t, &["u", "v"]).unwrap();
        i.add_constraint("r", &["u", "v"]).unwrap();
        let fam = projections_family(i.template());
        let trace = flatten_power(&i, 2, 2, &fam).unwrap();
        // u#0 = u#1 and v#0 != v#1 for every compatible pair: u#1 merges into u#0
        assert_eq!(trace.target.variables(), &["u#0", "v#0", "v#1"]);
        assert_eq!(trace.variable_map, vec![vec![0, 0], vec![1, 2]]);
        assert_eq!(trace.target.constraints()[0].scope, vec![0, 0, 1, 2]);
        assert!(solve_csp(&trace.target).is_some());
    }
}
