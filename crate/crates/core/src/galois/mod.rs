//! Polymorphisms, closures, and membership in co-clones and weak co-clones.

mod operation;

pub use operation::{boolean, preserves, preserves_all, preserves_partial, Operation, PartialOperation};

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::pp::{Atom, PpFormula};
use crate::relation::{encode, Relation};
use crate::solvers::engine::Search;
use crate::template::Template;

/// Largest arity whose `d^(d^n)` operation tables are enumerated exhaustively:
/// 4 for the Boolean domain, 2 for three elements.
pub fn exhaustive_arity_cap(domain_size: u8) -> usize {
    let mut n = 0;
    while (domain_size as f64).powf((domain_size as f64).powi(n as i32 + 1)) <= (1u64 << 20) as f64 {
        n += 1;
    }
    n
}

/// Search problem whose solutions are the `n`-ary polymorphisms: one variable
/// per argument tuple, one constraint per `n`-tuple of rows.
fn indicator<'a>(relations: &'a [Relation], domain_size: u8, n: usize) -> Result<Search<'a>> {
    let points = operation::table_len(n, domain_size)?;
    let mut search = Search::new(domain_size, points);
    let d = domain_size as usize;
    for r in relations {
        if r.domain_size() != domain_size {
            return Err(Error::DomainMismatch { left: domain_size, right: r.domain_size() });
        }
        let mut seen = HashSet::new();
        let mut idx = vec![0usize; n];
        'tuples: loop {
            let scope: Vec<usize> =
                (0..r.arity()).map(|j| idx.iter().fold(0usize, |acc, &i| acc * d + r.row(i)[j] as usize)).collect();
            if seen.insert(scope.clone()) {
                search.add(scope, r);
            }
            for pos in (0..n).rev() {
                idx[pos] += 1;
                if idx[pos] < r.len() {
                    continue 'tuples;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    Ok(search)
}

/// All `n`-ary polymorphisms of the relations, in lexicographic table order.
pub fn polymorphisms(relations: &[Relation], domain_size: u8, n: usize) -> Result<Vec<Operation>> {
    polymorphisms_with_cap(relations, domain_size, n, exhaustive_arity_cap(domain_size))
}

pub fn polymorphisms_with_cap(relations: &[Relation], domain_size: u8, n: usize, cap: usize) -> Result<Vec<Operation>> {
    if n == 0 || n > cap {
        return Err(Error::ArityTooLarge { arity: n, cap });
    }
    let search = indicator(relations, domain_size, n)?;
    let mut out = Vec::new();
    search.run(&mut |table| {
        out.push(Operation::new(n, domain_size, table.to_vec()).expect("engine yields valid tables"));
        true
    });
    Ok(out)
}

/// The operations of arity at most `arity_bound` in the clone generated by
/// `generators`, sorted by arity and then by table.
pub fn clone_closure(generators: &[Operation], domain_size: u8, arity_bound: usize) -> Result<Vec<Operation>> {
    if let Some(g) = generators.iter().find(|g| g.arity() > arity_bound || g.domain_size() != domain_size) {
        return Err(Error::InvalidOperation(format!(
            "generator of arity {} over domain {} does not fit bound {arity_bound} over domain {domain_size}",
            g.arity(),
            g.domain_size()
        )));
    }
    let mut out = Vec::new();
    for n in 1..=arity_bound {
        // the n-ary part of a clone is the closure of the n-ary projections
        // under applying the generators
        let mut list: Vec<Operation> = (0..n).map(|i| Operation::projection(n, domain_size, i)).collect();
        let mut seen: HashSet<Operation> = list.iter().cloned().collect();
        let mut frontier = 0;
        loop {
            let len = list.len();
            for g in generators {
                for_each_tuple_touching(g.arity(), len, frontier, |idx| {
                    let inner: Vec<&Operation> = idx.iter().map(|&i| &list[i]).collect();
                    let h = g.compose(&inner).expect("arities agree");
                    if seen.insert(h.clone()) {
                        list.push(h);
                    }
                });
            }
            if list.len() == len {
                break;
            }
            frontier = len;
        }
        list.sort();
        out.extend(list);
    }
    Ok(out)
}

/// Calls `f` on every `m`-tuple over `0..len` with some entry `>= frontier`.
/// Entries pushed by `f` during the walk are not visited.
fn for_each_tuple_touching(m: usize, len: usize, frontier: usize, mut f: impl FnMut(&[usize])) {
    if len == 0 || frontier >= len {
        return;
    }
    let mut idx = vec![0usize; m];
    loop {
        if idx.iter().any(|&i| i >= frontier) {
            f(&idx);
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < len {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Least superset of `r` closed under columnwise application of the generators.
pub fn c_closure(r: &Relation, generators: &[Operation]) -> Result<Relation> {
    let d = r.domain_size();
    if let Some(g) = generators.iter().find(|g| g.domain_size() != d) {
        return Err(Error::DomainMismatch { left: d, right: g.domain_size() });
    }
    let k = r.arity();
    let mut rows: Vec<Vec<u8>> = r.rows().map(<[u8]>::to_vec).collect();
    let mut seen: HashSet<Vec<u8>> = rows.iter().cloned().collect();
    let mut frontier = 0;
    loop {
        let len = rows.len();
        for g in generators {
            let mut fresh = Vec::new();
            for_each_tuple_touching(g.arity(), len, frontier, |idx| {
                let image: Vec<u8> =
                    (0..k).map(|j| g.apply(&idx.iter().map(|&i| rows[i][j]).collect::<Vec<_>>())).collect();
                if seen.insert(image.clone()) {
                    fresh.push(image);
                }
            });
            rows.extend(fresh);
        }
        if rows.len() == len {
            break;
        }
        frontier = len;
    }
    Relation::new(d, k, rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipMode {
    /// Every polymorphism of arity `|r|` was enumerated and checked.
    Exhaustive,
    /// A search for a polymorphism of arity `|r|` violating `r` came up empty
    /// (or found one).
    ViolatorSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub mode: MembershipMode,
}

/// Work allowed for the violator search: number of indicator constraints.
pub const COCLONE_SEARCH_BUDGET: u64 = 2_000_000;

/// Whether `r` is pp-definable from the relations, by checking that every
/// polymorphism of arity `|r|` preserves it.
///
/// Applying an `|r|`-ary polymorphism to the rows of `r` in order yields its
/// own column vector as the image, so `r` is the set of images of the columns
/// of `r` under all such polymorphisms; the test is therefore exact.
pub fn coclone_member(r: &Relation, relations: &[Relation]) -> Result<Membership> {
    let d = r.domain_size();
    let m = r.len();
    if m <= exhaustive_arity_cap(d) {
        let member = polymorphisms(relations, d, m)?.iter().all(|f| preserves(f, r).expect("same domain"));
        return Ok(Membership { member, mode: MembershipMode::Exhaustive });
    }
    let points = crate::relation::space_size(d, m).unwrap_or(u64::MAX);
    let work: u64 = relations.iter().map(|rho| (rho.len() as u64).saturating_pow(m as u32)).fold(points, u64::saturating_add);
    if work > COCLONE_SEARCH_BUDGET {
        return Err(Error::InfeasibleArity(format!(
            "polymorphisms of arity {m} over domain {d}: about {work} constraints"
        )));
    }
    let Some(outside) = r.complement()? else {
        return Ok(Membership { member: true, mode: MembershipMode::ViolatorSearch });
    };
    let mut search = indicator(relations, d, m)?;
    let columns: Vec<usize> = (0..r.arity()).map(|j| encode(d, &r.column(j)) as usize).collect();
    search.add(columns, &outside);
    Ok(Membership { member: !search.is_satisfiable(), mode: MembershipMode::ViolatorSearch })
}

/// Budget on scope candidates explored when collecting canonical atoms.
pub const ATOM_SEARCH_BUDGET: usize = 5_000_000;

/// Every atom over `x1..xk` satisfied by all rows of `r`: relation atoms over
/// the template (full relations skipped) and, optionally, equality atoms.
pub fn canonical_atoms(r: &Relation, template: &Template, with_equality: bool) -> Result<Vec<Atom>> {
    if r.domain_size() != template.domain_size() {
        return Err(Error::DomainMismatch { left: r.domain_size(), right: template.domain_size() });
    }
    let k = r.arity();
    let var = |i: usize| format!("x{}", i + 1);
    let columns: Vec<Vec<u8>> = (0..k).map(|j| r.column(j)).collect();
    let mut atoms = Vec::new();
    let mut budget = ATOM_SEARCH_BUDGET;
    for (symbol, rho) in template.iter() {
        if rho.is_full() {
            continue;
        }
        let a = rho.arity();
        // prefix projections of rho, for pruning
        let prefixes: Vec<HashSet<Vec<u8>>> =
            (1..=a).map(|len| rho.rows().map(|t| t[..len].to_vec()).collect()).collect();
        let mut scope = Vec::with_capacity(a);
        let mut found = Vec::new();
        scope_dfs(&columns, r.len(), &prefixes, &mut scope, &mut found, &mut budget)?;
        for s in found {
            atoms.push(Atom::rel(symbol, &s.iter().map(|&i| var(i)).collect::<Vec<_>>()));
        }
    }
    if with_equality {
        for i in 0..k {
            for j in i + 1..k {
                if columns[i] == columns[j] {
                    atoms.push(Atom::eq(&var(i), &var(j)));
                }
            }
        }
    }
    Ok(atoms)
}

fn scope_dfs(
    columns: &[Vec<u8>],
    rows: usize,
    prefixes: &[HashSet<Vec<u8>>],
    scope: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
    budget: &mut usize,
) -> Result<()> {
    if scope.len() == prefixes.len() {
        found.push(scope.clone());
        return Ok(());
    }
    let level = &prefixes[scope.len()];
    for j in 0..columns.len() {
        if *budget == 0 {
            return Err(Error::InfeasibleArity("too many candidate atoms in canonical formula".into()));
        }
        *budget -= 1;
        scope.push(j);
        let fits = (0..rows).all(|t| level.contains(&scope.iter().map(|&c| columns[c][t]).collect::<Vec<_>>()));
        if fits {
            scope_dfs(columns, rows, prefixes, scope, found, budget)?;
        }
        scope.pop();
    }
    Ok(())
}

fn defined_count(k: usize, atoms: &[Atom], template: &Template, limit: usize) -> Result<usize> {
    let eq = Relation::equality(template.domain_size());
    let mut search = Search::new(template.domain_size(), k);
    let index = |v: &str| v[1..].parse::<usize>().expect("canonical variable") - 1;
    for atom in atoms {
        match atom {
            Atom::Rel { symbol, args } => search.add(args.iter().map(|a| index(a)).collect(), template.get(symbol)?),
            Atom::Eq(a, b) => search.add(vec![index(a), index(b)], &eq),
        }
    }
    Ok(search.count(Some(limit)))
}

/// Whether `r` is definable by a quantifier-free conjunction of atoms over the
/// template, with equality atoms allowed iff `with_equality`.
///
/// The canonical conjunction of all atoms true on `r` defines the least such
/// relation containing `r`, so `r` is definable iff that conjunction has
/// exactly `|r|` solutions.
pub fn weak_coclone_member(r: &Relation, template: &Template, with_equality: bool) -> Result<bool> {
    let atoms = canonical_atoms(r, template, with_equality)?;
    Ok(defined_count(r.arity(), &atoms, template, r.len() + 1)? == r.len())
}

/// A conjunct-atomic definition of `r`, with atoms dropped greedily while the
/// defined relation stays `r`. `None` if `r` has no such definition.
pub fn conjunct_atomic_definition(
    r: &Relation,
    template: &Template,
    with_equality: bool,
    name: &str,
) -> Result<Option<PpFormula>> {
    let mut atoms = canonical_atoms(r, template, with_equality)?;
    let target = r.len();
    if defined_count(r.arity(), &atoms, template, target + 1)? != target {
        return Ok(None);
    }
    let mut i = 0;
    while i < atoms.len() {
        let removed = atoms.remove(i);
        if defined_count(r.arity(), &atoms, template, target + 1)? != target {
            atoms.insert(i, removed);
            i += 1;
        }
    }
    let free: Vec<String> = (1..=r.arity()).map(|i| format!("x{i}")).collect();
    PpFormula::new(name, &free, &[], atoms).map(Some)
}

/// Distinct values of `f` on its table, useful for reporting.
pub fn image(f: &Operation) -> BTreeSet<u8> {
    f.table().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::boolean::*;
    use super::*;
    use crate::relation::named;

    #[test]
    fn caps() {
        assert_eq!(exhaustive_arity_cap(2), 4);
        assert_eq!(exhaustive_arity_cap(3), 2);
        assert!(matches!(polymorphisms(&[], 2, 5), Err(Error::ArityTooLarge { arity: 5, cap: 4 })));
    }

    #[test]
    fn unary_polymorphisms() {
        assert_eq!(polymorphisms(&[Relation::equality(2)], 2, 1).unwrap().len(), 4);
        let id = polymorphisms(&[named::one_in_three()], 2, 1).unwrap();
        assert_eq!(id, vec![Operation::projection(1, 2, 0)]);
        assert_eq!(polymorphisms(&[], 2, 2).unwrap().len(), 16);
    }

    #[test]
    fn polymorphisms_match_brute_force() {
        let lang = [named::or2(), named::implication()];
        for n in 1..=3 {
            let fast = polymorphisms(&lang, 2, n).unwrap();
            let size = 1usize << n;
            let brute: Vec<Operation> = (0..1u64 << size)
                .map(|bits| Operation::new(n, 2, (0..size).map(|i| (bits >> (size - 1 - i) & 1) as u8).collect()).unwrap())
                .filter(|f| preserves_all(f, &lang).unwrap())
                .collect();
            let mut sorted = brute.clone();
            sorted.sort();
            assert_eq!(fast, sorted, "arity {n}");
        }
    }

    #[test]
    fn clone_closure_examples() {
        assert_eq!(clone_closure(&[], 2, 2).unwrap().len(), 3);
        let mut expected = vec![Operation::projection(1, 2, 0), not()];
        expected.sort();
        assert_eq!(clone_closure(&[not()], 2, 1).unwrap(), expected);
        assert_eq!(clone_closure(&[c0(), c1()], 2, 1).unwrap().len(), 3);
        // and + not generate every operation, constants included
        assert_eq!(clone_closure(&[and(), not()], 2, 2).unwrap().len(), 4 + 16);
    }

    #[test]
    fn c_closure_basics() {
        let r = named::one_in_three();
        assert_eq!(c_closure(&r, &[]).unwrap(), r);
        let n = c_closure(&r, &[not()]).unwrap();
        assert_eq!(n.len(), 6);
        assert!(preserves(&not(), &n).unwrap());
        assert_eq!(c_closure(&n, &[not()]).unwrap(), n);
    }

    #[test]
    fn coclone_membership() {
        let lang = [named::one_in_three()];
        let full = Relation::full(2, 1).unwrap();
        assert!(coclone_member(&full, &lang).unwrap().member);
        assert!(coclone_member(&Relation::from_rows(2, &["1"]).unwrap(), &lang).unwrap().member);
        assert!(coclone_member(&named::one_in_three(), &lang).unwrap().member);
        // OR2 is not pp-definable from implication (both are Horn, but OR2 is not preserved by and)
        let horn = [named::implication()];
        let m = coclone_member(&named::or2(), &horn).unwrap();
        assert!(!m.member);
        assert_eq!(m.mode, MembershipMode::Exhaustive);
        // five rows: violator search mode
        let five = Relation::from_rows(2, &["000", "001", "011", "101", "111"]).unwrap();
        // (a <= c) and (b <= c)
        let via_search = coclone_member(&five, &horn).unwrap();
        assert_eq!(via_search, Membership { member: true, mode: MembershipMode::ViolatorSearch });
        let not_monotone = Relation::from_rows(2, &["001", "010", "100", "111", "000"]).unwrap();
        assert!(!coclone_member(&not_monotone, &horn).unwrap().member);
    }

    #[test]
    fn weak_membership() {
        let t = Template::single("R", named::one_in_three());
        assert!(weak_coclone_member(&named::one_in_three(), &t, false).unwrap());
        assert!(weak_coclone_member(&Relation::from_rows(2, &["00", "11"]).unwrap(), &t, true).unwrap());
        assert!(!weak_coclone_member(&Relation::from_rows(2, &["00", "11"]).unwrap(), &t, false).unwrap());
        let def = conjunct_atomic_definition(&Relation::from_rows(2, &["00", "11"]).unwrap(), &t, true, "eq").unwrap().unwrap();
        assert_eq!(def.atoms(), &[Atom::eq("x1", "x2")]);
    }
}
