//! Polynomial-time solvers for Boolean languages with a tractability witness.
//!
//! * `∧`: least-fixpoint propagation from the all-zero assignment (Horn).
//! * `∨`: the dual, greatest fixpoint from the all-one assignment.
//! * `min` (`x⊕y⊕z`): relations are affine subspaces; Gaussian elimination.
//! * `maj`: relations are determined by their binary projections; 2-SAT.

use crate::error::{Error, Result};
use crate::galois::preserves;
use crate::instance::{Assignment, Instance};
use crate::post::{Classification, Witness};
use crate::relation::Relation;

pub fn solve_fast(instance: &Instance, classification: &Classification) -> Result<Option<Assignment>> {
    let witness = classification.witness().ok_or(Error::NotTractable)?;
    solve_with_witness(instance, witness)
}

pub fn solve_with_witness(instance: &Instance, witness: Witness) -> Result<Option<Assignment>> {
    if instance.domain_size() != 2 {
        return Err(Error::NonBooleanDomain);
    }
    let op = witness.operation();
    for c in instance.constraints() {
        if !preserves(&op, instance.relation(c))? {
            return Err(Error::NotTractable);
        }
    }
    Ok(match witness {
        Witness::And => monotone_fixpoint(instance, false),
        Witness::Or => monotone_fixpoint(instance, true),
        Witness::Minority => affine(instance),
        Witness::Majority => bijunctive(instance),
    })
}

/// Rows of the constraint's relation that agree on repeated scope variables.
fn consistent_rows<'a>(rel: &'a Relation, scope: &'a [usize]) -> impl Iterator<Item = &'a [u8]> + 'a {
    rel.rows().filter(move |row| {
        (0..scope.len()).all(|i| (i + 1..scope.len()).all(|j| scope[i] != scope[j] || row[i] == row[j]))
    })
}

/// Horn propagation when `downward` is false: keep every value at most the
/// least solution, raising a scope to the least row above it when violated.
/// With `downward` the roles of 0 and 1 swap.
fn monotone_fixpoint(instance: &Instance, downward: bool) -> Option<Assignment> {
    let start = u8::from(downward);
    let mut values = vec![start; instance.num_vars()];
    // order-adjusted comparison: "above" means further from the start value
    let above = |a: u8, b: u8| if downward { a <= b } else { a >= b };
    loop {
        let mut changed = false;
        for c in instance.constraints() {
            let rel = instance.relation(c);
            let current: Vec<u8> = c.scope.iter().map(|&v| values[v]).collect();
            if rel.contains(&current) {
                continue;
            }
            // the meet of all rows above `current`; closure makes it a row
            let mut meet: Option<Vec<u8>> = None;
            for row in consistent_rows(rel, &c.scope) {
                if row.iter().zip(&current).all(|(&r, &t)| above(r, t)) {
                    meet = Some(match meet {
                        None => row.to_vec(),
                        Some(m) => m.iter().zip(row).map(|(&a, &b)| if downward { a.max(b) } else { a.min(b) }).collect(),
                    });
                }
            }
            let target = meet?;
            for (&v, &t) in c.scope.iter().zip(&target) {
                if values[v] != t {
                    values[v] = t;
                    changed = true;
                }
            }
        }
        if !changed {
            return Some(values);
        }
    }
}

/// Dense GF(2) row: coefficient bits followed by the constant bit at index `n`.
#[derive(Clone)]
struct Equation {
    bits: Vec<u64>,
}

impl Equation {
    fn new(n: usize) -> Self {
        Equation { bits: vec![0; (n + 1).div_ceil(64)] }
    }
    fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }
    fn flip(&mut self, i: usize) {
        self.bits[i / 64] ^= 1 << (i % 64);
    }
    fn xor(&mut self, other: &Equation) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }
}

/// Linear equations (over coordinates `0..k`) cutting out the affine hull of
/// the rows: for a basis `a` of the orthogonal complement of the direction
/// space, `a · x = a · t0`.
fn affine_equations(rows: &[&[u8]], k: usize) -> Vec<(Vec<bool>, bool)> {
    let t0 = rows[0];
    // row-reduced basis of the direction space, as (pivot, vector)
    let mut basis: Vec<(usize, Vec<bool>)> = Vec::new();
    for row in &rows[1..] {
        let mut v: Vec<bool> = row.iter().zip(t0).map(|(a, b)| a != b).collect();
        for (p, b) in &basis {
            if v[*p] {
                v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
            }
        }
        if let Some(p) = v.iter().position(|&x| x) {
            for (_, b) in basis.iter_mut() {
                if b[p] {
                    b.iter_mut().zip(&v).for_each(|(x, y)| *x ^= y);
                }
            }
            basis.push((p, v));
        }
    }
    // complement: one equation per non-pivot coordinate
    let pivots: Vec<usize> = basis.iter().map(|(p, _)| *p).collect();
    let mut out = Vec::new();
    for free in (0..k).filter(|j| !pivots.contains(j)) {
        let mut a = vec![false; k];
        a[free] = true;
        for (p, b) in &basis {
            if b[free] {
                a[*p] = true;
            }
        }
        let rhs = a.iter().zip(t0).fold(false, |acc, (&ai, &t)| acc ^ (ai && t == 1));
        out.push((a, rhs));
    }
    out
}

fn affine(instance: &Instance) -> Option<Assignment> {
    let n = instance.num_vars();
    let mut system: Vec<Equation> = Vec::new();
    for c in instance.constraints() {
        let rel = instance.relation(c);
        let rows: Vec<&[u8]> = rel.rows().collect();
        for (coeffs, rhs) in affine_equations(&rows, rel.arity()) {
            let mut eq = Equation::new(n);
            for (i, &on) in coeffs.iter().enumerate() {
                if on {
                    eq.flip(c.scope[i]);
                }
            }
            if rhs {
                eq.flip(n);
            }
            system.push(eq);
        }
    }
    // forward elimination to reduced row echelon form
    let mut pivots: Vec<(usize, Equation)> = Vec::new();
    for mut eq in system {
        for (p, row) in &pivots {
            if eq.get(*p) {
                eq.xor(row);
            }
        }
        match (0..n).find(|&i| eq.get(i)) {
            Some(p) => {
                for (_, row) in pivots.iter_mut() {
                    if row.get(p) {
                        row.xor(&eq);
                    }
                }
                pivots.push((p, eq));
            }
            None if eq.get(n) => return None,
            None => {}
        }
    }
    // free variables are 0, so each pivot equals its constant
    let mut values = vec![0u8; n];
    for (p, row) in &pivots {
        values[*p] = u8::from(row.get(n));
    }
    Some(values)
}

/// 2-SAT over literals `2v` (v = 1) and `2v + 1` (v = 0).
fn bijunctive(instance: &Instance) -> Option<Assignment> {
    let n = instance.num_vars();
    let lit = |v: usize, value: u8| 2 * v + usize::from(value == 0);
    let mut graph = vec![Vec::new(); 2 * n];
    // clause "not (x = a and y = b)": x = a implies y != b and vice versa
    let mut forbid = |x: usize, a: u8, y: usize, b: u8| {
        graph[lit(x, a)].push(lit(y, 1 - b));
        graph[lit(y, b)].push(lit(x, 1 - a));
    };
    for c in instance.constraints() {
        let rel = instance.relation(c);
        let k = rel.arity();
        for i in 0..k {
            for j in i..k {
                let mut seen = [[false; 2]; 2];
                for row in rel.rows() {
                    seen[row[i] as usize][row[j] as usize] = true;
                }
                for a in 0..2u8 {
                    for b in 0..2u8 {
                        if i == j && a != b {
                            continue;
                        }
                        if !seen[a as usize][b as usize] {
                            forbid(c.scope[i], a, c.scope[j], b);
                        }
                    }
                }
            }
        }
    }
    let comp = scc(&graph);
    let mut values = vec![0u8; n];
    for v in 0..n {
        let (t, f) = (comp[lit(v, 1)], comp[lit(v, 0)]);
        if t == f {
            return None;
        }
        // components are numbered in reverse topological order
        values[v] = u8::from(t < f);
    }
    Some(values)
}

/// Tarjan's algorithm, iterative. Component ids come out in reverse
/// topological order of the condensation.
fn scc(graph: &[Vec<usize>]) -> Vec<usize> {
    let n = graph.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if let Some(&w) = graph[v].get(*edge) {
                *edge += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("component members are on the stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::post::classify;
    use crate::relation::named;
    use crate::solvers::deciders::solve_csp;
    use crate::template::Template;
    use std::sync::Arc;

    fn chain(rel: Relation, n: usize, scopes: &[(usize, usize)]) -> Instance {
        let t = Arc::new(Template::single("R", rel));
        let mut i = Instance::with_numbered_variables(t, n);
        for &(a, b) in scopes {
            i.push("R", vec![a, b]).unwrap();
        }
        i
    }

    #[test]
    fn horn_chain_agrees() {
        let scopes: Vec<(usize, usize)> = (0..9).map(|i| (i, i + 1)).collect();
        let i = chain(named::implication(), 10, &scopes);
        let cls = classify(i.template()).unwrap();
        let sol = solve_fast(&i, &cls).unwrap().unwrap();
        assert!(i.satisfies(&sol));
        assert!(solve_csp(&i).is_some());
    }

    #[test]
    fn xor_systems() {
        let i = chain(named::xor2(), 3, &[(0, 1), (1, 2)]);
        let sol = solve_with_witness(&i, Witness::Minority).unwrap().unwrap();
        assert!(i.satisfies(&sol));
        let t = Arc::new(Template::new(2, [("xor", named::xor2()), ("xnor", named::xnor2())]).unwrap());
        let mut bad = Instance::with_numbered_variables(t, 2);
        bad.push("xor", vec![0, 1]).unwrap();
        bad.push("xnor", vec![0, 1]).unwrap();
        assert_eq!(solve_with_witness(&bad, Witness::Minority).unwrap(), None);
    }

    #[test]
    fn two_sat_and_dual_horn() {
        let i = chain(named::or2(), 3, &[(0, 1), (1, 2), (0, 0)]);
        for w in [Witness::Or, Witness::Majority] {
            let sol = solve_with_witness(&i, w).unwrap().unwrap();
            assert!(i.satisfies(&sol), "{w:?}");
        }
        // x or x, and not-x forced by xor with itself is unsat
        let t = Arc::new(Template::new(2, [("one", Relation::from_rows(2, &["1"]).unwrap()), ("zero", Relation::from_rows(2, &["0"]).unwrap())]).unwrap());
        let mut bad = Instance::with_numbered_variables(t, 1);
        bad.push("one", vec![0]).unwrap();
        bad.push("zero", vec![0]).unwrap();
        for w in [Witness::And, Witness::Or, Witness::Majority, Witness::Minority] {
            assert_eq!(solve_with_witness(&bad, w).unwrap(), None, "{w:?}");
        }
    }

    #[test]
    fn rejects_non_tractable() {
        let i = chain(named::or2(), 2, &[(0, 1)]);
        assert_eq!(solve_with_witness(&i, Witness::And), Err(Error::NotTractable));
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let j = Instance::with_numbered_variables(t, 3);
        let cls = classify(j.template()).unwrap();
        assert_eq!(solve_fast(&j, &cls), Err(Error::NotTractable));
    }
}
