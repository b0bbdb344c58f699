//! Backtracking search with generalized arc consistency.
//!
//! Domains are bitmasks, so domains of up to 32 values are supported. Variables
//! are branched on in index order and values in ascending order, which makes
//! the first solution found the lexicographically least one.

use crate::instance::Instance;
use crate::relation::Relation;

pub const MAX_DOMAIN: u8 = 32;

struct Con<'a> {
    scope: Vec<usize>,
    rel: &'a Relation,
    // pairs of scope positions holding the same variable
    repeats: Vec<(usize, usize)>,
}

pub struct Search<'a> {
    domain_size: u8,
    initial: Vec<u32>,
    cons: Vec<Con<'a>>,
    watches: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    pub fn new(domain_size: u8, num_vars: usize) -> Self {
        assert!((1..=MAX_DOMAIN).contains(&domain_size), "domain size {domain_size} unsupported");
        let full = if domain_size == 32 { u32::MAX } else { (1u32 << domain_size) - 1 };
        Search { domain_size, initial: vec![full; num_vars], cons: Vec::new(), watches: vec![Vec::new(); num_vars] }
    }

    /// Search over the constraints of an instance.
    pub fn for_instance(instance: &'a Instance) -> Self {
        let mut s = Search::new(instance.domain_size(), instance.num_vars());
        for c in instance.constraints() {
            s.add(c.scope.clone(), instance.relation(c));
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.initial.len()
    }

    pub fn domain_size(&self) -> u8 {
        self.domain_size
    }

    pub fn add_variable(&mut self) -> usize {
        self.initial.push(if self.domain_size == 32 { u32::MAX } else { (1u32 << self.domain_size) - 1 });
        self.watches.push(Vec::new());
        self.initial.len() - 1
    }

    pub fn add(&mut self, scope: Vec<usize>, rel: &'a Relation) {
        assert_eq!(scope.len(), rel.arity(), "scope length must match arity");
        assert_eq!(rel.domain_size(), self.domain_size, "relation over a different domain");
        let mut repeats = Vec::new();
        for i in 0..scope.len() {
            for j in i + 1..scope.len() {
                if scope[i] == scope[j] {
                    repeats.push((i, j));
                }
            }
        }
        let id = self.cons.len();
        let mut seen = scope.clone();
        seen.sort_unstable();
        seen.dedup();
        for v in seen {
            self.watches[v].push(id);
        }
        self.cons.push(Con { scope, rel, repeats });
    }

    /// Intersects the domain of `var` with `mask`.
    pub fn restrict(&mut self, var: usize, mask: u32) {
        self.initial[var] &= mask;
    }

    pub fn pin(&mut self, var: usize, value: u8) {
        self.restrict(var, 1 << value);
    }

    /// Lexicographically least solution.
    pub fn first(&self) -> Option<Vec<u8>> {
        let mut found = None;
        self.run(&mut |sol| {
            found = Some(sol.to_vec());
            false
        });
        found
    }

    pub fn is_satisfiable(&self) -> bool {
        self.first().is_some()
    }

    /// All solutions in lexicographic order, stopping after `limit` if given.
    pub fn solutions(&self, limit: Option<usize>) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.run(&mut |sol| {
            out.push(sol.to_vec());
            limit.is_none_or(|l| out.len() < l)
        });
        out
    }

    pub fn count(&self, limit: Option<usize>) -> usize {
        let mut n = 0;
        self.run(&mut |_| {
            n += 1;
            limit.is_none_or(|l| n < l)
        });
        n
    }

    /// Calls `visit` on each solution in lexicographic order until it returns false.
    pub fn run(&self, visit: &mut dyn FnMut(&[u8]) -> bool) {
        self.run_projected(self.num_vars(), visit);
    }

    /// Distinct restrictions of solutions to the first `prefix` variables, in
    /// lexicographic order. Each prefix is reported once, after one completion
    /// of the remaining variables has been found.
    pub fn projected(&self, prefix: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        self.run_projected(prefix, &mut |p| {
            out.push(p.to_vec());
            true
        });
        out
    }

    pub fn run_projected(&self, prefix: usize, visit: &mut dyn FnMut(&[u8]) -> bool) {
        assert!(prefix <= self.num_vars());
        let mut doms = self.initial.clone();
        if doms.contains(&0) {
            return;
        }
        let all: Vec<usize> = (0..self.cons.len()).collect();
        if !self.propagate(&mut doms, &all) {
            return;
        }
        let mut buf = vec![0u8; doms.len()];
        self.dfs(doms, 0, prefix, &mut buf, visit);
    }

    // returns false when the visitor asked to stop
    fn dfs(
        &self,
        doms: Vec<u32>,
        start: usize,
        prefix: usize,
        buf: &mut [u8],
        visit: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        let branch = (start..doms.len()).find(|&v| doms[v].count_ones() > 1);
        if branch.is_none_or(|v| v >= prefix) {
            if let Some(v) = branch {
                // prefix fixed: only the existence of a completion matters
                let mut found = false;
                let full = buf.len();
                self.dfs(doms, v, full, buf, &mut |_| {
                    found = true;
                    false
                });
                return !found || visit(&buf[..prefix]);
            }
            for (slot, &d) in buf.iter_mut().zip(&doms) {
                *slot = d.trailing_zeros() as u8;
            }
            return visit(&buf[..prefix]);
        }
        let var = branch.expect("checked above");
        let mut rest = doms[var];
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= !bit;
            let mut next = doms.clone();
            next[var] = bit;
            if self.propagate(&mut next, &self.watches[var]) && !self.dfs(next, var + 1, prefix, buf, visit) {
                return false;
            }
        }
        true
    }

    fn propagate(&self, doms: &mut [u32], seeds: &[usize]) -> bool {
        let mut queued = vec![false; self.cons.len()];
        let mut queue: Vec<usize> = Vec::with_capacity(seeds.len());
        for &c in seeds {
            if !queued[c] {
                queued[c] = true;
                queue.push(c);
            }
        }
        let mut support = Vec::new();
        while let Some(c) = queue.pop() {
            queued[c] = false;
            let con = &self.cons[c];
            let k = con.scope.len();
            support.clear();
            support.resize(k, 0u32);
            'rows: for row in con.rel.rows() {
                for i in 0..k {
                    if doms[con.scope[i]] >> row[i] & 1 == 0 {
                        continue 'rows;
                    }
                }
                for &(i, j) in &con.repeats {
                    if row[i] != row[j] {
                        continue 'rows;
                    }
                }
                for i in 0..k {
                    support[i] |= 1 << row[i];
                }
            }
            for i in 0..k {
                let v = con.scope[i];
                let narrowed = doms[v] & support[i];
                if narrowed == 0 {
                    return false;
                }
                if narrowed != doms[v] {
                    doms[v] = narrowed;
                    for &d in &self.watches[v] {
                        if d != c && !queued[d] {
                            queued[d] = true;
                            queue.push(d);
                        }
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::named;

    #[test]
    fn lex_first_and_enumeration() {
        let r = named::one_in_three();
        let mut s = Search::new(2, 3);
        s.add(vec![0, 1, 2], &r);
        assert_eq!(s.first(), Some(vec![0, 0, 1]));
        assert_eq!(s.solutions(None), vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(s.count(Some(2)), 2);
    }

    #[test]
    fn repeated_variables_in_scope() {
        let r = named::one_in_three();
        let mut s = Search::new(2, 2);
        // R(x, x, y): only x=0, y=1
        s.add(vec![0, 0, 1], &r);
        assert_eq!(s.solutions(None), vec![vec![0, 1]]);
        let mut t = Search::new(2, 1);
        t.add(vec![0, 0, 0], &r);
        assert!(!t.is_satisfiable());
    }

    #[test]
    fn unconstrained_and_empty() {
        let s = Search::new(3, 2);
        assert_eq!(s.count(None), 9);
        let e = Search::new(2, 0);
        assert_eq!(e.solutions(None), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn projection_reports_each_prefix_once() {
        let r = named::or2();
        let mut s = Search::new(2, 3);
        s.add(vec![0, 2], &r);
        s.add(vec![1, 2], &r);
        // z = 1 always works, so every (x, y) has a witness
        assert_eq!(s.projected(2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(s.count(None), 5);
    }

    #[test]
    fn pins() {
        let r = named::or2();
        let mut s = Search::new(2, 2);
        s.add(vec![0, 1], &r);
        s.pin(1, 0);
        assert_eq!(s.solutions(None), vec![vec![1, 0]]);
    }
}
