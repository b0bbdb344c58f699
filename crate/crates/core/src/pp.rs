//! Primitive-positive formulas: an existential block over a conjunction of
//! relation atoms and equalities.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::relation::Relation;
use crate::solvers::engine::Search;
use crate::template::{valid_name, Template};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Rel { symbol: String, args: Vec<String> },
    Eq(String, String),
}

impl Atom {
    pub fn rel<S: AsRef<str>>(symbol: &str, args: &[S]) -> Atom {
        Atom::Rel { symbol: symbol.to_string(), args: args.iter().map(|a| a.as_ref().to_string()).collect() }
    }

    pub fn eq(a: &str, b: &str) -> Atom {
        Atom::Eq(a.to_string(), b.to_string())
    }

    pub fn vars(&self) -> Vec<&str> {
        match self {
            Atom::Rel { args, .. } => args.iter().map(String::as_str).collect(),
            Atom::Eq(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel { symbol, args } => write!(f, "{symbol}({})", args.join(",")),
            Atom::Eq(a, b) => write!(f, "{a}={b}"),
        }
    }
}

/// `(exists bound) AND atoms`, defining a relation over `free` in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PpFormula {
    name: String,
    free: Vec<String>,
    bound: Vec<String>,
    atoms: Vec<Atom>,
}

impl PpFormula {
    pub fn new<S: AsRef<str>>(name: &str, free: &[S], bound: &[S], atoms: Vec<Atom>) -> Result<Self> {
        let free: Vec<String> = free.iter().map(|s| s.as_ref().to_string()).collect();
        let bound: Vec<String> = bound.iter().map(|s| s.as_ref().to_string()).collect();
        if !valid_name(name) {
            return Err(Error::InvalidFormula(format!("bad formula name `{name}`")));
        }
        if free.is_empty() {
            return Err(Error::InvalidFormula(format!("`{name}` has no free variables")));
        }
        let mut seen = BTreeSet::new();
        for v in free.iter().chain(&bound) {
            if !valid_name(v) {
                return Err(Error::InvalidFormula(format!("bad variable name `{v}`")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidFormula(format!("variable `{v}` declared twice in `{name}`")));
            }
        }
        for atom in &atoms {
            if let Atom::Rel { symbol, .. } = atom {
                if !valid_name(symbol) {
                    return Err(Error::InvalidFormula(format!("bad relation symbol `{symbol}`")));
                }
            }
            if let Some(v) = atom.vars().into_iter().find(|v| !seen.contains(v)) {
                return Err(Error::InvalidFormula(format!("undeclared variable `{v}` in `{name}`")));
            }
        }
        Ok(PpFormula { name: name.to_string(), free, bound, atoms })
    }

    /// `symbol(x1, .., xk)` with no quantifiers.
    pub fn identity(symbol: &str, arity: usize) -> Self {
        let free: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
        let atoms = vec![Atom::rel(symbol, &free)];
        Self::new(symbol, &free, &[], atoms).expect("identity formula is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn free(&self) -> &[String] {
        &self.free
    }

    pub fn bound(&self) -> &[String] {
        &self.bound
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn arity(&self) -> usize {
        self.free.len()
    }

    pub fn is_conjunct_atomic(&self) -> bool {
        self.bound.is_empty()
    }

    pub fn is_equality_free(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, Atom::Rel { .. }))
    }

    pub fn symbols(&self) -> BTreeSet<&str> {
        self.atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Rel { symbol, .. } => Some(symbol.as_str()),
                Atom::Eq(..) => None,
            })
            .collect()
    }

    /// Position of each variable: free ones first, then bound ones.
    fn positions(&self) -> HashMap<&str, usize> {
        self.free.iter().chain(&self.bound).enumerate().map(|(i, v)| (v.as_str(), i)).collect()
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "formula {} free {}", self.name, self.free.join(" "))?;
        if !self.bound.is_empty() {
            write!(f, " exists {}", self.bound.join(" "))?;
        }
        write!(f, " atoms")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " &")?;
            }
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// The relation defined by `formula` in `template`.
pub fn relation_of_pp(formula: &PpFormula, template: &Template) -> Result<Relation> {
    let pos = formula.positions();
    let eq = Relation::equality(template.domain_size());
    let mut search = Search::new(template.domain_size(), pos.len());
    for atom in &formula.atoms {
        match atom {
            Atom::Rel { symbol, args } => {
                let rel = template.get(symbol)?;
                if rel.arity() != args.len() {
                    return Err(Error::InvalidFormula(format!(
                        "`{symbol}` has arity {} but is applied to {} arguments",
                        rel.arity(),
                        args.len()
                    )));
                }
                search.add(args.iter().map(|a| pos[a.as_str()]).collect(), rel);
            }
            Atom::Eq(a, b) => search.add(vec![pos[a.as_str()], pos[b.as_str()]], &eq),
        }
    }
    let rows = search.projected(formula.arity());
    if rows.is_empty() {
        return Err(Error::EmptyDefinedRelation(formula.name.clone()));
    }
    Relation::new(template.domain_size(), formula.arity(), rows)
}

/// A constraint derived from an instance by a formula of a compatibility family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FConstraint {
    pub scope: Vec<usize>,
    pub relation: Relation,
    /// Index of the formula in the family.
    pub formula: usize,
}

/// All constraints the family derives from the instance.
///
/// A formula derives a constraint on `(v1, .., vk)` when its bound variables
/// can be mapped to instance variables so that every relation atom becomes a
/// constraint already present in the instance and every equality atom relates a
/// variable to itself. Matching is purely syntactic.
pub fn derive_f_constraints(instance: &Instance, family: &[PpFormula]) -> Result<Vec<FConstraint>> {
    let mut by_symbol: HashMap<&str, Vec<&[usize]>> = HashMap::new();
    for c in instance.constraints() {
        by_symbol.entry(&c.relation).or_default().push(&c.scope);
    }
    let mut out = Vec::new();
    for (fi, formula) in family.iter().enumerate() {
        let scopes = matching_scopes(formula, &by_symbol, instance.num_vars());
        if scopes.is_empty() {
            continue;
        }
        let relation = relation_of_pp(formula, instance.template())?;
        out.extend(scopes.into_iter().map(|scope| FConstraint { scope, relation: relation.clone(), formula: fi }));
    }
    Ok(out)
}

fn matching_scopes(formula: &PpFormula, by_symbol: &HashMap<&str, Vec<&[usize]>>, num_vars: usize) -> BTreeSet<Vec<usize>> {
    let pos = formula.positions();
    let n = pos.len();
    // equality atoms force identical instance variables: merge them up front
    let mut class: Vec<usize> = (0..n).collect();
    fn find(class: &mut [usize], mut x: usize) -> usize {
        while class[x] != x {
            class[x] = class[class[x]];
            x = class[x];
        }
        x
    }
    for atom in &formula.atoms {
        if let Atom::Eq(a, b) = atom {
            let (ra, rb) = (find(&mut class, pos[a.as_str()]), find(&mut class, pos[b.as_str()]));
            class[ra.max(rb)] = ra.min(rb);
        }
    }
    let reps: Vec<usize> = (0..n).map(|x| find(&mut class, x)).collect();
    let mut patterns: Vec<(&str, Vec<usize>)> = Vec::new();
    for atom in &formula.atoms {
        if let Atom::Rel { symbol, args } = atom {
            patterns.push((symbol, args.iter().map(|a| reps[pos[a.as_str()]]).collect()));
        }
    }
    let mut binding: Vec<Option<usize>> = vec![None; n];
    let mut out = BTreeSet::new();
    match_atoms(&patterns, 0, by_symbol, &mut binding, &mut |binding| {
        emit_scopes(&reps[..formula.arity()], binding, num_vars, &mut out)
    });
    out
}

fn match_atoms(
    patterns: &[(&str, Vec<usize>)],
    i: usize,
    by_symbol: &HashMap<&str, Vec<&[usize]>>,
    binding: &mut Vec<Option<usize>>,
    emit: &mut dyn FnMut(&[Option<usize>]),
) {
    let Some((symbol, args)) = patterns.get(i) else {
        emit(binding);
        return;
    };
    let Some(candidates) = by_symbol.get(symbol) else { return };
    for scope in candidates {
        if scope.len() != args.len() {
            continue;
        }
        let mut newly = Vec::new();
        let mut ok = true;
        for (&cls, &v) in args.iter().zip(scope.iter()) {
            match binding[cls] {
                Some(b) if b != v => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    binding[cls] = Some(v);
                    newly.push(cls);
                }
            }
        }
        if ok {
            match_atoms(patterns, i + 1, by_symbol, binding, emit);
        }
        for cls in newly {
            binding[cls] = None;
        }
    }
}

// Free variables left unbound by the relation atoms range over all variables.
fn emit_scopes(free_reps: &[usize], binding: &[Option<usize>], num_vars: usize, out: &mut BTreeSet<Vec<usize>>) {
    let mut open: Vec<usize> = free_reps.iter().copied().filter(|&r| binding[r].is_none()).collect();
    open.sort_unstable();
    open.dedup();
    if !open.is_empty() && num_vars == 0 {
        return;
    }
    let mut choice = vec![0usize; open.len()];
    loop {
        let scope = free_reps
            .iter()
            .map(|r| binding[*r].unwrap_or_else(|| choice[open.binary_search(r).expect("open class")]))
            .collect();
        out.insert(scope);
        let mut i = 0;
        loop {
            if i == choice.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < num_vars {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// For every relation and every non-empty set of coordinates, the formula
/// projecting the relation onto those coordinates. Subsets are listed in
/// increasing bitmask order.
pub fn projections_family(template: &Template) -> Vec<PpFormula> {
    let mut out = Vec::new();
    for (symbol, rel) in template.iter() {
        let k = rel.arity();
        assert!(k < 64, "arity too large for coordinate subsets");
        for mask in 1u64..(1u64 << k) {
            let mut free = Vec::new();
            let mut bound = Vec::new();
            let mut args = Vec::new();
            let mut kept = Vec::new();
            for i in 0..k {
                if mask >> i & 1 == 1 {
                    free.push(format!("x{}", i + 1));
                    args.push(format!("x{}", i + 1));
                    kept.push((i + 1).to_string());
                } else {
                    bound.push(format!("w{}", i + 1));
                    args.push(format!("w{}", i + 1));
                }
            }
            let name = format!("{symbol}@{}", kept.join("-"));
            out.push(PpFormula::new(&name, &free, &bound, vec![Atom::rel(symbol, &args)]).expect("projection formula"));
        }
    }
    out
}
