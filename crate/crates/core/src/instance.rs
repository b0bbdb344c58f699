use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::template::{valid_name, Template};

/// A total assignment, indexed by variable position.
pub type Assignment = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub relation: String,
    pub scope: Vec<usize>,
}

/// Whether the designated bottom/top pair must appear in that order or may
/// also appear swapped in the final two coordinates of a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BotTopOrder {
    Fixed,
    Either,
}

/// Variables playing the role of the constants 0 and 1 in gadget instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BotTop {
    pub bot: usize,
    pub top: usize,
    pub order: BotTopOrder,
}

#[derive(Clone, Debug)]
pub struct Instance {
    template: Arc<Template>,
    variables: Vec<String>,
    index: HashMap<String, usize>,
    constraints: Vec<Constraint>,
    bot_top: Option<BotTop>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.template == other.template
            && self.variables == other.variables
            && self.constraints == other.constraints
            && self.bot_top == other.bot_top
    }
}

impl Instance {
    pub fn new(template: Arc<Template>) -> Self {
        Instance { template, variables: Vec::new(), index: HashMap::new(), constraints: Vec::new(), bot_top: None }
    }

    pub fn with_variables<S: AsRef<str>>(template: Arc<Template>, names: &[S]) -> Result<Self> {
        let mut inst = Self::new(template);
        for n in names {
            inst.add_variable(n.as_ref())?;
        }
        Ok(inst)
    }

    /// Instance with variables named `x0, x1, ...`.
    pub fn with_numbered_variables(template: Arc<Template>, n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        Self::with_variables(template, &names).expect("numbered names are distinct")
    }

    pub fn add_variable(&mut self, name: &str) -> Result<usize> {
        if !valid_name(name) {
            return Err(Error::InvalidInstance(format!("bad variable name `{name}`")));
        }
        if self.index.contains_key(name) {
            return Err(Error::InvalidInstance(format!("duplicate variable `{name}`")));
        }
        let i = self.variables.len();
        self.variables.push(name.to_string());
        self.index.insert(name.to_string(), i);
        Ok(i)
    }

    /// Adds a variable whose name is `base`, or `base` followed by primes if taken.
    pub fn add_fresh_variable(&mut self, base: &str) -> usize {
        let mut name = base.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        self.add_variable(&name).expect("fresh name is unused")
    }

    pub fn push(&mut self, relation: &str, scope: Vec<usize>) -> Result<()> {
        let rel = self.template.get(relation)?;
        if rel.arity() != scope.len() {
            return Err(Error::InvalidInstance(format!(
                "relation `{relation}` has arity {} but scope has length {}",
                rel.arity(),
                scope.len()
            )));
        }
        if let Some(&v) = scope.iter().find(|&&v| v >= self.variables.len()) {
            return Err(Error::InvalidInstance(format!("variable index {v} out of range")));
        }
        self.constraints.push(Constraint { relation: relation.to_string(), scope });
        Ok(())
    }

    pub fn add_constraint<S: AsRef<str>>(&mut self, relation: &str, scope: &[S]) -> Result<()> {
        let idx = scope
            .iter()
            .map(|n| {
                self.var(n.as_ref())
                    .ok_or_else(|| Error::InvalidInstance(format!("unknown variable `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.push(relation, idx)
    }

    pub fn set_bot_top(&mut self, bot_top: Option<BotTop>) {
        self.bot_top = bot_top;
    }

    pub fn bot_top(&self) -> Option<BotTop> {
        self.bot_top
    }

    pub fn template(&self) -> &Arc<Template> {
        &self.template
    }

    pub fn domain_size(&self) -> u8 {
        self.template.domain_size()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.variables[v]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn relation(&self, c: &Constraint) -> &Relation {
        self.template.get(&c.relation).expect("constraints reference template relations")
    }

    pub fn satisfies(&self, assignment: &[u8]) -> bool {
        let mut buf = Vec::new();
        self.constraints.iter().all(|c| {
            buf.clear();
            buf.extend(c.scope.iter().map(|&v| assignment[v]));
            self.relation(c).contains(&buf)
        })
    }

    /// Same variables and metadata, constraints sorted and deduplicated.
    pub fn canonical(&self) -> Instance {
        let mut out = self.clone();
        out.constraints.sort();
        out.constraints.dedup();
        out
    }

    /// Variables that occur in no constraint.
    pub fn isolated_variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_vars()];
        for c in &self.constraints {
            for &v in &c.scope {
                used[v] = true;
            }
        }
        (0..self.num_vars()).filter(|&v| !used[v]).collect()
    }

    /// Drops variables occurring in no constraint, keeping the order of the rest.
    /// A bottom/top annotation survives only if both of its variables do.
    pub fn without_isolated_variables(&self) -> Instance {
        let isolated = self.isolated_variables();
        let mut remap = vec![usize::MAX; self.num_vars()];
        let mut out = Instance::new(self.template.clone());
        for v in 0..self.num_vars() {
            if isolated.binary_search(&v).is_err() {
                remap[v] = out.add_variable(&self.variables[v]).expect("names stay distinct");
            }
        }
        for c in &self.constraints {
            out.constraints.push(Constraint {
                relation: c.relation.clone(),
                scope: c.scope.iter().map(|&v| remap[v]).collect(),
            });
        }
        out.bot_top = self.bot_top.and_then(|bt| {
            (remap[bt.bot] != usize::MAX && remap[bt.top] != usize::MAX).then_some(BotTop {
                bot: remap[bt.bot],
                top: remap[bt.top],
                order: bt.order,
            })
        });
        out
    }

    /// The same instance read over another template that interprets every
    /// used relation name with the same arity.
    pub fn retarget(&self, template: Arc<Template>) -> Result<Instance> {
        let mut out = Instance::with_variables(template, &self.variables)?;
        for c in &self.constraints {
            out.push(&c.relation, c.scope.clone())?;
        }
        out.bot_top = self.bot_top;
        Ok(out)
    }

    /// Renders an assignment as `x=0 y=1 ...`.
    pub fn format_assignment(&self, assignment: &[u8]) -> String {
        self.variables
            .iter()
            .zip(assignment)
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::named;

    fn tmpl() -> Arc<Template> {
        Arc::new(Template::single("R", named::one_in_three()))
    }

    #[test]
    fn validation() {
        let mut i = Instance::with_variables(tmpl(), &["x", "y", "z"]).unwrap();
        assert!(i.add_variable("x").is_err());
        assert!(i.add_constraint("R", &["x", "y"]).is_err());
        assert!(i.add_constraint("S", &["x", "y", "z"]).is_err());
        assert!(i.add_constraint("R", &["x", "y", "w"]).is_err());
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        assert!(i.satisfies(&[0, 0, 1]));
        assert!(!i.satisfies(&[1, 0, 1]));
    }

    #[test]
    fn canonical_is_idempotent() {
        let mut i = Instance::with_variables(tmpl(), &["x", "y", "z"]).unwrap();
        i.add_constraint("R", &["z", "y", "x"]).unwrap();
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        i.add_constraint("R", &["z", "y", "x"]).unwrap();
        let c = i.canonical();
        assert_eq!(c.constraints().len(), 2);
        assert_eq!(c.canonical(), c);
    }

    #[test]
    fn isolated_variables_are_dropped() {
        let mut i = Instance::with_variables(tmpl(), &["a", "x", "y", "z"]).unwrap();
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        assert_eq!(i.isolated_variables(), vec![0]);
        let j = i.without_isolated_variables();
        assert_eq!(j.variables(), &["x", "y", "z"]);
        assert_eq!(j.constraints()[0].scope, vec![0, 1, 2]);
    }
}
