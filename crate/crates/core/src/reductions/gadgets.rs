//! The gadget reductions from positive one-in-three satisfiability to the
//! closures of the columns relation, and the relation swaps between them.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::instance::{BotTop, BotTopOrder, Instance};
use crate::post::{weak_base, Coclone};
use crate::reductions::ReductionTrace;
use crate::relation::named;
use crate::template::Template;

/// Relation symbol used for the weak base of a hard co-clone.
pub fn weak_base_symbol(coclone: Coclone) -> Result<&'static str> {
    Ok(match coclone {
        Coclone::II2 => "cols3",
        Coclone::IN2 => "n2",
        Coclone::II0 => "i0",
        Coclone::II1 => "i1",
        Coclone::II => "i",
        Coclone::IN => "n",
        Coclone::Tractable(_) => return Err(Error::UnknownCoclone(coclone.to_string())),
    })
}

/// The single-relation language of a hard co-clone's weak base, built once.
pub fn base_template(coclone: Coclone) -> Result<Arc<Template>> {
    static CACHE: OnceLock<Vec<(Coclone, Arc<Template>)>> = OnceLock::new();
    weak_base_symbol(coclone)?;
    let cache = CACHE.get_or_init(|| {
        Coclone::HARD
            .iter()
            .map(|&c| {
                let rel = weak_base(c).expect("hard co-clones have generators");
                (c, Arc::new(Template::single(weak_base_symbol(c).expect("hard"), rel)))
            })
            .collect()
    });
    Ok(cache.iter().find(|(c, _)| *c == coclone).expect("cached").1.clone())
}

fn check_one_in_three(instance: &Instance) -> Result<()> {
    let plus = named::one_in_three();
    match instance.constraints().iter().find(|c| instance.relation(c) != &plus) {
        Some(c) => Err(Error::WrongSourceLanguage(format!("`{}` is not positive one-in-three", c.relation))),
        None => Ok(()),
    }
}

/// Source variables, then `not:v` for each, then `bot` and `top`.
fn doubled_variables(instance: &Instance, template: Arc<Template>) -> (Instance, Vec<usize>, usize, usize) {
    let mut out = Instance::with_variables(template, instance.variables()).expect("source names are valid");
    let negated = instance.variables().iter().map(|v| out.add_fresh_variable(&format!("not:{v}"))).collect();
    let bot = out.add_fresh_variable("bot");
    let top = out.add_fresh_variable("top");
    (out, negated, bot, top)
}

/// A source solution extended by its negation, then 0 for `bot` and 1 for `top`.
pub fn star_lift(solution: &[u8]) -> Vec<u8> {
    let mut out = solution.to_vec();
    out.extend(solution.iter().map(|&b| 1 - b));
    out.extend([0, 1]);
    out
}

/// Each clause `(x, y, z)` becomes `cols3(x, y, z, not:x, not:y, not:z, bot, top)`.
/// Solutions correspond one to one when no source variable is isolated.
pub fn star_reduction(instance: &Instance) -> Result<ReductionTrace> {
    check_one_in_three(instance)?;
    let template = base_template(Coclone::II2)?;
    let symbol = weak_base_symbol(Coclone::II2)?;
    let (mut out, neg, bot, top) = doubled_variables(instance, template);
    for c in instance.constraints() {
        let mut scope = c.scope.clone();
        scope.extend(c.scope.iter().map(|&v| neg[v]));
        scope.extend([bot, top]);
        out.push(symbol, scope)?;
    }
    out.set_bot_top(Some(BotTop { bot, top, order: BotTopOrder::Fixed }));
    let mut trace = ReductionTrace::new("star", instance, out).identity_map(instance.num_vars());
    trace.notes.push("lift: not:v = 1 - v, bot = 0, top = 1; restrict to the source variables".into());
    Ok(trace)
}

/// Each clause contributes `n2(x, y, z, not:x, not:y, not:z, bot, top)` and
/// `n2(not:x, not:y, not:z, x, y, z, top, bot)`. Solutions are closed under
/// negation and either a solution or its negation restricts to a source solution.
pub fn sharp_reduction(instance: &Instance) -> Result<ReductionTrace> {
    check_one_in_three(instance)?;
    let template = base_template(Coclone::IN2)?;
    let symbol = weak_base_symbol(Coclone::IN2)?;
    let (mut out, neg, bot, top) = doubled_variables(instance, template);
    for c in instance.constraints() {
        let negs: Vec<usize> = c.scope.iter().map(|&v| neg[v]).collect();
        let mut first = c.scope.clone();
        first.extend(&negs);
        first.extend([bot, top]);
        let mut second = negs;
        second.extend(&c.scope);
        second.extend([top, bot]);
        out.push(symbol, first)?;
        out.push(symbol, second)?;
    }
    out.set_bot_top(Some(BotTop { bot, top, order: BotTopOrder::Either }));
    let mut trace = ReductionTrace::new("sharp", instance, out).identity_map(instance.num_vars());
    trace.notes.push("lift: as star; the negated lift is also a solution".into());
    Ok(trace)
}

/// Checks the source language and that every scope ends with the declared
/// bottom and top variables, swapped only where the convention allows it.
fn check_convention(instance: &Instance, source: Coclone, allow_swap: bool) -> Result<BotTop> {
    let expected = base_template(source)?;
    let base = expected.relations().pop().expect("single relation");
    let bt = instance
        .bot_top()
        .ok_or_else(|| Error::MissingBotTopConvention("no bottom/top variables declared".into()))?;
    let swap_ok = allow_swap || bt.order == BotTopOrder::Either;
    for c in instance.constraints() {
        if instance.relation(c) != &base {
            return Err(Error::WrongSourceLanguage(format!("`{}` is not the {source} weak base", c.relation)));
        }
        let tail = &c.scope[c.scope.len() - 2..];
        let fits = tail == [bt.bot, bt.top] || (swap_ok && tail == [bt.top, bt.bot]);
        if !fits {
            return Err(Error::MissingBotTopConvention(format!(
                "a `{}` constraint does not end with the bottom/top variables",
                c.relation
            )));
        }
    }
    Ok(bt)
}

fn swap_relation(instance: &Instance, target: Coclone, reduction: &'static str) -> Result<ReductionTrace> {
    let symbol = weak_base_symbol(target)?;
    let mut out = Instance::with_variables(base_template(target)?, instance.variables())?;
    for c in instance.constraints() {
        out.push(symbol, c.scope.clone())?;
    }
    out.set_bot_top(instance.bot_top());
    let mut trace = ReductionTrace::new(reduction, instance, out).identity_map(instance.num_vars());
    trace.notes.push("solutions separating bot from top are exactly the source solutions".into());
    Ok(trace)
}

/// Swaps the columns relation for the weak base of `II1`, `II0` or `II`. The
/// target gains the constant solutions allowed by the new relation.
pub fn chi_reduction(instance: &Instance, target: Coclone) -> Result<ReductionTrace> {
    let name = match target {
        Coclone::II1 => "chi-ii1",
        Coclone::II0 => "chi-ii0",
        Coclone::II => "chi-ii",
        _ => return Err(Error::UnknownCoclone(format!("{target} is not a target of the columns swap"))),
    };
    check_convention(instance, Coclone::II2, false)?;
    swap_relation(instance, target, name)
}

/// Swaps the `IN2` weak base for the `IN` weak base.
pub fn chi2_reduction(instance: &Instance) -> Result<ReductionTrace> {
    check_convention(instance, Coclone::IN2, true)?;
    swap_relation(instance, Coclone::IN, "chi2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::deciders::{all_solutions, solve_csp};

    fn plus(clauses: &[[&str; 3]], vars: &[&str]) -> Instance {
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let mut i = Instance::with_variables(t, vars).unwrap();
        for c in clauses {
            i.add_constraint("R", c).unwrap();
        }
        i
    }

    #[test]
    fn star_one_clause() {
        let i = plus(&[["x", "y", "z"]], &["x", "y", "z"]);
        let trace = star_reduction(&i).unwrap();
        let t = &trace.target;
        assert_eq!(t.num_vars(), 8);
        assert_eq!(t.constraints().len(), 1);
        assert_eq!(t.variables()[3], "not:x");
        assert_eq!(trace.created, (3..8).collect::<Vec<_>>());
        let sols = all_solutions(t);
        let lifted: Vec<Vec<u8>> = all_solutions(&i).iter().map(|s| star_lift(s)).collect();
        let mut sorted = lifted.clone();
        sorted.sort();
        assert_eq!(sols, sorted);
    }

    #[test]
    fn star_empty_instance() {
        let i = plus(&[], &["x"]);
        let t = star_reduction(&i).unwrap().target;
        assert_eq!(t.variables(), &["x", "not:x", "bot", "top"]);
        assert!(t.constraints().is_empty());
    }

    #[test]
    fn star_rejects_other_languages() {
        let t = Arc::new(Template::single("R", named::nae3()));
        let mut i = Instance::with_variables(t, &["x", "y", "z"]).unwrap();
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        assert!(matches!(star_reduction(&i), Err(Error::WrongSourceLanguage(_))));
    }

    #[test]
    fn sharp_solutions_come_in_pairs() {
        let i = plus(&[["x", "y", "z"], ["x", "y", "w"]], &["x", "y", "z", "w"]);
        let trace = sharp_reduction(&i).unwrap();
        assert_eq!(trace.target.constraints().len(), 4);
        let sols = all_solutions(&trace.target);
        assert!(sols.len() >= 2);
        for s in &sols {
            let neg: Vec<u8> = s.iter().map(|b| 1 - b).collect();
            assert!(trace.target.satisfies(&neg));
        }
        let unsat = plus(&[["x", "x", "x"]], &["x"]);
        assert!(solve_csp(&sharp_reduction(&unsat).unwrap().target).is_none());
    }

    #[test]
    fn chi_adds_constant_solutions() {
        let i = plus(&[["x", "y", "z"]], &["x", "y", "z"]);
        let star = star_reduction(&i).unwrap().target;
        let ones = vec![1u8; 8];
        let zeros = vec![0u8; 8];
        let ii1 = chi_reduction(&star, Coclone::II1).unwrap().target;
        assert_eq!(all_solutions(&ii1).len(), 4);
        assert!(ii1.satisfies(&ones) && !ii1.satisfies(&zeros));
        let ii0 = chi_reduction(&star, Coclone::II0).unwrap().target;
        assert!(ii0.satisfies(&zeros) && !ii0.satisfies(&ones));
        let ii = chi_reduction(&star, Coclone::II).unwrap().target;
        assert_eq!(all_solutions(&ii).len(), 5);
    }

    #[test]
    fn chi_on_unsatisfiable_source_has_only_constants() {
        let i = plus(&[["x", "y", "z"], ["x", "y", "w"], ["x", "z", "w"], ["y", "z", "w"]], &["x", "y", "z", "w"]);
        let star = star_reduction(&i).unwrap().target;
        let ii1 = chi_reduction(&star, Coclone::II1).unwrap().target;
        assert_eq!(all_solutions(&ii1), vec![vec![1u8; ii1.num_vars()]]);
        let sharp = sharp_reduction(&i).unwrap().target;
        let n = chi2_reduction(&sharp).unwrap().target;
        assert_eq!(all_solutions(&n), vec![vec![0u8; n.num_vars()], vec![1u8; n.num_vars()]]);
    }

    #[test]
    fn chi_requires_the_convention() {
        let i = plus(&[["x", "y", "z"]], &["x", "y", "z"]);
        let mut star = star_reduction(&i).unwrap().target;
        star.set_bot_top(None);
        assert!(matches!(chi_reduction(&star, Coclone::II1), Err(Error::MissingBotTopConvention(_))));
        let sharp = sharp_reduction(&i).unwrap().target;
        assert!(matches!(chi_reduction(&sharp, Coclone::II1), Err(Error::WrongSourceLanguage(_))));
        assert!(matches!(chi_reduction(&star_reduction(&i).unwrap().target, Coclone::IN), Err(Error::UnknownCoclone(_))));
    }
}
