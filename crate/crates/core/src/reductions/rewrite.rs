//! Replacing each constraint by the conjuncts of a quantifier-free definition.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::pp::{relation_of_pp, Atom, PpFormula};
use crate::reductions::{check_no_instance, fixed_no_instance, ReductionTrace};
use crate::template::Template;

/// Definitions indexed by the source symbol they define (the formula name).
fn index_definitions<'a>(
    source: &Template,
    target: &Template,
    defs: &'a [PpFormula],
    allow_equality: bool,
) -> Result<HashMap<&'a str, &'a PpFormula>> {
    if source.domain_size() != target.domain_size() {
        return Err(Error::DomainMismatch { left: source.domain_size(), right: target.domain_size() });
    }
    let mut out = HashMap::new();
    for def in defs {
        if !def.is_conjunct_atomic() {
            return Err(Error::NotQuantifierFree(def.name().to_string()));
        }
        if !allow_equality && !def.is_equality_free() {
            return Err(Error::NotEqualityFree(def.name().to_string()));
        }
        let defined = source.get(def.name())?;
        if defined.arity() != def.arity() {
            return Err(Error::InvalidFormula(format!(
                "`{}` has {} free variables but the relation has arity {}",
                def.name(),
                def.arity(),
                defined.arity()
            )));
        }
        for atom in def.atoms() {
            if let Atom::Rel { symbol, args } = atom {
                if target.get(symbol)?.arity() != args.len() {
                    return Err(Error::InvalidFormula(format!("atom `{atom}` has the wrong arity")));
                }
            }
        }
        if &relation_of_pp(def, target)? != defined {
            return Err(Error::InvalidFormula(format!("`{}` does not define its relation", def.name())));
        }
        out.insert(def.name(), def);
    }
    Ok(out)
}

fn definition_for<'a>(defs: &HashMap<&str, &'a PpFormula>, symbol: &str) -> Result<&'a PpFormula> {
    defs.get(symbol).copied().ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
}

/// Replaces every atom over a defined symbol by the body of its definition,
/// with the definition's variables renamed to the atom's arguments.
pub fn substitute_family(family: &[PpFormula], defs: &[PpFormula]) -> Result<Vec<PpFormula>> {
    let by_name: HashMap<&str, &PpFormula> = defs.iter().map(|d| (d.name(), d)).collect();
    family
        .iter()
        .map(|rho| {
            let mut atoms = Vec::new();
            for atom in rho.atoms() {
                match atom {
                    Atom::Rel { symbol, args } => {
                        let def = definition_for(&by_name, symbol)?;
                        let rename: HashMap<&str, &str> =
                            def.free().iter().map(String::as_str).zip(args.iter().map(String::as_str)).collect();
                        for inner in def.atoms() {
                            atoms.push(match inner {
                                Atom::Rel { symbol, args } => Atom::rel(symbol, &args.iter().map(|a| rename[a.as_str()]).collect::<Vec<_>>()),
                                Atom::Eq(a, b) => Atom::eq(rename[a.as_str()], rename[b.as_str()]),
                            });
                        }
                    }
                    Atom::Eq(..) => atoms.push(atom.clone()),
                }
            }
            PpFormula::new(rho.name(), rho.free(), rho.bound(), atoms)
        })
        .collect()
}

/// The source instance with each constraint replaced by the constraints of
/// its equality-free, quantifier-free definition. Solution sets coincide.
pub fn rewrite_ca(
    instance: &Instance,
    target: &Arc<Template>,
    defs: &[PpFormula],
    family: &[PpFormula],
) -> Result<ReductionTrace> {
    let by_name = index_definitions(instance.template(), target, defs, false)?;
    let out = substitute_constraints(instance, target, &by_name)?.expect("equality-free definitions");
    let mut trace = ReductionTrace::new("rewrite-ca", instance, out).identity_map(instance.num_vars());
    trace.formula_map = Some(substitute_family(family, defs)?);
    Ok(trace)
}

/// Builds the rewritten instance, or `None` when some definition equates two
/// distinct variables of a constraint scope.
fn substitute_constraints(
    instance: &Instance,
    target: &Arc<Template>,
    defs: &HashMap<&str, &PpFormula>,
) -> Result<Option<Instance>> {
    let mut out = Instance::with_variables(target.clone(), instance.variables())?;
    for c in instance.constraints() {
        let def = definition_for(defs, &c.relation)?;
        let slot: HashMap<&str, usize> = def.free().iter().map(String::as_str).zip(c.scope.iter().copied()).collect();
        for atom in def.atoms() {
            match atom {
                Atom::Rel { symbol, args } => out.push(symbol, args.iter().map(|a| slot[a.as_str()]).collect())?,
                Atom::Eq(a, b) if slot[a.as_str()] != slot[b.as_str()] => return Ok(None),
                Atom::Eq(..) => {}
            }
        }
    }
    Ok(Some(out))
}

/// As [`rewrite_ca`] for definitions that may contain equalities. If some
/// equality relates two distinct variables, no solution separates them and
/// the fixed NO instance `j` is returned instead (case 1); otherwise trivial
/// equalities are dropped (case 2). Without `j`, the default fixed NO
/// instance of the target language is used.
pub fn rewrite_with_equality(
    instance: &Instance,
    target: &Arc<Template>,
    defs: &[PpFormula],
    family: &[PpFormula],
    j: Option<&Instance>,
) -> Result<ReductionTrace> {
    let by_name = index_definitions(instance.template(), target, defs, true)?;
    let j = match j {
        Some(j) => {
            check_no_instance(j, target)?;
            j.clone()
        }
        None => fixed_no_instance(target)?,
    };
    let formula_map = Some(substitute_family(family, defs)?);
    Ok(match substitute_constraints(instance, target, &by_name)? {
        Some(out) => {
            let mut trace = ReductionTrace::new("rewrite-eq", instance, out).identity_map(instance.num_vars());
            trace.case_tag = Some(2);
            trace.formula_map = formula_map;
            trace
        }
        None => {
            let mut trace = ReductionTrace::new("rewrite-eq", instance, j);
            trace.variable_map = vec![Vec::new(); instance.num_vars()];
            trace.created = (0..trace.target.num_vars()).collect();
            trace.case_tag = Some(1);
            trace.notes.push("a definition equates two distinct scope variables".into());
            trace
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{named, Relation};
    use crate::solvers::deciders::all_solutions;

    fn or_lang() -> Arc<Template> {
        Arc::new(Template::single("s", named::or2()))
    }

    fn both_ways() -> (Arc<Template>, PpFormula) {
        let r = named::or2();
        let src = Arc::new(Template::single("r", r));
        let def = PpFormula::new("r", &["x1", "x2"], &[], vec![Atom::rel("s", &["x1", "x2"]), Atom::rel("s", &["x2", "x1"])]).unwrap();
        (src, def)
    }

    #[test]
    fn symmetric_or_doubles_constraints() {
        let (src, def) = both_ways();
        let mut i = Instance::with_variables(src, &["a", "b", "c"]).unwrap();
        i.add_constraint("r", &["a", "b"]).unwrap();
        i.add_constraint("r", &["b", "c"]).unwrap();
        let trace = rewrite_ca(&i, &or_lang(), std::slice::from_ref(&def), &[]).unwrap();
        assert_eq!(trace.target.constraints().len(), 4);
        assert_eq!(all_solutions(&i), all_solutions(&trace.target));
        assert_eq!(trace.variable_map, vec![vec![0], vec![1], vec![2]]);
        assert!(trace.created.is_empty());
    }

    #[test]
    fn identity_definitions_keep_the_instance() {
        let t = Arc::new(Template::single("R", named::one_in_three()));
        let mut i = Instance::with_variables(t.clone(), &["x", "y", "z"]).unwrap();
        i.add_constraint("R", &["x", "y", "z"]).unwrap();
        let trace = rewrite_ca(&i, &t, &[PpFormula::identity("R", 3)], &[]).unwrap();
        assert_eq!(trace.target.canonical(), i.canonical());
    }

    #[test]
    fn definitions_are_checked() {
        let (src, def) = both_ways();
        let i = Instance::with_variables(src.clone(), &["a"]).unwrap();
        let bound = PpFormula::new("r", &["x1", "x2"], &["w"], vec![Atom::rel("s", &["x1", "w"])]).unwrap();
        assert_eq!(rewrite_ca(&i, &or_lang(), &[bound], &[]).unwrap_err(), Error::NotQuantifierFree("r".into()));
        let eq = PpFormula::new("r", &["x1", "x2"], &[], vec![Atom::rel("s", &["x1", "x2"]), Atom::eq("x1", "x2")]).unwrap();
        assert_eq!(rewrite_ca(&i, &or_lang(), &[eq], &[]).unwrap_err(), Error::NotEqualityFree("r".into()));
        let wrong = PpFormula::new("r", &["x1", "x2"], &[], vec![Atom::rel("s", &["x1", "x1"]), Atom::rel("s", &["x2", "x2"])]).unwrap();
        assert!(matches!(rewrite_ca(&i, &or_lang(), &[wrong], &[]), Err(Error::InvalidFormula(_))));
        assert!(rewrite_ca(&i, &or_lang(), &[def], &[]).is_ok());
    }

    #[test]
    fn family_substitution() {
        let (_, def) = both_ways();
        let rho = PpFormula::new("p", &["u"], &["v"], vec![Atom::rel("r", &["u", "v"])]).unwrap();
        let g = substitute_family(&[rho], &[def]).unwrap();
        assert_eq!(g[0].to_string(), "formula p free u exists v atoms s(u,v) & s(v,u)");
    }

    #[test]
    fn equality_cases() {
        // r = {00, 11} defined as s(x1,x1) & x1 = x2 with s = {1}
        let eq_rel = Relation::from_rows(2, &["11"]).unwrap();
        let src = Arc::new(Template::single("r", eq_rel));
        let tgt = Arc::new(Template::new(2, [("one", Relation::from_rows(2, &["1"]).unwrap()), ("s", named::or2())]).unwrap());
        let def = PpFormula::new("r", &["x1", "x2"], &[], vec![Atom::rel("one", &["x1"]), Atom::eq("x1", "x2"), Atom::rel("one", &["x2"])]).unwrap();
        let mut i = Instance::with_variables(src.clone(), &["a", "b"]).unwrap();
        i.add_constraint("r", &["a", "b"]).unwrap();
        let trace = rewrite_with_equality(&i, &tgt, std::slice::from_ref(&def), &[], None).unwrap();
        assert_eq!(trace.case_tag, Some(1));
        assert!(!crate::solvers::decide_sep(&trace.target).answer);
        let mut diag = Instance::with_variables(src, &["a", "b"]).unwrap();
        diag.add_constraint("r", &["a", "a"]).unwrap();
        let trace = rewrite_with_equality(&diag, &tgt, &[def], &[], None).unwrap();
        assert_eq!(trace.case_tag, Some(2));
        assert_eq!(all_solutions(&diag), all_solutions(&trace.target));
    }
}
