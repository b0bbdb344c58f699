//! Named properties: each draws seeded trials, runs a construction or solver
//! and checks it against the brute-force oracles.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::write_instance;
use crate::galois::{polymorphisms, preserves};
use crate::instance::{Assignment, BotTopOrder, Instance};
use crate::post::{classify, is_core, Coclone};
use crate::pp::{projections_family, relation_of_pp, Atom, PpFormula};
use crate::reductions::{
    base_template, chi2_reduction, chi_reduction, diag_family, flatten_power, hom_image_reduction, rewrite_ca,
    sharp_reduction, star_lift, star_reduction, subalgebra_reduction, ReductionTrace,
};
use crate::relation::{named, Relation};
use crate::solvers::{decide_robust, decide_sep, robust_via_constants, sep_via_constants, solve_csp, solve_fast, with_constants};
use crate::template::Template;
use crate::verify::gen::{gen_instance, GenOptions};
use crate::verify::oracle::{brute_sep, brute_solutions, Class};
use crate::verify::{trial_seed, Caps, PropertyReport};

/// Reductions whose solution correspondence is checked trial by trial.
pub const PRESERVING_REDUCTIONS: [&str; 10] =
    ["rewrite-ca", "star", "sharp", "chi-ii1", "chi-ii0", "chi-ii", "chi2", "subalgebra", "hom-image", "flatten-power"];

/// Reductions whose NO and YES classes are checked to transport.
pub const GAP_REDUCTIONS: [&str; 8] =
    ["star", "sharp", "chi-ii1", "chi-ii0", "chi-ii", "chi2", "flatten-power", "hom-sub-chain"];

/// Every property name accepted by [`run_property`].
pub const PROPERTIES: [&str; 7] = [
    "<reduction>-preserve",
    "<reduction>-gap",
    "diag-family",
    "fast-solver",
    "constants-oracle",
    "galois-soundness",
    "weak-base-goldens",
];

/// In-class trials required on each side before a gap property can pass.
pub const GAP_MIN_HITS: usize = 10;

/// Construction parameters drawn alongside a source instance.
#[derive(Clone, Debug)]
pub enum Params {
    None,
    Rewrite { target: Arc<Template>, defs: Vec<PpFormula> },
    Subalgebra { a_size: u8, subset: Vec<u8> },
    HomImage { phi: Vec<u8> },
    Flatten { base: u8, power: usize },
    Chain { phi: Vec<u8>, a_size: u8, subset: Vec<u8> },
}

/// Runs a property by name: `R-preserve`, `R-gap`, or one of the fixed names.
pub fn run_property(name: &str, trials: usize, caps: &Caps, seed: u64) -> Result<PropertyReport> {
    if let Some(r) = name.strip_suffix("-preserve") {
        return check_solution_preservation(r, trials, caps, seed);
    }
    if let Some(r) = name.strip_suffix("-gap") {
        return check_gap_transport(r, trials, caps, seed);
    }
    match name {
        "diag-family" => Ok(check_diag_family(trials, caps, seed)),
        "fast-solver" => Ok(check_fast_solver(trials, caps, seed)),
        "constants-oracle" => Ok(check_constants_oracle(trials, caps, seed)),
        "galois-soundness" => Ok(check_galois_soundness(trials, seed)),
        "weak-base-goldens" => Ok(crate::verify::check_weak_base_goldens()),
        _ => Err(Error::Semantic(format!("unknown property `{name}`"))),
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn plus_template() -> Arc<Template> {
    static T: OnceLock<Arc<Template>> = OnceLock::new();
    T.get_or_init(|| Arc::new(Template::single("R", named::one_in_three()))).clone()
}

/// A small Boolean language mixing hard and easy relations.
fn mixed_template() -> Arc<Template> {
    static T: OnceLock<Arc<Template>> = OnceLock::new();
    T.get_or_init(|| {
        Arc::new(
            Template::new(2, [("or", named::or2()), ("plus", named::one_in_three()), ("nae", named::nae3())])
                .expect("distinct names"),
        )
    })
    .clone()
}

/// The square of +1-in-3 and the coordinate swap, over four elements.
fn square_template() -> Arc<Template> {
    static T: OnceLock<Arc<Template>> = OnceLock::new();
    T.get_or_init(|| {
        let one = named::one_in_three();
        let p3 = Relation::new(4, 3, one.rows().flat_map(|a| one.rows().map(move |b| (0..3).map(|i| a[i] * 2 + b[i]).collect::<Vec<_>>())))
            .expect("values below 4");
        let sw = Relation::new(4, 2, (0..4u8).map(|e| [e, (e % 2) * 2 + e / 2])).expect("values below 4");
        Arc::new(Template::new(4, [("p3", p3), ("sw", sw)]).expect("distinct names"))
    })
    .clone()
}

/// Random sizes for one trial: a generator mode, a variable count and a constraint count.
fn sizes(rng: &mut ChaCha8Rng, min_vars: usize, max_vars: usize, max_constraints: usize) -> (usize, usize, usize) {
    let mode = rng.gen_range(0..3);
    let hi = max_vars.max(min_vars);
    let n = rng.gen_range(min_vars..=hi);
    let m = rng.gen_range(1..=max_constraints.max(1));
    (mode, n, m)
}

/// Modes: 0 dense with repeats, 1 planted and distinct, 2 uniform and distinct.
fn options(mode: usize) -> GenOptions {
    match mode {
        0 => GenOptions::default(),
        1 => GenOptions { distinct_scope_vars: true, planted: 2, ..Default::default() },
        _ => GenOptions { distinct_scope_vars: true, ..Default::default() },
    }
}

/// Draws until the instance has a constraint and no isolated variable.
fn connected(mut draw: impl FnMut(u64) -> Result<Instance>, seed: u64) -> Result<Instance> {
    for k in 0..64 {
        let i = draw(seed.wrapping_add(k))?.without_isolated_variables();
        if !i.constraints().is_empty() {
            return Ok(i);
        }
    }
    Err(Error::Semantic("generator produced no constraints".into()))
}

fn one_in_three_source(seed: u64, caps: &Caps, max_vars: usize) -> Result<Instance> {
    let mut rng = rng_for(seed);
    let (mode, n, m) = sizes(&mut rng, 3, caps.max_vars.min(max_vars), caps.max_constraints.min(5));
    connected(|s| gen_instance(&plus_template(), n, m, s, &options(mode)), rng.gen())
}

/// A columns-style source with the bottom/top convention: half are images of
/// +1-in-3 instances, half are drawn directly.
fn convention_source(seed: u64, caps: &Caps, base: Coclone, order: BotTopOrder) -> Result<Instance> {
    let mut rng = rng_for(seed);
    if rng.gen_bool(0.5) {
        let plus = one_in_three_source(rng.gen(), caps, 6)?;
        let star = star_reduction(&plus)?.target;
        return match base {
            Coclone::II2 => Ok(star),
            _ => Ok(sharp_reduction(&plus)?.target),
        };
    }
    let template = base_template(base)?;
    let n = rng.gen_range(8..=caps.max_vars.max(8));
    let m = rng.gen_range(1..=caps.max_constraints.clamp(1, 4));
    let opts = GenOptions {
        distinct_scope_vars: true,
        bot_top: Some(order),
        planted: if rng.gen_bool(0.5) { 1 } else { 0 },
    };
    connected(|s| gen_instance(&template, n, m, s, &opts), rng.gen())
}

/// Random quantifier-free definitions over OR, implication and NAE, and a
/// source language made of the relations they define.
fn rewrite_source(seed: u64, caps: &Caps) -> Result<(Instance, Params)> {
    let mut rng = rng_for(seed);
    let target = Arc::new(Template::new(2, [("or", named::or2()), ("imp", named::implication()), ("nae", named::nae3())])?);
    let symbols: Vec<(&str, usize)> = vec![("or", 2), ("imp", 2), ("nae", 3)];
    let mut defs = Vec::new();
    let mut source = Vec::new();
    while defs.len() < 2 {
        let name = format!("r{}", defs.len());
        let arity = rng.gen_range(2..=3);
        let free: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
        let atoms = (0..rng.gen_range(1..=3))
            .map(|_| {
                let (sym, k) = symbols.choose(&mut rng).expect("non-empty");
                let args: Vec<&str> = (0..*k).map(|_| free[rng.gen_range(0..arity)].as_str()).collect();
                Atom::rel(sym, &args)
            })
            .collect();
        let def = PpFormula::new(&name, &free, &[] as &[String], atoms)?;
        match relation_of_pp(&def, &target) {
            Ok(rel) => source.push((name, rel)),
            Err(Error::EmptyDefinedRelation(_)) => continue,
            Err(e) => return Err(e),
        }
        defs.push(def);
    }
    let template = Arc::new(Template::new(2, source)?);
    let n = rng.gen_range(3..=caps.max_vars.max(3));
    let m = rng.gen_range(1..=caps.max_constraints.max(1));
    let instance = gen_instance(&template, n, m, rng.gen(), &GenOptions::default())?;
    Ok((instance, Params::Rewrite { target, defs }))
}

/// Source instance and parameters for a named reduction.
fn sample(reduction: &str, seed: u64, caps: &Caps) -> Result<(Instance, Params)> {
    let mut rng = rng_for(seed ^ 0x5eed);
    let mixed = |rng: &mut ChaCha8Rng| -> Result<Instance> {
        let (mode, n, m) = sizes(rng, 3, caps.max_vars.min(8), caps.max_constraints);
        gen_instance(&mixed_template(), n, m, rng.gen(), &options(mode))
    };
    Ok(match reduction {
        "rewrite-ca" => rewrite_source(seed, caps)?,
        "star" | "sharp" => (one_in_three_source(seed, caps, 12)?, Params::None),
        "chi-ii1" | "chi-ii0" | "chi-ii" => (convention_source(seed, caps, Coclone::II2, BotTopOrder::Fixed)?, Params::None),
        "chi2" => (convention_source(seed, caps, Coclone::IN2, BotTopOrder::Either)?, Params::None),
        "subalgebra" => {
            let mut subset: Vec<u8> = (0..3).collect::<Vec<u8>>().choose_multiple(&mut rng, 2).copied().collect();
            subset.sort_unstable();
            (mixed(&mut rng)?, Params::Subalgebra { a_size: 3, subset })
        }
        "hom-image" => (mixed(&mut rng)?, Params::HomImage { phi: surjection(&mut rng) }),
        "flatten-power" => {
            let (mode, n, m) = sizes(&mut rng, 2, caps.max_vars.min(6), caps.max_constraints.min(6));
            let i = gen_instance(&square_template(), n, m, rng.gen(), &options(mode).clone())
                .or_else(|_| gen_instance(&square_template(), n.max(3), m, rng.gen(), &GenOptions::default()))?;
            (i, Params::Flatten { base: 2, power: 2 })
        }
        "hom-sub-chain" => {
            let phi = surjection(&mut rng);
            let mut subset: Vec<u8> = (0..4).collect::<Vec<u8>>().choose_multiple(&mut rng, 3).copied().collect();
            subset.sort_unstable();
            (one_in_three_source(seed, caps, 6)?, Params::Chain { phi, a_size: 4, subset })
        }
        _ => return Err(Error::Semantic(format!("unknown reduction `{reduction}`"))),
    })
}

/// A surjection from three elements onto two.
fn surjection(rng: &mut ChaCha8Rng) -> Vec<u8> {
    loop {
        let phi: Vec<u8> = (0..3).map(|_| rng.gen_range(0..2)).collect();
        if phi.contains(&0) && phi.contains(&1) {
            return phi;
        }
    }
}

/// Applies the named reduction; chains run hom-image then subalgebra.
fn apply(reduction: &str, instance: &Instance, params: &Params) -> Result<ReductionTrace> {
    let family = projections_family(instance.template());
    match (reduction, params) {
        ("rewrite-ca", Params::Rewrite { target, defs }) => rewrite_ca(instance, target, defs, &family),
        ("star", _) => star_reduction(instance),
        ("sharp", _) => sharp_reduction(instance),
        ("chi-ii1", _) => chi_reduction(instance, Coclone::II1),
        ("chi-ii0", _) => chi_reduction(instance, Coclone::II0),
        ("chi-ii", _) => chi_reduction(instance, Coclone::II),
        ("chi2", _) => chi2_reduction(instance),
        ("subalgebra", Params::Subalgebra { a_size, subset }) => subalgebra_reduction(instance, *a_size, subset, &family),
        ("hom-image", Params::HomImage { phi }) => hom_image_reduction(instance, phi, &family),
        ("flatten-power", Params::Flatten { base, power }) => flatten_power(instance, *base, *power, &family),
        ("hom-sub-chain", Params::Chain { phi, a_size, subset }) => {
            let first = hom_image_reduction(instance, phi, &family)?;
            let g = first.formula_map.clone().unwrap_or_default();
            let mut second = subalgebra_reduction(&first.target, *a_size, subset, &g)?;
            second.reduction = "hom-sub-chain";
            second.source_id = first.source_id;
            Ok(second)
        }
        _ => Err(Error::Semantic(format!("`{reduction}` does not take these parameters"))),
    }
}

/// The source value of each source variable under a target solution of a flattening.
fn unflatten(trace: &ReductionTrace, base: u8, target_solution: &[u8]) -> Assignment {
    trace
        .variable_map
        .iter()
        .map(|coords| coords.iter().fold(0u8, |acc, &t| acc * base + target_solution[t]))
        .collect()
}

fn restrict(trace: &ReductionTrace, target_solution: &[u8]) -> Assignment {
    trace.variable_map.iter().map(|t| target_solution[t[0]]).collect()
}

fn negate(a: &[u8]) -> Assignment {
    a.iter().map(|&b| 1 - b).collect()
}

fn as_set(sols: impl IntoIterator<Item = Assignment>) -> BTreeSet<Assignment> {
    sols.into_iter().collect()
}

/// `Ok` or an (observed, expected) pair describing the mismatch.
type Verdict = std::result::Result<(), (String, String)>;

fn expect(ok: bool, observed: impl FnOnce() -> String, expected: &str) -> Verdict {
    if ok {
        Ok(())
    } else {
        Err((observed(), expected.to_string()))
    }
}

/// The certificate each reduction must satisfy, checked by enumeration.
fn certify(reduction: &str, source: &Instance, params: &Params, trace: &ReductionTrace) -> Verdict {
    let src = brute_solutions(source);
    let tgt = brute_solutions(&trace.target);
    let counts = || format!("{} source / {} target solutions", src.len(), tgt.len());
    match (reduction, params) {
        ("rewrite-ca", _) => expect(src == tgt, counts, "identical solution sets"),
        ("star", _) => {
            let mut lifts: Vec<Assignment> = src.iter().map(|s| star_lift(s)).collect();
            lifts.sort();
            expect(lifts == tgt, counts, "target solutions are exactly the lifts")
        }
        ("sharp", _) => {
            let set = as_set(tgt.iter().cloned());
            expect(tgt.iter().all(|s| set.contains(&negate(s))), counts, "closed under negation")?;
            expect(src.is_empty() == tgt.is_empty(), counts, "equal satisfiability")?;
            let src_set = as_set(src.iter().cloned());
            expect(
                tgt.iter().all(|s| src_set.contains(&restrict(trace, s)) || src_set.contains(&restrict(trace, &negate(s)))),
                counts,
                "each solution or its negation restricts to a source solution",
            )
        }
        ("chi-ii1" | "chi-ii0" | "chi-ii" | "chi2", _) => {
            let bt = trace.target.bot_top().expect("bot/top kept");
            let set = as_set(tgt.iter().cloned());
            let src_set = as_set(src.iter().cloned());
            expect(src.iter().all(|s| set.contains(s)), counts, "source solutions solve the target")?;
            let n = trace.target.num_vars();
            let constants: &[u8] = match reduction {
                "chi-ii1" => &[1],
                "chi-ii0" => &[0],
                _ => &[0, 1],
            };
            expect(constants.iter().all(|&c| set.contains(&vec![c; n])), counts, "the allowed constants solve the target")?;
            expect(
                tgt.iter().filter(|s| s[bt.bot] != s[bt.top]).all(|s| src_set.contains(s)),
                counts,
                "solutions separating bot from top solve the source",
            )
        }
        ("subalgebra", Params::Subalgebra { subset, .. }) => {
            let embedded = as_set(src.iter().map(|s| s.iter().map(|&v| subset[v as usize]).collect()));
            expect(embedded == as_set(tgt.iter().cloned()), counts, "target solutions are the embedded source solutions")
        }
        ("hom-image", Params::HomImage { phi }) => {
            let image = as_set(tgt.iter().map(|s| s.iter().map(|&a| phi[a as usize]).collect()));
            expect(image == as_set(src.iter().cloned()), counts, "phi maps target solutions onto source solutions")?;
            let fibre = |s: &Assignment| s.iter().map(|&b| phi.iter().filter(|&&x| x == b).count()).product::<usize>();
            let expected: usize = src.iter().map(fibre).sum();
            expect(expected == tgt.len(), counts, "target solutions are the full fibres")
        }
        ("flatten-power", Params::Flatten { base, .. }) => {
            let src_set = as_set(src.iter().cloned());
            expect(
                tgt.iter().all(|s| src_set.contains(&unflatten(trace, *base, s))),
                counts,
                "every target solution decodes to a source solution",
            )
        }
        _ => Err(("no certificate".into(), format!("a certificate for `{reduction}`"))),
    }
}

/// Checks the solution correspondence of a reduction on seeded sources.
pub fn check_solution_preservation(reduction: &str, trials: usize, caps: &Caps, seed: u64) -> Result<PropertyReport> {
    let name = reduction.to_string();
    check_preservation_with(reduction, trials, caps, seed, &move |i: &Instance, p: &Params| apply(&name, i, p))
}

/// As [`check_solution_preservation`] with a caller-supplied construction,
/// certified as the named reduction.
pub fn check_preservation_with(
    reduction: &str,
    trials: usize,
    caps: &Caps,
    seed: u64,
    reduce: &dyn Fn(&Instance, &Params) -> Result<ReductionTrace>,
) -> Result<PropertyReport> {
    if !PRESERVING_REDUCTIONS.contains(&reduction) {
        return Err(Error::Semantic(format!("unknown reduction `{reduction}`")));
    }
    let start = Instant::now();
    let mut report = PropertyReport::new(&format!("{reduction}-preserve"), seed);
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let (source, params) = sample(reduction, ts, caps)?;
        report.trials += 1;
        match reduce(&source, &params) {
            Ok(trace) => match certify(reduction, &source, &params, &trace) {
                Ok(()) => report.hit("certified"),
                Err((observed, expected)) => report.fail(ts, write_instance(&source), observed, expected),
            },
            Err(e) => report.fail(ts, write_instance(&source), e.to_string(), "a target instance"),
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// The (source, target) class pairs for the NO and YES sides of a reduction.
fn gap_sides(reduction: &str) -> Option<[(Class, Class); 2]> {
    Some(match reduction {
        "star" | "sharp" | "hom-sub-chain" => [(Class::NoCsp, Class::NoCsp), (Class::YesSepRobust, Class::YesSepRobust)],
        "chi-ii1" | "chi-ii0" | "chi-ii" | "chi2" => {
            [(Class::NoCsp, Class::NoNtriv), (Class::YesSepRobust, Class::YesSepRobust)]
        }
        "flatten-power" => [(Class::NoCsp, Class::NoCsp), (Class::YesRobust, Class::YesSep)],
        _ => return None,
    })
}

/// Checks that in-class sources land in the matching target class. Fails if
/// either side gets fewer than [`GAP_MIN_HITS`] in-class trials.
pub fn check_gap_transport(reduction: &str, trials: usize, caps: &Caps, seed: u64) -> Result<PropertyReport> {
    let sides = gap_sides(reduction).ok_or_else(|| Error::Semantic(format!("no gap property for `{reduction}`")))?;
    let start = Instant::now();
    let mut report = PropertyReport::new(&format!("{reduction}-gap"), seed);
    for (src, _) in &sides {
        report.hits.push((src.name().to_string(), 0));
    }
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let (source, params) = sample(reduction, ts, caps)?;
        report.trials += 1;
        let sols = brute_solutions(&source);
        let Some(&(from, to)) = sides.iter().find(|(from, _)| from.contains(&source, &sols)) else {
            report.skipped += 1;
            continue;
        };
        report.hit(from.name());
        match apply(reduction, &source, &params) {
            Ok(trace) => {
                let target_sols = brute_solutions(&trace.target);
                if !to.contains(&trace.target, &target_sols) {
                    report.fail(ts, write_instance(&source), format!("target not in {}", to.name()), format!("{} -> {}", from.name(), to.name()));
                }
            }
            Err(e) => report.fail(ts, write_instance(&source), e.to_string(), "a target instance"),
        }
    }
    for (from, _) in &sides {
        let hits = report.hits_for(from.name());
        if hits < GAP_MIN_HITS {
            report.fail(seed, String::new(), format!("{hits} in-class trials for {}", from.name()), format!("at least {GAP_MIN_HITS}"));
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// The diagram family over a core: some member is separating exactly when
/// the source is. Sources are drawn over the core plus constants.
pub fn check_diag_family(trials: usize, caps: &Caps, seed: u64) -> PropertyReport {
    let start = Instant::now();
    let mut report = PropertyReport::new("diag-family", seed);
    let cores = [
        Arc::new(Template::single("nae", named::nae3())),
        Arc::new(Template::single("plus", named::one_in_three())),
    ];
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let mut rng = rng_for(ts);
        let core = &cores[t % cores.len()];
        debug_assert!(is_core(core).unwrap_or(false));
        let extended = Arc::new(with_constants(core));
        let n = rng.gen_range(3..=caps.max_vars.clamp(3, 8));
        let m = rng.gen_range(1..=caps.max_constraints.clamp(1, 5));
        let mode = rng.gen_range(0..3);
        let Ok(mut source) = gen_instance(core, n, m, rng.gen(), &options(mode)) else { continue };
        source = source.retarget(extended.clone()).expect("superset language");
        for _ in 0..rng.gen_range(0..=2) {
            let v = rng.gen_range(0..n);
            let a = rng.gen_range(0..2u8);
            let name = extended.find(&Relation::singleton(2, a).expect("boolean")).expect("constants added").to_string();
            source.push(&name, vec![v]).expect("known variable");
        }
        report.trials += 1;
        let direct = brute_sep(n, &brute_solutions(&source));
        report.hit(if direct { "sep" } else { "not-sep" });
        match diag_family(&source, core) {
            Ok(family) => {
                if family.len() > 1 {
                    report.hit("several-members");
                }
                let any = family.iter().any(|m| brute_sep(m.target.num_vars(), &brute_solutions(&m.target)));
                if any != direct {
                    report.fail(ts, write_instance(&source), format!("family separating: {any}"), format!("{direct}"));
                }
            }
            Err(e) => report.fail(ts, write_instance(&source), e.to_string(), "a family"),
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Tractable Boolean languages used by the fast-solver property.
fn tractable_languages() -> Vec<Arc<Template>> {
    let rel = |rows: &[&str]| Relation::from_rows(2, rows).expect("well formed");
    let t = |pairs: Vec<(&str, Relation)>| Arc::new(Template::new(2, pairs).expect("distinct names"));
    vec![
        // Horn
        t(vec![("imp", named::implication()), ("horn3", rel(&["000", "001", "010", "011", "100", "101", "111"])), ("zero", rel(&["0"]))]),
        // dual Horn
        t(vec![("or", named::or2()), ("or3", rel(&["001", "010", "011", "100", "101", "110", "111"])), ("one", rel(&["1"]))]),
        // affine
        t(vec![("xor", named::xor2()), ("xnor", named::xnor2()), ("xor3", named::xor3())]),
        // bijunctive
        t(vec![("or", named::or2()), ("imp", named::implication()), ("nand", rel(&["00", "01", "10"])), ("xor", named::xor2())]),
    ]
}

/// Fast solvers agree with search on satisfiability and return valid solutions.
pub fn check_fast_solver(trials: usize, caps: &Caps, seed: u64) -> PropertyReport {
    let start = Instant::now();
    let mut report = PropertyReport::new("fast-solver", seed);
    let languages: Vec<_> = tractable_languages()
        .into_iter()
        .map(|t| {
            let c = classify(&t).expect("boolean");
            (t, c)
        })
        .collect();
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let mut rng = rng_for(ts);
        let (template, classification) = &languages[t % languages.len()];
        let n = rng.gen_range(3..=caps.max_vars.max(3));
        let m = rng.gen_range(1..=caps.max_constraints.max(1) + n);
        let Ok(instance) = gen_instance(template, n, m, rng.gen(), &GenOptions::default()) else { continue };
        report.trials += 1;
        let expected = solve_csp(&instance);
        report.hit(if expected.is_some() { "sat" } else { "unsat" });
        match solve_fast(&instance, classification) {
            Ok(Some(sol)) if expected.is_some() && instance.satisfies(&sol) => {}
            Ok(None) if expected.is_none() => {}
            Ok(got) => report.fail(ts, write_instance(&instance), format!("{got:?}"), format!("agreement with {expected:?}")),
            Err(e) => report.fail(ts, write_instance(&instance), e.to_string(), "a fast answer"),
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// SEP and 2-Robust through a constants oracle agree with the direct deciders.
pub fn check_constants_oracle(trials: usize, caps: &Caps, seed: u64) -> PropertyReport {
    let start = Instant::now();
    let mut report = PropertyReport::new("constants-oracle", seed);
    let languages = [mixed_template(), tractable_languages().swap_remove(3)];
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let mut rng = rng_for(ts);
        let template = &languages[t % languages.len()];
        let (mode, n, m) = sizes(&mut rng, 3, caps.max_vars.min(8), caps.max_constraints.min(6));
        let Ok(instance) = gen_instance(template, n, m, rng.gen(), &options(mode)) else { continue };
        report.trials += 1;
        let family = projections_family(instance.template());
        let mut oracle = |q: &Instance| Ok(solve_csp(q).is_some());
        let sep = sep_via_constants(&instance, &mut oracle).map(|a| a.answer);
        let robust = robust_via_constants(&instance, 2, &family, &mut oracle).map(|a| a.answer);
        let direct_sep = decide_sep(&instance).answer;
        let direct_robust = decide_robust(&instance, 2, &family).map(|r| r.answer);
        report.hit(if direct_sep { "sep" } else { "not-sep" });
        if sep.as_ref() != Ok(&direct_sep) {
            report.fail(ts, write_instance(&instance), format!("SEP via constants {sep:?}"), format!("{direct_sep}"));
        }
        if robust != direct_robust {
            report.fail(ts, write_instance(&instance), format!("robust via constants {robust:?}"), format!("{direct_robust:?}"));
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Every polymorphism of arity at most 3 of a language preserves each
/// relation pp-defined from it.
pub fn check_galois_soundness(trials: usize, seed: u64) -> PropertyReport {
    let start = Instant::now();
    let mut report = PropertyReport::new("galois-soundness", seed);
    for t in 0..trials {
        let ts = trial_seed(seed, t);
        let mut rng = rng_for(ts);
        let relations: Vec<(String, Relation)> = (0..rng.gen_range(1..=2))
            .map(|i| {
                let arity = rng.gen_range(1..=3);
                let size = 1usize << arity;
                let rows: Vec<Vec<u8>> = (0..size)
                    .filter(|_| rng.gen_bool(0.5))
                    .map(|code| (0..arity).map(|j| ((code >> (arity - 1 - j)) & 1) as u8).collect())
                    .collect();
                let rows = if rows.is_empty() { vec![vec![0; arity]] } else { rows };
                (format!("r{i}"), Relation::new(2, arity, rows).expect("boolean rows"))
            })
            .collect();
        let template = Template::new(2, relations.clone()).expect("distinct names");
        let free = ["x1", "x2", "x3"];
        let arity = rng.gen_range(1..=3);
        let vars: Vec<&str> = free[..arity].iter().chain(&["w1", "w2"]).copied().collect();
        let atoms: Vec<Atom> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let (name, r) = relations.choose(&mut rng).expect("non-empty");
                let args: Vec<&str> = (0..r.arity()).map(|_| vars[rng.gen_range(0..vars.len())]).collect();
                Atom::rel(name, &args)
            })
            .collect();
        let formula = PpFormula::new("phi", &free[..arity], &["w1", "w2"], atoms).expect("variables declared");
        report.trials += 1;
        let Ok(defined) = relation_of_pp(&formula, &template) else {
            report.hit("empty");
            continue;
        };
        report.hit("defined");
        for k in 1..=3 {
            let polys = polymorphisms(&template.relations(), 2, k).expect("boolean arity within cap");
            if let Some(f) = polys.iter().find(|f| !preserves(f, &defined).unwrap_or(false)) {
                report.fail(ts, format!("{formula}"), format!("{}-ary polymorphism {} breaks it", k, f.table_string()), "preserved");
                break;
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preservation_is_deterministic() {
        let caps = Caps::default();
        let a = check_solution_preservation("star", 10, &caps, 7).unwrap();
        let b = check_solution_preservation("star", 10, &caps, 7).unwrap();
        assert!(a.passed(), "{}", a.to_structured());
        assert_eq!(a.to_structured(), b.to_structured());
    }

    #[test]
    fn corrupted_star_is_caught() {
        let broken = |i: &Instance, _: &Params| {
            let mut trace = star_reduction(i)?;
            let mut t = trace.target.clone();
            let c = t.constraints()[0].clone();
            t.push(&c.relation, c.scope.iter().rev().copied().collect())?;
            trace.target = t;
            Ok(trace)
        };
        let r = check_preservation_with("star", 20, &Caps::default(), 3, &broken).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn unknown_names() {
        assert!(check_gap_transport("rewrite-ca", 1, &Caps::default(), 0).is_err());
        assert!(run_property("nope", 1, &Caps::default(), 0).is_err());
    }
}
