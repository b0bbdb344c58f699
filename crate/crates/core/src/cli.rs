//! Command-line dispatch. Exit codes: 0 success or YES, 1 a NO answer or a
//! failed property, 2 bad usage or unreadable input.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{self, Kind, ENTRIES};
use crate::error::{Error, Result};
use crate::format::{parse_formula_family, parse_instance, parse_language, write_certificate, write_instance};
use crate::instance::Instance;
use crate::post::{classify, verdict, weak_base, Coclone};
use crate::pp::{projections_family, PpFormula};
use crate::reductions::{
    chi2_reduction, chi_reduction, diag_family, flatten_power, hom_image_reduction, rewrite_ca, rewrite_with_equality,
    sharp_reduction, star_reduction, subalgebra_reduction, ReductionTrace,
};
use crate::solvers::{
    decide_equiv, decide_impl, decide_ntriv, decide_robust, decide_sep, robust_via_constants, sep_via_constants,
    solve_csp, solve_fast, with_constants, OracleAnswer,
};
use crate::template::Template;
use crate::verify::{self, oracle, Caps, GAP_REDUCTIONS, PRESERVING_REDUCTIONS};

/// Environment variable holding the default variable cap for `verify`.
pub const MAX_VARS_ENV: &str = "GAPLAB_MAX_VARS";

#[derive(Parser, Debug)]
#[command(name = "gaplab", version, about = "Boolean constraint languages: classification, solvers, reductions")]
pub struct Cli {
    /// Output style: a human line, or stable key: value lines.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Csp,
    Ntriv,
    Sep,
    Robust,
    Equiv,
    Impl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Backtracking search with propagation.
    Search,
    /// Enumeration of all assignments.
    Brute,
    /// Polynomial-time solver for tractable languages.
    Fast,
    /// Pinned CSP queries over the language with constants.
    Constants,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Co-clone, complexity verdicts and gap statement of a Boolean language.
    Classify {
        /// A language file, or `corpus:NAME`.
        language: String,
    },
    /// Decide a problem on an instance.
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        /// An instance file, or `corpus:NAME`.
        instance: String,
        /// Second instance for `equiv` and `impl`.
        second: Option<String>,
        /// Subset size bound for `robust`.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// `projections`, or a file of formulas.
        #[arg(long, default_value = "projections")]
        family: String,
        #[arg(long, value_enum, default_value_t = Engine::Search)]
        engine: Engine,
    },
    /// Apply a reduction and write the target instance and its certificate.
    Reduce {
        /// star, sharp, chi-ii1, chi-ii0, chi-ii, chi2, rewrite-ca, rewrite-eq,
        /// hom-image, subalgebra, flatten-power or diag.
        name: String,
        instance: String,
        /// Surjection for hom-image, as comma-separated values.
        #[arg(long, value_delimiter = ',')]
        phi: Vec<u8>,
        /// Target domain size for subalgebra.
        #[arg(long)]
        domain: Option<u8>,
        /// Embedded subset for subalgebra, strictly increasing.
        #[arg(long, value_delimiter = ',')]
        subset: Vec<u8>,
        #[arg(long, default_value_t = 2)]
        base: u8,
        #[arg(long, default_value_t = 2)]
        power: usize,
        /// Target language for the rewrites.
        #[arg(long)]
        target_lang: Option<String>,
        /// Definitions (formula lines) for the rewrites.
        #[arg(long)]
        defs: Option<String>,
        /// Core language for diag.
        #[arg(long)]
        core: Option<String>,
        #[arg(long, default_value = "projections")]
        family: String,
        /// Target instance file; standard output otherwise.
        #[arg(long)]
        out: Option<String>,
        /// Certificate file; comments after the instance otherwise.
        #[arg(long)]
        cert: Option<String>,
    },
    /// Run a seeded property: NAME-preserve, NAME-gap, diag-family,
    /// fast-solver, constants-oracle, galois-soundness, weak-base-goldens or all.
    Verify {
        property: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to the GAPLAB_MAX_VARS environment variable, else 12.
        #[arg(long)]
        max_vars: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max_constraints: usize,
    },
    /// Print the weak base of a hard co-clone.
    WeakBase { coclone: String },
    /// List the built-in corpus, or print one entry.
    Corpus { name: Option<String> },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// File contents, or a corpus entry for `corpus:NAME`.
pub fn load(spec: &str) -> Result<String> {
    match spec.strip_prefix("corpus:") {
        Some(name) => corpus::text(name),
        None => std::fs::read_to_string(spec).map_err(|e| Error::Semantic(format!("cannot read `{spec}`: {e}"))),
    }
}

fn load_family(spec: &str, template: &Template) -> Result<Vec<PpFormula>> {
    if spec == "projections" {
        Ok(projections_family(template))
    } else {
        parse_formula_family(&load(spec)?)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Output text and exit code.
fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let structured = cli.format == Format::Structured;
    match &cli.command {
        Command::Classify { language } => {
            let t = parse_language(&load(language)?)?;
            let c = classify(&t)?;
            let v = verdict(c.coclone);
            if !structured {
                return Ok((format!("{v}\n"), 0));
            }
            let mut s = format!("coclone: {}\n", c.coclone);
            for (name, on) in c.probes.flags() {
                let _ = writeln!(s, "probe.{name}: {on}");
            }
            for (name, cx) in v.entries() {
                let _ = writeln!(s, "complexity.{name}: {cx}");
            }
            let _ = writeln!(s, "gap: {}", v.gap.map_or("none".to_string(), |g| g.to_string()));
            Ok((s, 0))
        }
        Command::Solve { problem, instance, second, k, family, engine } => {
            let inst = parse_instance(&load(instance)?)?;
            let second = second.as_deref().map(|p| load(p).and_then(|t| parse_instance(&t))).transpose()?;
            solve(*problem, &inst, second.as_ref(), *k, family, *engine, structured)
        }
        Command::Reduce { name, instance, phi, domain, subset, base, power, target_lang, defs, core, family, out, cert } => {
            let inst = parse_instance(&load(instance)?)?;
            let g = load_family(family, inst.template())?;
            let traces: Vec<ReductionTrace> = match name.as_str() {
                "star" => vec![star_reduction(&inst)?],
                "sharp" => vec![sharp_reduction(&inst)?],
                "chi-ii1" => vec![chi_reduction(&inst, Coclone::II1)?],
                "chi-ii0" => vec![chi_reduction(&inst, Coclone::II0)?],
                "chi-ii" => vec![chi_reduction(&inst, Coclone::II)?],
                "chi2" => vec![chi2_reduction(&inst)?],
                "hom-image" => vec![hom_image_reduction(&inst, phi, &g)?],
                "subalgebra" => {
                    let a = domain.ok_or_else(|| Error::Semantic("subalgebra needs --domain".into()))?;
                    vec![subalgebra_reduction(&inst, a, subset, &g)?]
                }
                "flatten-power" => vec![flatten_power(&inst, *base, *power, &g)?],
                "rewrite-ca" | "rewrite-eq" => {
                    let need = |o: &Option<String>, flag: &str| {
                        o.clone().ok_or_else(|| Error::Semantic(format!("{name} needs --{flag}")))
                    };
                    let target = Arc::new(parse_language(&load(&need(target_lang, "target-lang")?)?)?);
                    let d = parse_formula_family(&load(&need(defs, "defs")?)?)?;
                    if name == "rewrite-ca" {
                        vec![rewrite_ca(&inst, &target, &d, &g)?]
                    } else {
                        vec![rewrite_with_equality(&inst, &target, &d, &g, None)?]
                    }
                }
                "diag" => {
                    let spec = core.clone().ok_or_else(|| Error::Semantic("diag needs --core".into()))?;
                    diag_family(&inst, &Arc::new(parse_language(&load(&spec)?)?))?
                }
                _ => return Err(Error::Semantic(format!("unknown reduction `{name}`"))),
            };
            let mut text = String::new();
            let mut certs = String::new();
            for (i, trace) in traces.iter().enumerate() {
                if traces.len() > 1 {
                    let _ = writeln!(text, "# member {i}");
                    let _ = writeln!(certs, "member: {i}");
                }
                text.push_str(&write_instance(&trace.target));
                certs.push_str(&write_certificate(&inst, trace));
            }
            let write = |path: &str, body: &str| {
                std::fs::write(path, body).map_err(|e| Error::Semantic(format!("cannot write `{path}`: {e}")))
            };
            let mut stdout = String::new();
            match out {
                Some(p) => write(p, &text)?,
                None => stdout.push_str(&text),
            }
            match cert {
                Some(p) => write(p, &certs)?,
                None => certs.lines().for_each(|l| {
                    let _ = writeln!(stdout, "# {l}");
                }),
            }
            Ok((stdout, 0))
        }
        Command::Verify { property, trials, seed, max_vars, max_constraints } => {
            let env_cap = std::env::var(MAX_VARS_ENV).ok().map(|v| {
                v.parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::Semantic(format!("{MAX_VARS_ENV} must be a positive number, got `{v}`")))
            });
            let max_vars = match (max_vars, env_cap) {
                (Some(v), _) => *v,
                (None, Some(v)) => v?,
                (None, None) => Caps::default().max_vars,
            };
            let caps = Caps { max_vars, max_constraints: *max_constraints };
            let names: Vec<String> = if property == "all" {
                PRESERVING_REDUCTIONS
                    .iter()
                    .map(|r| format!("{r}-preserve"))
                    .chain(GAP_REDUCTIONS.iter().map(|r| format!("{r}-gap")))
                    .chain(["diag-family", "fast-solver", "constants-oracle", "galois-soundness"].map(String::from))
                    .collect()
            } else {
                vec![property.clone()]
            };
            let mut s = String::new();
            let mut ok = true;
            for name in names {
                let report = verify::run_property(&name, *trials, &caps, *seed)?;
                ok &= report.passed();
                if structured {
                    s.push_str(&report.to_structured());
                } else {
                    let _ = writeln!(s, "{}", report.summary());
                    for f in &report.failures {
                        let _ = writeln!(s, "  seed {}: observed {}; expected {}", f.seed, f.observed, f.expected);
                    }
                }
            }
            Ok((s, if ok { 0 } else { 1 }))
        }
        Command::WeakBase { coclone } => {
            let c: Coclone = coclone.parse()?;
            let r = weak_base(c)?;
            let mut s = String::new();
            if structured {
                let _ = writeln!(s, "coclone: {c}");
                let _ = writeln!(s, "rows: {}", r.len());
                let _ = writeln!(s, "arity: {}", r.arity());
                r.to_matrix_string().lines().for_each(|l| {
                    let _ = writeln!(s, "row: {l}");
                });
            } else {
                let _ = writeln!(s, "# {c}: {} x {}", r.len(), r.arity());
                s.push_str(&r.to_matrix_string());
            }
            Ok((s, 0))
        }
        Command::Corpus { name: Some(name) } => Ok((corpus::text(name)?, 0)),
        Command::Corpus { name: None } => {
            let mut s = String::new();
            for e in ENTRIES {
                let kind = match e.kind {
                    Kind::Language => "language",
                    Kind::Instance => "instance",
                };
                let _ = writeln!(s, "{:<18} {:<9} {}", e.name, kind, e.description);
            }
            Ok((s, 0))
        }
    }
}

fn decide(problem: Problem, structured: bool, answer: bool, details: Vec<(String, String)>) -> Result<(String, i32)> {
    let name = format!("{problem:?}").to_lowercase();
    let mut s = String::new();
    if !structured {
        let _ = writeln!(s, "{}: {}", name, if answer { "YES" } else { "NO" });
    }
    let _ = writeln!(s, "problem: {name}");
    let _ = writeln!(s, "answer: {}", yes_no(answer));
    for (k, v) in details {
        let _ = writeln!(s, "{k}: {v}");
    }
    Ok((s, if answer { 0 } else { 1 }))
}

type Oracle = Box<dyn FnMut(&Instance) -> Result<bool>>;

/// A CSP oracle over the constants-extended language, by search or by the fast solver.
fn oracle_for(instance: &Instance, engine: Engine) -> Result<Oracle> {
    match engine {
        Engine::Fast => {
            let c = classify(&with_constants(instance.template()))?;
            c.witness().ok_or(Error::NotTractable)?;
            Ok(Box::new(move |q: &Instance| Ok(solve_fast(q, &c)?.is_some())))
        }
        _ => Ok(Box::new(|q: &Instance| Ok(solve_csp(q).is_some()))),
    }
}

fn solve(
    problem: Problem,
    inst: &Instance,
    second: Option<&Instance>,
    k: usize,
    family: &str,
    engine: Engine,
    structured: bool,
) -> Result<(String, i32)> {
    let engine_line = ("engine".to_string(), format!("{engine:?}").to_lowercase());
    let sol_line = |a: &[u8]| ("solution".to_string(), inst.format_assignment(a));
    let queries = |a: &OracleAnswer| ("queries".to_string(), a.queries.to_string());
    match problem {
        Problem::Csp => {
            let sol = match engine {
                Engine::Search | Engine::Constants => solve_csp(inst),
                Engine::Brute => oracle::brute_solutions(inst).into_iter().next(),
                Engine::Fast => solve_fast(inst, &classify(inst.template())?)?,
            };
            let mut d = vec![engine_line];
            d.extend(sol.as_deref().map(sol_line));
            decide(problem, structured, sol.is_some(), d)
        }
        Problem::Ntriv => {
            let sol = match engine {
                Engine::Brute => oracle::brute_solutions(inst).into_iter().find(|s| !oracle::is_constant(s)),
                Engine::Search => decide_ntriv(inst),
                _ => return Err(Error::Semantic("ntriv supports the search and brute engines".into())),
            };
            let mut d = vec![engine_line];
            d.extend(sol.as_deref().map(sol_line));
            decide(problem, structured, sol.is_some(), d)
        }
        Problem::Sep => match engine {
            Engine::Search => {
                let r = decide_sep(inst);
                let mut d = vec![engine_line, ("witnesses".into(), r.witnesses.len().to_string())];
                if let Some((u, v)) = r.failing_pair {
                    d.push(("failing_pair".into(), format!("{} {}", inst.name(u), inst.name(v))));
                }
                decide(problem, structured, r.answer, d)
            }
            Engine::Brute => {
                let sols = oracle::brute_solutions(inst);
                let d = vec![engine_line, ("solutions".into(), sols.len().to_string())];
                decide(problem, structured, oracle::brute_sep(inst.num_vars(), &sols), d)
            }
            Engine::Fast | Engine::Constants => {
                let a = sep_via_constants(inst, &mut *oracle_for(inst, engine)?)?;
                decide(problem, structured, a.answer, vec![engine_line, queries(&a)])
            }
        },
        Problem::Robust => {
            let g = load_family(family, inst.template())?;
            match engine {
                Engine::Search => {
                    let r = decide_robust(inst, k, &g)?;
                    let mut d = vec![engine_line, ("k".into(), k.to_string()), ("checked".into(), r.checked.to_string())];
                    if let Some((s, a)) = &r.counterexample {
                        let text: Vec<String> = s.iter().zip(a).map(|(&v, x)| format!("{}={x}", inst.name(v))).collect();
                        d.push(("counterexample".into(), text.join(" ")));
                    }
                    decide(problem, structured, r.answer, d)
                }
                Engine::Brute => {
                    if family != "projections" {
                        return Err(Error::Semantic("the brute engine supports only the projections family".into()));
                    }
                    let sols = oracle::brute_solutions(inst);
                    let ans = oracle::brute_local_robust(inst, &sols, k);
                    decide(problem, structured, ans, vec![engine_line, ("k".into(), k.to_string())])
                }
                Engine::Fast | Engine::Constants => {
                    let a = robust_via_constants(inst, k, &g, &mut *oracle_for(inst, engine)?)?;
                    decide(problem, structured, a.answer, vec![engine_line, ("k".into(), k.to_string()), queries(&a)])
                }
            }
        }
        Problem::Equiv | Problem::Impl => {
            let other = second.ok_or_else(|| Error::Semantic(format!("{problem:?} needs a second instance").to_lowercase()))?;
            let ans = match engine {
                Engine::Brute => {
                    if inst.variables() != other.variables() {
                        return Err(Error::InvalidInstance("instances must share their variable list".into()));
                    }
                    let a = oracle::brute_solutions(inst);
                    let b = oracle::brute_solutions(other);
                    if problem == Problem::Equiv {
                        a == b
                    } else {
                        a.iter().all(|s| b.binary_search(s).is_ok())
                    }
                }
                _ if problem == Problem::Equiv => decide_equiv(inst, other)?,
                _ => decide_impl(inst, other)?,
            };
            decide(problem, structured, ans, vec![engine_line])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("gaplab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_corpus_language() {
        let (code, out) = call(&["classify", "corpus:plus1in3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "II2; CSP, NTriv, SEP, (2,F)-Robust: NP-complete; GAP(N_CSP, Y_SEP∩(2,F))\n");
    }

    #[test]
    fn solve_exit_codes() {
        assert_eq!(call(&["solve", "csp", "corpus:one-clause"]).0, 0);
        let (code, out) = call(&["solve", "csp", "corpus:k4", "--format", "structured"]);
        assert_eq!((code, out.as_str()), (1, "problem: csp\nanswer: no\nengine: search\n"));
        assert_eq!(call(&["solve", "sep", "corpus:one-clause", "--engine", "constants"]).0, 0);
        assert_eq!(call(&["solve", "robust", "corpus:k4", "--engine", "brute"]).0, 1);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["solve", "csp", "corpus:nope"]).0, 2);
        assert_eq!(call(&["solve", "csp", "corpus:one-clause", "--bogus"]).0, 2);
        assert_eq!(call(&["weak-base", "II7"]).0, 2);
    }

    #[test]
    fn reduce_prints_certificate_comments() {
        let (code, out) = call(&["reduce", "star", "corpus:one-clause"]);
        assert_eq!(code, 0);
        assert!(out.contains("# reduction: star\n"));
        let target = parse_instance(&out).unwrap();
        assert_eq!(target.num_vars(), 8);
    }

    #[test]
    fn structured_verify_is_reproducible() {
        let a = call(&["verify", "star-gap", "--trials", "40", "--seed", "7", "--format", "structured"]);
        let b = call(&["verify", "star-gap", "--trials", "40", "--seed", "7", "--format", "structured"]);
        assert_eq!(a, b);
    }
}
