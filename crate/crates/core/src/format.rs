//! The plain-text format for languages, instances and formula families, and
//! the key/value format for reduction certificates.
//!
//! ```text
//! # comments start at a token beginning with '#'
//! domain 2
//! rel plus1in3 arity 3
//! 100
//! 010
//! 001
//! vars x y z
//! constraint plus1in3 x y z
//! bottop bot top fixed
//! formula pi12 free x1 x2 exists w atoms plus1in3(x1,x2,w)
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::{BotTop, BotTopOrder, Instance};
use crate::pp::{Atom, PpFormula};
use crate::reductions::ReductionTrace;
use crate::relation::Relation;
use crate::template::{valid_name, Template};

/// Everything a file may declare. Absent sections are `None` or empty.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub template: Option<Template>,
    pub instance: Option<Instance>,
    pub family: Vec<PpFormula>,
}

/// A whitespace-delimited token and its 1-based column.
#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

/// Splits a line into tokens, stopping at a `#` that begins a token.
fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => {
                if c == '#' {
                    break;
                }
                start = Some(i);
            }
            (true, Some(s)) => {
                out.push(Token { text: &line[s..i], col: line[..s].chars().count() + 1 });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

const KEYWORDS: [&str; 7] = ["domain", "rel", "vars", "var", "constraint", "bottop", "formula"];

/// A relation being read: header position and rows so far.
struct Pending {
    name: String,
    arity: usize,
    rows: Vec<Vec<u8>>,
    line: usize,
}

struct Parser {
    domain: Option<u8>,
    relations: Vec<(String, Relation)>,
    pending: Option<Pending>,
    vars: Vec<(String, usize, usize)>,
    constraints: Vec<(String, Vec<String>, usize, usize)>,
    bot_top: Option<(String, String, BotTopOrder, usize)>,
    family: Vec<PpFormula>,
}

impl Parser {
    fn finish_relation(&mut self) -> Result<()> {
        if let Some(p) = self.pending.take() {
            let d = self.domain.expect("checked at the header");
            let rel = Relation::new(d, p.arity, p.rows).map_err(|e| syntax(p.line, 1, e.to_string()))?;
            if self.relations.iter().any(|(n, _)| *n == p.name) {
                return Err(Error::Semantic(format!("relation `{}` declared twice (line {})", p.name, p.line)));
            }
            self.relations.push((p.name, rel));
        }
        Ok(())
    }

    fn row(&mut self, t: Token<'_>, line: usize) -> Result<()> {
        let d = self.domain.unwrap_or(2);
        let Some(p) = self.pending.as_mut() else {
            return Err(syntax(line, t.col, format!("unexpected `{}`", t.text)));
        };
        let row: Vec<u8> = if t.text == "()" {
            Vec::new()
        } else {
            t.text
                .chars()
                .enumerate()
                .map(|(i, c)| match c.to_digit(36) {
                    Some(v) if (v as u8) < d => Ok(v as u8),
                    _ => Err(syntax(line, t.col + i, format!("`{c}` is not a value of the domain"))),
                })
                .collect::<Result<_>>()?
        };
        if row.len() != p.arity {
            return Err(syntax(line, t.col, format!("row has {} values, expected {}", row.len(), p.arity)));
        }
        p.rows.push(row);
        Ok(())
    }

    fn line(&mut self, raw: &str, line: usize) -> Result<()> {
        let toks = tokens(raw);
        let Some(&head) = toks.first() else { return Ok(()) };
        if !KEYWORDS.contains(&head.text) {
            return toks.iter().try_for_each(|&t| self.row(t, line));
        }
        self.finish_relation()?;
        let name_at = |i: usize| -> Result<&str> {
            let t = toks.get(i).ok_or_else(|| syntax(line, raw.chars().count() + 1, "missing name"))?;
            if valid_name(t.text) {
                Ok(t.text)
            } else {
                Err(syntax(line, t.col, format!("invalid name `{}`", t.text)))
            }
        };
        let number_at = |i: usize| -> Result<usize> {
            let t = toks.get(i).ok_or_else(|| syntax(line, raw.chars().count() + 1, "missing number"))?;
            t.text.parse().map_err(|_| syntax(line, t.col, format!("`{}` is not a number", t.text)))
        };
        match head.text {
            "domain" => {
                if self.domain.is_some() {
                    return Err(syntax(line, head.col, "domain declared twice"));
                }
                let d = number_at(1)?;
                if !(1..=36).contains(&d) {
                    return Err(syntax(line, toks[1].col, "domain size must be between 1 and 36"));
                }
                self.domain = Some(d as u8);
                self.extra(&toks, 2, line)
            }
            "rel" => {
                if self.domain.is_none() {
                    return Err(syntax(line, head.col, "`rel` before `domain`"));
                }
                let name = name_at(1)?.to_string();
                match toks.get(2) {
                    Some(t) if t.text == "arity" => {}
                    Some(t) => return Err(syntax(line, t.col, "expected `arity`")),
                    None => return Err(syntax(line, raw.chars().count() + 1, "expected `arity`")),
                }
                let arity = number_at(3)?;
                self.pending = Some(Pending { name, arity, rows: Vec::new(), line });
                toks[4..].iter().try_for_each(|&t| self.row(t, line))
            }
            "vars" | "var" => {
                for t in &toks[1..] {
                    if !valid_name(t.text) {
                        return Err(syntax(line, t.col, format!("invalid name `{}`", t.text)));
                    }
                    self.vars.push((t.text.to_string(), line, t.col));
                }
                Ok(())
            }
            "constraint" => {
                let rel = name_at(1)?.to_string();
                let mut args = Vec::new();
                for i in 2..toks.len() {
                    args.push(name_at(i)?.to_string());
                }
                self.constraints.push((rel, args, line, toks[1].col));
                Ok(())
            }
            "bottop" => {
                let (bot, top) = (name_at(1)?.to_string(), name_at(2)?.to_string());
                let order = match toks.get(3).map(|t| t.text) {
                    Some("fixed") => BotTopOrder::Fixed,
                    Some("either") => BotTopOrder::Either,
                    _ => return Err(syntax(line, toks.get(3).map_or(raw.len() + 1, |t| t.col), "expected `fixed` or `either`")),
                };
                if self.bot_top.is_some() {
                    return Err(syntax(line, head.col, "bottop declared twice"));
                }
                self.bot_top = Some((bot, top, order, line));
                self.extra(&toks, 4, line)
            }
            "formula" => {
                let f = parse_formula_tokens(raw, &toks, line)?;
                self.family.push(f);
                Ok(())
            }
            _ => unreachable!("keywords are matched above"),
        }
    }

    fn extra(&self, toks: &[Token<'_>], from: usize, line: usize) -> Result<()> {
        match toks.get(from) {
            Some(t) => Err(syntax(line, t.col, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }

    fn finish(mut self) -> Result<Document> {
        self.finish_relation()?;
        let template = match (self.domain, self.relations.is_empty()) {
            (Some(d), false) => Some(Template::new(d, self.relations)?),
            (Some(_), true) if !self.vars.is_empty() || !self.constraints.is_empty() => {
                return Err(Error::Semantic("an instance needs at least one relation".into()))
            }
            _ => None,
        };
        let has_instance = !self.vars.is_empty() || !self.constraints.is_empty() || self.bot_top.is_some();
        let instance = if has_instance {
            let t = template.clone().ok_or_else(|| Error::Semantic("an instance needs a language".into()))?;
            let mut inst = Instance::new(Arc::new(t));
            for (v, line, col) in &self.vars {
                if inst.var(v).is_some() {
                    return Err(syntax(*line, *col, format!("variable `{v}` declared twice")));
                }
                inst.add_variable(v)?;
            }
            for (rel, args, line, _) in &self.constraints {
                let mut scope = Vec::new();
                for a in args {
                    scope.push(match inst.var(a) {
                        Some(v) => v,
                        None => inst.add_variable(a)?,
                    });
                }
                inst.push(rel, scope).map_err(|e| Error::Semantic(format!("line {line}: {e}")))?;
            }
            if let Some((bot, top, order, line)) = &self.bot_top {
                let find = |n: &str| inst.var(n).ok_or_else(|| Error::Semantic(format!("line {line}: unknown variable `{n}`")));
                let bt = BotTop { bot: find(bot)?, top: find(top)?, order: *order };
                inst.set_bot_top(Some(bt));
            }
            Some(inst)
        } else {
            None
        };
        Ok(Document { template, instance, family: self.family })
    }
}

/// Parses a formula line, `formula NAME free ... [exists ...] atoms A & B`.
fn parse_formula_tokens(raw: &str, toks: &[Token<'_>], line: usize) -> Result<PpFormula> {
    let end = raw.chars().count() + 1;
    let name = toks.get(1).ok_or_else(|| syntax(line, end, "missing formula name"))?;
    match toks.get(2) {
        Some(t) if t.text == "free" => {}
        t => return Err(syntax(line, t.map_or(end, |t| t.col), "expected `free`")),
    }
    let mut i = 3;
    let mut free = Vec::new();
    while i < toks.len() && !matches!(toks[i].text, "exists" | "atoms") {
        free.push(toks[i].text);
        i += 1;
    }
    let mut bound = Vec::new();
    if toks.get(i).is_some_and(|t| t.text == "exists") {
        i += 1;
        while i < toks.len() && toks[i].text != "atoms" {
            bound.push(toks[i].text);
            i += 1;
        }
    }
    let Some(atoms_tok) = toks.get(i) else {
        return Err(syntax(line, end, "expected `atoms`"));
    };
    let byte_start = raw.char_indices().nth(atoms_tok.col - 1).map_or(raw.len(), |(b, _)| b) + "atoms".len();
    let last = toks.last().expect("non-empty");
    let byte_end = raw.char_indices().nth(last.col - 1).map_or(raw.len(), |(b, _)| b) + last.text.len();
    let body = &raw[byte_start..byte_end.max(byte_start)];
    let body_col = atoms_tok.col + "atoms".len();
    let atoms = parse_atoms(body, line, body_col)?;
    PpFormula::new(name.text, &free, &bound, atoms).map_err(|e| syntax(line, name.col, e.to_string()))
}

/// `R(a,b) & x=y & ...`; `col` is the column of the first character of `body`.
fn parse_atoms(body: &str, line: usize, col: usize) -> Result<Vec<Atom>> {
    let mut atoms = Vec::new();
    let mut offset = 0;
    for part in body.split('&') {
        let at = col + body[..offset].chars().count() + (part.len() - part.trim_start().len());
        offset += part.len() + 1;
        let text: String = part.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(syntax(line, at, "empty atom"));
        }
        if let Some((a, b)) = text.split_once('=') {
            if !valid_name(a) || !valid_name(b) {
                return Err(syntax(line, at, format!("malformed equality `{text}`")));
            }
            atoms.push(Atom::eq(a, b));
            continue;
        }
        let (symbol, rest) = text.split_once('(').ok_or_else(|| syntax(line, at, format!("malformed atom `{text}`")))?;
        let args = rest.strip_suffix(')').ok_or_else(|| syntax(line, at, format!("missing `)` in `{text}`")))?;
        let args: Vec<&str> = if args.is_empty() { Vec::new() } else { args.split(',').collect() };
        if !valid_name(symbol) || args.iter().any(|a| !valid_name(a)) {
            return Err(syntax(line, at, format!("malformed atom `{text}`")));
        }
        atoms.push(Atom::rel(symbol, &args));
    }
    Ok(atoms)
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut p = Parser {
        domain: None,
        relations: Vec::new(),
        pending: None,
        vars: Vec::new(),
        constraints: Vec::new(),
        bot_top: None,
        family: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        p.line(raw, i + 1)?;
    }
    p.finish()
}

pub fn parse_language(text: &str) -> Result<Template> {
    parse_document(text)?.template.ok_or_else(|| Error::Semantic("no language declared".into()))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc = parse_document(text)?;
    match (doc.instance, doc.template) {
        (Some(i), _) => Ok(i),
        (None, Some(t)) => Ok(Instance::new(Arc::new(t))),
        (None, None) => Err(Error::Semantic("no instance declared".into())),
    }
}

pub fn parse_formula_family(text: &str) -> Result<Vec<PpFormula>> {
    Ok(parse_document(text)?.family)
}

/// A single formula line.
pub fn parse_formula(line: &str) -> Result<PpFormula> {
    let family = parse_formula_family(line)?;
    match <[PpFormula; 1]>::try_from(family) {
        Ok([f]) => Ok(f),
        Err(_) => Err(syntax(1, 1, "expected exactly one formula")),
    }
}

fn row_text(row: &[u8]) -> String {
    if row.is_empty() {
        return "()".into();
    }
    row.iter().map(|&v| char::from_digit(v as u32, 36).expect("domain at most 36")).collect()
}

pub fn write_language(template: &Template) -> String {
    let mut s = format!("domain {}\n", template.domain_size());
    for (name, rel) in template.iter() {
        let _ = writeln!(s, "rel {name} arity {}", rel.arity());
        for row in rel.rows() {
            let _ = writeln!(s, "{}", row_text(row));
        }
    }
    s
}

pub fn write_instance(instance: &Instance) -> String {
    let mut s = write_language(instance.template());
    if instance.num_vars() > 0 {
        let _ = writeln!(s, "vars {}", instance.variables().join(" "));
    }
    for c in instance.constraints() {
        let _ = write!(s, "constraint {}", c.relation);
        for &v in &c.scope {
            let _ = write!(s, " {}", instance.name(v));
        }
        s.push('\n');
    }
    if let Some(bt) = instance.bot_top() {
        let order = match bt.order {
            BotTopOrder::Fixed => "fixed",
            BotTopOrder::Either => "either",
        };
        let _ = writeln!(s, "bottop {} {} {order}", instance.name(bt.bot), instance.name(bt.top));
    }
    s
}

pub fn write_family(family: &[PpFormula]) -> String {
    family.iter().map(|f| format!("{f}\n")).collect()
}

/// The correspondence a reduction records, as `key: value` lines.
pub fn write_certificate(source: &Instance, trace: &ReductionTrace) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "reduction: {}", trace.reduction);
    let _ = writeln!(s, "source: {}", trace.source_id);
    let _ = writeln!(s, "target: {}", crate::reductions::fingerprint(&trace.target));
    if let Some(tag) = trace.case_tag {
        let _ = writeln!(s, "case: {tag}");
    }
    for (v, targets) in trace.variable_map.iter().enumerate() {
        let names: Vec<&str> = targets.iter().map(|&t| trace.target.name(t)).collect();
        let _ = writeln!(s, "map: {} -> {}", source.name(v), names.join(" "));
    }
    if !trace.created.is_empty() {
        let names: Vec<&str> = trace.created.iter().map(|&t| trace.target.name(t)).collect();
        let _ = writeln!(s, "created: {}", names.join(" "));
    }
    for f in trace.formula_map.iter().flatten() {
        let _ = writeln!(s, "formula: {f}");
    }
    for note in &trace.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::named;

    const CLAUSE: &str = "domain 2\nrel plus1in3 arity 3\n100\n010\n001\nvars x y z\nconstraint plus1in3 x y z\n";

    #[test]
    fn relation_block() {
        let t = parse_language("domain 2 # boolean\nrel plus1in3 arity 3\n  100 010\n001\n").unwrap();
        assert_eq!(t.get("plus1in3").unwrap(), &named::one_in_three());
    }

    #[test]
    fn instance_round_trip() {
        let i = parse_instance(CLAUSE).unwrap();
        assert_eq!(i.num_vars(), 3);
        assert_eq!(i.constraints().len(), 1);
        let text = write_instance(&i);
        assert_eq!(write_instance(&parse_instance(&text).unwrap()), text);
        assert_eq!(parse_instance(&text).unwrap(), i);
    }

    #[test]
    fn formula_line() {
        let f = parse_formula("formula pi12 free x1 x2 exists w atoms plus1in3(x1,x2,w)").unwrap();
        assert_eq!(f.to_string(), "formula pi12 free x1 x2 exists w atoms plus1in3(x1,x2,w)");
        let g = parse_formula("formula e free a b atoms r( a , b ) & a = b").unwrap();
        assert_eq!(g.atoms().len(), 2);
        assert_eq!(parse_formula(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn hash_inside_names_is_not_a_comment() {
        let i = parse_instance("domain 2\nrel r arity 2\n01\nvars u#0 v # trailing\nconstraint r u#0 v\n").unwrap();
        assert_eq!(i.variables(), ["u#0", "v"]);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_language("domain 2\nrel r arity 2\n011\n").unwrap_err(),
            Error::Syntax { line: 3, col: 1, msg: "row has 3 values, expected 2".into() }
        );
        assert!(matches!(parse_language("domain 2\nrel r arity 2\n02\n"), Err(Error::Syntax { line: 3, col: 2, .. })));
        assert!(matches!(parse_instance("domain 2\nrel r arity 1\n1\nconstraint q x\n"), Err(Error::Semantic(_))));
        assert!(matches!(parse_instance("domain 2\nrel r arity 1\n1\nconstraint r x y\n"), Err(Error::Semantic(_))));
        assert!(matches!(parse_formula("formula f free x atoms r(x"), Err(Error::Syntax { line: 1, col: 24, .. })));
    }

    #[test]
    fn bot_top_and_certificate() {
        let i = parse_instance(CLAUSE).unwrap();
        let trace = crate::reductions::star_reduction(&i).unwrap();
        let out = write_instance(&trace.target);
        assert!(out.ends_with("bottop bot top fixed\n"));
        assert_eq!(write_instance(&parse_instance(&out).unwrap()), out);
        let cert = write_certificate(&i, &trace);
        assert!(cert.contains("map: x -> x\n"));
        assert!(cert.contains("created: not:x not:y not:z bot top\n"));
    }
}
