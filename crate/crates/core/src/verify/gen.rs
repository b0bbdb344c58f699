//! Seeded random instances.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{BotTop, BotTopOrder, Instance};
use crate::template::Template;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenOptions {
    /// No variable occurs twice in a scope.
    pub distinct_scope_vars: bool,
    /// The last two variables are `bot` and `top` and close every scope.
    pub bot_top: Option<BotTopOrder>,
    /// When positive, only constraints satisfied by this many hidden random
    /// assignments are kept, so the instance has at least those solutions.
    pub planted: usize,
}

/// Attempts per constraint before a planted instance stops growing.
const PLANT_ATTEMPTS: usize = 200;

/// A random instance with `n_vars` variables `x0, x1, ..` (the last two
/// named `bot`, `top` under the bottom/top option) and up to
/// `n_constraints` constraints over relations drawn uniformly from the
/// template. Deterministic in `seed`.
pub fn gen_instance(
    template: &Arc<Template>,
    n_vars: usize,
    n_constraints: usize,
    seed: u64,
    options: &GenOptions,
) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_arity = template.max_arity();
    let regular = if options.bot_top.is_some() {
        if max_arity < 2 {
            return Err(Error::InvalidTemplate("bottom/top scopes need arity at least 2".into()));
        }
        n_vars.checked_sub(2).ok_or(Error::TooFewVariables { needed: 2, got: n_vars })?
    } else {
        n_vars
    };
    let tail = if options.bot_top.is_some() { 2 } else { 0 };
    if regular == 0 && max_arity > tail {
        return Err(Error::TooFewVariables { needed: max_arity, got: n_vars });
    }
    if options.distinct_scope_vars && regular + tail < max_arity {
        return Err(Error::TooFewVariables { needed: max_arity, got: n_vars });
    }
    let mut names: Vec<String> = (0..regular).map(|i| format!("x{i}")).collect();
    if options.bot_top.is_some() {
        names.push("bot".into());
        names.push("top".into());
    }
    let mut inst = Instance::with_variables(template.clone(), &names)?;
    let (bot, top) = (regular, regular + 1);
    let d = template.domain_size();
    let planted: Vec<Vec<u8>> = (0..options.planted)
        .map(|_| {
            let mut a: Vec<u8> = (0..n_vars).map(|_| rng.gen_range(0..d)).collect();
            if options.bot_top == Some(BotTopOrder::Fixed) {
                a[bot] = 0;
                a[top] = 1.min(d - 1);
            }
            a
        })
        .collect();
    let symbols: Vec<(String, usize)> = template.iter().map(|(n, r)| (n.to_string(), r.arity())).collect();
    let pool: Vec<usize> = (0..regular).collect();
    'constraints: for _ in 0..n_constraints {
        for _ in 0..if planted.is_empty() { 1 } else { PLANT_ATTEMPTS } {
            let (symbol, arity) = symbols.choose(&mut rng).expect("templates are non-empty");
            let body = arity - tail;
            let mut scope: Vec<usize> = if options.distinct_scope_vars {
                pool.choose_multiple(&mut rng, body).copied().collect()
            } else {
                (0..body).map(|_| rng.gen_range(0..regular)).collect()
            };
            if let Some(order) = options.bot_top {
                if order == BotTopOrder::Either && rng.gen_bool(0.5) {
                    scope.extend([top, bot]);
                } else {
                    scope.extend([bot, top]);
                }
            }
            let rel = template.get(symbol)?;
            let fits = planted.iter().all(|a| rel.contains(&scope.iter().map(|&v| a[v]).collect::<Vec<_>>()));
            if fits {
                inst.push(symbol, scope)?;
                continue 'constraints;
            }
        }
        break;
    }
    if let Some(order) = options.bot_top {
        inst.set_bot_top(Some(BotTop { bot, top, order }));
    }
    Ok(inst)
}
