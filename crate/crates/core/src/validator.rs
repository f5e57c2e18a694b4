//! Sampling oracles: side-condition validity, evaluation preservation and
//! rule soundness over random environments.

use std::fmt;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eval::{eval_term, Env, ExecRegistry};
use crate::rewriter::Context;
use crate::rules::{Equiv, Hyp, Rule, RuleSet};
use crate::syntax::rp_termp;
use crate::term::{Term, TermKind, IF};
use crate::value::{Symbol, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Argument positions from the root, dot separated; `top` for the root.
    pub path: String,
    /// The side-condition that failed, or a description of the mismatch.
    pub condition: String,
    pub env: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidityReport {
    pub ok: bool,
    pub failures: Vec<Failure>,
    /// Environments that were checked.
    pub samples: usize,
    /// Environments discarded because a fact or the input failed to hold
    /// or to evaluate.
    pub rejected: usize,
    /// Fewer environments than requested could be found.
    pub starved: bool,
}

impl ValidityReport {
    fn finish(mut self, wanted: usize) -> Self {
        self.ok = self.failures.is_empty();
        self.starved = self.samples < wanted;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} samples={} rejected={}{}",
            if self.ok { "ok" } else { "FAIL" },
            self.samples,
            self.rejected,
            if self.starved { " starved" } else { "" }
        )?;
        for x in &self.failures {
            writeln!(f, "  at {}: {} [{}]", x.path, x.condition, x.env)?;
        }
        Ok(())
    }
}

pub fn env_digest(env: &Env) -> String {
    let parts: Vec<String> = env.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(" ")
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        return "top".into();
    }
    path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

/// Whether every `rp` wrapper in `t` holds under `env`. Branches of an
/// `if` are only checked when selected by the test.
pub fn valid_sc(t: &Term, env: &Env, reg: &ExecRegistry) -> bool {
    sc_failure(t, env, reg).is_none()
}

/// The first failing wrapper of `t` under `env`: its position and the
/// property application that did not hold.
pub fn sc_failure(t: &Term, env: &Env, reg: &ExecRegistry) -> Option<(Vec<usize>, Term)> {
    let mut path = Vec::new();
    first_failure(t, env, reg, &mut path).map(|c| (path, c))
}

fn at(i: usize, t: &Term, env: &Env, reg: &ExecRegistry, path: &mut Vec<usize>) -> Option<Term> {
    path.push(i);
    let r = first_failure(t, env, reg, path);
    if r.is_none() {
        path.pop();
    }
    r
}

fn first_failure(t: &Term, env: &Env, reg: &ExecRegistry, path: &mut Vec<usize>) -> Option<Term> {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || {
        let (h, args) = t.as_app()?;
        if h.is(IF) && args.len() == 3 {
            if let Some(c) = at(0, &args[0], env, reg, path) {
                return Some(c);
            }
            return match eval_term(&args[0], env, reg) {
                Ok(v) if v.truthy() => at(1, &args[1], env, reg, path),
                Ok(_) => at(2, &args[2], env, reg, path),
                Err(_) => Some(args[0].clone()),
            };
        }
        if let Some((prop, x)) = t.as_rp() {
            let holds = eval_term(x, env, reg)
                .ok()
                .and_then(|v| reg.call(prop, &[v]).ok())
                .is_some_and(|v| v.truthy());
            if !holds {
                return Some(Term::app(prop.clone(), vec![x.clone()]));
            }
            return at(1, x, env, reg, path);
        }
        args.iter().enumerate().find_map(|(i, a)| at(i, a, env, reg, path))
    })
}

const SYMBOLS: &[&str] = &["a", "b", "foo", "t"];

/// One sample: half small integers, a quarter integers near ±2^64, a
/// quarter nil, symbols or shallow pairs.
pub fn sample_value<R: Rng>(rng: &mut R) -> Value {
    match rng.gen_range(0..4) {
        0 | 1 => Value::int(rng.gen_range(-8i64..=8)),
        2 => {
            let base = BigInt::from(1u8) << 64;
            let v: BigInt = base + BigInt::from(rng.gen_range(-4i64..=4));
            Value::int(if rng.gen_bool(0.5) { v } else { -v })
        }
        _ => match rng.gen_range(0..3) {
            0 => Value::Nil,
            1 => Value::sym(SYMBOLS.choose(rng).unwrap()),
            _ => {
                let car = Value::int(rng.gen_range(-3i64..=3));
                let cdr = if rng.gen_bool(0.5) { Value::Nil } else { Value::sym("a") };
                Value::cons(car, cdr)
            }
        },
    }
}

pub fn sample_env<R: Rng>(vars: &[Symbol], rng: &mut R) -> Env {
    vars.iter().map(|v| (v.clone(), sample_value(rng))).collect()
}

pub fn sample_env_seeded(vars: &[Symbol], seed: u64) -> Env {
    sample_env(vars, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn vars_of(terms: &[&Term]) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    for t in terms {
        for v in t.free_vars() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

fn agree(a: &Value, b: &Value, mode: Equiv) -> bool {
    match mode {
        Equiv::Equal => a == b,
        Equiv::Iff => a.truthy() == b.truthy(),
    }
}

/// Samples `n` environments and compares the values of `before` and
/// `after`. Environments where `before` does not evaluate are discarded.
pub fn check_preservation(
    before: &Term,
    after: &Term,
    mode: Equiv,
    n: usize,
    reg: &ExecRegistry,
    seed: u64,
) -> ValidityReport {
    check_run(before, after, &Context::new(), mode, n, reg, seed)
}

/// Like [`check_preservation`] but only over environments satisfying every
/// fact of `ctx`, and additionally requiring `after` to be well formed and
/// side-condition valid. Gives up after 100 draws per requested sample.
pub fn check_run(
    before: &Term,
    after: &Term,
    ctx: &Context,
    mode: Equiv,
    n: usize,
    reg: &ExecRegistry,
    seed: u64,
) -> ValidityReport {
    let mut report = ValidityReport::default();
    if let Err(v) = rp_termp(after) {
        report.failures.push(Failure {
            path: "top".into(),
            condition: format!("ill-formed result: {}", v.join("; ")),
            env: String::new(),
        });
    }
    let mut terms = vec![before, after];
    terms.extend(ctx.facts());
    let vars = vars_of(&terms);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = 0usize;
    while report.samples < n && draws < n.saturating_mul(100) && report.failures.len() < 10 {
        draws += 1;
        let env = sample_env(&vars, &mut rng);
        let holds = ctx
            .facts()
            .iter()
            .all(|f| eval_term(f, &env, reg).is_ok_and(|v| v.truthy()));
        let Some(b) = holds.then(|| eval_term(before, &env, reg).ok()).flatten() else {
            report.rejected += 1;
            continue;
        };
        report.samples += 1;
        match eval_term(after, &env, reg) {
            Ok(a) if agree(&b, &a, mode) => {}
            Ok(a) => report.failures.push(Failure {
                path: "top".into(),
                condition: format!("evaluation differs: {b} before, {a} after"),
                env: env_digest(&env),
            }),
            Err(e) => report.failures.push(Failure {
                path: "top".into(),
                condition: format!("result does not evaluate: {e}"),
                env: env_digest(&env),
            }),
        }
        if let Some((path, c)) = sc_failure(after, &env, reg) {
            report.failures.push(Failure {
                path: path_string(&path),
                condition: c.to_string(),
                env: env_digest(&env),
            });
        }
    }
    report.finish(n)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StrictReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl StrictReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn hyps_hold(hyps: &[Hyp], env: &Env, reg: &ExecRegistry) -> bool {
    hyps.iter().all(|h| match h {
        Hyp::Syntaxp(_) => true,
        Hyp::Term(t) => eval_term(t, env, reg).is_ok_and(|v| v.truthy()),
    })
}

/// Samples `n` environments satisfying the hypotheses of one rule and
/// checks lhs against rhs and the side-conditions of the wrapped rhs.
pub fn check_rule(rule: &Rule, n: usize, reg: &ExecRegistry, seed: u64) -> Result<usize, String> {
    let vars = vars_of(&[&rule.lhs]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = 0;
    for _ in 0..n.saturating_mul(100) {
        if accepted == n {
            break;
        }
        let env = sample_env(&vars, &mut rng);
        if !hyps_hold(&rule.hyps, &env, reg) {
            continue;
        }
        let Ok(l) = eval_term(&rule.lhs, &env, reg) else { continue };
        accepted += 1;
        match eval_term(&rule.rhs, &env, reg) {
            Ok(r) if agree(&l, &r, rule.equiv) => {}
            Ok(r) => return Err(format!("{} evaluates to {l} but rhs to {r} with {}", rule.label(), env_digest(&env))),
            Err(e) => return Err(format!("{}: rhs does not evaluate ({e}) with {}", rule.label(), env_digest(&env))),
        }
        if let Some((path, c)) = sc_failure(&rule.sc_wrapped_rhs, &env, reg) {
            return Err(format!(
                "{}: side-condition {c} fails at {} with {}",
                rule.label(),
                path_string(&path),
                env_digest(&env)
            ));
        }
    }
    Ok(accepted)
}

/// Runs [`check_rule`] on every enabled rule and checks every lemma.
/// Rules with no evaluable sample are reported as warnings.
pub fn check_rules_strict(rs: &RuleSet, reg: &ExecRegistry, n: usize, seed: u64) -> StrictReport {
    let mut report = StrictReport::default();
    for (k, rule) in rs.rules().enumerate() {
        match check_rule(rule, n, reg, seed.wrapping_add(k as u64)) {
            Ok(0) => report.warnings.push(format!("{}: no evaluable samples", rule.label())),
            Ok(_) => {}
            Err(e) => report.violations.push(e),
        }
    }
    for (k, lem) in rs.lemmas.iter().enumerate() {
        let concl = Term::app(lem.prop.clone(), vec![lem.subject.clone()]);
        let vars = vars_of(&[&concl]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).rotate_left(32));
        let mut accepted = 0;
        for _ in 0..n.saturating_mul(100) {
            if accepted == n {
                break;
            }
            let env = sample_env(&vars, &mut rng);
            if !hyps_hold(&lem.hyps, &env, reg) {
                continue;
            }
            match eval_term(&concl, &env, reg) {
                Ok(v) if v.truthy() => accepted += 1,
                Ok(_) => {
                    report.violations.push(format!("{}: {concl} is false with {}", lem.name, env_digest(&env)));
                    break;
                }
                Err(_) => {}
            }
        }
        if accepted == 0 && !report.violations.iter().any(|v| v.starts_with(lem.name.as_str())) {
            report.warnings.push(format!("{}: no evaluable samples", lem.name));
        }
    }
    report
}

/// Count of `rp` and `if` nodes; terms without them are valid whenever
/// they evaluate.
pub fn sc_node_count(t: &Term) -> usize {
    match t.kind() {
        TermKind::App(h, args) => {
            usize::from(h.is(IF) || t.as_rp().is_some()) + args.iter().map(sc_node_count).sum::<usize>()
        }
        _ => 0,
    }
}
