//! The two scaling benchmarks: a `4vec-bitand`/`logand` tree equivalence
//! and repeated lookups in a `hons-acons` chain.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eval::{hons_assoc, ExecRegistry};
use crate::rewriter::{Context, ProveOutcome, RewriteConfig, RewriteStats};
use crate::rules::Engine;
use crate::term::Term;
use crate::value::Value;

pub const LOGAND_RULES: &str = "
(def-rp-rule logand-to-4vec-bitand
  (implies (and (integerp x) (integerp y))
           (equal (logand x y) (4vec-bitand x y))))

(defthm logand-to-4vec-bitand-side-cond
  (implies (and (integerp x) (integerp y))
           (integerp (4vec-bitand x y))))

(rp-attach-sc logand-to-4vec-bitand logand-to-4vec-bitand-side-cond)

(def-rp-rule integerp-of-iassoc
  (integerp (iassoc k e)))
";

pub const BITAND_BACKCHAIN_RULE: &str = "
(def-rp-rule integerp-of-4vec-bitand
  (implies (and (integerp x) (integerp y))
           (integerp (4vec-bitand x y))))
";

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub param: usize,
    pub mode: String,
    pub rewrite_calls: u64,
    pub rule_attempts: u64,
    pub rule_applications: u64,
    pub nodes_created: u64,
    pub wall_ms: f64,
    pub node_visits: u64,
    pub status: String,
}

impl BenchRow {
    fn new(param: usize, mode: &str, s: &RewriteStats, wall_ms: f64, status: &str) -> Self {
        BenchRow {
            param,
            mode: mode.into(),
            rewrite_calls: s.rewrite_calls,
            rule_attempts: s.rule_attempts,
            rule_applications: s.rule_applications,
            nodes_created: s.nodes_created,
            wall_ms,
            node_visits: s.shadow_probes + s.alist_node_visits,
            status: status.into(),
        }
    }
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn tree(head: &str, depth: u32, next_key: &mut u64) -> Term {
    if depth == 0 {
        let k = Term::quote(Value::int(*next_key));
        *next_key += 1;
        return Term::app("iassoc", vec![k, Term::var("env")]);
    }
    let l = tree(head, depth - 1, next_key);
    let r = tree(head, depth - 1, next_key);
    Term::app(head, vec![l, r])
}

/// `(equal B L)` where `B` is a complete `4vec-bitand` tree of the given
/// depth over `(iassoc 'k env)` leaves and `L` the same tree of `logand`.
pub fn tree_conjecture(depth: u32) -> Term {
    let b = tree("4vec-bitand", depth, &mut 0);
    let l = tree("logand", depth, &mut 0);
    Term::app("equal", vec![b, l])
}

/// With side-conditions: the attached rule and the `iassoc` rule. Without:
/// the same rules plus the backchaining rule for `4vec-bitand`.
pub fn tree_engine(side_conditions: bool) -> Engine {
    let mut text = LOGAND_RULES.to_string();
    if !side_conditions {
        text.push_str(BITAND_BACKCHAIN_RULE);
    }
    Engine::load(&text, ExecRegistry::with_demo_witnesses()).expect("bench rules load")
}

fn timed<F: FnMut() -> (RewriteStats, String)>(reps: usize, mut f: F) -> (RewriteStats, String, f64) {
    let mut best = f64::INFINITY;
    let mut last = None;
    for _ in 0..reps.max(1) {
        let t0 = Instant::now();
        let r = f();
        best = best.min(t0.elapsed().as_secs_f64() * 1000.0);
        last = Some(r);
    }
    let (s, status) = last.unwrap();
    (s, status, best)
}

fn outcome_status(o: &ProveOutcome) -> &'static str {
    match o {
        ProveOutcome::Proved => "proved",
        ProveOutcome::NotProved => "not-proved",
        ProveOutcome::StepLimit => "step-limit",
    }
}

pub fn run_tree(depth: u32, side_conditions: bool, reps: usize, base: &RewriteConfig) -> BenchRow {
    let engine = tree_engine(side_conditions);
    let conj = tree_conjecture(depth);
    let cfg = RewriteConfig { side_conditions_enabled: side_conditions, ..base.clone() };
    let (stats, status, ms) = timed(reps, || {
        let r = engine.prove(&conj, &cfg).expect("generated conjecture is well formed");
        (r.stats, outcome_status(&r.outcome).to_string())
    });
    let mode = if side_conditions { "side-conditions" } else { "backchaining" };
    BenchRow::new(depth as usize, mode, &stats, ms, &status)
}

fn key(i: usize) -> Value {
    Value::sym(&format!("k{i}"))
}

/// `(gets '(keys..) AL)` for an `n`-entry `hons-acons` chain `AL` binding
/// `'k<i>` to variable `v<i>`, with `m` keys drawn in a seeded order. Also
/// returns the expected rewriting result.
pub fn falist_conjecture(n: usize, m: usize, seed: u64) -> (Term, Term) {
    let mut al = Term::nil();
    for i in (0..n).rev() {
        al = Term::app("hons-acons", vec![Term::quote(key(i)), Term::var(&format!("v{i}")), al]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let picks: Vec<usize> = (0..m).map(|j| order[j % n.max(1)]).collect();
    let keys = Value::list(picks.iter().map(|&i| key(i)));
    let mut expected = Term::nil();
    for &i in picks.iter().rev() {
        let pair = Term::app("cons", vec![Term::quote(key(i)), Term::var(&format!("v{i}"))]);
        expected = Term::app("cons", vec![pair, expected]);
    }
    (Term::app("gets", vec![Term::quote(keys), al]), expected)
}

/// Adds a `gets` evaluator: the list of `hons-get` results.
pub fn add_gets(reg: &mut ExecRegistry) {
    reg.register("gets", 2, |a| {
        let keys = a[0].list_items().unwrap_or_default();
        Ok(Value::list(keys.iter().map(|k| hons_assoc(k, &a[1]))))
    });
}

pub fn falist_registry() -> ExecRegistry {
    let mut reg = ExecRegistry::with_defaults();
    add_gets(&mut reg);
    reg
}

pub fn falist_engine() -> Engine {
    let text = "(add-meta-rule hons-get-scan) (add-meta-rule expand-gets)";
    Engine::load(text, falist_registry()).expect("bench metas load")
}

pub fn run_falist(n: usize, m: usize, fast_alist: bool, reps: usize, seed: u64, base: &RewriteConfig) -> BenchRow {
    let engine = falist_engine();
    let (conj, expected) = falist_conjecture(n, m, seed);
    let cfg = RewriteConfig { fast_alist_enabled: fast_alist, iff_top: false, ..base.clone() };
    let (stats, status, ms) = timed(reps, || {
        let mut rw = engine.rewriter(cfg.clone());
        let out = rw.rewrite_top(&conj, &Context::new());
        let status = if rw.stats.step_limit_hit {
            "step-limit"
        } else if out == expected {
            "ok"
        } else {
            "wrong-result"
        };
        (rw.stats, status.to_string())
    });
    let mode = if fast_alist { "fast-alist" } else { "scan" };
    BenchRow::new(n, mode, &stats, ms, &status)
}
