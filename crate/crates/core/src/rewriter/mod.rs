//! The rewrite loop.
//!
//! Each call runs, in order: the dont-rw stop check, reduction by known
//! facts (iff positions only), strengthening with known properties,
//! argument rewriting (`if`-aware), executable counterparts, fast-alist
//! interception, meta rules, and rewrite rules. A meta or rule change
//! restarts the sequence on the result with the dont-rw it supplied.

mod context;
mod syntaxp;
mod unify;

use std::fmt::Write as _;

use serde::Serialize;

pub use context::{conjuncts, Context};
pub use syntaxp::syntaxp_eval;
pub use unify::unify;

use crate::dontrw::DontRw;
use crate::error::ParseError;
use crate::eval::ExecRegistry;
use crate::falist::{as_falist, fa_acons, fa_free, fa_get};
use crate::meta::{apply_meta, MetaRegistry};
use crate::rules::{Equiv, Hyp, Rule, RuleSet};
use crate::syntax::{beta_reduce, rp_termp};
use crate::term::{eq_modulo_rp, Bindings, Term, TermKind, FALIST, HIDE, IF, NOT, RP, SPECIAL_HEADS};
use crate::value::Symbol;

#[derive(Clone, Debug, Serialize)]
pub struct RewriteConfig {
    /// Upper bound on rewrite entries for one run.
    pub step_limit: u64,
    /// Maximum nesting of hypothesis relief.
    pub backchain_depth: usize,
    /// Rewrite the top-level term in an iff position.
    pub iff_top: bool,
    pub side_conditions_enabled: bool,
    pub fast_alist_enabled: bool,
    /// Record one line per fired rule or meta.
    pub trace: bool,
    /// Sample-check every accepted meta output against its input.
    pub meta_spot_check: bool,
}

impl Default for RewriteConfig {
    fn default() -> Self {
        RewriteConfig {
            step_limit: 1 << 20,
            backchain_depth: 1000,
            iff_top: false,
            side_conditions_enabled: true,
            fast_alist_enabled: true,
            trace: false,
            meta_spot_check: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewriteStats {
    pub rewrite_calls: u64,
    pub rule_attempts: u64,
    /// The part of `rule_attempts` spent while relieving hypotheses.
    pub hyp_rule_attempts: u64,
    pub rule_applications: u64,
    pub hyp_relief_failures: u64,
    pub exec_evals: u64,
    pub exec_errors: u64,
    pub meta_applications: u64,
    pub meta_rejections: u64,
    pub nodes_created: u64,
    pub shadow_probes: u64,
    pub alist_node_visits: u64,
    pub step_limit_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveOutcome {
    Proved,
    /// Rewriting finished on something other than `'t`.
    NotProved,
    /// The step limit was reached first.
    StepLimit,
}

#[derive(Clone, Debug)]
pub struct ProveReport {
    pub outcome: ProveOutcome,
    /// The goal after hypotheses were split off.
    pub goal: Term,
    pub context: Context,
    pub result: Term,
    pub stats: RewriteStats,
    pub trace: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl ProveReport {
    pub fn proved(&self) -> bool {
        self.outcome == ProveOutcome::Proved
    }
}

/// Nesting bound for the recursive descent, independent of the step limit.
const MAX_NESTING: usize = 1 << 16;

enum Args {
    /// The term is final after its arguments.
    Done(Term),
    /// Continue with the remaining steps.
    Next(Term),
}

pub struct Rewriter<'a> {
    rules: &'a RuleSet,
    exec: &'a ExecRegistry,
    metas: &'a MetaRegistry,
    pub cfg: RewriteConfig,
    pub stats: RewriteStats,
    pub trace: Vec<String>,
    pub diagnostics: Vec<String>,
    depth: usize,
    nesting: usize,
    path: Vec<usize>,
}

fn template_nodes(t: &Term) -> u64 {
    match t.kind() {
        TermKind::Var(_) => 0,
        TermKind::App(_, args) => 1 + args.iter().map(template_nodes).sum::<u64>(),
        _ => 1,
    }
}

impl<'a> Rewriter<'a> {
    pub fn new(
        rules: &'a RuleSet,
        exec: &'a ExecRegistry,
        metas: &'a MetaRegistry,
        cfg: RewriteConfig,
    ) -> Self {
        Rewriter {
            rules,
            exec,
            metas,
            cfg,
            stats: RewriteStats::default(),
            trace: Vec::new(),
            diagnostics: Vec::new(),
            depth: 0,
            nesting: 0,
            path: Vec::new(),
        }
    }

    /// Rewrites `t` everywhere, in an iff position when `cfg.iff_top`.
    pub fn rewrite_top(&mut self, t: &Term, ctx: &Context) -> Term {
        let iff = self.cfg.iff_top;
        self.rewrite(t, &DontRw::default(), ctx, iff)
    }

    pub fn rewrite(&mut self, t: &Term, dw: &DontRw, ctx: &Context, iff: bool) -> Term {
        if self.nesting >= MAX_NESTING {
            self.stats.step_limit_hit = true;
            return t.clone();
        }
        self.nesting += 1;
        let out = stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.rw(t, dw, ctx, iff));
        self.nesting -= 1;
        out
    }

    /// Splits a top-level `(implies H C)` into facts and a goal, then
    /// rewrites the goal in an iff position.
    pub fn prove(mut self, conjecture: &Term) -> Result<ProveReport, ParseError> {
        let t = beta_reduce(conjecture)?;
        if let Err(v) = rp_termp(&t) {
            return Err(ParseError::translate(v.join("; ")));
        }
        let (context, goal) = match t.as_app() {
            Some((h, [hyp, concl])) if h.is("implies") => {
                let mut c = Context::new();
                c.assume(hyp);
                (c, concl.clone())
            }
            _ => (Context::new(), t.clone()),
        };
        let result = self.rewrite(&goal, &DontRw::default(), &context, true);
        let outcome = if result.quoted().is_some_and(|v| !v.is_nil()) {
            ProveOutcome::Proved
        } else if self.stats.step_limit_hit {
            ProveOutcome::StepLimit
        } else {
            ProveOutcome::NotProved
        };
        Ok(ProveReport {
            outcome,
            goal,
            context,
            result,
            stats: self.stats,
            trace: self.trace,
            diagnostics: self.diagnostics,
        })
    }

    fn rw(&mut self, t: &Term, dw: &DontRw, ctx: &Context, iff: bool) -> Term {
        let mut term = t.clone();
        let mut dw = dw.clone();
        let mut wraps: Vec<Symbol> = Vec::new();
        loop {
            if self.stats.step_limit_hit || self.stats.rewrite_calls >= self.cfg.step_limit {
                self.stats.step_limit_hit = true;
                break;
            }
            self.stats.rewrite_calls += 1;
            if dw.is_stop() {
                break;
            }
            match term.kind() {
                TermKind::App(..) => {}
                TermKind::Var(_) => {
                    if iff {
                        term = self.reduce_by_context(&term, ctx);
                    }
                    break;
                }
                _ => break,
            }
            if iff {
                let r = self.reduce_by_context(&term, ctx);
                if r.is_quote() {
                    term = r;
                    break;
                }
            }
            if self.cfg.side_conditions_enabled && !iff {
                self.strengthen(&term, ctx, &mut wraps);
            }
            let before = term.clone();
            term = match self.rewrite_args(&term, &dw, ctx, iff) {
                Args::Done(t) => {
                    term = t;
                    break;
                }
                Args::Next(t) => t,
            };
            if iff && !Term::ptr_eq(&before, &term) {
                let r = self.reduce_by_context(&term, ctx);
                if r.is_quote() {
                    term = r;
                    break;
                }
            }
            if let Some(q) = self.apply_exec(&term) {
                term = q;
                break;
            }
            if self.cfg.fast_alist_enabled {
                if let Some(f) = self.apply_fast_alist(&term) {
                    term = f;
                    break;
                }
            }
            if let Some(r) = equal_refl(&term) {
                term = r;
                break;
            }
            if let Some((out, ndw)) =
                apply_meta(&term, self.metas, self.exec, &self.cfg, &mut self.stats, &mut self.diagnostics)
            {
                self.stats.nodes_created += fresh_nodes(&out, &term);
                if self.cfg.trace {
                    self.trace_line(&format!("meta {}", term.head().unwrap()), &term, &out);
                }
                term = out;
                dw = ndw;
                continue;
            }
            if let Some((out, ndw)) = self.apply_rules(&term, ctx, iff) {
                term = out;
                dw = ndw;
                continue;
            }
            break;
        }
        self.wrap(term, &wraps, iff)
    }

    fn sub(&mut self, i: usize, t: &Term, dw: DontRw, ctx: &Context, iff: bool) -> Term {
        if dw.is_stop() {
            return t.clone();
        }
        self.path.push(i);
        let out = self.rewrite(t, &dw, ctx, iff);
        self.path.pop();
        out
    }

    fn rebuild(&mut self, h: &Symbol, old: &[Term], new: Vec<Term>) -> Option<Term> {
        if new.iter().zip(old).all(|(a, b)| Term::ptr_eq(a, b)) {
            None
        } else {
            self.stats.nodes_created += 1;
            Some(Term::app(h.clone(), new))
        }
    }

    fn rewrite_args(&mut self, term: &Term, dw: &DontRw, ctx: &Context, iff: bool) -> Args {
        let (h, args) = term.as_app().expect("application");
        let n = args.len();
        match h.as_str() {
            RP => {
                let Some((prop, payload)) = term.as_rp() else { return Args::Done(term.clone()) };
                let p2 = self.sub(1, payload, dw.arg(1, n), ctx, false);
                if p2.is_quote() || p2.rp_props().contains(&prop) {
                    return Args::Done(p2);
                }
                if Term::ptr_eq(&p2, payload) {
                    return Args::Done(term.clone());
                }
                self.stats.nodes_created += 1;
                Args::Done(Term::rp(prop, p2))
            }
            FALIST => Args::Done(term.clone()),
            HIDE => Args::Next(term.clone()),
            IF if n == 3 => Args::Done(self.rewrite_if(term, args, dw, ctx, iff)),
            _ => {
                let arg_iff = h.is(NOT);
                let new: Vec<Term> = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| self.sub(i, a, dw.arg(i, n), ctx, arg_iff))
                    .collect();
                Args::Next(self.rebuild(h, args, new).unwrap_or_else(|| term.clone()))
            }
        }
    }

    fn rewrite_if(&mut self, term: &Term, args: &[Term], dw: &DontRw, ctx: &Context, iff: bool) -> Term {
        let test = self.sub(0, &args[0], dw.arg(0, 3), ctx, true);
        if let Some(v) = test.quoted() {
            return if v.is_nil() {
                self.sub(2, &args[2], dw.arg(2, 3), ctx, iff)
            } else {
                self.sub(1, &args[1], dw.arg(1, 3), ctx, iff)
            };
        }
        let mut then_ctx = ctx.clone();
        then_ctx.assume(&test);
        let then = self.sub(1, &args[1], dw.arg(1, 3), &then_ctx, iff);
        let mut else_ctx = ctx.clone();
        else_ctx.assume_not(&test);
        let els = self.sub(2, &args[2], dw.arg(2, 3), &else_ctx, iff);
        let h = term.head().unwrap().clone();
        self.rebuild(&h, args, vec![test, then, els]).unwrap_or_else(|| term.clone())
    }

    /// In an iff position: `'t` for known facts and for `(prop (rp 'prop x))`,
    /// `'nil` for known-false terms, otherwise `t` itself.
    pub fn reduce_by_context(&self, t: &Term, ctx: &Context) -> Term {
        if t.is_quote() {
            return t.clone();
        }
        if ctx.contains(t) {
            return Term::t();
        }
        if ctx.refutes(t) {
            return Term::nil();
        }
        if self.cfg.side_conditions_enabled {
            if let Some((p, [x])) = t.strip_rp().as_app() {
                if x.rp_props().contains(&p) {
                    return Term::t();
                }
            }
        }
        t.clone()
    }

    fn strengthen(&self, term: &Term, ctx: &Context, wraps: &mut Vec<Symbol>) {
        if ctx.is_empty() {
            return;
        }
        let have = term.rp_props();
        for f in ctx.facts() {
            if let Some((p, [x])) = f.as_app() {
                if p.is(NOT) || SPECIAL_HEADS.contains(&p.as_str()) || x.as_app().is_none() {
                    continue;
                }
                if !have.contains(&p) && !wraps.contains(p) && eq_modulo_rp(x, term) {
                    wraps.push(p.clone());
                }
            }
        }
    }

    fn wrap(&mut self, mut term: Term, wraps: &[Symbol], iff: bool) -> Term {
        if wraps.is_empty() || iff || term.is_quote() {
            return term;
        }
        for p in wraps {
            if !term.rp_props().contains(&p) {
                self.stats.nodes_created += 1;
                term = Term::rp(p, term);
            }
        }
        term
    }

    /// Runs the executable counterpart when every argument is a constant.
    pub fn apply_exec(&mut self, term: &Term) -> Option<Term> {
        let (h, args) = term.as_app()?;
        if SPECIAL_HEADS.contains(&h.as_str()) || !args.iter().all(Term::is_quote) {
            return None;
        }
        if !self.exec.is_enabled(h) || !self.rules.exec_enabled(h) {
            return None;
        }
        let vals: Vec<_> = args.iter().map(|a| a.quoted().unwrap().clone()).collect();
        match self.exec.call(h, &vals) {
            Ok(v) => {
                self.stats.exec_evals += 1;
                self.stats.nodes_created += 1;
                Some(Term::quote(v))
            }
            Err(_) => {
                self.stats.exec_errors += 1;
                None
            }
        }
    }

    fn apply_fast_alist(&mut self, term: &Term) -> Option<Term> {
        let (h, args) = term.as_app()?;
        match (h.as_str(), args) {
            ("hons-acons", [k, v, tail]) => {
                let out = fa_acons(k, v, tail.strip_rp())?;
                self.stats.nodes_created += 4;
                Some(out)
            }
            ("hons-get", [k, fal]) => {
                as_falist(fal.strip_rp())?;
                let out = fa_get(k, fal.strip_rp())?;
                self.stats.shadow_probes += 1;
                self.stats.nodes_created += 1;
                Some(out)
            }
            ("fast-alist-free", [fal]) => {
                as_falist(fal.strip_rp())?;
                fa_free(fal.strip_rp())
            }
            _ => None,
        }
    }

    /// Tries the candidate rules for the head of `term` in order; the first
    /// whose lhs matches and whose hypotheses are relieved fires.
    pub fn apply_rules(&mut self, term: &Term, ctx: &Context, iff: bool) -> Option<(Term, DontRw)> {
        let h = term.head()?.clone();
        let rules = self.rules;
        let sc = self.cfg.side_conditions_enabled;
        for rule in rules.candidates(&h) {
            if !rule.enabled || (rule.equiv == Equiv::Iff && !iff) {
                continue;
            }
            self.stats.rule_attempts += 1;
            if self.depth > 0 {
                self.stats.hyp_rule_attempts += 1;
            }
            let mut extracted = Vec::new();
            let Some(b) = unify(&rule.lhs, term, &mut extracted) else { continue };
            let local;
            let hyp_ctx = if sc && !extracted.is_empty() && !rule.hyps.is_empty() {
                let mut c = ctx.clone();
                for (x, p) in extracted {
                    c.push(Term::app(p, vec![x]));
                }
                local = c;
                &local
            } else {
                ctx
            };
            if !self.relieve_hyps(rule, &b, hyp_ctx) {
                self.stats.hyp_relief_failures += 1;
                continue;
            }
            let (tmpl, dw) = if sc {
                (&rule.sc_wrapped_rhs, &rule.sc_dw)
            } else {
                (&rule.rhs, &rule.rhs_dw)
            };
            let out = tmpl.substitute(&b);
            self.stats.nodes_created += template_nodes(tmpl);
            self.stats.rule_applications += 1;
            if self.cfg.trace {
                self.trace_line(&rule.label(), term, &out);
            }
            return Some((out, dw.clone()));
        }
        None
    }

    /// Instantiates each hypothesis with `b` and rewrites it in an iff
    /// position; all must become non-nil constants. Syntaxp hypotheses are
    /// tested on the bound terms instead.
    pub fn relieve_hyps(&mut self, rule: &Rule, b: &Bindings, ctx: &Context) -> bool {
        if self.depth >= self.cfg.backchain_depth {
            return false;
        }
        self.depth += 1;
        let mut ok = true;
        for (i, h) in rule.hyps.iter().enumerate() {
            ok = match h {
                Hyp::Syntaxp(p) => match syntaxp_eval(p, b) {
                    Ok(v) => v,
                    Err(e) => {
                        self.diagnostics.push(format!("{}: {e}", rule.label()));
                        false
                    }
                },
                Hyp::Term(t) => {
                    let inst = t.substitute(b);
                    let r = self.rewrite(&inst, &rule.hyp_dw[i], ctx, true);
                    r.quoted().is_some_and(|v| !v.is_nil())
                }
            };
            if !ok {
                break;
            }
        }
        self.depth -= 1;
        ok
    }

    fn trace_line(&mut self, what: &str, before: &Term, after: &Term) {
        let mut path = String::new();
        if self.path.is_empty() {
            path.push_str("top");
        }
        for (k, i) in self.path.iter().enumerate() {
            if k > 0 {
                path.push('.');
            }
            let _ = write!(path, "{i}");
        }
        let hyp = if self.depth > 0 { " (hyp)" } else { "" };
        self.trace.push(format!(
            "{what} at {path}{hyp}: {} -> {} nodes",
            before.size(),
            after.size()
        ));
    }
}

/// Nodes of `out` outside the subterms it shares with the arguments of `input`.
fn fresh_nodes(out: &Term, input: &Term) -> u64 {
    let shared = input.as_app().map_or(&[][..], |(_, a)| a);
    let mut n = 0;
    let mut stack = vec![out];
    while let Some(t) = stack.pop() {
        if shared.iter().any(|s| Term::ptr_eq(s, t)) {
            continue;
        }
        if let TermKind::App(_, args) = t.kind() {
            n += 1;
            stack.extend(args.iter());
        } else if !matches!(t.kind(), TermKind::Var(_)) {
            n += 1;
        }
    }
    n
}

/// `(equal a b)` with sides equal up to `rp` wrappers is `'t`.
fn equal_refl(term: &Term) -> Option<Term> {
    match term.as_app()? {
        (h, [a, b]) if h.is("equal") && eq_modulo_rp(a, b) => Some(Term::t()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Engine;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    const LOGAND_ATTACHED: &str = "
        (def-rp-rule logand-to-4vec-bitand
          (implies (and (integerp x) (integerp y))
                   (equal (logand x y) (4vec-bitand x y))))
        (defthm logand-to-4vec-bitand-side-cond
          (implies (and (integerp x) (integerp y))
                   (integerp (4vec-bitand x y))))
        (rp-attach-sc logand-to-4vec-bitand logand-to-4vec-bitand-side-cond)";

    fn engine(text: &str) -> Engine {
        Engine::load(text, ExecRegistry::with_defaults()).unwrap()
    }

    #[test]
    fn nested_logand_golden() {
        let e = engine(LOGAND_ATTACHED);
        let ctx = Context::from_terms(
            ["(integerp x)", "(integerp y)", "(integerp a)", "(integerp b)"].map(p),
        );
        let mut rw = e.rewriter(RewriteConfig::default());
        let out = rw.rewrite_top(&p("(logand (logand x y) (logand a b))"), &ctx);
        assert_eq!(
            out,
            p("(rp 'integerp (4vec-bitand (rp 'integerp (4vec-bitand x y))
                                          (rp 'integerp (4vec-bitand a b))))")
        );
    }

    #[test]
    fn dont_rw_stops_marked_positions() {
        let e = engine("(def-rp-rule f3-def (equal (f3 x y) (g x y)))");
        let mut rw = e.rewriter(RewriteConfig::default());
        let t = p("(f1 (f2 a (f3 b c)) (f4 (f3 b c)))");
        let dw = DontRw::from_value(&crate::sexpr::read_one("(f1 (f2 x y) (f4 z))").unwrap());
        assert_eq!(rw.rewrite(&t, &dw, &Context::new(), false), t);
        let full = rw.rewrite(&t, &DontRw::default(), &Context::new(), false);
        assert_eq!(full, p("(f1 (f2 a (g b c)) (f4 (g b c)))"));
    }

    #[test]
    fn exec_folds_constants() {
        let e = engine("");
        let (out, stats) = e.rewrite(&p("(binary-logand '12 '10)"), &RewriteConfig::default());
        assert_eq!(out, p("'8"));
        assert_eq!(stats.exec_evals, 1);
        let (out, _) = e.rewrite(&p("(binary-+ x '3)"), &RewriteConfig::default());
        assert_eq!(out, p("(binary-+ x '3)"));
        let (out, _) = e.rewrite(&p("(floor '93 '10)"), &RewriteConfig::default());
        assert_eq!(out, p("'9"));
    }

    #[test]
    fn disabled_exec_is_skipped() {
        let e = engine("(disable-exec binary-+)");
        let (out, _) = e.rewrite(&p("(binary-+ '2 '3)"), &RewriteConfig::default());
        assert_eq!(out, p("(binary-+ '2 '3)"));
    }

    #[test]
    fn domain_errors_leave_term() {
        let e = Engine::load("", ExecRegistry::with_demo_witnesses()).unwrap();
        let mut reg = e.exec.clone();
        reg.set_enabled(&Symbol::new("d2"), true);
        let e = Engine { exec: reg, ..e };
        let (out, stats) = e.rewrite(&p("(d2 '3)"), &RewriteConfig::default());
        assert_eq!(out, p("(d2 '3)"));
        assert_eq!(stats.exec_errors, 1);
    }

    #[test]
    fn context_reduction() {
        let e = engine("");
        let rw = e.rewriter(RewriteConfig::default());
        let ctx = Context::from_terms([p("(p x)")]);
        assert!(rw.reduce_by_context(&p("(integerp (rp 'integerp (4vec-bitand x y)))"), &ctx).is_t());
        assert!(rw.reduce_by_context(&p("(p x)"), &ctx).is_t());
        assert!(rw.reduce_by_context(&p("(not (p x))"), &ctx).is_nil());
        assert_eq!(rw.reduce_by_context(&p("(q x)"), &ctx), p("(q x)"));
    }

    #[test]
    fn relieve_by_side_condition_without_attempts() {
        let e = engine(
            "(def-rp-rule int-bitand
               (implies (and (integerp x) (integerp y)) (integerp (4vec-bitand x y))))
             (def-rp-rule r (implies (integerp x) (equal (f x) (g x))))",
        );
        let mut rw = e.rewriter(RewriteConfig::default());
        let t = p("(f (rp 'integerp (4vec-bitand a b)))");
        let out = rw.rewrite_top(&t, &Context::new());
        assert_eq!(out, p("(g (rp 'integerp (4vec-bitand a b)))"));
        assert_eq!(rw.stats.hyp_rule_attempts, 0);
    }

    #[test]
    fn unrelieved_hyp_fails() {
        let e = engine("(def-rp-rule r (implies (evenp c) (equal (h c) (k c))))");
        let (out, stats) = e.rewrite(&p("(h c)"), &RewriteConfig::default());
        assert_eq!(out, p("(h c)"));
        assert_eq!(stats.hyp_relief_failures, 1);
    }

    #[test]
    fn if_branches() {
        let e = engine("(def-rp-rule r (implies (p2 x) (equal (foo x) (bar x))))");
        let (out, _) = e.rewrite(&p("(if 't a b)"), &RewriteConfig::default());
        assert_eq!(out, p("a"));
        let (out, _) = e.rewrite(&p("(if (p2 x) (foo x) (foo x))"), &RewriteConfig::default());
        assert_eq!(out, p("(if (p2 x) (bar x) (foo x))"));
        let (out, _) = e.rewrite(&p("(if c a a)"), &RewriteConfig::default());
        assert_eq!(out, p("(if c a a)"));
    }

    #[test]
    fn branch_side_conditions_stay_local() {
        let e = engine("(def-rp-rule r (implies (p1 x) (equal (foo y x) (bar x))))");
        let t = p("(foo (if (p2 x) (rp 'p1 x) y) x)");
        let (out, _) = e.rewrite(&t, &RewriteConfig::default());
        assert_eq!(out, t);
    }

    #[test]
    fn iff_rules_only_in_iff_positions() {
        let e = engine("(def-rp-rule i (integerp (iassoc k e)))");
        let (out, _) = e.rewrite(&p("(integerp (iassoc '1 env))"), &RewriteConfig::default());
        assert_eq!(out, p("(integerp (iassoc '1 env))"));
        let cfg = RewriteConfig { iff_top: true, ..RewriteConfig::default() };
        let (out, _) = e.rewrite(&p("(integerp (iassoc '1 env))"), &cfg);
        assert!(out.is_t());
    }

    #[test]
    fn step_limit_is_respected() {
        let e = engine("(def-rp-rule loop (equal (f x) (f (g x))))");
        let cfg = RewriteConfig { step_limit: 50, ..RewriteConfig::default() };
        let (_, stats) = e.rewrite(&p("(f a)"), &cfg);
        assert!(stats.step_limit_hit);
        assert!(stats.rewrite_calls <= 50);
    }

    #[test]
    fn strengthening_wraps_known_property() {
        let e = engine("");
        let ctx = Context::from_terms([p("(integerp (f x))")]);
        let mut rw = e.rewriter(RewriteConfig::default());
        let out = rw.rewrite_top(&p("(g (f x))"), &ctx);
        assert_eq!(out, p("(g (rp 'integerp (f x)))"));
        let mut rw = e.rewriter(RewriteConfig { side_conditions_enabled: false, ..Default::default() });
        assert_eq!(rw.rewrite_top(&p("(g (f x))"), &ctx), p("(g (f x))"));
    }

    #[test]
    fn hide_blocks_then_disappears() {
        let e = engine("(def-rp-rule r (equal (f a) (g a)))");
        let (out, _) = e.rewrite(&p("(hide (f a))"), &RewriteConfig::default());
        assert_eq!(out, p("(f a)"));
        let (out, _) = e.rewrite(&p("(hide '5)"), &RewriteConfig::default());
        assert_eq!(out, p("'5"));
    }

    #[test]
    fn falist_chain() {
        let e = engine("");
        let t = p("(hons-acons 'key1 val1 (hons-acons 'key2 val2 (hons-acons 'key3 val3 'nil)))");
        let (out, _) = e.rewrite(&t, &RewriteConfig::default());
        assert_eq!(
            out.to_string(),
            "(falist '((key1 . val1) (key2 . val2) (key3 . val3)) \
             (cons (cons 'key1 val1) (cons (cons 'key2 val2) (cons (cons 'key3 val3) 'nil))))"
        );
        let (got, stats) = e.rewrite(&Term::app("hons-get", vec![p("'key2"), t]), &RewriteConfig::default());
        assert_eq!(got, p("(cons 'key2 val2)"));
        assert_eq!(stats.shadow_probes, 1);
    }

    #[test]
    fn prove_with_hypotheses() {
        let e = engine(LOGAND_ATTACHED);
        let r = e
            .prove_text(
                "(implies (and (integerp x) (integerp y)) (integerp (logand x y)))",
                &RewriteConfig::default(),
            )
            .unwrap();
        assert!(r.proved(), "{}", r.result);
        let r = e.prove_text("(integerp (logand x y))", &RewriteConfig::default()).unwrap();
        assert_eq!(r.outcome, ProveOutcome::NotProved);
    }

    #[test]
    fn trace_records_rules() {
        let e = engine(LOGAND_ATTACHED);
        let cfg = RewriteConfig { trace: true, ..RewriteConfig::default() };
        let r = e
            .prove_text("(implies (and (integerp x) (integerp y)) (equal (logand x y) (4vec-bitand x y)))", &cfg)
            .unwrap();
        assert!(r.proved());
        assert!(r.trace.iter().any(|l| l.starts_with("logand-to-4vec-bitand at 0")), "{:?}", r.trace);
    }
}
