//! Meta rules: native term transformations keyed on a head symbol.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::dontrw::DontRw;
use crate::error::RuleError;
use crate::eval::{eval_term, hons_assoc, ExecRegistry};
use crate::falist::as_falist;
use crate::rewriter::{RewriteConfig, RewriteStats};
use crate::syntax::rp_termp;
use crate::term::{Term, TermKind, FALIST, NOT, QUOTE, RP, SPECIAL_HEADS};
use crate::validator;
use crate::value::{Symbol, Value};

/// Returns the new term and optionally its dont-rw; `None` means "no
/// change". May bump counters in the stats it is handed.
pub type MetaFn = Arc<dyn Fn(&Term, &mut RewriteStats) -> Option<(Term, Option<DontRw>)> + Send + Sync>;

#[derive(Clone)]
pub struct MetaRule {
    pub name: Symbol,
    pub trigger: Symbol,
    pub func: MetaFn,
    /// Skip the syntax check on outputs.
    pub trusted_syntax: bool,
}

impl MetaRule {
    pub fn new<F>(name: &str, trigger: &str, trusted_syntax: bool, f: F) -> MetaRule
    where
        F: Fn(&Term, &mut RewriteStats) -> Option<(Term, Option<DontRw>)> + Send + Sync + 'static,
    {
        MetaRule {
            name: Symbol::new(name),
            trigger: Symbol::new(trigger),
            func: Arc::new(f),
            trusted_syntax,
        }
    }
}

impl fmt::Debug for MetaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetaRule({} on {})", self.name, self.trigger)
    }
}

#[derive(Clone, Debug, Default)]
pub struct MetaRegistry {
    by_trigger: HashMap<Symbol, Vec<Arc<MetaRule>>>,
    names: Vec<Symbol>,
}

impl MetaRegistry {
    pub fn new() -> Self {
        MetaRegistry::default()
    }

    /// Later registrations for a trigger are tried first.
    pub fn register(&mut self, m: MetaRule) -> Result<(), RuleError> {
        if [RP, FALIST, QUOTE].contains(&m.trigger.as_str()) {
            return Err(RuleError::Meta {
                name: m.name.clone(),
                msg: format!("`{}` is managed by the engine and cannot trigger a meta rule", m.trigger),
            });
        }
        if self.names.contains(&m.name) {
            return Err(RuleError::Duplicate { kind: "meta rule", name: m.name.clone() });
        }
        self.names.push(m.name.clone());
        self.by_trigger.entry(m.trigger.clone()).or_default().insert(0, Arc::new(m));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn candidates<'a>(&'a self, head: &Symbol) -> impl Iterator<Item = &'a MetaRule> + 'a {
        self.by_trigger.get(head).into_iter().flatten().map(|m| &**m)
    }
}

fn unknown_head(out: &Term, input: &Term, exec: &ExecRegistry) -> Option<Symbol> {
    let shared = input.as_app().map_or(&[][..], |(_, a)| a);
    let mut seen: Vec<Symbol> = Vec::new();
    let mut known = None;
    let mut stack = vec![out];
    while let Some(t) = stack.pop() {
        if shared.iter().any(|s| Term::ptr_eq(s, t)) {
            continue;
        }
        let TermKind::App(h, args) = t.kind() else { continue };
        stack.extend(args.iter());
        if seen.contains(h) || exec.contains(h) || SPECIAL_HEADS.contains(&h.as_str()) || h.is(NOT) {
            continue;
        }
        seen.push(h.clone());
        let known = known.get_or_insert_with(|| {
            let mut v = Vec::new();
            input.heads(&mut v);
            v
        });
        if !known.contains(h) {
            return Some(h.clone());
        }
    }
    None
}

const SPOT_SAMPLES: u64 = 4;

fn spot_check(input: &Term, out: &Term, exec: &ExecRegistry) -> bool {
    let mut vars = input.free_vars();
    for v in out.free_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    (0..SPOT_SAMPLES).all(|seed| {
        let env = validator::sample_env_seeded(&vars, seed);
        let same = match (eval_term(input, &env, exec), eval_term(out, &env, exec)) {
            (Ok(a), Ok(b)) => a == b,
            _ => true,
        };
        let sc = !validator::valid_sc(input, &env, exec) || validator::valid_sc(out, &env, exec);
        same && sc
    })
}

/// Tries every meta rule registered for the head of `t`. An output is
/// discarded when it fails the syntax check (unless trusted), mentions a
/// function unknown to the evaluator that did not occur in the input, or
/// fails the optional sampling spot check.
pub fn apply_meta(
    t: &Term,
    metas: &MetaRegistry,
    exec: &ExecRegistry,
    cfg: &RewriteConfig,
    stats: &mut RewriteStats,
    diagnostics: &mut Vec<String>,
) -> Option<(Term, DontRw)> {
    let h = t.head()?;
    for m in metas.candidates(h) {
        let Some((out, dw)) = (m.func)(t, stats) else { continue };
        if out == *t {
            continue;
        }
        if !m.trusted_syntax {
            if let Err(v) = rp_termp(&out) {
                stats.meta_rejections += 1;
                diagnostics.push(format!("meta `{}` output rejected: {}", m.name, v.join("; ")));
                continue;
            }
        }
        if let Some(f) = unknown_head(&out, t, exec) {
            stats.meta_rejections += 1;
            diagnostics.push(format!("meta `{}` output uses unknown function `{f}`", m.name));
            continue;
        }
        if cfg.meta_spot_check && !spot_check(t, &out, exec) {
            stats.meta_rejections += 1;
            diagnostics.push(format!("meta `{}` output failed the sampling check", m.name));
            continue;
        }
        stats.meta_applications += 1;
        return Some((out, dw.unwrap_or_default()));
    }
    None
}

fn ifix(v: &Value) -> BigInt {
    v.as_int().cloned().unwrap_or_default()
}

/// `(binary-+ 'c1 (binary-+ 'c2 x))` → `(binary-+ 'c1+c2 x)`.
fn fold_plus(t: &Term, _: &mut RewriteStats) -> Option<(Term, Option<DontRw>)> {
    let (_, a) = t.as_app()?;
    let [c1, inner] = a else { return None };
    let c1 = c1.strip_rp().quoted()?;
    let (h, b) = inner.strip_rp().as_app()?;
    let [c2, rest] = b else { return None };
    if !h.is("binary-+") {
        return None;
    }
    let c2 = c2.strip_rp().quoted()?;
    let sum = Term::quote(Value::Int(ifix(c1) + ifix(c2)));
    Some((Term::app("binary-+", vec![sum, rest.clone()]), Some(DontRw::stop())))
}

/// Looks `(hons-get 'k AL)` up by walking the alist term, one counted
/// visit per node.
fn hons_get_scan(t: &Term, stats: &mut RewriteStats) -> Option<(Term, Option<DontRw>)> {
    let (_, a) = t.as_app()?;
    let [k, al] = a else { return None };
    let key = k.strip_rp().quoted()?;
    let found = |v: &Term| Some((Term::app("cons", vec![k.clone(), v.clone()]), Some(DontRw::stop())));
    let mut cur = al.strip_rp();
    loop {
        stats.alist_node_visits += 1;
        if let Some((_, logical)) = as_falist(cur) {
            cur = logical.strip_rp();
            continue;
        }
        if let Some(v) = cur.quoted() {
            stats.alist_node_visits += v.list_items().map_or(0, |i| i.len() as u64);
            return Some((Term::quote(hons_assoc(key, v)), Some(DontRw::stop())));
        }
        let (h, args) = cur.as_app()?;
        match (h.as_str(), args) {
            ("hons-acons", [k2, v2, rest]) => {
                if k2.strip_rp().quoted()? == key {
                    return found(v2);
                }
                cur = rest.strip_rp();
            }
            ("cons", [entry, rest]) => {
                let entry = entry.strip_rp();
                if let Some((ek, ev)) = entry.quoted().and_then(Value::as_cons) {
                    if ek == key {
                        return found(&Term::quote(ev.clone()));
                    }
                } else {
                    let (eh, ea) = entry.as_app()?;
                    let [k2, v2] = ea else { return None };
                    if !eh.is("cons") {
                        return None;
                    }
                    if k2.strip_rp().quoted()? == key {
                        return found(v2);
                    }
                }
                cur = rest.strip_rp();
            }
            _ => return None,
        }
    }
}

/// `(gets '(k1 .. kn) AL)` → `(cons (hons-get 'k1 AL) (cons .. 'nil))`,
/// with every `AL` marked as already rewritten.
fn expand_gets(t: &Term, _: &mut RewriteStats) -> Option<(Term, Option<DontRw>)> {
    let (_, a) = t.as_app()?;
    let [keys, al] = a else { return None };
    let keys = keys.quoted()?.list_items()?;
    let get_dw = DontRw::node(vec![DontRw::Leaf(false), DontRw::stop(), DontRw::stop()]);
    let mut term = Term::nil();
    let mut dw = DontRw::stop();
    for k in keys.into_iter().rev() {
        let get = Term::app("hons-get", vec![Term::quote(k), al.clone()]);
        term = Term::app("cons", vec![get, term]);
        dw = DontRw::node(vec![DontRw::Leaf(false), get_dw.clone(), dw]);
    }
    Some((term, Some(dw)))
}

/// Names of the shipped meta rules.
pub const CATALOG: &[&str] = &["fold-plus", "hons-get-scan", "expand-gets"];

/// A shipped meta rule by name.
pub fn catalog(name: &str) -> Option<MetaRule> {
    Some(match name {
        "fold-plus" => MetaRule::new(name, "binary-+", true, fold_plus),
        "hons-get-scan" => MetaRule::new(name, "hons-get", true, hons_get_scan),
        "expand-gets" => MetaRule::new(name, "gets", true, expand_gets),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn run(name: &str, t: &str) -> Option<(Term, Option<DontRw>)> {
        (catalog(name).unwrap().func)(&p(t), &mut RewriteStats::default())
    }

    #[test]
    fn fold_plus_folds() {
        let (t, dw) = run("fold-plus", "(binary-+ '1 (binary-+ '2 x))").unwrap();
        assert_eq!(t, p("(binary-+ '3 x)"));
        assert!(dw.unwrap().is_stop());
        assert!(run("fold-plus", "(binary-+ y (binary-+ '2 x))").is_none());
    }

    #[test]
    fn registry_rules() {
        let mut r = MetaRegistry::new();
        r.register(catalog("fold-plus").unwrap()).unwrap();
        assert_eq!(r.len(), 1);
        assert!(matches!(r.register(catalog("fold-plus").unwrap()), Err(RuleError::Duplicate { .. })));
        let bad = MetaRule::new("m", RP, false, |_, _| None);
        assert!(matches!(r.register(bad), Err(RuleError::Meta { .. })));
    }

    #[test]
    fn later_registration_first() {
        let mut r = MetaRegistry::new();
        r.register(MetaRule::new("a", "f", true, |_, _| None)).unwrap();
        r.register(MetaRule::new("b", "f", true, |_, _| None)).unwrap();
        let names: Vec<_> = r.candidates(&Symbol::new("f")).map(|m| m.name.to_string()).collect();
        assert_eq!(names, ["b", "a"]);
    }

    #[test]
    fn scan_counts_visits() {
        let mut stats = RewriteStats::default();
        let t = p("(hons-get 'c (hons-acons 'a x (hons-acons 'b y (hons-acons 'c z 'nil))))");
        let (out, _) = hons_get_scan(&t, &mut stats).unwrap();
        assert_eq!(out, p("(cons 'c z)"));
        assert_eq!(stats.alist_node_visits, 3);
        let t = p("(hons-get 'd (hons-acons 'a x 'nil))");
        assert_eq!(hons_get_scan(&t, &mut stats).unwrap().0, Term::nil());
    }

    #[test]
    fn scan_stops_on_symbolic_key() {
        let t = p("(hons-get 'c (hons-acons k x (hons-acons 'c z 'nil)))");
        assert!(hons_get_scan(&t, &mut RewriteStats::default()).is_none());
    }

    #[test]
    fn gets_expands() {
        let (t, dw) = run("expand-gets", "(gets '(a b) al)").unwrap();
        assert_eq!(t, p("(cons (hons-get 'a al) (cons (hons-get 'b al) 'nil))"));
        assert_eq!(format!("{:?}", dw.unwrap()), "(nil (nil t t) (nil (nil t t) t))");
    }

    #[test]
    fn untrusted_bad_output_rejected() {
        let mut metas = MetaRegistry::new();
        metas
            .register(MetaRule::new("bad", "f", false, |_, _| {
                Some((Term::app(RP, vec![Term::var("x"), Term::var("y")]), None))
            }))
            .unwrap();
        let mut stats = RewriteStats::default();
        let mut diags = Vec::new();
        let reg = ExecRegistry::with_defaults();
        let out = apply_meta(&p("(f x y)"), &metas, &reg, &RewriteConfig::default(), &mut stats, &mut diags);
        assert!(out.is_none());
        assert_eq!(stats.meta_rejections, 1);
        assert!(diags[0].contains("quoted non-nil symbol"), "{diags:?}");
    }

    #[test]
    fn unknown_function_rejected() {
        let mut metas = MetaRegistry::new();
        metas
            .register(MetaRule::new("m", "f", true, |t, _| {
                Some((Term::app("mystery", vec![t.clone()]), None))
            }))
            .unwrap();
        let mut stats = RewriteStats::default();
        let reg = ExecRegistry::with_defaults();
        let out = apply_meta(&p("(f x)"), &metas, &reg, &RewriteConfig::default(), &mut stats, &mut vec![]);
        assert!(out.is_none());
    }
}
