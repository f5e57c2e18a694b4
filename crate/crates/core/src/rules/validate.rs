use crate::syntax::rp_termp;
use crate::term::{Term, TermKind, FALIST, IF, RP, SPECIAL_HEADS};
use crate::value::{Symbol, Value};

use super::{Hyp, Rule};

/// Syntaxp predicates understood by the rewriter; every other symbol in
/// function position of a syntaxp form is an error.
const SYNTAXP_FNS: &[&str] =
    &["and", "or", "not", "if", "lexorder", "atom", "consp", "equal", "quotep", "car", "cdr"];

fn syntaxp_vars(v: &Value, out: &mut Vec<Symbol>, bad: &mut Vec<String>) {
    match v {
        Value::Sym(s) if !s.is("t") && !s.as_str().starts_with(':') => {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        Value::Cons(_) => {
            let items = v.list_items().unwrap_or_default();
            match items.first() {
                Some(Value::Sym(h)) if h.is("quote") => {}
                Some(Value::Sym(h)) if SYNTAXP_FNS.contains(&h.as_str()) => {
                    items[1..].iter().for_each(|a| syntaxp_vars(a, out, bad))
                }
                _ => bad.push(format!("unsupported syntaxp form `{v}`")),
            }
        }
        _ => {}
    }
}

/// Checks a rule against the supported-rule criteria. Returns every
/// violation found.
pub fn validate_rule(r: &Rule) -> Result<(), Vec<String>> {
    let mut v = Vec::new();
    let parts: Vec<(&str, &Term)> = std::iter::once(("lhs", &r.lhs))
        .chain(std::iter::once(("rhs", &r.rhs)))
        .chain(r.term_hyps().map(|h| ("hypothesis", h)))
        .collect();
    for (what, t) in &parts {
        if let Err(errs) = rp_termp(t) {
            v.extend(errs.into_iter().map(|e| format!("{what}: {e}")));
        }
        for w in [RP, FALIST] {
            if t.contains_head(w) {
                v.push(format!("{what} contains `{w}`, which only the engine may introduce"));
            }
        }
    }
    match r.lhs.kind() {
        TermKind::App(h, _) if SPECIAL_HEADS.contains(&h.as_str()) => {
            v.push(format!("lhs head `{h}` is reserved"))
        }
        TermKind::App(..) => {}
        _ => v.push(format!("lhs `{}` must be a function application", r.lhs)),
    }
    if r.lhs.contains_head(IF) {
        v.push("lhs contains `if`".to_string());
    }
    let bound = r.lhs.free_vars();
    let mut used: Vec<(&str, Symbol)> = Vec::new();
    used.extend(r.rhs.free_vars().into_iter().map(|s| ("rhs", s)));
    for h in &r.hyps {
        match h {
            Hyp::Term(t) => used.extend(t.free_vars().into_iter().map(|s| ("hypothesis", s))),
            Hyp::Syntaxp(p) => {
                let mut vars = Vec::new();
                let mut bad = Vec::new();
                syntaxp_vars(p, &mut vars, &mut bad);
                v.extend(bad);
                used.extend(vars.into_iter().map(|s| ("syntaxp", s)));
            }
        }
    }
    for (what, s) in used {
        if !bound.contains(&s) {
            v.push(format!("{what} variable `{s}` does not occur in the lhs (free variable)"));
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        v.dedup();
        Err(v)
    }
}
