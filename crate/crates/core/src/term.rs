//! Term trees. Terms are immutable and cheaply cloned; structurally equal
//! subterms may share storage.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::falist::Shadow;
use crate::value::{Symbol, Value};

pub const RP: &str = "rp";
pub const FALIST: &str = "falist";
pub const HIDE: &str = "hide";
pub const LIST: &str = "list";
pub const IF: &str = "if";
pub const NOT: &str = "not";
pub const QUOTE: &str = "quote";

/// Heads the engine manages itself; user rules may not have these as the
/// head of a left-hand side.
pub const SPECIAL_HEADS: &[&str] = &[RP, FALIST, HIDE, LIST, IF, QUOTE, "synp"];

#[derive(Clone)]
pub struct Term(Arc<TermKind>);

pub enum TermKind {
    Var(Symbol),
    Quote(Value),
    /// A quoted shadow alist, carrying a constant-time index. Semantically
    /// identical to `Quote(shadow.alist)`.
    Shadow(Shadow),
    App(Symbol, Vec<Term>),
    /// `((lambda formals body) args...)`, only present before beta reduction.
    Lambda(Lambda),
}

pub struct Lambda {
    pub formals: Vec<Symbol>,
    pub body: Term,
    pub args: Vec<Term>,
}

/// Variable bindings produced by matching; small, so a vector.
pub type Bindings = Vec<(Symbol, Term)>;

pub fn lookup<'a>(b: &'a Bindings, v: &Symbol) -> Option<&'a Term> {
    b.iter().find(|(k, _)| k == v).map(|(_, t)| t)
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        Term(Arc::new(kind))
    }

    pub fn var(name: &str) -> Term {
        Term::new(TermKind::Var(Symbol::new(name)))
    }

    pub fn quote(v: Value) -> Term {
        Term::new(TermKind::Quote(v))
    }

    pub fn t() -> Term {
        Term::quote(Value::t())
    }

    pub fn nil() -> Term {
        Term::quote(Value::Nil)
    }

    pub fn app(head: impl Into<Symbol>, args: Vec<Term>) -> Term {
        Term::new(TermKind::App(head.into(), args))
    }

    pub fn rp(prop: &Symbol, payload: Term) -> Term {
        Term::app(RP, vec![Term::quote(Value::Sym(prop.clone())), payload])
    }

    pub fn kind(&self) -> &TermKind {
        &self.0
    }

    pub fn ptr_eq(a: &Term, b: &Term) -> bool {
        Arc::ptr_eq(&a.0, &b.0)
    }

    pub fn as_var(&self) -> Option<&Symbol> {
        match self.kind() {
            TermKind::Var(v) => Some(v),
            _ => None,
        }
    }

    /// The value of a quoted constant (including shadow alists).
    pub fn quoted(&self) -> Option<&Value> {
        match self.kind() {
            TermKind::Quote(v) => Some(v),
            TermKind::Shadow(s) => Some(&s.alist),
            _ => None,
        }
    }

    pub fn is_quote(&self) -> bool {
        self.quoted().is_some()
    }

    pub fn is_t(&self) -> bool {
        self.quoted().is_some_and(Value::is_t)
    }

    pub fn is_nil(&self) -> bool {
        self.quoted().is_some_and(Value::is_nil)
    }

    pub fn as_app(&self) -> Option<(&Symbol, &[Term])> {
        match self.kind() {
            TermKind::App(h, args) => Some((h, args)),
            _ => None,
        }
    }

    pub fn head(&self) -> Option<&Symbol> {
        self.as_app().map(|(h, _)| h)
    }

    pub fn head_is(&self, name: &str) -> bool {
        self.head().is_some_and(|h| h.is(name))
    }

    /// `(rp 'prop x)` → `(prop, x)`, when well-formed.
    pub fn as_rp(&self) -> Option<(&Symbol, &Term)> {
        let (h, args) = self.as_app()?;
        if !h.is(RP) || args.len() != 2 {
            return None;
        }
        match args[0].quoted() {
            Some(Value::Sym(p)) => Some((p, &args[1])),
            _ => None,
        }
    }

    /// Peels `rp` wrappers off the top of the term.
    pub fn strip_rp(&self) -> &Term {
        let mut cur = self;
        while let Some((_, x)) = cur.as_rp() {
            cur = x;
        }
        cur
    }

    /// Properties attached to the top of this term, outermost first.
    pub fn rp_props(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some((p, x)) = cur.as_rp() {
            out.push(p);
            cur = x;
        }
        out
    }

    /// Removes every `rp` wrapper in the tree.
    pub fn strip_rp_deep(&self) -> Term {
        let t = self.strip_rp();
        match t.kind() {
            TermKind::App(h, args) => {
                let new: Vec<Term> = args.iter().map(Term::strip_rp_deep).collect();
                if new.iter().zip(args).all(|(a, b)| Term::ptr_eq(a, b)) {
                    t.clone()
                } else {
                    Term::app(h.clone(), new)
                }
            }
            _ => t.clone(),
        }
    }

    /// Number of nodes (variables, constants and applications).
    pub fn size(&self) -> usize {
        match self.kind() {
            TermKind::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            TermKind::Lambda(l) => {
                1 + l.body.size() + l.args.iter().map(Term::size).sum::<usize>()
            }
            _ => 1,
        }
    }

    pub fn contains_head(&self, name: &str) -> bool {
        match self.kind() {
            TermKind::App(h, args) => h.is(name) || args.iter().any(|a| a.contains_head(name)),
            TermKind::Lambda(l) => {
                l.body.contains_head(name) || l.args.iter().any(|a| a.contains_head(name))
            }
            _ => false,
        }
    }

    pub fn contains_lambda(&self) -> bool {
        match self.kind() {
            TermKind::App(_, args) => args.iter().any(Term::contains_lambda),
            TermKind::Lambda(_) => true,
            _ => false,
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Symbol>) {
        match self.kind() {
            TermKind::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            TermKind::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            TermKind::Lambda(l) => {
                l.args.iter().for_each(|a| a.collect_vars(out));
                for v in l.body.free_vars() {
                    if !l.formals.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            TermKind::Quote(_) | TermKind::Shadow(_) => {}
        }
    }

    /// Every function symbol used as an application head.
    pub fn heads(&self, out: &mut Vec<Symbol>) {
        match self.kind() {
            TermKind::App(h, args) => {
                if !out.contains(h) {
                    out.push(h.clone());
                }
                args.iter().for_each(|a| a.heads(out));
            }
            TermKind::Lambda(l) => {
                l.body.heads(out);
                l.args.iter().for_each(|a| a.heads(out));
            }
            _ => {}
        }
    }

    /// Simultaneous substitution of variables. Lambda bodies are closed
    /// over their formals, so substitution does not enter them except for
    /// free occurrences.
    pub fn substitute(&self, b: &Bindings) -> Term {
        match self.kind() {
            TermKind::Var(v) => lookup(b, v).cloned().unwrap_or_else(|| self.clone()),
            TermKind::App(h, args) => {
                Term::app(h.clone(), args.iter().map(|a| a.substitute(b)).collect())
            }
            TermKind::Lambda(l) => {
                let inner: Bindings = b
                    .iter()
                    .filter(|(k, _)| !l.formals.contains(k))
                    .cloned()
                    .collect();
                Term::new(TermKind::Lambda(Lambda {
                    formals: l.formals.clone(),
                    body: l.body.substitute(&inner),
                    args: l.args.iter().map(|a| a.substitute(b)).collect(),
                }))
            }
            TermKind::Quote(_) | TermKind::Shadow(_) => self.clone(),
        }
    }

    /// The term's own s-expression representation, as seen by `syntaxp`.
    pub fn to_value(&self) -> Value {
        match self.kind() {
            TermKind::Var(v) => Value::Sym(v.clone()),
            TermKind::Quote(_) | TermKind::Shadow(_) => {
                Value::list([Value::sym(QUOTE), self.quoted().unwrap().clone()])
            }
            TermKind::App(h, args) => Value::cons(
                Value::Sym(h.clone()),
                Value::list(args.iter().map(Term::to_value).collect::<Vec<_>>()),
            ),
            TermKind::Lambda(l) => {
                let lam = Value::list([
                    Value::sym("lambda"),
                    Value::list(l.formals.iter().map(|f| Value::Sym(f.clone())).collect::<Vec<_>>()),
                    l.body.to_value(),
                ]);
                Value::cons(
                    lam,
                    Value::list(l.args.iter().map(Term::to_value).collect::<Vec<_>>()),
                )
            }
        }
    }
}

/// Structural equality ignoring every `rp` wrapper.
pub fn eq_modulo_rp(a: &Term, b: &Term) -> bool {
    let (a, b) = (a.strip_rp(), b.strip_rp());
    if Term::ptr_eq(a, b) {
        return true;
    }
    match (a.kind(), b.kind()) {
        (TermKind::App(h1, a1), TermKind::App(h2, a2)) => {
            h1 == h2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| eq_modulo_rp(x, y))
        }
        _ => a == b,
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if Term::ptr_eq(self, other) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Var(a), TermKind::Var(b)) => a == b,
            (TermKind::App(h1, a1), TermKind::App(h2, a2)) => h1 == h2 && a1 == a2,
            (TermKind::Lambda(l1), TermKind::Lambda(l2)) => {
                l1.formals == l2.formals && l1.body == l2.body && l1.args == l2.args
            }
            _ => match (self.quoted(), other.quoted()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.kind() {
            TermKind::Var(v) => {
                0u8.hash(state);
                v.hash(state);
            }
            TermKind::Quote(_) | TermKind::Shadow(_) => {
                1u8.hash(state);
                self.quoted().hash(state);
            }
            TermKind::App(h, args) => {
                2u8.hash(state);
                h.hash(state);
                args.hash(state);
            }
            TermKind::Lambda(l) => {
                3u8.hash(state);
                l.formals.hash(state);
                l.body.hash(state);
                l.args.hash(state);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
