//! Rewrite rules, side-condition lemmas and rule sets.

mod attach;
mod build;
mod lambda;
mod parse;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub use attach::attach_sc;
pub use build::{build_ruleset, Engine};
pub use lambda::{defthm_lambda, LambdaSplit};
pub use parse::{parse_rule_file, Decl};
pub use validate::validate_rule;

use crate::dontrw::DontRw;
use crate::term::Term;
use crate::value::{Symbol, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equiv {
    Equal,
    Iff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hyp {
    Term(Term),
    /// A syntactic test over the bound terms, kept as its s-expression.
    Syntaxp(Value),
}

impl fmt::Display for Hyp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyp::Term(t) => write!(f, "{t}"),
            Hyp::Syntaxp(v) => write!(f, "(syntaxp {v})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub name: Symbol,
    /// Position within a multi-conjunct declaration.
    pub part: usize,
    pub hyps: Vec<Hyp>,
    pub lhs: Term,
    pub rhs: Term,
    pub equiv: Equiv,
    pub sc_wrapped_rhs: Term,
    /// Side-condition lemmas merged into `sc_wrapped_rhs`, in order.
    pub attachments: Vec<Symbol>,
    pub enabled: bool,
    pub(crate) rhs_dw: DontRw,
    pub(crate) sc_dw: DontRw,
    pub(crate) hyp_dw: Vec<DontRw>,
}

impl Rule {
    pub fn new(name: Symbol, hyps: Vec<Hyp>, lhs: Term, rhs: Term, equiv: Equiv) -> Rule {
        let mut r = Rule {
            name,
            part: 0,
            hyps,
            lhs,
            sc_wrapped_rhs: rhs.clone(),
            rhs,
            equiv,
            attachments: Vec::new(),
            enabled: true,
            rhs_dw: DontRw::default(),
            sc_dw: DontRw::default(),
            hyp_dw: Vec::new(),
        };
        r.refresh();
        r
    }

    /// Recomputes the dont-rw templates after a field changed.
    pub(crate) fn refresh(&mut self) {
        self.rhs_dw = DontRw::from_template(&self.rhs);
        self.sc_dw = DontRw::from_template(&self.sc_wrapped_rhs);
        self.hyp_dw = self
            .hyps
            .iter()
            .map(|h| match h {
                Hyp::Term(t) => DontRw::from_template(t),
                Hyp::Syntaxp(_) => DontRw::stop(),
            })
            .collect();
    }

    /// `name`, or `name.k` for later parts of a multi-conjunct rule.
    pub fn label(&self) -> String {
        if self.part == 0 {
            self.name.to_string()
        } else {
            format!("{}.{}", self.name, self.part)
        }
    }

    pub fn term_hyps(&self) -> impl Iterator<Item = &Term> {
        self.hyps.iter().filter_map(|h| match h {
            Hyp::Term(t) => Some(t),
            Hyp::Syntaxp(_) => None,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.equiv {
            Equiv::Equal => "equal",
            Equiv::Iff => "iff",
        };
        write!(f, "{}: ", self.label())?;
        if !self.hyps.is_empty() {
            write!(f, "(implies (and")?;
            for h in &self.hyps {
                write!(f, " {h}")?;
            }
            write!(f, ") ")?;
        }
        write!(f, "({rel} {} {})", self.lhs, self.sc_wrapped_rhs)?;
        if !self.hyps.is_empty() {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideConditionLemma {
    pub name: Symbol,
    pub hyps: Vec<Hyp>,
    pub prop: Symbol,
    pub subject: Term,
}

/// A function introduced by a rule file, registered for evaluation.
#[derive(Clone, Debug)]
pub struct Definition {
    pub name: Symbol,
    pub formals: Vec<Symbol>,
    pub body: Term,
    /// Whether the rewriter may execute it on constant arguments.
    pub executable: bool,
}

#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    rules: Vec<Arc<Rule>>,
    /// Per head symbol, rule indices with the most recent first.
    index: HashMap<Symbol, Vec<usize>>,
    pub lemmas: Vec<SideConditionLemma>,
    pub exec_disabled: BTreeSet<Symbol>,
    pub definitions: Vec<Definition>,
    pub meta_names: Vec<Symbol>,
}

impl RuleSet {
    pub fn new() -> Self {
        RuleSet::default()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().map(|r| &**r)
    }

    pub(crate) fn push(&mut self, rule: Rule) {
        let head = rule.lhs.head().expect("validated lhs is an application").clone();
        self.rules.push(Arc::new(rule));
        self.index.entry(head).or_default().insert(0, self.rules.len() - 1);
    }

    pub(crate) fn rules_mut(&mut self) -> impl Iterator<Item = &mut Rule> {
        self.rules.iter_mut().map(Arc::make_mut)
    }

    /// Candidate rules for a head symbol in trial order.
    pub fn candidates<'a>(&'a self, head: &Symbol) -> impl Iterator<Item = &'a Rule> + 'a {
        self.index
            .get(head)
            .into_iter()
            .flatten()
            .map(move |&i| &*self.rules[i])
    }

    pub fn find(&self, name: &str) -> impl Iterator<Item = &Rule> {
        let name = name.to_string();
        self.rules().filter(move |r| r.name.as_str() == name)
    }

    pub fn attachment_count(&self) -> usize {
        self.rules().map(|r| r.attachments.len()).sum()
    }

    pub fn exec_enabled(&self, f: &Symbol) -> bool {
        !self.exec_disabled.contains(f)
    }
}
