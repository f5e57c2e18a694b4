use std::collections::{HashMap, HashSet};

use crate::error::{ParseError, RuleError};
use crate::eval::ExecRegistry;
use crate::meta::MetaRegistry;
use crate::rewriter::{Context, ProveReport, RewriteConfig, RewriteStats, Rewriter};
use crate::syntax::parse_term;
use crate::term::{Term, TermKind, HIDE};
use crate::value::Symbol;

use super::attach::{attach_sc, occurs};
use super::lambda::defthm_lambda;
use super::validate::validate_rule;
use super::{Decl, Definition, Equiv, Rule, RuleSet, SideConditionLemma};

/// Builds a rule set from declarations in file order. Later rules for the
/// same head are tried first.
pub fn build_ruleset(decls: &[Decl]) -> Result<RuleSet, RuleError> {
    build_into(RuleSet::new(), decls)
}

fn checked(rule: Rule) -> Result<Rule, RuleError> {
    validate_rule(&rule).map_err(|violations| RuleError::Invalid { rule: rule.label(), violations })?;
    Ok(rule)
}

fn claim(names: &mut HashSet<Symbol>, kind: &'static str, name: &Symbol) -> Result<(), RuleError> {
    if names.insert(name.clone()) {
        Ok(())
    } else {
        Err(RuleError::Duplicate { kind, name: name.clone() })
    }
}

fn build_into(mut rs: RuleSet, decls: &[Decl]) -> Result<RuleSet, RuleError> {
    let mut names: HashSet<Symbol> = rs.rules().map(|r| r.name.clone()).collect();
    let mut lemmas: HashMap<Symbol, SideConditionLemma> = HashMap::new();
    let mut defuns: HashMap<Symbol, (Vec<Symbol>, Term)> = HashMap::new();
    for d in decls {
        match d {
            Decl::Rules { name, rules } => {
                claim(&mut names, "rule", name)?;
                for r in rules {
                    rs.push(checked(r.clone())?);
                }
            }
            Decl::AddDefinition { name } => {
                let (formals, body) = defuns
                    .get(name)
                    .ok_or_else(|| RuleError::Unknown { kind: "function", name: name.clone() })?;
                claim(&mut names, "rule", name)?;
                let lhs = Term::app(
                    name.clone(),
                    formals.iter().map(|f| Term::new(TermKind::Var(f.clone()))).collect(),
                );
                rs.push(checked(Rule::new(name.clone(), vec![], lhs, body.clone(), Equiv::Equal))?);
            }
            Decl::Lemma(l) => {
                claim(&mut names, "lemma", &l.name)?;
                lemmas.insert(l.name.clone(), l.clone());
                rs.lemmas.push(l.clone());
            }
            Decl::Attach { rule, lemma } => {
                let lem = lemmas
                    .get(lemma)
                    .ok_or_else(|| RuleError::Unknown { kind: "lemma", name: lemma.clone() })?;
                let mut seen = false;
                let mut hit = false;
                for r in rs.rules_mut().filter(|r| &r.name == rule) {
                    seen = true;
                    if occurs(&r.sc_wrapped_rhs, &lem.subject) {
                        *r = attach_sc(r, lem)?;
                        hit = true;
                    }
                }
                if !seen {
                    return Err(RuleError::Unknown { kind: "rule", name: rule.clone() });
                }
                if !hit {
                    return Err(RuleError::Attach {
                        rule: rule.clone(),
                        lemma: lemma.clone(),
                        msg: format!("`{}` does not occur in the rule's rhs", lem.subject),
                    });
                }
            }
            Decl::Lambda { name, hyps, lhs, rhs, equiv } => {
                let split = defthm_lambda(name, hyps.clone(), lhs.clone(), rhs, *equiv)?;
                if let Some(op) = &split.opener_name {
                    claim(&mut names, "rule", op)?;
                }
                claim(&mut names, "rule", name)?;
                for f in &split.functions {
                    if defuns.contains_key(&f.name) {
                        return Err(RuleError::Duplicate { kind: "function", name: f.name.clone() });
                    }
                    defuns.insert(f.name.clone(), (f.formals.clone(), f.body.clone()));
                    rs.definitions.push(f.clone());
                }
                for r in split.openers {
                    rs.push(checked(r)?);
                }
                rs.push(checked(split.main)?);
            }
            Decl::DisableExec(f) => {
                rs.exec_disabled.insert(f.clone());
            }
            Decl::EnableRule(name, flag) => {
                let mut seen = false;
                for r in rs.rules_mut().filter(|r| &r.name == name) {
                    r.enabled = *flag;
                    seen = true;
                }
                if !seen {
                    return Err(RuleError::Unknown { kind: "rule", name: name.clone() });
                }
            }
            Decl::Defun { name, formals, body } => {
                if defuns.insert(name.clone(), (formals.clone(), body.clone())).is_some() {
                    return Err(RuleError::Duplicate { kind: "function", name: name.clone() });
                }
                rs.definitions.push(Definition {
                    name: name.clone(),
                    formals: formals.clone(),
                    body: body.clone(),
                    executable: true,
                });
            }
            Decl::Meta(name) => {
                if rs.meta_names.contains(name) {
                    return Err(RuleError::Duplicate { kind: "meta rule", name: name.clone() });
                }
                rs.meta_names.push(name.clone());
            }
        }
    }
    Ok(rs)
}

/// The shipped `(hide x) → x` rule. `hide` is reserved for user rules, so
/// this one is built directly.
pub(crate) fn hide_elim() -> Rule {
    Rule::new(
        Symbol::new("hide-elim"),
        vec![],
        Term::app(HIDE, vec![Term::var("x")]),
        Term::var("x"),
        Equiv::Equal,
    )
}

/// A rule set together with the evaluators and meta rules it runs with.
#[derive(Clone, Debug)]
pub struct Engine {
    pub rules: RuleSet,
    pub exec: ExecRegistry,
    pub metas: MetaRegistry,
}

impl Engine {
    /// Builds an engine from declarations. The shipped `hide-elim` rule is
    /// installed first, definitions are registered as evaluators and meta
    /// rules are resolved from the shipped catalog.
    pub fn from_decls(decls: &[Decl], mut exec: ExecRegistry) -> Result<Engine, RuleError> {
        let mut prelude = RuleSet::new();
        prelude.push(hide_elim());
        let rules = build_into(prelude, decls)?;
        for d in &rules.definitions {
            exec.define(&d.name, &d.formals, &d.body);
            if !d.executable {
                exec.set_enabled(&d.name, false);
            }
        }
        let mut metas = MetaRegistry::new();
        for name in &rules.meta_names {
            let m = crate::meta::catalog(name.as_str())
                .ok_or_else(|| RuleError::Unknown { kind: "meta rule", name: name.clone() })?;
            metas.register(m)?;
        }
        Ok(Engine { rules, exec, metas })
    }

    pub fn load(text: &str, exec: ExecRegistry) -> Result<Engine, RuleError> {
        Engine::from_decls(&super::parse_rule_file(text)?, exec)
    }

    pub fn rewriter(&self, cfg: RewriteConfig) -> Rewriter<'_> {
        Rewriter::new(&self.rules, &self.exec, &self.metas, cfg)
    }

    /// Rewrites `t` with no known facts.
    pub fn rewrite(&self, t: &Term, cfg: &RewriteConfig) -> (Term, RewriteStats) {
        let mut rw = self.rewriter(cfg.clone());
        let out = rw.rewrite_top(t, &Context::new());
        (out, rw.stats)
    }

    /// Tries to rewrite a conjecture to `'t`. A top-level `(implies H C)`
    /// contributes the conjuncts of `H` as known facts.
    pub fn prove(&self, conjecture: &Term, cfg: &RewriteConfig) -> Result<ProveReport, ParseError> {
        self.rewriter(cfg.clone()).prove(conjecture)
    }

    pub fn prove_text(&self, text: &str, cfg: &RewriteConfig) -> Result<ProveReport, ParseError> {
        self.prove(&parse_term(text)?, cfg)
    }
}
