use crate::error::RuleError;
use crate::sexpr;
use crate::syntax::{beta_reduce, translate};
use crate::term::{Term, SPECIAL_HEADS};
use crate::value::{Symbol, Value};

use super::{Equiv, Hyp, Rule, SideConditionLemma};

/// One top-level event of a rule file.
#[derive(Clone, Debug)]
pub enum Decl {
    /// `def-rp-rule`, or `add-rp-rule` with a statement. One rule per
    /// conjunct of the conclusion.
    Rules { name: Symbol, rules: Vec<Rule> },
    /// `(add-rp-rule f)` for a function introduced by `defun`.
    AddDefinition { name: Symbol },
    Lemma(SideConditionLemma),
    Attach { rule: Symbol, lemma: Symbol },
    Lambda { name: Symbol, hyps: Vec<Hyp>, lhs: Term, rhs: Term, equiv: Equiv },
    DisableExec(Symbol),
    EnableRule(Symbol, bool),
    Defun { name: Symbol, formals: Vec<Symbol>, body: Term },
    Meta(Symbol),
}

pub fn parse_rule_file(text: &str) -> Result<Vec<Decl>, RuleError> {
    let mut out = Vec::new();
    for form in sexpr::read_all(text)? {
        parse_form(&form, &mut out)?;
    }
    Ok(out)
}

fn sym_arg(form: &Value, v: &Value, what: &str) -> Result<Symbol, RuleError> {
    match v {
        Value::Sym(s) if !s.is("t") => Ok(s.clone()),
        _ => Err(RuleError::form(form, format!("{what} must be a symbol, found `{v}`"))),
    }
}

fn parse_form(form: &Value, out: &mut Vec<Decl>) -> Result<(), RuleError> {
    let items = form
        .list_items()
        .ok_or_else(|| RuleError::form(form, "expected a list form"))?;
    let Some(Value::Sym(head)) = items.first() else {
        return Err(RuleError::form(form, "expected an event name in head position"));
    };
    let args = &items[1..];
    match head.as_str() {
        "progn" => {
            for f in args {
                parse_form(f, out)?;
            }
        }
        "encapsulate" => {
            for f in args.iter().skip(1) {
                parse_form(f, out)?;
            }
        }
        "local" | "in-package" | "include-book" => {}
        "def-rp-rule" | "add-rp-rule" => match args {
            [name] if head.is("add-rp-rule") => {
                out.push(Decl::AddDefinition { name: sym_arg(form, name, "rule name")? })
            }
            [name, term, opts @ ..] => {
                check_options(form, opts)?;
                let name = sym_arg(form, name, "rule name")?;
                let rules = parse_rules(form, &name, term)?;
                out.push(Decl::Rules { name, rules });
            }
            _ => return Err(RuleError::form(form, "expected a name and a statement")),
        },
        "defthm" | "defthmd" => match args {
            [name, term, opts @ ..] => {
                check_options(form, opts)?;
                let name = sym_arg(form, name, "lemma name")?;
                out.push(Decl::Lemma(parse_lemma(form, &name, term)?));
            }
            _ => return Err(RuleError::form(form, "expected a name and a statement")),
        },
        "rp-attach-sc" => match args {
            [rule, lemma] => out.push(Decl::Attach {
                rule: sym_arg(form, rule, "rule name")?,
                lemma: sym_arg(form, lemma, "lemma name")?,
            }),
            _ => return Err(RuleError::form(form, "expected a rule name and a lemma name")),
        },
        "defthm-lambda" => match args {
            [name, term, opts @ ..] => {
                check_options(form, opts)?;
                let name = sym_arg(form, name, "rule name")?;
                let (hyps, concl) = split_implies(form, term)?;
                let concl = conclusions(form, &concl)?;
                let [(equiv, lhs, rhs)] = <[_; 1]>::try_from(concl).map_err(|_| {
                    RuleError::form(form, "defthm-lambda takes a single equality")
                })?;
                out.push(Decl::Lambda {
                    name,
                    hyps,
                    lhs: beta(form, &lhs)?,
                    rhs: translate(&rhs)?,
                    equiv,
                });
            }
            _ => return Err(RuleError::form(form, "expected a name and a statement")),
        },
        "disable-exec" => match args {
            [f] => out.push(Decl::DisableExec(sym_arg(form, f, "function name")?)),
            _ => return Err(RuleError::form(form, "expected one function name")),
        },
        "enable-rule" => match args {
            [name, flag] => {
                out.push(Decl::EnableRule(sym_arg(form, name, "rule name")?, flag.truthy()))
            }
            _ => return Err(RuleError::form(form, "expected a rule name and a flag")),
        },
        "defun" => {
            let [name, formals, rest @ ..] = args else {
                return Err(RuleError::form(form, "expected a name, formals and a body"));
            };
            let Some(body) = rest.last() else {
                return Err(RuleError::form(form, "missing body"));
            };
            let name = sym_arg(form, name, "function name")?;
            let formals = formals
                .list_items()
                .ok_or_else(|| RuleError::form(form, "formals must be a list"))?
                .iter()
                .map(|f| sym_arg(form, f, "formal"))
                .collect::<Result<Vec<_>, _>>()?;
            let body = beta(form, body)?;
            if let Some(v) = body.free_vars().into_iter().find(|v| !formals.contains(v)) {
                return Err(RuleError::form(form, format!("body mentions `{v}`, not a formal")));
            }
            if body.contains_head(name.as_str()) {
                return Err(RuleError::form(form, "recursive definitions are not supported"));
            }
            out.push(Decl::Defun { name, formals, body });
        }
        "add-meta-rule" => match args {
            [name] => out.push(Decl::Meta(sym_arg(form, name, "meta name")?)),
            _ => return Err(RuleError::form(form, "expected one meta name")),
        },
        _ => return Err(RuleError::form(form, format!("unknown event `{head}`"))),
    }
    Ok(())
}

fn check_options(form: &Value, opts: &[Value]) -> Result<(), RuleError> {
    for o in opts {
        if o.as_symbol().is_some_and(|s| s.is(":rule-classes")) {
            return Err(RuleError::form(
                form,
                "only rewrite rules are supported; :rule-classes is rejected",
            ));
        }
    }
    Ok(())
}

fn beta(form: &Value, v: &Value) -> Result<Term, RuleError> {
    let t = translate(v)?;
    beta_reduce(&t).map_err(|e| RuleError::form(form, e.msg))
}

fn flatten_and(v: &Value, out: &mut Vec<Value>) {
    if let Some(items) = v.list_items() {
        if items.first().and_then(Value::as_symbol).is_some_and(|s| s.is("and")) {
            for i in &items[1..] {
                flatten_and(i, out);
            }
            return;
        }
    }
    if !v.is_t() {
        out.push(v.clone());
    }
}

fn split_implies(form: &Value, v: &Value) -> Result<(Vec<Hyp>, Value), RuleError> {
    let items = v.list_items().unwrap_or_default();
    if items.first().and_then(Value::as_symbol).is_some_and(|s| s.is("implies")) {
        let [_, h, c] = items.as_slice() else {
            return Err(RuleError::form(form, "implies takes exactly two arguments"));
        };
        let mut conj = Vec::new();
        flatten_and(h, &mut conj);
        let hyps = conj
            .iter()
            .map(|c| parse_hyp(form, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((hyps, c.clone()))
    } else {
        Ok((Vec::new(), v.clone()))
    }
}

fn parse_hyp(form: &Value, v: &Value) -> Result<Hyp, RuleError> {
    if let Some(items) = v.list_items() {
        if items.first().and_then(Value::as_symbol).is_some_and(|s| s.is("syntaxp")) {
            return match items.as_slice() {
                [_, pred] => Ok(Hyp::Syntaxp(pred.clone())),
                _ => Err(RuleError::form(form, "syntaxp takes exactly one argument")),
            };
        }
    }
    Ok(Hyp::Term(beta(form, v)?))
}

fn conclusions(form: &Value, c: &Value) -> Result<Vec<(Equiv, Value, Value)>, RuleError> {
    let mut conj = Vec::new();
    flatten_and(c, &mut conj);
    if conj.is_empty() {
        return Err(RuleError::form(form, "conclusion is trivially true"));
    }
    conj.into_iter()
        .map(|c| {
            let items = c.list_items().unwrap_or_default();
            let head = items.first().and_then(Value::as_symbol);
            match (head.map(Symbol::as_str), items.len()) {
                (Some("equal"), 3) => Ok((Equiv::Equal, items[1].clone(), items[2].clone())),
                (Some("iff"), 3) => Ok((Equiv::Iff, items[1].clone(), items[2].clone())),
                (Some("equal" | "iff"), _) => {
                    Err(RuleError::form(form, format!("`{c}` must have two arguments")))
                }
                (Some(h), _) if h != "quote" => Ok((Equiv::Iff, c.clone(), Value::t())),
                _ => Err(RuleError::form(
                    form,
                    format!("conclusion `{c}` is not an equality, iff or predicate call"),
                )),
            }
        })
        .collect()
}

fn parse_rules(form: &Value, name: &Symbol, v: &Value) -> Result<Vec<Rule>, RuleError> {
    let (hyps, concl) = split_implies(form, v)?;
    conclusions(form, &concl)?
        .into_iter()
        .enumerate()
        .map(|(k, (equiv, lhs, rhs))| {
            let mut r = Rule::new(name.clone(), hyps.clone(), beta(form, &lhs)?, beta(form, &rhs)?, equiv);
            r.part = k;
            Ok(r)
        })
        .collect()
}

fn parse_lemma(form: &Value, name: &Symbol, v: &Value) -> Result<SideConditionLemma, RuleError> {
    let (hyps, concl) = split_implies(form, v)?;
    let items = concl.list_items().unwrap_or_default();
    match items.as_slice() {
        [Value::Sym(prop), subject]
            if !SPECIAL_HEADS.contains(&prop.as_str())
                && !["equal", "iff", "not", "implies", "and", "or"].contains(&prop.as_str()) =>
        {
            Ok(SideConditionLemma {
                name: name.clone(),
                hyps,
                prop: prop.clone(),
                subject: beta(form, subject)?,
            })
        }
        _ => Err(RuleError::form(
            form,
            format!("lemma conclusion `{concl}` must be a unary predicate call (prop subject)"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn one_rule(text: &str) -> Vec<Rule> {
        match parse_rule_file(text).unwrap().remove(0) {
            Decl::Rules { rules, .. } => rules,
            d => panic!("unexpected {d:?}"),
        }
    }

    #[test]
    fn logand_rule() {
        let rules = one_rule(
            "(def-rp-rule logand-to-4vec-bitand
               (implies (and (integerp x) (integerp y))
                        (equal (logand x y) (4vec-bitand x y))))",
        );
        assert_eq!(rules.len(), 1);
        let r = &rules[0];
        assert_eq!(
            r.hyps,
            vec![
                Hyp::Term(parse_term("(integerp x)").unwrap()),
                Hyp::Term(parse_term("(integerp y)").unwrap())
            ]
        );
        assert_eq!(r.lhs, parse_term("(logand x y)").unwrap());
        assert_eq!(r.rhs, parse_term("(4vec-bitand x y)").unwrap());
        assert_eq!(r.equiv, Equiv::Equal);
        assert_eq!(r.sc_wrapped_rhs, r.rhs);
    }

    #[test]
    fn plus_comm_splits() {
        let rules = one_rule(
            "(def-rp-rule +-comm
               (implies (syntaxp (and (not (lexorder y x))
                                      (or (atom x) (not (equal (car x) 'binary-+)))))
                        (and (equal (+ y x) (+ x y))
                             (equal (+ y x z) (+ x y z)))))",
        );
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].hyps, rules[1].hyps);
        assert!(matches!(rules[0].hyps[0], Hyp::Syntaxp(_)));
        assert_eq!(rules[1].lhs, parse_term("(binary-+ y (binary-+ x z))").unwrap());
        assert_eq!((rules[0].label(), rules[1].label()), ("+-comm".into(), "+-comm.1".into()));
    }

    #[test]
    fn bare_conclusion_is_iff_t() {
        let rules = one_rule("(def-rp-rule i (integerp (iassoc k e)))");
        assert_eq!(rules[0].equiv, Equiv::Iff);
        assert!(rules[0].rhs.is_t());
    }

    #[test]
    fn evenness_lemma() {
        let d = parse_rule_file("(defthmd round-to-even-is-even (evenp (+ a (neg-m2 a))))").unwrap();
        let Decl::Lemma(l) = &d[0] else { panic!() };
        assert_eq!(l.prop.as_str(), "evenp");
        assert_eq!(l.subject, parse_term("(+ a (neg-m2 a))").unwrap());
        assert!(l.hyps.is_empty());
    }

    #[test]
    fn rejects_bad_forms() {
        assert!(parse_rule_file("(def-rp-rule r (equal a))").is_err());
        assert!(parse_rule_file("(def-rp-rule r (equal (f x) x) :rule-classes :type-prescription)").is_err());
        assert!(parse_rule_file("(defthmd l (equal (f x) x))").is_err());
        assert!(parse_rule_file("(frobnicate x)").is_err());
        assert!(parse_rule_file("(def-rp-rule r 'nil)").is_err());
        assert!(parse_rule_file("(def-rp-rule r (equal (f x) x)").is_err());
    }

    #[test]
    fn progn_and_encapsulate_flatten() {
        let d = parse_rule_file(
            "(encapsulate (((d2 *) => *))
               (local (defun d2 (x) (floor x 2)))
               (progn (def-rp-rule a (equal (f x) x))
                      (disable-exec f)))",
        )
        .unwrap();
        assert_eq!(d.len(), 2);
    }
}
