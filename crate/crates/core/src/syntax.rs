//! Concrete syntax for terms and the term-level well-formedness checks.
//!
//! Reading goes through [`crate::sexpr`] first; [`translate`] then turns the
//! datum into a [`Term`], expanding the small macro set (`+`, `-`, `and`,
//! `or`, `let`, `let*`) and normalizing `'x`/`(quote x)`, bare integers,
//! `t`, `nil` and keywords into quoted constants.

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::falist;
use crate::sexpr;
use crate::term::{Lambda, Term, TermKind, FALIST, LIST, QUOTE, RP};
use crate::value::{Symbol, Value};

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    translate(&sexpr::read_one(text)?)
}

pub fn translate(v: &Value) -> Result<Term, ParseError> {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || translate_inner(v))
}

fn translate_inner(v: &Value) -> Result<Term, ParseError> {
    match v {
        Value::Nil | Value::Int(_) => Ok(Term::quote(v.clone())),
        Value::Sym(s) if s.is("t") || s.as_str().starts_with(':') => Ok(Term::quote(v.clone())),
        Value::Sym(s) if s.as_str().starts_with('"') => {
            Err(ParseError::translate(format!("strings are not supported: {s}")))
        }
        Value::Sym(s) => Ok(Term::new(TermKind::Var(s.clone()))),
        Value::Cons(_) => {
            let items = v
                .list_items()
                .ok_or_else(|| ParseError::translate(format!("dotted form `{v}` is not a term")))?;
            let (head, rest) = items.split_first().expect("cons has an element");
            match head {
                Value::Sym(h) => translate_app(h, rest),
                Value::Cons(_) if head.car().as_symbol().is_some_and(|s| s.is("lambda")) => {
                    translate_lambda(head, rest)
                }
                other => Err(ParseError::translate(format!(
                    "function position must hold a non-nil symbol or lambda, found `{other}`"
                ))),
            }
        }
    }
}

fn translate_args(rest: &[Value]) -> Result<Vec<Term>, ParseError> {
    rest.iter().map(translate).collect()
}

fn translate_app(h: &Symbol, rest: &[Value]) -> Result<Term, ParseError> {
    match h.as_str() {
        QUOTE => match rest {
            [x] => Ok(Term::quote(x.clone())),
            _ => Err(ParseError::translate("quote takes exactly one argument")),
        },
        "lambda" => Err(ParseError::translate("lambda expression outside function position")),
        "+" => {
            let args = translate_args(rest)?;
            Ok(match args.len() {
                0 => Term::quote(Value::int(0)),
                1 => Term::app("binary-+", vec![Term::quote(Value::int(0)), args[0].clone()]),
                _ => right_fold("binary-+", args),
            })
        }
        "-" => {
            let mut args = translate_args(rest)?;
            match args.len() {
                1 => Ok(Term::app("unary--", args)),
                2 => {
                    let b = args.pop().unwrap();
                    let a = args.pop().unwrap();
                    Ok(Term::app("binary-+", vec![a, Term::app("unary--", vec![b])]))
                }
                _ => Err(ParseError::translate("`-` takes one or two arguments")),
            }
        }
        "and" => {
            let args = translate_args(rest)?;
            Ok(match args.len() {
                0 => Term::t(),
                _ => args
                    .into_iter()
                    .rev()
                    .reduce(|acc, a| Term::app("if", vec![a, acc, Term::nil()]))
                    .unwrap(),
            })
        }
        "or" => {
            let args = translate_args(rest)?;
            Ok(match args.len() {
                0 => Term::nil(),
                _ => args
                    .into_iter()
                    .rev()
                    .reduce(|acc, a| Term::app("if", vec![a.clone(), a, acc]))
                    .unwrap(),
            })
        }
        "let" => translate_let(rest, false),
        "let*" => translate_let(rest, true),
        FALIST => {
            let args = translate_args(rest)?;
            if let [shadow, logical] = args.as_slice() {
                if let Some(s) = shadow.quoted().and_then(falist::Shadow::from_alist) {
                    return Ok(Term::app(
                        FALIST,
                        vec![Term::new(TermKind::Shadow(s)), logical.clone()],
                    ));
                }
            }
            Ok(Term::app(h.clone(), args))
        }
        _ => Ok(Term::app(h.clone(), translate_args(rest)?)),
    }
}

fn right_fold(head: &str, args: Vec<Term>) -> Term {
    args.into_iter()
        .rev()
        .reduce(|acc, a| Term::app(head, vec![a, acc]))
        .unwrap()
}

fn symbol_list(v: &Value, what: &str) -> Result<Vec<Symbol>, ParseError> {
    let items = v
        .list_items()
        .ok_or_else(|| ParseError::translate(format!("{what} must be a list")))?;
    items
        .iter()
        .map(|i| match i {
            Value::Sym(s) if !s.is("t") => Ok(s.clone()),
            other => Err(ParseError::translate(format!("{what}: `{other}` is not a variable"))),
        })
        .collect()
}

fn translate_lambda(lam: &Value, rest: &[Value]) -> Result<Term, ParseError> {
    let parts = lam
        .list_items()
        .ok_or_else(|| ParseError::translate("malformed lambda"))?;
    let [_, formals, body] = parts.as_slice() else {
        return Err(ParseError::translate("lambda needs a formals list and a single body"));
    };
    let formals = symbol_list(formals, "lambda formals")?;
    let args = translate_args(rest)?;
    if formals.len() != args.len() {
        return Err(ParseError::translate(format!(
            "lambda expects {} arguments, given {}",
            formals.len(),
            args.len()
        )));
    }
    Ok(Term::new(TermKind::Lambda(Lambda { formals, body: translate(body)?, args })))
}

/// Builds a closed lambda application binding `bound` to `actuals` over
/// `body`: the remaining free variables of the body are appended to the
/// formals and passed through unchanged.
pub fn closed_lambda(bound: Vec<Symbol>, actuals: Vec<Term>, body: Term) -> Term {
    let mut formals = bound;
    let mut args = actuals;
    for v in body.free_vars() {
        if !formals.contains(&v) {
            args.push(Term::new(TermKind::Var(v.clone())));
            formals.push(v);
        }
    }
    Term::new(TermKind::Lambda(Lambda { formals, body, args }))
}

fn translate_let(rest: &[Value], sequential: bool) -> Result<Term, ParseError> {
    let [bindings, body] = rest else {
        return Err(ParseError::translate("let needs a binding list and a single body"));
    };
    let bindings = bindings
        .list_items()
        .ok_or_else(|| ParseError::translate("let bindings must be a list"))?;
    let mut pairs = Vec::new();
    for b in &bindings {
        match b.list_items().as_deref() {
            Some([Value::Sym(v), e]) => pairs.push((v.clone(), translate(e)?)),
            _ => return Err(ParseError::translate(format!("malformed let binding `{b}`"))),
        }
    }
    let body = translate(body)?;
    if pairs.is_empty() {
        return Ok(body);
    }
    if sequential {
        Ok(pairs
            .into_iter()
            .rev()
            .fold(body, |acc, (v, e)| closed_lambda(vec![v], vec![e], acc)))
    } else {
        let (vars, exprs) = pairs.into_iter().unzip();
        Ok(closed_lambda(vars, exprs, body))
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(out: &mut String, t: &Term) {
    match t.kind() {
        TermKind::Var(v) => out.push_str(v.as_str()),
        TermKind::Quote(_) | TermKind::Shadow(_) => {
            let _ = write!(out, "'{}", t.quoted().unwrap());
        }
        TermKind::App(h, args) => {
            out.push('(');
            out.push_str(h.as_str());
            for a in args {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
        TermKind::Lambda(l) => {
            out.push_str("((lambda (");
            for (i, f) in l.formals.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(f.as_str());
            }
            out.push_str(") ");
            write_term(out, &l.body);
            out.push(')');
            for a in &l.args {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
    }
}

/// Checks the term syntax invariants: leaves are non-nil symbols or quoted
/// constants, `rp` calls have two arguments with a quoted non-nil symbol
/// first, `falist` calls carry a shadow coherent with their logical alist,
/// and every function position holds a non-nil symbol.
pub fn rp_termp(t: &Term) -> Result<(), Vec<String>> {
    let mut v = Vec::new();
    check_syntax(t, &mut v);
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

fn check_syntax(t: &Term, out: &mut Vec<String>) {
    match t.kind() {
        TermKind::Var(v) => {
            if v.is("nil") || v.is("t") {
                out.push(format!("`{v}` cannot be a variable"));
            }
        }
        TermKind::Quote(_) | TermKind::Shadow(_) => {}
        TermKind::Lambda(l) => {
            out.push(format!("lambda heads not allowed: `{t}`"));
            check_syntax(&l.body, out);
            l.args.iter().for_each(|a| check_syntax(a, out));
        }
        TermKind::App(h, args) => {
            if h.is("nil") || h.is("t") || h.is(QUOTE) {
                out.push(format!("`{h}` is not a function symbol"));
            }
            if h.is(RP) {
                if args.len() != 2 {
                    out.push(format!("rp must have exactly two arguments: `{t}`"));
                } else if !matches!(args[0].quoted(), Some(Value::Sym(_))) {
                    out.push(format!(
                        "rp first argument must be a quoted non-nil symbol: `{t}`"
                    ));
                }
            } else if h.is(FALIST) {
                if args.len() != 2 {
                    out.push(format!("falist must have exactly two arguments: `{t}`"));
                } else {
                    match args[0].quoted() {
                        None => out.push(format!("falist first argument must be quoted: `{t}`")),
                        Some(alist) => {
                            if let Err(e) = falist::check_coherence(alist, &args[1]) {
                                out.push(format!("falist shadow incoherent: {e}"));
                            }
                        }
                    }
                }
            }
            args.iter().for_each(|a| check_syntax(a, out));
        }
    }
}

/// Removes every lambda application by substitution, innermost first.
pub fn beta_reduce(t: &Term) -> Result<Term, ParseError> {
    match t.kind() {
        TermKind::App(h, args) => {
            if !t.contains_lambda() {
                return Ok(t.clone());
            }
            Ok(Term::app(h.clone(), args.iter().map(beta_reduce).collect::<Result<_, _>>()?))
        }
        TermKind::Lambda(l) => {
            if l.formals.len() != l.args.len() {
                return Err(ParseError::translate(format!(
                    "lambda arity mismatch: {} formals, {} actuals",
                    l.formals.len(),
                    l.args.len()
                )));
            }
            let args = l.args.iter().map(beta_reduce).collect::<Result<Vec<_>, _>>()?;
            let body = beta_reduce(&l.body)?;
            let b = l.formals.iter().cloned().zip(args).collect();
            Ok(body.substitute(&b))
        }
        _ => Ok(t.clone()),
    }
}

/// Expands every `(list a1 .. an)` into nested `cons` ending in `'nil`.
/// Quoted constants are left alone.
pub fn trans_list(t: &Term) -> Term {
    match t.kind() {
        TermKind::App(h, args) => {
            let args: Vec<Term> = args.iter().map(trans_list).collect();
            if h.is(LIST) {
                args.into_iter()
                    .rev()
                    .fold(Term::nil(), |acc, a| Term::app("cons", vec![a, acc]))
            } else {
                Term::app(h.clone(), args)
            }
        }
        TermKind::Lambda(l) => Term::new(TermKind::Lambda(Lambda {
            formals: l.formals.clone(),
            body: trans_list(&l.body),
            args: l.args.iter().map(trans_list).collect(),
        })),
        _ => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn nested_application_shape() {
        let t = p("(f1 (f2 a (f3 b c)) (f4 (f3 b c)))");
        let (h, args) = t.as_app().unwrap();
        assert!(h.is("f1"));
        assert_eq!(args.len(), 2);
        assert_eq!(args[0].to_string(), "(f2 a (f3 b c))");
        assert_eq!(args[1].to_string(), "(f4 (f3 b c))");
    }

    #[test]
    fn quoted_constants() {
        assert_eq!(p("'nil"), Term::nil());
        assert_eq!(p("nil"), Term::nil());
        assert_eq!(p("(quote x)"), p("'x"));
        assert_eq!(p("5"), Term::quote(Value::int(5)));
        assert_eq!(p("'5").to_string(), "'5");
    }

    #[test]
    fn rp_application() {
        let t = p("(rp 'integerp x)");
        assert_eq!(
            t,
            Term::app("rp", vec![Term::quote(Value::sym("integerp")), Term::var("x")])
        );
    }

    #[test]
    fn printing() {
        let t = Term::app("cons", vec![Term::var("a"), Term::nil()]);
        assert_eq!(print_term(&t), "(cons a 'nil)");
        let ex3 = p("(rp 'integerp (4vec-bitand (rp 'integerp (4vec-bitand x y)) (rp 'integerp (4vec-bitand a b))))");
        assert_eq!(
            ex3.to_string(),
            "(rp 'integerp (4vec-bitand (rp 'integerp (4vec-bitand x y)) (rp 'integerp (4vec-bitand a b))))"
        );
    }

    #[test]
    fn plus_macro() {
        assert_eq!(p("(+ a b c)"), p("(binary-+ a (binary-+ b c))"));
        assert_eq!(p("(- a b)"), p("(binary-+ a (unary-- b))"));
    }

    #[test]
    fn syntax_checks() {
        assert!(rp_termp(&p("(rp 'integerp x)")).is_ok());
        let v = rp_termp(&p("(rp p x)")).unwrap_err();
        assert!(v[0].contains("rp first argument must be a quoted non-nil symbol"));
        let v = rp_termp(&p("((lambda (x) x) a)")).unwrap_err();
        assert!(v[0].contains("lambda heads not allowed"));
        assert!(rp_termp(&p("(rp 'p x y)")).is_err());
        assert!(rp_termp(&p("(rp 'nil x)")).is_err());
    }

    #[test]
    fn falist_syntax() {
        let good = p("(falist '((k . v)) (cons (cons 'k v) 'nil))");
        assert!(rp_termp(&good).is_ok());
        let bad = p("(falist '((k . w)) (cons (cons 'k v) 'nil))");
        assert!(rp_termp(&bad).is_err());
        assert!(rp_termp(&p("(falist x (cons (cons 'k v) 'nil))")).is_err());
    }

    #[test]
    fn bad_heads_rejected() {
        assert!(parse_term("(3 a)").is_err());
        assert!(parse_term("(nil a)").is_err());
        assert!(parse_term("((lambda (x y) x) a)").is_err());
    }

    #[test]
    fn beta_one_step() {
        let t = p("((lambda (x) (f x x)) (g a))");
        assert_eq!(beta_reduce(&t).unwrap(), p("(f (g a) (g a))"));
        let plain = p("(f a (g b))");
        assert_eq!(beta_reduce(&plain).unwrap(), plain);
    }

    #[test]
    fn let_star_builds_closed_lambdas() {
        let t = p("(let* ((a (f1 x)) (b (f2 x))) (f4 a a b))");
        assert_eq!(
            t.to_string(),
            "((lambda (a x) ((lambda (b a) (f4 a a b)) (f2 x) a)) (f1 x) x)"
        );
        assert_eq!(beta_reduce(&t).unwrap(), p("(f4 (f1 x) (f1 x) (f2 x))"));
    }

    #[test]
    fn list_translation() {
        assert_eq!(trans_list(&p("(list a b c)")), p("(cons a (cons b (cons c 'nil)))"));
        assert_eq!(trans_list(&p("(list)")), Term::nil());
        let t = p("(f a '(list b))");
        assert_eq!(trans_list(&t), t);
    }
}
