use crate::term::{lookup, Bindings};
use crate::value::{Symbol, Value};

/// Evaluates a syntaxp test over the representations of the bound terms.
/// `rp` wrappers are visible to the test.
pub fn syntaxp_eval(pred: &Value, b: &Bindings) -> Result<bool, String> {
    Ok(eval(pred, b)?.truthy())
}

fn arity(f: &Symbol, args: &[Value], n: usize) -> Result<(), String> {
    if args.len() == n {
        Ok(())
    } else {
        Err(format!("syntaxp `{f}` expects {n} arguments, given {}", args.len()))
    }
}

fn eval(v: &Value, b: &Bindings) -> Result<Value, String> {
    match v {
        Value::Nil | Value::Int(_) => Ok(v.clone()),
        Value::Sym(s) if s.is("t") || s.as_str().starts_with(':') => Ok(v.clone()),
        Value::Sym(s) => lookup(b, s)
            .map(|t| t.to_value())
            .ok_or_else(|| format!("syntaxp variable `{s}` is unbound")),
        Value::Cons(_) => {
            let items = v.list_items().ok_or_else(|| format!("malformed syntaxp form `{v}`"))?;
            let Some(Value::Sym(f)) = items.first() else {
                return Err(format!("malformed syntaxp form `{v}`"));
            };
            let args = &items[1..];
            match f.as_str() {
                "quote" => {
                    arity(f, args, 1)?;
                    Ok(args[0].clone())
                }
                "and" => {
                    let mut last = Value::t();
                    for a in args {
                        last = eval(a, b)?;
                        if last.is_nil() {
                            break;
                        }
                    }
                    Ok(last)
                }
                "or" => {
                    for a in args {
                        let x = eval(a, b)?;
                        if x.truthy() {
                            return Ok(x);
                        }
                    }
                    Ok(Value::Nil)
                }
                "if" => {
                    arity(f, args, 3)?;
                    if eval(&args[0], b)?.truthy() {
                        eval(&args[1], b)
                    } else {
                        eval(&args[2], b)
                    }
                }
                _ => {
                    let vals = args.iter().map(|a| eval(a, b)).collect::<Result<Vec<_>, _>>()?;
                    match (f.as_str(), vals.as_slice()) {
                        ("not", [x]) => Ok(Value::bool(x.is_nil())),
                        ("atom", [x]) => Ok(Value::bool(x.is_atom())),
                        ("consp", [x]) => Ok(Value::bool(!x.is_atom())),
                        ("equal", [x, y]) => Ok(Value::bool(x == y)),
                        ("lexorder", [x, y]) => Ok(Value::bool(x.lexorder(y))),
                        ("car", [x]) => Ok(x.car()),
                        ("cdr", [x]) => Ok(x.cdr()),
                        ("quotep", [x]) => {
                            Ok(Value::bool(x.car().as_symbol().is_some_and(|s| s.is("quote"))))
                        }
                        ("not" | "atom" | "consp" | "car" | "cdr" | "quotep", _) => {
                            arity(f, args, 1).map(|_| Value::Nil)
                        }
                        ("equal" | "lexorder", _) => arity(f, args, 2).map(|_| Value::Nil),
                        _ => Err(format!("unknown syntaxp predicate `{f}`")),
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexpr::read_one;
    use crate::syntax::parse_term;
    use crate::term::Term;

    fn bind(pairs: &[(&str, &str)]) -> Bindings {
        pairs.iter().map(|(v, t)| (Symbol::new(v), parse_term(t).unwrap())).collect()
    }

    fn ev(pred: &str, b: &Bindings) -> Result<bool, String> {
        syntaxp_eval(&read_one(pred).unwrap(), b)
    }

    #[test]
    fn lexorder_on_variables() {
        let b = bind(&[("y", "b"), ("x", "a")]);
        assert!(!ev("(lexorder y x)", &b).unwrap());
        assert!(ev("(not (lexorder y x))", &b).unwrap());
    }

    #[test]
    fn atoms_and_car() {
        let b = bind(&[("x", "a")]);
        assert!(ev("(atom x)", &b).unwrap());
        let b = bind(&[("x", "(binary-+ a b)")]);
        assert!(!ev("(not (equal (car x) 'binary-+))", &b).unwrap());
        assert!(!ev("(atom x)", &b).unwrap());
    }

    #[test]
    fn quoted_terms_are_quotep() {
        let b: Bindings = vec![(Symbol::new("x"), Term::quote(Value::int(3)))];
        assert!(ev("(quotep x)", &b).unwrap());
    }

    #[test]
    fn unknown_predicate_errors() {
        let b = bind(&[("x", "a")]);
        assert!(ev("(frob x)", &b).is_err());
        assert!(ev("(atom z)", &b).is_err());
    }
}
