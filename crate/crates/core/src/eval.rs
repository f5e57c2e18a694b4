//! Ground evaluation of terms under a variable environment.
//!
//! Built-in arithmetic follows the usual total "fixing" conventions: a
//! non-integer argument to an integer function is treated as 0.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::EvalError;
use crate::term::{Term, TermKind, FALIST, HIDE, IF, LIST, NOT, RP};
use crate::value::{Symbol, Value};

pub type Env = BTreeMap<Symbol, Value>;

/// Native ground evaluator. `Err` is a domain error.
pub type ExecFn = Arc<dyn Fn(&[Value]) -> Result<Value, String> + Send + Sync>;

#[derive(Clone)]
pub struct ExecEntry {
    pub func: ExecFn,
    pub arity: Option<usize>,
    /// Whether the rewriter may run this on quoted arguments.
    pub enabled: bool,
}

#[derive(Clone, Default)]
pub struct ExecRegistry {
    fns: HashMap<Symbol, ExecEntry>,
}

impl fmt::Debug for ExecRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.fns.keys().map(Symbol::as_str).collect();
        names.sort_unstable();
        f.debug_struct("ExecRegistry").field("fns", &names).finish()
    }
}

fn ifix(v: &Value) -> BigInt {
    v.as_int().cloned().unwrap_or_default()
}

fn nfix(v: &Value) -> BigInt {
    match v.as_int() {
        Some(i) if !i.is_negative() => i.clone(),
        _ => BigInt::zero(),
    }
}

const MAX_WIDTH: u64 = 1 << 20;

fn width(v: &Value) -> Result<usize, String> {
    let n = nfix(v);
    match n.to_u64() {
        Some(w) if w <= MAX_WIDTH => Ok(w as usize),
        _ => Err(format!("width {n} too large")),
    }
}

fn loghead(size: usize, i: &BigInt) -> BigInt {
    let m = BigInt::one() << size;
    i.mod_floor(&m)
}

pub(crate) fn hons_assoc(key: &Value, alist: &Value) -> Value {
    let mut cur = alist;
    while let Some((entry, rest)) = cur.as_cons() {
        if let Some((k, _)) = entry.as_cons() {
            if k == key {
                return entry.clone();
            }
        }
        cur = rest;
    }
    Value::Nil
}

impl ExecRegistry {
    pub fn new() -> Self {
        ExecRegistry::default()
    }

    pub fn register<F>(&mut self, name: &str, arity: usize, f: F)
    where
        F: Fn(&[Value]) -> Result<Value, String> + Send + Sync + 'static,
    {
        self.fns.insert(
            Symbol::new(name),
            ExecEntry { func: Arc::new(f), arity: Some(arity), enabled: true },
        );
    }

    pub fn insert(&mut self, name: Symbol, entry: ExecEntry) {
        self.fns.insert(name, entry);
    }

    pub fn get(&self, name: &Symbol) -> Option<&ExecEntry> {
        self.fns.get(name)
    }

    pub fn contains(&self, name: &Symbol) -> bool {
        self.fns.contains_key(name)
    }

    pub fn set_enabled(&mut self, name: &Symbol, enabled: bool) -> bool {
        match self.fns.get_mut(name) {
            Some(e) => {
                e.enabled = enabled;
                true
            }
            None => false,
        }
    }

    pub fn is_enabled(&self, name: &Symbol) -> bool {
        self.fns.get(name).is_some_and(|e| e.enabled)
    }

    /// The built-in executable suite.
    pub fn with_defaults() -> Self {
        let mut r = ExecRegistry::new();
        r.register("binary-+", 2, |a| Ok(Value::Int(ifix(&a[0]) + ifix(&a[1]))));
        r.register("unary--", 1, |a| Ok(Value::Int(-ifix(&a[0]))));
        r.register("binary-*", 2, |a| Ok(Value::Int(ifix(&a[0]) * ifix(&a[1]))));
        r.register("<", 2, |a| Ok(Value::bool(ifix(&a[0]) < ifix(&a[1]))));
        r.register("ifix", 1, |a| Ok(Value::Int(ifix(&a[0]))));
        r.register("floor", 2, |a| {
            let (x, y) = (ifix(&a[0]), ifix(&a[1]));
            Ok(Value::Int(if y.is_zero() { BigInt::zero() } else { x.div_floor(&y) }))
        });
        r.register("mod", 2, |a| {
            let (x, y) = (ifix(&a[0]), ifix(&a[1]));
            Ok(Value::Int(if y.is_zero() { x } else { x.mod_floor(&y) }))
        });
        for name in ["binary-logand", "logand", "4vec-bitand"] {
            r.register(name, 2, |a| Ok(Value::Int(ifix(&a[0]) & ifix(&a[1]))));
        }
        r.register("loghead", 2, |a| Ok(Value::Int(loghead(width(&a[0])?, &ifix(&a[1])))));
        r.register("logapp", 3, |a| {
            let w = width(&a[0])?;
            Ok(Value::Int(loghead(w, &ifix(&a[1])) + (ifix(&a[2]) << w)))
        });
        r.register("evenp", 1, |a| {
            Ok(Value::bool(a[0].as_int().is_some_and(|i| i.is_even())))
        });
        r.register("integerp", 1, |a| Ok(Value::bool(a[0].as_int().is_some())));
        r.register("natp", 1, |a| Ok(Value::bool(a[0].as_int().is_some_and(|i| !i.is_negative()))));
        r.register("bitp", 1, |a| {
            Ok(Value::bool(a[0].as_int().is_some_and(|i| i.is_zero() || i.is_one())))
        });
        r.register("equal", 2, |a| Ok(Value::bool(a[0] == a[1])));
        r.register(NOT, 1, |a| Ok(Value::bool(a[0].is_nil())));
        r.register("implies", 2, |a| Ok(Value::bool(a[0].is_nil() || a[1].truthy())));
        r.register("iff", 2, |a| Ok(Value::bool(a[0].truthy() == a[1].truthy())));
        r.register("lexorder", 2, |a| Ok(Value::bool(a[0].lexorder(&a[1]))));
        r.register("cons", 2, |a| Ok(Value::cons(a[0].clone(), a[1].clone())));
        r.register("car", 1, |a| Ok(a[0].car()));
        r.register("cdr", 1, |a| Ok(a[0].cdr()));
        r.register("consp", 1, |a| Ok(Value::bool(!a[0].is_atom())));
        r.register("atom", 1, |a| Ok(Value::bool(a[0].is_atom())));
        r.register("hons-acons", 3, |a| {
            Ok(Value::cons(Value::cons(a[0].clone(), a[1].clone()), a[2].clone()))
        });
        r.register("hons-get", 2, |a| Ok(hons_assoc(&a[0], &a[1])));
        r.register("fast-alist-free", 1, |a| Ok(a[0].clone()));
        r
    }

    /// Defaults plus witnesses for the constrained functions used by the
    /// shipped demos (`d2`, `f2`, `neg-m2`, `iassoc`). Witnesses are for
    /// evaluation only; their executable counterparts stay disabled.
    pub fn with_demo_witnesses() -> Self {
        let mut r = ExecRegistry::with_defaults();
        r.register("d2", 1, |a| {
            let x = ifix(&a[0]);
            if x.is_even() {
                Ok(Value::Int(x / 2))
            } else {
                Err(format!("{x}/2 is not an integer"))
            }
        });
        r.register("f2", 1, |a| Ok(Value::Int(ifix(&a[0]).div_floor(&BigInt::from(2)))));
        r.register("neg-m2", 1, |a| Ok(Value::Int(-ifix(&a[0]).mod_floor(&BigInt::from(2)))));
        r.register("iassoc", 2, |a| Ok(Value::Int(ifix(&hons_assoc(&a[0], &a[1]).cdr()))));
        for name in ["d2", "f2", "neg-m2", "iassoc"] {
            r.set_enabled(&Symbol::new(name), false);
        }
        r
    }

    /// Registers a non-recursive definition as an evaluator. The body may
    /// call anything registered in `self` at the time of the call.
    pub fn define(&mut self, name: &Symbol, formals: &[Symbol], body: &Term) {
        let snapshot = Arc::new(self.clone());
        let formals: Vec<Symbol> = formals.to_vec();
        let body = body.clone();
        let fname = name.clone();
        let arity = formals.len();
        let f = move |args: &[Value]| -> Result<Value, String> {
            let env: Env = formals.iter().cloned().zip(args.iter().cloned()).collect();
            eval_term(&body, &env, &snapshot).map_err(|e| format!("in {fname}: {e}"))
        };
        self.fns.insert(
            name.clone(),
            ExecEntry { func: Arc::new(f), arity: Some(arity), enabled: true },
        );
    }

    /// Calls a registered function directly.
    pub fn call(&self, name: &Symbol, args: &[Value]) -> Result<Value, EvalError> {
        let e = self.fns.get(name).ok_or_else(|| EvalError::Unregistered(name.clone()))?;
        if let Some(n) = e.arity {
            if n != args.len() {
                return Err(EvalError::Domain {
                    func: name.clone(),
                    reason: format!("expects {n} arguments, given {}", args.len()),
                });
            }
        }
        (e.func)(args).map_err(|reason| EvalError::Domain { func: name.clone(), reason })
    }
}

fn arity(h: &Symbol, args: &[Term], n: usize) -> Result<(), EvalError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(EvalError::Malformed(format!("`{h}` expects {n} arguments, given {}", args.len())))
    }
}

/// Evaluates `t`. `rp` and `falist` return their second argument, `hide`
/// its only argument, `if` is lazy in its branches and `list` builds a
/// proper list.
pub fn eval_term(t: &Term, env: &Env, reg: &ExecRegistry) -> Result<Value, EvalError> {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || eval_inner(t, env, reg))
}

fn eval_inner(t: &Term, env: &Env, reg: &ExecRegistry) -> Result<Value, EvalError> {
    match t.kind() {
        TermKind::Var(v) => env.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.clone())),
        TermKind::Quote(v) => Ok(v.clone()),
        TermKind::Shadow(s) => Ok(s.alist.clone()),
        TermKind::Lambda(l) => {
            if l.formals.len() != l.args.len() {
                return Err(EvalError::Malformed("lambda arity mismatch".into()));
            }
            let mut inner = env.clone();
            for (f, a) in l.formals.iter().zip(&l.args) {
                let v = eval_term(a, env, reg)?;
                inner.insert(f.clone(), v);
            }
            eval_term(&l.body, &inner, reg)
        }
        TermKind::App(h, args) => match h.as_str() {
            IF => {
                arity(h, args, 3)?;
                if eval_term(&args[0], env, reg)?.truthy() {
                    eval_term(&args[1], env, reg)
                } else {
                    eval_term(&args[2], env, reg)
                }
            }
            RP | FALIST => {
                arity(h, args, 2)?;
                eval_term(&args[1], env, reg)
            }
            HIDE => {
                arity(h, args, 1)?;
                eval_term(&args[0], env, reg)
            }
            LIST => {
                let vals = args
                    .iter()
                    .map(|a| eval_term(a, env, reg))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Value::list(vals))
            }
            NOT => {
                arity(h, args, 1)?;
                Ok(Value::bool(eval_term(&args[0], env, reg)?.is_nil()))
            }
            _ => {
                if !reg.contains(h) {
                    return Err(EvalError::Unregistered(h.clone()));
                }
                let vals = args
                    .iter()
                    .map(|a| eval_term(a, env, reg))
                    .collect::<Result<Vec<_>, _>>()?;
                reg.call(h, &vals)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn ev(s: &str) -> Result<Value, EvalError> {
        eval_term(&parse_term(s).unwrap(), &Env::new(), &ExecRegistry::with_defaults())
    }

    #[test]
    fn wrappers_are_identity() {
        assert_eq!(ev("(rp 'integerp '5)").unwrap(), Value::int(5));
        assert_eq!(ev("(hide '5)").unwrap(), Value::int(5));
    }

    #[test]
    fn logand_matches_native() {
        assert_eq!(ev("(binary-logand '12 '10)").unwrap(), Value::int(12 & 10));
        for (a, b) in [(-3i64, 5i64), (-12, -10), (7, -1), (i64::MIN, -1)] {
            let got = ev(&format!("(binary-logand '{a} '{b})")).unwrap();
            assert_eq!(got, Value::int(a & b), "{a} & {b}");
        }
    }

    #[test]
    fn lazy_if() {
        assert_eq!(ev("(if 'nil 'a 'b)").unwrap(), Value::sym("b"));
        // the untaken branch would fail
        assert_eq!(ev("(if 't '1 (undefined-fn '2))").unwrap(), Value::int(1));
    }

    #[test]
    fn error_kinds_are_distinct() {
        assert!(matches!(ev("x"), Err(EvalError::Unbound(_))));
        assert!(matches!(ev("(no-such '1)"), Err(EvalError::Unregistered(_))));
        assert!(matches!(ev("(loghead '100000000000 '1)"), Err(EvalError::Domain { .. })));
    }

    #[test]
    fn floor_mod_fixing() {
        assert_eq!(ev("(floor '93 '10)").unwrap(), Value::int(9));
        assert_eq!(ev("(floor '-7 '2)").unwrap(), Value::int(-4));
        assert_eq!(ev("(mod '-7 '2)").unwrap(), Value::int(1));
        assert_eq!(ev("(mod '7 '0)").unwrap(), Value::int(7));
        assert_eq!(ev("(binary-+ 'a '3)").unwrap(), Value::int(3));
    }

    #[test]
    fn loghead_logapp() {
        assert_eq!(ev("(loghead '4 '-1)").unwrap(), Value::int(15));
        assert_eq!(ev("(logapp '4 '-1 '1)").unwrap(), Value::int(31));
    }

    #[test]
    fn list_evaluates_as_conses() {
        let env: Env = [(Symbol::new("a"), Value::int(1))].into_iter().collect();
        let reg = ExecRegistry::with_defaults();
        let l = eval_term(&parse_term("(list a '2)").unwrap(), &env, &reg).unwrap();
        let c = eval_term(&parse_term("(cons a (cons '2 'nil))").unwrap(), &env, &reg).unwrap();
        assert_eq!(l, c);
    }

    #[test]
    fn hons_get_returns_pair() {
        assert_eq!(
            ev("(hons-get 'b (hons-acons 'a '1 (hons-acons 'b '2 'nil)))").unwrap().to_string(),
            "(b . 2)"
        );
    }

    #[test]
    fn defined_functions_evaluate() {
        let mut reg = ExecRegistry::with_defaults();
        let body = parse_term("(binary-+ a (unary-- (mod a '2)))").unwrap();
        reg.define(&Symbol::new("round-to-even"), &[Symbol::new("a")], &body);
        let t = parse_term("(round-to-even '9)").unwrap();
        assert_eq!(eval_term(&t, &Env::new(), &reg).unwrap(), Value::int(8));
    }
}
