//! Ground values: the codomain of evaluation and the datum type of the reader.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

/// A case-sensitive symbol. There is no package system.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is(&self, name: &str) -> bool {
        &*self.0 == name
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// An s-expression value. `Nil` doubles as the empty list and as falsity;
/// the truth symbol is `t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Nil,
    Int(BigInt),
    Sym(Symbol),
    Cons(Arc<(Value, Value)>),
}

impl Value {
    pub fn t() -> Value {
        Value::Sym(Symbol::new("t"))
    }

    pub fn sym(name: &str) -> Value {
        if name == "nil" {
            Value::Nil
        } else {
            Value::Sym(Symbol::new(name))
        }
    }

    pub fn int(i: impl Into<BigInt>) -> Value {
        Value::Int(i.into())
    }

    pub fn bool(b: bool) -> Value {
        if b {
            Value::t()
        } else {
            Value::Nil
        }
    }

    pub fn cons(car: Value, cdr: Value) -> Value {
        Value::Cons(Arc::new((car, cdr)))
    }

    /// Builds a proper list.
    pub fn list<I>(items: I) -> Value
    where
        I: IntoIterator<Item = Value>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Value::Nil, |acc, v| Value::cons(v, acc))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Value::Nil)
    }

    pub fn truthy(&self) -> bool {
        !self.is_nil()
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Value::Sym(s) if s.is("t"))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            Value::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_cons(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Cons(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn car(&self) -> Value {
        self.as_cons().map(|(a, _)| a.clone()).unwrap_or(Value::Nil)
    }

    pub fn cdr(&self) -> Value {
        self.as_cons().map(|(_, d)| d.clone()).unwrap_or(Value::Nil)
    }

    pub fn is_atom(&self) -> bool {
        !matches!(self, Value::Cons(_))
    }

    /// Elements of a proper list, or `None` for a dotted/improper list.
    pub fn list_items(&self) -> Option<Vec<Value>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Value::Nil => return Some(out),
                Value::Cons(p) => {
                    out.push(p.0.clone());
                    cur = &p.1;
                }
                _ => return None,
            }
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Nil => 0,
            Value::Sym(s) if s.is("t") => 1,
            Value::Int(_) => 2,
            Value::Sym(_) => 3,
            Value::Cons(_) => 4,
        }
    }

    /// Total order used by `lexorder`: nil < t < integers < other symbols <
    /// pairs, pairs compared on car then cdr.
    pub fn lex_cmp(&self, other: &Value) -> Ordering {
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Sym(a), Value::Sym(b)) => a.as_str().cmp(b.as_str()),
            (Value::Cons(a), Value::Cons(b)) => {
                a.0.lex_cmp(&b.0).then_with(|| a.1.lex_cmp(&b.1))
            }
            _ => Ordering::Equal,
        }
    }

    /// `(lexorder a b)`: true when `a` is not above `b`.
    pub fn lexorder(&self, other: &Value) -> bool {
        self.lex_cmp(other) != Ordering::Greater
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nil => f.write_str("nil"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s.as_str()),
            Value::Cons(_) => {
                f.write_str("(")?;
                let mut cur = self;
                let mut first = true;
                loop {
                    match cur {
                        Value::Cons(p) => {
                            if !first {
                                f.write_str(" ")?;
                            }
                            first = false;
                            write!(f, "{}", p.0)?;
                            cur = &p.1;
                        }
                        Value::Nil => break,
                        tail => {
                            write!(f, " . {tail}")?;
                            break;
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexorder_ranks() {
        let order = [
            Value::Nil,
            Value::t(),
            Value::int(-3),
            Value::int(7),
            Value::sym("a"),
            Value::sym("b"),
            Value::cons(Value::sym("a"), Value::Nil),
        ];
        for (i, a) in order.iter().enumerate() {
            for (j, b) in order.iter().enumerate() {
                assert_eq!(a.lex_cmp(b), i.cmp(&j), "{a} vs {b}");
            }
        }
        assert!(!Value::sym("b").lexorder(&Value::sym("a")));
    }

    #[test]
    fn dotted_display() {
        let v = Value::list([
            Value::cons(Value::sym("k"), Value::sym("v")),
            Value::int(3),
        ]);
        assert_eq!(v.to_string(), "((k . v) 3)");
    }
}
