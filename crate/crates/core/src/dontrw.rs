//! The dont-rw co-structure: a tree traversed alongside a term that says
//! where rewriting must stop.

use std::fmt;
use std::sync::Arc;

use crate::term::{Term, TermKind};
use crate::value::Value;

#[derive(Clone, PartialEq, Eq)]
pub enum DontRw {
    /// `true` stops rewriting at this position; `false` rewrites everything
    /// below it.
    Leaf(bool),
    /// Mirrors an application: child 0 is the head position, child `i + 1`
    /// belongs to argument `i`.
    Node(Arc<[DontRw]>),
}

impl Default for DontRw {
    fn default() -> Self {
        DontRw::Leaf(false)
    }
}

impl DontRw {
    pub fn rewrite_all() -> DontRw {
        DontRw::Leaf(false)
    }

    pub fn stop() -> DontRw {
        DontRw::Leaf(true)
    }

    pub fn node(children: Vec<DontRw>) -> DontRw {
        DontRw::Node(children.into())
    }

    pub fn is_stop(&self) -> bool {
        matches!(self, DontRw::Leaf(true))
    }

    /// The structure for argument `i` of an application with `n` arguments.
    /// A node of the wrong width degrades to `Leaf(false)`.
    pub fn arg(&self, i: usize, n: usize) -> DontRw {
        match self {
            DontRw::Node(c) if c.len() == n + 1 => c[i + 1].clone(),
            _ => DontRw::Leaf(false),
        }
    }

    /// Marks every variable and constant of a template as stop and every
    /// application as rewritable. Used for rule right-hand sides and
    /// hypotheses: instantiated variables are already rewritten.
    pub fn from_template(t: &Term) -> DontRw {
        match t.kind() {
            TermKind::Var(_) | TermKind::Quote(_) | TermKind::Shadow(_) => DontRw::Leaf(true),
            TermKind::App(_, args) => {
                let mut c = Vec::with_capacity(args.len() + 1);
                c.push(DontRw::Leaf(false));
                c.extend(args.iter().map(DontRw::from_template));
                DontRw::node(c)
            }
            TermKind::Lambda(_) => DontRw::Leaf(false),
        }
    }

    /// Reads the s-expression form: `nil` rewrites, any other atom stops,
    /// and a list is a node.
    pub fn from_value(v: &Value) -> DontRw {
        match v {
            Value::Nil => DontRw::Leaf(false),
            Value::Cons(_) => match v.list_items() {
                Some(items) => DontRw::node(items.iter().map(DontRw::from_value).collect()),
                None => DontRw::Leaf(false),
            },
            _ => DontRw::Leaf(true),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            DontRw::Leaf(false) => Value::Nil,
            DontRw::Leaf(true) => Value::t(),
            DontRw::Node(c) => Value::list(c.iter().map(DontRw::to_value).collect::<Vec<_>>()),
        }
    }
}

impl fmt::Debug for DontRw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_value())
    }
}
