use crate::error::RuleError;
use crate::term::{Term, TermKind};
use crate::value::Symbol;

use super::{Definition, Equiv, Hyp, Rule};

/// The result of splitting a rule whose rhs binds intermediate values.
#[derive(Clone, Debug)]
pub struct LambdaSplit {
    pub main: Rule,
    /// Name of the opener declaration; `None` when the rhs had no lambdas.
    pub opener_name: Option<Symbol>,
    /// One opener per generated function, innermost first.
    pub openers: Vec<Rule>,
    /// Generated functions, innermost first.
    pub functions: Vec<Definition>,
}

struct Splitter<'a> {
    name: &'a Symbol,
    next: usize,
    defs: Vec<(usize, Definition)>,
}

impl Splitter<'_> {
    fn split(&mut self, t: &Term) -> Result<Term, RuleError> {
        match t.kind() {
            TermKind::Lambda(l) => {
                for (i, f) in l.formals.iter().enumerate() {
                    if l.formals[..i].contains(f) {
                        return Err(RuleError::Lambda {
                            name: self.name.clone(),
                            msg: format!("variable `{f}` is bound twice in one let layer"),
                        });
                    }
                }
                let k = self.next;
                self.next += 1;
                let fname = Symbol::new(&format!("{}_lambda-fnc_{k}", self.name));
                let body = self.split(&l.body)?;
                let args = l.args.iter().map(|a| self.split(a)).collect::<Result<Vec<_>, _>>()?;
                if let Some(v) = body.free_vars().into_iter().find(|v| !l.formals.contains(v)) {
                    return Err(RuleError::Lambda {
                        name: self.name.clone(),
                        msg: format!("lambda body uses `{v}`, which is not among its formals"),
                    });
                }
                self.defs.push((
                    k,
                    Definition {
                        name: fname.clone(),
                        formals: l.formals.clone(),
                        body,
                        executable: false,
                    },
                ));
                Ok(Term::app(fname, args))
            }
            TermKind::App(h, args) => Ok(Term::app(
                h.clone(),
                args.iter().map(|a| self.split(a)).collect::<Result<Vec<_>, _>>()?,
            )),
            _ => Ok(t.clone()),
        }
    }
}

/// Replaces each lambda layer of `rhs` by a fresh function
/// `<name>_lambda-fnc_<k>` (outermost is 0) and emits an opener rule per
/// function together with the main rule.
pub fn defthm_lambda(
    name: &Symbol,
    hyps: Vec<Hyp>,
    lhs: Term,
    rhs: &Term,
    equiv: Equiv,
) -> Result<LambdaSplit, RuleError> {
    if lhs.contains_lambda() || hyps.iter().any(|h| matches!(h, Hyp::Term(t) if t.contains_lambda())) {
        return Err(RuleError::Lambda {
            name: name.clone(),
            msg: "only the rhs may contain let or lambda".into(),
        });
    }
    let mut s = Splitter { name, next: 0, defs: Vec::new() };
    let main_rhs = s.split(rhs)?;
    let mut defs = s.defs;
    defs.sort_by(|a, b| b.0.cmp(&a.0));
    let functions: Vec<Definition> = defs.into_iter().map(|(_, d)| d).collect();
    let opener_name = (!functions.is_empty()).then(|| Symbol::new(&format!("{name}_lambda-opener")));
    let openers = functions
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let lhs = Term::app(
                d.name.clone(),
                d.formals.iter().map(|f| Term::new(TermKind::Var(f.clone()))).collect(),
            );
            let mut r = Rule::new(opener_name.clone().unwrap(), vec![], lhs, d.body.clone(), Equiv::Equal);
            r.part = i;
            r
        })
        .collect();
    Ok(LambdaSplit {
        main: Rule::new(name.clone(), hyps, lhs, main_rhs, equiv),
        opener_name,
        openers,
        functions,
    })
}
