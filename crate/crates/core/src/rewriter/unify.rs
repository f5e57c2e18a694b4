use crate::term::{eq_modulo_rp, lookup, Bindings, Term, TermKind};
use crate::value::Symbol;

/// Matches `pattern` against `t`. `rp` wrappers in `t` are transparent at
/// function and constant positions of the pattern; each one peeled off is
/// recorded in `extracted` as `(payload, prop)`. Variables bind to the
/// subterm with its wrappers intact, and a repeated variable must match a
/// term equal to its first binding modulo wrappers.
pub fn unify(pattern: &Term, t: &Term, extracted: &mut Vec<(Term, Symbol)>) -> Option<Bindings> {
    let mut b = Bindings::new();
    unify_into(pattern, t, &mut b, extracted).then_some(b)
}

fn peel<'a>(t: &'a Term, extracted: &mut Vec<(Term, Symbol)>) -> &'a Term {
    let mut cur = t;
    while let Some((p, x)) = cur.as_rp() {
        extracted.push((x.clone(), p.clone()));
        cur = x;
    }
    cur
}

pub(crate) fn unify_into(
    pattern: &Term,
    t: &Term,
    b: &mut Bindings,
    extracted: &mut Vec<(Term, Symbol)>,
) -> bool {
    match pattern.kind() {
        TermKind::Var(v) => match lookup(b, v) {
            Some(prev) => eq_modulo_rp(prev, t),
            None => {
                b.push((v.clone(), t.clone()));
                true
            }
        },
        TermKind::Quote(_) | TermKind::Shadow(_) => {
            let t = peel(t, extracted);
            t.quoted().is_some() && t.quoted() == pattern.quoted()
        }
        TermKind::App(ph, pargs) => {
            let t = peel(t, extracted);
            match t.as_app() {
                Some((h, args)) if h == ph && args.len() == pargs.len() => pargs
                    .iter()
                    .zip(args)
                    .all(|(p, a)| unify_into(p, a, b, extracted)),
                _ => false,
            }
        }
        TermKind::Lambda(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::term::lookup;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn wrappers_are_transparent() {
        let mut ex = Vec::new();
        let t = p("(rp 'integerp (4vec-bitand (rp 'integerp a) b))");
        let b = unify(&p("(4vec-bitand x y)"), &t, &mut ex).unwrap();
        assert_eq!(lookup(&b, &Symbol::new("x")).unwrap(), &p("(rp 'integerp a)"));
        assert_eq!(lookup(&b, &Symbol::new("y")).unwrap(), &p("b"));
        assert_eq!(ex, vec![(p("(4vec-bitand (rp 'integerp a) b)"), Symbol::new("integerp"))]);
    }

    #[test]
    fn nonlinear_modulo_wrappers() {
        let mut ex = Vec::new();
        let b = unify(&p("(f x x)"), &p("(f (rp 'p a) a)"), &mut ex).unwrap();
        assert_eq!(lookup(&b, &Symbol::new("x")).unwrap(), &p("(rp 'p a)"));
        assert!(unify(&p("(f x x)"), &p("(f a b)"), &mut ex).is_none());
    }

    #[test]
    fn head_mismatch_fails() {
        assert!(unify(&p("(f x)"), &p("(g a)"), &mut Vec::new()).is_none());
        assert!(unify(&p("(f '1)"), &p("(f '2)"), &mut Vec::new()).is_none());
        assert!(unify(&p("(f '1)"), &p("(f (rp 'integerp '1))"), &mut Vec::new()).is_some());
    }
}
