use crate::term::{eq_modulo_rp, Term, IF, NOT};

/// Facts known to hold at the current position. Membership ignores `rp`
/// wrappers.
#[derive(Clone, Debug, Default)]
pub struct Context {
    facts: Vec<Term>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_terms<I: IntoIterator<Item = Term>>(facts: I) -> Self {
        let mut c = Context::new();
        for f in facts {
            c.push(f);
        }
        c
    }

    pub fn facts(&self) -> &[Term] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.facts.iter().any(|f| eq_modulo_rp(f, t))
    }

    /// Adds a fact unless it is `'t` or already known.
    pub fn push(&mut self, fact: Term) -> bool {
        let fact = fact.strip_rp_deep();
        if fact.is_t() || self.contains(&fact) {
            return false;
        }
        self.facts.push(fact);
        true
    }

    /// Adds each conjunct of `test`, reading `(if a b 'nil)` as a
    /// conjunction.
    pub fn assume(&mut self, test: &Term) {
        for c in conjuncts(test) {
            self.push(c);
        }
    }

    /// Adds the negation of `test`; `(not x)` negates to `x`.
    pub fn assume_not(&mut self, test: &Term) {
        let t = test.strip_rp();
        match t.as_app() {
            Some((h, [x])) if h.is(NOT) => self.assume(x),
            _ => {
                self.push(Term::app(NOT, vec![t.clone()]));
            }
        }
    }

    /// Whether `t` is known false.
    pub fn refutes(&self, t: &Term) -> bool {
        let t = t.strip_rp();
        if let Some((h, [x])) = t.as_app() {
            if h.is(NOT) && self.contains(x) {
                return true;
            }
        }
        self.facts.iter().any(|f| match f.as_app() {
            Some((h, [x])) if h.is(NOT) => eq_modulo_rp(x, t),
            _ => false,
        })
    }
}

/// Splits `(if a b 'nil)` chains into their conjuncts.
pub fn conjuncts(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        match t.strip_rp().as_app() {
            Some((h, [a, b, c])) if h.is(IF) && c.is_nil() => {
                stack.push(b.clone());
                stack.push(a.clone());
            }
            _ => out.push(t),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn no_duplicates_or_t() {
        let mut c = Context::new();
        assert!(c.push(p("(integerp x)")));
        assert!(!c.push(p("(integerp (rp 'integerp x))")));
        assert!(!c.push(Term::t()));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn conjunctions_split() {
        let mut c = Context::new();
        c.assume(&p("(and (p x) (q y) (r z))"));
        assert_eq!(c.len(), 3);
        assert!(c.contains(&p("(q y)")));
    }

    #[test]
    fn negation_symmetry() {
        let mut c = Context::new();
        c.assume_not(&p("(p x)"));
        assert!(c.refutes(&p("(p x)")));
        let mut c = Context::new();
        c.assume_not(&p("(not (p x))"));
        assert!(c.contains(&p("(p x)")));
        assert!(c.refutes(&p("(not (p x))")));
    }
}
