use crate::error::RuleError;
use crate::term::{eq_modulo_rp, Term, TermKind};

use super::{Rule, SideConditionLemma};

fn wrap_occurrences(t: &Term, lem: &SideConditionLemma, found: &mut usize) -> Term {
    if eq_modulo_rp(t, &lem.subject) {
        *found += 1;
        return Term::rp(&lem.prop, t.clone());
    }
    if let Some((p, x)) = t.as_rp() {
        return Term::rp(p, wrap_occurrences(x, lem, found));
    }
    match t.kind() {
        TermKind::App(h, args) => {
            let before = *found;
            let new: Vec<Term> = args.iter().map(|a| wrap_occurrences(a, lem, found)).collect();
            if *found == before {
                t.clone()
            } else {
                Term::app(h.clone(), new)
            }
        }
        _ => t.clone(),
    }
}

pub(crate) fn occurs(t: &Term, subject: &Term) -> bool {
    if eq_modulo_rp(t, subject) {
        return true;
    }
    match t.strip_rp().kind() {
        TermKind::App(_, args) => args.iter().any(|a| occurs(a, subject)),
        _ => false,
    }
}

/// Merges a side-condition lemma into a rule: every occurrence of the
/// lemma's subject in the rule's right-hand side gets wrapped as
/// `(rp 'prop subject)`. The lemma's hypotheses must all be hypotheses of
/// the rule.
pub fn attach_sc(r: &Rule, lem: &SideConditionLemma) -> Result<Rule, RuleError> {
    let err = |msg: String| RuleError::Attach { rule: r.name.clone(), lemma: lem.name.clone(), msg };
    for h in &lem.hyps {
        if !r.hyps.contains(h) {
            return Err(err(format!("lemma hypothesis `{h}` is not a hypothesis of the rule")));
        }
    }
    let mut found = 0;
    let wrapped = wrap_occurrences(&r.sc_wrapped_rhs, lem, &mut found);
    if found == 0 {
        return Err(err(format!("`{}` does not occur in the rule's rhs", lem.subject)));
    }
    let mut out = r.clone();
    out.sc_wrapped_rhs = wrapped;
    out.attachments.push(lem.name.clone());
    out.refresh();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{parse_rule_file, Decl};
    use crate::syntax::parse_term;

    fn load(text: &str) -> (Rule, Vec<SideConditionLemma>) {
        let mut rule = None;
        let mut lemmas = Vec::new();
        for d in parse_rule_file(text).unwrap() {
            match d {
                Decl::Rules { mut rules, .. } => rule = Some(rules.remove(0)),
                Decl::Lemma(l) => lemmas.push(l),
                _ => {}
            }
        }
        (rule.unwrap(), lemmas)
    }

    #[test]
    fn logand_attachment() {
        let (r, l) = load(
            "(def-rp-rule logand-to-4vec-bitand
               (implies (and (integerp x) (integerp y))
                        (equal (logand x y) (4vec-bitand x y))))
             (defthm logand-to-4vec-bitand-side-cond
               (implies (and (integerp x) (integerp y))
                        (integerp (4vec-bitand x y))))",
        );
        let a = attach_sc(&r, &l[0]).unwrap();
        assert_eq!(a.sc_wrapped_rhs, parse_term("(rp 'integerp (4vec-bitand x y))").unwrap());
        assert_eq!(a.rhs, r.rhs);
        assert_eq!(a.attachments.len(), 1);
    }

    #[test]
    fn hyp_subset_is_required() {
        let (r, l) = load(
            "(def-rp-rule r (implies (integerp x) (equal (f x) (g x))))
             (defthmd l (implies (posp x) (integerp (g x))))",
        );
        let e = attach_sc(&r, &l[0]).unwrap_err();
        assert!(e.to_string().contains("(posp x)"), "{e}");
    }

    #[test]
    fn subject_must_occur() {
        let (r, l) = load("(def-rp-rule r (equal (f x) (g x))) (defthmd l (integerp (h x)))");
        assert!(attach_sc(&r, &l[0]).is_err());
    }

    #[test]
    fn wrappers_nest_outward() {
        let (r, l) = load(
            "(def-rp-rule r (equal (f x) (g (h x) (h x))))
             (defthmd l1 (integerp (h x)))
             (defthmd l2 (natp (h x)))",
        );
        let a = attach_sc(&attach_sc(&r, &l[0]).unwrap(), &l[1]).unwrap();
        assert_eq!(
            a.sc_wrapped_rhs,
            parse_term("(g (rp 'natp (rp 'integerp (h x))) (rp 'natp (rp 'integerp (h x))))").unwrap()
        );
    }
}
