//! Shadowing fast-alists for association lists with quoted keys and
//! arbitrary (unquoted) value terms.
//!
//! `(falist 'SHADOW LOGICAL)` is an identity on `LOGICAL`. `SHADOW` lists
//! `(key . value-term)` pairs newest first and must agree pairwise with the
//! pairs readable from `LOGICAL`. In memory the shadow also carries a
//! persistent hash index so lookups cost one probe.

use crate::syntax::translate;
use crate::term::{Term, TermKind, FALIST};
use crate::value::Value;

#[derive(Clone)]
pub struct Shadow {
    pub alist: Value,
    index: im::HashMap<Value, Term>,
    len: usize,
}

impl Shadow {
    pub fn empty() -> Shadow {
        Shadow { alist: Value::Nil, index: im::HashMap::new(), len: 0 }
    }

    /// Rebuilds a shadow from its printed alist. Each entry's cdr is the
    /// representation of a value term.
    pub fn from_alist(alist: &Value) -> Option<Shadow> {
        let items = alist.list_items()?;
        let mut entries = Vec::with_capacity(items.len());
        for it in &items {
            let (k, repr) = it.as_cons()?;
            entries.push((k.clone(), translate(repr).ok()?));
        }
        let mut index = im::HashMap::new();
        for (k, v) in entries.into_iter().rev() {
            index.insert(k, v);
        }
        Some(Shadow { alist: alist.clone(), index, len: items.len() })
    }

    /// A new shadow with `(key . val)` in front; `self` is unchanged.
    pub fn extend(&self, key: Value, val: &Term) -> Shadow {
        Shadow {
            alist: Value::cons(Value::cons(key.clone(), val.to_value()), self.alist.clone()),
            index: self.index.update(key, val.clone()),
            len: self.len + 1,
        }
    }

    /// One index probe.
    pub fn get(&self, key: &Value) -> Option<&Term> {
        self.index.get(key)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// `(falist 'shadow logical)` → its parts, when arg0 carries an index.
pub fn as_falist(t: &Term) -> Option<(&Shadow, &Term)> {
    let (h, args) = t.as_app()?;
    if !h.is(FALIST) || args.len() != 2 {
        return None;
    }
    match args[0].kind() {
        TermKind::Shadow(s) => Some((s, &args[1])),
        _ => None,
    }
}

pub fn make_falist(shadow: Shadow, logical: Term) -> Term {
    Term::app(FALIST, vec![Term::new(TermKind::Shadow(shadow)), logical])
}

/// The `(key, value-term)` pairs of a logical alist term, front first.
/// Accepts `cons` chains of `(cons 'k v)` pairs ending in `'nil` or in a
/// quoted alist constant.
pub fn logical_entries(logical: &Term) -> Result<Vec<(Value, Term)>, String> {
    let mut out = Vec::new();
    let mut cur = logical;
    loop {
        if let Some(v) = cur.quoted() {
            let items = v
                .list_items()
                .ok_or_else(|| format!("quoted tail `{v}` is not a proper list"))?;
            for it in items {
                let (k, x) = it
                    .as_cons()
                    .ok_or_else(|| format!("quoted tail element `{it}` is not a pair"))?;
                out.push((k.clone(), Term::quote(x.clone())));
            }
            return Ok(out);
        }
        let (_, args) = cur
            .as_app()
            .filter(|(h, a)| h.is("cons") && a.len() == 2)
            .ok_or_else(|| format!("`{cur}` is not an alist cons chain"))?;
        let pair = &args[0];
        if let Some((_, pa)) = pair.as_app().filter(|(h, a)| h.is("cons") && a.len() == 2) {
            let key = pa[0]
                .quoted()
                .ok_or_else(|| format!("alist key `{}` is not quoted", pa[0]))?;
            out.push((key.clone(), pa[1].clone()));
        } else if let Some((k, x)) = pair.quoted().and_then(Value::as_cons) {
            out.push((k.clone(), Term::quote(x.clone())));
        } else {
            return Err(format!("alist entry `{pair}` is not a pair"));
        }
        cur = &args[1];
    }
}

/// Checks that a shadow alist and a logical alist list the same pairs in
/// the same order.
pub fn check_coherence(alist: &Value, logical: &Term) -> Result<(), String> {
    let items = alist
        .list_items()
        .ok_or_else(|| "shadow is not a proper list".to_string())?;
    let logical = logical_entries(logical)?;
    if items.len() != logical.len() {
        return Err(format!(
            "shadow has {} entries, logical alist has {}",
            items.len(),
            logical.len()
        ));
    }
    for (it, (lk, lv)) in items.iter().zip(&logical) {
        let (k, repr) = it
            .as_cons()
            .ok_or_else(|| format!("shadow element `{it}` is not a pair"))?;
        let v = translate(repr).map_err(|e| format!("shadow value `{repr}`: {e}"))?;
        if k != lk || &v != lv {
            return Err(format!("shadow entry ({k} . {repr}) does not match ({lk} . {lv})"));
        }
    }
    Ok(())
}

/// `(hons-acons key val tail)` → a shadowing fast-alist, or `None` when the
/// key is not quoted or the tail is not `'nil`, a falist, or a quoted alist.
pub fn fa_acons(key: &Term, val: &Term, tail: &Term) -> Option<Term> {
    let k = key.quoted()?;
    let (shadow, logical) = if let Some((s, l)) = as_falist(tail) {
        (s.clone(), l.clone())
    } else if let Some(v) = tail.quoted() {
        let items = v.list_items()?;
        let mut s = Shadow::empty();
        for it in items.iter().rev() {
            let (ik, ix) = it.as_cons()?;
            s = s.extend(ik.clone(), &Term::quote(ix.clone()));
        }
        (s, tail.clone())
    } else {
        return None;
    };
    let pair = Term::app("cons", vec![key.clone(), val.clone()]);
    let logical = Term::app("cons", vec![pair, logical]);
    Some(make_falist(shadow.extend(k.clone(), val), logical))
}

/// `(hons-get key fal)` → `(cons key val)` or `'nil` using a single shadow
/// probe; `None` when `fal` is not a falist or the key is not quoted.
pub fn fa_get(key: &Term, fal: &Term) -> Option<Term> {
    let k = key.quoted()?;
    let (shadow, _) = as_falist(fal)?;
    Some(match shadow.get(k) {
        Some(v) => Term::app("cons", vec![key.clone(), v.clone()]),
        None => Term::nil(),
    })
}

/// `(fast-alist-free fal)` → the logical alist.
pub fn fa_free(fal: &Term) -> Option<Term> {
    if fal.is_quote() {
        return Some(fal.clone());
    }
    as_falist(fal).map(|(_, l)| l.clone())
}
