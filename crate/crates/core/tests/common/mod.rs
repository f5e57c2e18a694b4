#![allow(dead_code)]

use rand::Rng;
use retainrw::bench::add_gets;
use retainrw::{parse_term, DontRw, Engine, ExecRegistry, Symbol, Term, Value};

pub const SUITES: &[&str] = &["demo", "bitand", "logops", "hons"];

pub fn rules_path(name: &str) -> String {
    format!("{}/rules/{name}.lsp", env!("CARGO_MANIFEST_DIR"))
}

pub fn conjecture_path(name: &str) -> String {
    format!("{}/conjectures/{name}.lsp", env!("CARGO_MANIFEST_DIR"))
}

pub fn shipped(name: &str) -> String {
    std::fs::read_to_string(rules_path(name)).expect("shipped rule file")
}

pub fn registry() -> ExecRegistry {
    let mut reg = ExecRegistry::with_demo_witnesses();
    add_gets(&mut reg);
    reg
}

pub fn engine(text: &str) -> Engine {
    Engine::load(text, registry()).expect("rules load")
}

pub fn p(s: &str) -> Term {
    parse_term(s).unwrap()
}

/// Patterns the generator instantiates: every rule lhs with its term
/// hypotheses, plus a few shapes that reach exec, metas, fast-alists and
/// `if` contexts.
pub struct Grammar {
    templates: Vec<(Term, Vec<Term>)>,
}

const EXTRA: &[&str] = &[
    "(if c x y)",
    "(not x)",
    "(binary-+ '3 (binary-+ '4 x))",
    "(hons-get 'k2 (hons-acons 'k1 x (hons-acons 'k2 y 'nil)))",
    "(gets '(k1 k3 k2) (hons-acons 'k1 x (hons-acons 'k2 y 'nil)))",
    "(fast-alist-free (hons-acons 'k1 x 'nil))",
    "(car (cons x y))",
];

const VARS: &[&str] = &["a", "b", "c", "x", "y"];

impl Grammar {
    pub fn new(e: &Engine) -> Grammar {
        let mut templates: Vec<(Term, Vec<Term>)> = e
            .rules
            .rules()
            .map(|r| (r.lhs.clone(), r.term_hyps().cloned().collect()))
            .collect();
        templates.extend(EXTRA.iter().map(|s| (p(s), vec![])));
        Grammar { templates }
    }

    fn leaf<R: Rng>(rng: &mut R) -> Term {
        if rng.gen_bool(0.7) {
            Term::var(VARS[rng.gen_range(0..VARS.len())])
        } else {
            Term::quote(Value::int(rng.gen_range(-3i64..=3)))
        }
    }

    fn gen<R: Rng>(&self, rng: &mut R, depth: u32, hyps: &mut Vec<Term>) -> Term {
        if depth == 0 || rng.gen_bool(0.25) {
            return Grammar::leaf(rng);
        }
        let (pat, hs) = &self.templates[rng.gen_range(0..self.templates.len())];
        let b: Vec<(Symbol, Term)> = pat
            .free_vars()
            .into_iter()
            .map(|v| (v, self.gen(rng, depth - 1, hyps)))
            .collect();
        for h in hs {
            if rng.gen_bool(0.8) {
                hyps.push(h.substitute(&b));
            }
        }
        pat.substitute(&b)
    }

    /// A random term and facts that make some of its rules applicable.
    pub fn conjecture<R: Rng>(&self, rng: &mut R, depth: u32) -> (Term, Vec<Term>) {
        let mut hyps = Vec::new();
        let t = self.gen(rng, depth, &mut hyps);
        (t, hyps)
    }
}

/// A random dont-rw co-structured with `t`, with occasional stops,
/// rewrite-everything leaves and width mismatches.
pub fn random_dw<R: Rng>(rng: &mut R, t: &Term) -> DontRw {
    let roll: f64 = rng.gen();
    if roll < 0.2 {
        return DontRw::stop();
    }
    if roll < 0.3 {
        return DontRw::rewrite_all();
    }
    match t.as_app() {
        Some((_, args)) => {
            if roll < 0.35 {
                return DontRw::node(vec![DontRw::rewrite_all(); args.len() + 2]);
            }
            let mut c = vec![DontRw::rewrite_all()];
            c.extend(args.iter().map(|a| random_dw(rng, a)));
            DontRw::node(c)
        }
        None => DontRw::rewrite_all(),
    }
}
