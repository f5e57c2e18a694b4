//! A conditional term-rewriting engine that keeps proved properties on
//! rewritten subterms.
//!
//! Terms carry side-conditions through the identity wrapper
//! `(rp 'prop x)`, which lets later hypothesis relief succeed without
//! backchaining. Rewriting is steered by a [`DontRw`] tree, association
//! lists with quoted keys are shadowed by constant-time lookup tables
//! (`falist`), and native meta rules may transform terms directly.
//!
//! ```
//! use retainrw::{Engine, ExecRegistry, RewriteConfig};
//!
//! let engine = Engine::load(
//!     "(def-rp-rule logand-to-4vec-bitand
//!        (implies (and (integerp x) (integerp y))
//!                 (equal (logand x y) (4vec-bitand x y))))
//!      (defthm logand-to-4vec-bitand-side-cond
//!        (implies (and (integerp x) (integerp y))
//!                 (integerp (4vec-bitand x y))))
//!      (rp-attach-sc logand-to-4vec-bitand logand-to-4vec-bitand-side-cond)",
//!     ExecRegistry::with_defaults(),
//! )
//! .unwrap();
//! let outcome = engine
//!     .prove_text(
//!         "(implies (and (integerp x) (integerp y))
//!                   (integerp (logand x y)))",
//!         &RewriteConfig::default(),
//!     )
//!     .unwrap();
//! assert!(outcome.proved());
//! ```

pub mod bench;
pub mod dontrw;
pub mod error;
pub mod eval;
pub mod falist;
pub mod meta;
pub mod rewriter;
pub mod rules;
pub mod sexpr;
pub mod syntax;
pub mod term;
pub mod validator;
pub mod value;

pub use dontrw::DontRw;
pub use error::{EvalError, ParseError, RuleError};
pub use eval::{eval_term, Env, ExecRegistry};
pub use meta::{MetaRegistry, MetaRule};
pub use rewriter::{Context, ProveOutcome, ProveReport, RewriteConfig, RewriteStats, Rewriter};
pub use rules::{Engine, Equiv, Hyp, Rule, RuleSet, SideConditionLemma};
pub use syntax::{parse_term, print_term};
pub use term::Term;
pub use value::{Symbol, Value};
