use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use retainrw::bench::{add_gets, run_falist, run_tree, write_csv, BenchRow};
use retainrw::rewriter::{conjuncts, Context};
use retainrw::rules::{parse_rule_file, validate_rule, Decl};
use retainrw::validator::{check_rules_strict, check_run};
use retainrw::{parse_term, Engine, Equiv, ExecRegistry, ProveOutcome, RewriteConfig, RuleError};

#[derive(Parser)]
#[command(name = "retainrw", version, about = "Conditional term rewriter with retained side-conditions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a rule file; exit 1 on any violation.
    CheckRules {
        file: PathBuf,
        /// Also sample each rule for soundness.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Prove a conjecture: it must rewrite to 't in an iff position.
    Prove {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        conjecture: PathBuf,
        /// Check the run on N sampled environments.
        #[arg(long)]
        verify: Option<usize>,
    },
    /// Rewrite a term and print the result.
    Rewrite {
        #[command(flatten)]
        common: Common,
        /// Term text; read from --conjecture when absent.
        #[arg(long)]
        term: Option<String>,
        #[arg(long, conflicts_with = "term")]
        conjecture: Option<PathBuf>,
        /// Known facts, e.g. --assume '(integerp x)'.
        #[arg(long)]
        assume: Vec<String>,
        /// Rewrite the top term in an iff position.
        #[arg(long)]
        iff: bool,
        #[arg(long)]
        verify: Option<usize>,
    },
    /// The bitand/logand tree benchmark, CSV on stdout.
    BenchTree {
        #[arg(long, value_delimiter = ',', default_values_t = [6u32, 8, 10, 12])]
        depths: Vec<u32>,
        #[arg(long, default_value = "both", value_parser = ["both", "side-conditions", "backchaining"])]
        modes: String,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        step_limit: Option<u64>,
    },
    /// The fast-alist lookup benchmark, CSV on stdout.
    BenchFalist {
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 300, 1000])]
        sizes: Vec<usize>,
        /// Lookups per run; defaults to the alist size.
        #[arg(long)]
        lookups: Option<usize>,
        #[arg(long, default_value = "both", value_parser = ["both", "fast-alist", "scan"])]
        modes: String,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        step_limit: Option<u64>,
    },
}

#[derive(Args)]
struct Common {
    /// Rule file; may be repeated.
    #[arg(long, required = true)]
    rules: Vec<PathBuf>,
    #[arg(long)]
    no_side_conditions: bool,
    #[arg(long)]
    no_fast_alist: bool,
    #[arg(long)]
    step_limit: Option<u64>,
    #[arg(long)]
    backchain_depth: Option<usize>,
    #[arg(long)]
    trace: bool,
    /// Write rewrite statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Common {
    fn config(&self) -> RewriteConfig {
        let d = RewriteConfig::default();
        RewriteConfig {
            step_limit: self.step_limit.unwrap_or(d.step_limit),
            backchain_depth: self.backchain_depth.unwrap_or(d.backchain_depth),
            side_conditions_enabled: !self.no_side_conditions,
            fast_alist_enabled: !self.no_fast_alist,
            trace: self.trace,
            ..d
        }
    }
}

enum Failure {
    /// Not proved, or violations found.
    No(String),
    /// Usage or I/O.
    Usage(String),
}

type Res = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn registry() -> ExecRegistry {
    let mut reg = ExecRegistry::with_demo_witnesses();
    add_gets(&mut reg);
    reg
}

fn load(paths: &[PathBuf]) -> Result<Engine, Failure> {
    let mut text = String::new();
    for p in paths {
        text.push_str(&read(p)?);
        text.push('\n');
    }
    Engine::load(&text, registry()).map_err(rule_failure)
}

fn rule_failure(e: RuleError) -> Failure {
    match e {
        RuleError::Parse(_) => Failure::Usage(e.to_string()),
        _ => Failure::No(e.to_string()),
    }
}

fn write_stats(path: &Option<PathBuf>, stats: &retainrw::RewriteStats) -> Res {
    if let Some(p) = path {
        let json = serde_json::to_string_pretty(stats).expect("stats serialize");
        fs::write(p, json).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn verify(engine: &Engine, before: &retainrw::Term, after: &retainrw::Term, ctx: &Context, mode: Equiv, n: usize, seed: u64) -> Res {
    let r = check_run(before, after, ctx, mode, n, &engine.exec, seed);
    print!("verify: {r}");
    if r.ok {
        Ok(())
    } else {
        Err(Failure::No("verification failed".into()))
    }
}

fn check_rules(file: &Path, strict: bool, samples: usize, seed: u64) -> Res {
    let text = read(file)?;
    let decls = parse_rule_file(&text).map_err(rule_failure)?;
    let mut bad = 0;
    for d in &decls {
        if let Decl::Rules { rules, .. } = d {
            for r in rules {
                if let Err(vs) = validate_rule(r) {
                    for v in vs {
                        println!("{}: {v}", r.label());
                        bad += 1;
                    }
                }
            }
        }
    }
    if bad > 0 {
        return Err(Failure::No(format!("{bad} violation(s)")));
    }
    let engine = Engine::from_decls(&decls, registry()).map_err(rule_failure)?;
    println!(
        "{} rules, {} side-condition attachments, {} meta rules",
        engine.rules.len(),
        engine.rules.attachment_count(),
        engine.metas.len()
    );
    if strict {
        let report = check_rules_strict(&engine.rules, &engine.exec, samples, seed);
        for w in &report.warnings {
            println!("warning: {w}");
        }
        for v in &report.violations {
            println!("unsound: {v}");
        }
        if !report.ok() {
            return Err(Failure::No(format!("{} unsound rule(s)", report.violations.len())));
        }
    }
    println!("ok");
    Ok(())
}

fn prove(common: &Common, conjecture: &Path, verify_n: Option<usize>) -> Res {
    let engine = load(&common.rules)?;
    let text = read(conjecture)?;
    let report = engine
        .prove_text(&text, &common.config())
        .map_err(|e| Failure::Usage(format!("{}: {e}", conjecture.display())))?;
    for l in &report.trace {
        println!("{l}");
    }
    for d in &report.diagnostics {
        eprintln!("{d}");
    }
    write_stats(&common.stats, &report.stats)?;
    if let Some(n) = verify_n {
        verify(&engine, &report.goal, &report.result, &report.context, Equiv::Iff, n, common.seed)?;
    }
    match report.outcome {
        ProveOutcome::Proved => {
            println!("proved");
            Ok(())
        }
        ProveOutcome::NotProved => Err(Failure::No(format!("not proved; rewrote to\n{}", report.result))),
        ProveOutcome::StepLimit => Err(Failure::No(format!(
            "step limit reached after {} rewrite calls; last term\n{}",
            report.stats.rewrite_calls, report.result
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn rewrite(common: &Common, term: &Option<String>, conjecture: &Option<PathBuf>, assume: &[String], iff: bool, verify_n: Option<usize>) -> Res {
    let engine = load(&common.rules)?;
    let text = match (term, conjecture) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => return Err(Failure::Usage("give --term or --conjecture".into())),
    };
    let parse = |s: &str| parse_term(s).map_err(|e| Failure::Usage(format!("`{s}`: {e}")));
    let t = retainrw::syntax::beta_reduce(&parse(&text)?).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut ctx = Context::new();
    for a in assume {
        for c in conjuncts(&parse(a)?) {
            ctx.push(c);
        }
    }
    let cfg = RewriteConfig { iff_top: iff, ..common.config() };
    let mut rw = engine.rewriter(cfg);
    let out = rw.rewrite_top(&t, &ctx);
    for l in &rw.trace {
        println!("{l}");
    }
    for d in &rw.diagnostics {
        eprintln!("{d}");
    }
    println!("{out}");
    let stats = rw.stats.clone();
    drop(rw);
    write_stats(&common.stats, &stats)?;
    if let Some(n) = verify_n {
        let mode = if iff { Equiv::Iff } else { Equiv::Equal };
        verify(&engine, &t, &out, &ctx, mode, n, common.seed)?;
    }
    if stats.step_limit_hit {
        return Err(Failure::No("step limit reached".into()));
    }
    Ok(())
}

fn emit(rows: &[BenchRow], out: &Option<PathBuf>) -> Res {
    let io_err = |e: csv::Error| Failure::Usage(e.to_string());
    match out {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            write_csv(rows, f).map_err(io_err)
        }
        None => write_csv(rows, io::stdout().lock()).map_err(io_err),
    }?;
    let bad: Vec<_> = rows.iter().filter(|r| r.status != "proved" && r.status != "ok").collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::No(format!("{} row(s) did not succeed", bad.len())))
    }
}

fn base_config(step_limit: Option<u64>) -> RewriteConfig {
    let d = RewriteConfig::default();
    RewriteConfig { step_limit: step_limit.unwrap_or(d.step_limit), ..d }
}

fn run(cli: Cli) -> Res {
    match cli.cmd {
        Cmd::CheckRules { file, strict, samples, seed } => check_rules(&file, strict, samples, seed),
        Cmd::Prove { common, conjecture, verify } => prove(&common, &conjecture, verify),
        Cmd::Rewrite { common, term, conjecture, assume, iff, verify } => {
            rewrite(&common, &term, &conjecture, &assume, iff, verify)
        }
        Cmd::BenchTree { depths, modes, reps, out, step_limit } => {
            if let Some(d) = depths.iter().find(|&&d| d < 2) {
                return Err(Failure::Usage(format!("depth {d} is below 2")));
            }
            let cfg = base_config(step_limit);
            let mut rows = Vec::new();
            for &d in &depths {
                if modes != "backchaining" {
                    rows.push(run_tree(d, true, reps, &cfg));
                }
                if modes != "side-conditions" {
                    rows.push(run_tree(d, false, reps, &cfg));
                }
            }
            emit(&rows, &out)
        }
        Cmd::BenchFalist { sizes, lookups, modes, reps, seed, out, step_limit } => {
            if sizes.contains(&0) {
                return Err(Failure::Usage("sizes must be at least 1".into()));
            }
            let cfg = base_config(step_limit);
            let mut rows = Vec::new();
            for &n in &sizes {
                let m = lookups.unwrap_or(n);
                if modes != "scan" {
                    rows.push(run_falist(n, m, true, reps, seed, &cfg));
                }
                if modes != "fast-alist" {
                    rows.push(run_falist(n, m, false, reps, seed, &cfg));
                }
            }
            emit(&rows, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::No(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
