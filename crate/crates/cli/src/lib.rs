//! The `polygraph` command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 undecided (a limit was
//! hit), 3 verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use polygraph_core::cayley::{self, CayleyError};
use polygraph_core::oracle::{BfsLimits, BfsVerdict, Searcher};
use polygraph_core::rewriting::{
    complete, encode, enumerate_normal_forms, word_equal, Alphabet, CompletionLimits, CompletionOutcome, Enumeration,
    RewritingSystem, Shortlex, Word,
};
use polygraph_core::tietze::{run_script, ScriptErrorKind};
use polygraph_core::{parse, render, Polygraph};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Undecided(String),
    #[error("{0}")]
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Undecided(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "polygraph", version, about = "Presentations, rewriting, Tietze scripts and Cayley complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Limits {
    /// Shortlex precedence, least first: `a,b,c` (inverses after, same order) or `a,a',b,b'`.
    #[arg(long)]
    precedence: Option<String>,
    #[arg(long, default_value_t = CompletionLimits::default().max_rules)]
    max_rules: usize,
    #[arg(long, default_value_t = CompletionLimits::default().max_lhs_len)]
    max_len: usize,
    #[arg(long, default_value_t = CompletionLimits::default().max_steps)]
    max_steps: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a presentation and print it in canonical form.
    Parse { file: PathBuf },
    /// Run Knuth-Bendix completion and print the rewriting system.
    Complete {
        file: PathBuf,
        #[command(flatten)]
        limits: Limits,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Print the normal form of a word.
    Nf {
        file: PathBuf,
        word: String,
        #[command(flatten)]
        limits: Limits,
    },
    /// Decide whether two words are equal.
    Eq {
        file: PathBuf,
        w1: String,
        w2: String,
        /// Search radius when no convergent system is found.
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, default_value_t = 2_000_000)]
        max_states: usize,
        #[arg(long)]
        precedence: Option<String>,
        /// Completion budget before falling back to search.
        #[arg(long, default_value_t = 256)]
        max_rules: usize,
        #[arg(long)]
        json: bool,
    },
    /// List the normal forms of a finite group.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[command(flatten)]
        limits: Limits,
        #[arg(long)]
        json: bool,
    },
    /// Verify and run a Tietze script.
    Tietze {
        file: PathBuf,
        script: PathBuf,
        /// Compare group orders before and after.
        #[arg(long)]
        check_order: bool,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Cayley graph and complex exports.
    #[command(subcommand)]
    Cayley(CayleyCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComplexFormat {
    Json,
}

#[derive(Subcommand, Debug)]
enum CayleyCommand {
    Graph {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: GraphFormat,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    Complex {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: ComplexFormat,
        /// Add H0, H1, H2 and the Euler characteristic to the export.
        #[arg(long)]
        homology: bool,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

fn load(path: &Path) -> Result<Polygraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let p = parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let report = p.validate();
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::Verification(format!("{}: {}", path.display(), lines.join("; "))));
    }
    Ok(p)
}

fn encoded(p: &Polygraph, precedence: Option<&str>) -> Result<RewritingSystem, Failure> {
    let order = match precedence {
        Some(text) => {
            let alphabet = Alphabet::new(p.gen_names().cloned().collect());
            Some(Shortlex::parse(&alphabet, text).map_err(usage)?)
        }
        None => None,
    };
    let (s, _) = encode(p, order.as_ref(), false).map_err(usage)?;
    Ok(s)
}

fn run_completion(p: &Polygraph, limits: &Limits) -> Result<CompletionOutcome, Failure> {
    let s = encoded(p, limits.precedence.as_deref())?;
    let limits = CompletionLimits { max_rules: limits.max_rules, max_lhs_len: limits.max_len, max_steps: limits.max_steps };
    complete(&s, limits).map_err(usage)
}

fn converged(p: &Polygraph, limits: &Limits) -> Result<RewritingSystem, Failure> {
    match run_completion(p, limits)? {
        CompletionOutcome::Converged(s) => Ok(s),
        CompletionOutcome::GaveUp { system, reason } => {
            Err(Failure::Undecided(format!("completion gave up: {reason} ({} rules)", system.rules().len())))
        }
    }
}

fn word(p: &Polygraph, s: &RewritingSystem, text: &str) -> Result<Word, Failure> {
    let w = p.word(text).map_err(usage)?;
    s.alphabet().from_zigzag(&w).map_err(usage)
}

fn forms(s: &RewritingSystem, cap: usize) -> Result<Vec<Word>, Failure> {
    match enumerate_normal_forms(s, cap).map_err(usage)? {
        Enumeration::Finite(forms) => Ok(forms),
        Enumeration::MoreThanCap => Err(Failure::Undecided(format!("more than {cap} normal forms"))),
    }
}

fn io(e: std::io::Error) -> Failure {
    usage(e)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Parse { file } => {
            let p = load(&file)?;
            out.write_all(render(&p).as_bytes()).map_err(io)
        }
        Command::Complete { file, limits, output } => {
            let p = load(&file)?;
            match run_completion(&p, &limits)? {
                CompletionOutcome::Converged(s) => {
                    let _ = writeln!(err, "converged: {} rules", s.rules().len());
                    match output {
                        Some(path) => fs::write(&path, s.to_text()).map_err(|e| usage(format!("{}: {e}", path.display()))),
                        None => out.write_all(s.to_text().as_bytes()).map_err(io),
                    }
                }
                CompletionOutcome::GaveUp { system, reason } => Err(Failure::Undecided(format!(
                    "completion gave up: {reason} ({} rules, longest left side {})",
                    system.rules().len(),
                    system.rules().iter().map(|r| r.lhs.len()).max().unwrap_or(0)
                ))),
            }
        }
        Command::Nf { file, word: text, limits } => {
            let p = load(&file)?;
            let s = converged(&p, &limits)?;
            let w = word(&p, &s, &text)?;
            let nf = s.normalize(&w).map_err(|e| Failure::Undecided(e.to_string()))?;
            writeln!(out, "{}", s.alphabet().render(&nf)).map_err(io)
        }
        Command::Eq { file, w1, w2, radius, max_states, precedence, max_rules, json } => {
            let p = load(&file)?;
            let limits = Limits { precedence, max_rules, ..default_limits() };
            let (u, v) = (p.word(&w1).map_err(usage)?, p.word(&w2).map_err(usage)?);
            let (equal, method) = match converged(&p, &limits) {
                Ok(s) => {
                    let (a, b) = (s.alphabet().from_zigzag(&u).map_err(usage)?, s.alphabet().from_zigzag(&v).map_err(usage)?);
                    (word_equal(&s, &a, &b).map_err(usage)?, "rewriting".to_string())
                }
                Err(Failure::Undecided(why)) => {
                    let _ = writeln!(err, "{why}; falling back to search");
                    let search = Searcher::new(&p).map_err(usage)?;
                    let limits = BfsLimits { max_states, ..BfsLimits::radius(radius) };
                    match search.equal(&u, &v, limits).map_err(usage)? {
                        BfsVerdict::Equal(n) => (true, format!("search radius {n}")),
                        BfsVerdict::NotWithinRadius => {
                            return Err(Failure::Undecided(format!("not found equal within radius {radius}")));
                        }
                    }
                }
                Err(e) => return Err(e),
            };
            if json {
                writeln!(out, "{}", json!({ "w1": w1, "w2": w2, "equal": equal, "method": method })).map_err(io)
            } else {
                writeln!(out, "{}", if equal { "equal" } else { "not equal" }).map_err(io)
            }
        }
        Command::Enumerate { file, cap, limits, json } => {
            let p = load(&file)?;
            let s = converged(&p, &limits)?;
            let forms = forms(&s, cap)?;
            for (i, w) in forms.iter().enumerate() {
                let text = s.alphabet().render(w);
                if json {
                    writeln!(out, "{}", json!({ "index": i, "form": text })).map_err(io)?;
                } else {
                    writeln!(out, "{text}").map_err(io)?;
                }
            }
            if json {
                writeln!(out, "{}", json!({ "count": forms.len() })).map_err(io)?;
            } else {
                let _ = writeln!(err, "{} elements", forms.len());
            }
            Ok(())
        }
        Command::Tietze { file, script, check_order, cap, json } => {
            let p = load(&file)?;
            let text = fs::read_to_string(&script).map_err(|e| usage(format!("{}: {e}", script.display())))?;
            let (steps, states) = run_script(&p, &text).map_err(|e| {
                let msg = format!("{}: {e}", script.display());
                match e.kind {
                    ScriptErrorKind::Syntax(_) => Failure::Usage(msg),
                    _ => Failure::Verification(msg),
                }
            })?;
            for (i, step) in steps.steps.iter().enumerate() {
                let chi = states[i + 1].euler_data().chi();
                if json {
                    writeln!(out, "{}", json!({ "step": i + 1, "text": step.to_string(), "verified": true, "chi": chi }))
                        .map_err(io)?;
                } else {
                    writeln!(out, "ok {}: {step}", i + 1).map_err(io)?;
                }
            }
            let last = states.last().expect("initial state");
            if json {
                writeln!(out, "{}", json!({ "result": render(last) })).map_err(io)?;
            } else {
                out.write_all(render(last).as_bytes()).map_err(io)?;
            }
            if check_order {
                let defaults = default_limits();
                let before = forms(&converged(&p, &defaults)?, cap)?.len();
                let after = forms(&converged(last, &defaults)?, cap)?.len();
                if json {
                    writeln!(out, "{}", json!({ "order_before": before, "order_after": after })).map_err(io)?;
                } else {
                    writeln!(out, "order {before} -> {after}").map_err(io)?;
                }
                if before != after {
                    return Err(Failure::Verification(format!("group order changed from {before} to {after}")));
                }
            }
            Ok(())
        }
        Command::Cayley(c) => cayley_command(c, out),
    }
}

fn cayley_failure(e: CayleyError) -> Failure {
    match e {
        CayleyError::InfiniteOrUnknown(_) => Failure::Undecided(e.to_string()),
        other => usage(other),
    }
}

fn default_limits() -> Limits {
    let d = CompletionLimits::default();
    Limits { precedence: None, max_rules: d.max_rules, max_len: d.max_lhs_len, max_steps: d.max_steps }
}

fn cayley_command(c: CayleyCommand, out: &mut dyn Write) -> Result<(), Failure> {
    match c {
        CayleyCommand::Graph { file, format, cap } => {
            let p = load(&file)?;
            let s = converged(&p, &default_limits())?;
            let g = cayley::build_graph(&s, cap).map_err(cayley_failure)?;
            let text = match format {
                GraphFormat::Dot => cayley::graph_to_dot(&g),
                GraphFormat::Json => cayley::graph_to_json(&g),
            };
            out.write_all(text.as_bytes()).map_err(io)
        }
        CayleyCommand::Complex { file, format: ComplexFormat::Json, homology, cap } => {
            let p = load(&file)?;
            let s = converged(&p, &default_limits())?;
            let c = cayley::build_complex(&p, &s, cap).map_err(cayley_failure)?;
            let text = cayley::complex_to_json(&c);
            if !homology {
                return out.write_all(text.as_bytes()).map_err(io);
            }
            let h = cayley::homology(&c);
            let mut doc: serde_json::Value = serde_json::from_str(&text).expect("export is JSON");
            let torsion: Vec<serde_json::Value> = h
                .h1_torsion
                .iter()
                .map(|t| t.to_string().parse::<i64>().map(Into::into).unwrap_or_else(|_| t.to_string().into()))
                .collect();
            doc["homology"] = json!({
                "h0_rank": h.h0_rank,
                "h1_rank": h.h1_rank,
                "h1_torsion": torsion,
                "h2_rank": h.h2_rank,
                "euler": h.euler,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
            text.push('\n');
            out.write_all(text.as_bytes()).map_err(io)
        }
    }
}
