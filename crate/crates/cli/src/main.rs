//! `buchi`: complement, compare and inspect Büchi automata.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage, parse or I/O error,
//! 3 the chosen algorithm does not apply to the input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use buchi_core::algorithm::{complement, contains, Algorithm};
use buchi_core::classify::classify;
use buchi_core::io::{lasso_dag_to_dot, ldbw_dag_to_dot, nbw_to_dot, parse_with, write, ParseOptions};
use buchi_core::lang::{complement_check, member, random_nbw, CheckReport, Shape};
use buchi_core::lasso::{parse_symbols, LassoWord};
use buchi_core::ldbw::ldbw_codet_dag;
use buchi_core::run_dag::{analyze_dag, lasso_dag, DagMode, DagReport};
use buchi_core::{fixtures, ldbw_partition, Error, Nbw};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "buchi", version, about = "Complementation and containment for Büchi automata")]
struct Cli {
    /// Keep input automata as written instead of adding a sink for missing transitions.
    #[arg(long, global = true)]
    no_complete: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the classification of an automaton.
    Classify { file: PathBuf },
    /// Build a complement automaton.
    Complement {
        file: PathBuf,
        #[arg(long, default_value = "auto")]
        algo: Algorithm,
        /// Output file (stdout if absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check whether L(A) is contained in L(B).
    Contains {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "auto")]
        algo: Algorithm,
    },
    /// Check whether the automaton accepts STEM LOOP^ω.
    Member {
        file: PathBuf,
        #[arg(long, default_value = "")]
        stem: String,
        #[arg(long = "loop")]
        cycle: String,
    },
    /// Compare an automaton and its complement on all short lasso words.
    CheckComplement {
        file: PathBuf,
        #[arg(long, default_value = "auto")]
        algo: Algorithm,
        /// Check this complement instead of building one.
        #[arg(long)]
        complement: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_stem: usize,
        #[arg(long, default_value_t = 3)]
        max_loop: usize,
    },
    /// Analyse the run DAG over STEM LOOP^ω.
    Dag {
        file: PathBuf,
        #[arg(long, default_value = "")]
        stem: String,
        #[arg(long = "loop")]
        cycle: String,
        #[arg(long, value_enum, default_value_t = Mode::Reduced)]
        mode: Mode,
        /// Write the DAG in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Render an automaton in DOT format.
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a built-in example automaton.
    Fixture {
        /// One of N_fig1, A_fig2, L_fig3, F_fig3, B_fig5, F_partial.
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a random complete automaton.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "any")]
        shape: Shape,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 0.3)]
        acc: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    Reduced,
    Ldbw,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path, complete: bool) -> Result<Nbw, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let parsed = parse_with(&text, ParseOptions { complete }).map_err(|e| match e {
        Error::Parse { .. } | Error::UndeclaredState { .. } | Error::InvalidOrder(_) => {
            Failure::Usage(format!("{}: {e}", path.display()))
        }
        e => Failure::Core(e),
    })?;
    for w in &parsed.warnings {
        eprintln!("{}: line {}: warning: {}", path.display(), w.line, w.message);
    }
    Ok(parsed.automaton)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn lasso(a: &Nbw, stem: &str, cycle: &str) -> Result<LassoWord, Failure> {
    let word = |s: &str| parse_symbols(s, a.alphabet()).map_err(|e| Failure::Usage(e.to_string()));
    let (stem, cycle) = (word(stem)?, word(cycle)?);
    if cycle.is_empty() {
        return Err(Failure::Usage("the loop must not be empty".into()));
    }
    Ok(LassoWord::new(stem, cycle))
}

fn report_check(a: &Nbw, r: &CheckReport) -> ExitCode {
    match &r.counterexample {
        None => {
            println!("passed");
            ExitCode::SUCCESS
        }
        Some(w) => {
            println!("failed");
            println!("{}", w.format(a.alphabet()));
            ExitCode::from(1)
        }
    }
}

fn print_dag_report(r: &DagReport) {
    let opt = |v: Option<usize>| v.map_or("none".to_string(), |v| v.to_string());
    println!("accepting: {}", r.accepting);
    println!("stable level: {}", opt(r.stable_level));
    println!("separating level: {}", opt(r.separating_level));
    println!("omega branches: {}", r.omega_branch_count_at_tail);
}

fn run(cli: Cli) -> Outcome {
    let complete = !cli.no_complete;
    match cli.command {
        Command::Classify { file } => {
            let a = read(&file, complete)?;
            let r = classify(&a);
            println!("states: {}", a.n());
            println!("complete: {}", r.complete);
            println!("deterministic: {}", r.deterministic);
            println!("reverse deterministic: {}", r.reverse_deterministic);
            println!("limit deterministic: {}", r.limit_deterministic);
            println!("finitely ambiguous: {}", r.finitely_ambiguous);
            if let Some(p) = &r.ldbw_partition {
                println!("nondeterministic part: {}", p.q_n.display_with(a.names()));
                println!("deterministic part: {}", p.q_d.display_with(a.names()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Complement { file, algo, output } => {
            let a = read(&file, complete)?;
            let c = complement(&a, algo)?;
            eprintln!("{} states ({})", c.n(), algo.resolve(&a));
            emit(&write(&c), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Contains { a, b, algo } => {
            let (a, b) = (read(&a, complete)?, read(&b, complete)?);
            Ok(report_check(&a, &contains(&a, &b, algo)?))
        }
        Command::Member { file, stem, cycle } => {
            let a = read(&file, complete)?;
            let w = lasso(&a, &stem, &cycle)?;
            println!("{}", member(&a, &w));
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckComplement { file, algo, complement: given, max_stem, max_loop } => {
            let a = read(&file, complete)?;
            let c = match given {
                Some(path) => read(&path, complete)?,
                None => complement(&a, algo)?,
            };
            let r = complement_check(&a, &c, max_stem, max_loop)?;
            let code = report_check(&a, &r);
            eprintln!("{} lassos tested", r.lassos_tested);
            Ok(code)
        }
        Command::Dag { file, stem, cycle, mode, dot } => {
            let a = read(&file, complete)?;
            let w = lasso(&a, &stem, &cycle)?;
            let text = match mode {
                Mode::Full | Mode::Reduced => {
                    let full = lasso_dag(&a, &w, DagMode::Full);
                    let d = if matches!(mode, Mode::Full) { full.clone() } else { lasso_dag(&a, &w, DagMode::Reduced) };
                    print_dag_report(&analyze_dag(&d));
                    lasso_dag_to_dot(&a, &d, matches!(mode, Mode::Reduced).then_some(&full))
                }
                Mode::Ldbw => {
                    let p = ldbw_partition(&a)?;
                    let d = ldbw_codet_dag(&a, &p, &w)?;
                    print_dag_report(&d.report());
                    ldbw_dag_to_dot(&a, &d)
                }
            };
            if let Some(path) = dot {
                emit(&text, Some(&path))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { file, output } => {
            let a = read(&file, complete)?;
            emit(&nbw_to_dot(&a), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fixture { name, output } => {
            let a = fixtures::by_name(&name)
                .ok_or_else(|| Failure::Usage(format!("unknown fixture `{name}` (expected one of {})", fixtures::NAMES.join(", "))))?;
            emit(&write(&a), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Random { n, seed, shape, alphabet, density, acc, output } => {
            if n == 0 || alphabet == 0 || !(density > 0.0 && density <= 1.0) || !(0.0..=1.0).contains(&acc) {
                return Err(Failure::Usage("need n ≥ 1, alphabet ≥ 1, density in (0,1] and acc in [0,1]".into()));
            }
            let a = random_nbw(n, alphabet, density, acc, seed, shape)?;
            emit(&write(&a), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_precondition() { 3 } else { 2 })
        }
    }
}
