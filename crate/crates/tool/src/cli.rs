//! The `s1s` driver. Exit status: 0 on success or a YES answer, 1 on a NO
//! answer (`check` rejects, `equiv` differs, `empty` finds a word, `eval` is
//! false), 2 on errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use s1s_core::automaton::{accepts_lasso, equivalent, is_empty};
use s1s_core::compiler::{compile, compile_fo_deterministic, prepare};
use s1s_core::formula::{check_existential_shape, order_to_successor, parse_formula, successor_to_order};
use s1s_core::oracle::{eval_bounded, eval_exists_so, eval_fo, Assignment, OracleConfig, SoClass};
use s1s_core::reverse::automaton_to_formula;
use s1s_core::{Formula, LassoWord, OmegaAutomaton, TrackSignature};

use crate::autfile::{parse_automaton, to_dot, write_automaton};

#[derive(Debug, Parser)]
#[command(name = "s1s", version, about = "Existential S1S and co-Büchi automata")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a formula into a co-Büchi automaton.
    Compile {
        formula: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// First-order formulas only: deterministic, complete output.
        #[arg(long)]
        deterministic: bool,
    },
    /// Decide membership of a lasso word (`u ; v`). Prints ACCEPT or REJECT.
    Check { automaton: PathBuf, lasso: String },
    /// Prints EMPTY or an accepted lasso.
    Empty { automaton: PathBuf },
    /// Prints EQUIVALENT or a lasso accepted by exactly one side.
    Equiv { first: PathBuf, second: PathBuf },
    /// Formula describing the accepting runs of an automaton over set tracks.
    ToFormula { automaton: PathBuf },
    /// Rewrite between the order and successor signatures.
    Translate { direction: Direction, formula: PathBuf },
    /// Print the normal form the compiler works on.
    Normalize { formula: PathBuf },
    /// Evaluate a formula on a lasso with the brute-force semantics.
    Eval {
        formula: PathBuf,
        lasso: String,
        /// First-order values, e.g. `x=3,y=0`; others are read from their tracks.
        #[arg(long, value_delimiter = ',')]
        assign: Vec<String>,
        /// Track layout of the lasso, e.g. `x | X Y`. Defaults to the free variables.
        #[arg(long)]
        tracks: Option<String>,
        #[arg(long, default_value_t = 2)]
        so_prefix_bound: usize,
        #[arg(long, default_value_t = 2)]
        so_period_mult: usize,
        #[arg(long, default_value_t = 1)]
        fo_window_mult: usize,
    },
    /// Graphviz rendering.
    Dot { automaton: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Direction {
    OrderToSucc,
    SuccToOrder,
}

/// Output text and whether the answer was YES.
struct Outcome {
    text: String,
    yes: bool,
}

impl Outcome {
    fn yes(text: impl Into<String>) -> Self {
        Outcome {
            text: text.into(),
            yes: true,
        }
    }

    fn answer(text: impl Into<String>, yes: bool) -> Self {
        Outcome { text: text.into(), yes }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_formula(path: &Path) -> Result<Formula> {
    parse_formula(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_automaton(path: &Path) -> Result<OmegaAutomaton> {
    parse_automaton(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn parse_lasso(text: &str) -> Result<LassoWord> {
    text.parse().with_context(|| format!("parsing lasso `{text}`"))
}

fn parse_tracks(text: &str) -> Result<TrackSignature> {
    let (fo, so) = text
        .split_once('|')
        .ok_or_else(|| anyhow!("tracks need a `|` between first- and second-order names"))?;
    let names = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();
    Ok(TrackSignature::new(names(fo), names(so))?)
}

fn run_command(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::Compile {
            formula,
            output,
            deterministic,
        } => {
            let f = load_formula(&formula)?;
            let a = if deterministic {
                compile_fo_deterministic(&f)
            } else {
                compile(&f)
            }
            .with_context(|| format!("compiling {}", formula.display()))?;
            let text = write_automaton(&a);
            match output {
                Some(path) => {
                    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    Outcome::yes("")
                }
                None => Outcome::yes(text),
            }
        }
        Command::Check { automaton, lasso } => {
            let a = load_automaton(&automaton)?;
            let accepted = accepts_lasso(&a, &parse_lasso(&lasso)?)?;
            Outcome::answer(if accepted { "ACCEPT\n" } else { "REJECT\n" }, accepted)
        }
        Command::Empty { automaton } => match is_empty(&load_automaton(&automaton)?) {
            None => Outcome::yes("EMPTY\n"),
            Some(w) => Outcome::answer(format!("NONEMPTY\n{w}\n"), false),
        },
        Command::Equiv { first, second } => {
            let a = load_automaton(&first)?;
            let b = load_automaton(&second)?;
            match equivalent(&a, &b)? {
                None => Outcome::yes("EQUIVALENT\n"),
                Some(w) => {
                    let side = if accepts_lasso(&a, &w)? { &first } else { &second };
                    Outcome::answer(
                        format!("INEQUIVALENT\n{w}\naccepted only by {}\n", side.display()),
                        false,
                    )
                }
            }
        }
        Command::ToFormula { automaton } => {
            let a = load_automaton(&automaton)?;
            let e = automaton_to_formula(&a)?;
            let mut text = format!("# {} from {} automaton\n", e.signature, a.acceptance());
            for (q, y) in &e.states {
                let _ = writeln!(text, "# state {q}: {y}");
            }
            let _ = writeln!(text, "{}", e.formula);
            Outcome::yes(text)
        }
        Command::Translate { direction, formula } => {
            let f = load_formula(&formula)?;
            let g = match direction {
                Direction::OrderToSucc => order_to_successor(&f)?,
                Direction::SuccToOrder => successor_to_order(&f),
            };
            Outcome::yes(format!("{g}\n"))
        }
        Command::Normalize { formula } => Outcome::yes(format!("{}\n", prepare(&load_formula(&formula)?)?)),
        Command::Eval {
            formula,
            lasso,
            assign,
            tracks,
            so_prefix_bound,
            so_period_mult,
            fo_window_mult,
        } => {
            let f = load_formula(&formula)?;
            let w = parse_lasso(&lasso)?;
            let cfg = OracleConfig {
                so_prefix_bound,
                so_period_mult,
                fo_window_mult,
            };
            let sig = match tracks {
                Some(t) => parse_tracks(&t)?,
                None => TrackSignature::of_formula(&f),
            };
            let asg = assignment(&assign, &w, &sig)?;
            let (truth, note) = if !f.contains_so_quantifier() {
                (eval_fo(&f, &w, &sig, &asg, &cfg)?, "")
            } else if check_existential_shape(&f) {
                (
                    eval_exists_so(&f, &w, &sig, &asg, &cfg)?,
                    " (no witness within the search bounds)",
                )
            } else {
                let class = SoClass::relative_to(&w, &cfg);
                (
                    eval_bounded(&f, &w, &sig, &asg, &cfg, class)?,
                    " (sets restricted to the search bounds)",
                )
            };
            if truth {
                Outcome::yes("TRUE\n")
            } else {
                Outcome::answer(format!("FALSE{note}\n"), false)
            }
        }
        Command::Dot { automaton } => Outcome::yes(to_dot(&load_automaton(&automaton)?)),
    })
}

fn assignment(pairs: &[String], w: &LassoWord, sig: &TrackSignature) -> Result<Assignment> {
    let mut asg = Assignment::new();
    for pair in pairs {
        let (x, p) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("expected `name=position`, found `{pair}`"))?;
        let p = p.trim().parse().with_context(|| format!("position in `{pair}`"))?;
        asg.insert(x.trim().to_string(), p);
    }
    if w.width() != sig.width() {
        bail!(
            "the lasso has {} tracks but the layout `{sig}` has {}",
            w.width(),
            sig.width()
        );
    }
    for (t, x) in sig.fo_vars().iter().enumerate() {
        if asg.contains_key(x) {
            continue;
        }
        let track = w.track(t);
        let ones: Vec<usize> = (0..track.prefix().len() + track.cycle().len())
            .filter(|&p| track.symbol_at(p).bit(0))
            .collect();
        match (ones.as_slice(), track.cycle().iter().any(|s| s.bit(0))) {
            ([p], false) => {
                asg.insert(x.clone(), *p);
            }
            _ => bail!("track of `{x}` is not a single position; pass --assign {x}=N"),
        }
    }
    Ok(asg)
}

/// Runs the driver on already-parsed arguments, writing to stdout and stderr.
pub fn run(cli: Cli) -> i32 {
    match run_command(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.yes {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}
