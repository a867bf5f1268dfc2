use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gcid_core::constructions::{compile, compile_regular_with, CompileOutput, Construction, ErasingInsert};
use gcid_core::engine::{
    enumerate_language_with, membership_with, replay_with_history, DerivationTrace, Exec, Membership, SearchLimits,
    DEFAULT_CONFIG_SLACK, DEFAULT_MAX_STATES, DEFAULT_MAX_STEPS,
};
use gcid_core::format::{parse_gcid, parse_regular, parse_sgnf, parse_trace, write_gcid, write_trace, write_words};
use gcid_core::model::{
    compute_size, lift_to_star, mirror_system, star_report, validate_system, Configuration, GcidSystem, InsDelSystem,
};
use gcid_core::sgnf::{validate_sgnf, SgnfGrammar};
use gcid_core::symbol::{Symbol, SymbolString};
use gcid_core::verification::{difftest, soundness_check, MarkerErasure};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "gcid", version, about = "Star-controlled graph-controlled insertion-deletion systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a system, grammar or right-linear grammar for well-formedness.
    Validate { file: PathBuf },
    /// Print the size measure of a system.
    Size { system: PathBuf },
    /// Check that the control graph is a star centred on C1.
    StarCheck {
        system: PathBuf,
        /// Also reject idle components.
        #[arg(long)]
        strict: bool,
    },
    /// List the words of the bounded language.
    Enumerate {
        system: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Decide bounded membership of a word (space-separated symbols, `<empty>` for λ).
    Member {
        system: PathBuf,
        word: String,
        /// Print the witness derivation.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Replay a trace file and print every configuration.
    Replay { system: PathBuf, trace: PathBuf },
    /// Compile a grammar into a system.
    Compile {
        grammar: PathBuf,
        #[arg(long, value_parser = ["t6", "t4", "reg"])]
        construction: String,
        /// Write the rule map to this file.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Regular construction only: erasing rules insert this terminal before the marker.
        #[arg(long)]
        erasing_terminal: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the mirror image of a system.
    Mirror {
        system: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lift a one-component system to a two-component star.
    Lift {
        system: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the bounded languages of a grammar and its compiled system.
    Difftest {
        grammar: PathBuf,
        #[arg(long)]
        construction: Construction,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check that reachable C1 strings map to reachable grammar forms.
    Soundness {
        grammar: PathBuf,
        system: PathBuf,
        /// `t6`, `t4`, `none`, or a comma-separated list of erased symbols.
        #[arg(long, default_value = "none")]
        markers: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct LimitArgs {
    /// Longest collected word.
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Longest intermediate string [default: max-len + 8].
    #[arg(long)]
    max_config_len: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Keep configurations that can no longer yield a word.
    #[arg(long)]
    no_prune: bool,
    /// Expand frontiers on one thread.
    #[arg(long)]
    sequential: bool,
}

impl LimitArgs {
    fn limits(&self) -> Result<SearchLimits, Failure> {
        let l = SearchLimits::new(self.max_len)
            .with_config_len(self.max_config_len.unwrap_or(self.max_len + DEFAULT_CONFIG_SLACK))
            .with_steps(self.max_steps)
            .with_states(self.max_states)
            .with_prune(!self.no_prune);
        l.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(l)
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }

    fn fail(message: impl Into<String>) -> Self {
        Failure { code: FAIL, message: message.into() }
    }
}

struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn new(text: String, ok: bool) -> Self {
        Report { text, code: if ok { PASS } else { FAIL } }
    }
}

fn read(path: &Path) -> Result<(String, String), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok((text, path.display().to_string()))
}

fn load_system(path: &Path) -> Result<GcidSystem, Failure> {
    let (text, name) = read(path)?;
    parse_gcid(&text, &name).map_err(|e| Failure::usage(e.to_string()))
}

fn load_grammar(path: &Path) -> Result<SgnfGrammar, Failure> {
    let (text, name) = read(path)?;
    parse_sgnf(&text, &name).map_err(|e| Failure::usage(e.to_string()))
}

fn load_trace(path: &Path) -> Result<(Option<Configuration>, DerivationTrace), Failure> {
    let (text, name) = read(path)?;
    let (start, steps) = parse_trace(&text, &name).map_err(|e| Failure::usage(e.to_string()))?;
    let placeholder = Configuration::new(SymbolString::empty(), 0);
    Ok((start.clone(), DerivationTrace { start: start.unwrap_or(placeholder), steps }))
}

/// First keyword of the file, skipping blank and comment lines.
fn format_keyword(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split_whitespace().take_while(|t| !t.starts_with('#')).next())
        .find_map(|t| t)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn header(limits: &SearchLimits, exec: Exec) -> String {
    let exec = match exec {
        Exec::Sequential => "sequential",
        Exec::Parallel => "parallel",
    };
    format!("# limits {limits} exec={exec}\n")
}

fn run(cli: Cli) -> Result<Report, Failure> {
    match cli.command {
        Command::Validate { file } => {
            let (text, name) = read(&file)?;
            match format_keyword(&text) {
                Some("sgnf") => {
                    let g = parse_sgnf(&text, &name).map_err(|e| Failure::usage(e.to_string()))?;
                    let rep = validate_sgnf(&g);
                    Ok(Report::new(if rep.is_ok() { "ok\n".into() } else { rep.to_string() }, rep.is_ok()))
                }
                Some("regular") => {
                    let g = parse_regular(&text, &name).map_err(|e| Failure::usage(e.to_string()))?;
                    Ok(match g.validate() {
                        Ok(()) => Report::new("ok\n".into(), true),
                        Err(e) => Report::new(format!("{e}\n"), false),
                    })
                }
                _ => {
                    let sys = parse_gcid(&text, &name).map_err(|e| Failure::usage(e.to_string()))?;
                    let rep = validate_system(&sys);
                    Ok(Report::new(if rep.is_ok() { "ok\n".into() } else { rep.to_string() }, rep.is_ok()))
                }
            }
        }
        Command::Size { system } => {
            let sys = load_system(&system)?;
            Ok(Report::new(format!("{}\n", compute_size(&sys)), true))
        }
        Command::StarCheck { system, strict } => {
            let sys = load_system(&system)?;
            let rep = star_report(&sys);
            let ok = if strict { rep.is_strict_star() } else { rep.is_star() };
            let mut text = format!("{ok}\n");
            for (a, b) in &rep.cross_edges {
                let _ = writeln!(text, "# cross edge C{a} -> C{b}");
            }
            for c in &rep.loops {
                let _ = writeln!(text, "# loop on C{c}");
            }
            for c in &rep.idle {
                let _ = writeln!(text, "# idle C{c}");
            }
            Ok(Report::new(text, ok))
        }
        Command::Enumerate { system, limits } => {
            let sys = load_system(&system)?;
            let l = limits.limits()?;
            let sample = enumerate_language_with(&sys, &l, limits.exec()).map_err(|e| Failure::usage(e.to_string()))?;
            let mut text = header(&l, limits.exec());
            let _ = writeln!(text, "# exhausted {} states {}", sample.exhausted, sample.states_visited);
            text.push_str(&write_words(&sample.words));
            Ok(Report::new(text, true))
        }
        Command::Member { system, word, trace, limits } => {
            let sys = load_system(&system)?;
            let l = limits.limits()?;
            let w = SymbolString::parse(&word).map_err(|e| Failure::usage(format!("word: {e}")))?;
            let m = membership_with(&sys, &w, &l, limits.exec()).map_err(|e| Failure::usage(e.to_string()))?;
            let mut text = header(&l, limits.exec());
            match &m {
                Membership::Yes(t) => {
                    let _ = writeln!(text, "yes {} steps", t.steps.len());
                    if trace {
                        text.push_str(&write_trace(t));
                    }
                }
                Membership::NoWithinBounds { exhausted } => {
                    let _ = writeln!(text, "no (exhausted {exhausted})");
                }
            }
            Ok(Report::new(text, m.is_yes()))
        }
        Command::Replay { system, trace } => {
            let sys = load_system(&system)?;
            let (start, mut t) = load_trace(&trace)?;
            if start.is_none() {
                let axiom = sys.axioms.first().cloned().ok_or_else(|| Failure::usage("system has no axiom"))?;
                t.start = Configuration::new(axiom, sys.initial);
            }
            match replay_with_history(&sys, &t) {
                Ok(history) => {
                    let mut text = String::new();
                    for (i, cfg) in history.iter().enumerate() {
                        match i {
                            0 => {
                                let _ = writeln!(text, "{cfg}");
                            }
                            _ => {
                                let _ = writeln!(text, "{cfg}  # {}", t.steps[i - 1]);
                            }
                        }
                    }
                    Ok(Report::new(text, true))
                }
                Err(e) => Err(Failure::fail(e.to_string())),
            }
        }
        Command::Compile { grammar, construction, map, erasing_terminal, output } => {
            let out: CompileOutput = match construction.as_str() {
                "reg" => {
                    let (text, name) = read(&grammar)?;
                    let g = parse_regular(&text, &name).map_err(|e| Failure::usage(e.to_string()))?;
                    let erase = match &erasing_terminal {
                        Some(a) => ErasingInsert::TerminalMarker(
                            Symbol::new(a).map_err(|e| Failure::usage(format!("--erasing-terminal: {e}")))?,
                        ),
                        None => ErasingInsert::Marker,
                    };
                    compile_regular_with(&g, &erase).map_err(|e| Failure::fail(e.to_string()))?
                }
                c => {
                    if erasing_terminal.is_some() {
                        return Err(Failure::usage("--erasing-terminal applies to the regular construction only"));
                    }
                    let g = load_grammar(&grammar)?;
                    let c: Construction = c.parse().map_err(Failure::usage)?;
                    compile(&g, c).map_err(|e| Failure::fail(e.to_string()))?
                }
            };
            let mut text = String::new();
            for d in &out.deviations {
                let _ = writeln!(text, "# note: {d}");
            }
            text.push_str(&write_gcid(&out.system));
            if let Some(p) = map {
                emit(&out.render_map(), Some(&p))?;
            }
            emit(&text, output.as_deref())?;
            Ok(Report::new(String::new(), true))
        }
        Command::Mirror { system, output } => {
            let sys = load_system(&system)?;
            emit(&write_gcid(&mirror_system(&sys)), output.as_deref())?;
            Ok(Report::new(String::new(), true))
        }
        Command::Lift { system, output } => {
            let sys = load_system(&system)?;
            let input =
                InsDelSystem::from_gcid(&sys).ok_or_else(|| Failure::usage("lift needs a one-component system"))?;
            emit(&write_gcid(&lift_to_star(&input)), output.as_deref())?;
            Ok(Report::new(String::new(), true))
        }
        Command::Difftest { grammar, construction, limits } => {
            let g = load_grammar(&grammar)?;
            let l = limits.limits()?;
            let rep = difftest(&g, construction, &l).map_err(|e| Failure::fail(e.to_string()))?;
            let mut text = header(&l, limits.exec());
            let _ = writeln!(text, "# construction {construction}");
            text.push_str(&rep.to_string());
            Ok(Report::new(text, rep.passed()))
        }
        Command::Soundness { grammar, system, markers, limits } => {
            let g = load_grammar(&grammar)?;
            let sys = load_system(&system)?;
            let l = limits.limits()?;
            let erasure = match markers.as_str() {
                "none" => MarkerErasure::none(),
                "t6" => MarkerErasure::for_construction(&g, Construction::T6),
                "t4" => MarkerErasure::for_construction(&g, Construction::T4),
                list => MarkerErasure::new(
                    list.split(',')
                        .filter(|s| !s.is_empty())
                        .map(Symbol::new)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| Failure::usage(format!("--markers: {e}")))?,
                ),
            };
            let rep = soundness_check(&g, &sys, &erasure, &l).map_err(|e| Failure::usage(e.to_string()))?;
            let mut text = header(&l, Exec::default());
            text.push_str(&rep.to_string());
            Ok(Report::new(text, rep.is_sound()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(rep) => {
            print!("{}", rep.text);
            ExitCode::from(rep.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
