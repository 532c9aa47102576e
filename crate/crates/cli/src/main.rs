//! `seio`: command-line driver for the extraction pipeline.
//!
//! Source files (`.iost`) hold surface terms; target files (`.lio`) hold λIO
//! terms. Exit codes: 0 ok, 1 check failed, 2 usage error, 3 counterexample.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use seio_core::backtranslate::back_translate;
use seio_core::compile::compile;
use seio_core::demo::{run_demo, Agent};
use seio_core::frontend::{load_source, print_derivation};
use seio_core::fsworld::{run_world, FsWorld};
use seio_core::seclink::{run_suite, SuiteConfig, SuiteSummary, Verdict};
use seio_core::source::{eval_source, eval_source_comp, fs_beh_enum, EvalEnv, IoTree, SourceDeriv};
use seio_core::target::{enum_behaviors, infer_target};
use seio_core::{Exp, History, LocalTrace, OutcomeUniverse, TyEnv};

#[derive(Parser)]
#[command(
    name = "seio",
    version,
    about = "Compile, run and differentially check IO programs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lang {
    Source,
    Target,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and type a file and print its type.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        lang: Option<Lang>,
    },
    /// Compile a source file to λIO text.
    Compile { file: PathBuf },
    /// Print every (trace, result) behavior of a closed term.
    Behaviors {
        file: PathBuf,
        /// Strings a read may return, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "a,b")]
        sigma: Vec<String>,
        /// File of past events, one per line, oldest first.
        #[arg(long)]
        history: Option<PathBuf>,
        #[arg(long, value_enum)]
        lang: Option<Lang>,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
    /// Run a target program against a world file.
    Run {
        file: PathBuf,
        #[arg(long)]
        world: PathBuf,
        /// Write the final world here.
        #[arg(long)]
        save_world: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
    /// Back-translate a target term and print it as surface text.
    Backtranslate { file: PathBuf },
    /// Differentially check compiled programs against generated contexts.
    RrhpCheck {
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(3..))]
        depth: u64,
        #[arg(long, value_delimiter = ',', default_value = "a,b")]
        sigma: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
    /// Run the built-in validation wrapper with one of the built-in agents.
    DemoWrapper {
        #[arg(long)]
        agent: Agent,
        #[arg(long, default_value = "task")]
        task: String,
        #[arg(long, default_value = "f")]
        file: String,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn check(err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 1,
            err: err.into(),
        }
    }

    fn usage(err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            err: err.into(),
        }
    }
}

type Outcome = std::result::Result<(String, u8), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::usage)
}

fn lang_of(path: &Path, forced: Option<Lang>) -> std::result::Result<Lang, Failure> {
    if let Some(l) = forced {
        return Ok(l);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("iost") => Ok(Lang::Source),
        Some("lio") => Ok(Lang::Target),
        _ => Err(Failure::usage(anyhow!(
            "cannot tell the language of {}; pass --lang",
            path.display()
        ))),
    }
}

fn source(path: &Path) -> std::result::Result<(SourceDeriv, seio_core::QType), Failure> {
    let text = read(path)?;
    load_source(&text).map_err(|e| Failure::check(anyhow!("{}: {e}", path.display())))
}

fn target(path: &Path) -> std::result::Result<Exp, Failure> {
    let text = read(path)?;
    let e = Exp::parse(&text).map_err(|e| Failure::check(anyhow!("{}: {e}", path.display())))?;
    infer_target(&TyEnv::empty(), &e)
        .map_err(|e| Failure::check(anyhow!("{}: {e}", path.display())))?;
    Ok(e)
}

fn trace_lines(out: &mut String, lt: &LocalTrace, indent: &str) {
    for ev in lt.events() {
        let _ = writeln!(out, "{indent}{ev}");
    }
}

fn check(file: &Path, lang: Option<Lang>) -> Outcome {
    Ok(match lang_of(file, lang)? {
        Lang::Source => (format!("{}\n", source(file)?.1), 0),
        Lang::Target => {
            let e = target(file)?;
            let t = infer_target(&TyEnv::empty(), &e).expect("checked on load");
            (format!("{} ({})\n", t.ty, t.eff), 0)
        }
    })
}

fn source_tree(d: &SourceDeriv) -> IoTree {
    match d {
        SourceDeriv::Val(v) => IoTree::Return(eval_source(&EvalEnv::empty(), v)),
        SourceDeriv::Comp(c) => eval_source_comp(&EvalEnv::empty(), c),
    }
}

fn behaviors(
    file: &Path,
    sigma: &[String],
    history: Option<&Path>,
    lang: Option<Lang>,
    fuel: usize,
) -> Outcome {
    let h = match history {
        Some(p) => History::parse_chronological(&read(p)?)
            .map_err(|e| Failure::usage(anyhow!("{}: {e}", p.display())))?,
        None => History::empty(),
    };
    let u = OutcomeUniverse::new(sigma.iter().cloned());
    let mut rows: Vec<(LocalTrace, String)> = match lang_of(file, lang)? {
        Lang::Source => {
            let (d, _) = source(file)?;
            let set = fs_beh_enum(&source_tree(&d), &h, &u, fuel).map_err(Failure::check)?;
            set.into_iter().map(|(lt, v)| (lt, v.to_string())).collect()
        }
        Lang::Target => {
            let e = target(file)?;
            let set = enum_behaviors(&e, &h, &u, fuel).map_err(Failure::check)?;
            set.into_iter().map(|(lt, v)| (lt, v.to_string())).collect()
        }
    };
    rows.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.cmp(b)));
    let mut out = String::new();
    for (i, (lt, r)) in rows.iter().enumerate() {
        let _ = writeln!(out, "behavior {}", i + 1);
        trace_lines(&mut out, lt, "  ");
        let _ = writeln!(out, "  result {r}");
    }
    let _ = writeln!(out, "{} behaviors", rows.len());
    Ok((out, 0))
}

fn run(file: &Path, world: &Path, save: Option<&Path>, fuel: usize) -> Outcome {
    let e = target(file)?;
    let w = FsWorld::from_toml(&read(world)?)
        .map_err(|e| Failure::usage(anyhow!("{}: {e}", world.display())))?;
    let r = run_world(&e, &w, fuel).map_err(Failure::check)?;
    let mut out = String::new();
    trace_lines(&mut out, &r.trace, "");
    let _ = writeln!(out, "result {}", r.result);
    if let Some(p) = save {
        std::fs::write(p, r.world.to_toml())
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(Failure::usage)?;
    }
    Ok((out, 0))
}

fn backtranslate(file: &Path) -> Outcome {
    let e = target(file)?;
    let (d, _) = back_translate(&TyEnv::empty(), &e).map_err(Failure::check)?;
    Ok((format!("{}\n", print_derivation(&d)), 0))
}

fn rrhp_check(cfg: SuiteConfig) -> Outcome {
    let start = Instant::now();
    let outcomes = run_suite(&cfg);
    let elapsed = start.elapsed();
    let summary = SuiteSummary::of(&outcomes);
    let mut out = String::new();
    for o in &outcomes {
        match &o.result {
            Ok(r) => {
                if let Verdict::Counterexample(_) = &r.verdict {
                    let t = seio_core::seclink::gen_triple(o.seed, cfg.depth);
                    let _ = writeln!(out, "case {}: {}", o.seed, r.verdict);
                    let _ = writeln!(
                        out,
                        "  program {}",
                        print_derivation(&SourceDeriv::Val(t.prog.deriv.clone()))
                    );
                    let _ = writeln!(out, "  context {}", t.ctx.exp);
                }
            }
            Err(e) => {
                let _ = writeln!(out, "case {}: error: {e}", o.seed);
            }
        }
    }
    let pass = summary.all_equal();
    let _ = writeln!(
        out,
        "{}: {} cases, {} equal, {} counterexamples, {} fuel exhausted, {} other errors, {} behaviors",
        if pass { "PASS" } else { "FAIL" },
        outcomes.len(),
        summary.equal,
        summary.counterexamples,
        summary.fuel_exhausted,
        summary.other_errors,
        summary.behaviors
    );
    let _ = writeln!(out, "time {:.3}s", elapsed.as_secs_f64());
    let code = if summary.counterexamples > 0 {
        3
    } else if pass {
        0
    } else {
        1
    };
    Ok((out, code))
}

fn demo(agent: Agent, task: &str, file: &str) -> Outcome {
    let r = run_demo(agent, task, file).map_err(Failure::check)?;
    let mut out = String::new();
    let _ = writeln!(out, "agent {agent}");
    trace_lines(&mut out, &r.trace, "");
    let _ = writeln!(out, "verdict {}", r.verdict);
    Ok((out, 0))
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Check { file, lang } => check(&file, lang),
        Cmd::Compile { file } => {
            let (d, _) = source(&file)?;
            let e = compile(&d).map_err(Failure::check)?;
            Ok((format!("{e}\n"), 0))
        }
        Cmd::Behaviors {
            file,
            sigma,
            history,
            lang,
            fuel,
        } => behaviors(&file, &sigma, history.as_deref(), lang, fuel),
        Cmd::Run {
            file,
            world,
            save_world,
            fuel,
        } => run(&file, &world, save_world.as_deref(), fuel),
        Cmd::Backtranslate { file } => backtranslate(&file),
        Cmd::RrhpCheck {
            cases,
            depth,
            sigma,
            seed,
            fuel,
        } => rrhp_check(SuiteConfig {
            cases,
            depth: depth as usize,
            sigma,
            seed,
            fuel,
        }),
        Cmd::DemoWrapper { agent, task, file } => demo(agent, &task, &file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
