//! The validation-wrapper demo: a verified source wrapper compiled to λIO
//! and linked with one of three untrusted target agents.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::compile::compile;
use crate::frontend::{load_source, FrontendError};
use crate::fsworld::{run_world, FsWorld};
use crate::relate::reflect_fo;
use crate::sexp::SyntaxError;
use crate::source::{SValue, SourceDeriv, SourceTypeError};
use crate::target::{check_target, BehaviorError, Exp, TargetTypeError};
use crate::traces::{Event, LocalTrace};
use crate::types::{QType, TyEnv};

pub const WRAPPER_SOURCE: &str = include_str!("../corpus/wrapper.iost");
pub const FAILED_VALIDATION: &str = "Failed_validation";
pub const DEMO_FUEL: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Agent {
    Lazy,
    Write,
    WriteTwice,
}

impl Agent {
    pub const ALL: [Agent; 3] = [Agent::Lazy, Agent::Write, Agent::WriteTwice];

    pub fn name(self) -> &'static str {
        match self {
            Agent::Lazy => "lazy",
            Agent::Write => "write",
            Agent::WriteTwice => "write_twice",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            Agent::Lazy => include_str!("../corpus/agents/lazy.lio"),
            Agent::Write => include_str!("../corpus/agents/write.lio"),
            Agent::WriteTwice => include_str!("../corpus/agents/write_twice.lio"),
        }
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Agent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Agent::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown agent `{s}`; expected lazy, write or write_twice"))
    }
}

/// `Str -> (Str ->io Unit)`: the agent receives the file name, then the task.
pub fn agent_type() -> QType {
    QType::arr(QType::Str, QType::arr_io(QType::Str, QType::Unit))
}

pub fn wrapper_result_type() -> QType {
    QType::resexn(QType::Unit)
}

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("wrapper: {0}")]
    Wrapper(#[from] FrontendError),
    #[error("wrapper: {0}")]
    Compile(#[from] SourceTypeError),
    #[error("agent: {0}")]
    AgentSyntax(#[from] SyntaxError),
    #[error("agent: {0}")]
    AgentType(#[from] TargetTypeError),
    #[error(transparent)]
    Run(#[from] BehaviorError),
    #[error("wrapper returned `{0}`, not a result")]
    BadResult(Exp),
}

/// The wrapper's derivation, elaborated from the corpus.
pub fn wrapper() -> Result<(SourceDeriv, QType), DemoError> {
    Ok(load_source(WRAPPER_SOURCE)?)
}

pub fn wrapper_target() -> Result<Exp, DemoError> {
    Ok(compile(&wrapper()?.0)?)
}

/// The agent's λIO term, checked at [`agent_type`].
pub fn agent_exp(a: Agent) -> Result<Exp, DemoError> {
    let e = Exp::parse(a.source())?;
    check_target(&TyEnv::empty(), &e, &agent_type())?;
    Ok(e)
}

/// `wrapper file task agent` in λIO.
pub fn link_demo(a: Agent, task: &str, file: &str) -> Result<Exp, DemoError> {
    let w = wrapper_target()?;
    Ok(Exp::app(
        Exp::app(Exp::app(w, Exp::string(file)), Exp::string(task)),
        agent_exp(a)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemoVerdict {
    Left,
    Right(String),
}

impl fmt::Display for DemoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemoVerdict::Left => write!(f, "left ()"),
            DemoVerdict::Right(s) => write!(f, "right {}", crate::sexp::quote(s)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DemoRun {
    pub verdict: DemoVerdict,
    pub trace: LocalTrace,
    pub world: FsWorld,
}

/// Runs the linked demo in a world where `file` exists and is empty.
pub fn run_demo(a: Agent, task: &str, file: &str) -> Result<DemoRun, DemoError> {
    let e = link_demo(a, task, file)?;
    let world = FsWorld::new([(file, "")]);
    let run = run_world(&e, &world, DEMO_FUEL)?;
    let verdict = match reflect_fo(&wrapper_result_type(), &run.result) {
        Some(SValue::VInl(_)) => DemoVerdict::Left,
        Some(SValue::VInr(s)) => match *s {
            SValue::VStr(s) => DemoVerdict::Right(s),
            _ => unreachable!("reflected at Str"),
        },
        _ => return Err(DemoError::BadResult(run.result)),
    };
    Ok(DemoRun {
        verdict,
        trace: run.trace,
        world: run.world,
    })
}

/// Whether `trace` opens, reads and closes `file`, then runs the agent's
/// events, then opens, reads and closes `file` again, with every successful
/// open using a distinct descriptor.
pub fn matches_wrapper_pattern(trace: &LocalTrace, file: &str) -> bool {
    let evs = trace.events();
    if evs.len() < 6 {
        return false;
    }
    let read_file = |w: &[Event]| match w {
        [Event::EvOpen { name, res: Ok(fd) }, Event::EvRead { fd: r, res: Ok(_) }, Event::EvClose { fd: c, res: Ok(()) }] => {
            (name == file && r == fd && c == fd).then_some(*fd)
        }
        _ => None,
    };
    let (Some(first), Some(last)) = (read_file(&evs[..3]), read_file(&evs[evs.len() - 3..])) else {
        return false;
    };
    let opened: Vec<_> = evs.iter().filter_map(Event::opened_fd).collect();
    let mut distinct = opened.clone();
    distinct.sort();
    distinct.dedup();
    first != last && distinct.len() == opened.len() && trace.is_well_formed()
}
