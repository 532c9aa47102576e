//! A deterministic in-memory filesystem that resolves each IO operation to
//! a single result, for concrete runs of λIO programs.
//!
//! Reads return the whole current contents, writes append, opening a missing
//! file fails. Descriptors are allocated by `fresh_fd` of the history, so a
//! closed descriptor is never reused.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ops::{op_to_ev, IoArgs, IoOk, IoResult, OutcomeSource};
use crate::target::{step_with, BehaviorError, Exp, StepOutcome};
use crate::traces::{fresh_fd, Event, FileDescrId, History, LocalTrace, ERR};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FsWorld {
    pub files: BTreeMap<String, String>,
    pub open_fds: BTreeMap<FileDescrId, String>,
    pub history: History,
}

#[derive(Debug, Error)]
pub enum WorldFileError {
    #[error("world file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("world history: {0}")]
    History(#[from] crate::sexp::SyntaxError),
    #[error("world history is not well formed")]
    IllFormedHistory,
}

#[derive(Serialize, Deserialize)]
struct WorldFile {
    #[serde(default)]
    files: BTreeMap<String, String>,
    /// Past events, one per line, oldest first.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    history: String,
}

impl FsWorld {
    pub fn new<K: Into<String>, V: Into<String>>(files: impl IntoIterator<Item = (K, V)>) -> Self {
        FsWorld {
            files: files
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
            ..FsWorld::default()
        }
    }

    /// A world whose open descriptors are replayed from `history`.
    pub fn with_history(files: BTreeMap<String, String>, history: History) -> Self {
        let mut open_fds = BTreeMap::new();
        for ev in history.events.iter().rev() {
            match ev {
                Event::EvOpen { name, res: Ok(fd) } => {
                    open_fds.insert(*fd, name.clone());
                }
                Event::EvClose { fd, res: Ok(()) } => {
                    open_fds.remove(fd);
                }
                _ => {}
            }
        }
        FsWorld {
            files,
            open_fds,
            history,
        }
    }

    /// Parses the TOML world format: a `[files]` table of name to contents
    /// and an optional `history` string.
    pub fn from_toml(text: &str) -> Result<Self, WorldFileError> {
        let wf: WorldFile = toml::from_str(text)?;
        let history = History::parse_chronological(&wf.history)?;
        let chrono: Vec<Event> = history.events.iter().rev().cloned().collect();
        if !crate::traces::wf_local_trace(&History::empty(), &chrono) {
            return Err(WorldFileError::IllFormedHistory);
        }
        Ok(FsWorld::with_history(wf.files, history))
    }

    pub fn to_toml(&self) -> String {
        let wf = WorldFile {
            files: self.files.clone(),
            history: self.history.to_chronological_text(),
        };
        toml::to_string(&wf).expect("world serializes")
    }

    /// Resolves one operation, returning its result, the event it records,
    /// and the successor world.
    pub fn resolve(&self, args: &IoArgs) -> (IoResult, Event, FsWorld) {
        let mut next = self.clone();
        let (res, ev) = next.resolve_in_place(args);
        (res, ev, next)
    }

    pub fn resolve_in_place(&mut self, args: &IoArgs) -> (IoResult, Event) {
        let fail = || Err(ERR.to_string());
        let res: IoResult = match args {
            IoArgs::Open(name) if self.files.contains_key(name) => {
                let fd = fresh_fd(&self.history);
                self.open_fds.insert(fd, name.clone());
                Ok(IoOk::Fd(fd))
            }
            IoArgs::Open(_) => fail(),
            IoArgs::Read(fd) => match self.open_fds.get(fd) {
                Some(name) => Ok(IoOk::Str(self.files.get(name).cloned().unwrap_or_default())),
                None => fail(),
            },
            IoArgs::Write(fd, data) => match self.open_fds.get(fd) {
                Some(name) => {
                    self.files.entry(name.clone()).or_default().push_str(data);
                    Ok(IoOk::Unit)
                }
                None => fail(),
            },
            IoArgs::Close(fd) => match self.open_fds.remove(fd) {
                Some(_) => Ok(IoOk::Unit),
                None => fail(),
            },
        };
        let ev = op_to_ev(args, &res);
        self.history.events.insert(0, ev.clone());
        (res, ev)
    }
}

impl fmt::Display for FsWorld {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, contents) in &self.files {
            writeln!(
                f,
                "{} = {}",
                crate::sexp::quote(name),
                crate::sexp::quote(contents)
            )?;
        }
        Ok(())
    }
}

/// Resolves every call against the world, advancing it.
struct WorldSource<'w> {
    world: &'w mut FsWorld,
}

impl OutcomeSource for WorldSource<'_> {
    fn outcomes(&mut self, args: &IoArgs, _h: &History, _pending: &[Event]) -> Vec<IoResult> {
        vec![self.world.resolve_in_place(args).0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldRun {
    /// The irreducible term reached.
    pub result: Exp,
    pub trace: LocalTrace,
    pub world: FsWorld,
}

/// Runs the closed term `e` in `w` for at most `fuel` steps.
pub fn run_world(e: &Exp, w: &FsWorld, fuel: usize) -> Result<WorldRun, BehaviorError> {
    let entry = w.history.clone();
    let mut world = w.clone();
    let mut events = Vec::new();
    let mut cur = e.clone();
    for _ in 0..=fuel {
        let outcome = step_with(
            &cur,
            &entry,
            &events,
            &mut WorldSource { world: &mut world },
        );
        match outcome {
            StepOutcome::Irreducible(_) => {
                let trace = LocalTrace::new(entry, events)?;
                return Ok(WorldRun {
                    result: cur,
                    trace,
                    world,
                });
            }
            StepOutcome::Branches(mut bs) => {
                let (next, ev) = bs.pop().expect("a step has a successor");
                debug_assert!(bs.is_empty(), "the world resolves each call once");
                events.extend(ev);
                cur = next;
            }
        }
    }
    Err(BehaviorError::FuelExhausted { fuel, term: cur })
}
