//! IO operations, their results, and the finite outcome universe both
//! semantics resolve nondeterminism against.

use std::fmt;

use crate::traces::{fresh_fd, fresh_fd_after, Event, FileDescrId, History, ERR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IoOp {
    Open,
    Read,
    Write,
    Close,
}

impl fmt::Display for IoOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IoOp::Open => "open",
            IoOp::Read => "read",
            IoOp::Write => "write",
            IoOp::Close => "close",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IoArgs {
    Open(String),
    Read(FileDescrId),
    Write(FileDescrId, String),
    Close(FileDescrId),
}

impl IoArgs {
    pub fn op(&self) -> IoOp {
        match self {
            IoArgs::Open(_) => IoOp::Open,
            IoArgs::Read(_) => IoOp::Read,
            IoArgs::Write(..) => IoOp::Write,
            IoArgs::Close(_) => IoOp::Close,
        }
    }
}

/// Successful payload of an operation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IoOk {
    Fd(FileDescrId),
    Str(String),
    Unit,
}

pub type IoResult = Result<IoOk, String>;

/// Maps an operation, its arguments and its result to the recorded event.
///
/// Panics if the result shape does not match the operation.
pub fn op_to_ev(args: &IoArgs, res: &IoResult) -> Event {
    fn err(res: &IoResult) -> String {
        res.as_ref().expect_err("checked by caller").clone()
    }
    match (args, res) {
        (IoArgs::Open(name), Ok(IoOk::Fd(fd))) => Event::EvOpen {
            name: name.clone(),
            res: Ok(*fd),
        },
        (IoArgs::Open(name), Err(_)) => Event::EvOpen {
            name: name.clone(),
            res: Err(err(res)),
        },
        (IoArgs::Read(fd), Ok(IoOk::Str(s))) => Event::EvRead {
            fd: *fd,
            res: Ok(s.clone()),
        },
        (IoArgs::Read(fd), Err(_)) => Event::EvRead {
            fd: *fd,
            res: Err(err(res)),
        },
        (IoArgs::Write(fd, arg), Ok(IoOk::Unit)) => Event::EvWrite {
            fd: *fd,
            arg: arg.clone(),
            res: Ok(()),
        },
        (IoArgs::Write(fd, arg), Err(_)) => Event::EvWrite {
            fd: *fd,
            arg: arg.clone(),
            res: Err(err(res)),
        },
        (IoArgs::Close(fd), Ok(IoOk::Unit)) => Event::EvClose {
            fd: *fd,
            res: Ok(()),
        },
        (IoArgs::Close(fd), Err(_)) => Event::EvClose {
            fd: *fd,
            res: Err(err(res)),
        },
        (args, res) => panic!("result {res:?} does not fit operation {}", args.op()),
    }
}

/// Anything that can answer "which results may this operation return here".
pub trait OutcomeSource {
    /// `h` is the full history at the call, `pending` the events produced
    /// since (oldest first). Must return at least one result.
    fn outcomes(&mut self, args: &IoArgs, h: &History, pending: &[Event]) -> Vec<IoResult>;
}

/// The finite universe of admissible results: opens succeed with the fresh
/// descriptor or fail, reads return any string of `sigma` or fail, writes and
/// closes succeed or fail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutcomeUniverse {
    pub sigma: Vec<String>,
}

impl OutcomeUniverse {
    pub fn new<S: Into<String>>(sigma: impl IntoIterator<Item = S>) -> Self {
        let mut sigma: Vec<String> = sigma.into_iter().map(Into::into).collect();
        sigma.sort();
        sigma.dedup();
        OutcomeUniverse { sigma }
    }

    /// Results for `args` at history `h`.
    pub fn results(&self, args: &IoArgs, h: &History) -> Vec<IoResult> {
        self.results_with_fd(args, fresh_fd(h))
    }

    fn results_with_fd(&self, args: &IoArgs, fresh: FileDescrId) -> Vec<IoResult> {
        let fail = Err(ERR.to_string());
        match args {
            IoArgs::Open(_) => vec![Ok(IoOk::Fd(fresh)), fail],
            IoArgs::Read(_) => {
                let mut v: Vec<IoResult> = self
                    .sigma
                    .iter()
                    .map(|s| Ok(IoOk::Str(s.clone())))
                    .collect();
                v.push(fail);
                v
            }
            IoArgs::Write(..) | IoArgs::Close(_) => vec![Ok(IoOk::Unit), fail],
        }
    }

    /// Membership form of the operation postcondition.
    pub fn admits(&self, args: &IoArgs, h: &History, res: &IoResult) -> bool {
        self.results(args, h).contains(res)
    }
}

impl OutcomeSource for OutcomeUniverse {
    fn outcomes(&mut self, args: &IoArgs, h: &History, pending: &[Event]) -> Vec<IoResult> {
        self.results_with_fd(args, fresh_fd_after(h, pending))
    }
}

impl OutcomeSource for &OutcomeUniverse {
    fn outcomes(&mut self, args: &IoArgs, h: &History, pending: &[Event]) -> Vec<IoResult> {
        self.results_with_fd(args, fresh_fd_after(h, pending))
    }
}
