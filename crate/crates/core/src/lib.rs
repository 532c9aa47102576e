//! A fine-grained call-by-value IO language, its compiler to λIO, and tools to compare their behaviors.

pub mod backtranslate;
pub mod compile;
pub mod demo;
pub mod frontend;
pub mod fsworld;
pub mod ops;
pub mod relate;
pub mod seclink;
pub mod sexp;
pub mod source;
pub mod target;
pub mod traces;
pub mod types;

pub use ops::{IoArgs, IoOk, IoOp, IoResult, OutcomeSource, OutcomeUniverse};
pub use target::Exp;
pub use traces::{Event, FileDescrId, History, LocalTrace};
pub use types::{Interface, QType, TyEnv};
