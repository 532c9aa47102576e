//! Single-node mutations of λIO programs.

use std::fmt;

use crate::ops::OutcomeUniverse;
use crate::target::{check_target, BehaviorError, Exp};
use crate::types::{QType, TyEnv};

use super::{link_target, whole_beh_target, CtxT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationKind {
    IfSwap,
    BoolFlip,
    StringChange,
    ProjSwap,
    InjSwap,
    CaseSwap,
    WriteToClose,
    CloseToWrite,
    ReadToClose,
    CloseToRead,
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutant {
    pub kind: MutationKind,
    pub exp: Exp,
}

fn other_string(s: &str) -> &'static str {
    match s {
        "a" => "b",
        "b" => "a",
        "f" => "g",
        "g" => "f",
        _ => "a",
    }
}

fn local(e: &Exp) -> Vec<Mutant> {
    use MutationKind::*;
    let m = |kind, exp| Mutant { kind, exp };
    match e {
        Exp::If(c, t, f) if t != f => vec![m(IfSwap, Exp::If(c.clone(), f.clone(), t.clone()))],
        Exp::True => vec![m(BoolFlip, Exp::False)],
        Exp::False => vec![m(BoolFlip, Exp::True)],
        Exp::Str(s) => vec![m(StringChange, Exp::string(other_string(s)))],
        Exp::Fst(p) => vec![m(ProjSwap, Exp::Snd(p.clone()))],
        Exp::Snd(p) => vec![m(ProjSwap, Exp::Fst(p.clone()))],
        Exp::Inl(t, v) => vec![m(InjSwap, Exp::Inr(t.clone(), v.clone()))],
        Exp::Inr(t, v) => vec![m(InjSwap, Exp::Inl(t.clone(), v.clone()))],
        Exp::Case(s, l, r) if l != r => {
            vec![m(CaseSwap, Exp::Case(s.clone(), r.clone(), l.clone()))]
        }
        Exp::Write(fd, _) => vec![m(WriteToClose, Exp::Close(fd.clone()))],
        Exp::Close(fd) => vec![
            m(CloseToWrite, Exp::write((**fd).clone(), Exp::string("a"))),
            m(CloseToRead, Exp::Read(fd.clone())),
        ],
        Exp::Read(fd) => vec![m(ReadToClose, Exp::Close(fd.clone()))],
        _ => vec![],
    }
}

/// Every single-node mutation of `e`, typed or not.
pub fn mutants(e: &Exp) -> Vec<Mutant> {
    let mut out = local(e);
    let children: Vec<Exp> = e.children().into_iter().map(|(c, _)| c.clone()).collect();
    for (j, child) in children.iter().enumerate() {
        for sub in mutants(child) {
            let mut idx = 0;
            let rebuilt = e.map_children(|c, _| {
                let r = if idx == j { sub.exp.clone() } else { c.clone() };
                idx += 1;
                r
            });
            out.push(Mutant {
                kind: sub.kind,
                exp: rebuilt,
            });
        }
    }
    out
}

/// Mutants of the closed term `e` that still check against `ty`.
pub fn typed_mutants(e: &Exp, ty: &QType) -> Vec<Mutant> {
    mutants(e)
        .into_iter()
        .filter(|m| check_target(&TyEnv::empty(), &m.exp, ty).is_ok())
        .collect()
}

/// The enumeration oracle: linking the mutant with `c` changes the set of
/// whole-program behaviors.
pub fn changes_semantics(
    original: &Exp,
    mutant: &Exp,
    c: &CtxT,
    u: &OutcomeUniverse,
    fuel: usize,
) -> Result<bool, BehaviorError> {
    let w0 = link_target(original, c).expect("closed program");
    let w1 = link_target(mutant, c).expect("closed program");
    Ok(whole_beh_target(&w0, u, fuel)? != whole_beh_target(&w1, u, fuel)?)
}
