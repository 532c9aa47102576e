//! The source language: fine-grained call-by-value derivations.
//!
//! A derivation is the program. Values ([`SVal`]) and computations
//! ([`SComp`]) are kept apart; the only type annotations stored are the
//! domains of λ-abstractions and the other summand of injections, everything
//! else is reconstructed by [`infer_sval`] / [`infer_scomp`].

mod eval;
mod hist;
mod typing;

use std::sync::Arc;

pub use eval::{eval_source, eval_source_comp, io_bind, wrap_result, EvalEnv, IoTree, SValue};
pub use hist::{
    fs_beh_enum, fs_beh_enum_with, hist_bind, hist_return, op_wp, post_shift, theta, theta_holds,
    Hist, HistCont, HistPost, SourceBehaviorError,
};
pub use typing::{infer_scomp, infer_source, infer_sval, SourceTypeError};

use crate::types::QType;

/// Value derivations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SVal {
    Qtt,
    Qtrue,
    Qfalse,
    QStringLit(String),
    QVar0,
    /// Weakening: the inner derivation lives in the environment without its
    /// innermost binder.
    QVarS(Arc<SVal>),
    QApp(Arc<SVal>, Arc<SVal>),
    QLambda(QType, Arc<SVal>),
    QLambdaIO(QType, Arc<SComp>),
    QInl(QType, Arc<SVal>),
    QInr(QType, Arc<SVal>),
    QMkpair(Arc<SVal>, Arc<SVal>),
    QFst(Arc<SVal>),
    QSnd(Arc<SVal>),
    QIf(Arc<SVal>, Arc<SVal>, Arc<SVal>),
    QCase(Arc<SVal>, Arc<SVal>, Arc<SVal>),
    QStrEq(Arc<SVal>, Arc<SVal>),
}

/// Computation derivations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SComp {
    QReturn(Arc<SVal>),
    /// `k` binds the result of `m` at index 0.
    QBind(Arc<SComp>, Arc<SComp>),
    QOpenfile(Arc<SVal>),
    QRead(Arc<SVal>),
    QWrite(Arc<SVal>, Arc<SVal>),
    QClose(Arc<SVal>),
    QAppIO(Arc<SVal>, Arc<SVal>),
    QIfIO(Arc<SVal>, Arc<SComp>, Arc<SComp>),
    QCaseIO(Arc<SVal>, Arc<SComp>, Arc<SComp>),
}

/// Either judgment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SourceDeriv {
    Val(SVal),
    Comp(SComp),
}

fn a<T>(t: T) -> Arc<T> {
    Arc::new(t)
}

impl SVal {
    pub fn string(s: impl Into<String>) -> SVal {
        SVal::QStringLit(s.into())
    }
    pub fn bool(b: bool) -> SVal {
        if b {
            SVal::Qtrue
        } else {
            SVal::Qfalse
        }
    }
    /// The variable at de Bruijn index `ix`, as a weakening chain.
    pub fn var(ix: usize) -> SVal {
        (0..ix).fold(SVal::QVar0, |v, _| SVal::QVarS(a(v)))
    }
    pub fn vars(v: SVal) -> SVal {
        SVal::QVarS(a(v))
    }
    pub fn app(f: SVal, x: SVal) -> SVal {
        SVal::QApp(a(f), a(x))
    }
    pub fn lambda(dom: QType, body: SVal) -> SVal {
        SVal::QLambda(dom, a(body))
    }
    pub fn lambda_io(dom: QType, body: SComp) -> SVal {
        SVal::QLambdaIO(dom, a(body))
    }
    pub fn inl(other: QType, v: SVal) -> SVal {
        SVal::QInl(other, a(v))
    }
    pub fn inr(other: QType, v: SVal) -> SVal {
        SVal::QInr(other, a(v))
    }
    pub fn pair(x: SVal, y: SVal) -> SVal {
        SVal::QMkpair(a(x), a(y))
    }
    pub fn fst(p: SVal) -> SVal {
        SVal::QFst(a(p))
    }
    pub fn snd(p: SVal) -> SVal {
        SVal::QSnd(a(p))
    }
    pub fn if_(c: SVal, t: SVal, e: SVal) -> SVal {
        SVal::QIf(a(c), a(t), a(e))
    }
    pub fn case(s: SVal, l: SVal, r: SVal) -> SVal {
        SVal::QCase(a(s), a(l), a(r))
    }
    pub fn str_eq(x: SVal, y: SVal) -> SVal {
        SVal::QStrEq(a(x), a(y))
    }

    /// The de Bruijn index if this is a pure weakening chain over `QVar0`.
    pub fn var_index(&self) -> Option<usize> {
        match self {
            SVal::QVar0 => Some(0),
            SVal::QVarS(inner) => inner.var_index().map(|i| i + 1),
            _ => None,
        }
    }

    /// Height of the derivation; a weakening chain over `QVar0` counts as
    /// one node.
    pub fn height(&self) -> usize {
        if self.var_index().is_some() {
            return 1;
        }
        1 + match self {
            SVal::Qtt | SVal::Qtrue | SVal::Qfalse | SVal::QStringLit(_) | SVal::QVar0 => 0,
            SVal::QVarS(v) | SVal::QLambda(_, v) | SVal::QInl(_, v) | SVal::QInr(_, v) => {
                v.height()
            }
            SVal::QFst(v) | SVal::QSnd(v) => v.height(),
            SVal::QLambdaIO(_, c) => c.height(),
            SVal::QApp(x, y) | SVal::QMkpair(x, y) | SVal::QStrEq(x, y) => {
                x.height().max(y.height())
            }
            SVal::QIf(x, y, z) | SVal::QCase(x, y, z) => x.height().max(y.height()).max(z.height()),
        }
    }
}

impl SComp {
    pub fn ret(v: SVal) -> SComp {
        SComp::QReturn(a(v))
    }
    pub fn bind(m: SComp, k: SComp) -> SComp {
        SComp::QBind(a(m), a(k))
    }
    pub fn open(name: SVal) -> SComp {
        SComp::QOpenfile(a(name))
    }
    pub fn read(fd: SVal) -> SComp {
        SComp::QRead(a(fd))
    }
    pub fn write(fd: SVal, data: SVal) -> SComp {
        SComp::QWrite(a(fd), a(data))
    }
    pub fn close(fd: SVal) -> SComp {
        SComp::QClose(a(fd))
    }
    pub fn app_io(f: SVal, x: SVal) -> SComp {
        SComp::QAppIO(a(f), a(x))
    }
    pub fn if_io(c: SVal, t: SComp, e: SComp) -> SComp {
        SComp::QIfIO(a(c), a(t), a(e))
    }
    pub fn case_io(s: SVal, l: SComp, r: SComp) -> SComp {
        SComp::QCaseIO(a(s), a(l), a(r))
    }

    pub fn height(&self) -> usize {
        1 + match self {
            SComp::QReturn(v) | SComp::QOpenfile(v) | SComp::QRead(v) | SComp::QClose(v) => {
                v.height()
            }
            SComp::QWrite(x, y) | SComp::QAppIO(x, y) => x.height().max(y.height()),
            SComp::QBind(m, k) => m.height().max(k.height()),
            SComp::QIfIO(c, t, e) | SComp::QCaseIO(c, t, e) => {
                c.height().max(t.height()).max(e.height())
            }
        }
    }
}

/// Weakens `v` by a fresh binder inserted below the `cutoff` innermost ones.
pub fn shift_sval(v: &SVal, cutoff: usize) -> SVal {
    use SVal::*;
    if cutoff == 0 {
        return QVarS(a(v.clone()));
    }
    let s = |x: &Arc<SVal>| a(shift_sval(x, cutoff));
    let under = |x: &Arc<SVal>| a(shift_sval(x, cutoff + 1));
    match v {
        Qtt | Qtrue | Qfalse | QStringLit(_) | QVar0 => v.clone(),
        QVarS(inner) => QVarS(a(shift_sval(inner, cutoff - 1))),
        QApp(x, y) => QApp(s(x), s(y)),
        QLambda(t, b) => QLambda(t.clone(), under(b)),
        QLambdaIO(t, c) => QLambdaIO(t.clone(), a(shift_scomp(c, cutoff + 1))),
        QInl(t, x) => QInl(t.clone(), s(x)),
        QInr(t, x) => QInr(t.clone(), s(x)),
        QMkpair(x, y) => QMkpair(s(x), s(y)),
        QFst(x) => QFst(s(x)),
        QSnd(x) => QSnd(s(x)),
        QIf(x, y, z) => QIf(s(x), s(y), s(z)),
        QCase(x, y, z) => QCase(s(x), under(y), under(z)),
        QStrEq(x, y) => QStrEq(s(x), s(y)),
    }
}

/// [`shift_sval`] for computations.
pub fn shift_scomp(c: &SComp, cutoff: usize) -> SComp {
    use SComp::*;
    let s = |x: &Arc<SVal>| a(shift_sval(x, cutoff));
    let sc = |x: &Arc<SComp>, b: usize| a(shift_scomp(x, cutoff + b));
    match c {
        QReturn(v) => QReturn(s(v)),
        QBind(m, k) => QBind(sc(m, 0), sc(k, 1)),
        QOpenfile(v) => QOpenfile(s(v)),
        QRead(v) => QRead(s(v)),
        QWrite(x, y) => QWrite(s(x), s(y)),
        QClose(v) => QClose(s(v)),
        QAppIO(f, x) => QAppIO(s(f), s(x)),
        QIfIO(x, t, e) => QIfIO(s(x), sc(t, 0), sc(e, 0)),
        QCaseIO(x, l, r) => QCaseIO(s(x), sc(l, 1), sc(r, 1)),
    }
}
