//! Compilation of source derivations to λIO.
//!
//! `bind` becomes the application of an abstraction, weakening becomes an
//! index shift, everything else maps to the constructor of the same shape.

use crate::source::{infer_scomp, infer_sval, SComp, SVal, SourceDeriv, SourceTypeError};
use crate::target::{shift, Exp};
use crate::types::{QType, TyEnv};

/// Compiles a closed derivation.
pub fn compile(d: &SourceDeriv) -> Result<Exp, SourceTypeError> {
    match d {
        SourceDeriv::Val(v) => compile_sval(&TyEnv::empty(), v),
        SourceDeriv::Comp(c) => compile_scomp(&TyEnv::empty(), c),
    }
}

/// Compiles a value derivation valid under `env`.
pub fn compile_sval(env: &TyEnv, v: &SVal) -> Result<Exp, SourceTypeError> {
    infer_sval(env, v)?;
    Ok(cv(env, v))
}

pub fn compile_scomp(env: &TyEnv, c: &SComp) -> Result<Exp, SourceTypeError> {
    infer_scomp(env, c)?;
    Ok(cc(env, c))
}

fn sum_parts(env: &TyEnv, s: &SVal) -> (QType, QType) {
    match infer_sval(env, s) {
        Ok(QType::Sum(a, b)) => (*a, *b),
        other => unreachable!("checked scrutinee has type {other:?}"),
    }
}

fn cv(env: &TyEnv, v: &SVal) -> Exp {
    use SVal::*;
    let go = |x: &SVal| Box::new(cv(env, x));
    match v {
        Qtt => Exp::Unit,
        Qtrue => Exp::True,
        Qfalse => Exp::False,
        QStringLit(s) => Exp::Str(s.clone()),
        QVar0 => Exp::Var(0),
        QVarS(inner) => shift(&cv(&env.tail().expect("checked"), inner), 0, 1),
        QApp(f, x) => Exp::App(go(f), go(x)),
        QLambda(dom, body) => Exp::lam(dom.clone(), cv(&env.extend(dom.clone()), body)),
        QLambdaIO(dom, body) => Exp::lam(dom.clone(), cc(&env.extend(dom.clone()), body)),
        QInl(t, x) => Exp::Inl(t.clone(), go(x)),
        QInr(t, x) => Exp::Inr(t.clone(), go(x)),
        QMkpair(x, y) => Exp::Pair(go(x), go(y)),
        QFst(p) => Exp::Fst(go(p)),
        QSnd(p) => Exp::Snd(go(p)),
        QIf(c, t, e) => Exp::If(go(c), go(t), go(e)),
        QCase(s, l, r) => {
            let (a, b) = sum_parts(env, s);
            Exp::case(cv(env, s), cv(&env.extend(a), l), cv(&env.extend(b), r))
        }
        QStrEq(x, y) => Exp::StrEq(go(x), go(y)),
    }
}

fn cc(env: &TyEnv, c: &SComp) -> Exp {
    use SComp::*;
    let go = |x: &SVal| Box::new(cv(env, x));
    match c {
        QReturn(v) => cv(env, v),
        QBind(m, k) => {
            let tm = infer_scomp(env, m).expect("checked");
            Exp::app(Exp::lam(tm.clone(), cc(&env.extend(tm), k)), cc(env, m))
        }
        QOpenfile(v) => Exp::Open(go(v)),
        QRead(v) => Exp::Read(go(v)),
        QWrite(fd, d) => Exp::Write(go(fd), go(d)),
        QClose(v) => Exp::Close(go(v)),
        QAppIO(f, x) => Exp::App(go(f), go(x)),
        QIfIO(b, t, e) => Exp::if_(cv(env, b), cc(env, t), cc(env, e)),
        QCaseIO(s, l, r) => {
            let (a, b) = sum_parts(env, s);
            Exp::case(cv(env, s), cc(&env.extend(a), l), cc(&env.extend(b), r))
        }
    }
}
