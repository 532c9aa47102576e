//! Printing derivations back to surface syntax.
//!
//! Binders are named after their depth: the variable bound under `n`
//! enclosing binders is `x{n}`.

use super::parse::{Surface, SurfaceKind};
use crate::sexp::Pos;
use crate::source::{infer_scomp, infer_sval, SComp, SVal, SourceDeriv};
use crate::types::{QType, TyEnv};

fn node(kind: SurfaceKind) -> Surface {
    Surface {
        kind,
        pos: Pos::default(),
    }
}

fn b(s: Surface) -> Box<Surface> {
    Box::new(s)
}

fn name(depth: usize) -> String {
    format!("x{depth}")
}

fn sum_parts(env: &TyEnv, s: &SVal) -> (QType, QType) {
    match infer_sval(env, s) {
        Ok(QType::Sum(a, b)) => (*a, *b),
        other => panic!("printing an ill-typed derivation: scrutinee has type {other:?}"),
    }
}

/// Surface form of a value derivation valid under `env`.
pub fn surface_of_val(env: &TyEnv, v: &SVal) -> Surface {
    use SurfaceKind as K;
    let go = |x: &SVal| b(surface_of_val(env, x));
    let depth = env.len();
    let kind = match v {
        SVal::Qtt => K::Unit,
        SVal::Qtrue => K::True,
        SVal::Qfalse => K::False,
        SVal::QStringLit(s) => K::Str(s.clone()),
        SVal::QVar0 | SVal::QVarS(_) if v.var_index().is_some() => {
            let ix = v.var_index().unwrap();
            K::Name(name(depth - 1 - ix))
        }
        SVal::QVarS(inner) => {
            return surface_of_val(&env.tail().expect("weakening under a binder"), inner)
        }
        SVal::QVar0 => unreachable!(),
        SVal::QApp(f, x) => K::App(go(f), go(x)),
        SVal::QLambda(dom, body) => K::Fun(
            name(depth),
            dom.clone(),
            b(surface_of_val(&env.extend(dom.clone()), body)),
        ),
        SVal::QLambdaIO(dom, body) => K::FunIo(
            name(depth),
            dom.clone(),
            b(surface_of_comp(&env.extend(dom.clone()), body)),
        ),
        SVal::QInl(t, x) => K::Inl(t.clone(), go(x)),
        SVal::QInr(t, x) => K::Inr(t.clone(), go(x)),
        SVal::QMkpair(x, y) => K::Pair(go(x), go(y)),
        SVal::QFst(p) => K::Fst(go(p)),
        SVal::QSnd(p) => K::Snd(go(p)),
        SVal::QIf(c, t, e) => K::If(go(c), go(t), go(e)),
        SVal::QCase(s, l, r) => {
            let (ta, tb) = sum_parts(env, s);
            K::Case(
                go(s),
                (name(depth), b(surface_of_val(&env.extend(ta), l))),
                (name(depth), b(surface_of_val(&env.extend(tb), r))),
            )
        }
        SVal::QStrEq(x, y) => K::StrEq(go(x), go(y)),
    };
    node(kind)
}

/// Surface form of a computation derivation valid under `env`.
pub fn surface_of_comp(env: &TyEnv, c: &SComp) -> Surface {
    use SurfaceKind as K;
    let go = |x: &SVal| b(surface_of_val(env, x));
    let depth = env.len();
    let kind = match c {
        SComp::QReturn(v) => K::Return(go(v)),
        SComp::QBind(m, k) => {
            let tm = infer_scomp(env, m).expect("printing a well-typed derivation");
            K::Let(
                name(depth),
                b(surface_of_comp(env, m)),
                b(surface_of_comp(&env.extend(tm), k)),
            )
        }
        SComp::QOpenfile(v) => K::Open(go(v)),
        SComp::QRead(v) => K::Read(go(v)),
        SComp::QWrite(fd, d) => K::Write(go(fd), go(d)),
        SComp::QClose(v) => K::Close(go(v)),
        SComp::QAppIO(f, x) => K::AppIo(go(f), go(x)),
        SComp::QIfIO(c, t, e) => K::IfIo(
            go(c),
            b(surface_of_comp(env, t)),
            b(surface_of_comp(env, e)),
        ),
        SComp::QCaseIO(s, l, r) => {
            let (ta, tb) = sum_parts(env, s);
            K::CaseIo(
                go(s),
                (name(depth), b(surface_of_comp(&env.extend(ta), l))),
                (name(depth), b(surface_of_comp(&env.extend(tb), r))),
            )
        }
    };
    node(kind)
}

/// Surface text of a closed derivation.
pub fn print_derivation(d: &SourceDeriv) -> String {
    let env = TyEnv::empty();
    match d {
        SourceDeriv::Val(v) => surface_of_val(&env, v).to_string(),
        SourceDeriv::Comp(c) => surface_of_comp(&env, c).to_string(),
    }
}
