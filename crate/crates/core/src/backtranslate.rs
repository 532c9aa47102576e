//! Back-translation of typed λIO terms into source derivations.
//!
//! Pure subderivations map to value derivations node by node. Effectful ones
//! are sequenced in the target's evaluation order: operands are bound one by
//! one with `bind` (pure non-trivial operands through `return`), trivial
//! operands are referenced directly, and the head becomes the corresponding
//! computation form.

use thiserror::Error;

use crate::source::{shift_scomp, shift_sval, SComp, SVal, SourceDeriv};
use crate::target::{check_target, infer_target, Effect, Exp, TargetTypeError, TargetTyping};
use crate::types::{QType, TyEnv};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BtError {
    #[error("file descriptor literal `{0}` cannot be back-translated")]
    FdLiteral(Exp),
    #[error("typing derivation does not fit `{0}`")]
    Malformed(Exp),
    #[error(transparent)]
    Type(#[from] TargetTypeError),
}

type BtResult<T> = Result<T, BtError>;

/// Back-translates `e` along its derivation `deriv`: a value derivation if
/// the effect is pure, a computation otherwise.
pub fn bt(env: &TyEnv, e: &Exp, deriv: &TargetTyping) -> BtResult<SourceDeriv> {
    if e.contains_fd_literal() {
        return Err(BtError::FdLiteral(e.clone()));
    }
    match deriv.eff {
        Effect::Pure => Ok(SourceDeriv::Val(bt_val(env, e, deriv)?)),
        Effect::Io => Ok(SourceDeriv::Comp(bt_comp(env, e, deriv)?)),
    }
}

/// Infers a derivation for `e` and back-translates along it.
pub fn back_translate(env: &TyEnv, e: &Exp) -> BtResult<(SourceDeriv, TargetTyping)> {
    let d = infer_target(env, e)?;
    Ok((bt(env, e, &d)?, d))
}

/// Back-translates `e` checked against `ty` as a computation.
pub fn back_translate_comp(env: &TyEnv, e: &Exp, ty: &QType) -> BtResult<SComp> {
    if e.contains_fd_literal() {
        return Err(BtError::FdLiteral(e.clone()));
    }
    let d = check_target(env, e, ty)?;
    bt_any(env, e, &d)
}

/// Back-translates the closed pure term `e` at `ty` to a value derivation.
pub fn back_translate_val(e: &Exp, ty: &QType) -> BtResult<SVal> {
    let env = TyEnv::empty();
    let d = check_target(&env, e, ty)?;
    match bt(&env, e, &d)? {
        SourceDeriv::Val(v) => Ok(v),
        SourceDeriv::Comp(_) => Err(BtError::Malformed(e.clone())),
    }
}

fn child<'d>(d: &'d TargetTyping, i: usize, e: &Exp) -> BtResult<&'d TargetTyping> {
    d.children
        .get(i)
        .ok_or_else(|| BtError::Malformed(e.clone()))
}

fn case_envs(env: &TyEnv, scrut: &TargetTyping, e: &Exp) -> BtResult<(TyEnv, TyEnv)> {
    match &scrut.ty {
        QType::Sum(a, b) => Ok((env.extend((**a).clone()), env.extend((**b).clone()))),
        _ => Err(BtError::Malformed(e.clone())),
    }
}

fn bt_val(env: &TyEnv, e: &Exp, d: &TargetTyping) -> BtResult<SVal> {
    if d.eff != Effect::Pure {
        return Err(BtError::Malformed(e.clone()));
    }
    let sub = |i: usize, x: &Exp| bt_val(env, x, child(d, i, e)?);
    Ok(match e {
        Exp::Var(i) => SVal::var(*i),
        Exp::Unit => SVal::Qtt,
        Exp::True => SVal::Qtrue,
        Exp::False => SVal::Qfalse,
        Exp::Str(s) => SVal::string(s.clone()),
        Exp::FileDescr(_) => return Err(BtError::FdLiteral(e.clone())),
        Exp::Lam(dom, body) => {
            let inner = env.extend(dom.clone());
            let bd = child(d, 0, e)?;
            match &d.ty {
                QType::Arr(..) => SVal::lambda(dom.clone(), bt_val(&inner, body, bd)?),
                QType::ArrIO(..) => SVal::lambda_io(dom.clone(), bt_any(&inner, body, bd)?),
                _ => return Err(BtError::Malformed(e.clone())),
            }
        }
        Exp::App(f, x) => SVal::app(sub(0, f)?, sub(1, x)?),
        Exp::If(c, t, f) => SVal::if_(sub(0, c)?, sub(1, t)?, sub(2, f)?),
        Exp::Pair(a, b) => SVal::pair(sub(0, a)?, sub(1, b)?),
        Exp::Fst(p) => SVal::fst(sub(0, p)?),
        Exp::Snd(p) => SVal::snd(sub(0, p)?),
        Exp::Inl(t, x) => SVal::inl(t.clone(), sub(0, x)?),
        Exp::Inr(t, x) => SVal::inr(t.clone(), sub(0, x)?),
        Exp::Case(s, l, r) => {
            let ds = child(d, 0, e)?;
            let (lenv, renv) = case_envs(env, ds, e)?;
            SVal::case(
                bt_val(env, s, ds)?,
                bt_val(&lenv, l, child(d, 1, e)?)?,
                bt_val(&renv, r, child(d, 2, e)?)?,
            )
        }
        Exp::StrEq(a, b) => SVal::str_eq(sub(0, a)?, sub(1, b)?),
        Exp::Open(_) | Exp::Read(_) | Exp::Write(..) | Exp::Close(_) => {
            return Err(BtError::Malformed(e.clone()))
        }
    })
}

/// A computation for `e` whatever its effect.
fn bt_any(env: &TyEnv, e: &Exp, d: &TargetTyping) -> BtResult<SComp> {
    match d.eff {
        Effect::Pure => Ok(SComp::ret(bt_val(env, e, d)?)),
        Effect::Io => bt_comp(env, e, d),
    }
}

/// Operands referenced directly rather than bound: variables and value
/// forms built from them.
fn trivial(e: &Exp) -> bool {
    match e {
        Exp::Var(_) | Exp::Unit | Exp::True | Exp::False | Exp::Str(_) | Exp::Lam(..) => true,
        Exp::Pair(a, b) => trivial(a) && trivial(b),
        Exp::Inl(_, v) | Exp::Inr(_, v) => trivial(v),
        _ => false,
    }
}

fn weaken_val(v: SVal, n: usize) -> SVal {
    (0..n).fold(v, |v, _| shift_sval(&v, 0))
}

fn weaken_comp(c: SComp, n: usize, cutoff: usize) -> SComp {
    (0..n).fold(c, |c, _| shift_scomp(&c, cutoff))
}

enum Operand {
    Direct(SVal),
    Bound(SComp),
}

/// Evaluates `operands` left to right, then runs `finish` on value
/// derivations for them. `finish` lives under one binder per bound operand
/// and receives that count.
fn sequence(
    env: &TyEnv,
    operands: &[(&Exp, &TargetTyping)],
    finish: impl FnOnce(Vec<SVal>, usize) -> BtResult<SComp>,
) -> BtResult<SComp> {
    let mut ops = Vec::with_capacity(operands.len());
    for (x, dx) in operands {
        ops.push(if dx.eff == Effect::Pure && trivial(x) {
            Operand::Direct(bt_val(env, x, dx)?)
        } else {
            Operand::Bound(bt_any(env, x, dx)?)
        });
    }
    let total = ops
        .iter()
        .filter(|o| matches!(o, Operand::Bound(_)))
        .count();
    let mut binds = Vec::new();
    let mut args = Vec::with_capacity(ops.len());
    for op in ops {
        match op {
            Operand::Direct(v) => args.push(weaken_val(v, total)),
            Operand::Bound(c) => {
                let j = binds.len();
                binds.push(weaken_comp(c, j, 0));
                args.push(SVal::var(total - 1 - j));
            }
        }
    }
    let mut out = finish(args, total)?;
    for m in binds.into_iter().rev() {
        out = SComp::bind(m, out);
    }
    Ok(out)
}

fn bt_comp(env: &TyEnv, e: &Exp, d: &TargetTyping) -> BtResult<SComp> {
    if d.eff != Effect::Io {
        return Err(BtError::Malformed(e.clone()));
    }
    let ch = |i: usize| child(d, i, e);
    let mal = || BtError::Malformed(e.clone());
    let two = |a: &[SVal]| -> (SVal, SVal) { (a[0].clone(), a[1].clone()) };
    match e {
        Exp::App(f, x) => {
            let io_head = matches!(ch(0)?.ty, QType::ArrIO(..));
            sequence(env, &[(f, ch(0)?), (x, ch(1)?)], |a, _| {
                let (f, x) = two(&a);
                Ok(if io_head {
                    SComp::app_io(f, x)
                } else {
                    SComp::ret(SVal::app(f, x))
                })
            })
        }
        Exp::Pair(x, y) => sequence(env, &[(x, ch(0)?), (y, ch(1)?)], |a, _| {
            let (x, y) = two(&a);
            Ok(SComp::ret(SVal::pair(x, y)))
        }),
        Exp::StrEq(x, y) => sequence(env, &[(x, ch(0)?), (y, ch(1)?)], |a, _| {
            let (x, y) = two(&a);
            Ok(SComp::ret(SVal::str_eq(x, y)))
        }),
        Exp::Write(fd, data) => sequence(env, &[(fd, ch(0)?), (data, ch(1)?)], |a, _| {
            let (fd, data) = two(&a);
            Ok(SComp::write(fd, data))
        }),
        Exp::Fst(x)
        | Exp::Snd(x)
        | Exp::Inl(_, x)
        | Exp::Inr(_, x)
        | Exp::Open(x)
        | Exp::Read(x)
        | Exp::Close(x) => sequence(env, &[(x, ch(0)?)], |mut a, _| {
            let v = a.pop().ok_or_else(mal)?;
            Ok(match e {
                Exp::Fst(_) => SComp::ret(SVal::fst(v)),
                Exp::Snd(_) => SComp::ret(SVal::snd(v)),
                Exp::Inl(t, _) => SComp::ret(SVal::inl(t.clone(), v)),
                Exp::Inr(t, _) => SComp::ret(SVal::inr(t.clone(), v)),
                Exp::Open(_) => SComp::open(v),
                Exp::Read(_) => SComp::read(v),
                _ => SComp::close(v),
            })
        }),
        Exp::If(c, t, f) => {
            let tc = bt_any(env, t, ch(1)?)?;
            let fc = bt_any(env, f, ch(2)?)?;
            sequence(env, &[(c, ch(0)?)], |mut a, n| {
                let c = a.pop().ok_or_else(mal)?;
                Ok(SComp::if_io(
                    c,
                    weaken_comp(tc, n, 0),
                    weaken_comp(fc, n, 0),
                ))
            })
        }
        Exp::Case(s, l, r) => {
            let ds = ch(0)?;
            let (lenv, renv) = case_envs(env, ds, e)?;
            let lc = bt_any(&lenv, l, ch(1)?)?;
            let rc = bt_any(&renv, r, ch(2)?)?;
            sequence(env, &[(s, ds)], |mut a, n| {
                let s = a.pop().ok_or_else(mal)?;
                Ok(SComp::case_io(
                    s,
                    weaken_comp(lc, n, 1),
                    weaken_comp(rc, n, 1),
                ))
            })
        }
        Exp::FileDescr(_) => Err(BtError::FdLiteral(e.clone())),
        Exp::Var(_) | Exp::Unit | Exp::True | Exp::False | Exp::Str(_) | Exp::Lam(..) => Err(mal()),
    }
}
