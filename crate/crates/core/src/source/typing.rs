//! Type reconstruction for value and computation derivations.

use thiserror::Error;

use super::{SComp, SVal, SourceDeriv};
use crate::types::{QType, TyEnv};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SourceTypeError {
    #[error("variable out of scope")]
    Unbound,
    #[error("{rule}: expected {expected}, found {found}")]
    Mismatch {
        rule: &'static str,
        expected: String,
        found: QType,
    },
    #[error("{rule}: branches have types {left} and {right}")]
    Branches {
        rule: &'static str,
        left: QType,
        right: QType,
    },
}

fn mismatch(rule: &'static str, expected: impl ToString, found: &QType) -> SourceTypeError {
    SourceTypeError::Mismatch {
        rule,
        expected: expected.to_string(),
        found: found.clone(),
    }
}

fn expect(rule: &'static str, want: &QType, got: QType) -> Result<(), SourceTypeError> {
    if &got == want {
        Ok(())
    } else {
        Err(mismatch(rule, want, &got))
    }
}

fn same(rule: &'static str, left: QType, right: QType) -> Result<QType, SourceTypeError> {
    if left == right {
        Ok(left)
    } else {
        Err(SourceTypeError::Branches { rule, left, right })
    }
}

fn sum_parts(rule: &'static str, t: QType) -> Result<(QType, QType), SourceTypeError> {
    match t {
        QType::Sum(l, r) => Ok((*l, *r)),
        other => Err(mismatch(rule, "a sum", &other)),
    }
}

pub fn infer_sval(env: &TyEnv, v: &SVal) -> Result<QType, SourceTypeError> {
    use SVal::*;
    Ok(match v {
        Qtt => QType::Unit,
        Qtrue | Qfalse => QType::Bool,
        QStringLit(_) => QType::Str,
        QVar0 => env.lookup(0).cloned().ok_or(SourceTypeError::Unbound)?,
        QVarS(inner) => infer_sval(&env.tail().ok_or(SourceTypeError::Unbound)?, inner)?,
        QApp(f, x) => match infer_sval(env, f)? {
            QType::Arr(dom, cod) => {
                expect("QApp", &dom, infer_sval(env, x)?)?;
                *cod
            }
            other => return Err(mismatch("QApp", "a pure arrow", &other)),
        },
        QLambda(dom, body) => QType::arr(dom.clone(), infer_sval(&env.extend(dom.clone()), body)?),
        QLambdaIO(dom, body) => {
            QType::arr_io(dom.clone(), infer_scomp(&env.extend(dom.clone()), body)?)
        }
        QInl(other, x) => QType::sum(infer_sval(env, x)?, other.clone()),
        QInr(other, x) => QType::sum(other.clone(), infer_sval(env, x)?),
        QMkpair(x, y) => QType::pair(infer_sval(env, x)?, infer_sval(env, y)?),
        QFst(p) | QSnd(p) => match infer_sval(env, p)? {
            QType::Pair(l, r) => {
                if matches!(v, QFst(_)) {
                    *l
                } else {
                    *r
                }
            }
            other => return Err(mismatch("projection", "a pair", &other)),
        },
        QIf(c, t, e) => {
            expect("QIf", &QType::Bool, infer_sval(env, c)?)?;
            same("QIf", infer_sval(env, t)?, infer_sval(env, e)?)?
        }
        QCase(s, l, r) => {
            let (a, b) = sum_parts("QCase", infer_sval(env, s)?)?;
            same(
                "QCase",
                infer_sval(&env.extend(a), l)?,
                infer_sval(&env.extend(b), r)?,
            )?
        }
        QStrEq(x, y) => {
            expect("QStrEq", &QType::Str, infer_sval(env, x)?)?;
            expect("QStrEq", &QType::Str, infer_sval(env, y)?)?;
            QType::Bool
        }
    })
}

/// The payload type of a computation derivation.
pub fn infer_scomp(env: &TyEnv, c: &SComp) -> Result<QType, SourceTypeError> {
    use SComp::*;
    Ok(match c {
        QReturn(v) => infer_sval(env, v)?,
        QBind(m, k) => {
            let tm = infer_scomp(env, m)?;
            infer_scomp(&env.extend(tm), k)?
        }
        QOpenfile(name) => {
            expect("QOpenfile", &QType::Str, infer_sval(env, name)?)?;
            QType::resexn(QType::FileDescr)
        }
        QRead(fd) => {
            expect("QRead", &QType::FileDescr, infer_sval(env, fd)?)?;
            QType::resexn(QType::Str)
        }
        QWrite(fd, data) => {
            expect("QWrite", &QType::FileDescr, infer_sval(env, fd)?)?;
            expect("QWrite", &QType::Str, infer_sval(env, data)?)?;
            QType::resexn(QType::Unit)
        }
        QClose(fd) => {
            expect("QClose", &QType::FileDescr, infer_sval(env, fd)?)?;
            QType::resexn(QType::Unit)
        }
        QAppIO(f, x) => match infer_sval(env, f)? {
            QType::ArrIO(dom, cod) => {
                expect("QAppIO", &dom, infer_sval(env, x)?)?;
                *cod
            }
            other => return Err(mismatch("QAppIO", "an effectful arrow", &other)),
        },
        QIfIO(b, t, e) => {
            expect("QIfIO", &QType::Bool, infer_sval(env, b)?)?;
            same("QIfIO", infer_scomp(env, t)?, infer_scomp(env, e)?)?
        }
        QCaseIO(s, l, r) => {
            let (a, b) = sum_parts("QCaseIO", infer_sval(env, s)?)?;
            same(
                "QCaseIO",
                infer_scomp(&env.extend(a), l)?,
                infer_scomp(&env.extend(b), r)?,
            )?
        }
    })
}

pub fn infer_source(env: &TyEnv, d: &SourceDeriv) -> Result<QType, SourceTypeError> {
    match d {
        SourceDeriv::Val(v) => infer_sval(env, v),
        SourceDeriv::Comp(c) => infer_scomp(env, c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let e = TyEnv::empty();
        assert_eq!(
            infer_sval(&e, &SVal::lambda(QType::Bool, SVal::QVar0)),
            Ok(QType::arr(QType::Bool, QType::Bool))
        );
        assert_eq!(
            infer_scomp(&e, &SComp::open(SVal::string("f"))),
            Ok(QType::sum(QType::FileDescr, QType::Str))
        );
        assert_eq!(infer_sval(&e, &SVal::QVar0), Err(SourceTypeError::Unbound));
    }

    #[test]
    fn weakening_and_binders() {
        let env = TyEnv::from_innermost([QType::Bool, QType::Str]);
        assert_eq!(infer_sval(&env, &SVal::var(1)), Ok(QType::Str));
        assert_eq!(
            infer_sval(&env, &SVal::var(2)),
            Err(SourceTypeError::Unbound)
        );
        let c = SComp::bind(SComp::open(SVal::var(1)), SComp::ret(SVal::var(1)));
        assert_eq!(infer_scomp(&env, &c), Ok(QType::Bool));
        let case = SVal::case(
            SVal::inl(QType::Unit, SVal::Qtrue),
            SVal::QVar0,
            SVal::QFst(std::sync::Arc::new(SVal::pair(SVal::Qfalse, SVal::QVar0))),
        );
        assert_eq!(infer_sval(&TyEnv::empty(), &case), Ok(QType::Bool));
    }

    #[test]
    fn pure_and_io_arrows_are_distinct() {
        let e = TyEnv::empty();
        let f = SVal::lambda_io(QType::Bool, SComp::ret(SVal::QVar0));
        assert!(infer_sval(&e, &SVal::app(f.clone(), SVal::Qtrue)).is_err());
        assert_eq!(
            infer_scomp(&e, &SComp::app_io(f, SVal::Qtrue)),
            Ok(QType::Bool)
        );
        let bad_if = SVal::if_(SVal::Qtrue, SVal::Qtt, SVal::Qfalse);
        assert!(matches!(
            infer_sval(&e, &bad_if),
            Err(SourceTypeError::Branches { .. })
        ));
    }
}
