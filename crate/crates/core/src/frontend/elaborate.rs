//! Elaboration of named surface terms into source derivations.
//!
//! Checking is syntax directed: every binder is annotated and every sum
//! injection names its other summand, so each form has one rule. Errors are
//! collected rather than stopping at the first one.

use std::fmt;

use super::parse::{Surface, SurfaceKind};
use crate::sexp::Pos;
use crate::source::{SComp, SVal, SourceDeriv};
use crate::types::QType;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabError {
    pub pos: Pos,
    pub msg: String,
}

impl fmt::Display for ElabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.msg)
    }
}

/// All errors found in one term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabErrors(pub Vec<ElabError>);

impl fmt::Display for ElabErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ElabErrors {}

/// Names in scope, innermost last.
#[derive(Clone, Default)]
struct Scope(Vec<(String, QType)>);

impl Scope {
    fn bind(&self, x: &str, t: QType) -> Scope {
        let mut s = self.0.clone();
        s.push((x.to_string(), t));
        Scope(s)
    }

    fn lookup(&self, x: &str) -> Option<(usize, &QType)> {
        self.0
            .iter()
            .rev()
            .enumerate()
            .find(|(_, (n, _))| n == x)
            .map(|(i, (_, t))| (i, t))
    }
}

#[derive(Default)]
struct Elab {
    errors: Vec<ElabError>,
}

type Out<T> = Option<(T, QType)>;

impl Elab {
    fn err(&mut self, t: &Surface, msg: impl Into<String>) {
        self.errors.push(ElabError {
            pos: t.pos,
            msg: msg.into(),
        });
    }

    /// Reports a mismatch unless `found` is `expected`; unknown types are
    /// not reported again.
    fn expect(&mut self, t: &Surface, what: &str, expected: &QType, found: &Option<QType>) -> bool {
        match found {
            Some(f) if f == expected => true,
            Some(f) => {
                self.err(t, format!("{what}: expected {expected}, found {f}"));
                false
            }
            None => false,
        }
    }

    fn val(&mut self, sc: &Scope, t: &Surface) -> Out<SVal> {
        use SurfaceKind as K;
        if t.kind.is_computation() {
            self.err(
                t,
                format!("io form `{}` in pure position", t.kind.keyword().unwrap()),
            );
            self.comp(sc, t);
            return None;
        }
        match &t.kind {
            K::Unit => Some((SVal::Qtt, QType::Unit)),
            K::True => Some((SVal::Qtrue, QType::Bool)),
            K::False => Some((SVal::Qfalse, QType::Bool)),
            K::Str(s) => Some((SVal::string(s.clone()), QType::Str)),
            K::Name(x) => match sc.lookup(x) {
                Some((i, ty)) => Some((SVal::var(i), ty.clone())),
                None => {
                    self.err(t, format!("unbound name `{x}`"));
                    None
                }
            },
            K::Fun(x, dom, body) => {
                let (b, cod) = self.val(&sc.bind(x, dom.clone()), body)?;
                Some((SVal::lambda(dom.clone(), b), QType::arr(dom.clone(), cod)))
            }
            K::FunIo(x, dom, body) => {
                let (b, cod) = self.comp(&sc.bind(x, dom.clone()), body)?;
                Some((
                    SVal::lambda_io(dom.clone(), b),
                    QType::arr_io(dom.clone(), cod),
                ))
            }
            K::App(f, x) => {
                let fv = self.val(sc, f);
                let xv = self.val(sc, x);
                let (fv, fty) = fv?;
                match fty {
                    QType::Arr(dom, cod) => {
                        let (xv, xty) = xv?;
                        self.expect(x, "argument", &dom, &Some(xty))
                            .then(|| (SVal::app(fv, xv), *cod))
                    }
                    QType::ArrIO(..) => {
                        self.err(t, "io function applied in pure position; use `appio`");
                        None
                    }
                    other => {
                        self.err(f, format!("not a function: has type {other}"));
                        None
                    }
                }
            }
            K::Pair(a, b) => {
                let a = self.val(sc, a);
                let b = self.val(sc, b);
                let ((a, ta), (b, tb)) = (a?, b?);
                Some((SVal::pair(a, b), QType::pair(ta, tb)))
            }
            K::Fst(p) | K::Snd(p) => {
                let (pv, pty) = self.val(sc, p)?;
                let QType::Pair(l, r) = pty else {
                    self.err(p, format!("not a pair: has type {pty}"));
                    return None;
                };
                if matches!(t.kind, K::Fst(_)) {
                    Some((SVal::fst(pv), *l))
                } else {
                    Some((SVal::snd(pv), *r))
                }
            }
            K::Inl(other, v) => {
                let (v, ty) = self.val(sc, v)?;
                Some((SVal::inl(other.clone(), v), QType::sum(ty, other.clone())))
            }
            K::Inr(other, v) => {
                let (v, ty) = self.val(sc, v)?;
                Some((SVal::inr(other.clone(), v), QType::sum(other.clone(), ty)))
            }
            K::If(c, a, b) => {
                let cv = self.val(sc, c);
                let av = self.val(sc, a);
                let bv = self.val(sc, b);
                let c_ok = self.expect(
                    c,
                    "condition",
                    &QType::Bool,
                    &cv.as_ref().map(|p| p.1.clone()),
                );
                let ((av, ta), (bv, tb)) = (av?, bv?);
                if ta != tb {
                    self.err(t, format!("branches have different types {ta} and {tb}"));
                    return None;
                }
                c_ok.then(|| (SVal::if_(cv.unwrap().0, av, bv), ta))
            }
            K::Case(s, (x, l), (y, r)) => {
                let (sv, (a, b)) = self.scrutinee(sc, s)?;
                let lv = self.val(&sc.bind(x, a), l);
                let rv = self.val(&sc.bind(y, b), r);
                let ((lv, tl), (rv, tr)) = (lv?, rv?);
                if tl != tr {
                    self.err(t, format!("branches have different types {tl} and {tr}"));
                    return None;
                }
                Some((SVal::case(sv, lv, rv), tl))
            }
            K::StrEq(a, b) => {
                let av = self.val(sc, a);
                let bv = self.val(sc, b);
                let ok_a = self.expect(a, "streq", &QType::Str, &av.as_ref().map(|p| p.1.clone()));
                let ok_b = self.expect(b, "streq", &QType::Str, &bv.as_ref().map(|p| p.1.clone()));
                (ok_a && ok_b).then(|| (SVal::str_eq(av.unwrap().0, bv.unwrap().0), QType::Bool))
            }
            _ => unreachable!("computation forms handled above"),
        }
    }

    fn scrutinee(&mut self, sc: &Scope, s: &Surface) -> Option<(SVal, (QType, QType))> {
        let (sv, sty) = self.val(sc, s)?;
        match sty {
            QType::Sum(a, b) => Some((sv, (*a, *b))),
            other => {
                self.err(s, format!("not a sum: has type {other}"));
                None
            }
        }
    }

    fn typed_val(&mut self, sc: &Scope, t: &Surface, what: &str, ty: &QType) -> Option<SVal> {
        let v = self.val(sc, t);
        let ok = self.expect(t, what, ty, &v.as_ref().map(|p| p.1.clone()));
        ok.then(|| v.unwrap().0)
    }

    fn comp(&mut self, sc: &Scope, t: &Surface) -> Out<SComp> {
        use SurfaceKind as K;
        if !t.kind.is_computation() {
            self.err(t, "expected a computation; wrap values in `return`");
            self.val(sc, t);
            return None;
        }
        match &t.kind {
            K::Return(v) => {
                let (v, ty) = self.val(sc, v)?;
                Some((SComp::ret(v), ty))
            }
            K::Let(x, m, k) => {
                let (mc, mty) = self.comp(sc, m)?;
                let (kc, kty) = self.comp(&sc.bind(x, mty), k)?;
                Some((SComp::bind(mc, kc), kty))
            }
            K::Open(v) => {
                let v = self.typed_val(sc, v, "open", &QType::Str)?;
                Some((SComp::open(v), QType::resexn(QType::FileDescr)))
            }
            K::Read(v) => {
                let v = self.typed_val(sc, v, "read", &QType::FileDescr)?;
                Some((SComp::read(v), QType::resexn(QType::Str)))
            }
            K::Write(fd, d) => {
                let fd = self.typed_val(sc, fd, "write", &QType::FileDescr);
                let d = self.typed_val(sc, d, "write", &QType::Str);
                Some((SComp::write(fd?, d?), QType::resexn(QType::Unit)))
            }
            K::Close(v) => {
                let v = self.typed_val(sc, v, "close", &QType::FileDescr)?;
                Some((SComp::close(v), QType::resexn(QType::Unit)))
            }
            K::AppIo(f, x) => {
                let fv = self.val(sc, f);
                let xv = self.val(sc, x);
                let (fv, fty) = fv?;
                match fty {
                    QType::ArrIO(dom, cod) => {
                        let (xv, xty) = xv?;
                        self.expect(x, "argument", &dom, &Some(xty))
                            .then(|| (SComp::app_io(fv, xv), *cod))
                    }
                    QType::Arr(..) => {
                        self.err(t, "`appio` of a pure function; apply it as a value and `return` the result");
                        None
                    }
                    other => {
                        self.err(f, format!("not a function: has type {other}"));
                        None
                    }
                }
            }
            K::IfIo(c, a, b) => {
                let cv = self.typed_val(sc, c, "condition", &QType::Bool);
                let ac = self.comp(sc, a);
                let bc = self.comp(sc, b);
                let ((ac, ta), (bc, tb)) = (ac?, bc?);
                if ta != tb {
                    self.err(t, format!("branches have different types {ta} and {tb}"));
                    return None;
                }
                Some((SComp::if_io(cv?, ac, bc), ta))
            }
            K::CaseIo(s, (x, l), (y, r)) => {
                let (sv, (a, b)) = self.scrutinee(sc, s)?;
                let lc = self.comp(&sc.bind(x, a), l);
                let rc = self.comp(&sc.bind(y, b), r);
                let ((lc, tl), (rc, tr)) = (lc?, rc?);
                if tl != tr {
                    self.err(t, format!("branches have different types {tl} and {tr}"));
                    return None;
                }
                Some((SComp::case_io(sv, lc, rc), tl))
            }
            _ => unreachable!("value forms handled above"),
        }
    }
}

/// Elaborates a closed term: computation forms give a computation
/// derivation, everything else a value derivation.
pub fn elaborate(t: &Surface) -> Result<(SourceDeriv, QType), ElabErrors> {
    let mut el = Elab::default();
    let sc = Scope::default();
    let out = if t.kind.is_computation() {
        el.comp(&sc, t).map(|(c, ty)| (SourceDeriv::Comp(c), ty))
    } else {
        el.val(&sc, t).map(|(v, ty)| (SourceDeriv::Val(v), ty))
    };
    match out {
        Some(r) if el.errors.is_empty() => Ok(r),
        _ => {
            debug_assert!(!el.errors.is_empty());
            Err(ElabErrors(el.errors))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_surface;
    use crate::source::infer_source;
    use crate::types::TyEnv;

    fn elab(s: &str) -> Result<(SourceDeriv, QType), ElabErrors> {
        elaborate(&parse_surface(s).unwrap())
    }

    #[test]
    fn examples() {
        let (d, ty) = elab("(fun (x:bool) x)").unwrap();
        assert_eq!(d, SourceDeriv::Val(SVal::lambda(QType::Bool, SVal::QVar0)));
        assert_eq!(ty, QType::arr(QType::Bool, QType::Bool));

        let (d, ty) = elab("(funio (f:str) (open f))").unwrap();
        assert_eq!(
            d,
            SourceDeriv::Val(SVal::lambda_io(QType::Str, SComp::open(SVal::QVar0)))
        );
        assert_eq!(
            ty,
            QType::arr_io(QType::Str, QType::resexn(QType::FileDescr))
        );

        let errs = elab("(fun (x:bool) (open x))").unwrap_err();
        assert_eq!(errs.0.len(), 2, "{errs}");
        assert!(errs.0[0].msg.contains("pure position"));
        assert!(errs.0[1].msg.contains("expected str, found bool"));
        assert_eq!(errs.0[1].pos.col, 21);
    }

    #[test]
    fn names_become_index_chains() {
        let (d, _) = elab("(fun (a:bool) (fun (b:str) (fun (c:unit) a)))").unwrap();
        let SourceDeriv::Val(v) = d else { panic!() };
        let expected = SVal::lambda(
            QType::Bool,
            SVal::lambda(QType::Str, SVal::lambda(QType::Unit, SVal::var(2))),
        );
        assert_eq!(v, expected);
        // Inner binders shadow outer ones.
        let (d, _) = elab("(fun (a:bool) (fun (a:str) a))").unwrap();
        assert_eq!(
            d,
            SourceDeriv::Val(SVal::lambda(
                QType::Bool,
                SVal::lambda(QType::Str, SVal::QVar0)
            ))
        );
    }

    #[test]
    fn errors() {
        assert!(elab("y").unwrap_err().0[0].msg.contains("unbound"));
        assert!(elab("(if true () false)").unwrap_err().0[0]
            .msg
            .contains("branches"));
        assert!(elab("(return (funio (x:bool) (return x)) )").is_ok());
        assert!(elab("((funio (x:bool) (return x)) true)").unwrap_err().0[0]
            .msg
            .contains("appio"));
        assert!(elab("(let x (return true) x)").unwrap_err().0[0]
            .msg
            .contains("computation"));
        let many = elab("(pair (fst true) (streq () zz))").unwrap_err();
        assert_eq!(many.0.len(), 3, "{many}");
    }

    #[test]
    fn output_is_well_typed() {
        for s in [
            "(funio (f:str) (let r (open f) (caseio r (fd (let _r (read fd) (return true))) (e (return false)))))",
            "(case (inl str true) (b (if b \"a\" \"b\")) (s s))",
            "(let x (open \"f\") (ifio true (return x) (return (inr fd \"e\"))))",
        ] {
            let (d, ty) = elab(s).unwrap();
            assert_eq!(infer_source(&TyEnv::empty(), &d), Ok(ty));
        }
    }
}
