//! Evaluation of derivations: values to [`SValue`], computations to free
//! monad trees over the IO operations.

use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use super::{SComp, SVal};
use crate::ops::{IoArgs, IoOk, IoOp, IoResult};
use crate::traces::FileDescrId;

/// Runtime values of the source language.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SValue {
    VUnit,
    VBool(bool),
    VStr(String),
    VFd(FileDescrId),
    VPair(Box<SValue>, Box<SValue>),
    VInl(Box<SValue>),
    VInr(Box<SValue>),
    /// A pure closure: the captured environment and the λ body.
    VClosure(EvalEnv, Arc<SVal>),
    VClosureIO(EvalEnv, Arc<SComp>),
}

impl SValue {
    pub fn str(s: impl Into<String>) -> SValue {
        SValue::VStr(s.into())
    }
    pub fn inl(v: SValue) -> SValue {
        SValue::VInl(Box::new(v))
    }
    pub fn inr(v: SValue) -> SValue {
        SValue::VInr(Box::new(v))
    }
    pub fn pair(a: SValue, b: SValue) -> SValue {
        SValue::VPair(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for SValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SValue::VUnit => f.write_str("()"),
            SValue::VBool(b) => write!(f, "{b}"),
            SValue::VStr(s) => f.write_str(&crate::sexp::quote(s)),
            SValue::VFd(fd) => write!(f, "(fd {fd})"),
            SValue::VPair(a, b) => write!(f, "(pair {a} {b})"),
            SValue::VInl(v) => write!(f, "(inl {v})"),
            SValue::VInr(v) => write!(f, "(inr {v})"),
            SValue::VClosure(..) => f.write_str("<fun>"),
            SValue::VClosureIO(..) => f.write_str("<funio>"),
        }
    }
}

/// A runtime environment; index 0 (`hd`) is the innermost binding.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvalEnv {
    // Innermost last.
    values: Vec<SValue>,
}

impl EvalEnv {
    pub fn empty() -> Self {
        EvalEnv::default()
    }

    pub fn push(&self, v: SValue) -> EvalEnv {
        let mut values = self.values.clone();
        values.push(v);
        EvalEnv { values }
    }

    pub fn hd(&self) -> Option<&SValue> {
        self.values.last()
    }

    pub fn tail(&self) -> Option<EvalEnv> {
        let mut values = self.values.clone();
        values.pop()?;
        Some(EvalEnv { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub type Cont = Rc<dyn Fn(IoResult) -> IoTree>;

/// Computation trees: a final value, or an operation call whose
/// continuation may be resumed with any admissible result, any number of
/// times.
#[derive(Clone)]
pub enum IoTree {
    Return(SValue),
    Call(IoArgs, Cont),
}

impl IoTree {
    pub fn call(args: IoArgs, k: impl Fn(IoResult) -> IoTree + 'static) -> IoTree {
        IoTree::Call(args, Rc::new(k))
    }

    /// `Call op args (Return ∘ wrap)`: a single operation.
    pub fn op(args: IoArgs) -> IoTree {
        let a = args.clone();
        IoTree::call(args, move |r| IoTree::Return(wrap_result(&a, &r)))
    }

    pub fn io_op(&self) -> Option<IoOp> {
        match self {
            IoTree::Return(_) => None,
            IoTree::Call(args, _) => Some(args.op()),
        }
    }
}

impl fmt::Debug for IoTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoTree::Return(v) => f.debug_tuple("Return").field(v).finish(),
            IoTree::Call(args, _) => f.debug_tuple("Call").field(args).field(&"<cont>").finish(),
        }
    }
}

/// The source value of an operation result: `inl` of the payload or `inr`
/// of the error string.
pub fn wrap_result(args: &IoArgs, res: &IoResult) -> SValue {
    match (args, res) {
        (IoArgs::Open(_), Ok(IoOk::Fd(fd))) => SValue::inl(SValue::VFd(*fd)),
        (IoArgs::Read(_), Ok(IoOk::Str(s))) => SValue::inl(SValue::str(s.clone())),
        (IoArgs::Write(..) | IoArgs::Close(_), Ok(IoOk::Unit)) => SValue::inl(SValue::VUnit),
        (_, Err(e)) => SValue::inr(SValue::str(e.clone())),
        (args, res) => panic!("result {res:?} does not fit operation {}", args.op()),
    }
}

pub fn io_bind(t: IoTree, k: Rc<dyn Fn(SValue) -> IoTree>) -> IoTree {
    match t {
        IoTree::Return(x) => k(x),
        IoTree::Call(args, ok) => IoTree::Call(args, Rc::new(move |i| io_bind(ok(i), k.clone()))),
    }
}

fn extended(env: &[SValue], v: SValue) -> Vec<SValue> {
    let mut e = Vec::with_capacity(env.len() + 1);
    e.extend_from_slice(env);
    e.push(v);
    e
}

fn tail(env: &[SValue]) -> &[SValue] {
    &env[..env
        .len()
        .checked_sub(1)
        .expect("weakening past the empty environment")]
}

fn ill_typed(what: &str) -> ! {
    panic!("evaluation of an ill-typed derivation: {what}")
}

fn eval(env: &[SValue], v: &SVal) -> SValue {
    use SVal::*;
    match v {
        Qtt => SValue::VUnit,
        Qtrue => SValue::VBool(true),
        Qfalse => SValue::VBool(false),
        QStringLit(s) => SValue::str(s.clone()),
        QVar0 => env
            .last()
            .cloned()
            .unwrap_or_else(|| ill_typed("unbound variable")),
        QVarS(inner) => eval(tail(env), inner),
        QApp(f, x) => match eval(env, f) {
            SValue::VClosure(cenv, body) => eval(&extended(&cenv.values, eval(env, x)), &body),
            _ => ill_typed("application of a non-closure"),
        },
        QLambda(_, body) => SValue::VClosure(
            EvalEnv {
                values: env.to_vec(),
            },
            body.clone(),
        ),
        QLambdaIO(_, body) => SValue::VClosureIO(
            EvalEnv {
                values: env.to_vec(),
            },
            body.clone(),
        ),
        QInl(_, x) => SValue::inl(eval(env, x)),
        QInr(_, x) => SValue::inr(eval(env, x)),
        QMkpair(x, y) => SValue::pair(eval(env, x), eval(env, y)),
        QFst(p) | QSnd(p) => match eval(env, p) {
            SValue::VPair(a, b) => *if matches!(v, QFst(_)) { a } else { b },
            _ => ill_typed("projection from a non-pair"),
        },
        QIf(c, t, e) => match eval(env, c) {
            SValue::VBool(true) => eval(env, t),
            SValue::VBool(false) => eval(env, e),
            _ => ill_typed("non-boolean condition"),
        },
        QCase(s, l, r) => match eval(env, s) {
            SValue::VInl(x) => eval(&extended(env, *x), l),
            SValue::VInr(y) => eval(&extended(env, *y), r),
            _ => ill_typed("case on a non-injection"),
        },
        QStrEq(x, y) => match (eval(env, x), eval(env, y)) {
            (SValue::VStr(a), SValue::VStr(b)) => SValue::VBool(a == b),
            _ => ill_typed("string comparison of non-strings"),
        },
    }
}

fn as_str(v: SValue) -> String {
    match v {
        SValue::VStr(s) => s,
        _ => ill_typed("expected a string"),
    }
}

fn as_fd(v: SValue) -> FileDescrId {
    match v {
        SValue::VFd(fd) => fd,
        _ => ill_typed("expected a file descriptor"),
    }
}

fn eval_comp(env: &[SValue], c: &SComp) -> IoTree {
    use SComp::*;
    match c {
        QReturn(v) => IoTree::Return(eval(env, v)),
        QBind(m, k) => {
            let captured = env.to_vec();
            let k = k.clone();
            io_bind(
                eval_comp(env, m),
                Rc::new(move |x| eval_comp(&extended(&captured, x), &k)),
            )
        }
        QOpenfile(name) => IoTree::op(IoArgs::Open(as_str(eval(env, name)))),
        QRead(fd) => IoTree::op(IoArgs::Read(as_fd(eval(env, fd)))),
        QWrite(fd, data) => {
            IoTree::op(IoArgs::Write(as_fd(eval(env, fd)), as_str(eval(env, data))))
        }
        QClose(fd) => IoTree::op(IoArgs::Close(as_fd(eval(env, fd)))),
        QAppIO(f, x) => match eval(env, f) {
            SValue::VClosureIO(cenv, body) => {
                eval_comp(&extended(&cenv.values, eval(env, x)), &body)
            }
            _ => ill_typed("effectful application of a non-closure"),
        },
        QIfIO(b, t, e) => match eval(env, b) {
            SValue::VBool(true) => eval_comp(env, t),
            SValue::VBool(false) => eval_comp(env, e),
            _ => ill_typed("non-boolean condition"),
        },
        QCaseIO(s, l, r) => match eval(env, s) {
            SValue::VInl(x) => eval_comp(&extended(env, *x), l),
            SValue::VInr(y) => eval_comp(&extended(env, *y), r),
            _ => ill_typed("case on a non-injection"),
        },
    }
}

/// Evaluates a value derivation. Panics on an ill-typed derivation.
pub fn eval_source(env: &EvalEnv, v: &SVal) -> SValue {
    eval(&env.values, v)
}

/// The computation tree of a derivation. Panics on an ill-typed derivation.
pub fn eval_source_comp(env: &EvalEnv, c: &SComp) -> IoTree {
    eval_comp(&env.values, c)
}
