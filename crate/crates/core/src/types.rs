//! The closed universe of extractable types shared by both languages.

use std::fmt;

use crate::sexp::{self, Sexp, SexpKind, SyntaxError};

/// Quoted types. `err` payloads are strings, so a fallible result of type
/// `T` is `Sum(T, Str)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QType {
    Unit,
    Bool,
    Str,
    FileDescr,
    Arr(Box<QType>, Box<QType>),
    ArrIO(Box<QType>, Box<QType>),
    Pair(Box<QType>, Box<QType>),
    Sum(Box<QType>, Box<QType>),
}

impl QType {
    pub fn arr(a: QType, b: QType) -> QType {
        QType::Arr(Box::new(a), Box::new(b))
    }

    pub fn arr_io(a: QType, b: QType) -> QType {
        QType::ArrIO(Box::new(a), Box::new(b))
    }

    pub fn pair(a: QType, b: QType) -> QType {
        QType::Pair(Box::new(a), Box::new(b))
    }

    pub fn sum(a: QType, b: QType) -> QType {
        QType::Sum(Box::new(a), Box::new(b))
    }

    /// `Sum(t, Str)`: the result type of a fallible operation.
    pub fn resexn(t: QType) -> QType {
        QType::sum(t, QType::Str)
    }

    /// True iff no arrow occurs anywhere in the type.
    pub fn is_first_order(&self) -> bool {
        match self {
            QType::Unit | QType::Bool | QType::Str | QType::FileDescr => true,
            QType::Arr(..) | QType::ArrIO(..) => false,
            QType::Pair(a, b) | QType::Sum(a, b) => a.is_first_order() && b.is_first_order(),
        }
    }

    pub fn mentions_file_descr(&self) -> bool {
        match self {
            QType::FileDescr => true,
            QType::Unit | QType::Bool | QType::Str => false,
            QType::Arr(a, b) | QType::ArrIO(a, b) | QType::Pair(a, b) | QType::Sum(a, b) => {
                a.mentions_file_descr() || b.mentions_file_descr()
            }
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            QType::Unit | QType::Bool | QType::Str | QType::FileDescr => 1,
            QType::Arr(a, b) | QType::ArrIO(a, b) | QType::Pair(a, b) | QType::Sum(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn parse(text: &str) -> Result<QType, SyntaxError> {
        QType::from_sexp(&sexp::read_one(text)?)
    }

    pub fn from_sexp(s: &Sexp) -> Result<QType, SyntaxError> {
        match &s.kind {
            SexpKind::Atom(a) => match a.as_str() {
                "unit" => Ok(QType::Unit),
                "bool" => Ok(QType::Bool),
                "str" => Ok(QType::Str),
                "fd" => Ok(QType::FileDescr),
                other => Err(s.error(format!("unknown type `{other}`"))),
            },
            SexpKind::List(items) => {
                let [op, a, b] = items.as_slice() else {
                    return Err(s.error("a compound type takes the form `(op T T)`"));
                };
                let a = Box::new(QType::from_sexp(a)?);
                let b = Box::new(QType::from_sexp(b)?);
                match op.as_atom() {
                    Some("->") => Ok(QType::Arr(a, b)),
                    Some("~>") => Ok(QType::ArrIO(a, b)),
                    Some("*") => Ok(QType::Pair(a, b)),
                    Some("+") => Ok(QType::Sum(a, b)),
                    _ => Err(op.error("expected one of `->`, `~>`, `*`, `+`")),
                }
            }
            SexpKind::Str(_) => Err(s.error("expected a type, found a string literal")),
        }
    }
}

impl fmt::Display for QType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QType::Unit => f.write_str("unit"),
            QType::Bool => f.write_str("bool"),
            QType::Str => f.write_str("str"),
            QType::FileDescr => f.write_str("fd"),
            QType::Arr(a, b) => write!(f, "(-> {a} {b})"),
            QType::ArrIO(a, b) => write!(f, "(~> {a} {b})"),
            QType::Pair(a, b) => write!(f, "(* {a} {b})"),
            QType::Sum(a, b) => write!(f, "(+ {a} {b})"),
        }
    }
}

/// Structural type equality.
pub fn qtype_eq(a: &QType, b: &QType) -> bool {
    a == b
}

pub fn is_first_order(t: &QType) -> bool {
    t.is_first_order()
}

/// The shared program/context interface: only the context's type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interface {
    pub ct: QType,
}

impl Interface {
    pub fn new(ct: QType) -> Self {
        Interface { ct }
    }

    /// The type every partial program of this interface must have.
    pub fn program_type(&self) -> QType {
        QType::arr_io(self.ct.clone(), QType::Bool)
    }
}

/// Typing environment indexed by de Bruijn index (0 = innermost binder).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TyEnv {
    // Innermost binder last.
    entries: Vec<QType>,
}

impl TyEnv {
    pub fn empty() -> Self {
        TyEnv::default()
    }

    /// Builds an environment from entries listed innermost first.
    pub fn from_innermost(entries: impl IntoIterator<Item = QType>) -> Self {
        let mut v: Vec<QType> = entries.into_iter().collect();
        v.reverse();
        TyEnv { entries: v }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, ix: usize) -> Option<&QType> {
        self.entries
            .len()
            .checked_sub(ix + 1)
            .map(|i| &self.entries[i])
    }

    pub fn extend(&self, ty: QType) -> TyEnv {
        let mut entries = self.entries.clone();
        entries.push(ty);
        TyEnv { entries }
    }

    /// Drops the innermost binder.
    pub fn tail(&self) -> Option<TyEnv> {
        let mut entries = self.entries.clone();
        entries.pop()?;
        Some(TyEnv { entries })
    }

    /// `(index, type)` pairs, innermost first.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &QType)> {
        self.entries.iter().rev().enumerate()
    }
}
