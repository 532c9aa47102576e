//! Named surface syntax and its reader.

use std::fmt;

use crate::sexp::{self, quote, Pos, Sexp, SexpKind, SyntaxError};
use crate::types::QType;

#[derive(Clone, Debug)]
pub struct Surface {
    pub kind: SurfaceKind,
    pub pos: Pos,
}

/// Equality ignores positions.
impl PartialEq for Surface {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Surface {}

type B = Box<Surface>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Unit,
    True,
    False,
    Str(String),
    Name(String),
    Fun(String, QType, B),
    FunIo(String, QType, B),
    App(B, B),
    Pair(B, B),
    Fst(B),
    Snd(B),
    Inl(QType, B),
    Inr(QType, B),
    If(B, B, B),
    Case(B, (String, B), (String, B)),
    StrEq(B, B),
    Return(B),
    Let(String, B, B),
    Open(B),
    Read(B),
    Write(B, B),
    Close(B),
    AppIo(B, B),
    IfIo(B, B, B),
    CaseIo(B, (String, B), (String, B)),
}

impl SurfaceKind {
    /// Whether this is one of the computation forms.
    pub fn is_computation(&self) -> bool {
        use SurfaceKind::*;
        matches!(
            self,
            Return(_)
                | Let(..)
                | Open(_)
                | Read(_)
                | Write(..)
                | Close(_)
                | AppIo(..)
                | IfIo(..)
                | CaseIo(..)
        )
    }

    /// The keyword heading this form, if it has one.
    pub fn keyword(&self) -> Option<&'static str> {
        use SurfaceKind::*;
        Some(match self {
            Fun(..) => "fun",
            FunIo(..) => "funio",
            Pair(..) => "pair",
            Fst(_) => "fst",
            Snd(_) => "snd",
            Inl(..) => "inl",
            Inr(..) => "inr",
            If(..) => "if",
            Case(..) => "case",
            StrEq(..) => "streq",
            Return(_) => "return",
            Let(..) => "let",
            Open(_) => "open",
            Read(_) => "read",
            Write(..) => "write",
            Close(_) => "close",
            AppIo(..) => "appio",
            IfIo(..) => "ifio",
            CaseIo(..) => "caseio",
            _ => return None,
        })
    }
}

pub const KEYWORDS: [&str; 21] = [
    "fun", "funio", "pair", "fst", "snd", "inl", "inr", "if", "case", "streq", "return", "let",
    "open", "read", "write", "close", "appio", "ifio", "caseio", "true", "false",
];

fn is_name(a: &str) -> bool {
    !KEYWORDS.contains(&a) && !a.is_empty() && !a.starts_with(|c: char| c.is_ascii_digit())
}

fn name_of(s: &Sexp) -> Result<String, SyntaxError> {
    match s.as_atom() {
        Some(a) if is_name(a) => Ok(a.to_string()),
        Some(a) => Err(s.error(format!("`{a}` cannot be used as a variable name"))),
        None => Err(s.error("expected a variable name")),
    }
}

/// `(x : T)`
fn binder(s: &Sexp) -> Result<(String, QType), SyntaxError> {
    match s.as_list() {
        Some([x, colon, t]) if colon.as_atom() == Some(":") => {
            Ok((name_of(x)?, QType::from_sexp(t)?))
        }
        _ => Err(s.error("expected a binder `(x : T)`")),
    }
}

/// `(x body)` as used by case branches.
fn branch(s: &Sexp) -> Result<(String, B), SyntaxError> {
    match s.as_list() {
        Some([x, body]) => Ok((name_of(x)?, Box::new(from_sexp(body)?))),
        _ => Err(s.error("expected a case branch `(x term)`")),
    }
}

pub fn from_sexp(s: &Sexp) -> Result<Surface, SyntaxError> {
    use SurfaceKind as K;
    let kind = match &s.kind {
        SexpKind::Str(v) => K::Str(v.clone()),
        SexpKind::Atom(a) => match a.as_str() {
            "true" => K::True,
            "false" => K::False,
            ":" => return Err(s.error("unexpected `:`")),
            a if is_name(a) => K::Name(a.to_string()),
            a => return Err(s.error(format!("`{a}` is not a term"))),
        },
        SexpKind::List(items) => {
            let sub = |i: usize| -> Result<B, SyntaxError> { Ok(Box::new(from_sexp(&items[i])?)) };
            let head = items.first().and_then(Sexp::as_atom);
            let arity = |n: usize, kw: &str| -> Result<(), SyntaxError> {
                if items.len() == n + 1 {
                    Ok(())
                } else {
                    Err(s.error(format!(
                        "`{kw}` takes {n} argument{}",
                        if n == 1 { "" } else { "s" }
                    )))
                }
            };
            match head {
                None if items.is_empty() => K::Unit,
                Some(kw @ ("fun" | "funio")) => {
                    arity(2, kw)?;
                    let (x, t) = binder(&items[1])?;
                    if kw == "fun" {
                        K::Fun(x, t, sub(2)?)
                    } else {
                        K::FunIo(x, t, sub(2)?)
                    }
                }
                Some(kw @ ("inl" | "inr")) => {
                    arity(2, kw)?;
                    let t = QType::from_sexp(&items[1])?;
                    if kw == "inl" {
                        K::Inl(t, sub(2)?)
                    } else {
                        K::Inr(t, sub(2)?)
                    }
                }
                Some(kw @ ("case" | "caseio")) => {
                    arity(3, kw)?;
                    let (l, r) = (branch(&items[2])?, branch(&items[3])?);
                    if kw == "case" {
                        K::Case(sub(1)?, l, r)
                    } else {
                        K::CaseIo(sub(1)?, l, r)
                    }
                }
                Some("let") => {
                    arity(3, "let")?;
                    K::Let(name_of(&items[1])?, sub(2)?, sub(3)?)
                }
                Some(kw @ ("pair" | "streq" | "write" | "appio")) => {
                    arity(2, kw)?;
                    let (a, b) = (sub(1)?, sub(2)?);
                    match kw {
                        "pair" => K::Pair(a, b),
                        "streq" => K::StrEq(a, b),
                        "write" => K::Write(a, b),
                        _ => K::AppIo(a, b),
                    }
                }
                Some(kw @ ("if" | "ifio")) => {
                    arity(3, kw)?;
                    let (c, t, e) = (sub(1)?, sub(2)?, sub(3)?);
                    if kw == "if" {
                        K::If(c, t, e)
                    } else {
                        K::IfIo(c, t, e)
                    }
                }
                Some(kw @ ("fst" | "snd" | "return" | "open" | "read" | "close")) => {
                    arity(1, kw)?;
                    let a = sub(1)?;
                    match kw {
                        "fst" => K::Fst(a),
                        "snd" => K::Snd(a),
                        "return" => K::Return(a),
                        "open" => K::Open(a),
                        "read" => K::Read(a),
                        _ => K::Close(a),
                    }
                }
                Some(kw) if !is_name(kw) && items.len() != 2 => {
                    return Err(items[0].error(format!("unknown form `{kw}`")))
                }
                _ if items.len() == 2 => K::App(sub(0)?, sub(1)?),
                Some(kw) => return Err(items[0].error(format!("unknown keyword `{kw}`"))),
                None => return Err(s.error("an application takes exactly one argument")),
            }
        }
    };
    Ok(Surface { kind, pos: s.pos })
}

/// Parses one surface term.
pub fn parse_surface(text: &str) -> Result<Surface, SyntaxError> {
    from_sexp(&sexp::read_one(text)?)
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SurfaceKind::*;
        match &self.kind {
            Unit => write!(f, "()"),
            True => write!(f, "true"),
            False => write!(f, "false"),
            Str(s) => write!(f, "{}", quote(s)),
            Name(x) => write!(f, "{x}"),
            Fun(x, t, b) => write!(f, "(fun ({x} : {t}) {b})"),
            FunIo(x, t, b) => write!(f, "(funio ({x} : {t}) {b})"),
            App(a, b) => write!(f, "({a} {b})"),
            Inl(t, v) | Inr(t, v) => write!(f, "({} {t} {v})", self.kind.keyword().unwrap()),
            Case(s, (x, l), (y, r)) | CaseIo(s, (x, l), (y, r)) => {
                write!(
                    f,
                    "({} {s} ({x} {l}) ({y} {r}))",
                    self.kind.keyword().unwrap()
                )
            }
            Let(x, m, k) => write!(f, "(let {x} {m} {k})"),
            Fst(a) | Snd(a) | Return(a) | Open(a) | Read(a) | Close(a) => {
                write!(f, "({} {a})", self.kind.keyword().unwrap())
            }
            Pair(a, b) | StrEq(a, b) | Write(a, b) | AppIo(a, b) => {
                write!(f, "({} {a} {b})", self.kind.keyword().unwrap())
            }
            If(c, t, e) | IfIo(c, t, e) => {
                write!(f, "({} {c} {t} {e})", self.kind.keyword().unwrap())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SurfaceKind {
        parse_surface(s).unwrap().kind
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("true"), SurfaceKind::True);
        assert!(
            matches!(p("(funio (b : bool) (return b))"), SurfaceKind::FunIo(x, QType::Bool, _) if x == "b")
        );
        assert!(matches!(
            p("(funio (b:bool) (return b))"),
            SurfaceKind::FunIo(..)
        ));
        assert!(
            matches!(p("(let x (open \"f\") (return true))"), SurfaceKind::Let(x, _, _) if x == "x")
        );
        assert_eq!(p("()"), SurfaceKind::Unit);
        assert!(matches!(p("(f x)"), SurfaceKind::App(..)));
        assert!(matches!(p("((fun (x:bool) x) true)"), SurfaceKind::App(..)));
    }

    #[test]
    fn parse_errors() {
        let e = parse_surface("(fun (x:bool) x").unwrap_err();
        assert!(e.msg.contains("unbalanced"), "{e}");
        let e = parse_surface("(lambda (x:bool) x)").unwrap_err();
        assert!(e.msg.contains("unknown"), "{e}");
        let e = parse_surface("\"abc").unwrap_err();
        assert!(e.msg.contains("string"), "{e}");
        let e = parse_surface("(read\n  (fst))").unwrap_err();
        assert_eq!((e.pos.line, e.pos.col), (2, 3));
        assert!(parse_surface("(fun (true : bool) x)").is_err());
        assert!(parse_surface("(if a b)").is_err());
    }

    #[test]
    fn print_parse_identity() {
        for text in [
            "(funio (f : (~> str bool)) (let r (open \"a\\\"b\") (caseio r (fd (appio f \"x\")) (e (return false)))))",
            "(case (inl str ()) (u (pair u ())) (s (pair () ())))",
            "(if (streq \"a\" \"b\") (fst (pair true false)) (snd (pair true false)))",
            "(fun (x : (+ unit str)) (inr unit \"s\"))",
        ] {
            let t = parse_surface(text).unwrap();
            assert_eq!(parse_surface(&t.to_string()).unwrap(), t);
            assert_eq!(t.to_string(), text);
        }
    }
}
