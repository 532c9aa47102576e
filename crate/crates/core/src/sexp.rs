//! A small s-expression reader shared by every textual format in the crate.
//!
//! Atoms are maximal runs of non-delimiter characters. `(`, `)` and `:` are
//! delimiters, `"` opens a string literal and `;` starts a comment that runs
//! to the end of the line.

use std::fmt;

use thiserror::Error;

/// 1-based line/column position in the input text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SexpKind {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sexp {
    pub kind: SexpKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{pos}: {msg}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub msg: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        SyntaxError {
            pos,
            msg: msg.into(),
        }
    }
}

impl Sexp {
    pub fn as_atom(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            _ => None,
        }
    }

    /// The head atom of a non-empty list, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list()
            .and_then(|l| l.first())
            .and_then(Sexp::as_atom)
    }

    pub fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.pos, msg)
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, col: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<Sexp>, SyntaxError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(SyntaxError::new(start, "unbalanced parenthesis")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read()?.expect("peeked a character")),
                    }
                }
                Ok(Some(Sexp {
                    kind: SexpKind::List(items),
                    pos: start,
                }))
            }
            ')' => Err(SyntaxError::new(start, "unexpected `)`")),
            ':' => {
                self.bump();
                Ok(Some(Sexp {
                    kind: SexpKind::Atom(":".into()),
                    pos: start,
                }))
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(SyntaxError::new(start, "unterminated string literal")),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(other) => {
                                return Err(SyntaxError::new(
                                    start,
                                    format!("bad escape `\\{other}` in string literal"),
                                ))
                            }
                            None => {
                                return Err(SyntaxError::new(start, "unterminated string literal"))
                            }
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Some(Sexp {
                    kind: SexpKind::Str(s),
                    pos: start,
                }))
            }
            _ => {
                let mut a = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ':' | '"' | ';') {
                        break;
                    }
                    a.push(c);
                    self.bump();
                }
                Ok(Some(Sexp {
                    kind: SexpKind::Atom(a),
                    pos: start,
                }))
            }
        }
    }
}

/// Reads every top-level form in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    while let Some(s) = r.read()? {
        out.push(s);
    }
    Ok(out)
}

/// Reads exactly one form.
pub fn read_one(text: &str) -> Result<Sexp, SyntaxError> {
    let mut forms = read_all(text)?;
    match forms.len() {
        1 => Ok(forms.pop().unwrap()),
        0 => Err(SyntaxError::new(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(forms[1].error("trailing input after the first form")),
    }
}

/// Quotes `s` as a string literal readable by [`read_one`].
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let s = read_one("(a\n  (b \"c\"))").unwrap();
        let items = s.as_list().unwrap();
        assert_eq!(items[0].as_atom(), Some("a"));
        assert_eq!(items[1].pos, Pos { line: 2, col: 3 });
        assert_eq!(
            items[1].as_list().unwrap()[1].kind,
            SexpKind::Str("c".into())
        );
    }

    #[test]
    fn colon_is_its_own_token() {
        let s = read_one("(x:bool)").unwrap();
        let atoms: Vec<_> = s
            .as_list()
            .unwrap()
            .iter()
            .map(|x| x.as_atom().unwrap())
            .collect();
        assert_eq!(atoms, vec!["x", ":", "bool"]);
    }

    #[test]
    fn comments_are_skipped() {
        let forms = read_all("; header\n(a) ; trailing\n b").unwrap();
        assert_eq!(forms.len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(read_one("(a (b)").unwrap_err().pos, Pos { line: 1, col: 1 });
        assert!(read_one("\"abc").unwrap_err().msg.contains("unterminated"));
        assert!(read_one("\"a\\q\"").unwrap_err().msg.contains("bad escape"));
        assert!(read_one(")").is_err());
    }

    #[test]
    fn quote_round_trips() {
        let raw = "a \"quoted\" \\ line\nnext";
        let s = read_one(&quote(raw)).unwrap();
        assert_eq!(s.kind, SexpKind::Str(raw.into()));
    }
}
