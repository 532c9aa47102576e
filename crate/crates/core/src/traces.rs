//! IO events, histories and local traces.
//!
//! A [`History`] lists past events most recent first. A [`LocalTrace`] lists
//! the events of one program fragment oldest first and is only constructible
//! when every successful open in it carries the fresh descriptor of the
//! history at that point.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::sexp::{self, quote, Sexp, SexpKind, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FileDescrId(pub u64);

impl fmt::Display for FileDescrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The error payload every failing operation produces in the enumerated
/// semantics.
pub const ERR: &str = "err";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    EvOpen {
        name: String,
        res: Result<FileDescrId, String>,
    },
    EvRead {
        fd: FileDescrId,
        res: Result<String, String>,
    },
    EvWrite {
        fd: FileDescrId,
        arg: String,
        res: Result<(), String>,
    },
    EvClose {
        fd: FileDescrId,
        res: Result<(), String>,
    },
}

impl Event {
    /// The descriptor allocated by this event, if it is a successful open.
    pub fn opened_fd(&self) -> Option<FileDescrId> {
        match self {
            Event::EvOpen { res: Ok(fd), .. } => Some(*fd),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Event::EvOpen { .. } => "open",
            Event::EvRead { .. } => "read",
            Event::EvWrite { .. } => "write",
            Event::EvClose { .. } => "close",
        }
    }

    pub fn is_success(&self) -> bool {
        match self {
            Event::EvOpen { res, .. } => res.is_ok(),
            Event::EvRead { res, .. } => res.is_ok(),
            Event::EvWrite { res, .. } | Event::EvClose { res, .. } => res.is_ok(),
        }
    }

    pub fn parse(line: &str) -> Result<Event, SyntaxError> {
        let forms = sexp::read_all(line)?;
        Event::from_forms(&forms, sexp::Pos { line: 1, col: 1 })
    }

    fn from_forms(forms: &[Sexp], pos: sexp::Pos) -> Result<Event, SyntaxError> {
        let err = |msg: &str| SyntaxError::new(pos, msg);
        let arrow = forms
            .iter()
            .position(|f| f.as_atom() == Some("=>"))
            .ok_or_else(|| err("event record needs `=>` before its result"))?;
        let (lhs, rhs) = (&forms[..arrow], &forms[arrow + 1..]);
        let [res] = rhs else {
            return Err(err("expected exactly one result after `=>`"));
        };
        let res_items = res
            .as_list()
            .filter(|l| l.len() == 2)
            .ok_or_else(|| res.error("result takes the form `(ok X)` or `(err \"msg\")`"))?;
        let ok = match res_items[0].as_atom() {
            Some("ok") => true,
            Some("err") => false,
            _ => return Err(res_items[0].error("expected `ok` or `err`")),
        };
        let payload = &res_items[1];
        let err_payload = || str_of(payload);
        let kind = lhs
            .first()
            .and_then(Sexp::as_atom)
            .ok_or_else(|| err("missing event kind"))?;
        match (kind, &lhs[1..]) {
            ("open", [name]) => Ok(Event::EvOpen {
                name: str_of(name)?,
                res: if ok {
                    Ok(fd_of(payload)?)
                } else {
                    Err(err_payload()?)
                },
            }),
            ("read", [fd]) => Ok(Event::EvRead {
                fd: fd_of(fd)?,
                res: if ok {
                    Ok(str_of(payload)?)
                } else {
                    Err(err_payload()?)
                },
            }),
            ("write", [fd, arg]) => Ok(Event::EvWrite {
                fd: fd_of(fd)?,
                arg: str_of(arg)?,
                res: if ok { Ok(()) } else { Err(err_payload()?) },
            }),
            ("close", [fd]) => Ok(Event::EvClose {
                fd: fd_of(fd)?,
                res: if ok { Ok(()) } else { Err(err_payload()?) },
            }),
            _ => Err(err("unknown event kind or wrong number of arguments")),
        }
    }
}

fn str_of(s: &Sexp) -> Result<String, SyntaxError> {
    match &s.kind {
        SexpKind::Str(v) => Ok(v.clone()),
        _ => Err(s.error("expected a string literal")),
    }
}

fn fd_of(s: &Sexp) -> Result<FileDescrId, SyntaxError> {
    s.as_atom()
        .and_then(|a| a.parse().ok())
        .map(FileDescrId)
        .ok_or_else(|| s.error("expected a file descriptor number"))
}

fn fmt_res<T>(
    f: &mut fmt::Formatter<'_>,
    res: &Result<T, String>,
    ok: impl Fn(&T) -> String,
) -> fmt::Result {
    match res {
        Ok(v) => write!(f, "(ok {})", ok(v)),
        Err(e) => write!(f, "(err {})", quote(e)),
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::EvOpen { name, res } => {
                write!(f, "open {} => ", quote(name))?;
                fmt_res(f, res, |fd| fd.to_string())
            }
            Event::EvRead { fd, res } => {
                write!(f, "read {fd} => ")?;
                fmt_res(f, res, |s| quote(s))
            }
            Event::EvWrite { fd, arg, res } => {
                write!(f, "write {fd} {} => ", quote(arg))?;
                fmt_res(f, res, |_| "unit".into())
            }
            Event::EvClose { fd, res } => {
                write!(f, "close {fd} => ")?;
                fmt_res(f, res, |_| "unit".into())
            }
        }
    }
}

/// Past events, most recent first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct History {
    pub events: Vec<Event>,
}

impl History {
    pub fn empty() -> Self {
        History::default()
    }

    /// Builds a history from events listed most recent first.
    pub fn from_recent_first(events: Vec<Event>) -> Self {
        History { events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Parses one event per non-empty line, listed OLDEST first (the order a
    /// program would have produced them).
    pub fn parse_chronological(text: &str) -> Result<History, SyntaxError> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with(';') {
                continue;
            }
            let ev = Event::parse(trimmed).map_err(|mut e| {
                e.pos.line = i + 1;
                e
            })?;
            events.push(ev);
        }
        events.reverse();
        Ok(History { events })
    }

    /// One event per line, oldest first.
    pub fn to_chronological_text(&self) -> String {
        self.events.iter().rev().map(|e| format!("{e}\n")).collect()
    }
}

fn fresh_fd_among<'a>(events: impl Iterator<Item = &'a Event>) -> FileDescrId {
    let used: BTreeSet<u64> = events.filter_map(Event::opened_fd).map(|fd| fd.0).collect();
    let mut n = 0;
    while used.contains(&n) {
        n += 1;
    }
    FileDescrId(n)
}

/// The smallest natural number not allocated by a successful open in `h`.
pub fn fresh_fd(h: &History) -> FileDescrId {
    fresh_fd_among(h.events.iter())
}

/// `fresh_fd` of the history `h` extended with `pending` (oldest first).
pub fn fresh_fd_after(h: &History, pending: &[Event]) -> FileDescrId {
    fresh_fd_among(h.events.iter().chain(pending.iter()))
}

/// Whether `evs` (oldest first) is a well-formed local trace from `h`.
pub fn wf_local_trace(h: &History, evs: &[Event]) -> bool {
    first_ill_formed(h, evs).is_none()
}

fn first_ill_formed(h: &History, evs: &[Event]) -> Option<usize> {
    evs.iter()
        .enumerate()
        .position(|(i, ev)| match ev.opened_fd() {
            Some(fd) => fd != fresh_fd_after(h, &evs[..i]),
            None => false,
        })
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("event {index} ({event}) does not open the fresh descriptor")]
    NotFresh { index: usize, event: Event },
    #[error("local trace is based on a different history than required")]
    BaseMismatch,
}

/// Events of one fragment, oldest first, well formed relative to `base`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalTrace {
    base: Arc<History>,
    events: Vec<Event>,
}

impl LocalTrace {
    pub fn new(base: impl Into<Arc<History>>, events: Vec<Event>) -> Result<Self, TraceError> {
        let base = base.into();
        if let Some(index) = first_ill_formed(&base, &events) {
            let event = events[index].clone();
            return Err(TraceError::NotFresh { index, event });
        }
        Ok(LocalTrace { base, events })
    }

    pub fn empty(base: impl Into<Arc<History>>) -> Self {
        LocalTrace {
            base: base.into(),
            events: Vec::new(),
        }
    }

    pub fn base(&self) -> &History {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<History> {
        &self.base
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The history after this trace: `base ++ self`.
    pub fn end_history(&self) -> History {
        hist_append(&self.base, self).expect("a trace extends its own base")
    }

    /// Re-checks well-formedness (always true for constructed traces).
    pub fn is_well_formed(&self) -> bool {
        wf_local_trace(&self.base, &self.events)
    }
}

impl fmt::Display for LocalTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// `h ++ lt`: prepends the reversed local trace to the history.
pub fn hist_append(h: &History, lt: &LocalTrace) -> Result<History, TraceError> {
    if lt.base() != h {
        return Err(TraceError::BaseMismatch);
    }
    let mut events: Vec<Event> = lt.events.iter().rev().cloned().collect();
    events.extend(h.events.iter().cloned());
    Ok(History { events })
}

/// `lt1 @ lt2`, where `lt2` must be based at `lt1.base ++ lt1`.
pub fn lt_concat(lt1: &LocalTrace, lt2: &LocalTrace) -> Result<LocalTrace, TraceError> {
    if lt2.base() != &lt1.end_history() {
        return Err(TraceError::BaseMismatch);
    }
    let mut events = lt1.events.clone();
    events.extend(lt2.events.iter().cloned());
    LocalTrace::new(lt1.base.clone(), events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn open(name: &str, fd: u64) -> Event {
        Event::EvOpen {
            name: name.into(),
            res: Ok(FileDescrId(fd)),
        }
    }

    fn open_fail(name: &str) -> Event {
        Event::EvOpen {
            name: name.into(),
            res: Err(ERR.into()),
        }
    }

    fn close(fd: u64) -> Event {
        Event::EvClose {
            fd: FileDescrId(fd),
            res: Ok(()),
        }
    }

    #[test]
    fn fresh_fd_examples() {
        assert_eq!(fresh_fd(&History::empty()), FileDescrId(0));
        assert_eq!(
            fresh_fd(&History::from_recent_first(vec![open("f", 0)])),
            FileDescrId(1)
        );
        assert_eq!(
            fresh_fd(&History::from_recent_first(vec![open_fail("f")])),
            FileDescrId(0)
        );
        // Gaps are filled.
        assert_eq!(
            fresh_fd(&History::from_recent_first(vec![open("f", 1)])),
            FileDescrId(0)
        );
    }

    #[test]
    fn wf_examples() {
        let h = History::empty();
        assert!(wf_local_trace(&h, &[]));
        assert!(!wf_local_trace(&h, &[open("f", 5)]));
        assert!(wf_local_trace(&h, &[open("f", 0), open("g", 1)]));
        assert!(!wf_local_trace(&h, &[open("f", 0), open("g", 0)]));
    }

    #[test]
    fn hist_append_examples() {
        let e1 = open("a", 0);
        let e2 = close(0);
        let e3 = open_fail("b");
        let h = History::from_recent_first(vec![e1.clone()]);
        let lt = LocalTrace::new(h.clone(), vec![e2.clone(), e3.clone()]).unwrap();
        assert_eq!(hist_append(&h, &lt).unwrap().events, vec![e3, e2, e1]);

        let empty = History::empty();
        assert_eq!(
            hist_append(&empty, &LocalTrace::empty(empty.clone())).unwrap(),
            empty
        );
        let lt = LocalTrace::new(empty.clone(), vec![close(0)]).unwrap();
        assert_eq!(hist_append(&empty, &lt).unwrap().events, vec![close(0)]);
        assert_eq!(hist_append(&h, &lt), Err(TraceError::BaseMismatch));
    }

    #[test]
    fn lt_concat_examples() {
        let empty = History::empty();
        let nil = LocalTrace::empty(empty.clone());
        assert_eq!(lt_concat(&nil, &nil).unwrap(), nil);

        let lt1 = LocalTrace::new(empty.clone(), vec![open("f", 0)]).unwrap();
        let lt2 = LocalTrace::new(
            History::from_recent_first(vec![open("f", 0)]),
            vec![close(0)],
        )
        .unwrap();
        assert_eq!(
            lt_concat(&lt1, &lt2).unwrap().events(),
            &[open("f", 0), close(0)]
        );

        assert_eq!(lt_concat(&nil, &lt1).unwrap(), lt1);
        // lt2's base is not [] ++ [] .
        assert_eq!(lt_concat(&nil, &lt2), Err(TraceError::BaseMismatch));
    }

    #[test]
    fn ill_formed_construction_is_rejected() {
        let err = LocalTrace::new(History::empty(), vec![open("f", 3)]).unwrap_err();
        assert!(matches!(err, TraceError::NotFresh { index: 0, .. }));
    }

    #[test]
    fn event_text_round_trip() {
        let evs = [
            open("f", 0),
            open_fail("\"odd\" name"),
            Event::EvRead {
                fd: FileDescrId(2),
                res: Ok("a\nb".into()),
            },
            Event::EvRead {
                fd: FileDescrId(2),
                res: Err(ERR.into()),
            },
            Event::EvWrite {
                fd: FileDescrId(1),
                arg: "task".into(),
                res: Ok(()),
            },
            Event::EvClose {
                fd: FileDescrId(1),
                res: Err(ERR.into()),
            },
        ];
        for e in evs {
            assert_eq!(Event::parse(&e.to_string()).unwrap(), e, "{e}");
        }
        assert_eq!(open("f", 0).to_string(), "open \"f\" => (ok 0)");
        assert!(Event::parse("open \"f\"").is_err());
        assert!(Event::parse("seek 0 => (ok unit)").is_err());
    }

    #[test]
    fn history_text_is_chronological() {
        let h =
            History::parse_chronological("open \"f\" => (ok 0)\n\nclose 0 => (ok unit)\n").unwrap();
        assert_eq!(h.events, vec![close(0), open("f", 0)]);
        assert_eq!(
            History::parse_chronological(&h.to_chronological_text()).unwrap(),
            h
        );
    }

    fn arb_event() -> impl Strategy<Value = Event> {
        let fd = (0u64..4).prop_map(FileDescrId);
        let res_s = prop_oneof![Just(Ok("a".to_string())), Just(Err(ERR.to_string()))];
        prop_oneof![
            (fd.clone(), any::<bool>()).prop_map(|(fd, ok)| Event::EvOpen {
                name: "f".into(),
                res: if ok { Ok(fd) } else { Err(ERR.into()) }
            }),
            (fd.clone(), res_s).prop_map(|(fd, res)| Event::EvRead { fd, res }),
            fd.prop_map(|fd| Event::EvClose { fd, res: Ok(()) }),
        ]
    }

    /// Relabels successful opens so the list is well formed from `h`.
    fn make_wf(h: &History, mut evs: Vec<Event>) -> Vec<Event> {
        for i in 0..evs.len() {
            if let Event::EvOpen { res: Ok(_), name } = &evs[i] {
                let fd = fresh_fd_after(h, &evs[..i]);
                evs[i] = Event::EvOpen {
                    name: name.clone(),
                    res: Ok(fd),
                };
            }
        }
        evs
    }

    proptest! {
        #[test]
        fn prefixes_of_wf_traces_are_wf(
            hist in proptest::collection::vec(arb_event(), 0..5),
            evs in proptest::collection::vec(arb_event(), 0..8),
        ) {
            let h = History::from_recent_first(hist);
            let evs = make_wf(&h, evs);
            prop_assert!(wf_local_trace(&h, &evs));
            for n in 0..=evs.len() {
                prop_assert!(wf_local_trace(&h, &evs[..n]));
            }
        }

        #[test]
        fn concat_is_associative_with_identities(
            hist in proptest::collection::vec(arb_event(), 0..4),
            a in proptest::collection::vec(arb_event(), 0..4),
            b in proptest::collection::vec(arb_event(), 0..4),
            c in proptest::collection::vec(arb_event(), 0..4),
        ) {
            let h = History::from_recent_first(hist);
            let lt1 = LocalTrace::new(h.clone(), make_wf(&h, a)).unwrap();
            let h2 = lt1.end_history();
            let lt2 = LocalTrace::new(h2.clone(), make_wf(&h2, b)).unwrap();
            let h3 = lt2.end_history();
            let lt3 = LocalTrace::new(h3.clone(), make_wf(&h3, c)).unwrap();

            let left = lt_concat(&lt_concat(&lt1, &lt2).unwrap(), &lt3).unwrap();
            let right = lt_concat(&lt1, &lt_concat(&lt2, &lt3).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);

            let nil_left = LocalTrace::empty(h.clone());
            prop_assert_eq!(&lt_concat(&nil_left, &lt1).unwrap(), &lt1);
            let nil_right = LocalTrace::empty(h2);
            prop_assert_eq!(&lt_concat(&lt1, &nil_right).unwrap(), &lt1);
        }

        #[test]
        fn fresh_fd_after_append_is_unused(
            hist in proptest::collection::vec(arb_event(), 0..5),
            evs in proptest::collection::vec(arb_event(), 0..6),
        ) {
            let h = History::from_recent_first(hist);
            let lt = LocalTrace::new(h.clone(), make_wf(&h, evs)).unwrap();
            let fresh = fresh_fd(&hist_append(&h, &lt).unwrap());
            let collides = h.events.iter().chain(lt.events()).any(|e| e.opened_fd() == Some(fresh));
            prop_assert!(!collides);
        }
    }
}
