//! Seeded, type-directed generators of well-typed source and target terms.
//!
//! Both generators track a height budget. A choice is only taken when every
//! child it needs is inhabitable within the remaining budget, measured by a
//! conservative minimum height that only counts variables, introduction
//! forms and `open` of a literal.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::source::{SComp, SVal};
use crate::target::Exp;
use crate::traces::{fresh_fd_after, Event, History, ERR};
use crate::types::{QType, TyEnv};

/// String literals drawn by the generators; overlaps the default read
/// universe `{"a", "b"}` so that comparisons against read results branch.
pub const STRINGS: [&str; 4] = ["a", "b", "f", "g"];

fn fd_res() -> QType {
    QType::resexn(QType::FileDescr)
}

fn has_var(env: &TyEnv, ty: &QType) -> bool {
    env.iter().any(|(_, t)| t == ty)
}

fn has_fd(env: &TyEnv) -> bool {
    has_var(env, &QType::FileDescr)
}

/// Minimum height of a target term of type `ty` under `env`; `io` allows
/// effects at this position.
pub fn min_height(env: &TyEnv, ty: &QType, io: bool) -> Option<usize> {
    if has_var(env, ty) {
        return Some(1);
    }
    let h = match ty {
        QType::Unit | QType::Bool | QType::Str => Some(1),
        QType::FileDescr => None,
        QType::Arr(a, b) => min_height(&env.extend((**a).clone()), b, false).map(|h| h + 1),
        QType::ArrIO(a, b) => min_height(&env.extend((**a).clone()), b, true).map(|h| h + 1),
        QType::Pair(a, b) => Some(min_height(env, a, io)?.max(min_height(env, b, io)?) + 1),
        QType::Sum(a, b) => match (min_height(env, a, io), min_height(env, b, io)) {
            (Some(x), Some(y)) => Some(x.min(y) + 1),
            (Some(x), None) | (None, Some(x)) => Some(x + 1),
            (None, None) => None,
        },
    };
    if io && *ty == fd_res() {
        return Some(h.map_or(2, |h| h.min(2)));
    }
    h
}

fn fits(env: &TyEnv, ty: &QType, d: usize, io: bool) -> bool {
    min_height(env, ty, io).is_some_and(|h| h <= d)
}

/// Minimum height of a closed syntactic value of type `ty`.
pub fn min_value_height(ty: &QType) -> Option<usize> {
    match ty {
        QType::Unit | QType::Bool | QType::Str => Some(1),
        QType::FileDescr => None,
        QType::Arr(..) | QType::ArrIO(..) => min_height(&TyEnv::empty(), ty, false),
        QType::Pair(a, b) => Some(min_value_height(a)?.max(min_value_height(b)?) + 1),
        QType::Sum(a, b) => match (min_value_height(a), min_value_height(b)) {
            (Some(x), Some(y)) => Some(x.min(y) + 1),
            (Some(x), None) | (None, Some(x)) => Some(x + 1),
            (None, None) => None,
        },
    }
}

/// Whether `ty`, seen from the side that must produce it, requires
/// producing a file descriptor somewhere.
pub fn fd_in_positive_position(ty: &QType) -> bool {
    fn go(t: &QType, positive: bool) -> bool {
        match t {
            QType::FileDescr => positive,
            QType::Unit | QType::Bool | QType::Str => false,
            QType::Arr(a, b) | QType::ArrIO(a, b) => go(a, !positive) || go(b, positive),
            QType::Pair(a, b) | QType::Sum(a, b) => go(a, positive) || go(b, positive),
        }
    }
    go(ty, true)
}

fn pick<'a, T, R: Rng>(rng: &mut R, choices: &'a [(T, u32)]) -> &'a T {
    &choices
        .choose_weighted(rng, |c| c.1)
        .expect("at least one viable choice")
        .0
}

/// A small first-order or arrow type, used for intermediate results.
pub fn small_type<R: Rng>(rng: &mut R, io: bool) -> QType {
    let mut pool: Vec<(QType, u32)> = vec![
        (QType::Bool, 4),
        (QType::Str, 3),
        (QType::Unit, 1),
        (QType::resexn(QType::Unit), 1),
        (QType::pair(QType::Bool, QType::Str), 1),
        (QType::arr(QType::Str, QType::Bool), 1),
    ];
    if io {
        pool.push((fd_res(), 4));
        pool.push((QType::resexn(QType::Str), 1));
        pool.push((QType::arr_io(QType::Str, QType::Bool), 1));
    }
    pick(rng, &pool).clone()
}

/// A context type: anything a closed value can inhabit within `depth`
/// without producing a descriptor.
pub fn gen_context_type<R: Rng>(rng: &mut R, depth: usize) -> QType {
    let candidates = [
        (QType::Bool, 3),
        (QType::Str, 2),
        (QType::Unit, 1),
        (QType::arr(QType::Bool, QType::Bool), 2),
        (QType::arr(QType::Str, QType::Bool), 2),
        (QType::arr_io(QType::Str, QType::Bool), 3),
        (QType::arr_io(QType::Unit, QType::resexn(QType::Unit)), 2),
        (QType::arr_io(QType::Str, QType::Str), 2),
        (QType::arr_io(QType::FileDescr, QType::Bool), 2),
        (
            QType::arr_io(QType::FileDescr, QType::resexn(QType::Unit)),
            1,
        ),
        (
            QType::pair(QType::Bool, QType::arr_io(QType::Str, QType::Bool)),
            1,
        ),
        (QType::sum(QType::Str, QType::Bool), 1),
        (
            QType::arr(QType::Bool, QType::arr_io(QType::Str, QType::Bool)),
            1,
        ),
    ];
    let viable: Vec<(QType, u32)> = candidates
        .into_iter()
        .filter(|(t, _)| {
            !fd_in_positive_position(t) && min_value_height(t).is_some_and(|h| h <= depth)
        })
        .collect();
    pick(rng, &viable).clone()
}

#[derive(Clone, Debug)]
enum Choice {
    Var(usize),
    Intro,
    If,
    Case(QType),
    /// Head type, and a variable to use as the head if any.
    App(QType, Option<usize>),
    Proj(bool, QType),
    StrEq,
    Open,
    Read,
    Write,
    Close,
    /// Source only: `return v`.
    Return,
    /// Source only: `bind` through an intermediate type.
    Bind(QType),
}

fn sum_parts(t: &QType) -> (QType, QType) {
    match t {
        QType::Sum(a, b) => ((**a).clone(), (**b).clone()),
        _ => unreachable!("scrutinee types are sums"),
    }
}

/// Generator of λIO terms.
pub struct TargetGen<'r, R> {
    pub rng: &'r mut R,
}

impl<R: Rng> TargetGen<'_, R> {
    fn scrutinees(&mut self, env: &TyEnv, io: bool) -> Vec<(QType, u32)> {
        let mut out: Vec<(QType, u32)> = Vec::new();
        for (_, t) in env.iter() {
            if matches!(t, QType::Sum(..)) && !out.iter().any(|(s, _)| s == t) {
                out.push((t.clone(), 3));
            }
        }
        if io {
            out.push((fd_res(), 5));
            if has_fd(env) {
                out.push((QType::resexn(QType::Str), 4));
                out.push((QType::resexn(QType::Unit), 2));
            }
        }
        out.push((QType::sum(QType::Bool, QType::Str), 1));
        out
    }

    fn intro_viable(&self, env: &TyEnv, ty: &QType, d: usize, io: bool) -> bool {
        match ty {
            QType::Unit | QType::Bool | QType::Str => true,
            QType::FileDescr => false,
            QType::Arr(a, b) => d >= 2 && fits(&env.extend((**a).clone()), b, d - 1, false),
            QType::ArrIO(a, b) => d >= 2 && fits(&env.extend((**a).clone()), b, d - 1, true),
            QType::Pair(a, b) => d >= 2 && fits(env, a, d - 1, io) && fits(env, b, d - 1, io),
            QType::Sum(a, b) => d >= 2 && (fits(env, a, d - 1, io) || fits(env, b, d - 1, io)),
        }
    }

    fn intro(&mut self, env: &TyEnv, ty: &QType, d: usize, io: bool) -> Exp {
        match ty {
            QType::Unit => Exp::Unit,
            QType::Bool => Exp::bool(self.rng.gen()),
            QType::Str => Exp::string(*STRINGS.choose(self.rng).unwrap()),
            QType::Arr(a, b) => Exp::lam(
                (**a).clone(),
                self.exp(&env.extend((**a).clone()), b, d - 1, false),
            ),
            QType::ArrIO(a, b) => Exp::lam(
                (**a).clone(),
                self.exp(&env.extend((**a).clone()), b, d - 1, true),
            ),
            QType::Pair(a, b) => {
                Exp::pair(self.exp(env, a, d - 1, io), self.exp(env, b, d - 1, io))
            }
            QType::Sum(a, b) => {
                let left = fits(env, a, d - 1, io);
                let right = fits(env, b, d - 1, io);
                if left && (!right || self.rng.gen_bool(0.5)) {
                    Exp::inl((**b).clone(), self.exp(env, a, d - 1, io))
                } else {
                    Exp::inr((**a).clone(), self.exp(env, b, d - 1, io))
                }
            }
            QType::FileDescr => unreachable!("descriptors have no introduction form"),
        }
    }

    /// A term of type `ty` and height at most `d`. Panics if none exists
    /// (check [`min_height`] first).
    pub fn exp(&mut self, env: &TyEnv, ty: &QType, d: usize, io: bool) -> Exp {
        assert!(
            fits(env, ty, d, io),
            "no term of type {ty} within height {d}"
        );
        let mut choices: Vec<(Choice, u32)> = Vec::new();
        for (i, t) in env.iter() {
            if t == ty {
                choices.push((Choice::Var(i), 4));
            }
        }
        if self.intro_viable(env, ty, d, io) {
            choices.push((Choice::Intro, 3));
        }
        if d >= 2 {
            let d1 = d - 1;
            if fits(env, ty, d1, io) {
                choices.push((Choice::If, 1));
            }
            for (s, w) in self.scrutinees(env, io) {
                let (a, b) = sum_parts(&s);
                if fits(env, &s, d1, io)
                    && fits(&env.extend(a), ty, d1, io)
                    && fits(&env.extend(b), ty, d1, io)
                {
                    choices.push((Choice::Case(s), w));
                }
            }
            for (i, t) in env.iter() {
                match t {
                    QType::Arr(a, b) | QType::ArrIO(a, b)
                        if &**b == ty
                            && (io || matches!(t, QType::Arr(..)))
                            && fits(env, a, d1, io) =>
                    {
                        choices.push((Choice::App(t.clone(), Some(i)), 4));
                    }
                    QType::Pair(x, y) if &**x == ty => {
                        choices.push((Choice::Proj(true, t.clone()), 1))
                    }
                    QType::Pair(x, y) if &**y == ty => {
                        choices.push((Choice::Proj(false, t.clone()), 1))
                    }
                    _ => {}
                }
            }
            let a = small_type(self.rng, io);
            let head = if io && self.rng.gen_bool(0.5) {
                QType::arr_io(a.clone(), ty.clone())
            } else {
                QType::arr(a.clone(), ty.clone())
            };
            if self.intro_viable(env, &head, d1, io) && fits(env, &a, d1, io) {
                choices.push((Choice::App(head, None), 2));
            }
            if *ty == QType::Bool {
                choices.push((Choice::StrEq, 2));
            }
            if io {
                if *ty == fd_res() {
                    choices.push((Choice::Open, 6));
                }
                if has_fd(env) {
                    if *ty == QType::resexn(QType::Str) {
                        choices.push((Choice::Read, 6));
                    }
                    if *ty == QType::resexn(QType::Unit) {
                        choices.push((Choice::Write, 4));
                        choices.push((Choice::Close, 3));
                    }
                }
            }
        }
        let choice = pick(self.rng, &choices).clone();
        let d1 = d.saturating_sub(1);
        match choice {
            Choice::Var(i) => Exp::Var(i),
            Choice::Intro => self.intro(env, ty, d, io),
            Choice::If => Exp::if_(
                self.exp(env, &QType::Bool, d1, io),
                self.exp(env, ty, d1, io),
                self.exp(env, ty, d1, io),
            ),
            Choice::Case(s) => {
                let (a, b) = sum_parts(&s);
                let scrut = self.exp(env, &s, d1, io);
                Exp::case(
                    scrut,
                    self.exp(&env.extend(a), ty, d1, io),
                    self.exp(&env.extend(b), ty, d1, io),
                )
            }
            Choice::App(head, var) => {
                let (QType::Arr(a, _) | QType::ArrIO(a, _)) = &head else {
                    unreachable!()
                };
                // Fresh heads are abstractions so that the redex checks
                // its body at the expected type.
                let f = match var {
                    Some(i) => Exp::Var(i),
                    None => self.intro(env, &head, d1, io),
                };
                Exp::app(f, self.exp(env, a, d1, io))
            }
            Choice::Proj(first, pt) => {
                let p = self.exp(env, &pt, d1, io);
                if first {
                    Exp::fst(p)
                } else {
                    Exp::snd(p)
                }
            }
            Choice::StrEq => Exp::str_eq(
                self.exp(env, &QType::Str, d1, io),
                self.exp(env, &QType::Str, d1, io),
            ),
            Choice::Open => Exp::open(self.exp(env, &QType::Str, d1, io)),
            Choice::Read => Exp::read(self.exp(env, &QType::FileDescr, d1, io)),
            Choice::Write => Exp::write(
                self.exp(env, &QType::FileDescr, d1, io),
                self.exp(env, &QType::Str, d1, io),
            ),
            Choice::Close => Exp::close(self.exp(env, &QType::FileDescr, d1, io)),
            Choice::Return | Choice::Bind(_) => unreachable!("source-only choices"),
        }
    }

    /// A closed syntactic value of type `ty`.
    pub fn value(&mut self, ty: &QType, d: usize) -> Exp {
        let env = TyEnv::empty();
        match ty {
            QType::Pair(a, b) => Exp::pair(self.value(a, d - 1), self.value(b, d - 1)),
            QType::Sum(a, b) => {
                let left = min_value_height(a).is_some_and(|h| h < d);
                let right = min_value_height(b).is_some_and(|h| h < d);
                if left && (!right || self.rng.gen_bool(0.5)) {
                    Exp::inl((**b).clone(), self.value(a, d - 1))
                } else {
                    Exp::inr((**a).clone(), self.value(b, d - 1))
                }
            }
            _ => self.intro(&env, ty, d, false),
        }
    }
}

/// Minimum height of a source value derivation.
pub fn min_height_val(env: &TyEnv, ty: &QType) -> Option<usize> {
    if has_var(env, ty) {
        return Some(1);
    }
    match ty {
        QType::Unit | QType::Bool | QType::Str => Some(1),
        QType::FileDescr => None,
        QType::Arr(a, b) => min_height_val(&env.extend((**a).clone()), b).map(|h| h + 1),
        QType::ArrIO(a, b) => min_height_comp(&env.extend((**a).clone()), b).map(|h| h + 1),
        QType::Pair(a, b) => Some(min_height_val(env, a)?.max(min_height_val(env, b)?) + 1),
        QType::Sum(a, b) => match (min_height_val(env, a), min_height_val(env, b)) {
            (Some(x), Some(y)) => Some(x.min(y) + 1),
            (Some(x), None) | (None, Some(x)) => Some(x + 1),
            (None, None) => None,
        },
    }
}

/// Minimum height of a source computation derivation.
pub fn min_height_comp(env: &TyEnv, ty: &QType) -> Option<usize> {
    let ret = min_height_val(env, ty).map(|h| h + 1);
    if *ty == fd_res() {
        return Some(ret.map_or(2, |h| h.min(2)));
    }
    ret
}

fn fits_val(env: &TyEnv, ty: &QType, d: usize) -> bool {
    min_height_val(env, ty).is_some_and(|h| h <= d)
}

fn fits_comp(env: &TyEnv, ty: &QType, d: usize) -> bool {
    min_height_comp(env, ty).is_some_and(|h| h <= d)
}

/// Generator of source derivations.
pub struct SourceGen<'r, R> {
    pub rng: &'r mut R,
}

impl<R: Rng> SourceGen<'_, R> {
    fn intro_viable(&self, env: &TyEnv, ty: &QType, d: usize) -> bool {
        match ty {
            QType::Unit | QType::Bool | QType::Str => true,
            QType::FileDescr => false,
            QType::Arr(a, b) => d >= 2 && fits_val(&env.extend((**a).clone()), b, d - 1),
            QType::ArrIO(a, b) => d >= 2 && fits_comp(&env.extend((**a).clone()), b, d - 1),
            QType::Pair(a, b) => d >= 2 && fits_val(env, a, d - 1) && fits_val(env, b, d - 1),
            QType::Sum(a, b) => d >= 2 && (fits_val(env, a, d - 1) || fits_val(env, b, d - 1)),
        }
    }

    fn intro(&mut self, env: &TyEnv, ty: &QType, d: usize) -> SVal {
        match ty {
            QType::Unit => SVal::Qtt,
            QType::Bool => SVal::bool(self.rng.gen()),
            QType::Str => SVal::string(*STRINGS.choose(self.rng).unwrap()),
            QType::Arr(a, b) => SVal::lambda(
                (**a).clone(),
                self.val(&env.extend((**a).clone()), b, d - 1),
            ),
            QType::ArrIO(a, b) => SVal::lambda_io(
                (**a).clone(),
                self.comp(&env.extend((**a).clone()), b, d - 1),
            ),
            QType::Pair(a, b) => SVal::pair(self.val(env, a, d - 1), self.val(env, b, d - 1)),
            QType::Sum(a, b) => {
                let left = fits_val(env, a, d - 1);
                let right = fits_val(env, b, d - 1);
                if left && (!right || self.rng.gen_bool(0.5)) {
                    SVal::inl((**b).clone(), self.val(env, a, d - 1))
                } else {
                    SVal::inr((**a).clone(), self.val(env, b, d - 1))
                }
            }
            QType::FileDescr => unreachable!("descriptors have no introduction form"),
        }
    }

    fn value_scrutinees(&self, env: &TyEnv) -> Vec<(QType, u32)> {
        let mut out: Vec<(QType, u32)> = Vec::new();
        for (_, t) in env.iter() {
            if matches!(t, QType::Sum(..)) && !out.iter().any(|(s, _)| s == t) {
                out.push((t.clone(), 4));
            }
        }
        out.push((QType::sum(QType::Bool, QType::Str), 1));
        out
    }

    /// A value derivation of type `ty` and height at most `d`.
    pub fn val(&mut self, env: &TyEnv, ty: &QType, d: usize) -> SVal {
        assert!(
            fits_val(env, ty, d),
            "no value of type {ty} within height {d}"
        );
        let mut choices: Vec<(Choice, u32)> = Vec::new();
        for (i, t) in env.iter() {
            if t == ty {
                choices.push((Choice::Var(i), 4));
            }
        }
        if self.intro_viable(env, ty, d) {
            choices.push((Choice::Intro, 3));
        }
        if d >= 2 {
            let d1 = d - 1;
            if fits_val(env, ty, d1) {
                choices.push((Choice::If, 1));
            }
            for (s, w) in self.value_scrutinees(env) {
                let (a, b) = sum_parts(&s);
                if fits_val(env, &s, d1)
                    && fits_val(&env.extend(a), ty, d1)
                    && fits_val(&env.extend(b), ty, d1)
                {
                    choices.push((Choice::Case(s), w));
                }
            }
            for (i, t) in env.iter() {
                match t {
                    QType::Arr(a, b) if &**b == ty && fits_val(env, a, d1) => {
                        choices.push((Choice::App(t.clone(), Some(i)), 4))
                    }
                    QType::Pair(x, _) if &**x == ty => {
                        choices.push((Choice::Proj(true, t.clone()), 1))
                    }
                    QType::Pair(_, y) if &**y == ty => {
                        choices.push((Choice::Proj(false, t.clone()), 1))
                    }
                    _ => {}
                }
            }
            let a = small_type(self.rng, false);
            let head = QType::arr(a.clone(), ty.clone());
            if fits_val(env, &head, d1) && fits_val(env, &a, d1) {
                choices.push((Choice::App(head, None), 1));
            }
            if *ty == QType::Bool {
                choices.push((Choice::StrEq, 2));
            }
        }
        let choice = pick(self.rng, &choices).clone();
        let d1 = d.saturating_sub(1);
        match choice {
            Choice::Var(i) => SVal::var(i),
            Choice::Intro => self.intro(env, ty, d),
            Choice::If => SVal::if_(
                self.val(env, &QType::Bool, d1),
                self.val(env, ty, d1),
                self.val(env, ty, d1),
            ),
            Choice::Case(s) => {
                let (a, b) = sum_parts(&s);
                let scrut = self.val(env, &s, d1);
                SVal::case(
                    scrut,
                    self.val(&env.extend(a), ty, d1),
                    self.val(&env.extend(b), ty, d1),
                )
            }
            Choice::App(head, var) => {
                let QType::Arr(a, _) = &head else {
                    unreachable!()
                };
                let f = match var {
                    Some(i) => SVal::var(i),
                    None => self.val(env, &head, d1),
                };
                SVal::app(f, self.val(env, a, d1))
            }
            Choice::Proj(first, pt) => {
                let p = self.val(env, &pt, d1);
                if first {
                    SVal::fst(p)
                } else {
                    SVal::snd(p)
                }
            }
            Choice::StrEq => SVal::str_eq(
                self.val(env, &QType::Str, d1),
                self.val(env, &QType::Str, d1),
            ),
            _ => unreachable!("computation-only choice"),
        }
    }

    /// A computation derivation of type `ty` and height at most `d`.
    pub fn comp(&mut self, env: &TyEnv, ty: &QType, d: usize) -> SComp {
        assert!(
            fits_comp(env, ty, d),
            "no computation of type {ty} within height {d}"
        );
        let mut choices: Vec<(Choice, u32)> = Vec::new();
        let d1 = d.saturating_sub(1);
        if d >= 2 {
            if fits_val(env, ty, d1) {
                choices.push((Choice::Return, if d >= 3 { 2 } else { 4 }));
            }
            let mut mids = vec![fd_res(), fd_res(), small_type(self.rng, true)];
            if has_fd(env) {
                mids.push(QType::resexn(QType::Str));
                mids.push(QType::resexn(QType::Unit));
            }
            for m in mids {
                if fits_comp(env, &m, d1) && fits_comp(&env.extend(m.clone()), ty, d1) {
                    choices.push((Choice::Bind(m), 3));
                }
            }
            if *ty == fd_res() {
                choices.push((Choice::Open, 6));
            }
            if has_fd(env) {
                if *ty == QType::resexn(QType::Str) {
                    choices.push((Choice::Read, 6));
                }
                if *ty == QType::resexn(QType::Unit) {
                    choices.push((Choice::Write, 4));
                    choices.push((Choice::Close, 3));
                }
            }
            for (i, t) in env.iter() {
                if let QType::ArrIO(a, b) = t {
                    if &**b == ty && fits_val(env, a, d1) {
                        choices.push((Choice::App(t.clone(), Some(i)), 4));
                    }
                }
            }
            let a = small_type(self.rng, true);
            let head = QType::arr_io(a.clone(), ty.clone());
            if fits_val(env, &head, d1) && fits_val(env, &a, d1) {
                choices.push((Choice::App(head, None), 1));
            }
            if fits_comp(env, ty, d1) {
                choices.push((Choice::If, 1));
            }
            for (s, w) in self.value_scrutinees(env) {
                let (a, b) = sum_parts(&s);
                if fits_val(env, &s, d1)
                    && fits_comp(&env.extend(a), ty, d1)
                    && fits_comp(&env.extend(b), ty, d1)
                {
                    choices.push((Choice::Case(s), w));
                }
            }
        }
        let choice = pick(self.rng, &choices).clone();
        match choice {
            Choice::Return => SComp::ret(self.val(env, ty, d1)),
            Choice::Bind(m) => {
                let first = self.comp(env, &m, d1);
                SComp::bind(first, self.comp(&env.extend(m), ty, d1))
            }
            Choice::Open => SComp::open(self.val(env, &QType::Str, d1)),
            Choice::Read => SComp::read(self.val(env, &QType::FileDescr, d1)),
            Choice::Write => SComp::write(
                self.val(env, &QType::FileDescr, d1),
                self.val(env, &QType::Str, d1),
            ),
            Choice::Close => SComp::close(self.val(env, &QType::FileDescr, d1)),
            Choice::App(head, var) => {
                let QType::ArrIO(a, _) = &head else {
                    unreachable!()
                };
                let f = match var {
                    Some(i) => SVal::var(i),
                    None => self.val(env, &head, d1),
                };
                SComp::app_io(f, self.val(env, a, d1))
            }
            Choice::If => SComp::if_io(
                self.val(env, &QType::Bool, d1),
                self.comp(env, ty, d1),
                self.comp(env, ty, d1),
            ),
            Choice::Case(s) => {
                let (a, b) = sum_parts(&s);
                let scrut = self.val(env, &s, d1);
                SComp::case_io(
                    scrut,
                    self.comp(&env.extend(a), ty, d1),
                    self.comp(&env.extend(b), ty, d1),
                )
            }
            _ => unreachable!("value-only choice"),
        }
    }
}

/// A short well-formed history (at most `max_len` events).
pub fn gen_history<R: Rng>(rng: &mut R, max_len: usize) -> History {
    let len = rng.gen_range(0..=max_len);
    let mut chrono: Vec<Event> = Vec::with_capacity(len);
    let empty = History::empty();
    for _ in 0..len {
        let fd = fresh_fd_after(&empty, &chrono);
        let known: Vec<_> = chrono.iter().filter_map(Event::opened_fd).collect();
        let some_fd = known.choose(rng).copied().unwrap_or(fd);
        let name = STRINGS[rng.gen_range(2..4)].to_string();
        let ok = rng.gen_bool(0.7);
        let ev = match rng.gen_range(0..4) {
            0 => Event::EvOpen {
                name,
                res: if ok { Ok(fd) } else { Err(ERR.into()) },
            },
            1 => Event::EvRead {
                fd: some_fd,
                res: if ok {
                    Ok(STRINGS[rng.gen_range(0..2)].into())
                } else {
                    Err(ERR.into())
                },
            },
            2 => Event::EvWrite {
                fd: some_fd,
                arg: "a".into(),
                res: if ok { Ok(()) } else { Err(ERR.into()) },
            },
            _ => Event::EvClose {
                fd: some_fd,
                res: if ok { Ok(()) } else { Err(ERR.into()) },
            },
        };
        chrono.push(ev);
    }
    chrono.reverse();
    History::from_recent_first(chrono)
}
