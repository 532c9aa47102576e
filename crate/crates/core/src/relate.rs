//! The first-order value relation and comparison of behavior sets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::source::SValue;
use crate::target::Exp;
use crate::traces::LocalTrace;
use crate::types::QType;

pub type BehSetSource = BTreeSet<(LocalTrace, SValue)>;
pub type BehSetTarget = BTreeSet<(LocalTrace, Exp)>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RelateError {
    #[error("the value relation is only decided at first-order types, not {0}")]
    HigherOrder(QType),
    #[error("behavior sets are based on different histories")]
    BaseMismatch,
}

/// The source value a first-order target value of type `t` corresponds to,
/// or `None` if `e` is not such a value.
pub fn reflect_fo(t: &QType, e: &Exp) -> Option<SValue> {
    Some(match (t, e) {
        (QType::Unit, Exp::Unit) => SValue::VUnit,
        (QType::Bool, Exp::True) => SValue::VBool(true),
        (QType::Bool, Exp::False) => SValue::VBool(false),
        (QType::Str, Exp::Str(s)) => SValue::VStr(s.clone()),
        (QType::FileDescr, Exp::FileDescr(fd)) => SValue::VFd(*fd),
        (QType::Pair(a, b), Exp::Pair(x, y)) => SValue::pair(reflect_fo(a, x)?, reflect_fo(b, y)?),
        (QType::Sum(a, _), Exp::Inl(_, x)) => SValue::inl(reflect_fo(a, x)?),
        (QType::Sum(_, b), Exp::Inr(_, y)) => SValue::inr(reflect_fo(b, y)?),
        _ => return None,
    })
}

fn require_first_order(t: &QType) -> Result<(), RelateError> {
    if t.is_first_order() {
        Ok(())
    } else {
        Err(RelateError::HigherOrder(t.clone()))
    }
}

pub fn related_value_fo(t: &QType, sv: &SValue, e: &Exp) -> Result<bool, RelateError> {
    require_first_order(t)?;
    Ok(reflect_fo(t, e).as_ref() == Some(sv))
}

/// Behaviors present on one side only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BehDiff {
    /// Source behaviors with no related target behavior.
    pub source_only: Vec<(LocalTrace, SValue)>,
    /// Target behaviors with no related source behavior (including target
    /// terminals that are not values of the expected type).
    pub target_only: Vec<(LocalTrace, Exp)>,
}

impl BehDiff {
    pub fn is_empty(&self) -> bool {
        self.source_only.is_empty() && self.target_only.is_empty()
    }

    /// Every target behavior has a source counterpart.
    pub fn target_included(&self) -> bool {
        self.target_only.is_empty()
    }

    /// Every source behavior has a target counterpart.
    pub fn source_included(&self) -> bool {
        self.source_only.is_empty()
    }
}

fn check_bases(s: &BehSetSource, tset: &BehSetTarget) -> Result<(), RelateError> {
    let mut bases = s
        .iter()
        .map(|(lt, _)| lt.base())
        .chain(tset.iter().map(|(lt, _)| lt.base()));
    if let Some(first) = bases.next() {
        if bases.any(|b| b != first) {
            return Err(RelateError::BaseMismatch);
        }
    }
    Ok(())
}

pub fn diff_behaviors(
    t: &QType,
    s: &BehSetSource,
    tset: &BehSetTarget,
) -> Result<BehDiff, RelateError> {
    require_first_order(t)?;
    check_bases(s, tset)?;
    let mut reflected = BTreeSet::new();
    let mut diff = BehDiff::default();
    for (lt, e) in tset {
        match reflect_fo(t, e) {
            Some(v) => {
                if !s.contains(&(lt.clone(), v.clone())) {
                    diff.target_only.push((lt.clone(), e.clone()));
                }
                reflected.insert((lt.clone(), v));
            }
            None => diff.target_only.push((lt.clone(), e.clone())),
        }
    }
    diff.source_only = s
        .iter()
        .filter(|b| !reflected.contains(*b))
        .cloned()
        .collect();
    Ok(diff)
}

/// Both sets relate elementwise. Since the first-order relation is a
/// partial bijection between values, this is equality after reflection.
pub fn beh_sets_equal(
    t: &QType,
    s: &BehSetSource,
    tset: &BehSetTarget,
) -> Result<bool, RelateError> {
    Ok(diff_behaviors(t, s, tset)?.is_empty())
}
