//! Predicate-transformer semantics of computation trees.
//!
//! A `Hist<A>` maps a history and a postcondition over `(local trace,
//! result)` to a precondition truth value. `theta` sends trees to such
//! transformers; `fs_beh_enum` computes the strongest postcondition directly
//! by walking every path of a tree.

use std::collections::BTreeSet;
use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use super::eval::{IoTree, SValue};
use crate::ops::{op_to_ev, IoArgs, IoResult, OutcomeSource, OutcomeUniverse};
use crate::traces::{hist_append, lt_concat, Event, History, LocalTrace, TraceError};

/// Postconditions over a local trace and a result.
pub type HistPost<'a, A> = dyn Fn(&LocalTrace, &A) -> bool + 'a;

pub type Hist<A> = Rc<dyn Fn(&History, &HistPost<'_, A>) -> bool>;

/// A continuation from results to transformers.
pub type HistCont<A, B> = Rc<dyn Fn(&A) -> Hist<B>>;

pub fn hist_return<A: 'static>(x: A) -> Hist<A> {
    Rc::new(move |h, p| p(&LocalTrace::empty(h.clone()), &x))
}

/// `fun lt' r -> p (lt @ lt') r`
pub fn post_shift<'a, A>(
    p: &'a HistPost<'a, A>,
    lt: &'a LocalTrace,
) -> impl Fn(&LocalTrace, &A) -> bool + 'a {
    move |lt2, r| {
        p(
            &lt_concat(lt, lt2).expect("continuation trace is based at the shifted history"),
            r,
        )
    }
}

pub fn hist_bind<A: 'static, B: 'static>(w: Hist<A>, kw: HistCont<A, B>) -> Hist<B> {
    Rc::new(move |h, p| {
        let post = |lt: &LocalTrace, r: &A| {
            let h2 = hist_append(h, lt).expect("trace is based at h");
            kw(r)(&h2, &post_shift(p, lt))
        };
        w(h, &post)
    })
}

/// Every admissible result, with the single event it records, must satisfy
/// the postcondition.
pub fn op_wp(args: IoArgs, u: OutcomeUniverse) -> Hist<IoResult> {
    Rc::new(move |h, p| {
        u.results(&args, h).iter().all(|r| {
            let lt = LocalTrace::new(h.clone(), vec![op_to_ev(&args, r)])
                .expect("universe opens only the fresh descriptor");
            p(&lt, r)
        })
    })
}

pub fn theta(t: &IoTree, u: &OutcomeUniverse) -> Hist<SValue> {
    match t {
        IoTree::Return(x) => hist_return(x.clone()),
        IoTree::Call(args, k) => {
            let k = k.clone();
            let u2 = u.clone();
            hist_bind(
                op_wp(args.clone(), u.clone()),
                Rc::new(move |r: &IoResult| theta(&k(r.clone()), &u2)),
            )
        }
    }
}

/// `theta t h p`.
pub fn theta_holds(t: &IoTree, h: &History, u: &OutcomeUniverse, p: &HistPost<'_, SValue>) -> bool {
    theta(t, u)(h, p)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SourceBehaviorError {
    #[error("more than {fuel} operations along one path")]
    FuelExhausted { fuel: usize },
    #[error("outcome source produced an ill-formed trace: {0}")]
    IllFormed(#[from] TraceError),
}

/// Every `(trace, result)` of `t` from `h`, resolving each call against `u`.
/// `fuel` bounds the number of calls along a path.
pub fn fs_beh_enum(
    t: &IoTree,
    h: &History,
    u: &OutcomeUniverse,
    fuel: usize,
) -> Result<BTreeSet<(LocalTrace, SValue)>, SourceBehaviorError> {
    fs_beh_enum_with(t, h, &mut &*u, fuel)
}

pub fn fs_beh_enum_with(
    t: &IoTree,
    h: &History,
    src: &mut dyn OutcomeSource,
    fuel: usize,
) -> Result<BTreeSet<(LocalTrace, SValue)>, SourceBehaviorError> {
    let base = Arc::new(h.clone());
    let mut out = BTreeSet::new();
    let mut stack: Vec<(IoTree, Vec<Event>, usize)> = vec![(t.clone(), Vec::new(), 0)];
    while let Some((node, events, calls)) = stack.pop() {
        match node {
            IoTree::Return(v) => {
                out.insert((LocalTrace::new(base.clone(), events)?, v));
            }
            IoTree::Call(args, k) => {
                if calls >= fuel {
                    return Err(SourceBehaviorError::FuelExhausted { fuel });
                }
                let results = src.outcomes(&args, h, &events);
                for r in results.into_iter().rev() {
                    let mut evs = events.clone();
                    evs.push(op_to_ev(&args, &r));
                    stack.push((k(r), evs, calls + 1));
                }
            }
        }
    }
    Ok(out)
}
