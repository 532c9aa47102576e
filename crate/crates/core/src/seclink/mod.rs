//! Whole programs, linking, and the robust relational hyperproperty check.
//!
//! A partial source program takes its context as an argument:
//! `ProgS : ct ->io Bool`. Target contexts are closed λIO values of type `ct`
//! with no descriptor literals. A check compiles the program, back-translates
//! the context, and compares the two whole-program behavior sets.

pub mod gen;
pub mod mutate;

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::backtranslate::{back_translate_val, BtError};
use crate::compile::compile_sval;
use crate::ops::OutcomeUniverse;
use crate::relate::{diff_behaviors, BehDiff, BehSetSource, BehSetTarget, RelateError};
use crate::source::{
    eval_source, fs_beh_enum, infer_sval, EvalEnv, IoTree, SComp, SVal, SValue,
    SourceBehaviorError, SourceTypeError,
};
use crate::target::{
    check_target, enum_behaviors, is_value, BehaviorError, Exp, TargetTypeError, TargetTyping,
};
use crate::traces::History;
use crate::types::{Interface, QType, TyEnv};

use gen::{SourceGen, TargetGen};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinkError {
    #[error("program is ill-typed: {0}")]
    ProgramType(#[from] SourceTypeError),
    #[error("program has type {found}, the interface expects {expected}")]
    ProgramInterface { expected: QType, found: QType },
    #[error("context is ill-typed: {0}")]
    ContextType(#[from] TargetTypeError),
    #[error("context `{0}` is not a closed value")]
    ContextNotValue(Exp),
    #[error("context `{0}` contains a descriptor literal")]
    ContextFdLiteral(Exp),
    #[error("compiled program `{0}` is not closed")]
    OpenProgram(Exp),
}

/// A partial source program for an interface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgS {
    pub iface: Interface,
    /// A value of type `ct ->io Bool`.
    pub deriv: SVal,
}

impl ProgS {
    pub fn new(iface: Interface, deriv: SVal) -> Result<Self, LinkError> {
        let found = infer_sval(&TyEnv::empty(), &deriv)?;
        let expected = iface.program_type();
        if found != expected {
            return Err(LinkError::ProgramInterface { expected, found });
        }
        Ok(ProgS { iface, deriv })
    }

    /// The λIO image of the program.
    pub fn compile(&self) -> Exp {
        compile_sval(&TyEnv::empty(), &self.deriv).expect("validated at construction")
    }
}

/// A target context together with its typing at `ct`.
#[derive(Clone, Debug)]
pub struct CtxT {
    pub exp: Exp,
    pub deriv: TargetTyping,
}

impl CtxT {
    pub fn new(iface: &Interface, exp: Exp) -> Result<Self, LinkError> {
        if !exp.is_closed() || !is_value(&exp) {
            return Err(LinkError::ContextNotValue(exp));
        }
        if exp.contains_fd_literal() {
            return Err(LinkError::ContextFdLiteral(exp));
        }
        let deriv = check_target(&TyEnv::empty(), &exp, &iface.ct)?;
        Ok(CtxT { exp, deriv })
    }

    /// The source context the back-translation produces.
    pub fn back_translate(&self) -> Result<SVal, BtError> {
        back_translate_val(&self.exp, &self.deriv.ty)
    }
}

/// Source linking: apply the program to the context.
pub fn link_source(p: &ProgS, c: &SVal) -> IoTree {
    let env = EvalEnv::empty();
    let whole = SComp::app_io(p.deriv.clone(), c.clone());
    crate::source::eval_source_comp(&env, &whole)
}

/// Target linking: `app pt c`.
pub fn link_target(pt: &Exp, c: &CtxT) -> Result<Exp, LinkError> {
    if !pt.is_closed() {
        return Err(LinkError::OpenProgram(pt.clone()));
    }
    Ok(Exp::app(pt.clone(), c.exp.clone()))
}

/// Behaviors of a linked source whole program from the empty history.
pub fn whole_beh_source(
    w: &IoTree,
    u: &OutcomeUniverse,
    fuel: usize,
) -> Result<BehSetSource, SourceBehaviorError> {
    fs_beh_enum(w, &History::empty(), u, fuel)
}

/// Behaviors of a linked target whole program from the empty history.
pub fn whole_beh_target(
    w: &Exp,
    u: &OutcomeUniverse,
    fuel: usize,
) -> Result<BehSetTarget, BehaviorError> {
    enum_behaviors(w, &History::empty(), u, fuel)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("back-translation failed: {0}")]
    BackTranslate(#[from] BtError),
    #[error("source enumeration: {0}")]
    SourceFuel(#[from] SourceBehaviorError),
    #[error("target enumeration: {0}")]
    TargetFuel(#[from] BehaviorError),
    #[error(transparent)]
    Relate(#[from] RelateError),
}

impl CheckError {
    pub fn is_fuel(&self) -> bool {
        matches!(
            self,
            CheckError::SourceFuel(SourceBehaviorError::FuelExhausted { .. })
                | CheckError::TargetFuel(BehaviorError::FuelExhausted { .. })
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Counterexample(BehDiff),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => write!(f, "equal"),
            Verdict::Counterexample(d) => {
                write!(f, "counterexample:")?;
                for (lt, v) in d.source_only.iter().take(3) {
                    write!(f, "\n  source only: {v} after [{}]", trace_text(lt))?;
                }
                for (lt, e) in d.target_only.iter().take(3) {
                    write!(f, "\n  target only: {e} after [{}]", trace_text(lt))?;
                }
                Ok(())
            }
        }
    }
}

fn trace_text(lt: &crate::traces::LocalTrace) -> String {
    lt.events()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Everything one check computed.
#[derive(Clone, Debug)]
pub struct CaseReport {
    pub verdict: Verdict,
    pub source: BehSetSource,
    pub target: BehSetTarget,
    pub source_ctx: SVal,
    pub compiled: Exp,
}

/// Checks one `(interface, program, context)` triple.
pub fn rrhp_check_case(
    p: &ProgS,
    c: &CtxT,
    u: &OutcomeUniverse,
    fuel: usize,
) -> Result<CaseReport, CheckError> {
    rrhp_check_compiled(p, &p.compile(), c, u, fuel)
}

/// Like [`rrhp_check_case`] with a given target image, which need not be the
/// compiler's output (used for mutation testing).
pub fn rrhp_check_compiled(
    p: &ProgS,
    pt: &Exp,
    c: &CtxT,
    u: &OutcomeUniverse,
    fuel: usize,
) -> Result<CaseReport, CheckError> {
    let source_ctx = c.back_translate()?;
    let source = whole_beh_source(&link_source(p, &source_ctx), u, fuel)?;
    let target = whole_beh_target(&link_target(pt, c)?, u, fuel)?;
    let diff = diff_behaviors(&QType::Bool, &source, &target)?;
    let verdict = if diff.is_empty() {
        Verdict::Equal
    } else {
        Verdict::Counterexample(diff)
    };
    Ok(CaseReport {
        verdict,
        source,
        target,
        source_ctx,
        compiled: pt.clone(),
    })
}

/// A generated test case.
#[derive(Clone, Debug)]
pub struct Triple {
    pub prog: ProgS,
    pub ctx: CtxT,
}

/// Draws a triple with program and context heights at most `depth`.
pub fn gen_triple(seed: u64, depth: usize) -> Triple {
    assert!(depth >= 3, "programs need height 3 to use their context");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ct = gen::gen_context_type(&mut rng, depth);
    let iface = Interface::new(ct.clone());
    let body = SourceGen { rng: &mut rng }.comp(
        &TyEnv::empty().extend(ct.clone()),
        &QType::Bool,
        depth - 1,
    );
    let prog = ProgS::new(iface.clone(), SVal::lambda_io(ct.clone(), body))
        .expect("generator output is typed");
    let ctx = CtxT::new(&iface, TargetGen { rng: &mut rng }.value(&ct, depth))
        .expect("generator output is typed");
    Triple { prog, ctx }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub cases: usize,
    pub depth: usize,
    pub sigma: Vec<String>,
    pub seed: u64,
    pub fuel: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cases: 500,
            depth: 5,
            sigma: vec!["a".into(), "b".into()],
            seed: 0,
            fuel: 10_000,
        }
    }
}

/// Outcome of one generated case.
#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub seed: u64,
    pub result: Result<CaseReport, CheckError>,
}

/// Per-case seeds are derived from the suite seed and the case index.
pub fn case_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64)
}

/// Runs `cfg.cases` generated checks in parallel.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CaseOutcome> {
    let u = OutcomeUniverse::new(cfg.sigma.iter().cloned());
    (0..cfg.cases)
        .into_par_iter()
        .map(|i| {
            let seed = case_seed(cfg.seed, i);
            let t = gen_triple(seed, cfg.depth);
            CaseOutcome {
                seed,
                result: rrhp_check_case(&t.prog, &t.ctx, &u, cfg.fuel),
            }
        })
        .collect()
}

/// Aggregate counts over a suite run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteSummary {
    pub equal: usize,
    pub counterexamples: usize,
    pub fuel_exhausted: usize,
    pub other_errors: usize,
    pub behaviors: usize,
}

impl SuiteSummary {
    pub fn of(outcomes: &[CaseOutcome]) -> Self {
        let mut s = SuiteSummary::default();
        for o in outcomes {
            match &o.result {
                Ok(r) => {
                    s.behaviors += r.target.len();
                    if r.verdict.is_equal() {
                        s.equal += 1;
                    } else {
                        s.counterexamples += 1;
                    }
                }
                Err(e) if e.is_fuel() => s.fuel_exhausted += 1,
                Err(_) => s.other_errors += 1,
            }
        }
        s
    }

    pub fn all_equal(&self) -> bool {
        self.counterexamples == 0 && self.fuel_exhausted == 0 && self.other_errors == 0
    }
}

/// Source results of linked programs are booleans.
pub fn bool_results(s: &BehSetSource) -> BTreeSet<bool> {
    s.iter()
        .filter_map(|(_, v)| match v {
            SValue::VBool(b) => Some(*b),
            _ => None,
        })
        .collect()
}

/// Evaluates a closed source value (convenience for tests and tools).
pub fn eval_closed(v: &SVal) -> SValue {
    eval_source(&EvalEnv::empty(), v)
}
