//! Acceptance criteria 1 to 8. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use seio_core::backtranslate::back_translate;
use seio_core::compile::compile;
use seio_core::demo::{matches_wrapper_pattern, run_demo, Agent, DemoVerdict, FAILED_VALIDATION};
use seio_core::fsworld::{run_world, FsWorld};
use seio_core::relate::{beh_sets_equal, diff_behaviors};
use seio_core::seclink::gen::{
    gen_history, min_height_comp, min_value_height, small_type, SourceGen, TargetGen,
};
use seio_core::seclink::mutate::{changes_semantics, typed_mutants, MutationKind};
use seio_core::seclink::{case_seed, gen_triple, rrhp_check_compiled, run_suite, SuiteConfig};
use seio_core::source::{
    eval_source, eval_source_comp, fs_beh_enum, hist_bind, hist_return, infer_source, theta,
    theta_holds, EvalEnv, HistCont, IoTree, SComp, SValue, SourceDeriv,
};
use seio_core::target::{enum_behaviors, infer_target, Effect};
use seio_core::traces::{wf_local_trace, Event, FileDescrId, History, LocalTrace};
use seio_core::{OutcomeUniverse, QType, TyEnv};

const FUEL: usize = 10_000;

fn sigma_ab() -> OutcomeUniverse {
    OutcomeUniverse::new(["a", "b"])
}

/// Trace statistics gathered across suites 1 to 5.
#[derive(Clone, Debug, Default)]
struct Hygiene {
    traces: usize,
    opens_checked: usize,
    ill_formed: usize,
    wrong_fd: usize,
    fuel_exhausted: usize,
}

/// Smallest natural not allocated by a successful open in `base` or
/// `prefix`, computed without the library's helpers.
fn oracle_fresh(base: &History, prefix: &[Event]) -> u64 {
    let mut taken = Vec::new();
    for ev in base.events.iter().chain(prefix) {
        if let Event::EvOpen {
            res: Ok(FileDescrId(n)),
            ..
        } = ev
        {
            taken.push(*n);
        }
    }
    (0..).find(|n| !taken.contains(n)).unwrap()
}

impl Hygiene {
    fn record(&mut self, lt: &LocalTrace) {
        self.traces += 1;
        let evs = lt.events();
        if !wf_local_trace(lt.base(), evs) {
            self.ill_formed += 1;
        }
        for (i, ev) in evs.iter().enumerate() {
            if let Event::EvOpen {
                res: Ok(FileDescrId(n)),
                ..
            } = ev
            {
                self.opens_checked += 1;
                if *n != oracle_fresh(lt.base(), &evs[..i]) {
                    self.wrong_fd += 1;
                }
            }
        }
    }

    fn record_all<'a, T: 'a>(&mut self, set: impl IntoIterator<Item = &'a (LocalTrace, T)>) {
        for (lt, _) in set {
            self.record(lt);
        }
    }

    fn merge(mut self, o: Hygiene) -> Hygiene {
        self.traces += o.traces;
        self.opens_checked += o.opens_checked;
        self.ill_formed += o.ill_formed;
        self.wrong_fd += o.wrong_fd;
        self.fuel_exhausted += o.fuel_exhausted;
        self
    }

    fn ok(&self) -> bool {
        self.ill_formed == 0 && self.wrong_fd == 0 && self.fuel_exhausted == 0
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(n: usize, name: &str, o: &Outcome, elapsed: Duration) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!(
        "{tag} criterion {n} ({name}): {} [{:.2?}]",
        o.detail, elapsed
    );
}

fn criterion_1(hy: &mut Hygiene) -> Outcome {
    let cfg = SuiteConfig {
        cases: 500,
        depth: 5,
        sigma: vec!["a".into(), "b".into()],
        seed: 2024,
        fuel: FUEL,
    };
    let start = Instant::now();
    let outcomes = run_suite(&cfg);
    let elapsed = start.elapsed();
    let (mut equal, mut t_in_s, mut s_in_t, mut errors, mut behaviors) = (0, 0, 0, 0, 0);
    let mut first_failure = None;
    for o in &outcomes {
        match &o.result {
            Ok(r) => {
                hy.record_all(&r.source);
                hy.record_all(&r.target);
                behaviors += r.target.len();
                let d = diff_behaviors(&QType::Bool, &r.source, &r.target).unwrap();
                equal += usize::from(r.verdict.is_equal());
                t_in_s += usize::from(d.target_included());
                s_in_t += usize::from(d.source_included());
                if !r.verdict.is_equal() && first_failure.is_none() {
                    first_failure = Some(format!("seed {}: {}", o.seed, r.verdict));
                }
            }
            Err(e) => {
                hy.fuel_exhausted += usize::from(e.is_fuel());
                errors += 1;
                first_failure.get_or_insert(format!("seed {}: {e}", o.seed));
            }
        }
    }
    let n = outcomes.len();
    let pass = n >= 500
        && equal == n
        && t_in_s == n
        && s_in_t == n
        && errors == 0
        && elapsed < Duration::from_secs(300);
    let mut detail = format!(
        "{n} triples, {equal} equal, target-in-source {t_in_s}/{n}, source-in-target {s_in_t}/{n}, \
         {errors} errors, {behaviors} target behaviors, suite time {elapsed:.2?}"
    );
    if let Some(f) = first_failure {
        detail.push_str(&format!("; first failure {f}"));
    }
    Outcome { pass, detail }
}

/// Three distinct starting histories.
fn three_histories(rng: &mut ChaCha8Rng) -> Vec<History> {
    let mut hs = vec![History::empty()];
    while hs.len() < 3 {
        let h = gen_history(rng, 4);
        if !hs.contains(&h) {
            hs.push(h);
        }
    }
    hs
}

fn criterion_2(hy: &mut Hygiene) -> Outcome {
    let n = 1000;
    let u = sigma_ab();
    let results: Vec<(bool, Hygiene)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed(77, i));
            let depth = rng.gen_range(2..=6);
            let c = SourceGen { rng: &mut rng }.comp(&TyEnv::empty(), &QType::Bool, depth);
            let e = compile(&SourceDeriv::Comp(c.clone())).unwrap();
            let tree = eval_source_comp(&EvalEnv::empty(), &c);
            let mut hy = Hygiene::default();
            let mut ok = true;
            for h in three_histories(&mut rng) {
                let s = fs_beh_enum(&tree, &h, &u, FUEL);
                let t = enum_behaviors(&e, &h, &u, FUEL);
                match (s, t) {
                    (Ok(s), Ok(t)) => {
                        hy.record_all(&s);
                        hy.record_all(&t);
                        ok &= beh_sets_equal(&QType::Bool, &s, &t).unwrap();
                    }
                    _ => {
                        hy.fuel_exhausted += 1;
                        ok = false;
                    }
                }
            }
            (ok, hy)
        })
        .collect();
    let equal = results.iter().filter(|r| r.0).count();
    for (_, h) in results {
        *hy = std::mem::take(hy).merge(h);
    }
    Outcome {
        pass: equal == n,
        detail: format!("{equal}/{n} computations equal from 3 histories each"),
    }
}

fn tree_of(d: &SourceDeriv) -> IoTree {
    match d {
        SourceDeriv::Val(v) => IoTree::Return(eval_source(&EvalEnv::empty(), v)),
        SourceDeriv::Comp(c) => eval_source_comp(&EvalEnv::empty(), c),
    }
}

fn criterion_3(hy: &mut Hygiene) -> Outcome {
    let u = sigma_ab();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut terms = Vec::new();
    let mut io_terms = 0;
    while io_terms < 1000 {
        let depth = rng.gen_range(2..=6);
        let e = TargetGen { rng: &mut rng }.exp(&TyEnv::empty(), &QType::Bool, depth, true);
        let eff = infer_target(&TyEnv::empty(), &e).unwrap().eff;
        io_terms += usize::from(eff == Effect::Io);
        terms.push((e, rng.gen::<u64>()));
    }
    let results: Vec<(bool, Hygiene)> = terms
        .par_iter()
        .map(|(e, seed)| {
            let mut hy = Hygiene::default();
            let Ok((d, _)) = back_translate(&TyEnv::empty(), e) else {
                return (false, hy);
            };
            if infer_source(&TyEnv::empty(), &d) != Ok(QType::Bool) {
                return (false, hy);
            }
            let tree = tree_of(&d);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut ok = true;
            for h in [History::empty(), gen_history(&mut rng, 4)] {
                match (
                    fs_beh_enum(&tree, &h, &u, FUEL),
                    enum_behaviors(e, &h, &u, FUEL),
                ) {
                    (Ok(s), Ok(t)) => {
                        hy.record_all(&s);
                        hy.record_all(&t);
                        ok &= beh_sets_equal(&QType::Bool, &s, &t).unwrap();
                    }
                    _ => {
                        hy.fuel_exhausted += 1;
                        ok = false;
                    }
                }
            }
            (ok, hy)
        })
        .collect();
    let equal = results.iter().filter(|r| r.0).count();
    for (_, h) in results {
        *hy = std::mem::take(hy).merge(h);
    }
    let n = terms.len();
    Outcome {
        pass: equal == n && n >= 1000,
        detail: format!("{equal}/{n} round-trips equal ({io_terms} effectful terms)"),
    }
}

/// Per program: (kind, detected) for each semantics-changing mutant, the
/// number of equivalent mutants, and trace statistics.
type SeedMutants = (Vec<(MutationKind, bool)>, usize, Hygiene);

fn criterion_4(hy: &mut Hygiene) -> Outcome {
    let u = sigma_ab();
    let per_seed: Vec<SeedMutants> = (0..300u64)
        .into_par_iter()
        .map(|seed| {
            let t = gen_triple(case_seed(404, seed as usize), 5);
            let pt = t.prog.compile();
            let mut hy = Hygiene::default();
            let mut out = Vec::new();
            let mut neutral = 0;
            for m in typed_mutants(&pt, &t.prog.iface.program_type()) {
                match changes_semantics(&pt, &m.exp, &t.ctx, &u, FUEL) {
                    Ok(true) => {
                        let detected = match rrhp_check_compiled(&t.prog, &m.exp, &t.ctx, &u, FUEL)
                        {
                            Ok(r) => {
                                hy.record_all(&r.source);
                                hy.record_all(&r.target);
                                !r.verdict.is_equal()
                            }
                            Err(e) => {
                                hy.fuel_exhausted += usize::from(e.is_fuel());
                                false
                            }
                        };
                        out.push((m.kind, detected));
                    }
                    Ok(false) => neutral += 1,
                    Err(_) => hy.fuel_exhausted += 1,
                }
            }
            (out, neutral, hy)
        })
        .collect();
    let mut by_kind: BTreeMap<MutationKind, (usize, usize)> = BTreeMap::new();
    let mut neutral = 0;
    for (ms, n, h) in per_seed {
        neutral += n;
        *hy = std::mem::take(hy).merge(h);
        for (k, d) in ms {
            let e = by_kind.entry(k).or_default();
            e.0 += 1;
            e.1 += usize::from(d);
        }
    }
    let total: usize = by_kind.values().map(|v| v.0).sum();
    let detected: usize = by_kind.values().map(|v| v.1).sum();
    let rate = detected as f64 / total.max(1) as f64;
    let kinds: Vec<String> = by_kind
        .iter()
        .map(|(k, (n, d))| format!("{k} {d}/{n}"))
        .collect();
    Outcome {
        pass: total >= 50 && rate >= 0.95,
        detail: format!(
            "{detected}/{total} semantics-changing mutants detected ({:.1}%), {neutral} equivalent mutants skipped; {}",
            rate * 100.0,
            kinds.join(", ")
        ),
    }
}

/// A sampled postcondition: a pseudo-random subset of behaviors, or one of
/// a few structured predicates.
#[derive(Clone, Copy, Debug)]
enum Post {
    Hashed(u64, u64),
    ResultIs(bool),
    ShorterThan(usize),
    NoFailures,
    Always,
}

impl Post {
    fn sample(rng: &mut ChaCha8Rng) -> Post {
        match rng.gen_range(0..6) {
            0 | 1 => Post::Hashed(rng.gen(), rng.gen_range(2..5)),
            2 => Post::ResultIs(rng.gen()),
            3 => Post::ShorterThan(rng.gen_range(0..4)),
            4 => Post::NoFailures,
            _ => Post::Always,
        }
    }

    fn eval(self, lt: &LocalTrace, r: &SValue) -> bool {
        match self {
            Post::Hashed(seed, k) => {
                let mut h = DefaultHasher::new();
                (seed, lt, r).hash(&mut h);
                !h.finish().is_multiple_of(k)
            }
            Post::ResultIs(b) => !matches!(r, SValue::VBool(x) if *x != b),
            Post::ShorterThan(n) => lt.len() < n,
            Post::NoFailures => lt.events().iter().all(Event::is_success),
            Post::Always => true,
        }
    }
}

fn sample_universe(rng: &mut ChaCha8Rng) -> OutcomeUniverse {
    let choices: [&[&str]; 4] = [&[], &["a"], &["a", "b"], &["a", "b", "c"]];
    OutcomeUniverse::new(choices.choose(rng).unwrap().iter().copied())
}

fn comp_at(rng: &mut ChaCha8Rng, env: &TyEnv, ty: &QType, depth: usize) -> SComp {
    SourceGen { rng }.comp(env, ty, depth)
}

/// A type with closed values and computations of height at most 3.
fn mid_type(rng: &mut ChaCha8Rng) -> QType {
    loop {
        let t = small_type(rng, true);
        if min_height_comp(&TyEnv::empty(), &t).is_some_and(|h| h <= 3)
            && min_value_height(&t).is_some_and(|h| h <= 3)
        {
            return t;
        }
    }
}

struct Checks {
    ok: usize,
    total: usize,
    first_bad: Option<String>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            ok: 0,
            total: 0,
            first_bad: None,
        }
    }

    fn check(&mut self, what: &str, b: bool) {
        self.total += 1;
        if b {
            self.ok += 1;
        } else {
            self.first_bad.get_or_insert_with(|| what.to_string());
        }
    }
}

fn theta_of_k(k: SComp, u: OutcomeUniverse) -> HistCont<SValue, SValue> {
    Rc::new(move |x: &SValue| theta(&eval_source_comp(&EvalEnv::empty().push(x.clone()), &k), &u))
}

fn criterion_5(hy: &mut Hygiene) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut sp = Checks::new();
    let mut laws = Checks::new();
    let mut law_posts = 0;
    let empty = TyEnv::empty();
    for _ in 0..500 {
        let ty = if rng.gen_bool(0.7) {
            QType::Bool
        } else {
            mid_type(&mut rng)
        };
        let depth = rng.gen_range(3..=5);
        let c = comp_at(&mut rng, &empty, &ty, depth);
        let t = eval_source_comp(&EvalEnv::empty(), &c);
        let h = gen_history(&mut rng, 3);
        let u = sample_universe(&mut rng);
        let behs = match fs_beh_enum(&t, &h, &u, FUEL) {
            Ok(b) => b,
            Err(_) => {
                hy.fuel_exhausted += 1;
                sp.check("fuel", false);
                continue;
            }
        };
        hy.record_all(&behs);
        // Members are exactly the pairs the transformer cannot rule out.
        for (lt, r) in &behs {
            sp.check(
                "member",
                !theta_holds(&t, &h, &u, &|l, x| (l, x) != (lt, r)),
            );
        }
        // Perturbed pairs outside the set must be ruled out.
        for (lt, r) in &behs {
            let mut outsiders = vec![(lt.clone(), SValue::str("outside"))];
            if let SValue::VBool(b) = r {
                outsiders.push((lt.clone(), SValue::VBool(!b)));
            }
            if let Some((_, init)) = lt.events().split_last() {
                outsiders.push((
                    LocalTrace::new(lt.base().clone(), init.to_vec()).unwrap(),
                    r.clone(),
                ));
            }
            for (ol, or) in outsiders.iter().filter(|o| !behs.contains(o)) {
                sp.check(
                    "non-member",
                    theta_holds(&t, &h, &u, &|l, x| (l, x) != (ol, or)),
                );
            }
        }
        for _ in 0..3 {
            let p = Post::sample(&mut rng);
            let lhs = theta_holds(&t, &h, &u, &|l, x| p.eval(l, x));
            sp.check("pointwise", lhs == behs.iter().all(|(l, x)| p.eval(l, x)));
        }
    }

    // Monad laws and the morphism identity on composed computations.
    while law_posts < 1000 {
        let h = gen_history(&mut rng, 3);
        let u = sample_universe(&mut rng);
        let mid = mid_type(&mut rng);
        let m = comp_at(&mut rng, &empty, &mid, 3);
        let k = comp_at(&mut rng, &empty.extend(mid.clone()), &QType::Bool, 3);
        let p = Post::sample(&mut rng);
        let q = Post::sample(&mut rng);
        let post = |l: &LocalTrace, x: &SValue| p.eval(l, x);
        let weaker = |l: &LocalTrace, x: &SValue| p.eval(l, x) || q.eval(l, x);
        let tm = eval_source_comp(&EvalEnv::empty(), &m);
        let wm = theta(&tm, &u);

        let bound = eval_source_comp(&EvalEnv::empty(), &SComp::bind(m.clone(), k.clone()));
        let composed = hist_bind(wm.clone(), theta_of_k(k.clone(), u.clone()));
        laws.check(
            "morphism",
            theta_holds(&bound, &h, &u, &post) == composed(&h, &post),
        );

        let right_id = hist_bind(wm.clone(), Rc::new(|x: &SValue| hist_return(x.clone())));
        laws.check("right identity", right_id(&h, &post) == wm(&h, &post));

        let v = SourceGen { rng: &mut rng }.val(&empty, &mid, 3);
        let left = eval_source_comp(
            &EvalEnv::empty(),
            &SComp::bind(SComp::ret(v.clone()), k.clone()),
        );
        let direct = eval_source_comp(
            &EvalEnv::empty().push(eval_source(&EvalEnv::empty(), &v)),
            &k,
        );
        laws.check(
            "left identity",
            theta_holds(&left, &h, &u, &post) == theta_holds(&direct, &h, &u, &post),
        );

        let mid2 = mid_type(&mut rng);
        let k1 = comp_at(&mut rng, &empty.extend(mid.clone()), &mid2, 3);
        let k2 = comp_at(&mut rng, &empty.extend(mid2), &QType::Bool, 3);
        let f = theta_of_k(k1, u.clone());
        let g = theta_of_k(k2, u.clone());
        let assoc_l = hist_bind(hist_bind(wm.clone(), f.clone()), g.clone());
        let g2 = g.clone();
        let assoc_r = hist_bind(
            wm.clone(),
            Rc::new(move |x: &SValue| hist_bind(f(x), g2.clone())),
        );
        laws.check("associativity", assoc_l(&h, &post) == assoc_r(&h, &post));

        laws.check(
            "monotonicity",
            !theta_holds(&tm, &h, &u, &post) || theta_holds(&tm, &h, &u, &weaker),
        );
        law_posts += 1;
    }
    let pass = sp.ok == sp.total && laws.ok == laws.total && law_posts >= 1000;
    let mut detail = format!(
        "500 trees: {}/{} strongest-postcondition checks; {}/{} law checks over {law_posts} sampled postconditions",
        sp.ok, sp.total, laws.ok, laws.total
    );
    for c in [&sp, &laws] {
        if let Some(b) = &c.first_bad {
            detail.push_str(&format!("; first failing check: {b}"));
        }
    }
    Outcome { pass, detail }
}

fn criterion_6(hy: &Hygiene) -> Outcome {
    Outcome {
        pass: hy.ok() && hy.traces > 0,
        detail: format!(
            "{} traces from suites 1-5: {} ill-formed, {}/{} opens disagree with the fresh-fd oracle, {} fuel exhaustions",
            hy.traces, hy.ill_formed, hy.wrong_fd, hy.opens_checked, hy.fuel_exhausted
        ),
    }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let expected = [
        (Agent::Write, DemoVerdict::Left),
        (Agent::Lazy, DemoVerdict::Right(FAILED_VALIDATION.into())),
        (
            Agent::WriteTwice,
            DemoVerdict::Right(FAILED_VALIDATION.into()),
        ),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (agent, verdict) in expected {
        match (run_demo(agent, "task", "f"), run_demo(agent, "task", "f")) {
            (Ok(a), Ok(b)) => {
                let deterministic =
                    a.trace == b.trace && a.verdict == b.verdict && a.world == b.world;
                pass &= deterministic && a.verdict == verdict;
                if agent == Agent::Write {
                    let fds: Vec<u64> = a
                        .trace
                        .events()
                        .iter()
                        .filter_map(Event::opened_fd)
                        .map(|f| f.0)
                        .collect();
                    let shape = matches_wrapper_pattern(&a.trace, "f") && fds == [0, 1, 2];
                    pass &= shape;
                    notes.push(format!(
                        "{agent}: {} (pattern {}, fds {fds:?})",
                        a.verdict, shape
                    ));
                } else {
                    notes.push(format!("{agent}: {}", a.verdict));
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                pass = false;
                notes.push(format!("{agent}: error {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(1);
    Outcome {
        pass,
        detail: format!(
            "{}; {elapsed:.2?} for all runs (each twice)",
            notes.join("; ")
        ),
    }
}

fn gen_world(rng: &mut ChaCha8Rng) -> FsWorld {
    let mut files = BTreeMap::new();
    for name in ["f", "g"] {
        if rng.gen_bool(0.8) {
            files.insert(
                name.to_string(),
                ["a", "b"].choose(rng).unwrap().to_string(),
            );
        }
    }
    let history = gen_history(rng, 3);
    FsWorld::with_history(files, history)
}

fn criterion_8() -> Outcome {
    let n = 300;
    let results: Vec<(bool, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed(808, i));
            let depth = rng.gen_range(3..=6);
            let e = TargetGen { rng: &mut rng }.exp(&TyEnv::empty(), &QType::Bool, depth, true);
            let w = gen_world(&mut rng);
            let Ok(run) = run_world(&e, &w, FUEL) else {
                return (false, false);
            };
            // Appends can produce contents outside the alphabet; those read
            // results are added to the universe for this run.
            let mut sigma: BTreeSet<String> = ["a".to_string(), "b".to_string()].into();
            let mut extended = false;
            for ev in run.trace.events() {
                if let Event::EvRead { res: Ok(s), .. } = ev {
                    extended |= sigma.insert(s.clone());
                }
            }
            let u = OutcomeUniverse::new(sigma);
            let member = match enum_behaviors(&e, &w.history, &u, FUEL) {
                Ok(behs) => behs.contains(&(run.trace.clone(), run.result.clone())),
                Err(_) => false,
            };
            (member, extended)
        })
        .collect();
    let members = results.iter().filter(|r| r.0).count();
    let extended = results.iter().filter(|r| r.1).count();
    Outcome {
        pass: members == n && n >= 200,
        detail: format!(
            "{members}/{n} concrete runs inside the enumerated set ({extended} runs read appended contents)"
        ),
    }
}

fn main() {
    let mut hy = Hygiene::default();
    let mut all = true;
    let mut run = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        report(n, name, &o, start.elapsed());
        all &= o.pass;
    };
    run(1, "rrhp differential suite", &mut || criterion_1(&mut hy));
    run(2, "fundamental property", &mut || criterion_2(&mut hy));
    run(3, "back-translation round-trip", &mut || {
        criterion_3(&mut hy)
    });
    run(4, "mutation sensitivity", &mut || criterion_4(&mut hy));
    run(5, "theta and behavior enumeration agree", &mut || {
        criterion_5(&mut hy)
    });
    let snapshot = hy.clone();
    run(6, "trace hygiene", &mut || criterion_6(&snapshot));
    run(7, "wrapper demo", &mut criterion_7);
    run(8, "world containment", &mut criterion_8);
    if !all {
        std::process::exit(1);
    }
}
