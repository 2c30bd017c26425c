//! Incremental evaluation.
//!
//! The engine keeps every derived atom together with an annotation: the
//! interval of evaluation times during which it is guaranteed to hold.
//! Each tick it
//!
//! 1. appends the arriving atoms, numbering them by arrival,
//! 2. drops derived atoms whose horizon (time or arrival count) has passed,
//! 3. evaluates the strata bottom up, each to a fixpoint, firing a rule
//!    instance only when the intersection of its body annotations contains
//!    the current tick,
//! 4. reports the derived atoms holding at the tick.
//!
//! Body groundings whose annotation starts before the current tick were
//! already available at an earlier tick, so the heads they produce are
//! still stored. With `ssne` enabled the engine therefore only joins
//! combinations containing at least one grounding that starts now.
//!
//! ```
//! use lars_core::engine::{Config, Engine};
//! use lars_core::model::GroundAtom;
//! use lars_core::parser::parse_program;
//!
//! let p = parse_program("q(X) :- [2 t] <> p(X).").unwrap();
//! let mut e = Engine::new(&p, [], 0, Config::default()).unwrap();
//! let out = e.tick(0, [GroundAtom::new("p", vec!["a".into()])]).unwrap();
//! assert_eq!(out.len(), 1);
//! assert_eq!(e.tick(2, []).unwrap().len(), 1);
//! assert!(e.tick(3, []).unwrap().is_empty());
//! ```

mod annotation;
mod compile;
mod grd;
mod store;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

pub use annotation::{AnnotatedFormula, Annotation, CountRange, Horizon};
use compile::{compile_rule, CompiledRule, Slot, Slots, TimeSlot};
use grd::{Ctx, Delta, Instance, Mode};
use store::{DataStore, DerivedStore};

use crate::model::{GroundAtom, OutputStream, Seq, Stream, Substitute, Time, Value, WindowKind};
use crate::parser::{ExtendedAtom, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("tick {t} does not follow tick {prev}")]
    TickRegression { prev: Time, t: Time },
    #[error("tick {t} precedes the start of the timeline at {start}")]
    BeforeStart { t: Time, start: Time },
    #[error("input atom `{0}` has an intensional predicate")]
    IntensionalInput(String),
    #[error("data collection is unsound for programs with `@` outside windows")]
    CollectWithBareAt,
    #[error("`{0}` cannot be grounded")]
    NotGroundable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Only join body groundings containing one that starts at the current
    /// tick.
    pub ssne: bool,
    /// Drop input atoms that no window can see any more.
    pub gc: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            ssne: true,
            gc: false,
        }
    }
}

/// Counters accumulated over the run, plus current sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Telemetry {
    pub ticks: u64,
    /// Rule instances whose body held at the tick.
    pub firings: u64,
    /// Literal groundings computed.
    pub grd_calls: u64,
    /// Derived entries removed by expiry.
    pub expired: u64,
    /// Input atoms removed by collection.
    pub collected: u64,
    pub db_size: usize,
    pub data_size: usize,
}

/// A derived database entry, for inspection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DbEntry {
    pub atom: GroundAtom,
    /// `None`: holds at the evaluation time; `Some(u)`: holds at `u`.
    pub at: Option<Time>,
    pub ann: Annotation,
}

#[derive(Debug, Clone)]
pub struct Engine {
    strata: Vec<Vec<CompiledRule>>,
    program: Program,
    background: HashSet<GroundAtom>,
    bg_by_pred: HashMap<Arc<str>, Vec<GroundAtom>>,
    data: DataStore,
    derived: DerivedStore,
    /// Per extensional predicate, the largest time and tuple windows that
    /// look at it.
    reach: HashMap<Arc<str>, (Option<u64>, Option<u64>)>,
    start: Time,
    now: Option<Time>,
    gen: u64,
    config: Config,
    telemetry: Telemetry,
    /// Derived database size after each fixpoint round of the last tick.
    round_sizes: Vec<usize>,
}

type Head = (GroundAtom, Option<Time>, Annotation);

impl Engine {
    pub fn new(
        program: &Program,
        background: impl IntoIterator<Item = GroundAtom>,
        start: Time,
        config: Config,
    ) -> Result<Self, EngineError> {
        if config.gc && program.has_bare_at() {
            return Err(EngineError::CollectWithBareAt);
        }
        let mut strata: Vec<Vec<CompiledRule>> = vec![Vec::new(); program.strata.len()];
        for r in &program.rules {
            strata[r.stratum].push(compile_rule(r, program));
        }
        let background: HashSet<GroundAtom> = background.into_iter().collect();
        let mut bg_by_pred: HashMap<Arc<str>, Vec<GroundAtom>> = HashMap::new();
        for a in &background {
            bg_by_pred
                .entry(a.predicate.clone())
                .or_default()
                .push(a.clone());
        }
        for v in bg_by_pred.values_mut() {
            v.sort();
        }
        let mut reach: HashMap<Arc<str>, (Option<u64>, Option<u64>)> = HashMap::new();
        for e in program.rules.iter().flat_map(|r| r.body_atoms()) {
            let Some(atom) = e.atom() else { continue };
            let r = reach.entry(atom.predicate.clone()).or_default();
            match e {
                ExtendedAtom::Window { window, .. } if window.kind == WindowKind::Tuple => {
                    r.1 = r.1.max(Some(window.size))
                }
                ExtendedAtom::Window { window, .. } => r.0 = r.0.max(Some(window.size)),
                _ => r.0 = r.0.max(Some(0)),
            }
        }
        Ok(Engine {
            strata,
            program: program.clone(),
            background,
            bg_by_pred,
            data: DataStore::default(),
            derived: DerivedStore::default(),
            reach,
            start,
            now: None,
            gen: 0,
            config,
            telemetry: Telemetry::default(),
            round_sizes: Vec::new(),
        })
    }

    /// The last processed tick.
    pub fn now(&self) -> Option<Time> {
        self.now
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    /// Number of input atoms so far.
    pub fn arrivals(&self) -> Seq {
        self.data.arrivals()
    }

    pub fn telemetry(&self) -> Telemetry {
        Telemetry {
            db_size: self.derived.len(),
            data_size: self.data.len(),
            ..self.telemetry
        }
    }

    /// Advances to `t` and evaluates it with the given arrivals. Skipped
    /// time points are evaluated as empty ticks.
    pub fn step(
        &mut self,
        t: Time,
        arrivals: impl IntoIterator<Item = GroundAtom>,
    ) -> Result<(), EngineError> {
        let first = match self.now {
            Some(prev) if t <= prev => return Err(EngineError::TickRegression { prev, t }),
            Some(prev) => prev + 1,
            None if t < self.start => {
                return Err(EngineError::BeforeStart {
                    t,
                    start: self.start,
                })
            }
            None => self.start,
        };
        let arrivals: Vec<GroundAtom> = arrivals.into_iter().collect();
        if let Some(a) = arrivals
            .iter()
            .find(|a| self.program.is_intensional(&a.predicate))
        {
            return Err(EngineError::IntensionalInput(a.to_string()));
        }
        for u in first..t {
            self.process(u, Vec::new());
        }
        self.process(t, arrivals);
        Ok(())
    }

    /// [`step`](Engine::step), then the output at `t`.
    pub fn tick(
        &mut self,
        t: Time,
        arrivals: impl IntoIterator<Item = GroundAtom>,
    ) -> Result<BTreeSet<GroundAtom>, EngineError> {
        self.step(t, arrivals)?;
        Ok(self.output())
    }

    /// Intensional atoms holding at the last processed tick.
    pub fn output(&self) -> BTreeSet<GroundAtom> {
        match self.now {
            Some(t) => self.derived.at(t, self.data.arrivals()),
            None => BTreeSet::new(),
        }
    }

    /// Derived entries that are past their horizon. Always zero after a
    /// tick; exposed for checking.
    pub fn stale_entries(&self) -> usize {
        match self.now {
            Some(t) => self.derived.stale(t, self.data.arrivals()),
            None => 0,
        }
    }

    /// The derived database, sorted.
    pub fn database(&self) -> Vec<DbEntry> {
        self.derived
            .snapshot()
            .into_iter()
            .map(|e| DbEntry {
                atom: e.atom,
                at: e.at,
                ann: e.ann,
            })
            .collect()
    }

    /// Fixpoint rounds used by the last tick, summed over strata.
    pub fn last_rounds(&self) -> usize {
        self.round_sizes.len()
    }

    /// Derived database size after each round of the last tick.
    pub fn last_round_sizes(&self) -> &[usize] {
        &self.round_sizes
    }

    /// Annotated groundings of a positive extended atom at the last tick.
    pub fn grd(&self, e: &ExtendedAtom) -> Result<Vec<AnnotatedFormula>, EngineError> {
        if e.is_negated() || e.atom().is_none() {
            return Err(EngineError::NotGroundable(e.to_string()));
        }
        let Some(t) = self.now else {
            return Ok(Vec::new());
        };
        let mut slots = Slots::default();
        let lit = slots.literal(e, &self.program);
        let mut scratch = vec![None; slots.names.len()];
        let ctx = self.ctx(t);
        let mut out: Vec<AnnotatedFormula> = ctx
            .instances(&lit, Mode::All, &mut scratch)
            .into_iter()
            .map(|inst| {
                let sigma = lit
                    .vars
                    .iter()
                    .zip(inst.values)
                    .map(|(&v, val)| (slots.names[v].clone(), val))
                    .collect();
                AnnotatedFormula {
                    formula: e.substitute(&sigma),
                    sigma,
                    ann: inst.ann,
                }
            })
            .collect();
        out.sort_by_cached_key(|f| (f.ann, f.formula.to_string()));
        Ok(out)
    }

    fn ctx(&self, t: Time) -> Ctx<'_> {
        Ctx {
            data: &self.data,
            derived: &self.derived,
            background: &self.background,
            bg_by_pred: &self.bg_by_pred,
            start: self.start,
            t,
            k: self.data.arrivals(),
        }
    }

    fn process(&mut self, t: Time, arrivals: Vec<GroundAtom>) {
        self.now = Some(t);
        self.telemetry.ticks += 1;
        self.derived.begin_tick();
        for a in arrivals {
            self.data.push(t, a);
        }
        let k = self.data.arrivals();
        self.telemetry.expired += self.derived.expire(t, k) as u64;
        if self.config.gc {
            let reach = &self.reach;
            self.telemetry.collected += self.data.collect(|pred, u, seq| {
                let (nt, nc) = reach.get(pred).copied().unwrap_or_default();
                nt.is_some_and(|n| u + n >= t) || nc.is_some_and(|n| seq + n > k)
            }) as u64;
        }
        self.round_sizes.clear();
        for s in 0..self.strata.len() {
            self.saturate(s, t);
        }
    }

    /// Evaluates stratum `s` at `t` to a fixpoint.
    fn saturate(&mut self, s: usize, t: Time) {
        let mut delta = Delta::Tick;
        let mut changed: Option<HashSet<Arc<str>>> = None;
        loop {
            let mut heads: Vec<Head> = Vec::new();
            for r in 0..self.strata[s].len() {
                let rule = &self.strata[s][r];
                if let Some(preds) = &changed {
                    if !rule.positive.iter().any(|l| preds.contains(&l.pred)) {
                        continue;
                    }
                }
                let (firings, grd_calls) = {
                    let ctx = self.ctx(t);
                    let full = !self.config.ssne || rule.full;
                    let mut stats = (0, 0);
                    heads.extend(evaluate(
                        &ctx,
                        rule,
                        if full { None } else { Some(delta) },
                        &mut stats,
                    ));
                    stats
                };
                self.telemetry.firings += firings;
                self.telemetry.grd_calls += grd_calls;
            }
            self.gen += 1;
            let mut preds = HashSet::new();
            for (atom, at, ann) in heads {
                let pred = atom.predicate.clone();
                if self.derived.insert(atom, at, ann, self.gen) {
                    preds.insert(pred);
                }
            }
            self.round_sizes.push(self.derived.len());
            if preds.is_empty() {
                break;
            }
            delta = Delta::Gen(self.gen);
            changed = Some(preds);
        }
    }
}

/// Joins the groundings of a rule body and returns the heads of the
/// instances that hold at the tick. With `delta`, only instances with at
/// least one new grounding are produced.
fn evaluate(
    ctx: &Ctx<'_>,
    rule: &CompiledRule,
    delta: Option<Delta>,
    stats: &mut (u64, u64),
) -> Vec<Head> {
    let n = rule.positive.len();
    let mut scratch = vec![None; rule.vars.len()];
    let mut grounded = |i: usize, mode: Mode, stats: &mut (u64, u64)| {
        stats.1 += 1;
        ctx.instances(&rule.positive[i], mode, &mut scratch)
    };
    let mut bindings: Vec<(Vec<Option<Value>>, Annotation)> = Vec::new();
    let empty = || (vec![None; rule.vars.len()], Annotation::from(0));
    match delta {
        None => {
            let lists: Vec<Vec<Instance>> = (0..n).map(|i| grounded(i, Mode::All, stats)).collect();
            let order: Vec<usize> = (0..n).collect();
            let refs: Vec<&[Instance]> = lists.iter().map(Vec::as_slice).collect();
            bindings = join(ctx, rule, &order, &refs, vec![empty()]);
        }
        Some(d) => {
            let news: Vec<Vec<Instance>> =
                (0..n).map(|i| grounded(i, Mode::New(d), stats)).collect();
            if news.iter().any(|v| !v.is_empty()) {
                let all: Vec<Vec<Instance>> = (0..n)
                    .map(|i| {
                        if n == 1 {
                            Vec::new()
                        } else {
                            grounded(i, Mode::All, stats)
                        }
                    })
                    .collect();
                let old: Vec<Vec<Instance>> = all
                    .iter()
                    .map(|v| v.iter().filter(|x| !d.matches(x, ctx.t)).cloned().collect())
                    .collect();
                for j in 0..n {
                    if news[j].is_empty() {
                        continue;
                    }
                    // Earlier literals old, literal j new, later ones any.
                    let mut order = vec![j];
                    order.extend((0..n).filter(|&i| i != j));
                    let refs: Vec<&[Instance]> = order
                        .iter()
                        .map(|&i| match i.cmp(&j) {
                            std::cmp::Ordering::Less => old[i].as_slice(),
                            std::cmp::Ordering::Equal => news[i].as_slice(),
                            std::cmp::Ordering::Greater => all[i].as_slice(),
                        })
                        .collect();
                    bindings.extend(join(ctx, rule, &order, &refs, vec![empty()]));
                }
            }
        }
    }
    if n == 0 {
        bindings = vec![empty()];
        bindings[0].1 = Annotation::point(ctx.t);
    }

    let mut heads = Vec::new();
    for (binding, mut ann) in bindings {
        if !rule.compare.iter().all(|c| compare(c, &binding)) {
            continue;
        }
        if !rule.negative.is_empty() {
            let sigma = rule.substitution(&binding);
            if !rule
                .negative
                .iter()
                .all(|e| ctx.snapshot_holds(&e.substitute(&sigma)).unwrap_or(false))
            {
                continue;
            }
            ann = ann.intersect(&Annotation::point(ctx.t));
        }
        let args: Vec<Value> = rule
            .head
            .args
            .iter()
            .map(|s| value(s, &binding).clone())
            .collect();
        let atom = GroundAtom::new(&rule.head.pred, args);
        let at = match rule.head.time {
            None => None,
            Some(ts) => {
                let u = match ts {
                    TimeSlot::Const(u) => u,
                    TimeSlot::Var(i) => match binding[i].as_ref().and_then(Value::as_time) {
                        Some(u) => u,
                        None => continue,
                    },
                };
                if u < ctx.start || u > ctx.t {
                    continue;
                }
                ann = ann.intersect(&Annotation::from(u));
                Some(u)
            }
        };
        if !ann.holds_at(ctx.t, ctx.k) {
            continue;
        }
        stats.0 += 1;
        heads.push((atom, at, ann));
    }
    heads
}

/// Hash join of the literal groundings in `order`, starting from `seed`.
fn join(
    ctx: &Ctx<'_>,
    rule: &CompiledRule,
    order: &[usize],
    lists: &[&[Instance]],
    seed: Vec<(Vec<Option<Value>>, Annotation)>,
) -> Vec<(Vec<Option<Value>>, Annotation)> {
    let mut partial = seed;
    let mut bound = vec![false; rule.vars.len()];
    for (&i, list) in order.iter().zip(lists) {
        if partial.is_empty() {
            break;
        }
        let lit = &rule.positive[i];
        let key_pos: Vec<usize> = (0..lit.vars.len())
            .filter(|&p| bound[lit.vars[p]])
            .collect();
        let mut index: HashMap<Vec<&Value>, Vec<&Instance>> = HashMap::new();
        for inst in list.iter() {
            index
                .entry(key_pos.iter().map(|&p| &inst.values[p]).collect())
                .or_default()
                .push(inst);
        }
        let mut next = Vec::new();
        for (binding, ann) in &partial {
            let key: Vec<&Value> = key_pos
                .iter()
                .map(|&p| binding[lit.vars[p]].as_ref().expect("bound"))
                .collect();
            for inst in index.get(&key).into_iter().flatten() {
                let a = ann.intersect(&inst.ann);
                if !a.holds_at(ctx.t, ctx.k) {
                    continue;
                }
                let mut b = binding.clone();
                for (p, &v) in lit.vars.iter().enumerate() {
                    b[v] = Some(inst.values[p].clone());
                }
                next.push((b, a));
            }
        }
        for &v in &lit.vars {
            bound[v] = true;
        }
        partial = next;
    }
    partial
}

fn value<'a>(s: &'a Slot, binding: &'a [Option<Value>]) -> &'a Value {
    match s {
        Slot::Const(c) => c,
        Slot::Var(i) => binding[*i]
            .as_ref()
            .expect("safe rules bind every variable"),
    }
}

fn compare(c: &compile::Compare, binding: &[Option<Value>]) -> bool {
    match (
        value(&c.lhs, binding).as_int(),
        value(&c.rhs, binding).as_int(),
    ) {
        (Some(l), Some(r)) => c.op.eval(l, r),
        _ => false,
    }
}

/// Evaluates `program` over `stream` tick by tick.
pub fn eval(
    program: &Program,
    stream: &Stream,
    background: impl IntoIterator<Item = GroundAtom>,
    config: Config,
) -> Result<OutputStream, EngineError> {
    let tl = stream.timeline();
    let mut engine = Engine::new(program, background, tl.start(), config)?;
    let mut out = OutputStream::new();
    for t in tl.points() {
        out.insert(t, engine.tick(t, stream.eval(t).cloned())?);
    }
    Ok(out)
}
