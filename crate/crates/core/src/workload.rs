//! Synthetic programs and streams: random instances for differential
//! testing, and the benchmark scenarios.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{self, Config, Engine, EngineError};
use crate::model::{GroundAtom, OutputStream, Stream, StreamBuilder, Time, Timeline, Value};
use crate::oracle::{self, Background, OracleError};
use crate::parser::{parse_program_with, Consts, ParseError, Program};

/// The cooling-system monitoring program; `n` is the window size.
pub const COOLING_PROGRAM: &str = "\
% Readings of at least 100 degrees mean steam, 1 to 99 liquid water.
@[T] steam(V) :- [n t] @[T] temp(V), V >= 100.
@[T] liquid(V) :- [n t] @[T] temp(V), V >= 1, V < 100.
@[T] isSteam :- [n t] @[T] steam(V).
@[T] isLiquid :- [n t] @[T] liquid(V).
alarm :- [n t] [] isSteam.
normal :- [n t] [] isLiquid.
freeze :- not alarm, not normal.
veryHot(T) :- [n t] @[T] steam(V), V >= 150.
veryCold(T) :- [n t] @[T] liquid(V), V = 1.
";

/// A program, a data stream and background data.
#[derive(Debug, Clone)]
pub struct Instance {
    pub source: String,
    pub program: Program,
    pub stream: Stream,
    pub background: Background,
}

/// Bounds for [`random_instance`].
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub rules: usize,
    pub body: usize,
    pub window: u64,
    pub timeline: u64,
    pub atoms: usize,
    pub constants: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            rules: 4,
            body: 3,
            window: 4,
            timeline: 12,
            atoms: 20,
            constants: 4,
        }
    }
}

const EXT: [(&str, usize); 3] = [("a", 1), ("b", 2), ("c", 0)];
const INT: [(&str, usize); 4] = [("p", 1), ("q", 2), ("r", 0), ("s", 1)];
const VARS: [&str; 3] = ["X", "Y", "Z"];
const CONSTANTS: [&str; 4] = ["1", "2", "k", "m"];

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    limits: Limits,
    constants: Vec<&'static str>,
}

impl Gen<'_> {
    fn term(&mut self, vars: &[&'static str]) -> String {
        if !vars.is_empty() && self.rng.gen_bool(0.8) {
            vars.choose(self.rng).unwrap().to_string()
        } else {
            self.constants.choose(self.rng).unwrap().to_string()
        }
    }

    fn atom(&mut self, pred: &str, arity: usize, vars: &[&'static str]) -> String {
        if arity == 0 {
            return pred.to_string();
        }
        let args: Vec<String> = (0..arity).map(|_| self.term(vars)).collect();
        format!("{pred}({})", args.join(","))
    }

    fn window(&mut self, tuple: bool) -> String {
        if tuple {
            format!("[{} #]", self.rng.gen_range(1..=self.limits.window))
        } else {
            format!("[{} t]", self.rng.gen_range(0..=self.limits.window))
        }
    }

    /// A literal over `pred`; `time` is the variable `@` may bind.
    fn literal(
        &mut self,
        pred: &str,
        arity: usize,
        extensional: bool,
        vars: &[&'static str],
        time: bool,
    ) -> String {
        let atom = self.atom(pred, arity, vars);
        let at = |g: &mut Self| {
            if time && g.rng.gen_bool(0.8) {
                "T".to_string()
            } else {
                g.rng.gen_range(0..g.limits.timeline).to_string()
            }
        };
        match self.rng.gen_range(0..6) {
            0 => atom,
            1 => format!("@[{}] {atom}", at(self)),
            k => {
                let tuple = extensional && self.rng.gen_bool(0.4);
                let w = self.window(tuple);
                match k {
                    2 | 3 => format!("{w} <> {atom}"),
                    4 => format!("{w} [] {atom}"),
                    _ => format!("{w} @[{}] {atom}", at(self)),
                }
            }
        }
    }

    fn rule(&mut self, head: usize) -> String {
        let body_len = self.rng.gen_range(1..=self.limits.body);
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        let mut time_bound = false;
        let mut bound: Vec<&'static str> = Vec::new();
        for i in 0..body_len {
            // Only earlier intensional predicates may be negated.
            let neg = i > 0 && self.rng.gen_bool(0.25);
            let (pred, arity, ext) = if self.rng.gen_bool(0.6) {
                let (p, a) = *EXT.choose(self.rng).unwrap();
                (p, a, true)
            } else {
                let top = if neg { head } else { INT.len() };
                if top == 0 {
                    let (p, a) = *EXT.choose(self.rng).unwrap();
                    (p, a, true)
                } else {
                    let (p, a) = INT[self.rng.gen_range(0..top)];
                    (p, a, false)
                }
            };
            if neg {
                let lit = self.literal(pred, arity, ext, &bound.clone(), time_bound);
                negative.push(format!("not {lit}"));
            } else {
                let lit = self.literal(pred, arity, ext, &VARS, true);
                for v in VARS {
                    if lit.contains(v) && !bound.contains(&v) {
                        bound.push(v);
                    }
                }
                time_bound |= lit.contains("@[T]");
                positive.push(lit);
            }
        }
        if !bound.is_empty() && body_len < self.limits.body && self.rng.gen_bool(0.2) {
            let v = *bound.choose(self.rng).unwrap();
            let op = *["<", "<=", ">", ">=", "=", "!="].choose(self.rng).unwrap();
            negative.push(format!("{v} {op} {}", self.rng.gen_range(0..3)));
        }
        let (hp, ha) = INT[head];
        let mut head_atom = self.atom(hp, ha, &bound);
        if time_bound && self.rng.gen_bool(0.3) {
            head_atom = format!("@[T] {head_atom}");
        } else if self.rng.gen_bool(0.05) {
            head_atom = format!(
                "@[{}] {head_atom}",
                self.rng.gen_range(0..self.limits.timeline)
            );
        }
        let mut body = positive;
        body.extend(negative);
        body.shuffle(self.rng);
        format!("{head_atom} :- {}.", body.join(", "))
    }
}

/// A random stratified program with a random stream. Deterministic in
/// `seed`.
pub fn random_instance(seed: u64, limits: Limits) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut constants = CONSTANTS.to_vec();
        constants.shuffle(&mut rng);
        constants.truncate(rng.gen_range(1..=limits.constants.min(CONSTANTS.len())));
        let mut gen = Gen {
            rng: &mut rng,
            limits,
            constants,
        };
        let n = gen.rng.gen_range(1..=limits.rules);
        let rules: Vec<String> = (0..n)
            .map(|_| {
                let head = gen.rng.gen_range(0..INT.len());
                gen.rule(head)
            })
            .collect();
        let source = rules.join("\n");
        let program = match parse_program_with(&source, &Consts::new()) {
            Ok(p) => p,
            // Unsafe or unstratified draws are discarded.
            Err(_) => continue,
        };

        let len = gen.rng.gen_range(1..=limits.timeline);
        let start = gen.rng.gen_range(0..3);
        let tl = Timeline::new(start, start + len - 1).expect("non-empty");
        let mut b = StreamBuilder::with_timeline(tl);
        let mut pairs: Vec<(Time, GroundAtom)> = (0..gen.rng.gen_range(0..=limits.atoms))
            .map(|_| {
                let (p, a) = *EXT.choose(gen.rng).unwrap();
                let args = (0..a)
                    .map(|_| constant(gen.constants.choose(gen.rng).unwrap()))
                    .collect();
                (gen.rng.gen_range(tl.points()), GroundAtom::new(p, args))
            })
            .collect();
        pairs.sort_by_key(|(t, _)| *t);
        for (t, a) in pairs {
            b.push(t, a).expect("ordered");
        }
        let mut background = Background::new();
        if gen.rng.gen_bool(0.2) {
            let (p, a) = *EXT.choose(gen.rng).unwrap();
            let args = (0..a)
                .map(|_| constant(gen.constants.choose(gen.rng).unwrap()))
                .collect();
            background.insert(GroundAtom::new(p, args));
        }
        return Instance {
            source,
            program,
            stream: b.build(),
            background,
        };
    }
}

fn constant(s: &str) -> Value {
    s.parse::<i64>()
        .map(Value::Int)
        .unwrap_or_else(|_| Value::sym(s))
}

/// Outcome of running both evaluators on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divergence {
    /// First tick where the outputs differ.
    Output {
        tick: Time,
        engine: Vec<GroundAtom>,
        oracle: Vec<GroundAtom>,
    },
    /// Expired entries left behind after the tick.
    Stale { tick: Time, entries: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Runs the incremental engine tick by tick against the oracle's output
/// stream and checks expiry after every tick.
pub fn differential(
    program: &Program,
    stream: &Stream,
    background: &Background,
    config: Config,
) -> Result<Option<Divergence>, CheckError> {
    let expected = oracle::output_stream_naive(program, stream, background)?;
    let tl = stream.timeline();
    let mut e = Engine::new(program, background.iter().cloned(), tl.start(), config)?;
    for t in tl.points() {
        let got = e.tick(t, stream.eval(t).cloned())?;
        let stale = e.stale_entries();
        if stale > 0 {
            return Ok(Some(Divergence::Stale {
                tick: t,
                entries: stale,
            }));
        }
        if let Some(d) = first_divergence(&expected, [(t, got)]) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Compares per-tick engine outputs against the oracle's output stream;
/// ticks the oracle lacks count as empty.
pub fn first_divergence(
    expected: &OutputStream,
    actual: impl IntoIterator<Item = (Time, BTreeSet<GroundAtom>)>,
) -> Option<Divergence> {
    let none = BTreeSet::new();
    actual.into_iter().find_map(|(t, got)| {
        let want = expected.get(&t).unwrap_or(&none);
        (got != *want).then(|| Divergence::Output {
            tick: t,
            engine: got.into_iter().collect(),
            oracle: want.iter().cloned().collect(),
        })
    })
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[GroundAtom]| {
            v.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Divergence::Output {
                tick,
                engine,
                oracle,
            } => {
                write!(
                    f,
                    "tick {tick}: incremental {{{}}} vs naive {{{}}}",
                    list(engine),
                    list(oracle)
                )
            }
            Divergence::Stale { tick, entries } => {
                write!(f, "tick {tick}: {entries} expired entries remain")
            }
        }
    }
}

/// Benchmark scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Diamond,
    Box,
    Join,
    Multirule,
    Cooling,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Diamond,
        Scenario::Box,
        Scenario::Join,
        Scenario::Multirule,
        Scenario::Cooling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Diamond => "diamond",
            Scenario::Box => "box",
            Scenario::Join => "join",
            Scenario::Multirule => "multirule",
            Scenario::Cooling => "cooling",
        }
    }

    /// Program text; `n` is the window size.
    pub fn source(self) -> &'static str {
        match self {
            Scenario::Diamond => "q(A,B) :- [n t] <> p(A,B).",
            Scenario::Box => "q(A,B) :- [n t] [] p(A,B).",
            Scenario::Join => "q(A,C) :- [n t] <> p(A,B), [n t] <> p(B,C).",
            Scenario::Multirule => {
                "q(A,B) :- [n t] <> p(A,B).\n\
                 @[T] r(A) :- [n t] @[T] p(A,B).\n\
                 s(A,B) :- q(A,B), [n t] <> r(B), not [n t] <> u(A)."
            }
            Scenario::Cooling => COOLING_PROGRAM,
        }
    }

    pub fn program(self, window: u64) -> Result<Program, ParseError> {
        let consts: Consts = [("n".to_string(), window as i64)].into();
        parse_program_with(self.source(), &consts)
    }

    /// Input atoms per tick for ticks `0..ticks`.
    pub fn stream(self, rate: usize, ticks: u64, seed: u64) -> Stream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = StreamBuilder::with_timeline(
            Timeline::new(0, ticks.saturating_sub(1)).expect("ordered"),
        );
        let mut next: i64 = 0;
        for t in 0..ticks {
            b.touch(t).expect("ordered");
            for i in 0..rate {
                let atom = match self {
                    Scenario::Diamond | Scenario::Multirule => {
                        next += 1;
                        GroundAtom::new("p", vec![Value::Int(next), Value::Int(next)])
                    }
                    Scenario::Box => {
                        GroundAtom::new("p", vec![Value::Int(i as i64), Value::Int(i as i64)])
                    }
                    Scenario::Join => {
                        next += 1;
                        GroundAtom::new("p", vec![Value::Int(next), Value::Int(next + 1)])
                    }
                    Scenario::Cooling => {
                        GroundAtom::new("temp", vec![Value::Int(rng.gen_range(0..=200))])
                    }
                };
                b.push(t, atom).expect("ordered");
            }
        }
        b.build()
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown scenario `{s}`"))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which evaluator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Incremental,
    Naive,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Incremental => "incremental",
            EngineKind::Naive => "naive",
        }
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "incremental" => Ok(EngineKind::Incremental),
            "naive" => Ok(EngineKind::Naive),
            _ => Err(format!("unknown engine `{s}`")),
        }
    }
}

/// One benchmark cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub total: Duration,
    pub atoms: usize,
    /// Rule firings; zero for the naive evaluator.
    pub firings: u64,
}

impl Measurement {
    pub fn per_atom_us(&self) -> f64 {
        self.total.as_secs_f64() * 1e6 / self.atoms.max(1) as f64
    }
}

/// Times reasoning over a prepared stream. Reading outputs is not timed
/// for the incremental engine; the naive evaluator computes them as part
/// of its work.
pub fn measure(
    kind: EngineKind,
    program: &Program,
    stream: &Stream,
    config: Config,
) -> Result<Measurement, CheckError> {
    let atoms = stream.tuple_size();
    match kind {
        EngineKind::Incremental => {
            let tl = stream.timeline();
            let mut e = Engine::new(program, [], tl.start(), config)?;
            let mut total = Duration::ZERO;
            for t in tl.points() {
                let batch: Vec<GroundAtom> = stream.eval(t).cloned().collect();
                let clock = Instant::now();
                e.step(t, batch)?;
                total += clock.elapsed();
            }
            Ok(Measurement {
                total,
                atoms,
                firings: e.telemetry().firings,
            })
        }
        EngineKind::Naive => {
            let clock = Instant::now();
            oracle::output_stream_naive(program, stream, &Background::new())?;
            Ok(Measurement {
                total: clock.elapsed(),
                atoms,
                firings: 0,
            })
        }
    }
}

/// Runs a scenario end to end with the incremental engine and returns the
/// output stream; used to cross-check scenarios against the oracle.
pub fn run_scenario(
    scenario: Scenario,
    window: u64,
    rate: usize,
    ticks: u64,
    seed: u64,
    config: Config,
) -> Result<OutputStream, CheckError> {
    let program = scenario.program(window).expect("scenario programs parse");
    let stream = scenario.stream(rate, ticks, seed);
    Ok(engine::eval(&program, &stream, [], config)?)
}
