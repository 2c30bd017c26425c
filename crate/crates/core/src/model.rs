//! Core value types: terms, atoms, streams, substitutions and the two
//! sliding window functions.
//!
//! A [`Stream`] shares its atom storage behind an `Arc`; windows of a stream
//! are cheap views that narrow the timeline and, for tuple windows, cut off
//! the earliest arrivals at the first time point of the window.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A logical time point.
pub type Time = u64;

/// Per time point intensional output of a program.
pub type OutputStream = BTreeMap<Time, std::collections::BTreeSet<GroundAtom>>;

/// Global arrival sequence number. The first atom of a stream has number 1.
pub type Seq = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("time point {t} lies outside the timeline {timeline}")]
    OutsideTimeline { t: Time, timeline: Timeline },
    #[error("tuple windows must have size n >= 1")]
    EmptyTupleWindow,
    #[error("invalid timeline [{start},{end}]: start exceeds end")]
    InvalidTimeline { start: Time, end: Time },
    #[error("time point {t} arrives after {prev}; data must arrive in order")]
    TickRegression { prev: Time, t: Time },
    #[error("atom {0} is not ground")]
    NonGround(String),
}

/// A constant: an integer or an interned-by-`Arc` symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Sym(Arc<str>),
}

impl Value {
    pub fn sym(s: &str) -> Self {
        Value::Sym(Arc::from(s))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            Value::Sym(_) => None,
        }
    }

    /// The value read as a time point, if it is a non-negative integer.
    pub fn as_time(&self) -> Option<Time> {
        self.as_int().and_then(|i| Time::try_from(i).ok())
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::sym(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Value),
    Var(Var),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(v) => v.fmt(f),
            Term::Var(v) => v.fmt(f),
        }
    }
}

/// How a predicate is populated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredicateKind {
    /// Fed by the input stream or background data.
    Extensional,
    /// Derived by rule heads.
    Intensional,
    /// An integer comparison, evaluated rather than stored.
    Builtin,
}

/// A (possibly non-ground) atom `p(t1,...,tk)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Arc<str>,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: Arc::from(predicate),
            args,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }

    pub fn to_ground(&self) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Const(v) => Some(v.clone()),
                Term::Var(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom {
            predicate: self.predicate.clone(),
            args: args.into(),
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.predicate, &self.args)
    }
}

/// A variable-free atom. Arguments are shared so that copies are cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: Arc<str>,
    pub args: Arc<[Value]>,
}

impl GroundAtom {
    pub fn new(predicate: &str, args: Vec<Value>) -> Self {
        GroundAtom {
            predicate: Arc::from(predicate),
            args: args.into(),
        }
    }

    pub fn to_atom(&self) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().cloned().map(Term::Const).collect(),
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_atom(f, &self.predicate, &self.args)
    }
}

fn write_atom<T: fmt::Display>(f: &mut fmt::Formatter<'_>, pred: &str, args: &[T]) -> fmt::Result {
    f.write_str(pred)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

/// A closed interval of time points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Timeline {
    start: Time,
    end: Time,
}

impl Timeline {
    pub fn new(start: Time, end: Time) -> Result<Self, ModelError> {
        if start > end {
            return Err(ModelError::InvalidTimeline { start, end });
        }
        Ok(Timeline { start, end })
    }

    pub fn start(&self) -> Time {
        self.start
    }

    pub fn end(&self) -> Time {
        self.end
    }

    pub fn contains(&self, t: Time) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn is_within(&self, other: &Timeline) -> bool {
        other.start <= self.start && self.end <= other.end
    }

    /// Number of time points.
    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> std::ops::RangeInclusive<Time> {
        self.start..=self.end
    }
}

impl fmt::Display for Timeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowKind {
    Time,
    Tuple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub size: u64,
}

impl WindowSpec {
    pub fn time(size: u64) -> Self {
        WindowSpec {
            kind: WindowKind::Time,
            size,
        }
    }

    pub fn tuple(size: u64) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyTupleWindow);
        }
        Ok(WindowSpec {
            kind: WindowKind::Tuple,
            size,
        })
    }

    /// Applies the window function to `stream` at `t`.
    pub fn apply(&self, stream: &Stream, t: Time) -> Result<Stream, ModelError> {
        match self.kind {
            WindowKind::Time => time_window(stream, t, self.size),
            WindowKind::Tuple => tuple_window(stream, t, self.size),
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WindowKind::Time => write!(f, "[{} t]", self.size),
            WindowKind::Tuple => write!(f, "[{} #]", self.size),
        }
    }
}

/// Variable bindings. Time variables are bound to `Value::Int`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    map: BTreeMap<Var, Value>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: Var, value: Value) -> Option<Value> {
        self.map.insert(var, value)
    }

    pub fn with(mut self, var: &str, value: impl Into<Value>) -> Self {
        self.bind(Var::new(var), value.into());
        self
    }

    pub fn get(&self, var: &Var) -> Option<&Value> {
        self.map.get(var)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Value)> {
        self.map.iter()
    }
}

impl FromIterator<(Var, Value)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Value)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}->{v}")?;
        }
        f.write_str("}")
    }
}

/// Things a substitution can be applied to.
pub trait Substitute {
    fn substitute(&self, sigma: &Substitution) -> Self;
}

impl Substitute for Term {
    fn substitute(&self, sigma: &Substitution) -> Self {
        match self {
            Term::Var(v) => sigma
                .get(v)
                .map(|c| Term::Const(c.clone()))
                .unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
        }
    }
}

impl Substitute for Atom {
    fn substitute(&self, sigma: &Substitution) -> Self {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|t| t.substitute(sigma)).collect(),
        }
    }
}

pub fn apply_substitution<F: Substitute>(formula: &F, sigma: &Substitution) -> F {
    formula.substitute(sigma)
}

type ByTime = BTreeMap<Time, Vec<(GroundAtom, Seq)>>;

#[derive(Debug, Default)]
struct StreamData {
    /// Atoms per time point in arrival order.
    by_time: ByTime,
    /// Per predicate, atoms per time point.
    by_pred: HashMap<Arc<str>, ByTime>,
    /// Occurrences of every atom, in time order.
    by_atom: HashMap<GroundAtom, Vec<(Time, Seq)>>,
}

/// A timeline plus an evaluation function mapping time points to atoms.
///
/// Every `(atom, time)` pair carries its arrival sequence number. A stream
/// selects the stored pairs whose time lies in `timeline` and whose
/// sequence number is at least `min_seq`; since sequence numbers grow with
/// time this only ever cuts atoms at the first time point.
#[derive(Debug, Clone)]
pub struct Stream {
    timeline: Timeline,
    data: Arc<StreamData>,
    min_seq: Seq,
}

impl Stream {
    pub fn empty(timeline: Timeline) -> Self {
        Stream {
            timeline,
            data: Arc::default(),
            min_seq: 0,
        }
    }

    pub fn timeline(&self) -> Timeline {
        self.timeline
    }

    fn selects(&self, t: Time, seq: Seq) -> bool {
        self.timeline.contains(t) && seq >= self.min_seq
    }

    /// Atoms at `t` in arrival order.
    pub fn eval(&self, t: Time) -> impl Iterator<Item = &GroundAtom> + '_ {
        let bucket = if self.timeline.contains(t) {
            self.data.by_time.get(&t).map(Vec::as_slice)
        } else {
            None
        };
        bucket
            .unwrap_or(&[])
            .iter()
            .filter(move |(_, s)| *s >= self.min_seq)
            .map(|(a, _)| a)
    }

    /// All selected `(time, atom, seq)` triples in arrival order.
    pub fn entries(&self) -> impl Iterator<Item = (Time, &GroundAtom, Seq)> + '_ {
        self.data
            .by_time
            .range(self.timeline.start..=self.timeline.end)
            .flat_map(|(t, v)| v.iter().map(move |(a, s)| (*t, a, *s)))
            .filter(move |(_, _, s)| *s >= self.min_seq)
    }

    pub fn contains(&self, atom: &GroundAtom, t: Time) -> bool {
        self.data
            .by_atom
            .get(atom)
            .is_some_and(|occ| occ.iter().any(|&(u, s)| u == t && self.selects(u, s)))
    }

    /// Time points at which `atom` occurs, ascending.
    pub fn times_of<'a>(&'a self, atom: &GroundAtom) -> impl Iterator<Item = Time> + 'a {
        self.data
            .by_atom
            .get(atom)
            .map(Vec::as_slice)
            .unwrap_or(&[])
            .iter()
            .filter(move |(u, s)| self.selects(*u, *s))
            .map(|(u, _)| *u)
    }

    /// Atoms with predicate `pred`, as `(time, atom)` in time order.
    pub fn atoms_of<'a>(&'a self, pred: &str) -> impl Iterator<Item = (Time, &'a GroundAtom)> + 'a {
        self.data
            .by_pred
            .get(pred)
            .into_iter()
            .flat_map(move |m| m.range(self.timeline.start..=self.timeline.end))
            .flat_map(|(t, v)| v.iter().map(move |(a, s)| (*t, a, *s)))
            .filter(move |(_, _, s)| *s >= self.min_seq)
            .map(|(t, a, _)| (t, a))
    }

    /// Number of `(atom, time)` pairs.
    pub fn tuple_size(&self) -> usize {
        self.entries().count()
    }

    /// Whether every pair of `self` is a pair of `other` and the timeline is
    /// contained in `other`'s.
    pub fn is_window_of(&self, other: &Stream) -> bool {
        self.timeline.is_within(&other.timeline)
            && self.entries().all(|(t, a, _)| other.contains(a, t))
    }

    /// Per time point atom sets; the representation used for equality.
    pub fn to_map(&self) -> BTreeMap<Time, Vec<GroundAtom>> {
        let mut out: BTreeMap<Time, Vec<GroundAtom>> = BTreeMap::new();
        for (t, a, _) in self.entries() {
            out.entry(t).or_default().push(a.clone());
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    /// Prefix `[start, t]` of the stream.
    pub fn prefix(&self, t: Time) -> Result<Stream, ModelError> {
        time_window(self, t, t - self.timeline.start.min(t))
    }

    fn check_point(&self, t: Time) -> Result<(), ModelError> {
        if self.timeline.contains(t) {
            Ok(())
        } else {
            Err(ModelError::OutsideTimeline {
                t,
                timeline: self.timeline,
            })
        }
    }
}

impl PartialEq for Stream {
    fn eq(&self, other: &Self) -> bool {
        self.timeline == other.timeline && self.to_map() == other.to_map()
    }
}

impl Eq for Stream {}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "@timeline {} {}", self.timeline.start, self.timeline.end)?;
        let mut cur: Option<Time> = None;
        for (t, a, _) in self.entries() {
            if cur != Some(t) {
                if cur.is_some() {
                    writeln!(f)?;
                }
                write!(f, "{t}")?;
                cur = Some(t);
            }
            write!(f, " {a}")?;
        }
        if cur.is_some() {
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sliding time-based window of size `n` at `t`: timeline
/// `[max(start, t-n), t]`.
pub fn time_window(stream: &Stream, t: Time, n: u64) -> Result<Stream, ModelError> {
    stream.check_point(t)?;
    let lo = stream.timeline.start.max(t.saturating_sub(n));
    Ok(Stream {
        timeline: Timeline { start: lo, end: t },
        data: stream.data.clone(),
        min_seq: stream.min_seq,
    })
}

/// Sliding tuple-based window of size `n` at `t`.
///
/// Keeps the last `n` arrivals up to `t`. At the earliest time point of the
/// window the latest-arriving atoms are kept.
pub fn tuple_window(stream: &Stream, t: Time, n: u64) -> Result<Stream, ModelError> {
    if n == 0 {
        return Err(ModelError::EmptyTupleWindow);
    }
    stream.check_point(t)?;
    let start = stream.timeline.start;
    let mut count: u64 = 0;
    for (&u, bucket) in stream.data.by_time.range(start..=t).rev() {
        let here: Vec<Seq> = bucket
            .iter()
            .map(|(_, s)| *s)
            .filter(|s| *s >= stream.min_seq)
            .collect();
        if here.is_empty() {
            continue;
        }
        count += here.len() as u64;
        if count >= n {
            // Number of atoms at `u` that fit into the window.
            let keep = (n - (count - here.len() as u64)) as usize;
            let min_seq = here[here.len() - keep];
            return Ok(Stream {
                timeline: Timeline { start: u, end: t },
                data: stream.data.clone(),
                min_seq: min_seq.max(stream.min_seq),
            });
        }
    }
    time_window(stream, t, t - start)
}

pub fn tuple_size(stream: &Stream) -> usize {
    stream.tuple_size()
}

/// Incrementally builds a [`Stream`], assigning arrival sequence numbers.
#[derive(Debug, Default)]
pub struct StreamBuilder {
    timeline: Option<Timeline>,
    data: StreamData,
    last: Option<Time>,
    next_seq: Seq,
}

impl StreamBuilder {
    pub fn new() -> Self {
        StreamBuilder {
            next_seq: 1,
            ..Default::default()
        }
    }

    pub fn with_timeline(timeline: Timeline) -> Self {
        StreamBuilder {
            timeline: Some(timeline),
            ..Self::new()
        }
    }

    /// Appends `atom` at `t`. Returns `false` when the atom was already
    /// present at `t`.
    pub fn push(&mut self, t: Time, atom: GroundAtom) -> Result<bool, ModelError> {
        if let Some(prev) = self.last {
            if t < prev {
                return Err(ModelError::TickRegression { prev, t });
            }
        }
        if let Some(tl) = self.timeline {
            if !tl.contains(t) {
                return Err(ModelError::OutsideTimeline { t, timeline: tl });
            }
        }
        self.last = Some(t);
        let occ = self.data.by_atom.entry(atom.clone()).or_default();
        if occ.last().is_some_and(|&(u, _)| u == t) {
            return Ok(false);
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        occ.push((t, seq));
        self.data
            .by_pred
            .entry(atom.predicate.clone())
            .or_default()
            .entry(t)
            .or_default()
            .push((atom.clone(), seq));
        self.data.by_time.entry(t).or_default().push((atom, seq));
        Ok(true)
    }

    /// Marks `t` as observed without adding atoms; widens an inferred
    /// timeline.
    pub fn touch(&mut self, t: Time) -> Result<(), ModelError> {
        if let Some(prev) = self.last {
            if t < prev {
                return Err(ModelError::TickRegression { prev, t });
            }
        }
        if let Some(tl) = self.timeline {
            if !tl.contains(t) {
                return Err(ModelError::OutsideTimeline { t, timeline: tl });
            }
        }
        self.last = Some(t);
        self.data.by_time.entry(t).or_default();
        Ok(())
    }

    pub fn build(self) -> Stream {
        let timeline = self.timeline.unwrap_or_else(|| {
            let lo = self.data.by_time.keys().next().copied().unwrap_or(0);
            let hi = self.data.by_time.keys().next_back().copied().unwrap_or(0);
            Timeline { start: lo, end: hi }
        });
        let mut data = self.data;
        data.by_time.retain(|_, v| !v.is_empty());
        Stream {
            timeline,
            data: Arc::new(data),
            min_seq: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ga(p: &str, args: &[&str]) -> GroundAtom {
        GroundAtom::new(p, args.iter().map(|a| Value::sym(a)).collect())
    }

    /// The stream of the running example: T=[35,42].
    fn fig1() -> Stream {
        let mut b = StreamBuilder::with_timeline(Timeline::new(35, 42).unwrap());
        b.push(36, ga("a", &["x1", "y"])).unwrap();
        b.push(38, ga("a", &["x2", "y"])).unwrap();
        b.push(38, ga("b", &["y", "z"])).unwrap();
        b.push(40, ga("a", &["x3", "y"])).unwrap();
        b.build()
    }

    #[test]
    fn time_window_fig1() {
        let s = fig1();
        let w = time_window(&s, 41, 3).unwrap();
        assert_eq!(w.timeline(), Timeline::new(38, 41).unwrap());
        let atoms: Vec<_> = w.entries().map(|(t, a, _)| (t, a.to_string())).collect();
        assert_eq!(
            atoms,
            vec![
                (38, "a(x2,y)".into()),
                (38, "b(y,z)".into()),
                (40, "a(x3,y)".into())
            ]
        );
    }

    #[test]
    fn time_window_size_zero_and_clamping() {
        let s = fig1();
        let w = time_window(&s, 38, 0).unwrap();
        assert_eq!(w.timeline(), Timeline::new(38, 38).unwrap());
        assert_eq!(w.tuple_size(), 2);
        let w = time_window(&s, 36, 100).unwrap();
        assert_eq!(w.timeline(), Timeline::new(35, 36).unwrap());
        assert_eq!(w.tuple_size(), 1);
    }

    #[test]
    fn window_outside_timeline_is_an_error() {
        let s = fig1();
        assert!(matches!(
            time_window(&s, 50, 2),
            Err(ModelError::OutsideTimeline { .. })
        ));
        assert!(matches!(
            tuple_window(&s, 34, 2),
            Err(ModelError::OutsideTimeline { .. })
        ));
        assert_eq!(
            tuple_window(&s, 40, 0).unwrap_err(),
            ModelError::EmptyTupleWindow
        );
    }

    #[test]
    fn tuple_window_fig1() {
        let s = fig1();
        let w3 = tuple_window(&s, 41, 3).unwrap();
        assert_eq!(w3, time_window(&s, 41, 3).unwrap());

        let w2 = tuple_window(&s, 41, 2).unwrap();
        assert_eq!(w2.timeline(), Timeline::new(38, 41).unwrap());
        let kept: Vec<_> = w2.entries().map(|(t, a, _)| (t, a.to_string())).collect();
        assert_eq!(kept, vec![(38, "b(y,z)".into()), (40, "a(x3,y)".into())]);

        let w5 = tuple_window(&s, 36, 5).unwrap();
        assert_eq!(w5, time_window(&s, 36, 1).unwrap());
        assert_eq!(w5.tuple_size(), 1);
    }

    /// Enumerates every window admitted by the tuple window definition for
    /// n=2 at t=41 and checks the deterministic choice is one of them.
    #[test]
    fn tuple_window_size_two_is_an_admissible_choice() {
        let s = fig1();
        let at38: Vec<GroundAtom> = s.eval(38).cloned().collect();
        let mut admissible = Vec::new();
        for drop in &at38 {
            let mut kept: Vec<String> = at38
                .iter()
                .filter(|a| *a != drop)
                .map(|a| a.to_string())
                .collect();
            kept.push("a(x3,y)".into());
            admissible.push(kept);
        }
        let w2 = tuple_window(&s, 41, 2).unwrap();
        let got: Vec<String> = w2.entries().map(|(_, a, _)| a.to_string()).collect();
        assert_eq!(admissible.len(), 2);
        assert!(admissible.contains(&got));
        // The earlier arrival is the one dropped.
        assert!(!got.contains(&"a(x2,y)".to_string()));
    }

    #[test]
    fn tuple_size_counts_pairs() {
        let s = fig1();
        assert_eq!(tuple_size(&s), 4);
        assert_eq!(tuple_size(&Stream::empty(Timeline::new(0, 3).unwrap())), 0);
        assert_eq!(time_window(&s, 41, 3).unwrap().tuple_size(), 3);
    }

    #[test]
    fn duplicate_atoms_at_same_tick_are_ignored() {
        let mut b = StreamBuilder::new();
        assert!(b.push(3, ga("a", &["y"])).unwrap());
        assert!(!b.push(3, ga("a", &["y"])).unwrap());
        assert!(b.push(4, ga("a", &["y"])).unwrap());
        let s = b.build();
        assert_eq!(s.tuple_size(), 2);
        assert_eq!(s.timeline(), Timeline::new(3, 4).unwrap());
    }

    #[test]
    fn builder_rejects_regression() {
        let mut b = StreamBuilder::new();
        b.push(5, ga("a", &[])).unwrap();
        assert_eq!(
            b.push(4, ga("a", &[])).unwrap_err(),
            ModelError::TickRegression { prev: 5, t: 4 }
        );
    }

    #[test]
    fn substitution_examples() {
        let a = Atom::new("a", vec![Term::var("X"), Term::var("Y")]);
        let s = Substitution::new().with("X", "x1").with("Y", "y");
        assert_eq!(apply_substitution(&a, &s).to_string(), "a(x1,y)");

        let q = Atom::new("q", vec![Term::var("X"), Term::var("Y"), Term::var("Z")]);
        let s = Substitution::new().with("X", "x2");
        let r = apply_substitution(&q, &s);
        assert_eq!(r.to_string(), "q(x2,Y,Z)");
        assert!(!r.is_ground());
    }
}
