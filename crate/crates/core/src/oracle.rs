//! Direct evaluation of the entailment relation, answer streams and output
//! streams, recomputing everything from scratch at every time point.
//!
//! This is the reference the incremental engine is checked against, and the
//! naive baseline it is benchmarked against. Window functions are
//! re-applied on every call; nothing is cached between calls.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::model::{
    GroundAtom, ModelError, OutputStream, Stream, StreamBuilder, Substitute, Substitution, Term,
    Time, Timeline, Value, WindowSpec,
};
use crate::parser::{CmpOp, ExtendedAtom, Head, Modality, Program, Rule, TimeTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("formula `{0}` is not ground")]
    NonGround(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Static atoms that hold at every time point.
pub type Background = HashSet<GroundAtom>;

/// Intensional atoms placed on the timeline by rule heads.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Derived {
    by_pred: HashMap<Arc<str>, HashMap<GroundAtom, BTreeSet<Time>>>,
}

impl Derived {
    /// Records `atom` at `t`; returns whether it was new.
    pub fn insert(&mut self, atom: GroundAtom, t: Time) -> bool {
        self.by_pred
            .entry(atom.predicate.clone())
            .or_default()
            .entry(atom)
            .or_default()
            .insert(t)
    }

    /// Drops `atom` at `t`; returns whether it was present.
    pub fn remove(&mut self, atom: &GroundAtom, t: Time) -> bool {
        self.by_pred
            .get_mut(&atom.predicate)
            .and_then(|m| m.get_mut(atom))
            .is_some_and(|ts| ts.remove(&t))
    }

    pub fn holds_at(&self, atom: &GroundAtom, t: Time) -> bool {
        self.by_pred
            .get(&atom.predicate)
            .and_then(|m| m.get(atom))
            .is_some_and(|ts| ts.contains(&t))
    }

    fn times<'a>(&'a self, atom: &GroundAtom, tl: Timeline) -> impl Iterator<Item = Time> + 'a {
        self.by_pred
            .get(&atom.predicate)
            .and_then(|m| m.get(atom))
            .into_iter()
            .flat_map(move |ts| ts.range(tl.start()..=tl.end()).copied())
    }

    fn of_pred<'a>(
        &'a self,
        pred: &str,
        tl: Timeline,
    ) -> impl Iterator<Item = (Time, &'a GroundAtom)> + 'a {
        self.by_pred.get(pred).into_iter().flat_map(move |m| {
            m.iter()
                .flat_map(move |(a, ts)| ts.range(tl.start()..=tl.end()).map(move |t| (*t, a)))
        })
    }

    /// All `(time, atom)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Time, &GroundAtom)> {
        self.by_pred
            .values()
            .flat_map(|m| m.iter().flat_map(|(a, ts)| ts.iter().map(move |t| (*t, a))))
    }

    pub fn len(&self) -> usize {
        self.by_pred
            .values()
            .flat_map(|m| m.values())
            .map(BTreeSet::len)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Atoms at `t`.
    pub fn at(&self, t: Time) -> BTreeSet<GroundAtom> {
        self.iter()
            .filter(|(u, _)| *u == t)
            .map(|(_, a)| a.clone())
            .collect()
    }
}

/// A structure: data stream (already windowed where applicable), the
/// derived intensional atoms and background data.
///
/// Derived atoms are visible only at time points inside the stream's
/// timeline.
#[derive(Debug, Clone)]
pub struct Structure<'a> {
    pub stream: Stream,
    pub derived: &'a Derived,
    pub background: &'a Background,
}

impl<'a> Structure<'a> {
    pub fn new(stream: Stream, derived: &'a Derived, background: &'a Background) -> Self {
        Structure {
            stream,
            derived,
            background,
        }
    }

    /// The structure seen through window `w` at `t`.
    pub fn window(&self, w: WindowSpec, t: Time) -> Result<Structure<'a>, OracleError> {
        Ok(Structure {
            stream: w.apply(&self.stream, t)?,
            derived: self.derived,
            background: self.background,
        })
    }

    pub fn timeline(&self) -> Timeline {
        self.stream.timeline()
    }

    /// `M, u |= a` for an atom.
    pub fn atom_holds(&self, a: &GroundAtom, u: Time) -> bool {
        self.background.contains(a)
            || self.stream.contains(a, u)
            || (self.timeline().contains(u) && self.derived.holds_at(a, u))
    }

    fn exists(&self, a: &GroundAtom) -> bool {
        self.background.contains(a)
            || self.stream.times_of(a).next().is_some()
            || self.derived.times(a, self.timeline()).next().is_some()
    }
}

/// A ground formula of the fragment: a literal, a quantified literal, or a
/// window over a quantified literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom {
        atom: GroundAtom,
        negated: bool,
    },
    Diamond {
        atom: GroundAtom,
        negated: bool,
    },
    Box {
        atom: GroundAtom,
        negated: bool,
    },
    At {
        time: Time,
        atom: GroundAtom,
        negated: bool,
    },
    Window(WindowSpec, Box<Formula>),
    Compare {
        op: CmpOp,
        lhs: Value,
        rhs: Value,
    },
}

impl Formula {
    /// Converts a ground extended atom.
    pub fn from_extended(e: &ExtendedAtom) -> Result<Formula, OracleError> {
        let non_ground = || OracleError::NonGround(e.to_string());
        let ground = |a: &crate::model::Atom| a.to_ground().ok_or_else(non_ground);
        let time = |t: &TimeTerm| match t {
            TimeTerm::Const(u) => Ok(*u),
            TimeTerm::Var(_) => Err(non_ground()),
        };
        Ok(match e {
            ExtendedAtom::Plain { atom, negated } => Formula::Atom {
                atom: ground(atom)?,
                negated: *negated,
            },
            ExtendedAtom::At {
                time: t,
                atom,
                negated,
            } => Formula::At {
                time: time(t)?,
                atom: ground(atom)?,
                negated: *negated,
            },
            ExtendedAtom::Window {
                window,
                modality,
                atom,
                negated,
            } => {
                let (atom, negated) = (ground(atom)?, *negated);
                let inner = match modality {
                    Modality::Diamond => Formula::Diamond { atom, negated },
                    Modality::Box => Formula::Box { atom, negated },
                    Modality::At(t) => Formula::At {
                        time: time(t)?,
                        atom,
                        negated,
                    },
                };
                Formula::Window(*window, Box::new(inner))
            }
            ExtendedAtom::Compare(c) => {
                let val = |t: &Term| match t {
                    Term::Const(v) => Ok(v.clone()),
                    Term::Var(_) => Err(non_ground()),
                };
                Formula::Compare {
                    op: c.op,
                    lhs: val(&c.lhs)?,
                    rhs: val(&c.rhs)?,
                }
            }
        })
    }
}

/// `M, t |= phi`.
pub fn holds(m: &Structure<'_>, t: Time, phi: &Formula) -> Result<bool, OracleError> {
    let tl = m.timeline();
    if !tl.contains(t) {
        return Err(ModelError::OutsideTimeline { t, timeline: tl }.into());
    }
    Ok(match phi {
        Formula::Atom { atom, negated } => m.atom_holds(atom, t) != *negated,
        Formula::Diamond {
            atom,
            negated: false,
        } => m.exists(atom),
        Formula::Diamond {
            atom,
            negated: true,
        } => tl.points().any(|u| !m.atom_holds(atom, u)),
        Formula::Box { atom, negated } => tl.points().all(|u| m.atom_holds(atom, u) != *negated),
        Formula::At {
            time,
            atom,
            negated,
        } => tl.contains(*time) && m.atom_holds(atom, *time) != *negated,
        Formula::Window(w, inner) => holds(&m.window(*w, t)?, t, inner)?,
        Formula::Compare { op, lhs, rhs } => match (lhs, rhs) {
            (Value::Int(l), Value::Int(r)) => op.eval(*l, *r),
            _ => false,
        },
    })
}

/// Convenience: `holds` on a ground extended atom.
pub fn holds_extended(m: &Structure<'_>, t: Time, e: &ExtendedAtom) -> Result<bool, OracleError> {
    holds(m, t, &Formula::from_extended(e)?)
}

/// The answer stream of `program` for `data` at `t`: data plus derived
/// intensional atoms.
#[derive(Debug, Clone)]
pub struct AnswerStream {
    pub data: Stream,
    pub derived: Derived,
}

impl AnswerStream {
    /// Materializes data and derived atoms as one stream.
    pub fn to_stream(&self) -> Stream {
        let tl = self.data.timeline();
        let mut b = StreamBuilder::with_timeline(tl);
        for t in tl.points() {
            for a in self.data.eval(t) {
                b.push(t, a.clone()).expect("time order");
            }
            for a in self.derived.at(t) {
                b.push(t, a).expect("time order");
            }
        }
        b.build()
    }
}

/// Computes the answer stream at `t` stratum by stratum: each stratum is
/// saturated by grounding its rules against the current interpretation and
/// adding the heads of rules whose bodies hold at `t`.
pub fn answer_stream(
    program: &Program,
    data: &Stream,
    background: &Background,
    t: Time,
) -> Result<AnswerStream, OracleError> {
    answer_stream_traced(program, data, background, t, |_, _| {})
}

/// [`answer_stream`], calling `on_round` with the stratum index and the
/// derived atoms after every fixpoint iteration.
pub fn answer_stream_traced(
    program: &Program,
    data: &Stream,
    background: &Background,
    t: Time,
    mut on_round: impl FnMut(usize, &Derived),
) -> Result<AnswerStream, OracleError> {
    let tl = data.timeline();
    if !tl.contains(t) {
        return Err(ModelError::OutsideTimeline { t, timeline: tl }.into());
    }
    let mut derived = Derived::default();
    for (s, rules) in program.rules_by_stratum().into_iter().enumerate() {
        let recursive = rules.iter().any(|r| {
            r.body_atoms()
                .filter_map(ExtendedAtom::atom)
                .any(|a| program.strata[s].contains(&a.predicate))
        });
        loop {
            let mut fresh = Vec::new();
            {
                let m = Structure::new(data.clone(), &derived, background);
                for rule in &rules {
                    for sigma in candidate_substitutions(&m, rule, t)? {
                        if body_holds(&m, rule, &sigma, t)? {
                            if let Some(pair) = head_instance(&rule.head, &sigma, t, tl) {
                                fresh.push(pair);
                            }
                        }
                    }
                }
            }
            let mut changed = false;
            for (a, u) in fresh {
                changed |= derived.insert(a, u);
            }
            on_round(s, &derived);
            // Without recursion one pass reaches the fixpoint.
            if !changed || !recursive {
                break;
            }
        }
    }
    Ok(AnswerStream {
        data: data.clone(),
        derived,
    })
}

/// Whether `derived` satisfies every rule of `program` at `t`: each rule
/// instance whose body holds has its head in `derived`.
pub fn is_model(
    program: &Program,
    data: &Stream,
    background: &Background,
    derived: &Derived,
    t: Time,
) -> Result<bool, OracleError> {
    let tl = data.timeline();
    let m = Structure::new(data.clone(), derived, background);
    for rule in &program.rules {
        for sigma in candidate_substitutions(&m, rule, t)? {
            if body_holds(&m, rule, &sigma, t)? {
                if let Some((a, u)) = head_instance(&rule.head, &sigma, t, tl) {
                    if !derived.holds_at(&a, u) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Intensional atoms holding at `t` in the answer stream at `t`.
pub fn output(
    program: &Program,
    data: &Stream,
    background: &Background,
    t: Time,
) -> Result<BTreeSet<GroundAtom>, OracleError> {
    let ans = answer_stream(program, data, background, t)?;
    Ok(ans
        .derived
        .at(t)
        .into_iter()
        .filter(|a| program.is_intensional(&a.predicate))
        .collect())
}

/// The output stream: for every time point `t`, the output of the program
/// for the prefix of `data` ending at `t`.
pub fn output_stream_naive(
    program: &Program,
    data: &Stream,
    background: &Background,
) -> Result<OutputStream, OracleError> {
    let mut out = OutputStream::new();
    for t in data.timeline().points() {
        let prefix = data.prefix(t)?;
        out.insert(t, output(program, &prefix, background, t)?);
    }
    Ok(out)
}

fn body_holds(
    m: &Structure<'_>,
    rule: &Rule,
    sigma: &Substitution,
    t: Time,
) -> Result<bool, OracleError> {
    for e in rule.body_atoms() {
        if !holds_extended(m, t, &e.substitute(sigma))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn head_instance(
    head: &Head,
    sigma: &Substitution,
    t: Time,
    tl: Timeline,
) -> Option<(GroundAtom, Time)> {
    match head.substitute(sigma) {
        Head::Atom(a) => Some((a.to_ground()?, t)),
        Head::At(TimeTerm::Const(u), a) if tl.contains(u) && u <= t => Some((a.to_ground()?, u)),
        Head::At(..) => None,
    }
}

/// Substitutions for the rule's variables drawn from atoms that could make
/// the positive body atoms true. Every satisfying ground instance is among
/// them because safe rules bind all variables positively.
fn candidate_substitutions(
    m: &Structure<'_>,
    rule: &Rule,
    t: Time,
) -> Result<Vec<Substitution>, OracleError> {
    let positives: Vec<&ExtendedAtom> = rule.positive().collect();
    let mut scopes = Vec::with_capacity(positives.len());
    for e in &positives {
        scopes.push(literal_scope(m, e, t)?);
    }
    let mut out: HashSet<Substitution> = HashSet::new();
    let mut stack = vec![(0usize, Substitution::new())];
    while let Some((i, sigma)) = stack.pop() {
        if i == positives.len() {
            out.insert(sigma);
            continue;
        }
        let e = positives[i];
        let atom = e.atom().expect("positive literals carry atoms");
        for (u, g) in candidates(m, &scopes[i], &atom.predicate) {
            let Some(mut s) = unify(atom, &g, &sigma) else {
                continue;
            };
            if let Some(tt) = e.time_term() {
                match tt {
                    TimeTerm::Const(c) if *c != u => continue,
                    TimeTerm::Const(_) => {}
                    TimeTerm::Var(v) => match s.get(v) {
                        Some(bound) if bound != &Value::Int(u as i64) => continue,
                        Some(_) => {}
                        None => {
                            s.bind(v.clone(), Value::Int(u as i64));
                        }
                    },
                }
            }
            stack.push((i + 1, s));
        }
    }
    Ok(out.into_iter().collect())
}

/// The part of the interpretation a positive literal can look at.
fn literal_scope(m: &Structure<'_>, e: &ExtendedAtom, t: Time) -> Result<Stream, OracleError> {
    Ok(match e {
        ExtendedAtom::Plain { .. } => WindowSpec::time(0).apply(&m.stream, t)?,
        ExtendedAtom::Window { window, .. } => window.apply(&m.stream, t)?,
        ExtendedAtom::At { .. } | ExtendedAtom::Compare(_) => m.stream.clone(),
    })
}

fn candidates(m: &Structure<'_>, scope: &Stream, pred: &str) -> Vec<(Time, GroundAtom)> {
    let tl = scope.timeline();
    let mut out: Vec<(Time, GroundAtom)> =
        scope.atoms_of(pred).map(|(u, a)| (u, a.clone())).collect();
    out.extend(m.derived.of_pred(pred, tl).map(|(u, a)| (u, a.clone())));
    for b in m.background.iter().filter(|b| &*b.predicate == pred) {
        out.extend(tl.points().map(|u| (u, b.clone())));
    }
    out
}

fn unify(
    pattern: &crate::model::Atom,
    g: &GroundAtom,
    sigma: &Substitution,
) -> Option<Substitution> {
    if pattern.args.len() != g.args.len() {
        return None;
    }
    let mut s = sigma.clone();
    for (p, v) in pattern.args.iter().zip(g.args.iter()) {
        match p {
            Term::Const(c) if c != v => return None,
            Term::Const(_) => {}
            Term::Var(x) => match s.get(x) {
                Some(b) if b != v => return None,
                Some(_) => {}
                None => {
                    s.bind(x.clone(), v.clone());
                }
            },
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, parse_stream};

    const FIG1: &str = "@timeline 35 42\n36 a(x1,y)\n38 a(x2,y) b(y,z)\n40 a(x3,y)\n";
    const JOIN: &str = "q(X,Y,Z) :- [3 t] <> a(X,Y), [3 #] <> b(Y,Z).";

    fn ga(p: &str, args: &[&str]) -> GroundAtom {
        GroundAtom::new(p, args.iter().map(|a| Value::sym(a)).collect())
    }

    fn set(atoms: &[&str]) -> BTreeSet<String> {
        atoms.iter().map(|s| s.to_string()).collect()
    }

    fn strings(s: &BTreeSet<GroundAtom>) -> BTreeSet<String> {
        s.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn entailment_examples() {
        let d = parse_stream(FIG1).unwrap();
        let (derived, bg) = (Derived::default(), Background::new());
        let m = Structure::new(d, &derived, &bg);
        let dia = |w: WindowSpec, a: GroundAtom| {
            Formula::Window(
                w,
                Box::new(Formula::Diamond {
                    atom: a,
                    negated: false,
                }),
            )
        };
        assert!(!holds(&m, 41, &dia(WindowSpec::time(3), ga("a", &["x1", "y"]))).unwrap());
        assert!(holds(
            &m,
            41,
            &dia(WindowSpec::tuple(3).unwrap(), ga("b", &["y", "z"]))
        )
        .unwrap());
        assert!(holds(&m, 41, &dia(WindowSpec::time(3), ga("a", &["x2", "y"]))).unwrap());

        let s = parse_stream("@timeline 0 7\n5 a(y)\n6 a(y)\n7 a(y)").unwrap();
        let m = Structure::new(s, &derived, &bg);
        let boxed = Formula::Window(
            WindowSpec::time(2),
            Box::new(Formula::Box {
                atom: ga("a", &["y"]),
                negated: false,
            }),
        );
        assert!(holds(&m, 7, &boxed).unwrap());
        let boxed3 = Formula::Window(
            WindowSpec::time(3),
            Box::new(Formula::Box {
                atom: ga("a", &["y"]),
                negated: false,
            }),
        );
        assert!(!holds(&m, 7, &boxed3).unwrap());
    }

    #[test]
    fn holds_rejects_points_outside_the_timeline() {
        let d = parse_stream(FIG1).unwrap();
        let (derived, bg) = (Derived::default(), Background::new());
        let m = Structure::new(d, &derived, &bg);
        let f = Formula::Atom {
            atom: ga("a", &["x1", "y"]),
            negated: false,
        };
        assert!(matches!(holds(&m, 50, &f), Err(OracleError::Model(_))));
    }

    #[test]
    fn answer_stream_at_41() {
        let p = parse_program(JOIN).unwrap();
        let d = parse_stream(FIG1).unwrap();
        let ans = answer_stream(&p, &d, &Background::new(), 41).unwrap();
        let pairs: BTreeSet<(Time, String)> = ans
            .derived
            .iter()
            .map(|(t, a)| (t, a.to_string()))
            .collect();
        assert_eq!(
            pairs,
            [(41, "q(x2,y,z)".to_string()), (41, "q(x3,y,z)".to_string())].into()
        );
        let s = ans.to_stream();
        assert_eq!(s.tuple_size(), 6);
        assert!(d.is_window_of(&s));
    }

    #[test]
    fn empty_program_yields_data() {
        let p = parse_program("").unwrap();
        let d = parse_stream(FIG1).unwrap();
        let ans = answer_stream(&p, &d, &Background::new(), 40).unwrap();
        assert_eq!(ans.to_stream(), d);
    }

    #[test]
    fn outputs_of_the_join() {
        let p = parse_program(JOIN).unwrap();
        let d = parse_stream(FIG1).unwrap();
        let bg = Background::new();
        assert_eq!(
            strings(&output(&p, &d.prefix(41).unwrap(), &bg, 41).unwrap()),
            set(&["q(x2,y,z)", "q(x3,y,z)"])
        );
        assert!(output(&p, &d.prefix(35).unwrap(), &bg, 35)
            .unwrap()
            .is_empty());
        assert_eq!(
            strings(&output(&p, &d.prefix(39).unwrap(), &bg, 39).unwrap()),
            set(&["q(x1,y,z)", "q(x2,y,z)"])
        );
    }

    #[test]
    fn output_stream_of_the_join() {
        let p = parse_program(JOIN).unwrap();
        let d = parse_stream(FIG1).unwrap();
        let out = output_stream_naive(&p, &d, &Background::new()).unwrap();
        let expect = |t: Time| -> BTreeSet<String> {
            match t {
                38 | 39 => set(&["q(x1,y,z)", "q(x2,y,z)"]),
                40 | 41 => set(&["q(x2,y,z)", "q(x3,y,z)"]),
                // The time window [39,42] no longer holds a(x2,y).
                42 => set(&["q(x3,y,z)"]),
                _ => BTreeSet::new(),
            }
        };
        for (t, atoms) in &out {
            assert_eq!(strings(atoms), expect(*t), "t={t}");
        }
        assert_eq!(out.len(), 8);
    }

    #[test]
    fn empty_data_gives_empty_outputs() {
        let p = parse_program(JOIN).unwrap();
        let d = parse_stream("@timeline 0 3").unwrap();
        let out = output_stream_naive(&p, &d, &Background::new()).unwrap();
        assert_eq!(out.len(), 4);
        assert!(out.values().all(BTreeSet::is_empty));
    }

    #[test]
    fn cooling_very_hot() {
        let p = parse_program(
            "@[T] steam(V) :- [5 t] @[T] temp(V), V >= 100.\nveryHot(T) :- [5 t] @[T] steam(V), V >= 150.",
        )
        .unwrap();
        let d = parse_stream("@timeline 0 7\n0 temp(150)").unwrap();
        let out = output_stream_naive(&p, &d, &Background::new()).unwrap();
        for (t, atoms) in out {
            let hot = atoms.iter().any(|a| a.to_string() == "veryHot(0)");
            assert_eq!(hot, t <= 5, "t={t}");
        }
    }

    #[test]
    fn background_atoms_hold_everywhere() {
        let p = parse_program("q(X) :- [2 t] <> p(X), limit(X).").unwrap();
        let d = parse_stream("@timeline 0 4\n0 p(1) p(2)").unwrap();
        let bg: Background = [GroundAtom::new("limit", vec![Value::Int(2)])].into();
        let out = output_stream_naive(&p, &d, &bg).unwrap();
        let q2 = GroundAtom::new("q", vec![Value::Int(2)]);
        assert_eq!(out[&0], [q2.clone()].into());
        assert_eq!(out[&2], [q2].into());
        assert!(out[&3].is_empty());
    }

    #[test]
    fn stratified_negation() {
        let p = parse_program("seen :- [2 t] <> p.\nquiet :- [0 t] <> tick, not seen.").unwrap();
        let d = parse_stream("0 tick p\n1 tick\n2 tick\n3 tick\n4 tick").unwrap();
        let out = output_stream_naive(&p, &d, &Background::new()).unwrap();
        let quiet: Vec<Time> = out
            .iter()
            .filter(|(_, s)| s.iter().any(|a| &*a.predicate == "quiet"))
            .map(|(t, _)| *t)
            .collect();
        assert_eq!(quiet, vec![3, 4]);
    }

    #[test]
    fn window_entailment_equals_windowed_structure() {
        let d = parse_stream(FIG1).unwrap();
        let (derived, bg) = (Derived::default(), Background::new());
        let m = Structure::new(d, &derived, &bg);
        for t in 35..=42 {
            for w in [
                WindowSpec::time(0),
                WindowSpec::time(3),
                WindowSpec::tuple(2).unwrap(),
            ] {
                for a in [ga("a", &["x2", "y"]), ga("b", &["y", "z"])] {
                    for inner in [
                        Formula::Diamond {
                            atom: a.clone(),
                            negated: false,
                        },
                        Formula::Box {
                            atom: a.clone(),
                            negated: false,
                        },
                        Formula::At {
                            time: 38,
                            atom: a.clone(),
                            negated: false,
                        },
                    ] {
                        let whole =
                            holds(&m, t, &Formula::Window(w, Box::new(inner.clone()))).unwrap();
                        let windowed = holds(&m.window(w, t).unwrap(), t, &inner).unwrap();
                        assert_eq!(whole, windowed);
                    }
                }
            }
        }
    }
}
