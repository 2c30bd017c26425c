//! Annotated groundings of body literals against the current database.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::annotation::{Annotation, CountRange};
use super::compile::{Literal, Shape};
use super::store::{DataStore, DerivedStore, Entry};
use crate::model::{GroundAtom, Seq, Time, Value, WindowKind, WindowSpec};
use crate::parser::{ExtendedAtom, Modality, TimeTerm};

/// Read-only view of the engine state at the current tick.
pub(crate) struct Ctx<'a> {
    pub data: &'a DataStore,
    pub derived: &'a DerivedStore,
    pub background: &'a HashSet<GroundAtom>,
    pub bg_by_pred: &'a HashMap<Arc<str>, Vec<GroundAtom>>,
    pub start: Time,
    pub t: Time,
    /// Arrivals so far.
    pub k: Seq,
}

/// One grounding of a literal: values for the literal's variable slots.
#[derive(Debug, Clone)]
pub(crate) struct Instance {
    pub values: Vec<Value>,
    pub ann: Annotation,
    /// Generation of the derived entry it stems from.
    pub gen: Option<u64>,
}

/// Which groundings count as new.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Delta {
    /// Consideration time equals the current tick.
    Tick,
    /// Stems from an entry of the given generation.
    Gen(u64),
}

impl Delta {
    pub fn matches(self, inst: &Instance, t: Time) -> bool {
        match self {
            Delta::Tick => inst.ann.c == t,
            Delta::Gen(g) => inst.gen == Some(g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    All,
    New(Delta),
}

/// The part of the stream a literal sees: time points `[lo, t]`, data
/// atoms with sequence number at least `min_seq`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct View {
    pub lo: Time,
    pub min_seq: Seq,
}

impl<'a> Ctx<'a> {
    pub fn window_view(&self, w: WindowSpec) -> View {
        match w.kind {
            WindowKind::Time => View {
                lo: self.start.max(self.t.saturating_sub(w.size)),
                min_seq: 0,
            },
            WindowKind::Tuple if self.k >= w.size => {
                let min_seq = self.k - w.size + 1;
                View {
                    lo: self.data.arrival_time(min_seq),
                    min_seq,
                }
            }
            WindowKind::Tuple => View {
                lo: self.start,
                min_seq: 0,
            },
        }
    }

    fn shape_view(&self, shape: Shape) -> View {
        match shape {
            Shape::Plain => View {
                lo: self.t,
                min_seq: 0,
            },
            Shape::BareAt => View {
                lo: self.start,
                min_seq: 0,
            },
            Shape::Diamond(w) | Shape::Box(w) | Shape::At(w) => self.window_view(w),
        }
    }

    /// Whether `atom` holds at time point `u` of the view.
    pub fn point_holds(&self, view: View, atom: &GroundAtom, u: Time) -> bool {
        self.background.contains(atom)
            || self.data.holds(atom, u, view.min_seq)
            || self.derived.holds(atom, u, self.t, self.k)
    }

    /// Truth at the current tick of a ground extended atom, possibly
    /// negated, evaluated directly on the snapshot.
    pub fn snapshot_holds(&self, e: &ExtendedAtom) -> Option<bool> {
        let t = self.t;
        let time = |tt: &TimeTerm| match tt {
            TimeTerm::Const(u) => Some(*u),
            TimeTerm::Var(_) => None,
        };
        Some(match e {
            ExtendedAtom::Plain { atom, negated } => {
                let a = atom.to_ground()?;
                self.point_holds(self.shape_view(Shape::Plain), &a, t) != *negated
            }
            ExtendedAtom::At {
                time: tt,
                atom,
                negated,
            } => {
                let (a, u) = (atom.to_ground()?, time(tt)?);
                (self.start..=t).contains(&u)
                    && self.point_holds(self.shape_view(Shape::BareAt), &a, u) != *negated
            }
            ExtendedAtom::Window {
                window,
                modality,
                atom,
                negated,
            } => {
                let a = atom.to_ground()?;
                let view = self.window_view(*window);
                let ok = |u: Time| self.point_holds(view, &a, u) != *negated;
                match modality {
                    Modality::Diamond => (view.lo..=t).any(ok),
                    Modality::Box => (view.lo..=t).all(ok),
                    Modality::At(tt) => {
                        let u = time(tt)?;
                        (view.lo..=t).contains(&u) && ok(u)
                    }
                }
            }
            ExtendedAtom::Compare(c) => match (&c.lhs, &c.rhs) {
                (crate::model::Term::Const(l), crate::model::Term::Const(r)) => {
                    match (l.as_int(), r.as_int()) {
                        (Some(l), Some(r)) => c.op.eval(l, r),
                        _ => false,
                    }
                }
                _ => return None,
            },
        })
    }

    /// Annotated groundings of a positive literal that hold now.
    pub fn instances(
        &self,
        lit: &Literal,
        mode: Mode,
        scratch: &mut [Option<Value>],
    ) -> Vec<Instance> {
        if lit.shape.is_snapshot() {
            return match mode {
                Mode::All => self.snapshot_instances(lit, scratch),
                Mode::New(_) => Vec::new(),
            };
        }
        let t = self.t;
        let mut found: Vec<(&GroundAtom, Time, Annotation, Option<u64>)> = Vec::new();
        let from_entries = matches!(mode, Mode::New(Delta::Gen(_)));

        if lit.intensional {
            let entries: Box<dyn Iterator<Item = &Entry>> = match mode {
                Mode::All => Box::new(self.derived.of_pred(&lit.pred)),
                Mode::New(Delta::Gen(g)) => {
                    Box::new(self.derived.recent(&lit.pred).filter(move |e| e.gen == g))
                }
                // Groundings of `@` over atoms holding now are new at every
                // tick.
                Mode::New(Delta::Tick) if matches!(lit.shape, Shape::BareAt | Shape::At(_)) => {
                    Box::new(
                        self.derived
                            .of_pred(&lit.pred)
                            .filter(move |e| e.at.is_none() || e.ann.c == t),
                    )
                }
                Mode::New(Delta::Tick) => Box::new(self.derived.recent(&lit.pred)),
            };
            for e in entries {
                if let Some((u, ann)) = self.entry_instance(lit.shape, e) {
                    found.push((&e.atom, u, ann, Some(e.gen)));
                }
            }
        } else if !from_entries {
            let view = self.shape_view(lit.shape);
            let lo = if mode == Mode::All { view.lo } else { t };
            for (u, a, seq) in self.data.range(&lit.pred, lo, t) {
                if seq >= view.min_seq {
                    found.push((a, u, self.data_annotation(lit.shape, u, seq), None));
                }
            }
        }

        if !from_entries {
            let view = self.shape_view(lit.shape);
            let lo = if mode == Mode::All { view.lo } else { t };
            for a in self.bg_by_pred.get(&lit.pred).into_iter().flatten() {
                match lit.shape {
                    Shape::BareAt => {
                        found.extend((lo..=t).map(|u| (a, u, Annotation::from(u), None)))
                    }
                    Shape::At(w) => found.extend(
                        (lo..=t)
                            .map(|u| (a, u, Annotation::new(u, u.saturating_add(w.size)), None)),
                    ),
                    _ => found.push((a, t, Annotation::from(self.start), None)),
                }
            }
        }

        found
            .into_iter()
            .filter(|(_, _, ann, _)| {
                ann.holds_at(t, self.k) && (mode != Mode::New(Delta::Tick) || ann.c == t)
            })
            .filter_map(|(a, u, ann, gen)| {
                lit.bind(a, u, scratch)
                    .map(|values| Instance { values, ann, gen })
            })
            .collect()
    }

    fn data_annotation(&self, shape: Shape, u: Time, seq: Seq) -> Annotation {
        match shape {
            Shape::Plain => Annotation::point(u),
            Shape::BareAt => Annotation::from(u),
            Shape::Diamond(w) | Shape::At(w) => match w.kind {
                WindowKind::Time => Annotation::new(u, u.saturating_add(w.size)),
                WindowKind::Tuple => {
                    Annotation::from(u).with_count(CountRange::new(seq, seq + w.size - 1))
                }
            },
            Shape::Box(_) => unreachable!("box literals are grounded on the snapshot"),
        }
    }

    /// The time point a derived entry places its atom at, and the
    /// annotation of the literal grounding it yields.
    fn entry_instance(&self, shape: Shape, e: &Entry) -> Option<(Time, Annotation)> {
        let t = self.t;
        Some(match (e.at, shape) {
            (None, Shape::Plain | Shape::Diamond(_)) => (t, e.ann),
            (None, Shape::BareAt | Shape::At(_)) => (t, e.ann.intersect(&Annotation::point(t))),
            (Some(u), Shape::Plain) => (u, e.ann.intersect(&Annotation::point(u))),
            (Some(u), Shape::BareAt) => (u, e.ann.intersect(&Annotation::from(u))),
            (Some(u), Shape::Diamond(w) | Shape::At(w)) => {
                if w.kind == WindowKind::Tuple {
                    return None;
                }
                (
                    u,
                    e.ann
                        .intersect(&Annotation::new(u, u.saturating_add(w.size))),
                )
            }
            (_, Shape::Box(_)) => return None,
        })
    }

    /// Groundings of `[]` and tuple-window `@` literals, valid now only.
    fn snapshot_instances(&self, lit: &Literal, scratch: &mut [Option<Value>]) -> Vec<Instance> {
        let t = self.t;
        let view = self.shape_view(lit.shape);
        let bg = self
            .bg_by_pred
            .get(&lit.pred)
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        let mut pairs: BTreeSet<(Time, &GroundAtom)> = BTreeSet::new();
        match lit.shape {
            Shape::Box(_) => {
                // An atom holding at every point of the window holds now.
                let mut now: BTreeSet<&GroundAtom> = BTreeSet::new();
                now.extend(
                    self.data
                        .range(&lit.pred, t, t)
                        .filter(|(_, _, k)| *k >= view.min_seq)
                        .map(|(_, a, _)| a),
                );
                now.extend(
                    self.derived
                        .of_pred(&lit.pred)
                        .filter(|e| e.holds_at(t, t, self.k))
                        .map(|e| &e.atom),
                );
                now.extend(bg.iter());
                for a in now {
                    if (view.lo..=t).all(|u| self.point_holds(view, a, u)) {
                        pairs.insert((t, a));
                    }
                }
            }
            _ => {
                pairs.extend(
                    self.data
                        .range(&lit.pred, view.lo, t)
                        .filter(|(_, _, k)| *k >= view.min_seq)
                        .map(|(u, a, _)| (u, a)),
                );
                for a in bg {
                    pairs.extend((view.lo..=t).map(|u| (u, a)));
                }
            }
        }
        pairs
            .into_iter()
            .filter_map(|(u, a)| {
                lit.bind(a, u, scratch).map(|values| Instance {
                    values,
                    ann: Annotation::point(t),
                    gen: None,
                })
            })
            .collect()
    }
}
