use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::annotation::{Annotation, Horizon};
use crate::model::{GroundAtom, Seq, Time};

type ByTime = BTreeMap<Time, Vec<(GroundAtom, Seq)>>;

/// Input atoms with their arrival times and sequence numbers.
#[derive(Debug, Default, Clone)]
pub(crate) struct DataStore {
    by_pred: HashMap<Arc<str>, ByTime>,
    by_atom: HashMap<GroundAtom, BTreeMap<Time, Seq>>,
    /// Arrival time of sequence number `k` at index `k - 1`.
    arrival_time: Vec<Time>,
    len: usize,
}

impl DataStore {
    /// Records `atom` at `t`; `None` if it already arrived at `t`.
    pub fn push(&mut self, t: Time, atom: GroundAtom) -> Option<Seq> {
        let occ = self.by_atom.entry(atom.clone()).or_default();
        if occ.contains_key(&t) {
            return None;
        }
        self.arrival_time.push(t);
        let k = self.arrival_time.len() as Seq;
        occ.insert(t, k);
        self.by_pred
            .entry(atom.predicate.clone())
            .or_default()
            .entry(t)
            .or_default()
            .push((atom, k));
        self.len += 1;
        Some(k)
    }

    /// Number of arrivals so far.
    pub fn arrivals(&self) -> Seq {
        self.arrival_time.len() as Seq
    }

    pub fn arrival_time(&self, k: Seq) -> Time {
        self.arrival_time[(k - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Atoms of `pred` with time in `[lo, hi]`.
    pub fn range<'a>(
        &'a self,
        pred: &str,
        lo: Time,
        hi: Time,
    ) -> impl Iterator<Item = (Time, &'a GroundAtom, Seq)> + 'a {
        self.by_pred
            .get(pred)
            .into_iter()
            .flat_map(move |m| m.range(lo..=hi))
            .flat_map(|(u, v)| v.iter().map(move |(a, k)| (*u, a, *k)))
    }

    pub fn holds(&self, atom: &GroundAtom, u: Time, min_seq: Seq) -> bool {
        self.by_atom
            .get(atom)
            .and_then(|m| m.get(&u))
            .is_some_and(|&k| k >= min_seq)
    }

    /// Drops atoms no literal can see any more. `needed(pred, u, k)` tells
    /// whether an atom of `pred` at `u` with sequence number `k` is still
    /// visible.
    pub fn collect(&mut self, needed: impl Fn(&str, Time, Seq) -> bool) -> usize {
        let mut removed = 0;
        for (pred, m) in self.by_pred.iter_mut() {
            while let Some(entry) = m.first_entry() {
                let u = *entry.key();
                let last = entry.get().iter().map(|(_, k)| *k).max().unwrap_or(0);
                if needed(pred, u, last) {
                    break;
                }
                for (a, _) in entry.remove() {
                    if let Some(occ) = self.by_atom.get_mut(&a) {
                        occ.remove(&u);
                        if occ.is_empty() {
                            self.by_atom.remove(&a);
                        }
                    }
                    removed += 1;
                }
            }
        }
        self.len -= removed;
        removed
    }
}

/// A derived atom: `at == None` means the atom holds at the evaluation
/// time itself, `Some(u)` that it holds at time point `u`; either during
/// the evaluation times of `ann`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Entry {
    pub atom: GroundAtom,
    pub at: Option<Time>,
    pub ann: Annotation,
    pub gen: u64,
}

impl Entry {
    pub fn holds_at(&self, u: Time, t: Time, k: Seq) -> bool {
        self.ann.holds_at(t, k) && self.at.unwrap_or(t) == u
    }
}

type Key = (GroundAtom, Option<Time>, Annotation);

/// Derived atoms with expiry schedules by horizon time and horizon count.
#[derive(Debug, Default, Clone)]
pub(crate) struct DerivedStore {
    entries: HashMap<u64, Entry>,
    keys: HashMap<Key, u64>,
    by_pred: HashMap<Arc<str>, BTreeSet<u64>>,
    by_atom: HashMap<GroundAtom, BTreeSet<u64>>,
    recent: HashMap<Arc<str>, Vec<u64>>,
    by_h: BTreeMap<Time, Vec<u64>>,
    by_hc: BTreeMap<Seq, Vec<u64>>,
    next_id: u64,
}

impl DerivedStore {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Forgets which entries were inserted during the previous tick.
    pub fn begin_tick(&mut self) {
        self.recent.clear();
    }

    /// Adds an entry unless an identical one is present.
    pub fn insert(
        &mut self,
        atom: GroundAtom,
        at: Option<Time>,
        ann: Annotation,
        gen: u64,
    ) -> bool {
        let key = (atom, at, ann);
        if self.keys.contains_key(&key) {
            return false;
        }
        let id = self.next_id;
        self.next_id += 1;
        let (atom, at, ann) = key.clone();
        self.keys.insert(key, id);
        self.by_pred
            .entry(atom.predicate.clone())
            .or_default()
            .insert(id);
        self.recent
            .entry(atom.predicate.clone())
            .or_default()
            .push(id);
        self.by_atom.entry(atom.clone()).or_default().insert(id);
        if let Horizon::Finite(h) = ann.h {
            self.by_h.entry(h).or_default().push(id);
        }
        if let Some(Horizon::Finite(h)) = ann.count.map(|r| r.h) {
            self.by_hc.entry(h).or_default().push(id);
        }
        self.entries.insert(id, Entry { atom, at, ann, gen });
        true
    }

    fn remove(&mut self, id: u64) -> bool {
        let Some(e) = self.entries.remove(&id) else {
            return false;
        };
        if let Some(s) = self.by_pred.get_mut(&e.atom.predicate) {
            s.remove(&id);
        }
        if let Some(s) = self.by_atom.get_mut(&e.atom) {
            s.remove(&id);
            if s.is_empty() {
                self.by_atom.remove(&e.atom);
            }
        }
        self.keys.remove(&(e.atom, e.at, e.ann));
        true
    }

    /// Removes entries with horizon time below `t` or horizon count below
    /// `k`.
    pub fn expire(&mut self, t: Time, k: Seq) -> usize {
        let mut ids = Vec::new();
        while let Some(e) = self.by_h.first_entry() {
            if *e.key() >= t {
                break;
            }
            ids.extend(e.remove());
        }
        while let Some(e) = self.by_hc.first_entry() {
            if *e.key() >= k {
                break;
            }
            ids.extend(e.remove());
        }
        ids.into_iter().filter(|&id| self.remove(id)).count()
    }

    /// Entries that should have been expired at `(t, k)`.
    pub fn stale(&self, t: Time, k: Seq) -> usize {
        self.entries
            .values()
            .filter(|e| e.ann.expired(t, k))
            .count()
    }

    pub fn of_pred<'a>(&'a self, pred: &str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.by_pred
            .get(pred)
            .into_iter()
            .flatten()
            .map(|id| &self.entries[id])
    }

    /// Entries of `pred` inserted during the current tick.
    pub fn recent<'a>(&'a self, pred: &str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.recent
            .get(pred)
            .into_iter()
            .flatten()
            .filter_map(|id| self.entries.get(id))
    }

    /// Whether `atom` holds at time point `u` when evaluating at `t`.
    pub fn holds(&self, atom: &GroundAtom, u: Time, t: Time, k: Seq) -> bool {
        self.by_atom
            .get(atom)
            .is_some_and(|ids| ids.iter().any(|id| self.entries[id].holds_at(u, t, k)))
    }

    /// Atoms holding at `t`.
    pub fn at(&self, t: Time, k: Seq) -> BTreeSet<GroundAtom> {
        self.entries
            .values()
            .filter(|e| e.holds_at(t, t, k))
            .map(|e| e.atom.clone())
            .collect()
    }

    /// All entries, sorted; used to compare engine states.
    pub fn snapshot(&self) -> Vec<Entry> {
        let mut v: Vec<Entry> = self.entries.values().cloned().collect();
        v.sort_by(|a, b| (&a.atom, a.at, a.ann, a.gen).cmp(&(&b.atom, b.at, b.ann, b.gen)));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::annotation::CountRange;
    use crate::model::Value;

    fn q(x: &str) -> GroundAtom {
        GroundAtom::new("q", vec![Value::sym(x)])
    }

    #[test]
    fn expiry_by_time() {
        let mut s = DerivedStore::default();
        s.insert(q("a"), None, Annotation::new(38, 39), 0);
        s.insert(q("b"), None, Annotation::new(38, 41), 0);
        assert_eq!(s.expire(40, 0), 1);
        assert_eq!(s.len(), 1);
        assert_eq!(s.stale(40, 0), 0);
        assert_eq!(s.at(40, 0), [q("b")].into());
    }

    #[test]
    fn expiry_by_count() {
        let mut s = DerivedStore::default();
        s.insert(
            q("a"),
            None,
            Annotation::from(38).with_count(CountRange::new(3, 5)),
            0,
        );
        assert_eq!(s.expire(42, 5), 0);
        assert_eq!(s.expire(42, 6), 1);
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn duplicates_are_ignored() {
        let mut s = DerivedStore::default();
        assert!(s.insert(q("a"), Some(3), Annotation::new(3, 5), 0));
        assert!(!s.insert(q("a"), Some(3), Annotation::new(3, 5), 1));
        assert!(s.insert(q("a"), Some(3), Annotation::new(4, 6), 1));
        assert!(s.holds(&q("a"), 3, 6, 0));
        assert!(!s.holds(&q("a"), 4, 6, 0));
    }

    #[test]
    fn data_collection() {
        let mut d = DataStore::default();
        assert_eq!(d.push(0, q("a")), Some(1));
        assert_eq!(d.push(0, q("a")), None);
        assert_eq!(d.push(1, q("b")), Some(2));
        assert_eq!(d.collect(|_, u, _| u + 1 >= 2), 1);
        assert_eq!(d.len(), 1);
        assert!(!d.holds(&q("a"), 0, 0));
        assert!(d.holds(&q("b"), 1, 2));
        assert_eq!(d.arrivals(), 2);
    }
}
