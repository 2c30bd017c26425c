use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::model::{
    Atom, PredicateKind, Substitute, Substitution, Term, Time, Value, Var, WindowSpec,
};

/// The time argument of an `@` operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TimeTerm {
    Const(Time),
    Var(Var),
}

impl TimeTerm {
    pub fn var(&self) -> Option<&Var> {
        match self {
            TimeTerm::Var(v) => Some(v),
            TimeTerm::Const(_) => None,
        }
    }
}

impl fmt::Display for TimeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeTerm::Const(t) => write!(f, "{t}"),
            TimeTerm::Var(v) => write!(f, "{v}"),
        }
    }
}

impl Substitute for TimeTerm {
    fn substitute(&self, sigma: &Substitution) -> Self {
        match self {
            TimeTerm::Var(v) => match sigma.get(v).and_then(Value::as_time) {
                Some(t) => TimeTerm::Const(t),
                None => self.clone(),
            },
            TimeTerm::Const(_) => self.clone(),
        }
    }
}

/// Temporal quantifier inside a window.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Modality {
    Diamond,
    Box,
    At(TimeTerm),
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modality::Diamond => f.write_str("<>"),
            Modality::Box => f.write_str("[]"),
            Modality::At(t) => write!(f, "@[{t}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn eval(self, l: i64, r: i64) -> bool {
        match self {
            CmpOp::Lt => l < r,
            CmpOp::Le => l <= r,
            CmpOp::Gt => l > r,
            CmpOp::Ge => l >= r,
            CmpOp::Eq => l == r,
            CmpOp::Ne => l != r,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

/// Integer comparison builtin, e.g. `V >= 100`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Comparison {
    pub op: CmpOp,
    pub lhs: Term,
    pub rhs: Term,
}

impl Comparison {
    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        [&self.lhs, &self.rhs].into_iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

/// An extended atom, possibly with the atom itself negated.
///
/// `negated` marks negation directly in front of the atom, the only place
/// it remains after [`rewrite_negation`](super::rewrite_negation).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedAtom {
    /// `a` or `not a`.
    Plain {
        atom: Atom,
        negated: bool,
    },
    /// `@[t] a` without a window.
    At {
        time: TimeTerm,
        atom: Atom,
        negated: bool,
    },
    /// `[w] Q a`.
    Window {
        window: WindowSpec,
        modality: Modality,
        atom: Atom,
        negated: bool,
    },
    Compare(Comparison),
}

impl ExtendedAtom {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            ExtendedAtom::Plain { atom, .. }
            | ExtendedAtom::At { atom, .. }
            | ExtendedAtom::Window { atom, .. } => Some(atom),
            ExtendedAtom::Compare(_) => None,
        }
    }

    pub fn is_negated(&self) -> bool {
        match self {
            ExtendedAtom::Plain { negated, .. }
            | ExtendedAtom::At { negated, .. }
            | ExtendedAtom::Window { negated, .. } => *negated,
            ExtendedAtom::Compare(_) => false,
        }
    }

    pub fn time_term(&self) -> Option<&TimeTerm> {
        match self {
            ExtendedAtom::At { time, .. } => Some(time),
            ExtendedAtom::Window {
                modality: Modality::At(time),
                ..
            } => Some(time),
            _ => None,
        }
    }

    /// Variables occurring in the extended atom, time variables included.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out: BTreeSet<Var> = match self {
            ExtendedAtom::Compare(c) => c.vars().cloned().collect(),
            other => other
                .atom()
                .into_iter()
                .flat_map(Atom::vars)
                .cloned()
                .collect(),
        };
        if let Some(TimeTerm::Var(v)) = self.time_term() {
            out.insert(v.clone());
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.vars().is_empty()
    }
}

impl Substitute for ExtendedAtom {
    fn substitute(&self, sigma: &Substitution) -> Self {
        match self {
            ExtendedAtom::Plain { atom, negated } => ExtendedAtom::Plain {
                atom: atom.substitute(sigma),
                negated: *negated,
            },
            ExtendedAtom::At {
                time,
                atom,
                negated,
            } => ExtendedAtom::At {
                time: time.substitute(sigma),
                atom: atom.substitute(sigma),
                negated: *negated,
            },
            ExtendedAtom::Window {
                window,
                modality,
                atom,
                negated,
            } => ExtendedAtom::Window {
                window: *window,
                modality: match modality {
                    Modality::At(t) => Modality::At(t.substitute(sigma)),
                    m => m.clone(),
                },
                atom: atom.substitute(sigma),
                negated: *negated,
            },
            ExtendedAtom::Compare(c) => ExtendedAtom::Compare(Comparison {
                op: c.op,
                lhs: c.lhs.substitute(sigma),
                rhs: c.rhs.substitute(sigma),
            }),
        }
    }
}

fn neg(negated: bool) -> &'static str {
    if negated {
        "not "
    } else {
        ""
    }
}

impl fmt::Display for ExtendedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedAtom::Plain { atom, negated } => write!(f, "{}{atom}", neg(*negated)),
            ExtendedAtom::At {
                time,
                atom,
                negated,
            } => {
                write!(f, "@[{time}] {}{atom}", neg(*negated))
            }
            ExtendedAtom::Window {
                window,
                modality,
                atom,
                negated,
            } => write!(f, "{window} {modality} {}{atom}", neg(*negated)),
            ExtendedAtom::Compare(c) => c.fmt(f),
        }
    }
}

/// A body element as written: an optional outer `not` in front of an
/// extended atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub negated: bool,
    pub elem: ExtendedAtom,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", neg(self.negated), self.elem)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Head {
    Atom(Atom),
    At(TimeTerm, Atom),
}

impl Head {
    pub fn atom(&self) -> &Atom {
        match self {
            Head::Atom(a) | Head::At(_, a) => a,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out: BTreeSet<Var> = self.atom().vars().cloned().collect();
        if let Head::At(TimeTerm::Var(v), _) = self {
            out.insert(v.clone());
        }
        out
    }
}

impl Substitute for Head {
    fn substitute(&self, sigma: &Substitution) -> Self {
        match self {
            Head::Atom(a) => Head::Atom(a.substitute(sigma)),
            Head::At(t, a) => Head::At(t.substitute(sigma), a.substitute(sigma)),
        }
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Atom(a) => a.fmt(f),
            Head::At(t, a) => write!(f, "@[{t}] {a}"),
        }
    }
}

/// A rule after negation rewriting: every body literal has `negated ==
/// false`, negation sits directly in front of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<Literal>,
    /// Index into [`Program::strata`].
    pub stratum: usize,
}

impl Rule {
    pub fn body_atoms(&self) -> impl Iterator<Item = &ExtendedAtom> {
        self.body.iter().map(|l| &l.elem)
    }

    /// Positive, non-builtin body elements: the ones that bind variables.
    pub fn positive(&self) -> impl Iterator<Item = &ExtendedAtom> {
        self.body_atoms()
            .filter(|e| !e.is_negated() && !matches!(e, ExtendedAtom::Compare(_)))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :- ", self.head)?;
        for (i, l) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            l.fmt(f)?;
        }
        f.write_str(".")
    }
}

/// A validated, stratified program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    /// Intensional predicates, grouped into strata in evaluation order.
    pub strata: Vec<Vec<Arc<str>>>,
    pub(crate) kinds: HashMap<Arc<str>, PredicateKind>,
}

impl Program {
    pub fn kind(&self, predicate: &str) -> PredicateKind {
        self.kinds
            .get(predicate)
            .copied()
            .unwrap_or(PredicateKind::Extensional)
    }

    pub fn is_intensional(&self, predicate: &str) -> bool {
        self.kind(predicate) == PredicateKind::Intensional
    }

    pub fn intensional(&self) -> impl Iterator<Item = &Arc<str>> {
        self.kinds
            .iter()
            .filter(|(_, k)| **k == PredicateKind::Intensional)
            .map(|(p, _)| p)
    }

    pub fn stratum_of(&self, predicate: &str) -> Option<usize> {
        self.strata
            .iter()
            .position(|s| s.iter().any(|p| &**p == predicate))
    }

    /// Rules grouped by stratum, in evaluation order.
    pub fn rules_by_stratum(&self) -> Vec<Vec<&Rule>> {
        let mut out = vec![Vec::new(); self.strata.len()];
        for r in &self.rules {
            out[r.stratum].push(r);
        }
        out
    }

    /// Largest time window size used anywhere in the program.
    pub fn max_time_window(&self) -> u64 {
        self.windows(crate::model::WindowKind::Time)
    }

    /// Largest tuple window size used anywhere in the program.
    pub fn max_tuple_window(&self) -> u64 {
        self.windows(crate::model::WindowKind::Tuple)
    }

    fn windows(&self, kind: crate::model::WindowKind) -> u64 {
        self.rules
            .iter()
            .flat_map(Rule::body_atoms)
            .filter_map(|e| match e {
                ExtendedAtom::Window { window, .. } if window.kind == kind => Some(window.size),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Whether some body uses `@` outside a window.
    pub fn has_bare_at(&self) -> bool {
        self.rules
            .iter()
            .flat_map(Rule::body_atoms)
            .any(|e| matches!(e, ExtendedAtom::At { .. }))
    }

    /// Symbolic and integer constants occurring in the program.
    pub fn constants(&self) -> BTreeSet<Value> {
        let mut out = BTreeSet::new();
        let mut add = |a: &Atom| {
            for t in &a.args {
                if let Term::Const(v) = t {
                    out.insert(v.clone());
                }
            }
        };
        for r in &self.rules {
            add(r.head.atom());
            for e in r.body_atoms() {
                if let Some(a) = e.atom() {
                    add(a);
                }
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitute_at_atom() {
        let e = ExtendedAtom::At {
            time: TimeTerm::Var(Var::new("U")),
            atom: Atom::new("steam", vec![Term::var("V")]),
            negated: false,
        };
        let s = Substitution::new().with("U", 36).with("V", 100);
        let g = crate::model::apply_substitution(&e, &s);
        assert_eq!(g.to_string(), "@[36] steam(100)");
        assert!(g.is_ground());
    }

    #[test]
    fn comparison_negation_is_an_involution() {
        for op in [
            CmpOp::Lt,
            CmpOp::Le,
            CmpOp::Gt,
            CmpOp::Ge,
            CmpOp::Eq,
            CmpOp::Ne,
        ] {
            assert_eq!(op.negate().negate(), op);
            for (l, r) in [(1, 2), (2, 2), (3, 2)] {
                assert_eq!(op.eval(l, r), !op.negate().eval(l, r));
            }
        }
    }
}
