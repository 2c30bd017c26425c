//! Rules compiled to variable slots.

use std::collections::HashMap;
use std::sync::Arc;

use crate::model::{
    Atom, GroundAtom, Substitution, Term, Time, Value, Var, WindowKind, WindowSpec,
};
use crate::parser::{CmpOp, ExtendedAtom, Head, Modality, Program, Rule, TimeTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Slot {
    Const(Value),
    Var(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TimeSlot {
    Const(Time),
    Var(usize),
}

/// Which operator wraps the atom of a positive literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    Plain,
    BareAt,
    Diamond(WindowSpec),
    Box(WindowSpec),
    At(WindowSpec),
}

impl Shape {
    /// Literals grounded by inspecting the current snapshot instead of
    /// from annotated entries; their groundings only ever hold at the
    /// current tick.
    pub fn is_snapshot(self) -> bool {
        match self {
            Shape::Box(_) => true,
            Shape::At(w) => w.kind == WindowKind::Tuple,
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Literal {
    pub pred: Arc<str>,
    pub args: Vec<Slot>,
    pub time: Option<TimeSlot>,
    pub shape: Shape,
    pub intensional: bool,
    /// Distinct variable slots occurring in the literal, time variable
    /// included, in first-occurrence order.
    pub vars: Vec<usize>,
}

impl Literal {
    /// Matches a ground atom (and the time point it occurs at) against the
    /// literal, returning values for `vars`.
    pub fn bind(
        &self,
        atom: &GroundAtom,
        u: Time,
        scratch: &mut [Option<Value>],
    ) -> Option<Vec<Value>> {
        if atom.args.len() != self.args.len() {
            return None;
        }
        for &v in &self.vars {
            scratch[v] = None;
        }
        for (slot, val) in self.args.iter().zip(atom.args.iter()) {
            match slot {
                Slot::Const(c) if c != val => return None,
                Slot::Const(_) => {}
                Slot::Var(i) => match &scratch[*i] {
                    Some(b) if b != val => return None,
                    Some(_) => {}
                    None => scratch[*i] = Some(val.clone()),
                },
            }
        }
        match self.time {
            Some(TimeSlot::Const(c)) if c != u => return None,
            Some(TimeSlot::Var(i)) => {
                let uv = Value::Int(u as i64);
                match &scratch[i] {
                    Some(b) if *b != uv => return None,
                    Some(_) => {}
                    None => scratch[i] = Some(uv),
                }
            }
            _ => {}
        }
        Some(
            self.vars
                .iter()
                .map(|&v| scratch[v].take().expect("bound"))
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledHead {
    pub pred: Arc<str>,
    pub args: Vec<Slot>,
    pub time: Option<TimeSlot>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compare {
    pub op: CmpOp,
    pub lhs: Slot,
    pub rhs: Slot,
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledRule {
    pub vars: Vec<Var>,
    pub positive: Vec<Literal>,
    pub negative: Vec<ExtendedAtom>,
    pub compare: Vec<Compare>,
    pub head: CompiledHead,
    /// Evaluated with a full join every round: the rule has groundings that
    /// are only valid at the current tick, or a head time point that may
    /// lie ahead of the tick.
    pub full: bool,
}

impl CompiledRule {
    pub fn substitution(&self, binding: &[Option<Value>]) -> Substitution {
        self.vars
            .iter()
            .zip(binding)
            .filter_map(|(v, b)| b.clone().map(|b| (v.clone(), b)))
            .collect()
    }
}

#[derive(Default)]
pub(crate) struct Slots {
    index: HashMap<Var, usize>,
    pub names: Vec<Var>,
}

impl Slots {
    fn slot(&mut self, v: &Var) -> usize {
        if let Some(&i) = self.index.get(v) {
            return i;
        }
        self.names.push(v.clone());
        self.index.insert(v.clone(), self.names.len() - 1);
        self.names.len() - 1
    }

    fn term(&mut self, t: &Term) -> Slot {
        match t {
            Term::Const(c) => Slot::Const(c.clone()),
            Term::Var(v) => Slot::Var(self.slot(v)),
        }
    }

    fn time(&mut self, t: &TimeTerm) -> TimeSlot {
        match t {
            TimeTerm::Const(c) => TimeSlot::Const(*c),
            TimeTerm::Var(v) => TimeSlot::Var(self.slot(v)),
        }
    }

    /// Compiles a positive, non-builtin extended atom.
    pub fn literal(&mut self, e: &ExtendedAtom, program: &Program) -> Literal {
        let (atom, shape, time): (&Atom, Shape, Option<&TimeTerm>) = match e {
            ExtendedAtom::Plain { atom, .. } => (atom, Shape::Plain, None),
            ExtendedAtom::At { time, atom, .. } => (atom, Shape::BareAt, Some(time)),
            ExtendedAtom::Window {
                window,
                modality,
                atom,
                ..
            } => match modality {
                Modality::Diamond => (atom, Shape::Diamond(*window), None),
                Modality::Box => (atom, Shape::Box(*window), None),
                Modality::At(t) => (atom, Shape::At(*window), Some(t)),
            },
            ExtendedAtom::Compare(_) => unreachable!("comparisons are not literals"),
        };
        let args: Vec<Slot> = atom.args.iter().map(|t| self.term(t)).collect();
        let time = time.map(|t| self.time(t));
        let mut vars = Vec::new();
        for s in &args {
            if let Slot::Var(i) = s {
                if !vars.contains(i) {
                    vars.push(*i);
                }
            }
        }
        if let Some(TimeSlot::Var(i)) = time {
            if !vars.contains(&i) {
                vars.push(i);
            }
        }
        Literal {
            pred: atom.predicate.clone(),
            args,
            time,
            shape,
            intensional: program.is_intensional(&atom.predicate),
            vars,
        }
    }
}

pub(crate) fn compile_rule(rule: &Rule, program: &Program) -> CompiledRule {
    let mut slots = Slots::default();
    let positive: Vec<Literal> = rule.positive().map(|e| slots.literal(e, program)).collect();
    let mut negative = Vec::new();
    let mut compare = Vec::new();
    for e in rule.body_atoms() {
        match e {
            ExtendedAtom::Compare(c) => compare.push(Compare {
                op: c.op,
                lhs: slots.term(&c.lhs),
                rhs: slots.term(&c.rhs),
            }),
            e if e.is_negated() => negative.push(e.clone()),
            _ => {}
        }
    }
    let (atom, time) = match &rule.head {
        Head::Atom(a) => (a, None),
        Head::At(t, a) => (a, Some(slots.time(t))),
    };
    let head = CompiledHead {
        pred: atom.predicate.clone(),
        args: atom.args.iter().map(|t| slots.term(t)).collect(),
        time,
    };
    let full = !negative.is_empty()
        || positive.iter().any(|l| l.shape.is_snapshot())
        || matches!(head.time, Some(TimeSlot::Const(_)));
    CompiledRule {
        vars: slots.names,
        positive,
        negative,
        compare,
        head,
        full,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    #[test]
    fn slots_are_shared_across_literals() {
        let p = parse_program("q(X,Y,Z) :- [3 t] <> a(X,Y), [3 #] <> b(Y,Z).").unwrap();
        let r = compile_rule(&p.rules[0], &p);
        assert_eq!(r.vars.len(), 3);
        assert_eq!(r.positive[0].vars, vec![0, 1]);
        assert_eq!(r.positive[1].vars, vec![1, 2]);
        assert!(!r.full);
    }

    #[test]
    fn bind_checks_repeated_variables_and_time() {
        let p = parse_program("q(X) :- [3 t] @[T] p(X,X,T).").unwrap();
        let r = compile_rule(&p.rules[0], &p);
        let lit = &r.positive[0];
        let mut scratch = vec![None; r.vars.len()];
        let a = GroundAtom::new("p", vec![Value::sym("c"), Value::sym("c"), Value::Int(4)]);
        assert_eq!(
            lit.bind(&a, 4, &mut scratch),
            Some(vec![Value::sym("c"), Value::Int(4)])
        );
        assert_eq!(lit.bind(&a, 5, &mut scratch), None);
        let b = GroundAtom::new("p", vec![Value::sym("c"), Value::sym("d"), Value::Int(4)]);
        assert_eq!(lit.bind(&b, 4, &mut scratch), None);
    }

    #[test]
    fn full_rules() {
        let p = parse_program(
            "a :- [2 t] [] b.\nc :- [2 t] <> b, not a.\n@[9] d :- [2 t] <> b.\ne :- [2 #] @[T] b.",
        )
        .unwrap();
        let full: Vec<bool> = p.rules.iter().map(|r| compile_rule(r, &p).full).collect();
        assert_eq!(full, vec![true, true, true, true]);
    }
}
