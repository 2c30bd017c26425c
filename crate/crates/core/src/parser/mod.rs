//! Program and stream file parsing.
//!
//! Program syntax:
//!
//! ```text
//! % comment
//! q(X,Y,Z) :- [3 t] <> a(X,Y), [3 #] <> b(Y,Z).
//! @[T] steam(V) :- [n t] @[T] temp(V), V >= 100.
//! freeze :- not alarm, not normal.
//! ```
//!
//! Windows are `[N t]` (time) or `[N #]` (tuple) followed by `<>`, `[]` or
//! `@[T]`. `N` may be a named constant supplied at parse time.

mod ast;
mod lexer;
mod stratify;
mod stream;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::model::{
    Atom, ModelError, PredicateKind, Term, Time, Value, Var, WindowKind, WindowSpec,
};
use lexer::{Spanned, Tok};

pub use ast::{CmpOp, Comparison, ExtendedAtom, Head, Literal, Modality, Program, Rule, TimeTerm};
pub use stratify::stratify;
pub use stream::{parse_background, parse_stream, parse_stream_line, StreamLine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unresolved constant `{name}` (pass --const {name}=<value>)")]
    UnresolvedConstant {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("unsafe rule `{rule}`: variable {var} does not occur in a positive body atom")]
    Unsafe { rule: String, var: String },
    #[error(
        "unsafe rule `{rule}`: head time variable {var} does not occur in a positive body @-atom"
    )]
    UnsafeTime { rule: String, var: String },
    #[error("rule `{rule}` has no positive body atom")]
    NoPositiveBody { rule: String },
    #[error("rule `{rule}`: tuple window over intensional predicate `{predicate}`")]
    TupleOverIntensional { rule: String, predicate: String },
    #[error("rule `{rule}`: comparison over symbolic constant `{value}`")]
    SymbolicComparison { rule: String, value: String },
    #[error("cycle through negation among predicates {}", predicates.join(", "))]
    NegationCycle { predicates: Vec<String> },
    #[error("line {line}: {source}")]
    Stream { line: usize, source: ModelError },
    #[error("line {line}: atom `{atom}` contains a variable")]
    NonGroundData { line: usize, atom: String },
    #[error("line {line}: malformed line: {message}")]
    MalformedLine { line: usize, message: String },
}

/// Named integer constants available to a program (window sizes, time
/// points).
pub type Consts = HashMap<String, i64>;

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with(text, &Consts::new())
}

/// Parses, rewrites negation, checks safety and stratifies.
pub fn parse_program_with(text: &str, consts: &Consts) -> Result<Program, ParseError> {
    let toks = lexer::lex(text, 0)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        consts,
    };
    let mut rules = Vec::new();
    while !p.at_end() {
        rules.push(rewrite_negation(&p.rule()?));
    }
    build_program(rules)
}

/// Validates already-rewritten rules and assembles the program.
pub(crate) fn build_program(mut rules: Vec<Rule>) -> Result<Program, ParseError> {
    let intensional: BTreeSet<Arc<str>> = rules
        .iter()
        .map(|r| r.head.atom().predicate.clone())
        .collect();
    for r in &rules {
        check_rule(r, &intensional)?;
    }
    let strata = stratify(&rules, &intensional)?;
    let index: HashMap<&str, usize> = strata
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |p| (&**p, i)))
        .collect();
    for r in &mut rules {
        r.stratum = index[&*r.head.atom().predicate];
    }
    let mut kinds = HashMap::new();
    for r in &rules {
        for e in r.body_atoms() {
            if let Some(a) = e.atom() {
                kinds.insert(a.predicate.clone(), PredicateKind::Extensional);
            }
        }
    }
    for p in &intensional {
        kinds.insert(p.clone(), PredicateKind::Intensional);
    }
    Ok(Program {
        rules,
        strata,
        kinds,
    })
}

/// Pushes every `not` in front of atoms:
/// `not [w] <> a` becomes `[w] [] not a`, `not [w] [] a` becomes
/// `[w] <> not a`, `not [w] @[t] a` becomes `[w] @[t] not a` and a negated
/// comparison flips its operator.
///
/// The `@` case assumes `t` lies in the window's timeline; a bound time
/// variable always does.
pub fn rewrite_negation(rule: &Rule) -> Rule {
    let body = rule
        .body
        .iter()
        .map(|l| {
            if !l.negated {
                return l.clone();
            }
            let elem = match &l.elem {
                ExtendedAtom::Plain { atom, negated } => ExtendedAtom::Plain {
                    atom: atom.clone(),
                    negated: !negated,
                },
                ExtendedAtom::At {
                    time,
                    atom,
                    negated,
                } => ExtendedAtom::At {
                    time: time.clone(),
                    atom: atom.clone(),
                    negated: !negated,
                },
                ExtendedAtom::Window {
                    window,
                    modality,
                    atom,
                    negated,
                } => ExtendedAtom::Window {
                    window: *window,
                    modality: match modality {
                        Modality::Diamond => Modality::Box,
                        Modality::Box => Modality::Diamond,
                        at => at.clone(),
                    },
                    atom: atom.clone(),
                    negated: !negated,
                },
                ExtendedAtom::Compare(c) => ExtendedAtom::Compare(Comparison {
                    op: c.op.negate(),
                    lhs: c.lhs.clone(),
                    rhs: c.rhs.clone(),
                }),
            };
            Literal {
                negated: false,
                elem,
            }
        })
        .collect();
    Rule {
        head: rule.head.clone(),
        body,
        stratum: rule.stratum,
    }
}

fn check_rule(rule: &Rule, intensional: &BTreeSet<Arc<str>>) -> Result<(), ParseError> {
    let text = || rule.to_string();
    let mut bound: BTreeSet<Var> = BTreeSet::new();
    let mut at_bound: BTreeSet<Var> = BTreeSet::new();
    let mut any_positive = false;
    for e in rule.positive() {
        any_positive = true;
        bound.extend(e.vars());
        if let Some(TimeTerm::Var(v)) = e.time_term() {
            at_bound.insert(v.clone());
        }
    }
    if !any_positive {
        // Ground rules whose body is only negation are fine (e.g.
        // `freeze :- not alarm, not normal.`); bodies of comparisons only
        // are not.
        let only_negation = !rule.body.is_empty()
            && rule
                .body_atoms()
                .all(|e| e.is_negated() && !matches!(e, ExtendedAtom::Compare(_)));
        if !only_negation {
            return Err(ParseError::NoPositiveBody { rule: text() });
        }
    }
    let mut needed: BTreeSet<Var> = rule.head.vars();
    for e in rule.body_atoms() {
        if e.is_negated() || matches!(e, ExtendedAtom::Compare(_)) {
            needed.extend(e.vars());
        }
    }
    if let Some(v) = needed.iter().find(|v| !bound.contains(*v)) {
        return Err(ParseError::Unsafe {
            rule: text(),
            var: v.to_string(),
        });
    }
    if let Head::At(TimeTerm::Var(v), _) = &rule.head {
        if !at_bound.contains(v) {
            return Err(ParseError::UnsafeTime {
                rule: text(),
                var: v.to_string(),
            });
        }
    }
    for e in rule.body_atoms() {
        match e {
            ExtendedAtom::Window { window, atom, .. }
                if window.kind == WindowKind::Tuple && intensional.contains(&atom.predicate) =>
            {
                return Err(ParseError::TupleOverIntensional {
                    rule: text(),
                    predicate: atom.predicate.to_string(),
                });
            }
            ExtendedAtom::Compare(c) => {
                for t in [&c.lhs, &c.rhs] {
                    if let Term::Const(v @ Value::Sym(_)) = t {
                        return Err(ParseError::SymbolicComparison {
                            rule: text(),
                            value: v.to_string(),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    consts: &'a Consts,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) if self.pos < self.toks.len() => (s.line, s.col),
            Some(s) => (s.line, s.col + 1),
            None => (1, 1),
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        let found = match self.peek() {
            Some(t) => format!(", found {}", t.describe()),
            None => ", found end of input".into(),
        };
        Err(ParseError::Syntax {
            line,
            col,
            message: format!("{}{found}", message.into()),
        })
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {}", tok.describe()))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_not(&mut self) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "not") {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let head = if self.eat(&Tok::At) {
            let t = self.time_term()?;
            Head::At(t, self.atom()?)
        } else {
            Head::Atom(self.atom()?)
        };
        if self.peek() == Some(&Tok::Dot) {
            return self.error("rule body must not be empty (static facts belong in background data); expected `:-`");
        }
        self.expect(Tok::If)?;
        let mut body = vec![self.literal()?];
        while self.eat(&Tok::Comma) {
            body.push(self.literal()?);
        }
        self.expect(Tok::Dot)?;
        Ok(Rule {
            head,
            body,
            stratum: 0,
        })
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negated = self.eat_not();
        let elem = self.extended_atom()?;
        Ok(Literal { negated, elem })
    }

    fn extended_atom(&mut self) -> Result<ExtendedAtom, ParseError> {
        match self.peek() {
            Some(Tok::LBracket) => {
                let window = self.window()?;
                let modality = match self.peek() {
                    Some(Tok::Diamond) => {
                        self.pos += 1;
                        Modality::Diamond
                    }
                    Some(Tok::Box) => {
                        self.pos += 1;
                        Modality::Box
                    }
                    Some(Tok::At) => {
                        self.pos += 1;
                        Modality::At(self.time_term()?)
                    }
                    _ => return self.error("expected `<>`, `[]` or `@[T]` after window"),
                };
                let negated = self.eat_not();
                let atom = self.atom()?;
                Ok(ExtendedAtom::Window {
                    window,
                    modality,
                    atom,
                    negated,
                })
            }
            Some(Tok::At) => {
                self.pos += 1;
                let time = self.time_term()?;
                let negated = self.eat_not();
                let atom = self.atom()?;
                Ok(ExtendedAtom::At {
                    time,
                    atom,
                    negated,
                })
            }
            Some(Tok::Diamond) | Some(Tok::Box) => {
                self.error("`<>` and `[]` must be preceded by a window")
            }
            Some(Tok::Var(_)) | Some(Tok::Int(_)) => self.comparison(),
            Some(Tok::Ident(_)) if self.peek2().is_some_and(is_cmp) => self.comparison(),
            Some(Tok::Ident(s)) if s == "not" => {
                let negated = self.eat_not();
                let atom = self.atom()?;
                Ok(ExtendedAtom::Plain { atom, negated })
            }
            _ => Ok(ExtendedAtom::Plain {
                atom: self.atom()?,
                negated: false,
            }),
        }
    }

    fn comparison(&mut self) -> Result<ExtendedAtom, ParseError> {
        let lhs = self.term()?;
        let op = match self.bump() {
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Ge) => CmpOp::Ge,
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            _ => {
                self.pos -= 1;
                return self.error("expected comparison operator");
            }
        };
        let rhs = self.term()?;
        Ok(ExtendedAtom::Compare(Comparison { op, lhs, rhs }))
    }

    fn window(&mut self) -> Result<WindowSpec, ParseError> {
        self.expect(Tok::LBracket)?;
        let size = self.natural("window size")?;
        let kind = match self.bump() {
            Some(Tok::Ident(s)) if s == "t" => WindowKind::Time,
            Some(Tok::Hash) => WindowKind::Tuple,
            _ => {
                self.pos -= 1;
                return self.error("expected `t` or `#` in window");
            }
        };
        if kind == WindowKind::Tuple && size == 0 {
            self.pos -= 1;
            return self.error("tuple windows must have size >= 1");
        }
        self.expect(Tok::RBracket)?;
        Ok(WindowSpec { kind, size })
    }

    fn time_term(&mut self) -> Result<TimeTerm, ParseError> {
        self.expect(Tok::LBracket)?;
        let t = match self.peek() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                TimeTerm::Var(Var::new(v))
            }
            _ => TimeTerm::Const(self.natural("time point")? as Time),
        };
        self.expect(Tok::RBracket)?;
        Ok(t)
    }

    /// A non-negative integer literal or named constant.
    fn natural(&mut self, what: &str) -> Result<u64, ParseError> {
        let (line, col) = self.here();
        let v = match self.peek() {
            Some(Tok::Int(i)) => *i,
            Some(Tok::Ident(name)) => match self.consts.get(name) {
                Some(v) => *v,
                None => {
                    return Err(ParseError::UnresolvedConstant {
                        name: name.clone(),
                        line,
                        col,
                    })
                }
            },
            _ => return self.error(format!("expected {what}")),
        };
        if v < 0 {
            return self.error(format!("{what} must be non-negative"));
        }
        self.pos += 1;
        Ok(v as u64)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::var(v))
            }
            Some(Tok::Int(i)) => {
                self.pos += 1;
                Ok(Term::Const(Value::Int(*i)))
            }
            Some(Tok::Ident(s)) if s != "not" => {
                self.pos += 1;
                Ok(Term::Const(Value::sym(s)))
            }
            _ => self.error("expected term"),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let pred = match self.peek() {
            Some(Tok::Ident(s)) if s != "not" => s.clone(),
            _ => return self.error("expected predicate"),
        };
        self.pos += 1;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            args.push(self.term()?);
            while self.eat(&Tok::Comma) {
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
        }
        Ok(Atom::new(&pred, args))
    }
}

fn is_cmp(t: &Tok) -> bool {
    matches!(t, Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge | Tok::Eq | Tok::Ne)
}

/// Parses a single ground atom from a token slice; used by stream and
/// background parsing. Returns the atom and the number of tokens used.
pub(crate) fn parse_atom_tokens(toks: &[Spanned]) -> Result<(Atom, usize), ParseError> {
    let consts = Consts::new();
    let mut p = Parser {
        toks,
        pos: 0,
        consts: &consts,
    };
    let a = p.atom()?;
    Ok((a, p.pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_rule(src: &str) -> Rule {
        let p = parse_program(src).unwrap();
        assert_eq!(p.rules.len(), 1);
        p.rules[0].clone()
    }

    #[test]
    fn join_rule() {
        let r = one_rule("q(X,Y,Z) :- [3 t] <> a(X,Y), [3 #] <> b(Y,Z).");
        assert_eq!(r.head.to_string(), "q(X,Y,Z)");
        assert_eq!(r.body.len(), 2);
        match &r.body[1].elem {
            ExtendedAtom::Window {
                window, modality, ..
            } => {
                assert_eq!(*window, WindowSpec::tuple(3).unwrap());
                assert_eq!(*modality, Modality::Diamond);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            r.to_string(),
            "q(X,Y,Z) :- [3 t] <> a(X,Y), [3 #] <> b(Y,Z)."
        );
    }

    #[test]
    fn cooling_rule_with_named_constant() {
        let consts: Consts = [("n".to_string(), 5)].into();
        let p =
            parse_program_with("@[T] steam(V) :- [n t] @[T] temp(V), V >= 100.", &consts).unwrap();
        assert_eq!(
            p.rules[0].to_string(),
            "@[T] steam(V) :- [5 t] @[T] temp(V), V >= 100."
        );
        let err = parse_program("@[T] steam(V) :- [n t] @[T] temp(V).").unwrap_err();
        assert!(matches!(err, ParseError::UnresolvedConstant { ref name, .. } if name == "n"));
    }

    #[test]
    fn tuple_window_over_intensional_is_rejected() {
        assert!(parse_program("a :- [1 #] <> b.").is_ok());
        let err = parse_program("a :- [1 #] <> b.\nb :- [2 t] <> c.").unwrap_err();
        assert!(matches!(err, ParseError::TupleOverIntensional { .. }));
    }

    #[test]
    fn negation_rewrites() {
        let r = one_rule("q(X) :- p(X), not [2 t] <> r(X).");
        assert_eq!(r.body[1].to_string(), "[2 t] [] not r(X)");
        let r = one_rule("q(X) :- p(X), not [2 t] [] r(X).");
        assert_eq!(r.body[1].to_string(), "[2 t] <> not r(X)");
        let r = one_rule("q(X) :- p(X), not r(X).");
        assert_eq!(r.body[1].to_string(), "not r(X)");
        let r = one_rule("q(X) :- [3 t] @[T] p(X), not [3 t] @[T] r(X).");
        assert_eq!(r.body[1].to_string(), "[3 t] @[T] not r(X)");
        let r = one_rule("q(X) :- p(X), not X < 3.");
        assert_eq!(r.body[1].to_string(), "X >= 3");
        let r = one_rule("q(X) :- p(X), not [2 t] <> not r(X).");
        assert_eq!(r.body[1].to_string(), "[2 t] [] r(X)");
    }

    #[test]
    fn rewriting_is_idempotent() {
        let r = one_rule("q(X) :- p(X), not [2 t] <> r(X), not s(X).");
        assert_eq!(rewrite_negation(&r), r);
    }

    #[test]
    fn safety_errors() {
        assert!(matches!(
            parse_program("q(X,Y) :- p(X)."),
            Err(ParseError::Unsafe { .. })
        ));
        assert!(matches!(
            parse_program("q(X) :- p(X), not r(Y)."),
            Err(ParseError::Unsafe { .. })
        ));
        assert!(matches!(
            parse_program("q :- 1 < 2."),
            Err(ParseError::NoPositiveBody { .. })
        ));
        assert!(matches!(
            parse_program("@[T] q :- [3 t] <> p(T)."),
            Err(ParseError::UnsafeTime { .. })
        ));
        assert!(matches!(
            parse_program("q(X) :- p(X), X < abc."),
            Err(ParseError::SymbolicComparison { .. })
        ));
        assert!(parse_program("freeze :- not alarm, not normal.").is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_program("q(X) :- <> p(X).").unwrap_err();
        assert!(
            matches!(
                err,
                ParseError::Syntax {
                    line: 1,
                    col: 9,
                    ..
                }
            ),
            "{err}"
        );
        let err = parse_program("q(X) :- p(X)\nr :- s.").unwrap_err();
        assert!(
            matches!(
                err,
                ParseError::Syntax {
                    line: 2,
                    col: 1,
                    ..
                }
            ),
            "{err}"
        );
        let err = parse_program("q.").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
        let err = parse_program("q :- [0 #] <> p.").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn kinds_are_inferred_from_heads() {
        let p = parse_program("q(X) :- [3 t] <> p(X).").unwrap();
        assert_eq!(p.kind("q"), PredicateKind::Intensional);
        assert_eq!(p.kind("p"), PredicateKind::Extensional);
        assert_eq!(p.max_time_window(), 3);
    }
}
