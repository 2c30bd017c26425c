use std::collections::BTreeSet;
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

use super::{ParseError, Rule};

/// Orders intensional predicates into strata.
///
/// Builds the dependency graph `head -> body predicate` over intensional
/// predicates; an edge is negative when the body atom is negated. Each
/// strongly connected component becomes one stratum, dependencies first.
/// A negative edge inside a component is a cycle through negation.
pub fn stratify(
    rules: &[Rule],
    intensional: &BTreeSet<Arc<str>>,
) -> Result<Vec<Vec<Arc<str>>>, ParseError> {
    let mut graph: DiGraphMap<&str, bool> = DiGraphMap::new();
    for p in intensional {
        graph.add_node(p);
    }
    for r in rules {
        let head = &*r.head.atom().predicate;
        for e in r.body_atoms() {
            let Some(a) = e.atom() else { continue };
            if !intensional.contains(&a.predicate) {
                continue;
            }
            let negative = e.is_negated();
            let existing = graph
                .edge_weight(head, &a.predicate)
                .copied()
                .unwrap_or(false);
            graph.add_edge(head, &a.predicate, existing || negative);
        }
    }

    let components = tarjan_scc(&graph);
    let mut strata = Vec::with_capacity(components.len());
    for comp in components {
        let members: BTreeSet<&str> = comp.iter().copied().collect();
        let cyclic_negation = comp.iter().any(|&from| {
            graph
                .edges(from)
                .any(|(_, to, &neg)| neg && members.contains(to))
        });
        if cyclic_negation {
            return Err(ParseError::NegationCycle {
                predicates: members.iter().map(|s| s.to_string()).collect(),
            });
        }
        strata.push(members.into_iter().map(Arc::from).collect());
    }
    Ok(strata)
}

#[cfg(test)]
mod tests {
    use crate::parser::{parse_program, ParseError};

    #[test]
    fn positive_program_single_stratum() {
        let p = parse_program("q(X,Y,Z) :- [3 t] <> a(X,Y), [3 #] <> b(Y,Z).").unwrap();
        assert_eq!(p.strata.len(), 1);
    }

    #[test]
    fn negation_cycle_is_rejected() {
        let err = parse_program("a :- not b.\nb :- not a.").unwrap_err();
        assert_eq!(
            err,
            ParseError::NegationCycle {
                predicates: vec!["a".into(), "b".into()]
            }
        );
        assert!(matches!(
            parse_program("a :- [2 t] <> a, not [3 t] <> a."),
            Err(ParseError::NegationCycle { .. })
        ));
    }

    #[test]
    fn negated_dependency_sits_above() {
        let p = parse_program(
            "alarm :- [5 t] [] hot.\nnormal :- [5 t] [] cold.\nfreeze :- not alarm, not normal.",
        )
        .unwrap();
        let f = p.stratum_of("freeze").unwrap();
        assert!(f > p.stratum_of("alarm").unwrap());
        assert!(f > p.stratum_of("normal").unwrap());
    }
}
