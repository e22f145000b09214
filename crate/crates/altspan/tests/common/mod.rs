//! Seeded instance generators shared by the integration suites.
//!
//! Every generator draws from a caller-owned RNG, so a failing case replays
//! from the suite's seed alone. The shapes are deliberately small — a few
//! states, letters, atoms, or nodes — because the cross-checks they feed are
//! exhaustive enumerations.

#![allow(dead_code)]

use std::collections::BTreeSet;

use altspan::acq::{Atom, ConjunctiveQuery, Database};
use altspan::grammar::{Grammar, GrammarBuilder, NonterminalId, Rule, Symbol};
use altspan::machine::normalize::principal_nodes;
use altspan::machine::run::{for_each_accepting_tree, RunBounds};
use altspan::machine::{canonical_encoding, out, Machine, MachineBuilder, Move, StateKind};
use altspan::wfwalks::{LabeledGraph, OcRelation};
use altspan::Error;
use rand::rngs::StdRng;
use rand::Rng;

/// A machine with at most five states and two
/// non-blank work letters. Transition groups are sparse on purpose: stuck
/// groups, unreachable states, and rejecting sinks are all part of the
/// population.
pub fn random_machine(rng: &mut StdRng) -> Machine {
    let n_states = rng.gen_range(2..=5);
    let letters: &[&str] = if rng.gen_bool(0.5) { &["a"] } else { &["a", "b"] };
    let mut b = MachineBuilder::new();
    let mut kinds = Vec::with_capacity(n_states);
    for i in 0..n_states {
        let kind = match rng.gen_range(0..10) {
            0..=3 => StateKind::Existential,
            4..=6 => StateKind::Universal,
            7..=8 => StateKind::Accept,
            _ => StateKind::Reject,
        };
        kinds.push(kind);
        b = b.state(&format!("q{i}"), kind);
    }
    let mut reads: Vec<String> = letters.iter().map(|s| s.to_string()).collect();
    reads.push("_".to_string());
    let outputs = [None, Some("x"), Some("y")];
    for (i, kind) in kinds.iter().enumerate() {
        if matches!(kind, StateKind::Accept | StateKind::Reject) {
            continue;
        }
        for read in &reads {
            if rng.gen_bool(0.3) {
                continue;
            }
            let fan = match kind {
                StateKind::Universal => rng.gen_range(1..=4),
                _ => rng.gen_range(1..=3),
            };
            // Deduplicate (to, write, move, output) per group: declaring the
            // exact same transition twice is a validation error.
            let mut group: BTreeSet<(usize, String, bool, Option<&str>)> = BTreeSet::new();
            for _ in 0..fan {
                group.insert((
                    rng.gen_range(0..n_states),
                    reads[rng.gen_range(0..reads.len())].clone(),
                    rng.gen_bool(0.5),
                    outputs[rng.gen_range(0..outputs.len())],
                ));
            }
            for (to, write, right, output) in group {
                let movement = if right { Move::Right } else { Move::Left };
                b = b.transition(&format!("q{i}"), read, &format!("q{to}"), &write, movement, output);
            }
        }
    }
    b.build().expect("generated machine is structurally valid")
}

/// A normal-form grammar with at most five nonterminals over at most three
/// terminal letters. The empty-word rule appears only when the start symbol
/// stays off every right-hand side.
pub fn random_cnf_grammar(rng: &mut StdRng) -> Grammar {
    let n = rng.gen_range(1..=5);
    let names: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
    let sigma = ["a", "b", "c"];
    let n_terms = rng.gen_range(1..=3);
    let mut rules = Vec::new();
    for lhs in 0..n {
        let mut seen = BTreeSet::new();
        for _ in 0..rng.gen_range(1..=3) {
            let rhs = if rng.gen_bool(0.5) {
                let l = rng.gen_range(0..n);
                let r = rng.gen_range(0..n);
                vec![
                    Symbol::Nonterminal(NonterminalId(l)),
                    Symbol::Nonterminal(NonterminalId(r)),
                ]
            } else {
                vec![Symbol::Terminal(sigma[rng.gen_range(0..n_terms)].to_string())]
            };
            if seen.insert(rhs.clone()) {
                rules.push(Rule {
                    lhs: NonterminalId(lhs),
                    rhs,
                });
            }
        }
    }
    if rng.gen_bool(0.3) {
        let start_on_rhs = rules.iter().any(|r| {
            r.rhs
                .iter()
                .any(|s| matches!(s, Symbol::Nonterminal(NonterminalId(0))))
        });
        if !start_on_rhs {
            rules.push(Rule {
                lhs: NonterminalId(0),
                rhs: vec![],
            });
        }
    }
    Grammar::new(names, "N0", rules).expect("generated grammar is structurally valid")
}

/// An unrestricted grammar: right-hand sides mix terminals and nonterminals
/// freely, with lengths zero through three.
pub fn random_general_grammar(rng: &mut StdRng) -> Grammar {
    let n = rng.gen_range(1..=4);
    let names: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
    let sigma = ["a", "b"];
    let mut rules = Vec::new();
    for lhs in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(0..=3);
            let rhs = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Symbol::Terminal(sigma[rng.gen_range(0..sigma.len())].to_string())
                    } else {
                        Symbol::Nonterminal(NonterminalId(rng.gen_range(0..n)))
                    }
                })
                .collect();
            rules.push(Rule {
                lhs: NonterminalId(lhs),
                rhs,
            });
        }
    }
    Grammar::new(names, "N0", rules).expect("generated grammar is structurally valid")
}

/// A tree-shaped (hence acyclic) query over a freshly populated database:
/// at most three atoms, each sharing variables only with its parent atom,
/// and at most twenty tuples per relation. Atoms of equal arity sometimes
/// reuse a relation, so self-joins occur.
pub fn random_acyclic_instance(rng: &mut StdRng) -> (Database, ConjunctiveQuery) {
    let n_atoms = rng.gen_range(1..=3);
    let mut var_counter = 0usize;
    let mut atom_vars: Vec<Vec<String>> = Vec::new();
    for i in 0..n_atoms {
        let arity = rng.gen_range(1..=3);
        let mut vars: Vec<String> = Vec::new();
        if i > 0 {
            let parent = &atom_vars[rng.gen_range(0..i)];
            for v in parent {
                if vars.len() < arity && rng.gen_bool(0.5) {
                    vars.push(v.clone());
                }
            }
        }
        while vars.len() < arity {
            if !vars.is_empty() && rng.gen_bool(0.15) {
                vars.push(vars[rng.gen_range(0..vars.len())].clone());
            } else {
                vars.push(format!("v{var_counter}"));
                var_counter += 1;
            }
        }
        atom_vars.push(vars);
    }

    let mut relation_names: Vec<String> = Vec::new();
    let mut db = Database::new();
    for (i, vars) in atom_vars.iter().enumerate() {
        let reuse = relation_names
            .iter()
            .enumerate()
            .find(|(j, _)| atom_vars[*j].len() == vars.len() && rng.gen_bool(0.2))
            .map(|(_, name)| name.clone());
        let name = match reuse {
            Some(name) => name,
            None => {
                let name = format!("R{i}");
                let domain = rng.gen_range(1..=4);
                db.add_relation(&name, vars.len()).unwrap();
                for _ in 0..rng.gen_range(0..=20) {
                    let tuple: Vec<String> = (0..vars.len())
                        .map(|_| rng.gen_range(0..domain).to_string())
                        .collect();
                    db.add_tuple(&name, &tuple).unwrap();
                }
                name
            }
        };
        relation_names.push(name);
    }

    let mut all_vars: Vec<&String> = Vec::new();
    for vars in &atom_vars {
        for v in vars {
            if !all_vars.contains(&v) {
                all_vars.push(v);
            }
        }
    }
    let free: Vec<&str> = all_vars
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|v| v.as_str())
        .collect();
    let atoms = relation_names
        .iter()
        .zip(&atom_vars)
        .map(|(name, vars)| Atom::new(name, vars))
        .collect();
    (db, ConjunctiveQuery::new(&free, atoms))
}

/// A labeled graph with at most six nodes, plus a pairing over its labels.
/// Three regimes rotate: two disjoint bracket pairs with a neutral letter,
/// overlapping pairs (so some letters open and close), and the empty pairing.
/// A few edges carry no label at all.
pub fn random_walk_instance(rng: &mut StdRng) -> (LabeledGraph, OcRelation) {
    let (alphabet, oc): (&[&str], OcRelation) = match rng.gen_range(0..3) {
        0 => (
            &["a", "(", ")", "[", "]"],
            OcRelation::new(&[("(", ")"), ("[", "]")]),
        ),
        1 => {
            let pool = [("a", "b"), ("b", "c"), ("b", "b"), ("c", "a")];
            let mut pairs: Vec<(&str, &str)> = Vec::new();
            for p in pool {
                if rng.gen_bool(0.5) {
                    pairs.push(p);
                }
            }
            (&["a", "b", "c"], OcRelation::new(&pairs))
        }
        _ => (&["a", "b"], OcRelation::new(&[])),
    };
    let n_nodes = rng.gen_range(1..=6);
    let mut g = LabeledGraph::new();
    for i in 0..n_nodes {
        g.add_node(&format!("n{i}")).unwrap();
    }
    // Edge count scales with node count so walk counts stay enumerable.
    for _ in 0..rng.gen_range(0..=2 * n_nodes) {
        let from = format!("n{}", rng.gen_range(0..n_nodes));
        let to = format!("n{}", rng.gen_range(0..n_nodes));
        if rng.gen_bool(0.15) {
            g.add_unlabeled_edge(&from, &to).unwrap();
        } else {
            g.add_edge(&from, &alphabet[rng.gen_range(0..alphabet.len())], &to)
                .unwrap();
        }
    }
    (g, oc)
}

/// Distinct output encodings over accepting trees with at most
/// `principal_cap` non-bookkeeping nodes, enumerated under a raw node budget
/// of `raw_cap`. For a machine without bookkeeping states this is the plain
/// output set.
pub fn outputs_principal_capped(
    m: &Machine,
    input: &str,
    space: usize,
    principal_cap: usize,
    raw_cap: usize,
    step_cap: usize,
) -> Result<BTreeSet<String>, Error> {
    let bounds = RunBounds::new(space, raw_cap)?;
    let mut seen = BTreeSet::new();
    for_each_accepting_tree(m, input, bounds, Some(step_cap), |t| {
        if principal_nodes(m, &t) <= principal_cap {
            seen.insert(canonical_encoding(&out(&t)));
        }
    })?;
    Ok(seen)
}

/// S → a S b | ε, left in its raw (non-normal-form) shape.
pub fn anbn_grammar() -> Grammar {
    GrammarBuilder::new()
        .rule("S", &["a", "S", "b"])
        .rule::<&str>("S", &[])
        .build()
        .unwrap()
}

/// S → S S | a: one word per length, Catalan-many derivations.
pub fn catalan_grammar() -> Grammar {
    GrammarBuilder::new()
        .rule("S", &["S", "S"])
        .rule("S", &["a"])
        .build()
        .unwrap()
}

/// Balanced parentheses, S → S S | ( S ) | ε: an ambiguous grammar whose
/// words carry genuinely different derivation counts.
pub fn parens_grammar() -> Grammar {
    GrammarBuilder::new()
        .rule("S", &["S", "S"])
        .rule("S", &["(", "S", ")"])
        .rule::<&str>("S", &[])
        .build()
        .unwrap()
}
