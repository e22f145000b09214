//! Compilers connecting machines and grammars.
//!
//! [`machine_to_grammar`] turns a space-bounded machine into a grammar whose
//! words are bracket encodings of the machine's output forests, one word per
//! distinct forest. [`grammar_to_machine`] goes the other way: from a CNF
//! grammar and a word length to a machine whose accepting trees are the
//! grammar's parse trees of that length and whose output forests spell the
//! parsed words.

use std::collections::{HashMap, VecDeque};

use crate::error::Error;
use crate::grammar::{Grammar, NonterminalId, Rule, Symbol};
use crate::machine::run::RunBounds;
use crate::machine::{
    Configuration, Machine, MachineBuilder, Move, OutputForest, OutputTree, StateKind,
};

/// Terminal token opening a subtree labeled `letter` in bracket encoding.
pub fn open_token(letter: &str) -> String {
    format!("({letter}")
}

/// Terminal token closing a subtree labeled `letter`.
pub fn close_token(letter: &str) -> String {
    format!("){letter}")
}

/// Decodes a bracket-encoded word back into the forest it denotes. Fails on
/// unbalanced or mismatched brackets and on tokens that are not brackets.
pub fn bracket_word_to_forest(word: &[String]) -> Result<OutputForest, Error> {
    let mut stack: Vec<(String, Vec<OutputTree>)> = Vec::new();
    let mut current: Vec<OutputTree> = Vec::new();
    for tok in word {
        if let Some(label) = tok.strip_prefix('(') {
            stack.push((label.to_string(), std::mem::take(&mut current)));
        } else if let Some(label) = tok.strip_prefix(')') {
            let (open, siblings) = stack
                .pop()
                .ok_or_else(|| Error::validation(format!("unmatched closing token `{tok}`")))?;
            if open != label {
                return Err(Error::validation(format!(
                    "bracket mismatch: `({open}` closed by `{tok}`"
                )));
            }
            let node = OutputTree::node(&open, std::mem::take(&mut current));
            current = siblings;
            current.push(node);
        } else {
            return Err(Error::validation(format!(
                "token `{tok}` is neither an opening nor a closing bracket"
            )));
        }
    }
    if let Some((open, _)) = stack.pop() {
        return Err(Error::validation(format!("unclosed bracket `({open}`")));
    }
    Ok(OutputForest(current))
}

/// Compiles a machine (on a fixed input, within a space bound) to a grammar.
///
/// Nonterminals are the reachable configurations; the start symbol is the
/// starting configuration. An accepting configuration derives ε, an
/// existential one has a rule per successor, and a universal one has a
/// single rule concatenating all successors in declaration order. A
/// transition's emitted letter wraps its successor between
/// [`open_token`]/[`close_token`] pairs, so each word of the language is the
/// bracket encoding of one distinct output forest, taken over accepting
/// computation trees of *any* size that respect the space bound. To make the
/// language reflect a tree-size bound as well, apply
/// [`enforce_budget`](crate::machine::normalize::enforce_budget) first.
///
/// Configurations that would exceed the space bound become nonterminals with
/// no rules, which derive nothing — mirroring how enumeration kills such
/// branches.
pub fn machine_to_grammar(m: &Machine, input: &str, space: usize) -> Result<Grammar, Error> {
    if space == 0 {
        return Err(Error::validation("space bound must be at least 1"));
    }
    m.validate_input(input)?;
    fn intern(
        m: &Machine,
        c: &Configuration,
        names: &mut Vec<String>,
        ids: &mut HashMap<String, NonterminalId>,
        queue: &mut VecDeque<(Configuration, NonterminalId)>,
    ) -> NonterminalId {
        let key = c.key(m);
        match ids.get(&key) {
            Some(&id) => id,
            None => {
                let id = NonterminalId(names.len());
                names.push(key.clone());
                ids.insert(key, id);
                queue.push_back((c.clone(), id));
                id
            }
        }
    }
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, NonterminalId> = HashMap::new();
    let mut queue: VecDeque<(Configuration, NonterminalId)> = VecDeque::new();
    let mut rules: Vec<Rule> = Vec::new();
    let wrap = |out: &crate::machine::OutputSymbol, child: NonterminalId| -> Vec<Symbol> {
        match out.letter() {
            None => vec![Symbol::Nonterminal(child)],
            Some(l) => vec![
                Symbol::Terminal(open_token(l)),
                Symbol::Nonterminal(child),
                Symbol::Terminal(close_token(l)),
            ],
        }
    };
    let init = m.initial_config();
    intern(m, &init, &mut names, &mut ids, &mut queue);
    while let Some((config, lhs)) = queue.pop_front() {
        if config.space() > space {
            continue; // dead end: no rules, derives nothing
        }
        match m.kind(config.state) {
            StateKind::Accept => rules.push(Rule {
                lhs,
                rhs: Vec::new(),
            }),
            StateKind::Reject => {}
            StateKind::Existential => {
                for (succ, out) in m.successors(input, &config)? {
                    let child = intern(m, &succ, &mut names, &mut ids, &mut queue);
                    rules.push(Rule {
                        lhs,
                        rhs: wrap(&out, child),
                    });
                }
            }
            StateKind::Universal => {
                let succs = m.successors(input, &config)?;
                if !succs.is_empty() {
                    let mut rhs = Vec::new();
                    for (succ, out) in succs {
                        let child = intern(m, &succ, &mut names, &mut ids, &mut queue);
                        rhs.extend(wrap(&out, child));
                    }
                    rules.push(Rule { lhs, rhs });
                }
            }
        }
    }
    let start = names[0].clone();
    Grammar::new(names, &start, rules)
}

/// A machine compiled from a grammar, plus the input and bounds to run it
/// with.
#[derive(Debug, Clone)]
pub struct CompiledInstance {
    pub machine: Machine,
    pub input: String,
    pub bounds: RunBounds,
}

/// Compiles a CNF grammar and a target word length into a machine whose
/// accepting computation trees are in bijection with the grammar's parse
/// trees of length-`len` words.
///
/// A derivation state for (nonterminal, remaining length) guesses a rule —
/// and for a pair rule, how to split the length — existentially; a universal
/// split state then demands both halves derive, left child first, so
/// emitted letters appear in word order. Each terminal rule emits its letter
/// into its own accepting leaf, which keeps duplicated rules distinguishable
/// and makes tree counts equal parse counts (multiplicity included). The
/// output forest of a tree is the flat sequence of the word's letters, so
/// distinct words give distinct forests:
/// [`span`](crate::machine::run::span) of the instance is the number of
/// length-`len` words, and [`count_trees`](crate::machine::run::count_trees)
/// is the total number of their parses.
///
/// The work tape stays all-blank; heads drift (right halves of splits step
/// right) but visit at most `len + 1` cells. The returned bounds carry that
/// space and tree size `4·len + 4`, enough for the exact `4·len − 2` nodes
/// an accepting tree has (2 when `len` is 0).
pub fn grammar_to_machine(g: &Grammar, len: usize) -> Result<CompiledInstance, Error> {
    if !g.is_cnf() {
        return Err(Error::validation(
            "machine compilation requires Chomsky normal form",
        ));
    }
    let mut b = MachineBuilder::new().input_letters("1");
    let d_name = |a: NonterminalId, l: usize| format!("d:{}:{l}", g.name(a));
    let mut accepts: std::collections::BTreeSet<usize> = Default::default();
    let mut declared: std::collections::HashSet<(NonterminalId, usize)> =
        std::collections::HashSet::new();
    let mut queue: VecDeque<(NonterminalId, usize)> = VecDeque::new();
    if len == 0 {
        b = b.state("d:0", StateKind::Existential);
        for (r, rule) in g.rules().iter().enumerate() {
            if rule.lhs == g.start() && rule.rhs.is_empty() {
                b = b.transition("d:0", "_", &format!("acc:{r}"), "_", Move::Left, None);
                accepts.insert(r);
            }
        }
    } else {
        declared.insert((g.start(), len));
        queue.push_back((g.start(), len));
    }
    while let Some((a, l)) = queue.pop_front() {
        let da = d_name(a, l);
        b = b.state(&da, StateKind::Existential);
        for (r, rule) in g.rules().iter().enumerate() {
            if rule.lhs != a {
                continue;
            }
            match rule.rhs.as_slice() {
                [Symbol::Terminal(t)] if l == 1 => {
                    b = b.transition(&da, "_", &format!("acc:{r}"), "_", Move::Left, Some(t));
                    accepts.insert(r);
                }
                [Symbol::Nonterminal(left), Symbol::Nonterminal(right)] if l >= 2 => {
                    for s in 1..l {
                        let u = format!("u:{r}:{s}:{}", l - s);
                        // The two halves move opposite ways so the pair stays
                        // distinguishable even when both target the same
                        // state (e.g. S -> S S split down the middle). The
                        // tape stays all-blank, so this only drifts the head.
                        b = b
                            .state(&u, StateKind::Universal)
                            .transition(&da, "_", &u, "_", Move::Left, None)
                            .transition(&u, "_", &d_name(*left, s), "_", Move::Left, None)
                            .transition(&u, "_", &d_name(*right, l - s), "_", Move::Right, None);
                        for child in [(*left, s), (*right, l - s)] {
                            if declared.insert(child) {
                                queue.push_back(child);
                            }
                        }
                    }
                }
                _ => {}
            }
        }
    }
    for r in accepts {
        b = b.state(&format!("acc:{r}"), StateKind::Accept);
    }
    Ok(CompiledInstance {
        machine: b.build()?,
        input: "1".repeat(len),
        bounds: RunBounds::new(len + 1, 4 * len + 4)?,
    })
}
