//! Counting distinct well-formed walk labelings.
//!
//! Given a directed edge-labeled multigraph and an opening/closing relation
//! `oc` over labels, a label string is *well-formed* when it parses as a
//! sequence of neutral letters and properly nested `oc` bracket pairs:
//!
//! ```text
//! S → ε | α S | ψ S ψ′ S      α neutral, (ψ, ψ′) ∈ oc
//! ```
//!
//! A label is neutral only when it appears in no `oc` pair; labels that both
//! open and close participate solely through the bracket rule. Edges may be
//! unlabeled: they consume one step of walk length and contribute no letter.
//! The query counts the *distinct* well-formed strings spelled by walks of a
//! given length between two nodes — walks, not paths, so revisits are fine,
//! and two walks spelling the same string count once.
//!
//! A stricter variant ([`WfVariant::Strict`]) drops the trailing `S` from
//! the bracket rule, so nothing may follow a closed pair; it exists for
//! comparison and is not what the walk counters use.
//!
//! Three routes compute the count: a machine whose span is the answer
//! (letters are emitted as flat accept-leaves, so output forests are exactly
//! label sequences), a memoized set recursion mirroring the grammar, and a
//! brute-force oracle that enumerates all walks and filters by grammar
//! membership.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::Zero as _;

use crate::error::Error;
use crate::grammar::{derivations_of_word, to_cnf, Grammar, NonterminalId, Rule, Symbol, Word};
use crate::machine::run::RunBounds;
use crate::machine::{Machine, MachineBuilder, Move, StateKind};

/// Directed multigraph whose edges carry an optional string label.
#[derive(Debug, Clone, Default)]
pub struct LabeledGraph {
    nodes: Vec<String>,
    edges: Vec<(usize, Option<String>, usize)>,
}

impl LabeledGraph {
    pub fn new() -> LabeledGraph {
        LabeledGraph::default()
    }

    pub fn add_node(&mut self, name: &str) -> Result<(), Error> {
        if name.is_empty() {
            return Err(Error::validation("empty node name"));
        }
        if self.nodes.iter().any(|n| n == name) {
            return Err(Error::validation(format!("duplicate node `{name}`")));
        }
        self.nodes.push(name.to_string());
        Ok(())
    }

    pub fn add_edge(&mut self, from: &str, label: &str, to: &str) -> Result<(), Error> {
        if label.is_empty() {
            return Err(Error::validation("empty edge label"));
        }
        self.push_edge(from, Some(label.to_string()), to)
    }

    /// An edge that advances the walk without contributing a letter.
    pub fn add_unlabeled_edge(&mut self, from: &str, to: &str) -> Result<(), Error> {
        self.push_edge(from, None, to)
    }

    fn push_edge(&mut self, from: &str, label: Option<String>, to: &str) -> Result<(), Error> {
        let f = self
            .node_id(from)
            .ok_or_else(|| Error::validation(format!("unknown node `{from}`")))?;
        let t = self
            .node_id(to)
            .ok_or_else(|| Error::validation(format!("unknown node `{to}`")))?;
        self.edges.push((f, label, t));
        Ok(())
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, Option<String>, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> BTreeSet<String> {
        self.edges
            .iter()
            .filter_map(|(_, l, _)| l.clone())
            .collect()
    }
}

/// How a label relates to the opening/closing relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelClass {
    Opening,
    Closing,
    /// Opens some pair and closes another; brackets only, never neutral.
    Both,
    Neutral,
}

/// The opening/closing pairs.
#[derive(Debug, Clone, Default)]
pub struct OcRelation {
    pairs: BTreeSet<(String, String)>,
}

impl OcRelation {
    pub fn new(pairs: &[(&str, &str)]) -> OcRelation {
        OcRelation {
            pairs: pairs
                .iter()
                .map(|(o, c)| (o.to_string(), c.to_string()))
                .collect(),
        }
    }

    pub fn pairs(&self) -> &BTreeSet<(String, String)> {
        &self.pairs
    }

    pub fn classify(&self, label: &str) -> LabelClass {
        let opens = self.pairs.iter().any(|(o, _)| o == label);
        let closes = self.pairs.iter().any(|(_, c)| c == label);
        match (opens, closes) {
            (true, true) => LabelClass::Both,
            (true, false) => LabelClass::Opening,
            (false, true) => LabelClass::Closing,
            (false, false) => LabelClass::Neutral,
        }
    }

    /// True when no label both opens and closes.
    pub fn is_disjoint(&self) -> bool {
        !self
            .pairs
            .iter()
            .any(|(o, _)| self.classify(o) == LabelClass::Both)
    }

    fn closers_of<'a>(&'a self, opener: &'a str) -> impl Iterator<Item = &'a str> {
        self.pairs
            .iter()
            .filter(move |(o, _)| o == opener)
            .map(|(_, c)| c.as_str())
    }
}

/// Which bracket rule the well-formedness grammar uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WfVariant {
    /// `S → ψ S ψ′ S`: the walk may continue after a closed pair. This is
    /// what every walk counter in this module uses.
    #[default]
    Sequential,
    /// `S → ψ S ψ′`: a closed pair ends the word. Comparison mode only —
    /// under it `()a` is rejected while the default accepts it.
    Strict,
}

/// The well-formedness grammar over `alphabet`.
pub fn well_formed_grammar_with(
    alphabet: &BTreeSet<String>,
    oc: &OcRelation,
    variant: WfVariant,
) -> Result<Grammar, Error> {
    let s = NonterminalId(0);
    let mut rules = vec![Rule {
        lhs: s,
        rhs: Vec::new(),
    }];
    for a in alphabet {
        if oc.classify(a) == LabelClass::Neutral {
            rules.push(Rule {
                lhs: s,
                rhs: vec![Symbol::Terminal(a.clone()), Symbol::Nonterminal(s)],
            });
        }
    }
    for (o, c) in oc.pairs() {
        if alphabet.contains(o) && alphabet.contains(c) {
            let mut rhs = vec![
                Symbol::Terminal(o.clone()),
                Symbol::Nonterminal(s),
                Symbol::Terminal(c.clone()),
            ];
            if variant == WfVariant::Sequential {
                rhs.push(Symbol::Nonterminal(s));
            }
            rules.push(Rule { lhs: s, rhs });
        }
    }
    Grammar::new(vec!["S".to_string()], "S", rules)
}

/// [`well_formed_grammar_with`] in the default sequential variant.
pub fn well_formed_grammar(alphabet: &BTreeSet<String>, oc: &OcRelation) -> Result<Grammar, Error> {
    well_formed_grammar_with(alphabet, oc, WfVariant::Sequential)
}

/// Membership in the well-formed language.
pub fn is_well_formed_with(
    word: &[String],
    oc: &OcRelation,
    variant: WfVariant,
) -> Result<bool, Error> {
    let mut alphabet: BTreeSet<String> = word.iter().cloned().collect();
    for (o, c) in oc.pairs() {
        alphabet.insert(o.clone());
        alphabet.insert(c.clone());
    }
    let cnf = to_cnf(&well_formed_grammar_with(&alphabet, oc, variant)?)?;
    Ok(!derivations_of_word(&cnf, word)?.is_zero())
}

/// Membership under the default sequential variant.
pub fn is_well_formed(word: &[String], oc: &OcRelation) -> Result<bool, Error> {
    is_well_formed_with(word, oc, WfVariant::Sequential)
}

/// Memoized set recursion for the well-formed strings of (from, to, length)
/// walks, mirroring the grammar rule for rule: the base case accepts the
/// empty string when the endpoints meet, a neutral or unlabeled edge
/// recurses on the rest of the walk, and an opening edge pairs with a
/// matching closing edge somewhere ahead, splitting the remaining length
/// between the bracketed interior and the suffix.
struct WalkTable<'a> {
    g: &'a LabeledGraph,
    oc: &'a OcRelation,
    memo: HashMap<(usize, usize, usize), BTreeSet<Word>>,
    stored: usize,
    cap: usize,
}

impl<'a> WalkTable<'a> {
    fn new(g: &'a LabeledGraph, oc: &'a OcRelation, cap: usize) -> WalkTable<'a> {
        WalkTable {
            g,
            oc,
            memo: HashMap::new(),
            stored: 0,
            cap,
        }
    }

    fn strings(&mut self, u: usize, v: usize, m: usize) -> Result<BTreeSet<Word>, Error> {
        if let Some(hit) = self.memo.get(&(u, v, m)) {
            return Ok(hit.clone());
        }
        let mut out: BTreeSet<Word> = BTreeSet::new();
        if m == 0 {
            if u == v {
                out.insert(Word::new());
            }
        } else {
            let edges = self.g.edges.clone();
            for (f, label, w) in &edges {
                if *f != u {
                    continue;
                }
                let Some(label) = label else {
                    out.extend(self.strings(*w, v, m - 1)?);
                    continue;
                };
                match self.oc.classify(label) {
                    LabelClass::Neutral => {
                        for rest in self.strings(*w, v, m - 1)? {
                            let mut s = Word::with_capacity(m);
                            s.push(label.clone());
                            s.extend(rest);
                            out.insert(s);
                        }
                    }
                    LabelClass::Opening | LabelClass::Both => {
                        if m < 2 {
                            continue;
                        }
                        let closers: Vec<String> =
                            self.oc.closers_of(label).map(str::to_string).collect();
                        for closer in &closers {
                            for (x, l2, y) in &edges {
                                if l2.as_deref() != Some(closer) {
                                    continue;
                                }
                                for j in 0..=m - 2 {
                                    let inner = self.strings(*w, *x, j)?;
                                    if inner.is_empty() {
                                        continue;
                                    }
                                    let suffix = self.strings(*y, v, m - 2 - j)?;
                                    for i in &inner {
                                        for s in &suffix {
                                            let mut word = Word::with_capacity(m);
                                            word.push(label.clone());
                                            word.extend(i.iter().cloned());
                                            word.push(closer.clone());
                                            word.extend(s.iter().cloned());
                                            out.insert(word);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    LabelClass::Closing => {}
                }
            }
        }
        self.stored += out.len();
        if self.stored > self.cap {
            return Err(Error::resource("stored walk strings", self.cap));
        }
        self.memo.insert((u, v, m), out.clone());
        Ok(out)
    }
}

fn node_pair(g: &LabeledGraph, from: &str, to: &str) -> Result<(usize, usize), Error> {
    let u = g
        .node_id(from)
        .ok_or_else(|| Error::validation(format!("unknown node `{from}`")))?;
    let v = g
        .node_id(to)
        .ok_or_else(|| Error::validation(format!("unknown node `{to}`")))?;
    Ok((u, v))
}

/// The distinct well-formed strings of length-`len` walks from `from` to
/// `to`.
pub fn walk_strings(
    g: &LabeledGraph,
    oc: &OcRelation,
    from: &str,
    to: &str,
    len: usize,
    cap: usize,
) -> Result<BTreeSet<Word>, Error> {
    let (u, v) = node_pair(g, from, to)?;
    WalkTable::new(g, oc, cap).strings(u, v, len)
}

/// How many distinct well-formed strings length-`len` walks spell.
pub fn walk_span(
    g: &LabeledGraph,
    oc: &OcRelation,
    from: &str,
    to: &str,
    len: usize,
    cap: usize,
) -> Result<usize, Error> {
    Ok(walk_strings(g, oc, from, to, len, cap)?.len())
}

/// Sum of [`walk_span`] over lengths `0..=max_len`. Each walk length counts
/// as its own query, so a string reachable at several lengths (possible
/// once unlabeled edges pad walks) contributes once per length.
pub fn walk_span_upto(
    g: &LabeledGraph,
    oc: &OcRelation,
    from: &str,
    to: &str,
    max_len: usize,
    cap: usize,
) -> Result<usize, Error> {
    let (u, v) = node_pair(g, from, to)?;
    let mut table = WalkTable::new(g, oc, cap);
    let mut total = 0;
    for m in 0..=max_len {
        total += table.strings(u, v, m)?.len();
    }
    Ok(total)
}

/// Brute force: enumerate every length-`len` walk (the cap meters visited
/// prefixes, which grow as |E|^len), keep the ones landing on `to`, spell
/// each by its labels (unlabeled edges contribute nothing), filter by
/// grammar membership, count distinct strings.
pub fn oracle_walk_strings(
    g: &LabeledGraph,
    oc: &OcRelation,
    from: &str,
    to: &str,
    len: usize,
    cap: usize,
) -> Result<BTreeSet<Word>, Error> {
    oracle_walk_strings_with(g, oc, from, to, len, cap, WfVariant::Sequential)
}

/// [`oracle_walk_strings`] with an explicit grammar variant, for comparing
/// the two bracket-rule semantics on the same graph.
pub fn oracle_walk_strings_with(
    g: &LabeledGraph,
    oc: &OcRelation,
    from: &str,
    to: &str,
    len: usize,
    cap: usize,
    variant: WfVariant,
) -> Result<BTreeSet<Word>, Error> {
    let (u, v) = node_pair(g, from, to)?;
    let mut alphabet = g.labels();
    for (o, c) in oc.pairs() {
        alphabet.insert(o.clone());
        alphabet.insert(c.clone());
    }
    let cnf = to_cnf(&well_formed_grammar_with(&alphabet, oc, variant)?)?;
    let mut out = BTreeSet::new();
    let mut visited = 0usize;
    let mut stack: Vec<(usize, usize, Word)> = vec![(u, 0, Word::new())];
    while let Some((node, steps, word)) = stack.pop() {
        visited += 1;
        if visited > cap {
            return Err(Error::resource("visited walk prefixes", cap));
        }
        if steps == len {
            if node == v && !derivations_of_word(&cnf, &word)?.is_zero() {
                out.insert(word);
            }
            continue;
        }
        for (f, label, t) in &g.edges {
            if *f == node {
                let mut next = word.clone();
                if let Some(l) = label {
                    next.push(l.clone());
                }
                stack.push((*t, steps + 1, next));
            }
        }
    }
    Ok(out)
}

/// A machine whose span is the well-formed walk-string count.
#[derive(Debug, Clone)]
pub struct WalkInstance {
    pub machine: Machine,
    pub input: String,
    pub bounds: RunBounds,
}

/// Compiles (graph, oc, from, to, len) into a machine. A walk state carries
/// (current node, target node, remaining length) and existentially guesses
/// the grammar step: take an unlabeled or neutral edge, or take an opening
/// edge together with its matching closing edge and an interior length.
/// Universal branch states then lay the children out flat — each emitted
/// letter goes straight into its own accept leaf, between the recursive walk
/// children — so an accepting tree's output forest reads off the label
/// string letter by letter, and the span counts distinct strings.
pub fn machine_for_query(
    g: &LabeledGraph,
    oc: &OcRelation,
    from: &str,
    to: &str,
    len: usize,
) -> Result<WalkInstance, Error> {
    let (u0, v0) = node_pair(g, from, to)?;
    let mut b = MachineBuilder::new();
    let w_name = |u: usize, v: usize, m: usize| format!("w:{u}:{v}:{m}");
    let mut declared: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut queue: VecDeque<(usize, usize, usize)> = VecDeque::new();
    declared.insert((u0, v0, len));
    queue.push_back((u0, v0, len));
    while let Some((u, v, m)) = queue.pop_front() {
        let wn = w_name(u, v, m);
        b = b.state(&wn, StateKind::Existential);
        if m == 0 {
            if u == v {
                b = b.transition(&wn, "_", "acc:e", "_", Move::Left, None);
            }
            continue;
        }
        for (ei, (f, label, w)) in g.edges.iter().enumerate() {
            if *f != u {
                continue;
            }
            let Some(label) = label else {
                // A per-edge relay state keeps parallel unlabeled edges
                // from colliding into one transition.
                let sn = format!("e:{ei}:{v}:{m}");
                b = b
                    .state(&sn, StateKind::Universal)
                    .transition(&wn, "_", &sn, "_", Move::Left, None)
                    .transition(&sn, "_", &w_name(*w, v, m - 1), "_", Move::Left, None);
                if declared.insert((*w, v, m - 1)) {
                    queue.push_back((*w, v, m - 1));
                }
                continue;
            };
            match oc.classify(label) {
                LabelClass::Neutral => {
                    let nn = format!("n:{ei}:{v}:{m}");
                    b = b
                        .state(&nn, StateKind::Universal)
                        .transition(&wn, "_", &nn, "_", Move::Left, None)
                        .transition(&nn, "_", "acc:o", "_", Move::Left, Some(label))
                        .transition(&nn, "_", &w_name(*w, v, m - 1), "_", Move::Left, None);
                    if declared.insert((*w, v, m - 1)) {
                        queue.push_back((*w, v, m - 1));
                    }
                }
                LabelClass::Opening | LabelClass::Both => {
                    if m < 2 {
                        continue;
                    }
                    for (ci, (x, l2, y)) in g.edges.iter().enumerate() {
                        let Some(l2) = l2 else { continue };
                        if !oc.pairs.contains(&(label.clone(), l2.clone())) {
                            continue;
                        }
                        for j in 0..=m - 2 {
                            let on = format!("o:{ei}:{ci}:{j}:{v}:{m}");
                            // Interior walk steps left, suffix walk steps
                            // right: keeps the pair distinct when both land
                            // on the same walk state.
                            b = b
                                .state(&on, StateKind::Universal)
                                .transition(&wn, "_", &on, "_", Move::Left, None)
                                .transition(&on, "_", "acc:o", "_", Move::Left, Some(label))
                                .transition(&on, "_", &w_name(*w, *x, j), "_", Move::Left, None)
                                .transition(&on, "_", "acc:c", "_", Move::Left, Some(l2))
                                .transition(
                                    &on,
                                    "_",
                                    &w_name(*y, v, m - 2 - j),
                                    "_",
                                    Move::Right,
                                    None,
                                );
                            for child in [(*w, *x, j), (*y, v, m - 2 - j)] {
                                if declared.insert(child) {
                                    queue.push_back(child);
                                }
                            }
                        }
                    }
                }
                LabelClass::Closing => {}
            }
        }
    }
    b = b
        .state("acc:e", StateKind::Accept)
        .state("acc:o", StateKind::Accept)
        .state("acc:c", StateKind::Accept);
    Ok(WalkInstance {
        machine: b.build()?,
        input: String::new(),
        bounds: RunBounds::new(len + 2, 6 * len + 8)?,
    })
}
