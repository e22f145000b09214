//! Context-free grammars over string-valued terminal tokens.
//!
//! Words are token sequences ([`Word`] = `Vec<String>`), not character
//! strings, so terminals like `(a` and `)a` coming out of the machine
//! compiler stay atomic. Rules form a *list*, and exact duplicates are
//! permitted: a rule's multiplicity multiplies derivation counts, mirroring
//! how two distinct machine transitions with the same effect give two
//! computation trees. Language-level queries are unaffected.

mod analysis;
mod cnf;
mod words;

pub use analysis::{derivations_of_word, recognizes, DerivationTable};
pub use cnf::to_cnf;
pub use words::{count_words, count_words_upto, is_unambiguous_upto, words_of_length, words_upto};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::Error;

/// A word: a sequence of terminal tokens.
pub type Word = Vec<String>;

/// Index into a grammar's nonterminal table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonterminalId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Nonterminal(NonterminalId),
    Terminal(String),
}

/// One production. An empty `rhs` derives the empty word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: NonterminalId,
    pub rhs: Vec<Symbol>,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    names: Vec<String>,
    ids: HashMap<String, NonterminalId>,
    start: NonterminalId,
    terminals: BTreeSet<String>,
    rules: Vec<Rule>,
    by_lhs: Vec<Vec<usize>>,
}

impl Grammar {
    /// Assembles and validates a grammar. `names` supplies the nonterminal
    /// table (first entry need not be the start symbol); every rule must
    /// reference declared nonterminals, and terminal tokens must be
    /// nonempty.
    pub fn new(names: Vec<String>, start: &str, rules: Vec<Rule>) -> Result<Grammar, Error> {
        if names.is_empty() {
            return Err(Error::validation("grammar has no nonterminals"));
        }
        let mut ids = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::validation("empty nonterminal name"));
            }
            if ids.insert(n.clone(), NonterminalId(i)).is_some() {
                return Err(Error::validation(format!("duplicate nonterminal `{n}`")));
            }
        }
        let start = *ids
            .get(start)
            .ok_or_else(|| Error::validation(format!("start symbol `{start}` not declared")))?;
        let mut terminals = BTreeSet::new();
        let mut by_lhs = vec![Vec::new(); names.len()];
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.0 >= names.len() {
                return Err(Error::validation(format!("rule {i}: unknown left-hand side")));
            }
            for s in &r.rhs {
                match s {
                    Symbol::Nonterminal(n) if n.0 >= names.len() => {
                        return Err(Error::validation(format!(
                            "rule {i}: unknown nonterminal on right-hand side"
                        )));
                    }
                    Symbol::Terminal(t) if t.is_empty() => {
                        return Err(Error::validation(format!("rule {i}: empty terminal token")));
                    }
                    Symbol::Terminal(t) => {
                        terminals.insert(t.clone());
                    }
                    _ => {}
                }
            }
            by_lhs[r.lhs.0].push(i);
        }
        Ok(Grammar {
            names,
            ids,
            start,
            terminals,
            rules,
            by_lhs,
        })
    }

    pub fn start(&self) -> NonterminalId {
        self.start
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, id: NonterminalId) -> &str {
        &self.names[id.0]
    }

    pub fn id_of(&self, name: &str) -> Option<NonterminalId> {
        self.ids.get(name).copied()
    }

    pub fn terminals(&self) -> &BTreeSet<String> {
        &self.terminals
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rules with the given left-hand side, in declaration order.
    pub fn rules_of(&self, id: NonterminalId) -> impl Iterator<Item = &Rule> {
        self.by_lhs[id.0].iter().map(|&i| &self.rules[i])
    }

    /// Chomsky normal form check: every rule is nonterminal-pair or single
    /// terminal, except that the start symbol may derive the empty word if
    /// it never occurs on a right-hand side.
    pub fn is_cnf(&self) -> bool {
        let mut has_start_epsilon = false;
        for r in &self.rules {
            match r.rhs.as_slice() {
                [Symbol::Nonterminal(_), Symbol::Nonterminal(_)] | [Symbol::Terminal(_)] => {}
                [] if r.lhs == self.start => has_start_epsilon = true,
                _ => return false,
            }
        }
        !has_start_epsilon
            || self.rules.iter().all(|r| {
                !r.rhs
                    .iter()
                    .any(|s| matches!(s, Symbol::Nonterminal(n) if *n == self.start))
            })
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.name(self.start))?;
        for r in &self.rules {
            write!(f, "{} ->", self.name(r.lhs))?;
            if r.rhs.is_empty() {
                write!(f, " ()")?;
            }
            for s in &r.rhs {
                match s {
                    Symbol::Nonterminal(n) => write!(f, " {}", self.name(*n))?,
                    Symbol::Terminal(t) => write!(f, " '{t}'")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Name-based incremental construction. A right-hand-side token is a
/// nonterminal exactly when it names one: any token that appears as some
/// rule's left-hand side or was declared with
/// [`nonterminal`](GrammarBuilder::nonterminal); everything else is a
/// terminal. The first rule's left-hand side is the start symbol unless
/// overridden.
#[derive(Debug, Default)]
pub struct GrammarBuilder {
    start: Option<String>,
    order: Vec<String>,
    declared: BTreeSet<String>,
    rules: Vec<(String, Vec<String>)>,
}

impl GrammarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn start(mut self, name: &str) -> Self {
        self.start = Some(name.to_string());
        self.declare(name);
        self
    }

    /// Declares a nonterminal with no rules of its own (it derives nothing).
    pub fn nonterminal(mut self, name: &str) -> Self {
        self.declare(name);
        self
    }

    fn declare(&mut self, name: &str) {
        if self.declared.insert(name.to_string()) {
            self.order.push(name.to_string());
        }
    }

    pub fn rule<S: AsRef<str>>(mut self, lhs: &str, rhs: &[S]) -> Self {
        self.declare(lhs);
        self.rules.push((
            lhs.to_string(),
            rhs.iter().map(|s| s.as_ref().to_string()).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Grammar, Error> {
        let start = match (&self.start, self.rules.first()) {
            (Some(s), _) => s.clone(),
            (None, Some((lhs, _))) => lhs.clone(),
            (None, None) => return Err(Error::validation("grammar has no rules")),
        };
        let ids: HashMap<&String, usize> = self
            .order
            .iter()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let rules = self
            .rules
            .iter()
            .map(|(lhs, rhs)| Rule {
                lhs: NonterminalId(ids[lhs]),
                rhs: rhs
                    .iter()
                    .map(|tok| match ids.get(tok) {
                        Some(&i) => Symbol::Nonterminal(NonterminalId(i)),
                        None => Symbol::Terminal(tok.clone()),
                    })
                    .collect(),
            })
            .collect();
        Grammar::new(self.order.clone(), &start, rules)
    }
}
