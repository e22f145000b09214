//! Conversion to Chomsky normal form.

use std::collections::{HashMap, HashSet};

use super::{Grammar, NonterminalId, Rule, Symbol};
use crate::error::Error;

/// Converts a grammar to Chomsky normal form: every rule becomes `A -> B C`
/// or `A -> a`, plus at most a start ε-rule when the language contains the
/// empty word (the fresh start symbol never occurs on a right-hand side).
///
/// The language is preserved exactly. Derivation *multiplicities* are not,
/// in general — ε-elimination and unit-expansion can merge or duplicate
/// parses — so ambiguity measurements are native only on grammars that were
/// already in normal form.
pub fn to_cnf(g: &Grammar) -> Result<Grammar, Error> {
    let mut w = Work::import(g);
    w.drop_useless();
    w.fresh_start();
    w.lift_terminals();
    w.split_long();
    w.expand_nullable();
    w.expand_units();
    w.drop_useless();
    w.dedup();
    w.export()
}

struct Work {
    names: Vec<String>,
    used: HashSet<String>,
    start: usize,
    rules: Vec<(usize, Vec<Symbol>)>,
}

impl Work {
    fn import(g: &Grammar) -> Work {
        Work {
            names: (0..g.nonterminal_count())
                .map(|i| g.name(NonterminalId(i)).to_string())
                .collect(),
            used: (0..g.nonterminal_count())
                .map(|i| g.name(NonterminalId(i)).to_string())
                .collect(),
            start: g.start().0,
            rules: g
                .rules()
                .iter()
                .map(|r| (r.lhs.0, r.rhs.clone()))
                .collect(),
        }
    }

    fn fresh(&mut self, base: &str) -> usize {
        let mut name = base.to_string();
        while !self.used.insert(name.clone()) {
            name.push('\'');
        }
        self.names.push(name);
        self.names.len() - 1
    }

    /// Removes rules involving unproductive or unreachable nonterminals.
    fn drop_useless(&mut self) {
        let n = self.names.len();
        let mut productive = vec![false; n];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.rules {
                if !productive[*lhs]
                    && rhs
                        .iter()
                        .all(|s| !matches!(s, Symbol::Nonterminal(b) if !productive[b.0]))
                {
                    productive[*lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.rules.retain(|(lhs, rhs)| {
            productive[*lhs]
                && rhs
                    .iter()
                    .all(|s| !matches!(s, Symbol::Nonterminal(b) if !productive[b.0]))
        });
        let mut reachable = vec![false; n];
        reachable[self.start] = true;
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.rules {
                if reachable[*lhs] {
                    for s in rhs {
                        if let Symbol::Nonterminal(b) = s {
                            if !reachable[b.0] {
                                reachable[b.0] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.rules.retain(|(lhs, _)| reachable[*lhs]);
    }

    /// Introduces a fresh start symbol so the old one may keep appearing on
    /// right-hand sides while the new one never does.
    fn fresh_start(&mut self) {
        let base = format!("{}'", self.names[self.start]);
        let s0 = self.fresh(&base);
        self.rules
            .push((s0, vec![Symbol::Nonterminal(NonterminalId(self.start))]));
        self.start = s0;
    }

    /// Replaces terminals inside long right-hand sides with wrapper
    /// nonterminals.
    fn lift_terminals(&mut self) {
        let mut wrapper: HashMap<String, usize> = HashMap::new();
        let mut extra: Vec<(usize, Vec<Symbol>)> = Vec::new();
        for (_, rhs) in &mut self.rules {
            if rhs.len() < 2 {
                continue;
            }
            for s in rhs.iter_mut() {
                if let Symbol::Terminal(t) = s {
                    let id = match wrapper.get(t.as_str()) {
                        Some(&id) => id,
                        None => {
                            let id = {
                                let mut name = format!("[{t}]");
                                while !self.used.insert(name.clone()) {
                                    name.push('\'');
                                }
                                self.names.push(name);
                                self.names.len() - 1
                            };
                            wrapper.insert(t.clone(), id);
                            extra.push((id, vec![Symbol::Terminal(t.clone())]));
                            id
                        }
                    };
                    *s = Symbol::Nonterminal(NonterminalId(id));
                }
            }
        }
        self.rules.extend(extra);
    }

    /// Splits right-hand sides longer than two into cascades of pair rules.
    fn split_long(&mut self) {
        let mut out: Vec<(usize, Vec<Symbol>)> = Vec::new();
        for (lhs, rhs) in std::mem::take(&mut self.rules) {
            if rhs.len() <= 2 {
                out.push((lhs, rhs));
                continue;
            }
            let base = self.names[lhs].clone();
            let mut head = lhs;
            for i in 0..rhs.len() - 2 {
                let rest = self.fresh(&format!("{base}.{}", i + 1));
                out.push((
                    head,
                    vec![rhs[i].clone(), Symbol::Nonterminal(NonterminalId(rest))],
                ));
                head = rest;
            }
            out.push((head, rhs[rhs.len() - 2..].to_vec()));
        }
        self.rules = out;
    }

    /// Eliminates ε-rules, compensating with variants that skip nullable
    /// occurrences; the start symbol regains an ε-rule when the empty word
    /// belongs to the language.
    fn expand_nullable(&mut self) {
        let n = self.names.len();
        let mut nullable = vec![false; n];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.rules {
                if !nullable[*lhs]
                    && rhs
                        .iter()
                        .all(|s| matches!(s, Symbol::Nonterminal(b) if nullable[b.0]))
                {
                    nullable[*lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut out: Vec<(usize, Vec<Symbol>)> = Vec::new();
        for (lhs, rhs) in &self.rules {
            let optional: Vec<usize> = rhs
                .iter()
                .enumerate()
                .filter(|(_, s)| matches!(s, Symbol::Nonterminal(b) if nullable[b.0]))
                .map(|(i, _)| i)
                .collect();
            for mask in 0..(1u32 << optional.len()) {
                let variant: Vec<Symbol> = rhs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| {
                        optional
                            .iter()
                            .position(|&o| o == *i)
                            .map_or(true, |p| mask & (1 << p) == 0)
                    })
                    .map(|(_, s)| s.clone())
                    .collect();
                if !variant.is_empty() {
                    out.push((*lhs, variant));
                }
            }
        }
        if nullable[self.start] {
            out.push((self.start, Vec::new()));
        }
        self.rules = out;
    }

    /// Replaces unit rules `A -> B` with B's non-unit rules, following
    /// chains and cycles via closure.
    fn expand_units(&mut self) {
        let n = self.names.len();
        let is_unit = |rhs: &[Symbol]| matches!(rhs, [Symbol::Nonterminal(_)]);
        let mut reach: Vec<HashSet<usize>> = (0..n)
            .map(|i| {
                let mut s = HashSet::new();
                s.insert(i);
                s
            })
            .collect();
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.rules {
                if let [Symbol::Nonterminal(b)] = rhs.as_slice() {
                    let via: Vec<usize> = reach[b.0].iter().copied().collect();
                    for c in via {
                        if reach[*lhs].insert(c) {
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut out: Vec<(usize, Vec<Symbol>)> = Vec::new();
        for a in 0..n {
            for b in reach[a].iter().copied() {
                for (lhs, rhs) in &self.rules {
                    if *lhs == b && !is_unit(rhs) {
                        out.push((a, rhs.clone()));
                    }
                }
            }
        }
        self.rules = out;
    }

    fn dedup(&mut self) {
        let mut seen: HashSet<(usize, Vec<Symbol>)> = HashSet::new();
        self.rules.retain(|r| seen.insert(r.clone()));
    }

    /// Compacts the name table to nonterminals still in use and assembles
    /// the result.
    fn export(self) -> Result<Grammar, Error> {
        let mut keep: Vec<usize> = Vec::new();
        let mut index: HashMap<usize, usize> = HashMap::new();
        let touch = |i: usize, keep: &mut Vec<usize>, index: &mut HashMap<usize, usize>| {
            if !index.contains_key(&i) {
                index.insert(i, keep.len());
                keep.push(i);
            }
        };
        touch(self.start, &mut keep, &mut index);
        for (lhs, rhs) in &self.rules {
            touch(*lhs, &mut keep, &mut index);
            for s in rhs {
                if let Symbol::Nonterminal(b) = s {
                    touch(b.0, &mut keep, &mut index);
                }
            }
        }
        let names: Vec<String> = keep.iter().map(|&i| self.names[i].clone()).collect();
        let start_name = names[0].clone();
        let rules = self
            .rules
            .iter()
            .map(|(lhs, rhs)| Rule {
                lhs: NonterminalId(index[lhs]),
                rhs: rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::Nonterminal(b) => Symbol::Nonterminal(NonterminalId(index[&b.0])),
                        Symbol::Terminal(t) => Symbol::Terminal(t.clone()),
                    })
                    .collect(),
            })
            .collect();
        Grammar::new(names, &start_name, rules)
    }
}
