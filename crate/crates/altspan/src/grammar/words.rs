//! Bounded word enumeration for arbitrary grammars.
//!
//! Works on any rule shape — ε-rules, unit cycles, long right-hand sides —
//! by iterating length-stratified word sets to a fixpoint. Every set is
//! finite because lengths are capped, so the iteration terminates; the
//! `cap` bounds the total number of stored (nonterminal, word) pairs and
//! trips [`Error::Resource`] on explosion.

use std::collections::BTreeSet;

use super::{derivations_of_word, to_cnf, Grammar, Symbol, Word};
use crate::error::Error;

/// All words of length exactly `0..=max_len`, one set per length.
pub fn words_upto(g: &Grammar, max_len: usize, cap: usize) -> Result<Vec<BTreeSet<Word>>, Error> {
    let nn = g.nonterminal_count();
    let mut sets: Vec<Vec<BTreeSet<Word>>> = vec![vec![BTreeSet::new(); max_len + 1]; nn];
    let mut stored = 0usize;
    loop {
        let mut grew = false;
        for r in g.rules() {
            for len in 0..=max_len {
                let mut found: Vec<Word> = Vec::new();
                let mut prefix = Word::new();
                concatenations(&sets, &r.rhs, len, &mut prefix, &mut found);
                for w in found {
                    if sets[r.lhs.0][len].insert(w) {
                        grew = true;
                        stored += 1;
                        if stored > cap {
                            return Err(Error::resource("enumerated words", cap));
                        }
                    }
                }
            }
        }
        if !grew {
            return Ok(sets.swap_remove(g.start().0));
        }
    }
}

/// Splits `len` tokens across the symbols of `rhs`, reading nonterminal
/// pieces from the current approximation.
fn concatenations(
    sets: &[Vec<BTreeSet<Word>>],
    rhs: &[Symbol],
    len: usize,
    prefix: &mut Word,
    out: &mut Vec<Word>,
) {
    match rhs.first() {
        None => {
            if len == 0 {
                out.push(prefix.clone());
            }
        }
        Some(Symbol::Terminal(t)) => {
            if len >= 1 {
                prefix.push(t.clone());
                concatenations(sets, &rhs[1..], len - 1, prefix, out);
                prefix.pop();
            }
        }
        Some(Symbol::Nonterminal(b)) => {
            for piece_len in 0..=len {
                for piece in &sets[b.0][piece_len] {
                    let keep = prefix.len();
                    prefix.extend(piece.iter().cloned());
                    concatenations(sets, &rhs[1..], len - piece_len, prefix, out);
                    prefix.truncate(keep);
                }
            }
        }
    }
}

/// The words of length exactly `len`.
pub fn words_of_length(g: &Grammar, len: usize, cap: usize) -> Result<BTreeSet<Word>, Error> {
    Ok(words_upto(g, len, cap)?.swap_remove(len))
}

/// |L_len|, computed exactly by enumeration.
pub fn count_words(g: &Grammar, len: usize, cap: usize) -> Result<usize, Error> {
    Ok(words_of_length(g, len, cap)?.len())
}

/// |L_0|, |L_1|, ..., |L_max_len|.
pub fn count_words_upto(g: &Grammar, max_len: usize, cap: usize) -> Result<Vec<usize>, Error> {
    Ok(words_upto(g, max_len, cap)?
        .iter()
        .map(BTreeSet::len)
        .collect())
}

/// True when no word of length at most `max_len` has two parses. Measured
/// on the grammar itself when it is already in Chomsky normal form,
/// otherwise on its conversion — see [`to_cnf`] on why the distinction
/// matters.
pub fn is_unambiguous_upto(g: &Grammar, max_len: usize, cap: usize) -> Result<bool, Error> {
    let owned;
    let cnf = if g.is_cnf() {
        g
    } else {
        owned = to_cnf(g)?;
        &owned
    };
    for set in words_upto(cnf, max_len, cap)? {
        for w in set {
            if derivations_of_word(cnf, &w)? > 1u32.into() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
