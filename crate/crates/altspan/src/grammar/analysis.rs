//! Derivation counting on grammars in Chomsky normal form.
//!
//! Counts are exact `BigUint`s. A "derivation" is a parse tree, and rule
//! multiplicity matters: a rule listed twice contributes two parses.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{to_cnf, Grammar, NonterminalId, Symbol};
use crate::error::Error;

/// Per-(nonterminal, length) parse-tree totals, aggregated over all words
/// of that length. `total(n)` both counts the parses of length-`n` words
/// from the start symbol and drives proportional sampling of one.
#[derive(Debug, Clone)]
pub struct DerivationTable {
    max_len: usize,
    counts: Vec<Vec<BigUint>>,
}

impl DerivationTable {
    pub fn build(g: &Grammar, max_len: usize) -> Result<DerivationTable, Error> {
        if !g.is_cnf() {
            return Err(Error::validation(
                "derivation table requires Chomsky normal form",
            ));
        }
        let nn = g.nonterminal_count();
        let mut counts = vec![vec![BigUint::zero(); max_len + 1]; nn];
        for r in g.rules() {
            match r.rhs.as_slice() {
                [] => counts[r.lhs.0][0] += 1u32,
                [Symbol::Terminal(_)] if max_len >= 1 => counts[r.lhs.0][1] += 1u32,
                _ => {}
            }
        }
        for len in 2..=max_len {
            for a in 0..nn {
                let mut sum = BigUint::zero();
                for r in g.rules_of(NonterminalId(a)) {
                    if let [Symbol::Nonterminal(b), Symbol::Nonterminal(c)] = r.rhs.as_slice() {
                        for left in 1..len {
                            sum += &counts[b.0][left] * &counts[c.0][len - left];
                        }
                    }
                }
                counts[a][len] = sum;
            }
        }
        Ok(DerivationTable { max_len, counts })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Parse trees rooted at `nt` whose yield has exactly `len` tokens.
    pub fn derivations(&self, nt: NonterminalId, len: usize) -> &BigUint {
        &self.counts[nt.0][len]
    }
}

/// Number of parse trees of `w` in a CNF grammar (counting CYK).
pub fn derivations_of_word(g: &Grammar, w: &[String]) -> Result<BigUint, Error> {
    if !g.is_cnf() {
        return Err(Error::validation(
            "derivation counting requires Chomsky normal form",
        ));
    }
    let n = w.len();
    let nn = g.nonterminal_count();
    if n == 0 {
        let eps = g.rules().iter().filter(|r| r.rhs.is_empty()).count();
        return Ok(BigUint::from(eps));
    }
    // table[len][start][nt], spans of length `len` beginning at `start`
    let mut table = vec![vec![vec![BigUint::zero(); nn]; n]; n + 1];
    for (i, tok) in w.iter().enumerate() {
        for r in g.rules() {
            if matches!(r.rhs.as_slice(), [Symbol::Terminal(t)] if t == tok) {
                table[1][i][r.lhs.0] += 1u32;
            }
        }
    }
    for len in 2..=n {
        for start in 0..=n - len {
            for r in g.rules() {
                if let [Symbol::Nonterminal(b), Symbol::Nonterminal(c)] = r.rhs.as_slice() {
                    let mut sum = BigUint::zero();
                    for left in 1..len {
                        sum += &table[left][start][b.0] * &table[len - left][start + left][c.0];
                    }
                    table[len][start][r.lhs.0] += sum;
                }
            }
        }
    }
    Ok(table[n][0][g.start().0].clone())
}

/// Membership test. Grammars not in normal form are converted first, so
/// this is the one analysis entry point that accepts any grammar.
pub fn recognizes(g: &Grammar, w: &[String]) -> Result<bool, Error> {
    if g.is_cnf() {
        Ok(!derivations_of_word(g, w)?.is_zero())
    } else {
        let cnf = to_cnf(g)?;
        Ok(!derivations_of_word(&cnf, w)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{GrammarBuilder, Word};
    use super::*;

    fn tok(s: &str) -> Word {
        s.split_whitespace().map(str::to_string).collect()
    }

    /// S -> S S | a: every word a^n, with Catalan(n-1) parses.
    fn catalan_grammar() -> Grammar {
        GrammarBuilder::new()
            .rule("S", &["S", "S"])
            .rule("S", &["a"])
            .build()
            .unwrap()
    }

    /// a^n b^n (n >= 1), one parse per word.
    fn anbn() -> Grammar {
        GrammarBuilder::new()
            .rule("S", &["A", "B"])
            .rule("S", &["A", "T"])
            .rule("T", &["S", "B"])
            .rule("A", &["a"])
            .rule("B", &["b"])
            .build()
            .unwrap()
    }

    #[test]
    fn table_totals_follow_catalan_numbers() {
        let g = catalan_grammar();
        let t = DerivationTable::build(&g, 6).unwrap();
        let got: Vec<u64> = (0..=6)
            .map(|n| u64::try_from(t.derivations(g.start(), n)).unwrap())
            .collect();
        assert_eq!(got, vec![0, 1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn word_counts_match_the_table_on_single_word_languages() {
        let g = catalan_grammar();
        assert_eq!(derivations_of_word(&g, &tok("a a a")).unwrap(), 2u32.into());
        assert_eq!(
            derivations_of_word(&g, &tok("a a a a")).unwrap(),
            5u32.into()
        );
        assert!(derivations_of_word(&g, &tok("a b")).unwrap().is_zero());
    }

    #[test]
    fn unambiguous_words_have_one_parse() {
        let g = anbn();
        assert_eq!(derivations_of_word(&g, &tok("a b")).unwrap(), 1u32.into());
        assert_eq!(
            derivations_of_word(&g, &tok("a a a b b b")).unwrap(),
            1u32.into()
        );
        assert!(derivations_of_word(&g, &tok("a b b")).unwrap().is_zero());
        let t = DerivationTable::build(&g, 6).unwrap();
        assert_eq!(t.derivations(g.start(), 4), &1u32.into());
        assert_eq!(t.derivations(g.start(), 5), &0u32.into());
    }

    #[test]
    fn duplicate_rules_multiply_counts() {
        let g = GrammarBuilder::new()
            .rule("S", &["a"])
            .rule("S", &["a"])
            .build()
            .unwrap();
        assert_eq!(derivations_of_word(&g, &tok("a")).unwrap(), 2u32.into());
    }

    #[test]
    fn recognizes_converts_when_needed() {
        let g = GrammarBuilder::new()
            .rule("S", &["(", "S", ")", "S"])
            .rule("S", &[] as &[&str])
            .build()
            .unwrap();
        assert!(recognizes(&g, &tok("( ) ( )")).unwrap());
        assert!(recognizes(&g, &[]).unwrap());
        assert!(!recognizes(&g, &tok("( ( )")).unwrap());
    }

    #[test]
    fn non_cnf_counting_is_refused() {
        let g = GrammarBuilder::new().rule("S", &["a", "b"]).build().unwrap();
        assert!(derivations_of_word(&g, &tok("a b")).is_err());
        assert!(DerivationTable::build(&g, 3).is_err());
    }
}
