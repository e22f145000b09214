//! Randomized estimation of word counts.
//!
//! The estimator draws parse trees uniformly at random (weighted by the
//! [`DerivationTable`]), reads off each tree's word `w`, and averages
//! `D_n / d(w)` where `D_n` is the total number of parses at length `n` and
//! `d(w)` the number of parses of `w`. Under parse-uniform sampling,
//! `E[D_n / d(w)] = |L_n|` exactly, so the estimate is unbiased for the
//! number of distinct words — and on an unambiguous grammar every sample
//! evaluates to `D_n` itself, making the estimate exact with zero variance.
//!
//! This is an unbiased estimator, not an approximation scheme with
//! guarantees: on grammars whose words have wildly uneven parse counts the
//! variance can be enormous, and no polynomial sample size rescues that.
//! The reported standard error is honest about the samples actually drawn.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::grammar::{
    derivations_of_word, to_cnf, DerivationTable, Grammar, NonterminalId, Symbol, Word,
};

/// One estimation result. `value` approximates a word count; `std_error` is
/// the standard error of the mean over the drawn samples (0 when fewer than
/// two samples or no variance).
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Draws one parse tree of a length-`len` word, proportionally to parse
/// counts, and returns its word. `None` when no parse of that length exists.
fn sample_word(
    g: &Grammar,
    table: &DerivationTable,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Word> {
    let mut word = Word::new();
    let mut ok = true;
    sample_into(g, table, g.start(), len, rng, &mut word, &mut ok);
    ok.then_some(word)
}

fn sample_into(
    g: &Grammar,
    table: &DerivationTable,
    nt: NonterminalId,
    len: usize,
    rng: &mut ChaCha8Rng,
    word: &mut Word,
    ok: &mut bool,
) {
    let total = table.derivations(nt, len);
    if total.is_zero() {
        *ok = false;
        return;
    }
    let mut ticket = rng.gen_biguint_below(total);
    for r in g.rules_of(nt) {
        match r.rhs.as_slice() {
            [] if len == 0 => {
                if ticket.is_zero() {
                    return;
                }
                ticket -= 1u32;
            }
            [Symbol::Terminal(t)] if len == 1 => {
                if ticket.is_zero() {
                    word.push(t.clone());
                    return;
                }
                ticket -= 1u32;
            }
            [Symbol::Nonterminal(b), Symbol::Nonterminal(c)] if len >= 2 => {
                for s in 1..len {
                    let weight = table.derivations(*b, s) * table.derivations(*c, len - s);
                    if ticket < weight {
                        sample_into(g, table, *b, s, rng, word, ok);
                        sample_into(g, table, *c, len - s, rng, word, ok);
                        return;
                    }
                    ticket -= weight;
                }
            }
            _ => {}
        }
    }
    // The weights above sum to `total`, so a ticket below `total` always
    // lands; reaching here means the table and grammar disagree.
    unreachable!("sampling ticket exceeded total derivation weight");
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY)
}

fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m as f64 - 1.0);
    (mean, (var / m as f64).sqrt())
}

fn estimate_with_table(
    g: &Grammar,
    table: &DerivationTable,
    len: usize,
    samples: usize,
    seed: u64,
) -> Result<Estimate, Error> {
    if samples == 0 {
        return Err(Error::validation("sample count must be positive"));
    }
    let total = table.derivations(g.start(), len);
    if total.is_zero() {
        return Ok(Estimate {
            value: 0.0,
            std_error: 0.0,
            samples,
            seed,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(len as u64)));
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let w = sample_word(g, table, len, &mut rng)
            .ok_or_else(|| Error::validation("inconsistent derivation table"))?;
        let d = derivations_of_word(g, &w)?;
        values.push(ratio(total, &d));
    }
    let (value, std_error) = mean_and_std_error(&values);
    Ok(Estimate {
        value,
        std_error,
        samples,
        seed,
    })
}

/// Estimates the number of distinct length-`len` words. Grammars not in
/// Chomsky normal form are converted first; the estimated quantity is
/// unchanged by conversion (the variance may differ, since parse counts are
/// measured on the converted form).
pub fn estimate_count(g: &Grammar, len: usize, samples: usize, seed: u64) -> Result<Estimate, Error> {
    let owned;
    let cnf = if g.is_cnf() {
        g
    } else {
        owned = to_cnf(g)?;
        &owned
    };
    let table = DerivationTable::build(cnf, len)?;
    estimate_with_table(cnf, &table, len, samples, seed)
}

/// Estimates the number of distinct words of length at most `max_len`:
/// per-length estimates (each with `samples` samples) summed, standard
/// errors combined in quadrature.
pub fn estimate_count_upto(
    g: &Grammar,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> Result<Estimate, Error> {
    let owned;
    let cnf = if g.is_cnf() {
        g
    } else {
        owned = to_cnf(g)?;
        &owned
    };
    let table = DerivationTable::build(cnf, max_len)?;
    let mut value = 0.0;
    let mut var_sum = 0.0;
    for len in 0..=max_len {
        let e = estimate_with_table(cnf, &table, len, samples, seed)?;
        value += e.value;
        var_sum += e.std_error * e.std_error;
    }
    Ok(Estimate {
        value,
        std_error: var_sum.sqrt(),
        samples,
        seed,
    })
}
