//! Turn a normal-form grammar into a machine whose span on length k is the
//! number of distinct words of length k — and whose raw accepting-tree count
//! is the number of parses, which is strictly larger when the grammar is
//! ambiguous.

use std::path::Path;

use altspan::compile::grammar_to_machine;
use altspan::files::load_grammar;
use altspan::grammar::{count_words, to_cnf};
use altspan::machine::run::{count_trees, span};

fn main() -> Result<(), altspan::Error> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");

    let anbn = to_cnf(&load_grammar(&dir.join("anbn.json"))?)?;
    println!("a^n b^n, per length: span == distinct words");
    println!("{:>4} {:>6} {:>6} {:>7}", "len", "words", "span", "parses");
    for len in 0..=6 {
        let inst = grammar_to_machine(&anbn, len)?;
        let s = span(&inst.machine, &inst.input, inst.bounds)?;
        let t = count_trees(&inst.machine, &inst.input, inst.bounds)?;
        let w = count_words(&anbn, len, 1_000_000)?;
        println!("{len:>4} {w:>6} {s:>6} {t:>7}");
        assert_eq!(s, w);
    }
    println!();

    // S -> S S | a derives every a^k, but in Catalan-many ways: the span
    // stays 1 per nonempty length while the tree count grows.
    let catalan = to_cnf(&load_grammar(&dir.join("catalan.json"))?)?;
    println!("S -> SS | a: span collapses what ambiguity multiplies");
    println!("{:>4} {:>6} {:>6} {:>7}", "len", "words", "span", "parses");
    for len in 1..=5 {
        let inst = grammar_to_machine(&catalan, len)?;
        let s = span(&inst.machine, &inst.input, inst.bounds)?;
        let t = count_trees(&inst.machine, &inst.input, inst.bounds)?;
        let w = count_words(&catalan, len, 1_000_000)?;
        println!("{len:>4} {w:>6} {s:>6} {t:>7}");
        assert_eq!(s, w);
        assert!(t >= s as u64);
    }
    Ok(())
}
