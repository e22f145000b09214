//! Grammar toolbox: normal-form conversion, membership, exact word counts,
//! derivation counts, and ambiguity probing.

use std::path::Path;

use altspan::files::load_grammar;
use altspan::grammar::{
    count_words_upto, derivations_of_word, is_unambiguous_upto, recognizes, to_cnf,
    DerivationTable,
};

fn main() -> Result<(), altspan::Error> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let anbn = load_grammar(&dir.join("anbn.json"))?;
    let catalan = load_grammar(&dir.join("catalan.json"))?;

    println!("a^n b^n as written:\n{anbn}");
    let cnf = to_cnf(&anbn)?;
    println!("in normal form ({} rules):\n{cnf}", cnf.rules().len());

    let word = |s: &str| -> Vec<String> { s.chars().map(|c| c.to_string()).collect() };
    for w in ["", "ab", "aabb", "aab", "ba"] {
        println!("recognizes {w:?}: {}", recognizes(&anbn, &word(w))?);
    }
    println!();

    println!("distinct words per length:");
    println!("  a^n b^n:   {:?}", count_words_upto(&anbn, 8, 1_000_000)?);
    println!("  S->SS|a:   {:?}", count_words_upto(&catalan, 8, 1_000_000)?);
    println!();

    // One word, many parses: the derivation table counts them all.
    let ccat = to_cnf(&catalan)?;
    let table = DerivationTable::build(&ccat, 8)?;
    println!("parses of a^k under S -> SS | a:");
    for k in 1..=8 {
        print!(" {}", table.derivations(ccat.start(), k));
    }
    println!();
    println!(
        "parses of aaaa directly: {}",
        derivations_of_word(&ccat, &word("aaaa"))?
    );
    println!();

    println!(
        "a^n b^n unambiguous up to 8: {}",
        is_unambiguous_upto(&anbn, 8, 1_000_000)?
    );
    println!(
        "S -> SS | a unambiguous up to 8: {}",
        is_unambiguous_upto(&catalan, 8, 1_000_000)?
    );
    Ok(())
}
