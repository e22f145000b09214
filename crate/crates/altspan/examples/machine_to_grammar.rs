//! Compile a machine into a context-free grammar over bracket tokens. Every
//! output forest corresponds to one grammar word: a letter node `a` with
//! children becomes the token pair `(a … )a` around its children's tokens.
//! Counting distinct machine outputs then becomes counting grammar words.

use std::collections::BTreeSet;

use altspan::compile::{bracket_word_to_forest, machine_to_grammar};
use altspan::grammar::words_upto;
use altspan::machine::canonical_encoding;
use altspan::machine::normalize::{
    binarize, enforce_budget, enforced_space_bound, enforced_tree_cap,
};
use altspan::machine::run::{output_encodings, RunBounds};
use altspan::machine::{MachineBuilder, Move, StateKind};

fn main() -> Result<(), altspan::Error> {
    let looper = MachineBuilder::new()
        .state("s", StateKind::Existential)
        .state("t", StateKind::Accept)
        .transition("s", "_", "s", "_", Move::Right, Some("c"))
        .transition("s", "_", "t", "_", Move::Left, None)
        .build()?;

    // Make the tree budget intrinsic first: the compiled grammar sees only
    // configurations, so an unenforced looper would compile to a grammar
    // with infinitely many words.
    let budget = 6;
    let enforced = enforce_budget(&binarize(&looper)?, budget)?;
    let space = enforced_space_bound(4, budget);
    let g = machine_to_grammar(&enforced, "", space)?;
    println!(
        "compiled grammar: {} nonterminals, {} rules",
        g.nonterminal_count(),
        g.rules().len()
    );

    // Enumerate the grammar's words and decode each back into a forest.
    let mut decoded = BTreeSet::new();
    let mut samples = Vec::new();
    for (len, words) in words_upto(&g, 3 * budget, 1_000_000)?.iter().enumerate() {
        for w in words {
            let forest = bracket_word_to_forest(w)?;
            decoded.insert(canonical_encoding(&forest));
            if samples.len() < 4 {
                samples.push((len, w.join(" "), canonical_encoding(&forest)));
            }
        }
    }
    for (len, word, forest) in &samples {
        println!("word of {len} tokens: {word:<24} -> forest {forest:?}");
    }

    let cap = enforced_tree_cap(4, budget);
    let direct = output_encodings(&enforced, "", RunBounds::new(space, cap)?)?;
    println!("grammar words decoded to {} distinct forests", decoded.len());
    println!("machine produced        {} distinct forests", direct.len());
    assert_eq!(decoded, direct);
    println!("the two languages agree forest for forest");
    Ok(())
}
