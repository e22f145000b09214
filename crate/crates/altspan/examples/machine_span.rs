//! Build a machine, enumerate its accepting trees, and count both trees and
//! distinct output forests. Two of the three trees below emit the same
//! single-letter forest, so the span is smaller than the tree count.

use std::path::Path;

use altspan::files::load_machine;
use altspan::machine::run::{count_trees, enumerate_accepting_trees, span, RunBounds};
use altspan::machine::{canonical_encoding, out};

fn main() -> Result<(), altspan::Error> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/chooser.json");
    let m = load_machine(&data)?;
    println!(
        "loaded {}: {} states, {} transitions",
        data.display(),
        m.states().len(),
        m.transitions().len()
    );

    let bounds = RunBounds::new(2, 4)?;
    println!("bounds: {} tape cells, {} tree nodes", 2, 4);
    println!();

    for (i, tree) in enumerate_accepting_trees(&m, "", bounds)?.iter().enumerate() {
        let forest = out(tree);
        println!(
            "tree {}: {} nodes -> forest {:?}",
            i,
            tree.size(),
            canonical_encoding(&forest)
        );
    }
    println!();

    // The existential root has three choices; two of them emit the bare
    // letter `a`, and distinct trees with equal forests collapse in the span.
    println!("accepting trees: {}", count_trees(&m, "", bounds)?);
    println!("span (distinct forests): {}", span(&m, "", bounds)?);
    Ok(())
}
