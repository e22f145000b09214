//! Count distinct well-formed label strings of fixed-length walks through a
//! labeled graph, three ways: memoized recursion, brute-force enumeration,
//! and the span of a compiled machine.

use std::path::Path;

use altspan::files::{load_graph, load_oc};
use altspan::machine::run::span;
use altspan::wfwalks::{
    machine_for_query, oracle_walk_strings, oracle_walk_strings_with, walk_span, walk_span_upto,
    walk_strings, WfVariant,
};

fn main() -> Result<(), altspan::Error> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let g = load_graph(&dir.join("triangle.json"))?;
    let oc = load_oc(&dir.join("triangle_oc.json"))?;
    println!("graph: s -(-> u, u -a-> u, u -)-> t; pair ( )");

    println!("\n{:>4} {:>10} {:>8} {:>8}", "len", "recursion", "oracle", "machine");
    for len in 0..=5 {
        let fast = walk_span(&g, &oc, "s", "t", len, 100_000)?;
        let slow = oracle_walk_strings(&g, &oc, "s", "t", len, 1_000_000)?.len();
        let inst = machine_for_query(&g, &oc, "s", "t", len)?;
        let by_machine = span(&inst.machine, &inst.input, inst.bounds)?;
        println!("{len:>4} {fast:>10} {slow:>8} {by_machine:>8}");
        assert_eq!(fast, slow);
        assert_eq!(fast, by_machine);
    }

    for len in [2, 3, 4] {
        let strings = walk_strings(&g, &oc, "s", "t", len, 100_000)?;
        let rendered: Vec<String> = strings.iter().map(|w| w.join("")).collect();
        println!("strings at length {len}: {rendered:?}");
    }
    println!(
        "summed over lengths 0..=5: {}",
        walk_span_upto(&g, &oc, "s", "t", 5, 100_000)?
    );

    // The strict variant refuses anything after a closed pair, so a walk
    // spelling ()() no longer counts.
    let loopy = {
        let mut g = altspan::wfwalks::LabeledGraph::new();
        g.add_node("o")?;
        g.add_edge("o", "(", "o")?;
        g.add_edge("o", ")", "o")?;
        g
    };
    let seq = oracle_walk_strings_with(&loopy, &oc, "o", "o", 4, 1_000_000, WfVariant::Sequential)?;
    let strict = oracle_walk_strings_with(&loopy, &oc, "o", "o", 4, 1_000_000, WfVariant::Strict)?;
    let render = |set: &std::collections::BTreeSet<Vec<String>>| -> Vec<String> {
        set.iter().map(|w| w.join("")).collect()
    };
    println!("\nbracket loop, length 4:");
    println!("  default variant: {:?}", render(&seq));
    println!("  strict variant:  {:?}", render(&strict));
    Ok(())
}
