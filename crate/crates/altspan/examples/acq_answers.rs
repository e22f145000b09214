//! Count the answers of an acyclic conjunctive query three ways: by the
//! join-tree evaluator, by a deliberately naive cartesian-product join, and
//! by the span of a compiled machine whose outputs encode answers.

use std::path::Path;

use altspan::acq::{answer_forests, answer_span, join_tree, machine_for_instance, oracle_answers};
use altspan::files::{load_database, load_query};
use altspan::machine::run::span;

fn main() -> Result<(), altspan::Error> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let db = load_database(&dir.join("social_db.json"))?;
    let q = load_query(&dir.join("social_query.json"))?;
    println!("query: answers(x, t) <- follows(x, y), likes(y, t)");

    let tree = join_tree(&q)?;
    println!(
        "join tree derived: root atom {}, parents {:?}",
        tree.root, tree.parent
    );

    let answers = oracle_answers(&db, &q)?;
    println!("\nanswers by naive join ({}):", answers.len());
    for a in &answers {
        println!("  ({}, {})", a[0], a[1]);
    }

    // The evaluator walks the join tree and builds one output forest per
    // answer; bound variables are masked, so two ways of reaching the same
    // answer collapse into one forest.
    let forests = answer_forests(&db, &q)?;
    println!("\nforests by evaluator ({}):", forests.len());
    for f in &forests {
        println!("  {f}");
    }
    assert_eq!(answer_span(&db, &q)?, answers.len());

    let inst = machine_for_instance(&db, &q)?;
    let machine_span = span(&inst.machine, &inst.input, inst.bounds)?;
    println!(
        "\nmachine: {} states, span = {}",
        inst.machine.states().len(),
        machine_span
    );
    assert_eq!(machine_span, answers.len());
    println!("evaluator, naive join, and machine all count {}", answers.len());
    Ok(())
}
