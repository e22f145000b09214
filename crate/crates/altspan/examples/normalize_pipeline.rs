//! The two machine rewrites: binary universal branching, then an on-tape
//! budget that caps how many principal steps an accepting tree may take.
//! Both preserve the set of output forests; the budget makes the tree-size
//! bound intrinsic to the machine instead of a parameter of the run.

use altspan::machine::normalize::{
    binarize, enforce_budget, enforced_space_bound, enforced_tree_cap, is_binarized,
};
use altspan::machine::run::{output_encodings, RunBounds};
use altspan::machine::{MachineBuilder, Move, StateKind};

fn main() -> Result<(), altspan::Error> {
    // A universal state with three children — not binary.
    let fan = MachineBuilder::new()
        .state("s", StateKind::Universal)
        .state("a1", StateKind::Accept)
        .state("a2", StateKind::Accept)
        .state("a3", StateKind::Accept)
        .transition("s", "_", "a1", "_", Move::Left, Some("x"))
        .transition("s", "_", "a2", "_", Move::Left, Some("y"))
        .transition("s", "_", "a3", "_", Move::Left, Some("z"))
        .build()?;
    println!("fan-out-3 machine: binarized = {}", is_binarized(&fan));

    let bin = binarize(&fan)?;
    println!(
        "after binarize: {} -> {} states, binarized = {}",
        fan.states().len(),
        bin.states().len(),
        is_binarized(&bin)
    );

    let loose = RunBounds::new(2, 8)?;
    let before = output_encodings(&fan, "", loose)?;
    let after = output_encodings(&bin, "", loose)?;
    println!("forests before: {before:?}");
    println!("forests after:  {after:?}");
    assert_eq!(before, after);
    println!();

    // A machine with unboundedly many outputs: each loop pass emits `c` and
    // nests one level deeper. A budget of 4 principal tree nodes admits only
    // the two smallest outputs.
    let looper = MachineBuilder::new()
        .state("s", StateKind::Existential)
        .state("t", StateKind::Accept)
        .transition("s", "_", "s", "_", Move::Right, Some("c"))
        .transition("s", "_", "t", "_", Move::Left, None)
        .build()?;
    let budget = 4;
    let enforced = enforce_budget(&binarize(&looper)?, budget)?;
    println!(
        "looper: {} states; budget {} enforced: {} states",
        looper.states().len(),
        budget,
        enforced.states().len()
    );

    let space = enforced_space_bound(4, budget);
    let cap = enforced_tree_cap(4, budget);
    let bounded = output_encodings(&enforced, "", RunBounds::new(space, cap)?)?;
    let direct = output_encodings(&looper, "", RunBounds::new(4, budget)?)?;
    println!("enforced-machine forests: {bounded:?}");
    println!("direct bounded forests:   {direct:?}");
    assert_eq!(bounded, direct);
    println!("the budget rewrite changed the machine, not its outputs");
    Ok(())
}
