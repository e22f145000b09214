//! Bounded enumeration of accepting computation trees, and the two counts
//! derived from it: the raw number of accepting trees and the span (number of
//! distinct output forests).
//!
//! An accepting computation tree is rooted at the initial configuration;
//! every node in an existential state has exactly one successor as its child,
//! every node in a universal state has all of its successors as children in
//! declaration order, and every leaf is in an accepting state. All
//! configurations must fit the space bound and the whole tree must fit the
//! node-count budget. Enumeration is a depth-first search over successor
//! choices in declaration order, so the emission order is deterministic and a
//! tree is never produced twice.

use std::collections::{BTreeSet, HashSet};

use crate::error::Error;
use crate::machine::{
    canonical_encoding, out, ComputationTree, Configuration, Machine, OutputSymbol, StateKind,
};

/// Resource bounds for one run: a work-tape space bound (cells) and a
/// computation-tree size budget (nodes). Both are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunBounds {
    pub space: usize,
    pub tree_size: usize,
}

impl RunBounds {
    pub fn new(space: usize, tree_size: usize) -> Result<RunBounds, Error> {
        if space == 0 || tree_size == 0 {
            return Err(Error::validation(
                "run bounds must be at least 1 cell and 1 tree node",
            ));
        }
        Ok(RunBounds { space, tree_size })
    }
}

struct Enumerator<'a> {
    machine: &'a Machine,
    input: &'a str,
    bounds: RunBounds,
    cap: Option<usize>,
    explored: usize,
}

impl<'a> Enumerator<'a> {
    fn charge(&mut self) -> Result<(), Error> {
        self.explored += 1;
        match self.cap {
            Some(cap) if self.explored > cap => Err(Error::resource("tree enumeration", cap)),
            _ => Ok(()),
        }
    }

    /// Emits every accepting subtree rooted at `config` (reached via
    /// `output`) with at most `budget` nodes.
    fn subtrees(
        &mut self,
        config: &Configuration,
        output: &OutputSymbol,
        budget: usize,
        f: &mut dyn FnMut(ComputationTree),
    ) -> Result<(), Error> {
        if budget == 0 || config.space() > self.bounds.space {
            return Ok(());
        }
        self.charge()?;
        match self.machine.kind(config.state) {
            StateKind::Reject => Ok(()),
            StateKind::Accept => {
                f(ComputationTree {
                    config: config.clone(),
                    output: output.clone(),
                    children: Vec::new(),
                });
                Ok(())
            }
            StateKind::Existential => {
                let succs = self.machine.successors(self.input, config)?;
                for (succ, emitted) in &succs {
                    self.subtrees(succ, emitted, budget - 1, &mut |child| {
                        f(ComputationTree {
                            config: config.clone(),
                            output: output.clone(),
                            children: vec![child],
                        })
                    })?;
                }
                Ok(())
            }
            StateKind::Universal => {
                let succs = self.machine.successors(self.input, config)?;
                // No successors rejects, and a tree must contain *all*
                // successors, so one that cannot fit the space bound kills
                // the node outright.
                if succs.is_empty()
                    || succs.iter().any(|(c, _)| c.space() > self.bounds.space)
                    || budget < 1 + succs.len()
                {
                    return Ok(());
                }
                let mut acc = Vec::with_capacity(succs.len());
                self.tuples(&succs, budget - 1, &mut acc, &mut |children| {
                    f(ComputationTree {
                        config: config.clone(),
                        output: output.clone(),
                        children: children.to_vec(),
                    })
                })
            }
        }
    }

    /// Emits every list of accepting subtrees for `succs` whose sizes sum to
    /// at most `budget`, in lexicographic order of the per-child choices.
    fn tuples(
        &mut self,
        succs: &[(Configuration, OutputSymbol)],
        budget: usize,
        acc: &mut Vec<ComputationTree>,
        f: &mut dyn FnMut(&[ComputationTree]),
    ) -> Result<(), Error> {
        match succs.split_first() {
            None => {
                f(acc);
                Ok(())
            }
            Some(((config, output), rest)) => {
                // Reserve one node for each remaining sibling.
                if budget < 1 + rest.len() {
                    return Ok(());
                }
                let first_budget = budget - rest.len();
                // The accumulator outlives the closure borrow below, so the
                // recursion is driven through a collected batch per child.
                let mut batch = Vec::new();
                self.subtrees(config, output, first_budget, &mut |t| batch.push(t))?;
                for t in batch {
                    let used = t.size();
                    acc.push(t);
                    self.tuples(rest, budget - used, acc, f)?;
                    acc.pop();
                }
                Ok(())
            }
        }
    }
}

/// Calls `f` once per accepting computation tree within `bounds`, in the
/// deterministic depth-first order. `cap` limits the number of exploration
/// steps (visited nodes including dead branches) and trips a resource error
/// when exceeded.
pub fn for_each_accepting_tree(
    machine: &Machine,
    input: &str,
    bounds: RunBounds,
    cap: Option<usize>,
    mut f: impl FnMut(ComputationTree),
) -> Result<(), Error> {
    machine.validate_input(input)?;
    let root = machine.initial_config();
    let mut e = Enumerator {
        machine,
        input,
        bounds,
        cap,
        explored: 0,
    };
    e.subtrees(&root, &OutputSymbol::Silent, bounds.tree_size, &mut f)
}

/// Collects every accepting computation tree within `bounds`. Each tree
/// appears exactly once; an empty result signals rejection.
pub fn enumerate_accepting_trees(
    machine: &Machine,
    input: &str,
    bounds: RunBounds,
) -> Result<Vec<ComputationTree>, Error> {
    let mut trees = Vec::new();
    for_each_accepting_tree(machine, input, bounds, None, |t| trees.push(t))?;
    Ok(trees)
}

/// The number of distinct output forests over all accepting trees within
/// `bounds`. Trees are streamed through the canonical forest encoding into a
/// hash set, so memory scales with the number of distinct outputs rather than
/// the number of trees.
pub fn span(machine: &Machine, input: &str, bounds: RunBounds) -> Result<usize, Error> {
    span_limited(machine, input, bounds, None)
}

/// [`span`] with an exploration cap.
pub fn span_limited(
    machine: &Machine,
    input: &str,
    bounds: RunBounds,
    cap: Option<usize>,
) -> Result<usize, Error> {
    let mut seen: HashSet<String> = HashSet::new();
    for_each_accepting_tree(machine, input, bounds, cap, |t| {
        seen.insert(canonical_encoding(&out(&t)));
    })?;
    Ok(seen.len())
}

/// The number of accepting computation trees within `bounds`. Counts trees,
/// not outputs, so it dominates [`span`].
pub fn count_trees(machine: &Machine, input: &str, bounds: RunBounds) -> Result<u64, Error> {
    count_trees_limited(machine, input, bounds, None)
}

/// [`count_trees`] with an exploration cap.
pub fn count_trees_limited(
    machine: &Machine,
    input: &str,
    bounds: RunBounds,
    cap: Option<usize>,
) -> Result<u64, Error> {
    let mut n: u64 = 0;
    for_each_accepting_tree(machine, input, bounds, cap, |_| n += 1)?;
    Ok(n)
}

/// The distinct output forests within `bounds`, as sorted canonical
/// encodings. Handy for cross-checking against grammar word enumerations.
pub fn output_encodings(
    machine: &Machine,
    input: &str,
    bounds: RunBounds,
) -> Result<BTreeSet<String>, Error> {
    let mut seen = BTreeSet::new();
    for_each_accepting_tree(machine, input, bounds, None, |t| {
        seen.insert(canonical_encoding(&out(&t)));
    })?;
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{MachineBuilder, Move, StateKind, BLANK};

    fn bounds(space: usize, tree: usize) -> RunBounds {
        RunBounds::new(space, tree).unwrap()
    }

    #[test]
    fn immediate_accept_has_one_empty_tree() {
        let m = MachineBuilder::new()
            .state("done", StateKind::Accept)
            .build()
            .unwrap();
        let trees = enumerate_accepting_trees(&m, "", bounds(1, 1)).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].size(), 1);
        assert_eq!(canonical_encoding(&out(&trees[0])), "");
        assert_eq!(span(&m, "", bounds(1, 1)).unwrap(), 1);
        assert_eq!(count_trees(&m, "", bounds(1, 1)).unwrap(), 1);
    }

    fn two_branch() -> crate::machine::Machine {
        MachineBuilder::new()
            .state("q0", StateKind::Existential)
            .state("acc", StateKind::Accept)
            .transition("q0", BLANK, "acc", BLANK, Move::Right, Some("a"))
            .transition("q0", BLANK, "acc", BLANK, Move::Right, Some("b"))
            .build()
            .unwrap()
    }

    #[test]
    fn existential_branches_are_separate_trees() {
        let m = two_branch();
        let trees = enumerate_accepting_trees(&m, "", bounds(2, 2)).unwrap();
        assert_eq!(trees.len(), 2);
        let encodings: Vec<String> = trees.iter().map(|t| canonical_encoding(&out(t))).collect();
        // Depth-first order follows transition declaration order.
        assert_eq!(encodings, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(span(&m, "", bounds(2, 2)).unwrap(), 2);
    }

    #[test]
    fn identical_outputs_collapse_in_span_but_not_in_count() {
        // Two branches that write different letters but emit the same output.
        let m = MachineBuilder::new()
            .state("q0", StateKind::Existential)
            .state("acc", StateKind::Accept)
            .transition("q0", BLANK, "acc", "x", Move::Right, Some("a"))
            .transition("q0", BLANK, "acc", "y", Move::Right, Some("a"))
            .build()
            .unwrap();
        assert_eq!(count_trees(&m, "", bounds(2, 2)).unwrap(), 2);
        assert_eq!(span(&m, "", bounds(2, 2)).unwrap(), 1);
    }

    #[test]
    fn universal_node_takes_all_successors_in_order() {
        let m = MachineBuilder::new()
            .state("q0", StateKind::Universal)
            .state("acc", StateKind::Accept)
            .transition("q0", BLANK, "acc", BLANK, Move::Left, Some("a"))
            .transition("q0", BLANK, "acc", BLANK, Move::Left, Some("b"))
            .build()
            .unwrap();
        let trees = enumerate_accepting_trees(&m, "", bounds(1, 3)).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(canonical_encoding(&out(&trees[0])), "a|b");
        // The same machine under a budget too small for both children.
        assert!(enumerate_accepting_trees(&m, "", bounds(1, 2)).unwrap().is_empty());
    }

    #[test]
    fn universal_with_no_successors_rejects() {
        let m = MachineBuilder::new()
            .state("q0", StateKind::Universal)
            .build()
            .unwrap();
        assert_eq!(count_trees(&m, "", bounds(1, 4)).unwrap(), 0);
    }

    #[test]
    fn space_bound_prunes_branches() {
        // Needs three cells: two right moves from cell 0.
        let m = MachineBuilder::new()
            .state("q0", StateKind::Existential)
            .state("q1", StateKind::Existential)
            .state("acc", StateKind::Accept)
            .transition("q0", BLANK, "q1", BLANK, Move::Right, None)
            .transition("q1", BLANK, "acc", BLANK, Move::Right, Some("a"))
            .build()
            .unwrap();
        assert_eq!(span(&m, "", bounds(3, 3)).unwrap(), 1);
        assert_eq!(span(&m, "", bounds(2, 3)).unwrap(), 0);
    }

    #[test]
    fn universal_with_one_space_violating_child_dies() {
        // Child 1 stays in place, child 2 needs a second cell.
        let m = MachineBuilder::new()
            .state("q0", StateKind::Universal)
            .state("acc", StateKind::Accept)
            .transition("q0", BLANK, "acc", BLANK, Move::Left, Some("a"))
            .transition("q0", BLANK, "acc", BLANK, Move::Right, Some("b"))
            .build()
            .unwrap();
        assert_eq!(span(&m, "", bounds(2, 3)).unwrap(), 1);
        assert_eq!(span(&m, "", bounds(1, 3)).unwrap(), 0);
    }

    #[test]
    fn shrinking_bounds_never_increases_counts() {
        let m = two_branch();
        let wide = count_trees(&m, "", bounds(3, 5)).unwrap();
        let narrow = count_trees(&m, "", bounds(2, 2)).unwrap();
        assert!(narrow <= wide);
        assert!(span(&m, "", bounds(2, 2)).unwrap() <= span(&m, "", bounds(3, 5)).unwrap());
    }

    #[test]
    fn exploration_cap_trips_a_resource_error() {
        // Unbounded silent loop: every budget is explored to exhaustion.
        let m = MachineBuilder::new()
            .state("q0", StateKind::Existential)
            .transition("q0", BLANK, "q0", BLANK, Move::Left, None)
            .build()
            .unwrap();
        let err = span_limited(&m, "", bounds(1, 1000), Some(10)).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn no_two_emitted_trees_are_identical() {
        let m = two_branch();
        let trees = enumerate_accepting_trees(&m, "", bounds(2, 4)).unwrap();
        for (i, a) in trees.iter().enumerate() {
            for b in &trees[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }
}
