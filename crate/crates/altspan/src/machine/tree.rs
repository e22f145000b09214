//! Computation trees, output forests, and the output projection.

use crate::machine::{Configuration, OutputSymbol};

/// A node of an accepting computation tree (the node owns its subtree, so a
/// node and a tree are the same type). `output` is the output symbol of the
/// transition that reached this node; the root carries the silent marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationTree {
    pub config: Configuration,
    pub output: OutputSymbol,
    pub children: Vec<ComputationTree>,
}

impl ComputationTree {
    /// Total number of nodes, the quantity metered by the tree-size budget.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ComputationTree::size).sum::<usize>()
    }

    /// Number of nodes whose state satisfies `pred`; used by tests to count
    /// principal nodes in transformed machines.
    pub fn count_nodes_where(&self, pred: &impl Fn(&Configuration) -> bool) -> usize {
        usize::from(pred(&self.config))
            + self
                .children
                .iter()
                .map(|c| c.count_nodes_where(pred))
                .sum::<usize>()
    }
}

/// An ordered tree with letter-labeled nodes, one member of an output forest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputTree {
    pub label: crate::machine::Letter,
    pub children: Vec<OutputTree>,
}

impl OutputTree {
    pub fn leaf(label: &str) -> OutputTree {
        OutputTree {
            label: label.to_string(),
            children: Vec::new(),
        }
    }

    pub fn node(label: &str, children: Vec<OutputTree>) -> OutputTree {
        OutputTree {
            label: label.to_string(),
            children,
        }
    }

    fn node_count(&self) -> usize {
        1 + self.children.iter().map(OutputTree::node_count).sum::<usize>()
    }
}

/// An ordered forest of [`OutputTree`]s: what one accepting computation tree
/// outputs. Forests compare structurally; two machine runs produce "the same
/// output" exactly when their forests are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OutputForest(pub Vec<OutputTree>);

impl OutputForest {
    pub fn node_count(&self) -> usize {
        self.0.iter().map(OutputTree::node_count).sum()
    }
}

impl std::fmt::Display for OutputForest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&canonical_encoding(self))
    }
}

/// Projects a computation tree to its output forest.
///
/// Children are processed in order and their forests concatenated. A node
/// with the silent marker passes that concatenation through unchanged; a node
/// labeled with a letter wraps the concatenation as the children of a single
/// new tree rooted at that letter. Silent interior nodes are therefore
/// transparent, and the forest has exactly one node per letter-labeled tree
/// node.
pub fn out(tree: &ComputationTree) -> OutputForest {
    let mut collected = Vec::new();
    for child in &tree.children {
        collected.extend(out(child).0);
    }
    match &tree.output {
        OutputSymbol::Silent => OutputForest(collected),
        OutputSymbol::Letter(l) => OutputForest(vec![OutputTree {
            label: l.clone(),
            children: collected,
        }]),
    }
}

/// The canonical injective string encoding of a forest: each tree is rendered
/// depth-first as `label(child,child,...)` with the parentheses omitted for
/// leaves, and forest members are joined with `|`. The empty forest encodes
/// as the empty string. Structural characters occurring inside labels are
/// backslash-escaped, so distinct forests always encode distinctly.
pub fn canonical_encoding(forest: &OutputForest) -> String {
    fn escape_into(label: &str, buf: &mut String) {
        for c in label.chars() {
            if matches!(c, '\\' | '(' | ')' | ',' | '|') {
                buf.push('\\');
            }
            buf.push(c);
        }
    }
    fn tree_into(tree: &OutputTree, buf: &mut String) {
        escape_into(&tree.label, buf);
        if !tree.children.is_empty() {
            buf.push('(');
            for (i, c) in tree.children.iter().enumerate() {
                if i > 0 {
                    buf.push(',');
                }
                tree_into(c, buf);
            }
            buf.push(')');
        }
    }
    let mut buf = String::new();
    for (i, t) in forest.0.iter().enumerate() {
        if i > 0 {
            buf.push('|');
        }
        tree_into(t, &mut buf);
    }
    buf
}
