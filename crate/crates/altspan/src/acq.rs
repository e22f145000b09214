//! Answer counting for acyclic conjunctive queries.
//!
//! A query's answers are the distinct projections of satisfying assignments
//! onto its free variables. Three independent routes to that count live
//! here: a machine built from a join tree (its span is the answer count), a
//! memoized set-valued evaluator over the same join tree, and a deliberately
//! naive cartesian-product oracle for cross-checking.
//!
//! The bridge to spans works by masking: walking the join tree, each atom
//! emits its matched tuple with *bound* positions replaced by `★` so that
//! only free-variable values show. Two satisfying assignments with the same
//! answer then produce identical output forests — the forest is fully
//! determined by the answer — while different answers differ at whichever
//! atom holds the differing free variable. Distinct forests ↔ distinct
//! answers, so the span counts answers exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::Error;
use crate::machine::run::RunBounds;
use crate::machine::{
    canonical_encoding, Machine, MachineBuilder, Move, OutputForest, OutputTree, StateKind,
};

/// A named relation instance: fixed arity, set semantics for tuples.
#[derive(Debug, Clone, Default)]
pub struct Database {
    relations: BTreeMap<String, (usize, BTreeSet<Vec<String>>)>,
}

impl Database {
    pub fn new() -> Database {
        Database::default()
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<(), Error> {
        if name.is_empty() {
            return Err(Error::validation("empty relation name"));
        }
        if self
            .relations
            .insert(name.to_string(), (arity, BTreeSet::new()))
            .is_some()
        {
            return Err(Error::validation(format!("duplicate relation `{name}`")));
        }
        Ok(())
    }

    pub fn add_tuple<S: AsRef<str>>(&mut self, relation: &str, tuple: &[S]) -> Result<(), Error> {
        let (arity, tuples) = self
            .relations
            .get_mut(relation)
            .ok_or_else(|| Error::validation(format!("unknown relation `{relation}`")))?;
        if tuple.len() != *arity {
            return Err(Error::validation(format!(
                "relation `{relation}` has arity {arity}, got a {}-tuple",
                tuple.len()
            )));
        }
        tuples.insert(tuple.iter().map(|s| s.as_ref().to_string()).collect());
        Ok(())
    }

    pub fn relation(&self, name: &str) -> Option<(usize, &BTreeSet<Vec<String>>)> {
        self.relations.get(name).map(|(a, t)| (*a, t))
    }

    /// All relations in name order.
    pub fn relations(&self) -> impl Iterator<Item = (&str, usize, &BTreeSet<Vec<String>>)> {
        self.relations
            .iter()
            .map(|(name, (arity, tuples))| (name.as_str(), *arity, tuples))
    }
}

/// One atom `R(x, y, ...)`; repeated variables are allowed and enforce
/// equality within a tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub relation: String,
    pub vars: Vec<String>,
}

impl Atom {
    pub fn new<S: AsRef<str>>(relation: &str, vars: &[S]) -> Atom {
        Atom {
            relation: relation.to_string(),
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }
}

/// A conjunctive query: answer tuples range over `free`, everything else is
/// existentially quantified.
#[derive(Debug, Clone)]
pub struct ConjunctiveQuery {
    pub free: Vec<String>,
    pub atoms: Vec<Atom>,
}

impl ConjunctiveQuery {
    pub fn new<S: AsRef<str>>(free: &[S], atoms: Vec<Atom>) -> ConjunctiveQuery {
        ConjunctiveQuery {
            free: free.iter().map(|s| s.as_ref().to_string()).collect(),
            atoms,
        }
    }

    /// Structural checks against a database: known relations, matching
    /// arities, free variables that actually occur, no duplicate free slots.
    pub fn validate(&self, db: &Database) -> Result<(), Error> {
        if self.atoms.is_empty() {
            return Err(Error::validation("query has no atoms"));
        }
        let mut occurring: BTreeSet<&str> = BTreeSet::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            let (arity, _) = db
                .relation(&atom.relation)
                .ok_or_else(|| Error::validation(format!("unknown relation `{}`", atom.relation)))?;
            if atom.vars.len() != arity {
                return Err(Error::validation(format!(
                    "atom {i}: `{}` has arity {arity}, got {} variables",
                    atom.relation,
                    atom.vars.len()
                )));
            }
            if atom.vars.is_empty() {
                return Err(Error::validation(format!("atom {i} has no variables")));
            }
            for v in &atom.vars {
                if v.is_empty() {
                    return Err(Error::validation(format!("atom {i}: empty variable name")));
                }
                occurring.insert(v);
            }
        }
        let mut seen = BTreeSet::new();
        for v in &self.free {
            if !seen.insert(v.as_str()) {
                return Err(Error::validation(format!("free variable `{v}` repeats")));
            }
            if !occurring.contains(v.as_str()) {
                return Err(Error::validation(format!(
                    "free variable `{v}` occurs in no atom"
                )));
            }
        }
        Ok(())
    }
}

/// A rooted tree over a query's atom indices with the running-intersection
/// property: for every variable, the atoms containing it form a connected
/// subtree.
#[derive(Debug, Clone)]
pub struct JoinTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

/// Builds a join tree by ear removal (GYO reduction): an atom is an ear when
/// every variable it shares with the rest also lives in some single witness
/// atom, which becomes its parent. Queries that do not reduce are cyclic and
/// rejected outright. Deterministic: the lowest-indexed ear goes first.
pub fn join_tree(q: &ConjunctiveQuery) -> Result<JoinTree, Error> {
    let n = q.atoms.len();
    if n == 0 {
        return Err(Error::validation("query has no atoms"));
    }
    let vars: Vec<BTreeSet<&str>> = q
        .atoms
        .iter()
        .map(|a| a.vars.iter().map(String::as_str).collect())
        .collect();
    let mut alive = vec![true; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut remaining = n;
    while remaining > 1 {
        let mut found = None;
        'search: for a in 0..n {
            if !alive[a] {
                continue;
            }
            let shared: BTreeSet<&str> = vars[a]
                .iter()
                .copied()
                .filter(|v| {
                    (0..n).any(|c| c != a && alive[c] && vars[c].contains(v))
                })
                .collect();
            for b in 0..n {
                if b != a && alive[b] && shared.is_subset(&vars[b]) {
                    found = Some((a, b));
                    break 'search;
                }
            }
        }
        let (ear, witness) =
            found.ok_or_else(|| Error::validation("query is cyclic: no join tree exists"))?;
        parent[ear] = Some(witness);
        alive[ear] = false;
        remaining -= 1;
    }
    let root = alive.iter().position(|&a| a).unwrap();
    let mut children = vec![Vec::new(); n];
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(c);
        }
    }
    let tree = JoinTree {
        root,
        parent,
        children,
    };
    validate_join_tree(q, &tree)?;
    Ok(tree)
}

/// Checks that `tree` is a genuine join tree for `q`: a spanning tree over
/// the atom indices whose variable occurrences are connected.
pub fn validate_join_tree(q: &ConjunctiveQuery, tree: &JoinTree) -> Result<(), Error> {
    let n = q.atoms.len();
    if tree.parent.len() != n || tree.children.len() != n || tree.root >= n {
        return Err(Error::validation("join tree does not index the atoms"));
    }
    if tree.parent[tree.root].is_some() {
        return Err(Error::validation("join tree root has a parent"));
    }
    // Every node must reach the root without revisiting anything.
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut at = start;
        while let Some(p) = tree.parent[at] {
            if seen[at] {
                return Err(Error::validation("join tree contains a cycle"));
            }
            seen[at] = true;
            at = p;
        }
        if at != tree.root {
            return Err(Error::validation("join tree is not connected"));
        }
    }
    for (p, kids) in tree.children.iter().enumerate() {
        for &c in kids {
            if tree.parent[c] != Some(p) {
                return Err(Error::validation("join tree child lists disagree with parents"));
            }
        }
    }
    let mut all_vars: BTreeSet<&str> = BTreeSet::new();
    for a in &q.atoms {
        all_vars.extend(a.vars.iter().map(String::as_str));
    }
    for v in all_vars {
        let holders: Vec<usize> = (0..n)
            .filter(|&i| q.atoms[i].vars.iter().any(|x| x == v))
            .collect();
        // Walk tree edges that stay inside `holders`.
        let inside = |i: usize| holders.contains(&i);
        let mut reached = BTreeSet::from([holders[0]]);
        let mut queue = VecDeque::from([holders[0]]);
        while let Some(i) = queue.pop_front() {
            let mut neighbors: Vec<usize> = tree.children[i].clone();
            neighbors.extend(tree.parent[i]);
            for nb in neighbors {
                if inside(nb) && reached.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
        if reached.len() != holders.len() {
            return Err(Error::validation(format!(
                "variable `{v}` spans a disconnected part of the join tree"
            )));
        }
    }
    Ok(())
}

/// Renders a matched tuple with bound positions masked: free-variable values
/// appear (backslash-escaped), everything else is `★`. Injective in the
/// shown values, so equal renderings mean equal free projections.
pub fn masked_tuple(atom: &Atom, free: &BTreeSet<&str>, tuple: &[String]) -> String {
    let mut out = String::from("(");
    for (i, (var, val)) in atom.vars.iter().zip(tuple).enumerate() {
        if i > 0 {
            out.push(',');
        }
        if free.contains(var.as_str()) {
            for c in val.chars() {
                if matches!(c, '\\' | ',' | '(' | ')' | '★') {
                    out.push('\\');
                }
                out.push(c);
            }
        } else {
            out.push('★');
        }
    }
    out.push(')');
    out
}

type Binding = BTreeMap<String, String>;

/// Extends `constraint` with the atom's variables bound to `tuple`, or
/// `None` when the tuple contradicts the constraint or repeats variables
/// inconsistently.
fn bind(atom: &Atom, constraint: &Binding, tuple: &[String]) -> Option<Binding> {
    let mut binding = constraint.clone();
    for (var, val) in atom.vars.iter().zip(tuple) {
        match binding.get(var) {
            Some(v) if v != val => return None,
            Some(_) => {}
            None => {
                binding.insert(var.clone(), val.clone());
            }
        }
    }
    Some(binding)
}

fn shared_constraint(binding: &Binding, from: &Atom, to: &Atom) -> Binding {
    to.vars
        .iter()
        .filter(|v| from.vars.contains(v))
        .filter_map(|v| binding.get(v).map(|val| (v.clone(), val.clone())))
        .collect()
}

fn constraint_key(c: &Binding) -> String {
    let esc = |s: &str| s.replace('\\', "\\\\").replace('=', "\\=").replace(';', "\\;");
    c.iter()
        .map(|(k, v)| format!("{}={}", esc(k), esc(v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// All output trees the subtree at `node` can produce under `constraint`:
/// one tree per distinct partial answer. Memoized on (node, constraint).
fn forests_at(
    db: &Database,
    q: &ConjunctiveQuery,
    tree: &JoinTree,
    free: &BTreeSet<&str>,
    node: usize,
    constraint: &Binding,
    memo: &mut HashMap<(usize, String), BTreeSet<OutputTree>>,
) -> Result<BTreeSet<OutputTree>, Error> {
    let key = (node, constraint_key(constraint));
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let atom = &q.atoms[node];
    let (_, tuples) = db
        .relation(&atom.relation)
        .ok_or_else(|| Error::validation(format!("unknown relation `{}`", atom.relation)))?;
    let mut out: BTreeSet<OutputTree> = BTreeSet::new();
    for tuple in tuples {
        let Some(binding) = bind(atom, constraint, tuple) else {
            continue;
        };
        let label = masked_tuple(atom, free, tuple);
        let child_sets: Vec<BTreeSet<OutputTree>> = tree.children[node]
            .iter()
            .map(|&c| {
                let sub = shared_constraint(&binding, atom, &q.atoms[c]);
                forests_at(db, q, tree, free, c, &sub, memo)
            })
            .collect::<Result<_, _>>()?;
        if child_sets.iter().any(BTreeSet::is_empty) {
            continue;
        }
        let mut combos: Vec<Vec<OutputTree>> = vec![Vec::new()];
        for set in &child_sets {
            let mut next = Vec::with_capacity(combos.len() * set.len());
            for prefix in &combos {
                for t in set {
                    let mut row = prefix.clone();
                    row.push(t.clone());
                    next.push(row);
                }
            }
            combos = next;
        }
        for children in combos {
            out.insert(OutputTree {
                label: label.clone(),
                children,
            });
        }
    }
    memo.insert(key, out.clone());
    Ok(out)
}

/// Canonical encodings of all answer forests, via the join-tree evaluator.
pub fn answer_forests(db: &Database, q: &ConjunctiveQuery) -> Result<BTreeSet<String>, Error> {
    let tree = join_tree(q)?;
    answer_forests_with(db, q, &tree)
}

/// Like [`answer_forests`], but evaluated over a caller-supplied join tree.
/// The span is the same for every valid join tree of the query; the shape of
/// the individual forests is not.
pub fn answer_forests_with(
    db: &Database,
    q: &ConjunctiveQuery,
    tree: &JoinTree,
) -> Result<BTreeSet<String>, Error> {
    q.validate(db)?;
    validate_join_tree(q, tree)?;
    let free: BTreeSet<&str> = q.free.iter().map(String::as_str).collect();
    let mut memo = HashMap::new();
    let set = forests_at(db, q, tree, &free, tree.root, &Binding::new(), &mut memo)?;
    Ok(set
        .into_iter()
        .map(|t| canonical_encoding(&OutputForest(vec![t])))
        .collect())
}

/// The number of distinct answers, by the evaluator.
pub fn answer_span(db: &Database, q: &ConjunctiveQuery) -> Result<usize, Error> {
    Ok(answer_forests(db, q)?.len())
}

/// [`answer_span`] over a caller-supplied join tree.
pub fn answer_span_with(
    db: &Database,
    q: &ConjunctiveQuery,
    tree: &JoinTree,
) -> Result<usize, Error> {
    Ok(answer_forests_with(db, q, tree)?.len())
}

/// Deliberately naive reference: materialize the full cartesian product of
/// the atoms' relations, keep consistent rows, project onto the free list.
pub fn oracle_answers(
    db: &Database,
    q: &ConjunctiveQuery,
) -> Result<BTreeSet<Vec<String>>, Error> {
    q.validate(db)?;
    fn rec(
        db: &Database,
        q: &ConjunctiveQuery,
        i: usize,
        binding: &Binding,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        if i == q.atoms.len() {
            out.insert(q.free.iter().map(|v| binding[v].clone()).collect());
            return;
        }
        let atom = &q.atoms[i];
        let (_, tuples) = db.relation(&atom.relation).expect("validated");
        for tuple in tuples {
            if let Some(next) = bind(atom, binding, tuple) {
                rec(db, q, i + 1, &next, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(db, q, 0, &Binding::new(), &mut out);
    Ok(out)
}

/// A machine whose span on the empty input equals the query's answer count.
#[derive(Debug, Clone)]
pub struct AcqInstance {
    pub machine: Machine,
    pub input: String,
    pub bounds: RunBounds,
}

/// Compiles (database, query) into a machine: an existential state per
/// (join-tree node, inherited constraint) guesses a consistent tuple and
/// emits its masked rendering; a universal state per (node, tuple) then
/// requires every child subtree to succeed, in child order. Leaves step to a
/// shared accept. The tape is never touched.
pub fn machine_for_instance(db: &Database, q: &ConjunctiveQuery) -> Result<AcqInstance, Error> {
    let tree = join_tree(q)?;
    machine_for_instance_with(db, q, &tree)
}

/// [`machine_for_instance`] over a caller-supplied join tree.
pub fn machine_for_instance_with(
    db: &Database,
    q: &ConjunctiveQuery,
    tree: &JoinTree,
) -> Result<AcqInstance, Error> {
    q.validate(db)?;
    validate_join_tree(q, tree)?;
    let free: BTreeSet<&str> = q.free.iter().map(String::as_str).collect();
    let mut b = MachineBuilder::new();
    let e_name = |node: usize, c: &Binding| format!("q:{node}:{}", constraint_key(c));
    let mut declared: BTreeSet<String> = BTreeSet::new();
    let mut queue: VecDeque<(usize, Binding)> = VecDeque::new();
    let root_e = e_name(tree.root, &Binding::new());
    declared.insert(root_e);
    queue.push_back((tree.root, Binding::new()));
    // Tuple states are shared: their behavior depends only on (node, tuple),
    // not on which constraint led there, so declare each once.
    let mut declared_u: BTreeSet<String> = BTreeSet::new();
    while let Some((node, constraint)) = queue.pop_front() {
        let en = e_name(node, &constraint);
        b = b.state(&en, StateKind::Existential);
        let atom = &q.atoms[node];
        let (_, tuples) = db.relation(&atom.relation).expect("validated");
        for tuple in tuples {
            let Some(binding) = bind(atom, &constraint, tuple) else {
                continue;
            };
            let un = format!(
                "t:{node}:{}",
                constraint_key(&atom.vars.iter().cloned().zip(tuple.iter().cloned()).collect())
            );
            let fresh = declared_u.insert(un.clone());
            if fresh {
                b = b.state(&un, StateKind::Universal);
            }
            b = b.transition(&en, "_", &un, "_", Move::Left, Some(&masked_tuple(atom, &free, tuple)));
            if !fresh {
                continue;
            }
            if tree.children[node].is_empty() {
                b = b.transition(&un, "_", "acc", "_", Move::Left, None);
            } else {
                for &c in &tree.children[node] {
                    let sub = shared_constraint(&binding, atom, &q.atoms[c]);
                    let cn = e_name(c, &sub);
                    b = b.transition(&un, "_", &cn, "_", Move::Left, None);
                    if declared.insert(cn.clone()) {
                        queue.push_back((c, sub));
                    }
                }
            }
        }
    }
    b = b.state("acc", StateKind::Accept);
    Ok(AcqInstance {
        machine: b.build()?,
        input: String::new(),
        bounds: RunBounds::new(1, 3 * q.atoms.len() + 4)?,
    })
}
