//! Versioned JSON file formats.
//!
//! Every file is a JSON object with a top-level `"format"` tag naming the
//! shape and its version (for example `"machine/1"`). Loading checks the tag
//! before deserializing, so a grammar handed to a machine command fails with
//! a format error instead of a pile of missing-field complaints. The DTO
//! structs here mirror the domain types field by field; converting into the
//! domain types re-runs their full validation.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::acq::{Atom, ConjunctiveQuery, Database, JoinTree};
use crate::error::Error;
use crate::grammar::{Grammar, NonterminalId, Rule, Symbol};
use crate::machine::{Machine, MachineBuilder, Move, StateKind};
use crate::wfwalks::{LabeledGraph, OcRelation};

pub const MACHINE_FORMAT: &str = "machine/1";
pub const GRAMMAR_FORMAT: &str = "grammar/1";
pub const GRAPH_FORMAT: &str = "graph/1";
pub const OC_FORMAT: &str = "oc/1";
pub const DATABASE_FORMAT: &str = "database/1";
pub const QUERY_FORMAT: &str = "query/1";
pub const JOIN_TREE_FORMAT: &str = "join-tree/1";

fn read_value(path: &Path) -> Result<serde_json::Value, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T: DeserializeOwned>(path: &Path, expected: &str) -> Result<T, Error> {
    let value = read_value(path)?;
    let found = value
        .get("format")
        .and_then(|f| f.as_str())
        .unwrap_or("(missing)")
        .to_string();
    if found != expected {
        return Err(Error::Format {
            path: path.to_path_buf(),
            expected: expected.to_string(),
            found,
        });
    }
    serde_json::from_value(value).map_err(|source| Error::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn save<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------- machines

#[derive(Debug, Serialize, Deserialize)]
pub struct MachineFile {
    pub format: String,
    pub states: Vec<StateFile>,
    pub initial: String,
    #[serde(default)]
    pub input_letters: String,
    #[serde(default)]
    pub work_letters: Vec<String>,
    #[serde(default)]
    pub output_letters: Vec<String>,
    #[serde(default = "default_blank")]
    pub blank: String,
    pub transitions: Vec<TransitionFile>,
}

fn default_blank() -> String {
    "_".to_string()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub name: String,
    pub kind: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TransitionFile {
    pub from: String,
    pub read: String,
    pub to: String,
    pub write: String,
    #[serde(rename = "move")]
    pub movement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn kind_name(kind: StateKind) -> &'static str {
    match kind {
        StateKind::Existential => "existential",
        StateKind::Universal => "universal",
        StateKind::Accept => "accept",
        StateKind::Reject => "reject",
    }
}

fn parse_kind(s: &str) -> Result<StateKind, Error> {
    match s {
        "existential" => Ok(StateKind::Existential),
        "universal" => Ok(StateKind::Universal),
        "accept" => Ok(StateKind::Accept),
        "reject" => Ok(StateKind::Reject),
        other => Err(Error::validation(format!("unknown state kind `{other}`"))),
    }
}

pub fn machine_to_file(m: &Machine) -> MachineFile {
    MachineFile {
        format: MACHINE_FORMAT.to_string(),
        states: m
            .states()
            .iter()
            .map(|s| StateFile {
                name: s.name.clone(),
                kind: kind_name(s.kind).to_string(),
            })
            .collect(),
        initial: m.state_name(m.initial()).to_string(),
        input_letters: m.input_alphabet().iter().collect(),
        work_letters: m.work_alphabet().iter().cloned().collect(),
        output_letters: m.output_alphabet().iter().cloned().collect(),
        blank: m.blank().clone(),
        transitions: m
            .transitions()
            .iter()
            .map(|t| TransitionFile {
                from: m.state_name(t.from).to_string(),
                read: t.read.clone(),
                to: m.state_name(t.to).to_string(),
                write: t.write.clone(),
                movement: match t.movement {
                    Move::Left => "L".to_string(),
                    Move::Right => "R".to_string(),
                },
                output: t.output.letter().map(str::to_string),
            })
            .collect(),
    }
}

pub fn machine_from_file(file: &MachineFile) -> Result<Machine, Error> {
    let mut b = MachineBuilder::new();
    for s in &file.states {
        b = b.state(&s.name, parse_kind(&s.kind)?);
    }
    b = b
        .initial(&file.initial)
        .input_letters(&file.input_letters)
        .blank(&file.blank);
    for l in &file.work_letters {
        b = b.work_letter(l);
    }
    for l in &file.output_letters {
        b = b.output_letter(l);
    }
    for t in &file.transitions {
        let movement = match t.movement.as_str() {
            "L" => Move::Left,
            "R" => Move::Right,
            other => {
                return Err(Error::validation(format!(
                    "unknown movement `{other}` (expected L or R)"
                )))
            }
        };
        b = b.transition(&t.from, &t.read, &t.to, &t.write, movement, t.output.as_deref());
    }
    b.build()
}

pub fn load_machine(path: &Path) -> Result<Machine, Error> {
    machine_from_file(&load(path, MACHINE_FORMAT)?)
}

pub fn save_machine(path: &Path, m: &Machine) -> Result<(), Error> {
    save(path, &machine_to_file(m))
}

// ---------------------------------------------------------------- grammars

#[derive(Debug, Serialize, Deserialize)]
pub struct GrammarFile {
    pub format: String,
    pub start: String,
    #[serde(default)]
    pub nonterminals: Vec<String>,
    pub rules: Vec<RuleFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RuleFile {
    pub lhs: String,
    pub rhs: Vec<SymbolFile>,
}

/// One right-hand-side symbol: `{"nonterminal": "S"}` or `{"terminal": "a"}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolFile {
    Nonterminal(String),
    Terminal(String),
}

pub fn grammar_to_file(g: &Grammar) -> GrammarFile {
    GrammarFile {
        format: GRAMMAR_FORMAT.to_string(),
        start: g.name(g.start()).to_string(),
        nonterminals: (0..g.nonterminal_count())
            .map(|i| g.name(NonterminalId(i)).to_string())
            .collect(),
        rules: g
            .rules()
            .iter()
            .map(|r| RuleFile {
                lhs: g.name(r.lhs).to_string(),
                rhs: r
                    .rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::Nonterminal(id) => {
                            SymbolFile::Nonterminal(g.name(*id).to_string())
                        }
                        Symbol::Terminal(t) => SymbolFile::Terminal(t.clone()),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn grammar_from_file(file: &GrammarFile) -> Result<Grammar, Error> {
    // An omitted nonterminal list is filled in from the start symbol and
    // rule heads, in order of appearance.
    let mut names = file.nonterminals.clone();
    if names.is_empty() {
        names.push(file.start.clone());
        for r in &file.rules {
            if !names.contains(&r.lhs) {
                names.push(r.lhs.clone());
            }
        }
    }
    let id_of = |name: &str| -> Result<NonterminalId, Error> {
        names
            .iter()
            .position(|n| n == name)
            .map(NonterminalId)
            .ok_or_else(|| Error::validation(format!("undeclared nonterminal `{name}`")))
    };
    let mut rules = Vec::new();
    for r in &file.rules {
        let mut rhs = Vec::new();
        for s in &r.rhs {
            rhs.push(match s {
                SymbolFile::Nonterminal(n) => Symbol::Nonterminal(id_of(n)?),
                SymbolFile::Terminal(t) => Symbol::Terminal(t.clone()),
            });
        }
        rules.push(Rule {
            lhs: id_of(&r.lhs)?,
            rhs,
        });
    }
    Grammar::new(names, &file.start, rules)
}

pub fn load_grammar(path: &Path) -> Result<Grammar, Error> {
    grammar_from_file(&load(path, GRAMMAR_FORMAT)?)
}

pub fn save_grammar(path: &Path, g: &Grammar) -> Result<(), Error> {
    save(path, &grammar_to_file(g))
}

// ------------------------------------------------------------------ graphs

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub format: String,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeFile {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

pub fn graph_to_file(g: &LabeledGraph) -> GraphFile {
    GraphFile {
        format: GRAPH_FORMAT.to_string(),
        nodes: g.nodes().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|(f, l, t)| EdgeFile {
                from: g.nodes()[*f].clone(),
                to: g.nodes()[*t].clone(),
                label: l.clone(),
            })
            .collect(),
    }
}

pub fn graph_from_file(file: &GraphFile) -> Result<LabeledGraph, Error> {
    let mut g = LabeledGraph::new();
    for n in &file.nodes {
        g.add_node(n)?;
    }
    for e in &file.edges {
        match &e.label {
            Some(l) => g.add_edge(&e.from, l, &e.to)?,
            None => g.add_unlabeled_edge(&e.from, &e.to)?,
        }
    }
    Ok(g)
}

pub fn load_graph(path: &Path) -> Result<LabeledGraph, Error> {
    graph_from_file(&load(path, GRAPH_FORMAT)?)
}

pub fn save_graph(path: &Path, g: &LabeledGraph) -> Result<(), Error> {
    save(path, &graph_to_file(g))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OcFile {
    pub format: String,
    pub pairs: Vec<(String, String)>,
}

pub fn oc_to_file(oc: &OcRelation) -> OcFile {
    OcFile {
        format: OC_FORMAT.to_string(),
        pairs: oc.pairs().iter().cloned().collect(),
    }
}

pub fn oc_from_file(file: &OcFile) -> OcRelation {
    let pairs: Vec<(&str, &str)> = file
        .pairs
        .iter()
        .map(|(o, c)| (o.as_str(), c.as_str()))
        .collect();
    OcRelation::new(&pairs)
}

pub fn load_oc(path: &Path) -> Result<OcRelation, Error> {
    Ok(oc_from_file(&load(path, OC_FORMAT)?))
}

pub fn save_oc(path: &Path, oc: &OcRelation) -> Result<(), Error> {
    save(path, &oc_to_file(oc))
}

// --------------------------------------------------------------- databases

#[derive(Debug, Serialize, Deserialize)]
pub struct DatabaseFile {
    pub format: String,
    pub relations: Vec<RelationFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RelationFile {
    pub name: String,
    pub arity: usize,
    pub tuples: Vec<Vec<String>>,
}

pub fn database_to_file(db: &Database) -> DatabaseFile {
    DatabaseFile {
        format: DATABASE_FORMAT.to_string(),
        relations: db
            .relations()
            .map(|(name, arity, tuples)| RelationFile {
                name: name.to_string(),
                arity,
                tuples: tuples.iter().cloned().collect(),
            })
            .collect(),
    }
}

pub fn database_from_file(file: &DatabaseFile) -> Result<Database, Error> {
    let mut db = Database::new();
    for r in &file.relations {
        db.add_relation(&r.name, r.arity)?;
        for t in &r.tuples {
            db.add_tuple(&r.name, t)?;
        }
    }
    Ok(db)
}

pub fn load_database(path: &Path) -> Result<Database, Error> {
    database_from_file(&load(path, DATABASE_FORMAT)?)
}

pub fn save_database(path: &Path, db: &Database) -> Result<(), Error> {
    save(path, &database_to_file(db))
}

// ----------------------------------------------------------------- queries

#[derive(Debug, Serialize, Deserialize)]
pub struct QueryFile {
    pub format: String,
    #[serde(default)]
    pub free: Vec<String>,
    pub atoms: Vec<AtomFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AtomFile {
    pub relation: String,
    pub vars: Vec<String>,
}

pub fn query_to_file(q: &ConjunctiveQuery) -> QueryFile {
    QueryFile {
        format: QUERY_FORMAT.to_string(),
        free: q.free.clone(),
        atoms: q
            .atoms
            .iter()
            .map(|a| AtomFile {
                relation: a.relation.clone(),
                vars: a.vars.clone(),
            })
            .collect(),
    }
}

pub fn query_from_file(file: &QueryFile) -> ConjunctiveQuery {
    ConjunctiveQuery::new(
        &file.free.iter().map(String::as_str).collect::<Vec<_>>(),
        file.atoms
            .iter()
            .map(|a| Atom::new(&a.relation, &a.vars))
            .collect(),
    )
}

pub fn load_query(path: &Path) -> Result<ConjunctiveQuery, Error> {
    Ok(query_from_file(&load(path, QUERY_FORMAT)?))
}

pub fn save_query(path: &Path, q: &ConjunctiveQuery) -> Result<(), Error> {
    save(path, &query_to_file(q))
}

// -------------------------------------------------------------- join trees

#[derive(Debug, Serialize, Deserialize)]
pub struct JoinTreeFile {
    pub format: String,
    pub root: usize,
    /// `parent[i]` is the parent atom index of atom `i`; the root has none.
    pub parent: Vec<Option<usize>>,
}

pub fn join_tree_to_file(t: &JoinTree) -> JoinTreeFile {
    JoinTreeFile {
        format: JOIN_TREE_FORMAT.to_string(),
        root: t.root,
        parent: t.parent.clone(),
    }
}

pub fn join_tree_from_file(file: &JoinTreeFile) -> Result<JoinTree, Error> {
    let n = file.parent.len();
    if file.root >= n {
        return Err(Error::validation(format!(
            "join-tree root {} out of range for {n} atoms",
            file.root
        )));
    }
    let mut children = vec![Vec::new(); n];
    for (i, p) in file.parent.iter().enumerate() {
        match p {
            None => {
                if i != file.root {
                    return Err(Error::validation(format!(
                        "atom {i} has no parent but is not the root"
                    )));
                }
            }
            Some(p) => {
                if *p >= n {
                    return Err(Error::validation(format!(
                        "atom {i} has out-of-range parent {p}"
                    )));
                }
                children[*p].push(i);
            }
        }
    }
    Ok(JoinTree {
        root: file.root,
        parent: file.parent.clone(),
        children,
    })
}

pub fn load_join_tree(path: &Path) -> Result<JoinTree, Error> {
    join_tree_from_file(&load(path, JOIN_TREE_FORMAT)?)
}

pub fn save_join_tree(path: &Path, t: &JoinTree) -> Result<(), Error> {
    save(path, &join_tree_to_file(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::GrammarBuilder;
    use crate::machine::run::{span, RunBounds};
    use std::path::PathBuf;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("altspan-files-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    fn two_branch_machine() -> Machine {
        MachineBuilder::new()
            .state("s", StateKind::Existential)
            .state("t", StateKind::Accept)
            .transition("s", "_", "t", "_", Move::Left, Some("a"))
            .transition("s", "_", "t", "_", Move::Right, Some("a"))
            .input_letters("01")
            .build()
            .unwrap()
    }

    #[test]
    fn machine_round_trips_and_still_runs() {
        let m = two_branch_machine();
        let path = scratch("machine.json");
        save_machine(&path, &m).unwrap();
        let back = load_machine(&path).unwrap();
        assert_eq!(machine_to_file(&m).transitions.len(), 2);
        let bounds = RunBounds::new(2, 4).unwrap();
        assert_eq!(span(&back, "", bounds).unwrap(), span(&m, "", bounds).unwrap());
        assert_eq!(back.input_alphabet(), m.input_alphabet());
    }

    #[test]
    fn grammar_round_trips() {
        let g = GrammarBuilder::new()
            .rule("S", &["a", "S", "b"])
            .rule::<&str>("S", &[])
            .build()
            .unwrap();
        let path = scratch("grammar.json");
        save_grammar(&path, &g).unwrap();
        let back = load_grammar(&path).unwrap();
        assert_eq!(back.rules().len(), g.rules().len());
        assert_eq!(back.terminals(), g.terminals());
        assert_eq!(back.name(back.start()), "S");
    }

    #[test]
    fn graph_oc_database_query_round_trip() {
        let mut g = LabeledGraph::new();
        g.add_node("s").unwrap();
        g.add_node("t").unwrap();
        g.add_edge("s", "(", "t").unwrap();
        g.add_unlabeled_edge("t", "s").unwrap();
        let gp = scratch("graph.json");
        save_graph(&gp, &g).unwrap();
        let g2 = load_graph(&gp).unwrap();
        assert_eq!(g2.edges(), g.edges());

        let oc = OcRelation::new(&[("(", ")")]);
        let op = scratch("oc.json");
        save_oc(&op, &oc).unwrap();
        assert_eq!(load_oc(&op).unwrap().pairs(), oc.pairs());

        let mut db = Database::new();
        db.add_relation("R", 2).unwrap();
        db.add_tuple("R", &["1", "2"]).unwrap();
        let dp = scratch("db.json");
        save_database(&dp, &db).unwrap();
        let db2 = load_database(&dp).unwrap();
        assert_eq!(db2.relation("R"), db.relation("R"));

        let q = ConjunctiveQuery::new(&["x"], vec![Atom::new("R", &["x", "y"])]);
        let qp = scratch("query.json");
        save_query(&qp, &q).unwrap();
        let q2 = load_query(&qp).unwrap();
        assert_eq!(q2.free, q.free);
        assert_eq!(q2.atoms, q.atoms);
    }

    #[test]
    fn join_tree_round_trips_and_checks_structure() {
        let t = JoinTree {
            root: 0,
            parent: vec![None, Some(0), Some(0)],
            children: vec![vec![1, 2], vec![], vec![]],
        };
        let path = scratch("jointree.json");
        save_join_tree(&path, &t).unwrap();
        let back = load_join_tree(&path).unwrap();
        assert_eq!(back.children, t.children);

        let bad = JoinTreeFile {
            format: JOIN_TREE_FORMAT.to_string(),
            root: 0,
            parent: vec![None, None],
        };
        assert!(matches!(
            join_tree_from_file(&bad),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn format_tag_mismatch_is_reported() {
        let g = GrammarBuilder::new().rule("S", &["a"]).build().unwrap();
        let path = scratch("mismatch.json");
        save_grammar(&path, &g).unwrap();
        match load_machine(&path) {
            Err(Error::Format {
                expected, found, ..
            }) => {
                assert_eq!(expected, MACHINE_FORMAT);
                assert_eq!(found, GRAMMAR_FORMAT);
            }
            other => panic!("expected a format error, got {other:?}"),
        }
    }

    #[test]
    fn missing_and_malformed_files_are_distinct_errors() {
        assert!(matches!(
            load_grammar(Path::new("/nonexistent/altspan.json")),
            Err(Error::Io { .. })
        ));
        let path = scratch("malformed.json");
        fs::write(&path, "{ not json").unwrap();
        assert!(matches!(load_grammar(&path), Err(Error::Parse { .. })));
    }
}
