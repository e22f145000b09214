//! The alternating transducer machine model.
//!
//! A machine has a finite state set where each state is existential,
//! universal, accepting, or rejecting; a read-only input string; a work tape
//! over a finite letter alphabet with a distinguished blank; and transitions
//! that read and write the work tape, move the work head one cell left or
//! right, and optionally emit one output letter. The declaration order of
//! transitions is semantically meaningful: it fixes the child order under
//! universal branching and the successor order everywhere else.
//!
//! Model conventions (uniform across the crate):
//!
//! - A transition moving left while the work head sits on cell 0 leaves the
//!   head on cell 0. Moving right onto a never-visited cell materializes a
//!   blank there, which is what the space bound in [`run`] meters.
//! - A configuration in a non-halting state with no applicable transitions
//!   rejects. In particular a universal configuration with no successors
//!   rejects; it is never a vacuous accept.
//! - The input head is carried and bounds-checked (it may sit one position
//!   past either end) but transitions do not consult the input string; the
//!   constructions in this crate encode their instance in states and tape.

mod config;
pub mod normalize;
pub mod run;
mod tree;

pub use config::Configuration;
pub use tree::{canonical_encoding, out, ComputationTree, OutputForest, OutputTree};

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::Error;

/// A work-tape or output letter. Letters are short strings so that derived
/// machines can introduce fresh marked letters without colliding with user
/// alphabets.
pub type Letter = String;

/// The customary blank work-tape letter.
pub const BLANK: &str = "_";

/// Index of a state in its machine's declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// What a state contributes to acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Exactly one successor must lead to acceptance.
    Existential,
    /// Every successor must lead to acceptance (and at least one must exist).
    Universal,
    /// Accepting leaf.
    Accept,
    /// Rejecting leaf.
    Reject,
}

impl StateKind {
    /// Accept and Reject states halt; they admit no outgoing transitions.
    pub fn is_halting(self) -> bool {
        matches!(self, StateKind::Accept | StateKind::Reject)
    }
}

/// A named state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub kind: StateKind,
}

/// Work-head movement. There is no stay move; see the module notes for the
/// left-at-cell-0 convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

/// What a transition emits: either nothing or one output letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OutputSymbol {
    /// The no-output marker, customarily written `∘`.
    Silent,
    Letter(Letter),
}

impl OutputSymbol {
    pub fn is_silent(&self) -> bool {
        matches!(self, OutputSymbol::Silent)
    }

    pub fn letter(&self) -> Option<&str> {
        match self {
            OutputSymbol::Silent => None,
            OutputSymbol::Letter(l) => Some(l),
        }
    }
}

impl std::fmt::Display for OutputSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OutputSymbol::Silent => write!(f, "∘"),
            OutputSymbol::Letter(l) => write!(f, "{l}"),
        }
    }
}

/// One transition: in state `from` reading `read` under the work head, enter
/// `to`, write `write`, move the head, and emit `output`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub read: Letter,
    pub to: StateId,
    pub write: Letter,
    pub movement: Move,
    pub output: OutputSymbol,
}

/// An alternating transducer machine. Construct via [`MachineBuilder`] or the
/// file loader; both paths run the same validation.
#[derive(Debug, Clone)]
pub struct Machine {
    states: Vec<State>,
    initial: StateId,
    input_alphabet: BTreeSet<char>,
    work_alphabet: BTreeSet<Letter>,
    output_alphabet: BTreeSet<Letter>,
    blank: Letter,
    transitions: Vec<Transition>,
    /// Transition indices per (state, read letter), in declaration order.
    index: HashMap<(StateId, Letter), Vec<usize>>,
}

impl Machine {
    /// Validates the parts and assembles a machine. The transition list order
    /// is kept verbatim; it realizes the child order of universal branching.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        states: Vec<State>,
        initial_name: &str,
        input_alphabet: BTreeSet<char>,
        work_alphabet: BTreeSet<Letter>,
        output_alphabet: BTreeSet<Letter>,
        blank: Letter,
        transitions: Vec<Transition>,
    ) -> Result<Machine, Error> {
        if states.is_empty() {
            return Err(Error::validation("machine has no states"));
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if s.name.is_empty() {
                return Err(Error::validation("empty state name"));
            }
            if !seen.insert(s.name.clone()) {
                return Err(Error::validation(format!("duplicate state `{}`", s.name)));
            }
        }
        let initial = states
            .iter()
            .position(|s| s.name == initial_name)
            .map(StateId)
            .ok_or_else(|| Error::validation(format!("initial state `{initial_name}` not declared")))?;
        if !work_alphabet.contains(&blank) {
            return Err(Error::validation(format!(
                "blank `{blank}` missing from work alphabet"
            )));
        }
        for c in &input_alphabet {
            if !work_alphabet.contains(&c.to_string()) {
                return Err(Error::validation(format!(
                    "input letter `{c}` missing from work alphabet"
                )));
            }
        }
        let mut index: HashMap<(StateId, Letter), Vec<usize>> = HashMap::new();
        let mut distinct: HashSet<&Transition> = HashSet::with_capacity(transitions.len());
        for (i, t) in transitions.iter().enumerate() {
            let from = states.get(t.from.0).ok_or_else(|| {
                Error::validation(format!("transition {i}: unknown source state"))
            })?;
            if t.to.0 >= states.len() {
                return Err(Error::validation(format!(
                    "transition {i}: unknown target state"
                )));
            }
            if from.kind.is_halting() {
                return Err(Error::validation(format!(
                    "transition {i}: `{}` is a halting state and admits no transitions",
                    from.name
                )));
            }
            if !work_alphabet.contains(&t.read) {
                return Err(Error::validation(format!(
                    "transition {i}: read letter `{}` not in work alphabet",
                    t.read
                )));
            }
            if !work_alphabet.contains(&t.write) {
                return Err(Error::validation(format!(
                    "transition {i}: write letter `{}` not in work alphabet",
                    t.write
                )));
            }
            if let Some(l) = t.output.letter() {
                if !output_alphabet.contains(l) {
                    return Err(Error::validation(format!(
                        "transition {i}: output letter `{l}` not in output alphabet"
                    )));
                }
            }
            if !distinct.insert(t) {
                return Err(Error::validation(format!(
                    "transition {i}: exact duplicate; declaration order must be a strict order \
                     on each (state, read) group"
                )));
            }
            index.entry((t.from, t.read.clone())).or_default().push(i);
        }
        Ok(Machine {
            states,
            initial,
            input_alphabet,
            work_alphabet,
            output_alphabet,
            blank,
            transitions,
            index,
        })
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.0].name
    }

    pub fn kind(&self, id: StateId) -> StateKind {
        self.states[id.0].kind
    }

    /// Looks a state up by name.
    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s.name == name).map(StateId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn blank(&self) -> &Letter {
        &self.blank
    }

    pub fn input_alphabet(&self) -> &BTreeSet<char> {
        &self.input_alphabet
    }

    pub fn work_alphabet(&self) -> &BTreeSet<Letter> {
        &self.work_alphabet
    }

    pub fn output_alphabet(&self) -> &BTreeSet<Letter> {
        &self.output_alphabet
    }

    /// All transitions in declaration order.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// The transitions applicable in `state` reading `letter`, in declaration
    /// order. Empty for halting states and for (state, letter) groups with no
    /// declared transitions (which reject if reached in a non-halting state).
    pub fn transitions_from(&self, state: StateId, letter: &str) -> impl Iterator<Item = &Transition> {
        self.index
            .get(&(state, letter.to_string()))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&i| &self.transitions[i])
    }

    /// The starting configuration: initial state, a single blank cell, both
    /// heads at position 0.
    pub fn initial_config(&self) -> Configuration {
        Configuration {
            state: self.initial,
            work_tape: vec![self.blank.clone()],
            work_head: 0,
            input_head: 0,
        }
    }

    /// Checks that `input` only uses declared input letters.
    pub fn validate_input(&self, input: &str) -> Result<(), Error> {
        for c in input.chars() {
            if !self.input_alphabet.contains(&c) {
                return Err(Error::validation(format!(
                    "input letter `{c}` not in input alphabet"
                )));
            }
        }
        Ok(())
    }

    /// The configurations reachable from `config` in one step, paired with
    /// the output symbol of the transition taken, in declaration order.
    ///
    /// Successors are not filtered by any space bound; enumeration applies
    /// bounds. Halting states and groups with no transitions yield an empty
    /// list. A malformed configuration (out-of-range state or heads, tape
    /// letters outside the work alphabet) is a validation error.
    pub fn successors(
        &self,
        input: &str,
        config: &Configuration,
    ) -> Result<Vec<(Configuration, OutputSymbol)>, Error> {
        config.validate(self, input)?;
        if self.kind(config.state).is_halting() {
            return Ok(Vec::new());
        }
        let read = config.work_tape[config.work_head].clone();
        let mut out = Vec::new();
        for t in self.transitions_from(config.state, &read) {
            let mut tape = config.work_tape.clone();
            tape[config.work_head] = t.write.clone();
            let head = match t.movement {
                // Left at cell 0 stays on cell 0.
                Move::Left => config.work_head.saturating_sub(1),
                Move::Right => {
                    let h = config.work_head + 1;
                    if h == tape.len() {
                        tape.push(self.blank.clone());
                    }
                    h
                }
            };
            out.push((
                Configuration {
                    state: t.to,
                    work_tape: tape,
                    work_head: head,
                    input_head: config.input_head,
                },
                t.output.clone(),
            ));
        }
        Ok(out)
    }
}

/// Incremental machine construction for code-built machines. Letters used by
/// transitions are collected into the work and output alphabets
/// automatically; the blank defaults to [`BLANK`].
#[derive(Debug, Default)]
pub struct MachineBuilder {
    states: Vec<State>,
    initial: Option<String>,
    input_alphabet: BTreeSet<char>,
    work_alphabet: BTreeSet<Letter>,
    output_alphabet: BTreeSet<Letter>,
    blank: Option<Letter>,
    transitions: Vec<(String, Letter, String, Letter, Move, OutputSymbol)>,
}

impl MachineBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a state. The first declared state becomes the initial state
    /// unless [`initial`](Self::initial) overrides that.
    pub fn state(mut self, name: &str, kind: StateKind) -> Self {
        self.states.push(State {
            name: name.to_string(),
            kind,
        });
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial = Some(name.to_string());
        self
    }

    /// Declares input letters (informational; transitions do not read the
    /// input string). The letters join the work alphabet as required.
    pub fn input_letters(mut self, letters: &str) -> Self {
        self.input_alphabet.extend(letters.chars());
        self
    }

    /// Declares extra work letters beyond those appearing in transitions.
    pub fn work_letter(mut self, letter: &str) -> Self {
        self.work_alphabet.insert(letter.to_string());
        self
    }

    /// Declares extra output letters beyond those appearing in transitions.
    pub fn output_letter(mut self, letter: &str) -> Self {
        self.output_alphabet.insert(letter.to_string());
        self
    }

    pub fn blank(mut self, letter: &str) -> Self {
        self.blank = Some(letter.to_string());
        self
    }

    /// Appends a transition; `output` of `None` is the silent marker. Order
    /// of calls is the declaration order.
    pub fn transition(
        mut self,
        from: &str,
        read: &str,
        to: &str,
        write: &str,
        movement: Move,
        output: Option<&str>,
    ) -> Self {
        self.transitions.push((
            from.to_string(),
            read.to_string(),
            to.to_string(),
            write.to_string(),
            movement,
            match output {
                None => OutputSymbol::Silent,
                Some(l) => OutputSymbol::Letter(l.to_string()),
            },
        ));
        self
    }

    pub fn build(self) -> Result<Machine, Error> {
        let blank = self.blank.unwrap_or_else(|| BLANK.to_string());
        let mut work = self.work_alphabet;
        work.insert(blank.clone());
        for c in &self.input_alphabet {
            work.insert(c.to_string());
        }
        let mut output = self.output_alphabet;
        let ids: HashMap<&str, StateId> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.as_str(), StateId(i)))
            .collect();
        let name_to_id = |name: &str| -> Result<StateId, Error> {
            ids.get(name)
                .copied()
                .ok_or_else(|| Error::validation(format!("undeclared state `{name}`")))
        };
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (from, read, to, write, movement, out) in &self.transitions {
            work.insert(read.clone());
            work.insert(write.clone());
            if let Some(l) = out.letter() {
                output.insert(l.to_string());
            }
            transitions.push(Transition {
                from: name_to_id(from)?,
                read: read.clone(),
                to: name_to_id(to)?,
                write: write.clone(),
                movement: *movement,
                output: out.clone(),
            });
        }
        drop(ids);
        let initial = match &self.initial {
            Some(name) => name.clone(),
            None => {
                self.states
                    .first()
                    .ok_or_else(|| Error::validation("machine has no states"))?
                    .name
                    .clone()
            }
        };
        Machine::new(
            self.states,
            &initial,
            self.input_alphabet,
            work,
            output,
            blank,
            transitions,
        )
    }
}
