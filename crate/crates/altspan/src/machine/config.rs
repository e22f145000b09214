//! Machine configurations.

use crate::error::Error;
use crate::machine::{Machine, StateId};

/// A snapshot of a running machine: control state, the visited prefix of the
/// work tape, and both head positions.
///
/// The work tape stores exactly the cells visited so far, so its length is
/// the space the branch has used; enumeration compares that length against
/// the space bound. The input head may sit one position past either end of
/// the input.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub work_tape: Vec<crate::machine::Letter>,
    pub work_head: usize,
    pub input_head: usize,
}

impl Configuration {
    /// Checks the structural invariants against a machine and input.
    pub fn validate(&self, machine: &Machine, input: &str) -> Result<(), Error> {
        if self.state.0 >= machine.states().len() {
            return Err(Error::validation(format!(
                "configuration references unknown state index {}",
                self.state.0
            )));
        }
        if self.work_tape.is_empty() {
            return Err(Error::validation("configuration has an empty work tape"));
        }
        if self.work_head >= self.work_tape.len() {
            return Err(Error::validation(format!(
                "work head {} outside tape of length {}",
                self.work_head,
                self.work_tape.len()
            )));
        }
        if self.input_head > input.chars().count() + 1 {
            return Err(Error::validation(format!(
                "input head {} outside input of length {}",
                self.input_head,
                input.chars().count()
            )));
        }
        for l in &self.work_tape {
            if !machine.work_alphabet().contains(l) {
                return Err(Error::validation(format!(
                    "tape letter `{l}` not in work alphabet"
                )));
            }
        }
        Ok(())
    }

    /// Space used by this configuration: the number of visited tape cells.
    pub fn space(&self) -> usize {
        self.work_tape.len()
    }

    /// A compact single-line rendering, used for grammar nonterminal names
    /// when machines are compiled to grammars. Distinct configurations render
    /// distinctly: fields are joined with `;` and tape letters with `,`, and
    /// the letters themselves never contain those separators in machines this
    /// crate builds.
    pub fn key(&self, machine: &Machine) -> String {
        format!(
            "[{};{};{};{}]",
            machine.state_name(self.state),
            self.work_tape.join(","),
            self.work_head,
            self.input_head
        )
    }
}
