//! Structural normal forms for machines.
//!
//! [`binarize`] rewrites every universal branching group to fan-out exactly
//! two without changing the set of output forests the machine can produce.
//! [`enforce_budget`] then compiles a cap on the number of principal tree
//! nodes into the machine itself, as a binary counter kept at the left end of
//! the work tape, so that the machine has *no* accepting computation trees
//! beyond the cap — making downstream language constructions exact instead of
//! merely bounded.
//!
//! Both passes name every state they introduce with a `~` prefix (`~b:` and
//! `~e:` respectively). Such states are *bookkeeping*: they never emit
//! output, and analyses that care about the size of the original computation
//! count only principal (non-`~`) nodes. The passes reject inputs that
//! already use the name space they are about to claim.

use std::collections::{BTreeSet, HashMap};

use super::{
    ComputationTree, Letter, Machine, MachineBuilder, Move, OutputSymbol, State, StateId,
    StateKind, Transition,
};
use crate::error::Error;

/// True for bookkeeping states introduced by the passes in this module. The
/// `~` name prefix is reserved for them; machine validation elsewhere does
/// not enforce that, but the passes here refuse colliding inputs.
pub fn is_aux_state(name: &str) -> bool {
    name.starts_with('~')
}

/// Number of tree nodes that sit in a principal (non-bookkeeping) state.
/// After [`binarize`] this is exactly the node count of the original
/// machine's corresponding tree.
pub fn principal_nodes(machine: &Machine, tree: &ComputationTree) -> usize {
    tree.count_nodes_where(&|c| !is_aux_state(machine.state_name(c.state)))
}

/// For a state of a budget-enforced machine, the simulated state it is about
/// to execute — `Some` exactly for the two per-step entry families.
pub fn simulated_state(name: &str) -> Option<&str> {
    name.strip_prefix("~e:enter:")
        .or_else(|| name.strip_prefix("~e:lfix:"))
}

/// Number of tree nodes of a budget-enforced machine that stand for
/// principal steps of the simulated machine: entry nodes whose simulated
/// state is principal, read at a simulated-tape cell (entry nodes parked on
/// a counter cell are boundary bounces, not steps).
pub fn principal_sim_nodes(machine: &Machine, tree: &ComputationTree) -> usize {
    tree.count_nodes_where(&|c| {
        match simulated_state(machine.state_name(c.state)) {
            Some(q) if !is_aux_state(q) => !c.work_tape[c.work_head].starts_with(ENF_PREFIX),
            _ => false,
        }
    })
}

// ---------------------------------------------------------------------------
// Binary universal branching
// ---------------------------------------------------------------------------

const BIN_PREFIX: &str = "~b:";
const PAD_ACCEPT: &str = "~b:acc";

fn marked(letter: &str) -> String {
    format!("~b:m:{letter}")
}

/// True when every universal (state, letter) group has exactly zero or two
/// transitions — the shape [`enforce_budget`] and the grammar construction
/// require. Groups with zero transitions are allowed; they reject.
pub fn is_binarized(m: &Machine) -> bool {
    m.states().iter().enumerate().all(|(i, s)| {
        s.kind != StateKind::Universal
            || m.work_alphabet().iter().all(|letter| {
                let n = m.transitions_from(StateId(i), letter).count();
                n == 0 || n == 2
            })
    })
}

/// Rewrites universal branching to fan-out exactly two, preserving the set
/// of output forests, the per-forest tree counts, and the space usage.
///
/// A group with one successor gains a silent always-accepting sibling. A
/// group with `k >= 3` successors becomes a right-leaning cascade: the
/// branch keeps its first successor and hands the rest to a chain of
/// bookkeeping states. Because a head parked on its cell cannot stand
/// still, the chain marks the current cell, steps left, and bounces back to
/// reselect — the mark is consumed by the transition that finally fires, so
/// at most one marked cell is ever live. Groups with zero successors are
/// left alone (they reject either way).
///
/// Each original tree node with `k` children gains `2(k-2)` bookkeeping
/// descendants (`k >= 3`) or one (`k == 1`), so for fan-out at most four a
/// transformed tree is at most twice the size of its original; analyses use
/// [`principal_nodes`] to recover original sizes exactly.
pub fn binarize(m: &Machine) -> Result<Machine, Error> {
    let mut needs = false;
    for (i, s) in m.states().iter().enumerate() {
        if s.kind != StateKind::Universal {
            continue;
        }
        for letter in m.work_alphabet() {
            let k = m.transitions_from(StateId(i), letter).count();
            if k == 1 || k >= 3 {
                needs = true;
            }
        }
    }
    if !needs {
        return Ok(m.clone());
    }
    if m.states().iter().any(|s| s.name.starts_with(BIN_PREFIX))
        || m.work_alphabet().iter().any(|l| l.starts_with(BIN_PREFIX))
    {
        return Err(Error::validation(
            "binarize: the `~b:` name space is already in use by this machine",
        ));
    }

    let mut b = MachineBuilder::new().blank(m.blank());
    let input: String = m.input_alphabet().iter().collect();
    b = b.input_letters(&input);
    for s in m.states() {
        b = b.state(&s.name, s.kind);
    }
    b = b.initial(m.state_name(m.initial()));
    for l in m.work_alphabet() {
        b = b.work_letter(l);
    }
    for l in m.output_alphabet() {
        b = b.output_letter(l);
    }

    let mut pad_declared = false;
    for (qi, s) in m.states().iter().enumerate() {
        let q = s.name.as_str();
        for letter in m.work_alphabet() {
            let group: Vec<&Transition> = m.transitions_from(StateId(qi), letter).collect();
            if group.is_empty() {
                continue;
            }
            let emit = |mut b: MachineBuilder, from: &str, read: &str, t: &Transition| {
                b = b.transition(
                    from,
                    read,
                    m.state_name(t.to),
                    &t.write,
                    t.movement,
                    t.output.letter(),
                );
                b
            };
            if s.kind != StateKind::Universal || group.len() == 2 {
                for t in &group {
                    b = emit(b, q, letter, t);
                }
            } else if group.len() == 1 {
                if !pad_declared {
                    b = b.state(PAD_ACCEPT, StateKind::Accept);
                    pad_declared = true;
                }
                b = emit(b, q, letter, group[0]);
                b = b.transition(q, letter, PAD_ACCEPT, letter, Move::Left, None);
            } else {
                let k = group.len();
                let mark = marked(letter);
                let back = |i: usize| format!("~b:back:{i}:{qi}:{letter}");
                let sel = |i: usize| format!("~b:sel:{i}:{qi}:{letter}");
                for i in 2..k {
                    b = b.state(&back(i), StateKind::Existential);
                    b = b.state(&sel(i), StateKind::Universal);
                }
                b = emit(b, q, letter, group[0]);
                b = b.transition(q, letter, &back(2), &mark, Move::Left, None);
                for i in 2..k {
                    // Left from the marked cell (or in place on cell 0), then
                    // bounce right back onto the mark and reselect there.
                    b = b.transition(&back(i), &mark, &sel(i), &mark, Move::Left, None);
                    for beta in m.work_alphabet() {
                        b = b.transition(&back(i), beta, &sel(i), beta, Move::Right, None);
                    }
                    if i < k - 1 {
                        b = emit(b, &sel(i), &mark, group[i - 1]);
                        b = b.transition(&sel(i), &mark, &back(i + 1), &mark, Move::Left, None);
                    } else {
                        b = emit(b, &sel(i), &mark, group[i - 1]);
                        b = emit(b, &sel(i), &mark, group[i]);
                    }
                }
            }
        }
    }
    b.build()
}

// ---------------------------------------------------------------------------
// Budget enforcement
// ---------------------------------------------------------------------------

const ENF_PREFIX: &str = "~e:";
const L_ZERO: &str = "~e:0"; // counter bit 0
const L_ONE: &str = "~e:1"; // counter bit 1
const L_T: &str = "~e:T"; // scratch bit 1
const L_F: &str = "~e:F"; // scratch bit 0
const L_MARK: &str = "~e:M"; // return marker on the simulated tape

fn counter_bits(budget: usize) -> usize {
    (usize::BITS - budget.leading_zeros()) as usize
}

/// Work-tape bound required to run the output of
/// [`enforce_budget`]`(m, budget)` wherever `m` ran in `space` cells: the
/// simulated tape is shifted right past the counter and scratch regions.
pub fn enforced_space_bound(space: usize, budget: usize) -> usize {
    2 * counter_bits(budget) + space
}

/// Tree-size bound such that *every* accepting tree of
/// [`enforce_budget`]`(m, budget)` run in [`enforced_space_bound`] cells
/// fits under it. Each simulated step costs a bounded excursion to the
/// counter (walks across the tape plus bit shuttles), and the budget caps
/// the number of simulated steps, so the bound is linear in the budget with
/// a per-step factor derived from the tape length and counter width.
pub fn enforced_tree_cap(space: usize, budget: usize) -> usize {
    let b = counter_bits(budget);
    let t = 2 * b + space;
    let per_step = 8 * t + 12 * b * b + 16;
    4 * budget * per_step
}

/// The bookkeeping jobs of the budget-enforcement construction; one job per
/// generated state. `q` is a state of the simulated machine and `beta` the
/// simulated letter remembered while the head is away on an excursion.
#[derive(Clone)]
enum Job {
    /// Guess the budget's binary value most-significant-bit first, never
    /// exceeding it (`tight` = all bits so far equal the budget's).
    Init { i: usize, tight: bool },
    /// Zero the scratch region and land on the first simulated cell.
    Fill { j: usize },
    /// The sole accepting state.
    Done,
    /// Per-step entry: execute simulated state `q` at the current cell.
    Enter { q: StateId },
    /// Like `Enter`, but first reload the counter from scratch — the entry
    /// for first children of universal branches.
    Lfix { q: StateId },
    /// Walk left to the counter to pay for one principal step.
    Gol { q: StateId, beta: Letter },
    /// Binary decrement at counter cell `j` (borrow travels left; a borrow
    /// past the top bit has no transition, so exhausted budgets reject).
    Dec { q: StateId, beta: Letter, j: usize },
    /// Walk right to the marker and act there: apply the simulated
    /// transitions (existential) or start the split excursion (universal).
    Ret { q: StateId, beta: Letter },
    /// Principal accept: verify the counter holds exactly one.
    Ago { q: StateId },
    Azs { q: StateId, j: usize },
    /// Bookkeeping accept: verify the counter holds exactly zero.
    Zgo { q: StateId },
    Zsl { q: StateId, j: usize },
    /// Walk left to split the counter between two universal children.
    Spw { q: StateId, beta: Letter },
    /// Guess the first child's share bit by bit (`tight` as in `Init`,
    /// against the current counter value).
    Guess { q: StateId, beta: Letter, i: usize, tight: bool },
    /// Write the guessed bit into the scratch region.
    GuessWrite { q: StateId, beta: Letter, i: usize, bit: bool, tight: bool },
    /// Counter := counter - scratch, least significant bit first.
    SubAct { q: StateId, beta: Letter, j: usize, borrow: bool, digit: bool },
    SubRead { q: StateId, beta: Letter, j: usize, borrow: bool },
    /// Walk right to the marker and branch; the walk is universal with an
    /// always-accepting sibling so the machine stays binary-branching.
    Sret { q: StateId, beta: Letter },
    /// First-child counter reload: walk left, then copy scratch into the
    /// counter bit by bit.
    Cgo { q: StateId, beta: Letter },
    CopyRead { q: StateId, beta: Letter, j: usize },
    CopyWrite { q: StateId, beta: Letter, j: usize, bit: bool },
    /// Post-reload checks for halting states: counter == 1 / counter == 0.
    Zso { q: StateId, j: usize },
    Zs { q: StateId, j: usize },
    /// Straight-line counted walk across counter and scratch cells.
    Walk { dir: Move, steps: usize, target: String },
}

struct Enforcer<'a> {
    n: &'a Machine,
    budget: usize,
    bits: usize,
    sim_letters: Vec<Letter>,
    states: Vec<State>,
    ids: HashMap<String, StateId>,
    transitions: Vec<Transition>,
    pending: Vec<Job>,
}

impl<'a> Enforcer<'a> {
    fn name_of(&self, job: &Job) -> String {
        let tl = |t: bool| if t { "t" } else { "l" };
        let b01 = |b: bool| usize::from(b);
        match job {
            Job::Init { i, tight } => format!("~e:init:{i}:{}", tl(*tight)),
            Job::Fill { j } => format!("~e:fill:{j}"),
            Job::Done => "~e:ok".to_string(),
            Job::Enter { q } => format!("~e:enter:{}", self.n.state_name(*q)),
            Job::Lfix { q } => format!("~e:lfix:{}", self.n.state_name(*q)),
            Job::Gol { q, beta } => format!("~e:gol:{}:{beta}", q.0),
            Job::Dec { q, beta, j } => format!("~e:dec:{j}:{}:{beta}", q.0),
            Job::Ret { q, beta } => format!("~e:ret:{}:{beta}", q.0),
            Job::Ago { q } => format!("~e:ago:{}", q.0),
            Job::Azs { q, j } => format!("~e:azs:{j}:{}", q.0),
            Job::Zgo { q } => format!("~e:zgo:{}", q.0),
            Job::Zsl { q, j } => format!("~e:zsl:{j}:{}", q.0),
            Job::Spw { q, beta } => format!("~e:spw:{}:{beta}", q.0),
            Job::Guess { q, beta, i, tight } => {
                format!("~e:g:{i}:{}:{}:{beta}", tl(*tight), q.0)
            }
            Job::GuessWrite { q, beta, i, bit, tight } => {
                format!("~e:gw:{i}:{}:{}:{}:{beta}", b01(*bit), tl(*tight), q.0)
            }
            Job::SubAct { q, beta, j, borrow, digit } => {
                format!("~e:sa:{j}:{}:{}:{}:{beta}", b01(*borrow), b01(*digit), q.0)
            }
            Job::SubRead { q, beta, j, borrow } => {
                format!("~e:sr:{j}:{}:{}:{beta}", b01(*borrow), q.0)
            }
            Job::Sret { q, beta } => format!("~e:sb:{}:{beta}", q.0),
            Job::Cgo { q, beta } => format!("~e:cgo:{}:{beta}", q.0),
            Job::CopyRead { q, beta, j } => format!("~e:cr:{j}:{}:{beta}", q.0),
            Job::CopyWrite { q, beta, j, bit } => {
                format!("~e:cw:{j}:{}:{}:{beta}", b01(*bit), q.0)
            }
            Job::Zso { q, j } => format!("~e:zso:{j}:{}", q.0),
            Job::Zs { q, j } => format!("~e:zs:{j}:{}", q.0),
            Job::Walk { dir, steps, target } => {
                let d = if *dir == Move::Left { "L" } else { "R" };
                format!("~e:w:{d}:{steps}:{target}")
            }
        }
    }

    fn kind_of(&self, job: &Job) -> StateKind {
        match job {
            Job::Done => StateKind::Accept,
            Job::Sret { .. } => StateKind::Universal,
            Job::Enter { q } | Job::Lfix { q } if self.n.kind(*q) == StateKind::Reject => {
                StateKind::Reject
            }
            _ => StateKind::Existential,
        }
    }

    fn ensure(&mut self, job: Job) -> StateId {
        let name = self.name_of(&job);
        if let Some(&id) = self.ids.get(&name) {
            return id;
        }
        let id = StateId(self.states.len());
        self.states.push(State {
            name: name.clone(),
            kind: self.kind_of(&job),
        });
        self.ids.insert(name, id);
        self.pending.push(job);
        id
    }

    fn t(&mut self, from: StateId, read: &str, to: StateId, write: &str, mv: Move, out: OutputSymbol) {
        self.transitions.push(Transition {
            from,
            read: read.to_string(),
            to,
            write: write.to_string(),
            movement: mv,
            output: out,
        });
    }

    fn silent(&mut self, from: StateId, read: &str, to: StateId, write: &str, mv: Move) {
        self.t(from, read, to, write, mv, OutputSymbol::Silent);
    }

    /// A state that acts after `steps` further pass-through moves in
    /// direction `dir` once the incoming transition has already moved once.
    fn walk_to(&mut self, dir: Move, steps: usize, target: Job) -> StateId {
        let tid = self.ensure(target);
        if steps == 0 {
            return tid;
        }
        let tname = self.states[tid.0].name.clone();
        self.ensure(Job::Walk { dir, steps, target: tname })
    }

    fn principal(&self, q: StateId) -> bool {
        !is_aux_state(self.n.state_name(q))
    }

    fn generate(&mut self, job: Job) {
        let n = self.n;
        let me = self.ids[&self.name_of(&job)];
        let counter_letters = [L_ZERO, L_ONE, L_T, L_F];
        let scratch_letters = [L_T, L_F];
        let blank = n.blank().clone();
        match job {
            Job::Init { i, tight } => {
                let bit = (self.budget >> (self.bits - 1 - i)) & 1;
                let next = |e: &mut Self, tl: bool| {
                    if i + 1 < e.bits {
                        e.ensure(Job::Init { i: i + 1, tight: tl })
                    } else {
                        e.ensure(Job::Fill { j: 0 })
                    }
                };
                if tight && bit == 1 {
                    let stay = next(self, true);
                    self.silent(me, &blank, stay, L_ONE, Move::Right);
                    let drop = next(self, false);
                    self.silent(me, &blank, drop, L_ZERO, Move::Right);
                } else if tight {
                    let stay = next(self, true);
                    self.silent(me, &blank, stay, L_ZERO, Move::Right);
                } else {
                    let loose = next(self, false);
                    self.silent(me, &blank, loose, L_ONE, Move::Right);
                    self.silent(me, &blank, loose, L_ZERO, Move::Right);
                }
            }
            Job::Fill { j } => {
                let to = if j + 1 < self.bits {
                    self.ensure(Job::Fill { j: j + 1 })
                } else {
                    self.ensure(Job::Enter { q: n.initial() })
                };
                self.silent(me, &blank, to, L_F, Move::Right);
            }
            Job::Done => {}
            Job::Enter { q } => {
                let kind = n.kind(q);
                if kind == StateKind::Reject {
                    return;
                }
                // Boundary bounce: a simulated left move off the first
                // simulated cell parks the head on the last scratch cell.
                for l in scratch_letters {
                    self.silent(me, l, me, l, Move::Right);
                }
                let sim = self.sim_letters.clone();
                let principal = self.principal(q);
                for beta in &sim {
                    match kind {
                        StateKind::Accept => {
                            let to = if principal {
                                self.ensure(Job::Ago { q })
                            } else {
                                self.ensure(Job::Zgo { q })
                            };
                            self.silent(me, beta, to, beta, Move::Left);
                        }
                        StateKind::Existential if !principal => {
                            let group: Vec<Transition> =
                                n.transitions_from(q, beta).cloned().collect();
                            for tr in group {
                                let to = self.ensure(Job::Enter { q: tr.to });
                                self.t(me, beta, to, &tr.write, tr.movement, tr.output);
                            }
                        }
                        StateKind::Existential => {
                            if n.transitions_from(q, beta).next().is_none() {
                                continue; // stuck: reject without an excursion
                            }
                            let to = self.ensure(Job::Gol { q, beta: beta.clone() });
                            self.silent(me, beta, to, L_MARK, Move::Left);
                        }
                        StateKind::Universal => {
                            if n.transitions_from(q, beta).count() != 2 {
                                continue; // empty groups reject, like the original
                            }
                            let to = if principal {
                                self.ensure(Job::Gol { q, beta: beta.clone() })
                            } else {
                                self.ensure(Job::Spw { q, beta: beta.clone() })
                            };
                            self.silent(me, beta, to, L_MARK, Move::Left);
                        }
                        StateKind::Reject => unreachable!(),
                    }
                }
            }
            Job::Lfix { q } => {
                let kind = n.kind(q);
                if kind == StateKind::Reject {
                    return;
                }
                for l in scratch_letters {
                    self.silent(me, l, me, l, Move::Right);
                }
                let sim = self.sim_letters.clone();
                for beta in &sim {
                    // A non-halting state with no transitions on the marked
                    // letter is stuck; leaving this state with no way out
                    // rejects the branch before any copy excursion.
                    if kind != StateKind::Accept
                        && n.transitions_from(q, beta).next().is_none()
                    {
                        continue;
                    }
                    let to = self.ensure(Job::Cgo { q, beta: beta.clone() });
                    self.silent(me, beta, to, L_MARK, Move::Left);
                }
            }
            Job::Gol { q, beta } => {
                let sim = self.sim_letters.clone();
                for l in &sim {
                    self.silent(me, l, me, l, Move::Left);
                }
                let to = self.walk_to(
                    Move::Left,
                    self.bits - 1,
                    Job::Dec { q, beta, j: self.bits - 1 },
                );
                for l in scratch_letters {
                    self.silent(me, l, to, l, Move::Left);
                }
            }
            Job::Dec { q, beta, j } => {
                let ret = self.ensure(Job::Ret { q, beta: beta.clone() });
                self.silent(me, L_ONE, ret, L_ZERO, Move::Right);
                if j > 0 {
                    let borrow = self.ensure(Job::Dec { q, beta, j: j - 1 });
                    self.silent(me, L_ZERO, borrow, L_ONE, Move::Left);
                }
                // Reading 0 in the top bit leaves no transition: an
                // exhausted budget rejects here.
            }
            Job::Ret { q, beta } => {
                let sim = self.sim_letters.clone();
                for l in sim.iter().map(String::as_str).chain(counter_letters) {
                    self.silent(me, l, me, l, Move::Right);
                }
                match n.kind(q) {
                    StateKind::Existential => {
                        let group: Vec<Transition> = n.transitions_from(q, &beta).cloned().collect();
                        for tr in group {
                            let to = self.ensure(Job::Enter { q: tr.to });
                            self.t(me, L_MARK, to, &tr.write, tr.movement, tr.output);
                        }
                    }
                    StateKind::Universal => {
                        let to = self.ensure(Job::Spw { q, beta });
                        self.silent(me, L_MARK, to, L_MARK, Move::Left);
                    }
                    _ => unreachable!("excursions start only from non-halting states"),
                }
            }
            Job::Ago { q } => {
                let sim = self.sim_letters.clone();
                for l in sim.iter().map(String::as_str).chain(scratch_letters) {
                    self.silent(me, l, me, l, Move::Left);
                }
                let to = if self.bits == 1 {
                    self.ensure(Job::Done)
                } else {
                    self.ensure(Job::Azs { q, j: self.bits - 2 })
                };
                self.silent(me, L_ONE, to, L_ZERO, Move::Left);
            }
            Job::Azs { q, j } => {
                let to = if j == 0 {
                    self.ensure(Job::Done)
                } else {
                    self.ensure(Job::Azs { q, j: j - 1 })
                };
                self.silent(me, L_ZERO, to, L_ZERO, Move::Left);
            }
            Job::Zgo { q } => {
                let sim = self.sim_letters.clone();
                for l in sim.iter().map(String::as_str).chain(scratch_letters) {
                    self.silent(me, l, me, l, Move::Left);
                }
                let to = if self.bits == 1 {
                    self.ensure(Job::Done)
                } else {
                    self.ensure(Job::Zsl { q, j: self.bits - 2 })
                };
                self.silent(me, L_ZERO, to, L_ZERO, Move::Left);
            }
            Job::Zsl { q, j } => {
                let to = if j == 0 {
                    self.ensure(Job::Done)
                } else {
                    self.ensure(Job::Zsl { q, j: j - 1 })
                };
                self.silent(me, L_ZERO, to, L_ZERO, Move::Left);
            }
            Job::Spw { q, beta } => {
                let sim = self.sim_letters.clone();
                for l in &sim {
                    self.silent(me, l, me, l, Move::Left);
                }
                let to = self.walk_to(
                    Move::Left,
                    2 * self.bits - 2,
                    Job::Guess { q, beta, i: 0, tight: true },
                );
                for l in scratch_letters {
                    self.silent(me, l, to, l, Move::Left);
                }
            }
            Job::Guess { q, beta, i, tight } => {
                let bits = self.bits;
                let go = |e: &mut Self, read: &str, bit: bool, tl: bool| {
                    let to = e.walk_to(
                        Move::Right,
                        bits - 1,
                        Job::GuessWrite { q, beta: beta.clone(), i, bit, tight: tl },
                    );
                    e.silent(me, read, to, read, Move::Right);
                };
                if tight {
                    go(self, L_ONE, true, true);
                    go(self, L_ONE, false, false);
                    go(self, L_ZERO, false, true);
                } else {
                    go(self, L_ONE, true, false);
                    go(self, L_ONE, false, false);
                    go(self, L_ZERO, true, false);
                    go(self, L_ZERO, false, false);
                }
            }
            Job::GuessWrite { q, beta, i, bit, tight } => {
                let bits = self.bits;
                let write = if bit { L_T } else { L_F };
                let to = if i < bits - 1 {
                    self.walk_to(
                        Move::Left,
                        bits - 2,
                        Job::Guess { q, beta, i: i + 1, tight },
                    )
                } else {
                    self.walk_to(
                        Move::Left,
                        bits - 1,
                        Job::SubAct { q, beta, j: bits - 1, borrow: false, digit: bit },
                    )
                };
                for old in scratch_letters {
                    self.silent(me, old, to, write, Move::Left);
                }
            }
            Job::SubAct { q, beta, j, borrow, digit } => {
                let bits = self.bits;
                for (read, c) in [(L_ZERO, 0i32), (L_ONE, 1i32)] {
                    let r = c - i32::from(digit) - i32::from(borrow);
                    let (res, carry) = if r >= 0 { (r, false) } else { (r + 2, true) };
                    let write = if res == 1 { L_ONE } else { L_ZERO };
                    if j > 0 {
                        let to = self.walk_to(
                            Move::Right,
                            bits - 2,
                            Job::SubRead { q, beta: beta.clone(), j: j - 1, borrow: carry },
                        );
                        self.silent(me, read, to, write, Move::Right);
                    } else if !carry {
                        let to = self.ensure(Job::Sret { q, beta: beta.clone() });
                        self.silent(me, read, to, write, Move::Right);
                    }
                    // A borrow out of the top bit would mean the guessed
                    // share exceeds the counter; the guess discipline never
                    // produces it, and there is no transition if it did.
                }
            }
            Job::SubRead { q, beta, j, borrow } => {
                let bits = self.bits;
                for (read, bit) in [(L_T, true), (L_F, false)] {
                    let to = self.walk_to(
                        Move::Left,
                        bits - 1,
                        Job::SubAct { q, beta: beta.clone(), j, borrow, digit: bit },
                    );
                    self.silent(me, read, to, read, Move::Left);
                }
            }
            Job::Sret { q, beta } => {
                let done = self.ensure(Job::Done);
                let sim = self.sim_letters.clone();
                for l in sim.iter().map(String::as_str).chain(counter_letters) {
                    self.silent(me, l, me, l, Move::Right);
                    self.silent(me, l, done, l, Move::Left);
                }
                let group: Vec<Transition> = n.transitions_from(q, &beta).cloned().collect();
                debug_assert_eq!(group.len(), 2);
                let first = self.ensure(Job::Lfix { q: group[0].to });
                self.t(
                    me,
                    L_MARK,
                    first,
                    &group[0].write,
                    group[0].movement,
                    group[0].output.clone(),
                );
                let second = self.ensure(Job::Enter { q: group[1].to });
                self.t(
                    me,
                    L_MARK,
                    second,
                    &group[1].write,
                    group[1].movement,
                    group[1].output.clone(),
                );
            }
            Job::Cgo { q, beta } => {
                let bits = self.bits;
                let sim = self.sim_letters.clone();
                for l in &sim {
                    self.silent(me, l, me, l, Move::Left);
                }
                for (read, bit) in [(L_T, true), (L_F, false)] {
                    let to = self.walk_to(
                        Move::Left,
                        bits - 1,
                        Job::CopyWrite { q, beta: beta.clone(), j: bits - 1, bit },
                    );
                    self.silent(me, read, to, read, Move::Left);
                }
            }
            Job::CopyRead { q, beta, j } => {
                let bits = self.bits;
                for (read, bit) in [(L_T, true), (L_F, false)] {
                    let to = self.walk_to(
                        Move::Left,
                        bits - 1,
                        Job::CopyWrite { q, beta: beta.clone(), j, bit },
                    );
                    self.silent(me, read, to, read, Move::Left);
                }
            }
            Job::CopyWrite { q, beta, j, bit } => {
                let bits = self.bits;
                let write = if bit { L_ONE } else { L_ZERO };
                if j > 0 {
                    let to = self.walk_to(
                        Move::Right,
                        bits - 2,
                        Job::CopyRead { q, beta: beta.clone(), j: j - 1 },
                    );
                    for old in [L_ZERO, L_ONE] {
                        self.silent(me, old, to, write, Move::Right);
                    }
                    return;
                }
                // Last bit written: the counter now holds the reloaded
                // share. Continue as the entry for `q` would.
                let principal = self.principal(q);
                match n.kind(q) {
                    StateKind::Accept if principal => {
                        // The share must be exactly one.
                        if bits == 1 {
                            if bit {
                                let done = self.ensure(Job::Done);
                                for old in [L_ZERO, L_ONE] {
                                    self.silent(me, old, done, write, Move::Left);
                                }
                            }
                        } else if !bit {
                            let to = self.ensure(Job::Zso { q, j: 1 });
                            for old in [L_ZERO, L_ONE] {
                                self.silent(me, old, to, write, Move::Right);
                            }
                        }
                    }
                    StateKind::Accept => {
                        // The share must be exactly zero.
                        if !bit {
                            if bits == 1 {
                                let done = self.ensure(Job::Done);
                                for old in [L_ZERO, L_ONE] {
                                    self.silent(me, old, done, write, Move::Left);
                                }
                            } else {
                                let to = self.ensure(Job::Zs { q, j: 1 });
                                for old in [L_ZERO, L_ONE] {
                                    self.silent(me, old, to, write, Move::Right);
                                }
                            }
                        }
                    }
                    _ if principal => {
                        // Pay for this step out of the reloaded share.
                        if bits == 1 {
                            if bit {
                                let to = self.ensure(Job::Ret { q, beta });
                                for old in [L_ZERO, L_ONE] {
                                    self.silent(me, old, to, L_ZERO, Move::Right);
                                }
                            }
                        } else {
                            let to = self.walk_to(
                                Move::Right,
                                bits - 2,
                                Job::Dec { q, beta, j: bits - 1 },
                            );
                            for old in [L_ZERO, L_ONE] {
                                self.silent(me, old, to, write, Move::Right);
                            }
                        }
                    }
                    _ => {
                        let to = self.ensure(Job::Ret { q, beta });
                        for old in [L_ZERO, L_ONE] {
                            self.silent(me, old, to, write, Move::Right);
                        }
                    }
                }
            }
            Job::Zso { q, j } => {
                let bits = self.bits;
                if j == bits - 1 {
                    let done = self.ensure(Job::Done);
                    self.silent(me, L_ONE, done, L_ONE, Move::Left);
                } else {
                    let to = self.ensure(Job::Zso { q, j: j + 1 });
                    self.silent(me, L_ZERO, to, L_ZERO, Move::Right);
                }
            }
            Job::Zs { q, j } => {
                let bits = self.bits;
                if j == bits - 1 {
                    let done = self.ensure(Job::Done);
                    self.silent(me, L_ZERO, done, L_ZERO, Move::Left);
                } else {
                    let to = self.ensure(Job::Zs { q, j: j + 1 });
                    self.silent(me, L_ZERO, to, L_ZERO, Move::Right);
                }
            }
            Job::Walk { dir, steps, target } => {
                let to = if steps == 1 {
                    self.ids[&target]
                } else {
                    self.ensure(Job::Walk { dir, steps: steps - 1, target })
                };
                for l in counter_letters {
                    self.silent(me, l, to, l, dir);
                }
            }
        }
    }
}

/// Compiles a budget on principal tree nodes into the machine.
///
/// The returned machine lays its tape out as `[counter][scratch][simulated
/// tape]`, with the budget's bit width fixed up front. It first guesses a
/// value at most the budget into the counter, then simulates the input
/// machine, paying one counter decrement per principal step and splitting
/// the counter between the two children of every universal branch (guess a
/// share into scratch, subtract, and let the first child reload scratch into
/// its own copy of the counter). Accepting leaves verify their residue — one
/// for a principal accept, zero for a bookkeeping one — so a tree accepts
/// exactly when its principal simulated nodes total the guessed value, and
/// the guess bounds that total by the budget.
///
/// Accepting trees of the result are in bijection with accepting trees of
/// the input that have at most `budget` principal nodes, with identical
/// output forests: bookkeeping excursions are silent and the simulated
/// transitions keep their output letters. Consequently the result's span
/// under the generous bounds [`enforced_space_bound`] and
/// [`enforced_tree_cap`] equals the input's span under the node budget — no
/// accepting tree escapes those bounds, so larger caps cannot add forests.
///
/// Requires binary universal branching ([`binarize`]) and at least one
/// budget unit. Simulated left moves off the simulated tape's first cell
/// bounce back, preserving the stay-in-place convention.
pub fn enforce_budget(n: &Machine, budget: usize) -> Result<Machine, Error> {
    if budget == 0 {
        return Err(Error::validation("enforce_budget: budget must be at least 1"));
    }
    if !is_binarized(n) {
        return Err(Error::validation(
            "enforce_budget: universal branching must be binary (run binarize first)",
        ));
    }
    if n.states().iter().any(|s| s.name.starts_with(ENF_PREFIX))
        || n.work_alphabet().iter().any(|l| l.starts_with(ENF_PREFIX))
    {
        return Err(Error::validation(
            "enforce_budget: the `~e:` name space is already in use by this machine",
        ));
    }
    let mut e = Enforcer {
        n,
        budget,
        bits: counter_bits(budget),
        sim_letters: n.work_alphabet().iter().cloned().collect(),
        states: Vec::new(),
        ids: HashMap::new(),
        transitions: Vec::new(),
        pending: Vec::new(),
    };
    let initial = e.ensure(Job::Init { i: 0, tight: true });
    let initial_name = e.states[initial.0].name.clone();
    while let Some(job) = e.pending.pop() {
        e.generate(job);
    }
    let mut work: BTreeSet<Letter> = n.work_alphabet().clone();
    work.extend([L_ZERO, L_ONE, L_T, L_F, L_MARK].map(str::to_string));
    Machine::new(
        e.states,
        &initial_name,
        n.input_alphabet().clone(),
        work,
        n.output_alphabet().clone(),
        n.blank().clone(),
        e.transitions,
    )
}
