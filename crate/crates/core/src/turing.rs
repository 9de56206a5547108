//! Exhaustive enumeration of small two-symbol Turing machines and the
//! coding-theorem conversion of their output frequencies into complexity
//! tables.
//!
//! Machine formalism:
//!
//! * states `0..n`, symbols `{0, 1}`, two-way tape, head starts on cell 0 in
//!   state 0;
//! * each of the `2n` (state, symbol) entries is one of `4n` continuing
//!   instructions (write, shift, next state) or one of 2 halting
//!   instructions (write, then halt in place), giving `(4n + 2)^(2n)`
//!   machines;
//! * the output of a halting run is the tape window between the leftmost
//!   and rightmost cells the head visited.
//!
//! Each machine is run on the blank-0 tape and, by symbol exchange, that run
//! also accounts for its mirror machine on the blank-1 tape. The resulting
//! distribution is therefore closed under complement, and (because Left and
//! Right play symmetric roles) under reversal.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::ctm::{Block, BlockShape, CtmTable, MAX_BLOCK_CELLS};

pub const MAX_STATES: usize = 3;
pub const DEFAULT_STEP_CAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shift {
    Left,
    Right,
}

impl Shift {
    fn delta(self) -> isize {
        match self {
            Shift::Left => -1,
            Shift::Right => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    Continue { write: u8, shift: Shift, next: u8 },
    /// Enumerated machines always halt in place (`shift: None`).
    Halt { write: u8, shift: Option<Shift> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringMachine {
    n_states: usize,
    /// Indexed by `2 * state + symbol`.
    table: Vec<Instruction>,
}

impl TuringMachine {
    pub fn new(n_states: usize, table: Vec<Instruction>) -> Result<Self> {
        if n_states == 0 {
            return Err(Error::param("n_states", "must be at least 1"));
        }
        if table.len() != 2 * n_states {
            return Err(Error::Shape(format!(
                "{n_states}-state machine needs {} instructions, got {}",
                2 * n_states,
                table.len()
            )));
        }
        for ins in &table {
            let (write, next) = match *ins {
                Instruction::Continue { write, next, .. } => (write, Some(next)),
                Instruction::Halt { write, .. } => (write, None),
            };
            if write > 1 || next.is_some_and(|s| s as usize >= n_states) {
                return Err(Error::Shape(format!("invalid instruction {ins:?}")));
            }
        }
        Ok(Self { n_states, table })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn instruction(&self, state: usize, symbol: u8) -> Instruction {
        self.table[2 * state + symbol as usize]
    }
}

fn check_states(n_states: usize) -> Result<()> {
    if !(1..=MAX_STATES).contains(&n_states) {
        return Err(Error::param(
            "states",
            format!("enumeration supports 1..={MAX_STATES} states, got {n_states}"),
        ));
    }
    Ok(())
}

/// `(4n + 2)^(2n)`.
pub fn machine_count(n_states: usize) -> u64 {
    ((4 * n_states + 2) as u64).pow(2 * n_states as u32)
}

/// The `index`-th machine: base-`(4n+2)` digits, least significant first,
/// one per (state, symbol) entry.
pub fn decode_machine(n_states: usize, index: u64) -> TuringMachine {
    let base = (4 * n_states + 2) as u64;
    let mut rest = index;
    let table = (0..2 * n_states)
        .map(|_| {
            let digit = (rest % base) as usize;
            rest /= base;
            decode_instruction(n_states, digit)
        })
        .collect();
    TuringMachine { n_states, table }
}

fn decode_instruction(n_states: usize, digit: usize) -> Instruction {
    if digit < 4 * n_states {
        Instruction::Continue {
            write: (digit & 1) as u8,
            shift: if digit & 2 == 0 { Shift::Left } else { Shift::Right },
            next: (digit >> 2) as u8,
        }
    } else {
        Instruction::Halt {
            write: (digit - 4 * n_states) as u8,
            shift: None,
        }
    }
}

/// Every machine with `n_states` states, each exactly once.
pub fn enumerate_machines(n_states: usize) -> Result<impl Iterator<Item = TuringMachine>> {
    check_states(n_states)?;
    Ok((0..machine_count(n_states)).map(move |i| decode_machine(n_states, i)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted(Vec<u8>),
    TimedOut,
}

/// Runs `tm` on an all-zero tape for at most `step_cap` transitions.
pub fn run_machine(tm: &TuringMachine, step_cap: usize) -> RunOutcome {
    run_machine_on(tm, step_cap, 0)
}

/// Runs `tm` on a tape filled with `blank`.
pub fn run_machine_on(tm: &TuringMachine, step_cap: usize, blank: u8) -> RunOutcome {
    let mut tape: HashMap<isize, u8> = HashMap::new();
    let (mut head, mut lo, mut hi) = (0isize, 0isize, 0isize);
    let mut state = 0usize;
    for _ in 0..step_cap {
        let read = *tape.get(&head).unwrap_or(&blank);
        match tm.instruction(state, read) {
            Instruction::Continue { write, shift, next } => {
                tape.insert(head, write);
                head += shift.delta();
                state = next as usize;
            }
            Instruction::Halt { write, shift } => {
                tape.insert(head, write);
                if let Some(s) = shift {
                    head += s.delta();
                }
                lo = lo.min(head);
                hi = hi.max(head);
                let window = (lo..=hi).map(|c| *tape.get(&c).unwrap_or(&blank)).collect();
                return RunOutcome::Halted(window);
            }
        }
        lo = lo.min(head);
        hi = hi.max(head);
    }
    RunOutcome::TimedOut
}

/// Packed instruction arrays for the enumeration hot loop.
struct FastMachine {
    write: [u8; 2 * MAX_STATES],
    delta: [isize; 2 * MAX_STATES],
    /// `u8::MAX` marks a halting entry.
    next: [u8; 2 * MAX_STATES],
}

impl FastMachine {
    /// `None` when the machine has no halting entry and so can never halt.
    fn decode(n_states: usize, index: u64) -> Option<Self> {
        let base = (4 * n_states + 2) as u64;
        let mut rest = index;
        let mut m = FastMachine {
            write: [0; 2 * MAX_STATES],
            delta: [0; 2 * MAX_STATES],
            next: [u8::MAX; 2 * MAX_STATES],
        };
        let mut halts = false;
        for e in 0..2 * n_states {
            let digit = (rest % base) as usize;
            rest /= base;
            if digit < 4 * n_states {
                m.write[e] = (digit & 1) as u8;
                m.delta[e] = if digit & 2 == 0 { -1 } else { 1 };
                m.next[e] = (digit >> 2) as u8;
            } else {
                m.write[e] = (digit - 4 * n_states) as u8;
                halts = true;
            }
        }
        halts.then_some(m)
    }
}

/// Scratch tape covering every cell reachable within `step_cap` moves.
struct Tape {
    cells: Vec<u8>,
    origin: isize,
}

impl Tape {
    fn new(step_cap: usize) -> Self {
        Self {
            cells: vec![0; 2 * step_cap + 3],
            origin: step_cap as isize + 1,
        }
    }

    /// Blank-0 run; clears the touched range before returning.
    fn run(&mut self, m: &FastMachine, step_cap: usize) -> Option<Result<Block>> {
        let mut head = self.origin;
        let (mut lo, mut hi) = (head, head);
        let mut state = 0usize;
        let mut outcome = None;
        for _ in 0..step_cap {
            let e = 2 * state + self.cells[head as usize] as usize;
            self.cells[head as usize] = m.write[e];
            let next = m.next[e];
            if next == u8::MAX {
                let window = &self.cells[lo as usize..=hi as usize];
                outcome = Some(Block::from_cells(window));
                break;
            }
            head += m.delta[e];
            state = next as usize;
            lo = lo.min(head);
            hi = hi.max(head);
        }
        self.cells[lo as usize..=hi as usize].fill(0);
        outcome
    }
}

/// Output counts over every (machine, blank symbol) run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyDistribution {
    pub n_states: usize,
    pub step_cap: usize,
    pub counts: BTreeMap<Block, u64>,
    /// Halting runs; equals the sum of `counts`.
    pub total_halting: u64,
    /// Machines enumerated.
    pub total_machines: u64,
    /// Runs performed: one per machine and blank symbol.
    pub total_runs: u64,
}

impl FrequencyDistribution {
    /// Realized algorithmic probability `counts[s] / total_halting`.
    pub fn probability(&self, s: &Block) -> f64 {
        self.counts.get(s).copied().unwrap_or(0) as f64 / self.total_halting as f64
    }

    pub fn count(&self, s: &Block) -> u64 {
        self.counts.get(s).copied().unwrap_or(0)
    }

    pub fn max_output_len(&self) -> usize {
        self.counts.keys().map(Block::len).max().unwrap_or(0)
    }
}

const CHUNK: u64 = 1 << 14;

/// Runs every `n_states` machine for at most `step_cap` steps and tallies
/// the outputs. Work is split by index range; counts are merged by
/// addition, so the result does not depend on the partition.
pub fn build_frequency_distribution(n_states: usize, step_cap: usize) -> Result<FrequencyDistribution> {
    check_states(n_states)?;
    if step_cap == 0 {
        return Err(Error::param("step_cap", "must be at least 1"));
    }
    let total = machine_count(n_states);
    let chunks = total.div_ceil(CHUNK);
    let blank0 = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<HashMap<Block, u64>> {
            let mut tape = Tape::new(step_cap);
            let mut local = HashMap::new();
            for index in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let Some(m) = FastMachine::decode(n_states, index) else {
                    continue;
                };
                if let Some(out) = tape.run(&m, step_cap) {
                    *local.entry(out?).or_insert(0u64) += 1;
                }
            }
            Ok(local)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            Ok(a)
        })
        .map_err(|e| match e {
            Error::Shape(_) => Error::param(
                "step_cap",
                format!("a halting output exceeded {MAX_BLOCK_CELLS} cells"),
            ),
            other => other,
        })?;

    let mut counts = BTreeMap::new();
    for (s, c) in blank0 {
        *counts.entry(s).or_insert(0) += c;
        *counts.entry(s.complement()).or_insert(0) += c;
    }
    let total_halting = counts.values().sum();
    Ok(FrequencyDistribution {
        n_states,
        step_cap,
        counts,
        total_halting,
        total_machines: total,
        total_runs: 2 * total,
    })
}

/// `CTM(s) = -log2(counts[s] / total_halting)` as a string table; the
/// fallback is the largest value plus one bit.
pub fn ctm_from_frequency(dist: &FrequencyDistribution) -> Result<CtmTable> {
    if dist.total_halting == 0 {
        return Err(Error::Empty("frequency distribution"));
    }
    let total = dist.total_halting as f64;
    let entries = dist
        .counts
        .iter()
        .map(|(s, &c)| (*s, -(c as f64 / total).log2()))
        .collect();
    CtmTable::new(BlockShape::String { max_len: dist.max_output_len() }, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halt(write: u8) -> Instruction {
        Instruction::Halt { write, shift: None }
    }

    fn go(write: u8, shift: Shift, next: u8) -> Instruction {
        Instruction::Continue { write, shift, next }
    }

    #[test]
    fn counts_match_closed_form() {
        assert_eq!(machine_count(1), 36);
        assert_eq!(machine_count(2), 10_000);
        assert_eq!(machine_count(3), 7_529_536);
        assert_eq!(enumerate_machines(1).unwrap().count(), 36);
        let distinct: std::collections::HashSet<_> = enumerate_machines(2).unwrap().collect();
        assert_eq!(distinct.len(), 10_000);
        assert!(enumerate_machines(0).is_err());
        assert!(enumerate_machines(4).is_err());
    }

    #[test]
    fn halting_with_a_move_widens_the_window() {
        let tm = TuringMachine::new(
            1,
            vec![Instruction::Halt { write: 1, shift: Some(Shift::Right) }, halt(0)],
        )
        .unwrap();
        assert_eq!(run_machine(&tm, 1), RunOutcome::Halted(vec![1, 0]));
        assert_eq!(run_machine(&tm, 100), RunOutcome::Halted(vec![1, 0]));
    }

    #[test]
    fn halting_in_place() {
        let tm = TuringMachine::new(1, vec![halt(1), halt(0)]).unwrap();
        assert_eq!(run_machine(&tm, 1), RunOutcome::Halted(vec![1]));
    }

    #[test]
    fn runaway_machine_times_out() {
        let tm = TuringMachine::new(1, vec![go(1, Shift::Right, 0), go(0, Shift::Right, 0)]).unwrap();
        assert_eq!(run_machine(&tm, 100), RunOutcome::TimedOut);
    }

    #[test]
    fn two_step_machine() {
        // state 0 on 0: write 1, left, state 1; state 1 on 0: write 1, halt
        let tm = TuringMachine::new(2, vec![go(1, Shift::Left, 1), halt(0), halt(1), halt(0)]).unwrap();
        assert_eq!(run_machine(&tm, 1), RunOutcome::TimedOut);
        assert_eq!(run_machine(&tm, 2), RunOutcome::Halted(vec![1, 1]));
    }

    #[test]
    fn one_state_distribution() {
        let d = build_frequency_distribution(1, DEFAULT_STEP_CAP).unwrap();
        assert_eq!(d.total_machines, 36);
        // (0,0) must halt; 6 choices for the unused (0,1) entry, two blanks
        assert_eq!(d.count(&"0".parse().unwrap()), 12);
        assert_eq!(d.count(&"1".parse().unwrap()), 12);
        assert_eq!(d.total_halting, 24);
        assert!(d.counts.values().all(|&c| c >= 1));
    }

    #[test]
    fn fast_runner_agrees_with_reference() {
        let mut tape = Tape::new(60);
        for index in 0..machine_count(2) {
            let tm = decode_machine(2, index);
            let fast = FastMachine::decode(2, index).and_then(|m| tape.run(&m, 60)).map(|b| b.unwrap().cells());
            let slow = match run_machine(&tm, 60) {
                RunOutcome::Halted(w) => Some(w),
                RunOutcome::TimedOut => None,
            };
            assert_eq!(fast, slow, "machine {index}");
        }
    }

    #[test]
    fn blank_one_runs_are_complements() {
        // the shortcut in build_frequency_distribution against explicit runs
        let cap = 50;
        let mut explicit: BTreeMap<Block, u64> = BTreeMap::new();
        for tm in enumerate_machines(2).unwrap() {
            for blank in [0, 1] {
                if let RunOutcome::Halted(w) = run_machine_on(&tm, cap, blank) {
                    *explicit.entry(Block::from_cells(&w).unwrap()).or_insert(0) += 1;
                }
            }
        }
        assert_eq!(build_frequency_distribution(2, cap).unwrap().counts, explicit);
    }

    #[test]
    fn two_state_symmetries() {
        let d = build_frequency_distribution(2, DEFAULT_STEP_CAP).unwrap();
        for (s, &c) in &d.counts {
            assert_eq!(d.count(&s.complement()), c, "complement of {s}");
            assert_eq!(d.count(&s.reverse()), c, "reverse of {s}");
        }
        assert!(d.total_halting <= d.total_runs);
    }

    #[test]
    fn raising_the_cap_only_adds() {
        let short = build_frequency_distribution(2, 3).unwrap();
        let long = build_frequency_distribution(2, 20).unwrap();
        assert!(long.total_halting >= short.total_halting);
        for s in short.counts.keys() {
            assert!(long.counts.contains_key(s));
        }
    }

    #[test]
    fn ctm_table_properties() {
        let d = build_frequency_distribution(2, DEFAULT_STEP_CAP).unwrap();
        let t = ctm_from_frequency(&d).unwrap();
        let mass: f64 = t.sorted_entries().iter().map(|(_, v)| (-v).exp2()).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        let (most, _) = d.counts.iter().max_by_key(|(_, &c)| c).unwrap();
        let min_ctm = t.sorted_entries().iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
        assert_eq!(t.get(most).unwrap(), min_ctm);
        for (s, v) in t.sorted_entries() {
            assert_eq!(t.get(&s.complement()).unwrap(), v);
        }
        assert_eq!(t.shape(), BlockShape::String { max_len: d.max_output_len() });
    }

    #[test]
    fn empty_distribution_rejected() {
        let d = FrequencyDistribution {
            n_states: 1,
            step_cap: 1,
            counts: BTreeMap::new(),
            total_halting: 0,
            total_machines: 36,
            total_runs: 72,
        };
        assert!(ctm_from_frequency(&d).is_err());
    }
}
