//! Cyclic tag system interpreter.
//!
//! A cyclic tag system reads one symbol per step from the front of a binary
//! tape word. A `1` appends the current appendant (chosen cyclically from a
//! fixed table) to the tail, a `0` skips it; either way the table index
//! advances. The system halts when the word becomes empty.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Default step guard for [`run`]; cyclic tag systems can diverge.
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Default cap on the total symbols a trace stores verbatim.
pub const DEFAULT_WORD_STORE_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtsError {
    /// The appendant table must hold at least one word.
    EmptyTable,
    /// Stepping a state whose word is already empty.
    AlreadyHalted,
    /// A word contained something other than '0' or '1'.
    InvalidSymbol { offset: usize, byte: u8 },
}

impl fmt::Display for CtsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CtsError::EmptyTable => write!(f, "the appendant table must not be empty"),
            CtsError::AlreadyHalted => write!(f, "the system has already halted"),
            CtsError::InvalidSymbol { offset, byte } => write!(
                f,
                "invalid symbol {:?} at byte {offset}: expected '0' or '1'",
                *byte as char
            ),
        }
    }
}

impl core::error::Error for CtsError {}

/// Parses a binary word such as `"101"` into bits.
pub fn word_from_str(s: &str) -> Result<Vec<bool>, CtsError> {
    s.bytes()
        .enumerate()
        .map(|(i, b)| match b {
            b'0' => Ok(false),
            b'1' => Ok(true),
            _ => Err(CtsError::InvalidSymbol { offset: i, byte: b }),
        })
        .collect()
}

/// Renders bits as a `'0'`/`'1'` string.
pub fn word_to_string(word: &[bool]) -> String {
    word.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A cyclic tag system: its ordered appendant table.
///
/// Appendants may be empty words; reading a `1` then appends nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtsSystem {
    appendants: Vec<Vec<bool>>,
}

impl CtsSystem {
    pub fn new(appendants: Vec<Vec<bool>>) -> Result<Self, CtsError> {
        if appendants.is_empty() {
            return Err(CtsError::EmptyTable);
        }
        Ok(Self { appendants })
    }

    /// Convenience constructor from `'0'`/`'1'` strings.
    pub fn from_words(words: &[&str]) -> Result<Self, CtsError> {
        Self::new(words.iter().map(|w| word_from_str(w)).collect::<Result<_, _>>()?)
    }

    pub fn appendants(&self) -> &[Vec<bool>] {
        &self.appendants
    }

    pub fn table_len(&self) -> usize {
        self.appendants.len()
    }
}

/// A running cyclic tag system: tape word, table index, and step counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtsState {
    word: VecDeque<bool>,
    index: usize,
    step: u64,
}

/// Outcome of a single step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Running,
    /// The word became empty; the state is terminal.
    Halted,
}

impl CtsState {
    /// Initial state at table index 0, step 0.
    pub fn new<I>(word: I) -> Self
    where
        I: IntoIterator<Item = bool>,
    {
        Self {
            word: word.into_iter().collect(),
            index: 0,
            step: 0,
        }
    }

    /// State with an explicit table index (taken modulo the table length at
    /// step time).
    pub fn with_index<I>(word: I, index: usize) -> Self
    where
        I: IntoIterator<Item = bool>,
    {
        Self {
            index,
            ..Self::new(word)
        }
    }

    pub fn word(&self) -> impl Iterator<Item = bool> + '_ {
        self.word.iter().copied()
    }

    pub fn word_len(&self) -> usize {
        self.word.len()
    }

    pub fn word_string(&self) -> String {
        self.word().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Whether the word is empty, i.e. the state is terminal.
    pub fn is_halted(&self) -> bool {
        self.word.is_empty()
    }
}

/// Performs one step: removes the head symbol, appends the current appendant
/// if the symbol was `1`, and advances the table index.
///
/// Returns [`StepOutcome::Halted`] when the word becomes empty; stepping a
/// halted state is an error.
pub fn step(state: &mut CtsState, system: &CtsSystem) -> Result<StepOutcome, CtsError> {
    let head = state.word.pop_front().ok_or(CtsError::AlreadyHalted)?;
    let table_len = system.appendants.len();
    if head {
        state
            .word
            .extend(system.appendants[state.index % table_len].iter().copied());
    }
    state.index = (state.index + 1) % table_len;
    state.step += 1;
    if state.word.is_empty() {
        Ok(StepOutcome::Halted)
    } else {
        Ok(StepOutcome::Running)
    }
}

/// One recorded tape word: verbatim, or only its length once the storage
/// cap is exhausted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceWord {
    Word(Vec<bool>),
    LengthOnly(usize),
}

impl TraceWord {
    pub fn len(&self) -> usize {
        match self {
            TraceWord::Word(w) => w.len(),
            TraceWord::LengthOnly(n) => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn word(&self) -> Option<&[bool]> {
        match self {
            TraceWord::Word(w) => Some(w),
            TraceWord::LengthOnly(_) => None,
        }
    }
}

/// The tape word at every step of a run, from step 0 until halting or the
/// step guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtsTrace {
    /// Entry `i` is the word at step `i`. The empty word of a halting step
    /// is not listed; [`CtsTrace::halt_step`] records it instead.
    pub words: Vec<TraceWord>,
    pub halted: bool,
    /// The step at which the word became empty, when it did.
    pub halt_step: Option<u64>,
}

/// Runs for at most `max_steps` steps with the default word storage cap.
pub fn run(initial: CtsState, system: &CtsSystem, max_steps: u64) -> CtsTrace {
    run_with_cap(initial, system, max_steps, DEFAULT_WORD_STORE_CAP)
}

/// Runs for at most `max_steps` steps, storing words verbatim until their
/// total length would exceed `word_store_cap`, then storing lengths only.
pub fn run_with_cap(
    initial: CtsState,
    system: &CtsSystem,
    max_steps: u64,
    word_store_cap: usize,
) -> CtsTrace {
    let mut state = initial;
    let mut words = Vec::new();
    let mut stored = 0usize;
    let mut record = |state: &CtsState, stored: &mut usize| {
        if *stored + state.word_len() <= word_store_cap {
            *stored += state.word_len();
            words.push(TraceWord::Word(state.word().collect()));
        } else {
            words.push(TraceWord::LengthOnly(state.word_len()));
        }
    };
    if state.is_halted() {
        return CtsTrace {
            words,
            halted: true,
            halt_step: Some(state.step_count()),
        };
    }
    record(&state, &mut stored);
    for _ in 0..max_steps {
        match step(&mut state, system) {
            Ok(StepOutcome::Running) => record(&state, &mut stored),
            Ok(StepOutcome::Halted) => {
                return CtsTrace {
                    words,
                    halted: true,
                    halt_step: Some(state.step_count()),
                }
            }
            Err(_) => unreachable!("running state cannot be halted"),
        }
    }
    CtsTrace {
        words,
        halted: false,
        halt_step: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<bool> {
        word_from_str(s).unwrap()
    }

    fn trace_strings(trace: &CtsTrace) -> Vec<String> {
        trace
            .words
            .iter()
            .map(|t| word_to_string(t.word().expect("word stored")))
            .collect()
    }

    #[test]
    fn empty_table_is_rejected() {
        assert_eq!(CtsSystem::new(Vec::new()), Err(CtsError::EmptyTable));
    }

    #[test]
    fn reading_one_appends_the_current_appendant() {
        let system = CtsSystem::from_words(&["1", "101"]).unwrap();
        let mut state = CtsState::new(w("1"));
        assert_eq!(step(&mut state, &system), Ok(StepOutcome::Running));
        assert_eq!(state.word_string(), "1");
        assert_eq!(state.index(), 1);
        assert_eq!(state.step_count(), 1);
    }

    #[test]
    fn reading_zero_skips_the_appendant() {
        let system = CtsSystem::from_words(&["1", "101"]).unwrap();
        let mut state = CtsState::with_index(w("011"), 1);
        assert_eq!(step(&mut state, &system), Ok(StepOutcome::Running));
        assert_eq!(state.word_string(), "11");
        assert_eq!(state.index(), 0);
    }

    #[test]
    fn emptying_the_word_halts() {
        let system = CtsSystem::from_words(&["1"]).unwrap();
        let mut state = CtsState::new(w("0"));
        assert_eq!(step(&mut state, &system), Ok(StepOutcome::Halted));
        assert!(state.is_halted());
        assert_eq!(step(&mut state, &system), Err(CtsError::AlreadyHalted));
    }

    #[test]
    fn golden_trace_of_the_two_word_table() {
        let system = CtsSystem::from_words(&["1", "101"]).unwrap();
        let trace = run(CtsState::new(w("1")), &system, 6);
        assert_eq!(
            trace_strings(&trace),
            ["1", "1", "101", "011", "11", "11", "1101"]
        );
        assert!(!trace.halted);
        assert_eq!(trace.halt_step, None);
    }

    #[test]
    fn halting_run_lists_words_up_to_the_halt() {
        let system = CtsSystem::from_words(&["1"]).unwrap();
        let trace = run(CtsState::new(w("0")), &system, 10);
        assert_eq!(trace_strings(&trace), ["0"]);
        assert!(trace.halted);
        assert_eq!(trace.halt_step, Some(1));
    }

    #[test]
    fn net_growth_of_one_per_step() {
        let system = CtsSystem::from_words(&["11"]).unwrap();
        let trace = run(CtsState::new(w("1")), &system, 4);
        assert_eq!(
            trace_strings(&trace),
            ["1", "11", "111", "1111", "11111"]
        );
    }

    #[test]
    fn storage_cap_degrades_to_lengths() {
        let system = CtsSystem::from_words(&["11"]).unwrap();
        let trace = run_with_cap(CtsState::new(w("1")), &system, 4, 6);
        // 1 + 2 + 3 symbols fit the cap of 6; later words store lengths only
        assert_eq!(trace.words[0], TraceWord::Word(w("1")));
        assert_eq!(trace.words[2], TraceWord::Word(w("111")));
        assert_eq!(trace.words[3], TraceWord::LengthOnly(4));
        assert_eq!(trace.words[4], TraceWord::LengthOnly(5));
    }

    #[test]
    fn empty_appendants_are_legal() {
        let system = CtsSystem::from_words(&["", "1"]).unwrap();
        let mut state = CtsState::new(w("11"));
        assert_eq!(step(&mut state, &system), Ok(StepOutcome::Running));
        assert_eq!(state.word_string(), "1");
        assert_eq!(step(&mut state, &system), Ok(StepOutcome::Running));
        assert_eq!(state.word_string(), "1");
    }
}
