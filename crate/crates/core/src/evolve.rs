//! Synchronous evolution under periodic boundary conditions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Configuration;
use crate::rule::RuleTable;

/// Errors from stepping a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolveError {
    /// Fewer than three cells: the three-cell neighborhood of a cell would
    /// reuse it, which the update rule does not define.
    WidthTooSmall { width: usize },
}

impl fmt::Display for EvolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvolveError::WidthTooSmall { width } => {
                write!(f, "configuration width {width} is below the minimum of 3")
            }
        }
    }
}

impl core::error::Error for EvolveError {}

fn tail_mask(width: usize) -> u64 {
    if width & 63 == 0 {
        u64::MAX
    } else {
        (1u64 << (width & 63)) - 1
    }
}

/// Updates every cell of `src` into `dst`, 64 cells per word operation.
///
/// Bit `p` of word `j` holds cell `64j + p`. The left-neighbor word is the
/// cell word shifted up with the carry coming from the previous word (or
/// from cell `width - 1` for word 0), and symmetrically for the right
/// neighbor. The rule is applied as an OR of its active neighborhood
/// minterms, each selected by a precomputed all-ones/all-zeros mask.
fn step_words(src: &[u64], dst: &mut [u64], width: usize, masks: &[u64; 8]) {
    let last = src.len() - 1;
    let top = (width - 1) & 63; // bit position of cell width-1 in the last word
    let wrap_left = src[last] >> top & 1; // cell width-1, left neighbor of cell 0
    let wrap_right = src[0] & 1; // cell 0, right neighbor of cell width-1

    for j in 0..src.len() {
        let c = src[j];
        let l = c << 1 | if j == 0 { wrap_left } else { src[j - 1] >> 63 };
        let r = if j == last {
            c >> 1 | wrap_right << top
        } else {
            c >> 1 | src[j + 1] << 63
        };
        let (nl, nc, nr) = (!l, !c, !r);
        dst[j] = masks[0] & nl & nc & nr
            | masks[1] & nl & nc & r
            | masks[2] & nl & c & nr
            | masks[3] & nl & c & r
            | masks[4] & l & nc & nr
            | masks[5] & l & nc & r
            | masks[6] & l & c & nr
            | masks[7] & l & c & r;
    }
    dst[last] &= tail_mask(width);
}

/// One synchronous update of the whole row.
pub fn step(config: &Configuration, rule: &RuleTable) -> Result<Configuration, EvolveError> {
    if config.width() < 3 {
        return Err(EvolveError::WidthTooSmall {
            width: config.width(),
        });
    }
    let mut dst = vec![0u64; config.words().len()];
    step_words(config.words(), &mut dst, config.width(), rule.masks());
    Ok(Configuration::from_words(config.width(), dst))
}

/// A time-ordered sequence of configurations sharing one width.
///
/// Row `i` is the configuration at step `start_step + i * stride`.
#[derive(Debug, Clone)]
pub struct SpacetimeRecording {
    width: usize,
    start_step: u64,
    stride: u64,
    rows: Vec<Configuration>,
}

impl SpacetimeRecording {
    /// Wraps existing rows. Panics if `rows` is empty, widths differ, or
    /// `stride` is zero.
    pub fn from_rows(start_step: u64, stride: u64, rows: Vec<Configuration>) -> Self {
        assert!(stride >= 1, "stride must be positive");
        assert!(!rows.is_empty(), "a recording needs at least one row");
        let width = rows[0].width();
        assert!(
            rows.iter().all(|r| r.width() == width),
            "all rows must share one width"
        );
        Self {
            width,
            start_step,
            stride,
            rows,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn start_step(&self) -> u64 {
        self.start_step
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Configuration] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &Configuration {
        &self.rows[index]
    }

    /// The time step row `index` was recorded at.
    pub fn step_of_row(&self, index: usize) -> u64 {
        self.start_step + index as u64 * self.stride
    }
}

/// Evolves `initial` for `steps` steps, recording every `record_every`-th
/// configuration.
///
/// The recording holds `steps / record_every + 1` rows starting with the
/// initial configuration; row `i` is the configuration at step
/// `i * record_every`. Panics if `record_every` is zero.
pub fn evolve(
    initial: &Configuration,
    rule: &RuleTable,
    steps: u64,
    record_every: u64,
) -> Result<SpacetimeRecording, EvolveError> {
    assert!(record_every >= 1, "record_every must be positive");
    let recorded = steps / record_every;
    let mut rows = Vec::with_capacity(recorded as usize + 1);
    rows.push(initial.clone());
    if recorded > 0 {
        if initial.width() < 3 {
            return Err(EvolveError::WidthTooSmall {
                width: initial.width(),
            });
        }
        let width = initial.width();
        let mut cur = initial.words().to_vec();
        let mut next = vec![0u64; cur.len()];
        for _ in 0..recorded {
            for _ in 0..record_every {
                step_words(&cur, &mut next, width, rule.masks());
                core::mem::swap(&mut cur, &mut next);
            }
            rows.push(Configuration::from_words(width, cur.clone()));
        }
    }
    Ok(SpacetimeRecording {
        width: initial.width(),
        start_step: 0,
        stride: record_every,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        Configuration::from_cells(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn all_zero_is_fixed_under_rule_110() {
        let rule = RuleTable::new(110);
        let zero = Configuration::zeros(8);
        assert_eq!(step(&zero, &rule).unwrap(), zero);
    }

    #[test]
    fn single_one_spreads_left_under_rule_110() {
        let rule = RuleTable::new(110);
        let next = step(&cfg("00010000"), &rule).unwrap();
        assert_eq!(next.to_binary_string(), "00110000");
    }

    #[test]
    fn all_ones_die_under_rule_110() {
        let rule = RuleTable::new(110);
        let next = step(&cfg("11111111"), &rule).unwrap();
        assert_eq!(next.to_binary_string(), "00000000");
    }

    #[test]
    fn width_below_three_is_rejected() {
        let rule = RuleTable::new(110);
        assert_eq!(
            step(&cfg("01"), &rule),
            Err(EvolveError::WidthTooSmall { width: 2 })
        );
    }

    #[test]
    fn zero_steps_record_only_the_initial_row() {
        let rule = RuleTable::new(110);
        let initial = cfg("01");
        let rec = evolve(&initial, &rule, 0, 1).unwrap();
        assert_eq!(rec.len(), 1);
        assert_eq!(rec.row(0), &initial);
    }

    #[test]
    fn one_step_recording_matches_step() {
        let rule = RuleTable::new(110);
        let rec = evolve(&cfg("00010000"), &rule, 1, 1).unwrap();
        assert_eq!(rec.len(), 2);
        assert_eq!(rec.row(0).to_binary_string(), "00010000");
        assert_eq!(rec.row(1).to_binary_string(), "00110000");
    }

    #[test]
    fn stride_records_every_kth_row() {
        let rule = RuleTable::new(110);
        let initial = Configuration::random(50, 0.5, 3);
        let rec = evolve(&initial, &rule, 5, 2).unwrap();
        assert_eq!(rec.len(), 3);
        assert_eq!(rec.stride(), 2);
        assert_eq!(rec.step_of_row(2), 4);

        let mut expect = initial.clone();
        for i in 0..3 {
            assert_eq!(rec.row(i), &expect, "row {i}");
            if i < 2 {
                expect = step(&step(&expect, &rule).unwrap(), &rule).unwrap();
            }
        }
    }

    #[test]
    fn width_is_preserved_across_word_boundaries() {
        let rule = RuleTable::new(110);
        for width in [3, 63, 64, 65, 129, 200] {
            let c = Configuration::random(width, 0.5, width as u64);
            assert_eq!(step(&c, &rule).unwrap().width(), width);
        }
    }
}
