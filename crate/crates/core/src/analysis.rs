//! Complexity observables over space-time recordings.
//!
//! Turns recordings into per-step LZ78 complexity series (whole rows,
//! sections, or arbitrary windows), smooths them with trailing moving
//! averages, detects significant declines, and identifies the periodic
//! background ("ether") of a rule together with how much of a row it covers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Configuration;
use crate::evolve::{evolve, step, SpacetimeRecording};
use crate::lz78;
use crate::rule::RuleTable;

/// Largest spatial period [`find_ether_tile`] will search exhaustively.
pub const MAX_ETHER_SPATIAL_PERIOD: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    RegionOutOfBounds {
        start_x: usize,
        length: usize,
        width: usize,
    },
    InvalidSectionCount {
        n_sections: usize,
        width: usize,
    },
    InvalidPeriod {
        period: usize,
        len: usize,
    },
    InvalidMinDrop {
        min_drop: f64,
    },
    SpatialPeriodBeyondBound {
        spatial_period: usize,
        max: usize,
    },
    InvalidTile(&'static str),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::RegionOutOfBounds {
                start_x,
                length,
                width,
            } => write!(
                f,
                "region {start_x}:{length} does not fit a row of width {width}"
            ),
            AnalysisError::InvalidSectionCount { n_sections, width } => write!(
                f,
                "cannot divide {width} cells into {n_sections} sections"
            ),
            AnalysisError::InvalidPeriod { period, len } => write!(
                f,
                "moving-average period {period} is invalid for a series of length {len}"
            ),
            AnalysisError::InvalidMinDrop { min_drop } => {
                write!(f, "min_drop {min_drop} must lie strictly between 0 and 1")
            }
            AnalysisError::SpatialPeriodBeyondBound { spatial_period, max } => write!(
                f,
                "spatial period {spatial_period} exceeds the search bound of {max}"
            ),
            AnalysisError::InvalidTile(reason) => write!(f, "invalid tile: {reason}"),
        }
    }
}

impl core::error::Error for AnalysisError {}

/// A contiguous window of cells: `start_x..start_x + length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Region {
    pub start_x: usize,
    pub length: usize,
}

impl Region {
    pub fn new(start_x: usize, length: usize) -> Self {
        Self { start_x, length }
    }

    /// Checks that the region fits a row of the given width.
    pub fn validate(&self, width: usize) -> Result<(), AnalysisError> {
        if self
            .start_x
            .checked_add(self.length)
            .is_some_and(|end| end <= width)
        {
            Ok(())
        } else {
            Err(AnalysisError::RegionOutOfBounds {
                start_x: self.start_x,
                length: self.length,
                width,
            })
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_x, self.length)
    }
}

/// A per-step sequence of complexity values.
///
/// Entry `i` belongs to step `start_step + i * stride`. Values are phrase
/// counts, or reals once a moving average has been applied. `region` is
/// `None` for whole-row series.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexitySeries {
    start_step: u64,
    stride: u64,
    values: Vec<f64>,
    region: Option<Region>,
}

impl ComplexitySeries {
    pub fn new(start_step: u64, stride: u64, values: Vec<f64>, region: Option<Region>) -> Self {
        assert!(stride >= 1, "stride must be positive");
        Self {
            start_step,
            stride,
            values,
            region,
        }
    }

    pub fn start_step(&self) -> u64 {
        self.start_step
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn region(&self) -> Option<Region> {
        self.region
    }

    /// The step entry `index` belongs to.
    pub fn step_at(&self, index: usize) -> u64 {
        self.start_step + index as u64 * self.stride
    }

    /// The entries whose steps lie in `[from, to]` (either bound optional).
    pub fn slice_steps(&self, from: Option<u64>, to: Option<u64>) -> ComplexitySeries {
        let mut start_step = self.start_step;
        let mut values = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            let step = self.step_at(i);
            if from.is_some_and(|f| step < f) || to.is_some_and(|t| step > t) {
                continue;
            }
            if values.is_empty() {
                start_step = step;
            }
            values.push(v);
        }
        ComplexitySeries {
            start_step,
            stride: self.stride,
            values,
            region: self.region,
        }
    }
}

fn count_region(row: &Configuration, region: Option<Region>) -> usize {
    match region {
        None => lz78::phrase_count_bits(row.bits()),
        Some(r) => lz78::phrase_count_bits(row.region_bits(r.start_x, r.length)),
    }
}

/// LZ78 phrase count of one row restricted to `region` (`None` = whole row).
pub fn region_phrase_count(
    row: &Configuration,
    region: Option<Region>,
) -> Result<usize, AnalysisError> {
    if let Some(r) = region {
        r.validate(row.width())?;
    }
    Ok(count_region(row, region))
}

/// Complexity of every recorded row, restricted to `region` (`None` = whole
/// row), read in increasing `x`.
pub fn complexity_series(
    recording: &SpacetimeRecording,
    region: Option<Region>,
) -> Result<ComplexitySeries, AnalysisError> {
    if let Some(r) = region {
        r.validate(recording.width())?;
    }
    let values = recording
        .rows()
        .iter()
        .map(|row| count_region(row, region) as f64)
        .collect();
    Ok(ComplexitySeries::new(
        recording.start_step(),
        recording.stride(),
        values,
        region,
    ))
}

/// Divides `width` cells into `n_sections` contiguous regions left to right.
///
/// When the division leaves a remainder `r`, the leftmost `r` sections get
/// one extra cell.
pub fn section_boundaries(width: usize, n_sections: usize) -> Result<Vec<Region>, AnalysisError> {
    if n_sections == 0 || n_sections > width {
        return Err(AnalysisError::InvalidSectionCount { n_sections, width });
    }
    let base = width / n_sections;
    let remainder = width % n_sections;
    let mut regions = Vec::with_capacity(n_sections);
    let mut start = 0;
    for i in 0..n_sections {
        let length = base + usize::from(i < remainder);
        regions.push(Region::new(start, length));
        start += length;
    }
    Ok(regions)
}

/// Trailing simple moving average with the given period.
///
/// Entry `i` of the result averages input entries `i..i + period`, so the
/// output starts `period - 1` strides later and is `period - 1` entries
/// shorter. Period 1 returns the series unchanged.
pub fn moving_average(
    series: &ComplexitySeries,
    period: usize,
) -> Result<ComplexitySeries, AnalysisError> {
    let len = series.values.len();
    if period == 0 || period > len {
        return Err(AnalysisError::InvalidPeriod { period, len });
    }
    if period == 1 {
        return Ok(series.clone());
    }
    let inv = period as f64;
    let mut values = Vec::with_capacity(len - period + 1);
    let mut sum: f64 = series.values[..period].iter().sum();
    values.push(sum / inv);
    for i in period..len {
        sum += series.values[i] - series.values[i - period];
        values.push(sum / inv);
    }
    Ok(ComplexitySeries {
        start_step: series.start_step + (period as u64 - 1) * series.stride,
        stride: series.stride,
        values,
        region: series.region,
    })
}

/// A significant decline of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct DropEvent {
    /// Step at which the decline begins (the last step at the higher level).
    pub step: u64,
    /// Total fall across the decline.
    pub magnitude: f64,
}

/// Finds maximal strictly-falling runs of the smoothed series whose total
/// fall is at least `min_drop` times the series range.
///
/// The series is first smoothed with a trailing moving average of length
/// `window` (1 leaves it unchanged). Plateaus and rises end a run, so two
/// declines separated by an equilibrium report as two events.
pub fn detect_drops(
    series: &ComplexitySeries,
    window: usize,
    min_drop: f64,
) -> Result<Vec<DropEvent>, AnalysisError> {
    if !(min_drop > 0.0 && min_drop < 1.0) {
        return Err(AnalysisError::InvalidMinDrop { min_drop });
    }
    let smoothed = moving_average(series, window)?;
    let vals = smoothed.values();
    if vals.len() < 2 {
        return Ok(Vec::new());
    }
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let range = max - min;
    if range <= 0.0 {
        return Ok(Vec::new());
    }
    let threshold = min_drop * range;
    let mut events = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..vals.len() {
        let falling_into = i + 1 < vals.len() && vals[i + 1] < vals[i];
        if falling_into {
            run_start.get_or_insert(i);
        } else if let Some(start) = run_start.take() {
            let magnitude = vals[start] - vals[i];
            if magnitude >= threshold {
                events.push(DropEvent {
                    step: smoothed.step_at(start),
                    magnitude,
                });
            }
        }
    }
    Ok(events)
}

/// The spatially and temporally periodic background of a rule.
///
/// `rows[t]` holds one spatial period of the background at temporal phase
/// `t`. Tiling `rows[0]` across any width divisible by `spatial_period` and
/// evolving it `temporal_period` steps reproduces the starting row rotated
/// left by `shift_per_period` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtherTile {
    spatial_period: usize,
    temporal_period: usize,
    rows: Vec<Vec<bool>>,
    shift_per_period: usize,
}

impl EtherTile {
    /// Wraps raw tile rows, checking shape and non-uniformity (the defining
    /// evolution property is checked by [`EtherTile::verify`], which needs
    /// the rule).
    pub fn new(rows: Vec<Vec<bool>>, shift_per_period: usize) -> Result<Self, AnalysisError> {
        let temporal_period = rows.len();
        if temporal_period == 0 {
            return Err(AnalysisError::InvalidTile("no rows"));
        }
        let spatial_period = rows[0].len();
        if spatial_period == 0 {
            return Err(AnalysisError::InvalidTile("empty rows"));
        }
        if spatial_period > 63 {
            return Err(AnalysisError::InvalidTile("spatial period above 63"));
        }
        if rows.iter().any(|r| r.len() != spatial_period) {
            return Err(AnalysisError::InvalidTile("ragged rows"));
        }
        if shift_per_period >= spatial_period {
            return Err(AnalysisError::InvalidTile("shift not below spatial period"));
        }
        let first = rows[0][0];
        if rows.iter().all(|r| r.iter().all(|&c| c == first)) {
            return Err(AnalysisError::InvalidTile("uniform tile"));
        }
        Ok(Self {
            spatial_period,
            temporal_period,
            rows,
            shift_per_period,
        })
    }

    pub fn spatial_period(&self) -> usize {
        self.spatial_period
    }

    pub fn temporal_period(&self) -> usize {
        self.temporal_period
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn shift_per_period(&self) -> usize {
        self.shift_per_period
    }

    /// Row 0 tiled `copies` times into a configuration.
    pub fn tiled_configuration(&self, copies: usize) -> Configuration {
        assert!(copies >= 1, "need at least one copy");
        Configuration::from_cells(
            (0..copies * self.spatial_period).map(|x| self.rows[0][x % self.spatial_period]),
        )
    }

    /// Re-evolves the tiled background at width `copies * spatial_period`
    /// and checks that every intermediate row tiles `rows[t]` and that one
    /// full temporal period lands on the recorded rotation.
    pub fn verify(&self, rule: &RuleTable, copies: usize) -> bool {
        assert!(copies >= 3, "verification needs width at least 3 periods");
        let start = self.tiled_configuration(copies);
        let mut cur = start.clone();
        for t in 1..=self.temporal_period {
            cur = match step(&cur, rule) {
                Ok(next) => next,
                Err(_) => return false,
            };
            if t < self.temporal_period {
                let expect = Configuration::from_cells(
                    (0..cur.width()).map(|x| self.rows[t][x % self.spatial_period]),
                );
                if cur != expect {
                    return false;
                }
            }
        }
        cur == start.rotated_left(self.shift_per_period)
    }

    fn window_set(&self) -> WindowSet {
        let p = self.spatial_period;
        let mut windows = Vec::with_capacity(self.temporal_period * p);
        for row in &self.rows {
            for phase in 0..p {
                let mut w = 0u64;
                for i in 0..p {
                    w |= (row[(phase + i) % p] as u64) << i;
                }
                windows.push(w);
            }
        }
        WindowSet::new(p, windows)
    }
}

/// Membership structure for the tile windows: a bitmap for small periods, a
/// sorted list otherwise.
struct WindowSet {
    bitmap: Option<Vec<u64>>,
    sorted: Vec<u64>,
}

impl WindowSet {
    fn new(period: usize, mut windows: Vec<u64>) -> Self {
        if period <= 24 {
            let mut bitmap = vec![0u64; (1usize << period).div_ceil(64)];
            for w in windows {
                bitmap[(w >> 6) as usize] |= 1 << (w & 63);
            }
            Self {
                bitmap: Some(bitmap),
                sorted: Vec::new(),
            }
        } else {
            windows.sort_unstable();
            windows.dedup();
            Self {
                bitmap: None,
                sorted: windows,
            }
        }
    }

    fn contains(&self, window: u64) -> bool {
        match &self.bitmap {
            Some(bitmap) => bitmap[(window >> 6) as usize] >> (window & 63) & 1 == 1,
            None => self.sorted.binary_search(&window).is_ok(),
        }
    }
}

/// Fraction of cell positions whose cyclic window of one spatial period
/// matches the tile at some spatial and temporal phase. Matching is exact:
/// cells are binary and the background is exactly periodic.
pub fn ether_coverage(row: &Configuration, tile: &EtherTile) -> f64 {
    let p = tile.spatial_period;
    let w = row.width();
    let set = tile.window_set();
    let cells: Vec<bool> = row.bits().collect();
    let mut window = 0u64;
    for i in 0..p {
        window |= (cells[i % w] as u64) << i;
    }
    let mut matches = 0usize;
    for x in 0..w {
        if set.contains(window) {
            matches += 1;
        }
        window = window >> 1 | (cells[(x + p) % w] as u64) << (p - 1);
    }
    matches as f64 / w as f64
}

/// Exhaustively searches the `2^spatial_period` candidate rows for a
/// non-uniform background tile of the given periods.
///
/// A candidate row is tiled across three spatial periods and evolved
/// `temporal_period` steps; it qualifies if the result is a cyclic rotation
/// of the start. The returned tile has passed [`EtherTile::verify`]. Returns
/// `Ok(None)` when no candidate qualifies.
pub fn find_ether_tile(
    rule: &RuleTable,
    spatial_period: usize,
    temporal_period: usize,
) -> Result<Option<EtherTile>, AnalysisError> {
    assert!(
        spatial_period >= 1 && temporal_period >= 1,
        "periods must be positive"
    );
    if spatial_period > MAX_ETHER_SPATIAL_PERIOD {
        return Err(AnalysisError::SpatialPeriodBeyondBound {
            spatial_period,
            max: MAX_ETHER_SPATIAL_PERIOD,
        });
    }
    let p = spatial_period;
    for seed in 0u64..1 << p {
        let row0: Vec<bool> = (0..p).map(|i| seed >> i & 1 == 1).collect();
        if row0.iter().all(|&c| c == row0[0]) {
            continue;
        }
        let start = Configuration::from_cells((0..3 * p).map(|x| row0[x % p]));
        let rec = match evolve(&start, rule, temporal_period as u64, 1) {
            Ok(rec) => rec,
            Err(_) => continue,
        };
        let end = rec.row(temporal_period);
        let Some(shift) = (0..p).find(|&s| *end == start.rotated_left(s)) else {
            continue;
        };
        let rows: Vec<Vec<bool>> = (0..temporal_period)
            .map(|t| rec.row(t).region_bits(0, p).collect())
            .collect();
        let Ok(tile) = EtherTile::new(rows, shift) else {
            continue;
        };
        if tile.verify(rule, 3) {
            return Ok(Some(tile));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        Configuration::from_cells(s.chars().map(|c| c == '1'))
    }

    fn series(values: &[f64]) -> ComplexitySeries {
        ComplexitySeries::new(0, 1, values.to_vec(), None)
    }

    #[test]
    fn whole_row_series_of_all_zero_recording_is_constant_four() {
        let rows = vec![Configuration::zeros(10); 5];
        let rec = SpacetimeRecording::from_rows(0, 1, rows);
        let s = complexity_series(&rec, None).unwrap();
        assert_eq!(s.values(), [4.0; 5]);
    }

    #[test]
    fn empty_region_yields_zero_series() {
        let rec = SpacetimeRecording::from_rows(0, 1, vec![cfg("0110"); 3]);
        let s = complexity_series(&rec, Some(Region::new(2, 0))).unwrap();
        assert_eq!(s.values(), [0.0; 3]);
    }

    #[test]
    fn out_of_bounds_region_is_rejected() {
        let rec = SpacetimeRecording::from_rows(0, 1, vec![cfg("0110")]);
        assert!(matches!(
            complexity_series(&rec, Some(Region::new(3, 2))),
            Err(AnalysisError::RegionOutOfBounds { .. })
        ));
    }

    #[test]
    fn sections_divide_evenly_when_possible() {
        let regions = section_boundaries(65_900, 20).unwrap();
        assert_eq!(regions.len(), 20);
        for (i, r) in regions.iter().enumerate() {
            assert_eq!(r.length, 3295);
            assert_eq!(r.start_x, i * 3295);
        }
    }

    #[test]
    fn single_section_covers_everything() {
        assert_eq!(
            section_boundaries(10, 1).unwrap(),
            [Region::new(0, 10)]
        );
    }

    #[test]
    fn leftmost_sections_take_the_remainder() {
        let regions = section_boundaries(10, 3).unwrap();
        assert_eq!(
            regions,
            [Region::new(0, 4), Region::new(4, 3), Region::new(7, 3)]
        );
    }

    #[test]
    fn bad_section_counts_are_rejected() {
        assert!(section_boundaries(10, 0).is_err());
        assert!(section_boundaries(10, 11).is_err());
    }

    #[test]
    fn moving_average_of_constant_is_constant() {
        let s = series(&[7.0; 10]);
        let out = moving_average(&s, 4).unwrap();
        assert_eq!(out.values(), [7.0; 7]);
        assert_eq!(out.start_step(), 3);
    }

    #[test]
    fn moving_average_period_one_is_identity() {
        let s = series(&[3.0, 1.0, 4.0, 1.0, 5.0]);
        assert_eq!(moving_average(&s, 1).unwrap(), s);
    }

    #[test]
    fn moving_average_worked_example() {
        let s = series(&[1.0, 2.0, 3.0, 4.0]);
        let out = moving_average(&s, 2).unwrap();
        assert_eq!(out.values(), [1.5, 2.5, 3.5]);
        assert_eq!(out.start_step(), 1);
    }

    #[test]
    fn moving_average_rejects_bad_periods() {
        let s = series(&[1.0, 2.0]);
        assert!(moving_average(&s, 0).is_err());
        assert!(moving_average(&s, 3).is_err());
    }

    #[test]
    fn constant_series_has_no_drops() {
        let s = series(&[5.0; 30]);
        assert_eq!(detect_drops(&s, 1, 0.3).unwrap(), []);
    }

    #[test]
    fn single_step_drop_is_one_event() {
        let mut values = vec![100.0; 10];
        values.extend([50.0; 10]);
        let events = detect_drops(&series(&values), 1, 0.3).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].step, 9);
        assert_eq!(events[0].magnitude, 50.0);
    }

    #[test]
    fn staircase_reports_each_decline() {
        let mut values = vec![100.0; 10];
        values.extend([80.0; 10]);
        values.extend([60.0; 10]);
        let events = detect_drops(&series(&values), 1, 0.15).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].step, 9);
        assert_eq!(events[0].magnitude, 20.0);
        assert_eq!(events[1].step, 19);
        assert_eq!(events[1].magnitude, 20.0);
    }

    #[test]
    fn min_drop_bounds_are_enforced() {
        let s = series(&[1.0, 0.0]);
        assert!(detect_drops(&s, 1, 0.0).is_err());
        assert!(detect_drops(&s, 1, 1.0).is_err());
    }

    #[test]
    fn slice_steps_keeps_the_requested_range() {
        let s = ComplexitySeries::new(10, 5, vec![0.0, 1.0, 2.0, 3.0, 4.0], None);
        let cut = s.slice_steps(Some(18), Some(30));
        assert_eq!(cut.start_step(), 20);
        assert_eq!(cut.values(), [2.0, 3.0, 4.0]);
    }

    #[test]
    fn rule_zero_has_no_nontrivial_background() {
        let rule = RuleTable::new(0);
        for (p, t) in [(1, 1), (2, 1), (3, 2), (4, 3)] {
            assert_eq!(find_ether_tile(&rule, p, t).unwrap(), None);
        }
    }

    #[test]
    fn period_one_backgrounds_of_rule_110_are_all_uniform() {
        let rule = RuleTable::new(110);
        assert_eq!(find_ether_tile(&rule, 1, 1).unwrap(), None);
    }

    #[test]
    fn search_bound_is_a_capability_error() {
        let rule = RuleTable::new(110);
        assert!(matches!(
            find_ether_tile(&rule, 21, 7),
            Err(AnalysisError::SpatialPeriodBeyondBound { .. })
        ));
    }

    #[test]
    fn rule_110_ether_tile_exists_and_verifies() {
        let rule = RuleTable::new(110);
        let tile = find_ether_tile(&rule, 14, 7).unwrap().expect("tile exists");
        assert_eq!(tile.spatial_period(), 14);
        assert_eq!(tile.temporal_period(), 7);
        assert!(tile.verify(&rule, 3));
        assert!(tile.verify(&rule, 5));
    }

    #[test]
    fn coverage_of_exact_tiling_is_one() {
        let rule = RuleTable::new(110);
        let tile = find_ether_tile(&rule, 14, 7).unwrap().unwrap();
        let row = tile.tiled_configuration(12);
        assert_eq!(ether_coverage(&row, &tile), 1.0);
    }

    #[test]
    fn coverage_of_all_zero_row_is_zero() {
        let rule = RuleTable::new(110);
        let tile = find_ether_tile(&rule, 14, 7).unwrap().unwrap();
        let row = Configuration::zeros(14 * 12);
        assert_eq!(ether_coverage(&row, &tile), 0.0);
    }

    #[test]
    fn coverage_of_random_row_is_small() {
        let rule = RuleTable::new(110);
        let tile = find_ether_tile(&rule, 14, 7).unwrap().unwrap();
        for seed in 0..3 {
            let row = Configuration::random(65_900, 0.5, seed);
            let coverage = ether_coverage(&row, &tile);
            assert!(coverage < 0.05, "seed {seed}: coverage {coverage}");
        }
    }

    #[test]
    fn uniform_tiles_are_rejected() {
        assert!(matches!(
            EtherTile::new(vec![vec![false; 4]; 2], 0),
            Err(AnalysisError::InvalidTile("uniform tile"))
        ));
    }
}
