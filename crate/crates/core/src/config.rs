//! Bit-packed cyclic rows of binary cells.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A fixed-width cyclic row of binary cells.
///
/// Cell `x = 0` is the leftmost cell and indexing wraps: the left neighbor
/// of cell 0 is cell `width - 1`. Cells are packed 64 per `u64`, least
/// significant bit first; bits at positions `>= width` in the last word are
/// kept at zero so that equality and hashing work on the packed words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    width: usize,
    words: Vec<u64>,
}

impl Configuration {
    /// An all-zero row of `width` cells.
    pub fn zeros(width: usize) -> Self {
        assert!(width >= 1, "configuration width must be positive");
        Self {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    /// Builds a row from cells in increasing `x` order.
    pub fn from_cells<I>(cells: I) -> Self
    where
        I: IntoIterator<Item = bool>,
    {
        let mut words: Vec<u64> = Vec::new();
        let mut width = 0usize;
        for cell in cells {
            if width & 63 == 0 {
                words.push(0);
            }
            if cell {
                words[width >> 6] |= 1 << (width & 63);
            }
            width += 1;
        }
        assert!(width >= 1, "configuration width must be positive");
        Self { width, words }
    }

    /// A seeded random row where every cell is independently 1 with
    /// probability `density`.
    ///
    /// The generator is ChaCha8 keyed by `seed`, so the same inputs always
    /// reproduce the same row on every platform.
    pub fn random(width: usize, density: f64, seed: u64) -> Self {
        assert!(
            (0.0..=1.0).contains(&density),
            "density must lie in [0, 1]"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_cells((0..width.max(1)).map(|_| rng.random::<f64>() < density))
    }

    /// Number of cells.
    pub fn width(&self) -> usize {
        self.width
    }

    /// State of cell `x`. Panics if `x >= width`.
    pub fn get(&self, x: usize) -> bool {
        assert!(x < self.width, "cell index {x} out of range");
        self.words[x >> 6] >> (x & 63) & 1 == 1
    }

    /// Sets cell `x`. Panics if `x >= width`.
    pub fn set(&mut self, x: usize, value: bool) {
        assert!(x < self.width, "cell index {x} out of range");
        let mask = 1u64 << (x & 63);
        if value {
            self.words[x >> 6] |= mask;
        } else {
            self.words[x >> 6] &= !mask;
        }
    }

    /// Number of cells in state 1.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Cells in increasing `x` order.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.region_bits(0, self.width)
    }

    /// Cells `start..start + length` in increasing `x` order.
    ///
    /// Panics if the region does not fit the row.
    pub fn region_bits(&self, start: usize, length: usize) -> impl Iterator<Item = bool> + '_ {
        assert!(
            start.checked_add(length).is_some_and(|end| end <= self.width),
            "region {start}+{length} out of range for width {}",
            self.width
        );
        (start..start + length).map(move |x| self.words[x >> 6] >> (x & 63) & 1 == 1)
    }

    /// The row rotated so that `new[x] = old[(x + k) mod width]`.
    pub fn rotated_left(&self, k: usize) -> Self {
        let w = self.width;
        let k = k % w;
        Self::from_cells((0..w).map(|x| self.get((x + k) % w)))
    }

    /// The cells as a string of `'0'`/`'1'` characters.
    pub fn to_binary_string(&self) -> String {
        self.bits().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(width: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), width.div_ceil(64));
        debug_assert!(width.is_multiple_of(64) || words[width >> 6] >> (width & 63) == 0);
        Self { width, words }
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width <= 80 {
            write!(f, "Configuration({})", self.to_binary_string())
        } else {
            write!(
                f,
                "Configuration(width {}, {} ones)",
                self.width,
                self.count_ones()
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        Configuration::from_cells(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn packing_round_trips_across_word_boundaries() {
        for width in [1, 7, 63, 64, 65, 127, 128, 130] {
            let c = Configuration::from_cells((0..width).map(|x| x % 3 == 0));
            assert_eq!(c.width(), width);
            for x in 0..width {
                assert_eq!(c.get(x), x % 3 == 0, "width {width} cell {x}");
            }
        }
    }

    #[test]
    fn set_and_get_agree() {
        let mut c = Configuration::zeros(130);
        c.set(0, true);
        c.set(64, true);
        c.set(129, true);
        assert_eq!(c.count_ones(), 3);
        c.set(64, false);
        assert!(!c.get(64));
        assert_eq!(c.count_ones(), 2);
    }

    #[test]
    fn rotation_moves_content_left() {
        let c = cfg("1000100");
        assert_eq!(c.rotated_left(1).to_binary_string(), "0001001");
        assert_eq!(c.rotated_left(7).to_binary_string(), "1000100");
        assert_eq!(c.rotated_left(4).to_binary_string(), "1001000");
    }

    #[test]
    fn random_density_extremes() {
        assert_eq!(Configuration::random(100, 0.0, 7).count_ones(), 0);
        assert_eq!(Configuration::random(100, 1.0, 7).count_ones(), 100);
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let a = Configuration::random(65_900, 0.5, 13);
        let b = Configuration::random(65_900, 0.5, 13);
        assert_eq!(a, b);
        let c = Configuration::random(65_900, 0.5, 14);
        assert_ne!(a, c);
    }

    #[test]
    fn region_bits_reads_in_x_order() {
        let c = cfg("0110010");
        let bits: Vec<bool> = c.region_bits(1, 4).collect();
        assert_eq!(bits, [true, true, false, false]);
        assert_eq!(c.region_bits(3, 0).count(), 0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn region_must_fit() {
        let c = cfg("0110");
        let _ = c.region_bits(2, 3);
    }
}
