//! Transition tables of elementary cellular automaton rules.

use core::fmt;

/// Transition table of one of the 256 elementary rules.
///
/// A neighborhood `(left, center, right)` has value `4*left + 2*center +
/// right`, and bit `k` of the rule number is the next state of the center
/// cell for the neighborhood of value `k`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct RuleTable {
    number: u8,
    // masks[k] is all-ones iff bit k of the rule number is set; consumed by
    // the word-parallel stepping kernel.
    masks: [u64; 8],
}

impl RuleTable {
    /// Builds the table for the given Wolfram rule number.
    pub fn new(number: u8) -> Self {
        let mut masks = [0u64; 8];
        for (k, mask) in masks.iter_mut().enumerate() {
            if number >> k & 1 == 1 {
                *mask = u64::MAX;
            }
        }
        Self { number, masks }
    }

    /// The rule number this table was built from.
    pub fn number(&self) -> u8 {
        self.number
    }

    /// Next state of a cell whose neighborhood reads `(left, center, right)`.
    pub fn next_state(&self, left: bool, center: bool, right: bool) -> bool {
        let k = (left as u8) << 2 | (center as u8) << 1 | right as u8;
        self.number >> k & 1 == 1
    }

    /// The eight `(neighborhood value, next state)` pairs in order `0..=7`.
    pub fn entries(&self) -> [(u8, bool); 8] {
        let mut out = [(0u8, false); 8];
        for (k, entry) in out.iter_mut().enumerate() {
            *entry = (k as u8, self.number >> k & 1 == 1);
        }
        out
    }

    /// Rebuilds the rule number from the stored transitions.
    ///
    /// Always equal to [`RuleTable::number`]; exists so the encoding can be
    /// checked independently of the constructor.
    pub fn reconstructed_number(&self) -> u8 {
        let mut number = 0u8;
        for k in 0..8u8 {
            if self.next_state(k & 4 != 0, k & 2 != 0, k & 1 != 0) {
                number |= 1 << k;
            }
        }
        number
    }

    pub(crate) fn masks(&self) -> &[u64; 8] {
        &self.masks
    }
}

impl fmt::Debug for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RuleTable({})", self.number)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_110_matches_published_table() {
        let rule = RuleTable::new(110);
        // (left, center, right) -> next, for 111,110,101,100,011,010,001,000
        let expected = [
            ((true, true, true), false),
            ((true, true, false), true),
            ((true, false, true), true),
            ((true, false, false), false),
            ((false, true, true), true),
            ((false, true, false), true),
            ((false, false, true), true),
            ((false, false, false), false),
        ];
        for ((l, c, r), next) in expected {
            assert_eq!(rule.next_state(l, c, r), next, "neighborhood {l}{c}{r}");
        }
    }

    #[test]
    fn rule_0_maps_everything_to_zero() {
        let rule = RuleTable::new(0);
        for k in 0..8u8 {
            assert!(!rule.next_state(k & 4 != 0, k & 2 != 0, k & 1 != 0));
        }
    }

    #[test]
    fn rule_204_is_identity() {
        let rule = RuleTable::new(204);
        for k in 0..8u8 {
            let center = k & 2 != 0;
            assert_eq!(rule.next_state(k & 4 != 0, center, k & 1 != 0), center);
        }
    }

    #[test]
    fn number_round_trips_for_all_rules() {
        for number in 0..=255u8 {
            assert_eq!(RuleTable::new(number).reconstructed_number(), number);
        }
    }
}
