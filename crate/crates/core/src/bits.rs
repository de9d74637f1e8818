use std::fmt;

use smallvec::SmallVec;

/// Fixed-width bit set with position 0 stored as the most significant bit of
/// the first word.
///
/// With that layout the derived lexicographic order on the word vector is the
/// order of the mask read as a big-endian integer, variable 0 first. Widths of
/// up to 256 bits stay inline.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitMask(SmallVec<[u64; 4]>);

#[inline]
fn locate(index: usize) -> (usize, u64) {
    (index / 64, 1u64 << (63 - index % 64))
}

impl BitMask {
    pub fn zeros(width: usize) -> Self {
        BitMask(SmallVec::from_elem(0, width.div_ceil(64)))
    }

    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = Self::zeros(width);
        for i in indices {
            mask.set(i);
        }
        mask
    }

    /// Number of bits the mask can hold (a multiple of 64).
    pub fn capacity(&self) -> usize {
        self.0.len() * 64
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        let (w, bit) = locate(index);
        self.0.get(w).is_some_and(|word| word & bit != 0)
    }

    #[inline]
    pub fn set(&mut self, index: usize) {
        let (w, bit) = locate(index);
        self.0[w] |= bit;
    }

    #[inline]
    pub fn clear(&mut self, index: usize) {
        let (w, bit) = locate(index);
        self.0[w] &= !bit;
    }

    pub fn assign(&mut self, index: usize, value: bool) {
        if value {
            self.set(index)
        } else {
            self.clear(index)
        }
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// True when every bit set here is also set in `other`.
    #[inline]
    pub fn is_subset_of(&self, other: &BitMask) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.0.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn union(&self, other: &BitMask) -> BitMask {
        debug_assert_eq!(self.0.len(), other.0.len());
        BitMask(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    /// Positions of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let lead = rest.leading_zeros() as usize;
                rest &= !(1u64 << (63 - lead));
                Some(w * 64 + lead)
            })
        })
    }

    /// Highest set position, if any.
    pub fn last_one(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.trailing_zeros() as usize)
    }

    pub(crate) fn from_words(words: impl IntoIterator<Item = u64>) -> Self {
        BitMask(words.into_iter().collect())
    }

    /// Renders the first `width` positions as '0'/'1', position 0 leftmost.
    pub fn to_bit_string(&self, width: usize) -> String {
        (0..width)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BitMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_big_endian_with_position_zero_first() {
        let a = BitMask::from_indices(16, [14, 15]);
        let b = BitMask::from_indices(16, [13]);
        let c = BitMask::from_indices(16, [0]);
        assert!(a < b && b < c);
        assert!(BitMask::zeros(16) < a);
    }

    #[test]
    fn ones_and_last_one_span_words() {
        let m = BitMask::from_indices(200, [0, 63, 64, 130, 199]);
        assert_eq!(m.ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(m.last_one(), Some(199));
        assert_eq!(m.count_ones(), 5);
        assert_eq!(BitMask::zeros(10).last_one(), None);
    }

    #[test]
    fn subset_and_union() {
        let a = BitMask::from_indices(128, [1, 100]);
        let b = BitMask::from_indices(128, [1, 5, 100]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!(a.union(&BitMask::from_indices(128, [5])), b);
    }

    #[test]
    fn bit_string_is_leftmost_first() {
        let m = BitMask::from_indices(16, [14, 15]);
        assert_eq!(m.to_bit_string(16), "0000000000000011");
    }
}
