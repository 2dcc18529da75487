//! Fixed-width bit rows packed into little-endian `u64` words.
//!
//! Bit `t` of a row lives in word `t / 64` at bit `t % 64`. Bits past the row
//! length in the last word are always zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const WORD_BITS: usize = u64::BITS as usize;

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Word `w` of `row` shifted one position toward lower indices, carrying bit 0
/// of the next word into bit 63. Bit `t` of the result is bit `t + 1` of the row.
#[inline]
pub fn shifted_down(row: &[u64], w: usize) -> u64 {
    let carry = match row.get(w + 1) {
        Some(next) => next << (WORD_BITS - 1),
        None => 0,
    };
    (row[w] >> 1) | carry
}

/// Mask of the valid bits in the last word of a `len`-bit row.
#[inline]
pub fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Iterator over set-bit positions, jumping from one set bit to the next by
/// isolating the least significant bit of each word.
#[derive(Clone, Debug)]
pub struct Ones<'a> {
    words: &'a [u64],
    next_word: usize,
    base: usize,
    current: u64,
}

impl<'a> Ones<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        Self {
            words,
            next_word: 0,
            base: 0,
            current: 0,
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            let word = *self.words.get(self.next_word)?;
            self.base = self.next_word * WORD_BITS;
            self.next_word += 1;
            self.current = word;
        }
        let lowest = self.current & self.current.wrapping_neg();
        self.current ^= lowest;
        Some(self.base + lowest.trailing_zeros() as usize)
    }
}

/// Visits every set bit of a single word, offset by `base`.
#[inline]
pub fn for_each_one(mut word: u64, base: usize, mut f: impl FnMut(usize)) {
    while word != 0 {
        let lowest = word & word.wrapping_neg();
        word ^= lowest;
        f(base + lowest.trailing_zeros() as usize);
    }
}

/// Row-major matrix of bit rows with canonical zero padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    /// Rejects a word buffer of the wrong length or with non-zero padding bits.
    pub fn from_words(rows: usize, cols: usize, words: Vec<u64>) -> Result<Self> {
        let stride = words_for(cols);
        if words.len() != rows * stride {
            return Err(Error::DimensionMismatch {
                what: "packed words",
                expected: rows * stride,
                found: words.len(),
            });
        }
        let m = Self {
            rows,
            cols,
            stride,
            words,
        };
        if let Some(row) = (0..rows).find(|&i| m.row_padding(i) != 0) {
            return Err(Error::Invariant(alloc::format!(
                "row {row} has non-zero padding bits"
            )));
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(rows, cols);
        for i in 0..rows {
            for t in 0..cols {
                if f(i, t) {
                    m.set(i, t, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Words per row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.words[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, i: usize, t: usize) -> bool {
        assert!(i < self.rows && t < self.cols);
        self.row(i)[t / WORD_BITS] >> (t % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, t: usize, value: bool) {
        assert!(i < self.rows && t < self.cols);
        let bit = 1u64 << (t % WORD_BITS);
        let word = &mut self.row_mut(i)[t / WORD_BITS];
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn ones_in_row(&self, i: usize) -> Ones<'_> {
        Ones::new(self.row(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_count_ones(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row_padding(&self, i: usize) -> u64 {
        match self.row(i).last() {
            Some(last) => last & !tail_mask(self.cols),
            None => 0,
        }
    }

    pub fn has_canonical_padding(&self) -> bool {
        (0..self.rows).all(|i| self.row_padding(i) == 0)
    }

    pub fn fill_row(&mut self, i: usize) {
        let cols = self.cols;
        let row = self.row_mut(i);
        for w in row.iter_mut() {
            *w = u64::MAX;
        }
        if let Some(last) = row.last_mut() {
            *last &= tail_mask(cols);
        }
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn to_bools(&self) -> Vec<Vec<bool>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|t| self.get(i, t)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shift_carries_across_words() {
        let mut m = BitMatrix::new(1, 130);
        m.set(0, 64, true);
        m.set(0, 128, true);
        let row = m.row(0);
        assert_eq!(shifted_down(row, 0), 1 << 63);
        assert_eq!(shifted_down(row, 1), 1 << 63);
        assert_eq!(shifted_down(row, 2), 0);
    }

    #[test]
    fn ones_visits_in_order() {
        let mut m = BitMatrix::new(1, 200);
        for t in [0, 5, 63, 64, 127, 199] {
            m.set(0, t, true);
        }
        let got: Vec<_> = m.ones_in_row(0).collect();
        assert_eq!(got, [0, 5, 63, 64, 127, 199]);
    }

    #[test]
    fn fill_row_respects_padding() {
        let mut m = BitMatrix::new(2, 65);
        m.fill_row(1);
        assert!(m.has_canonical_padding());
        assert_eq!(m.row_count_ones(1), 65);
        assert_eq!(m.row_count_ones(0), 0);
    }

    #[test]
    fn from_words_rejects_dirty_padding() {
        assert!(BitMatrix::from_words(1, 3, vec![0b1000]).is_err());
        assert!(BitMatrix::from_words(1, 3, vec![0b111]).is_ok());
        assert!(BitMatrix::from_words(2, 3, vec![0]).is_err());
    }

    proptest! {
        #[test]
        fn pack_unpack_round_trip(rows in 1usize..6, cols in 1usize..200, seed in any::<u64>()) {
            prop_assume!(cols % WORD_BITS != 0);
            let mut state = seed | 1;
            let dense: Vec<Vec<bool>> = (0..rows)
                .map(|_| (0..cols).map(|_| {
                    state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                    state & 1 == 1
                }).collect())
                .collect();
            let m = BitMatrix::from_fn(rows, cols, |i, t| dense[i][t]);
            prop_assert!(m.has_canonical_padding());
            prop_assert_eq!(m.to_bools(), dense.clone());
            let total: usize = dense.iter().flatten().filter(|b| **b).count();
            prop_assert_eq!(m.count_ones(), total);
            let again = BitMatrix::from_words(rows, cols, m.words().to_vec()).unwrap();
            prop_assert_eq!(again, m);
        }
    }
}
