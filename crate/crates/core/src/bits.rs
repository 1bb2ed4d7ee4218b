//! Word-packed bit vectors over GF(2).
//!
//! Every symplectic operation in this crate reduces to XOR, AND, and
//! popcount over `u64` words, so the representation is kept deliberately
//! small and the hot operations are word-parallel.

use serde::{Deserialize, Serialize};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Fixed-length bit vector. Bits past `len` in the last word are kept zero;
/// every method preserves that invariant.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// popcount(self AND other).
    pub fn and_count(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Parity of popcount(self AND other); the symplectic half-form.
    pub fn and_parity(&self, other: &BitVec) -> bool {
        self.and_count(other) % 2 == 1
    }

    pub fn swap_bits(&mut self, i: usize, j: usize) {
        let (a, b) = (self.get(i), self.get(j));
        self.set(i, b);
        self.set(j, a);
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let bit = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(wi * WORD_BITS + bit)
                }
            })
        })
    }

    /// First set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    /// Grow or shrink to `len` qubits, zero-filling new positions.
    pub fn resized(&self, len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for i in self.iter_ones() {
            if i < len {
                v.set(i, true);
            }
        }
        v
    }

    /// Copy of self with every set bit shifted up by `offset`.
    pub fn shifted(&self, offset: usize, len: usize) -> BitVec {
        BitVec::from_indices(len, self.iter_ones().map(|i| i + offset))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Plain GF(2) row-echelon basis over packed rows, used for span membership
/// and rank computations on generator bit patterns.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Gf2Basis::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `row` against the basis. Returns the residual.
    pub fn reduce(&self, mut row: BitVec) -> BitVec {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if row.get(p) {
                row.xor_assign(r);
            }
        }
        row
    }

    /// Insert `row` if independent. Returns true when the rank grew.
    pub fn insert(&mut self, row: BitVec) -> bool {
        let residual = self.reduce(row);
        match residual.first_one() {
            None => false,
            Some(p) => {
                self.rows.push(residual);
                self.pivots.push(p);
                true
            }
        }
    }

    pub fn contains(&self, row: &BitVec) -> bool {
        self.reduce(row.clone()).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_flip() {
        let mut v = BitVec::zeros(130);
        assert!(v.is_zero());
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert!(v.get(0) && v.get(64) && v.get(129));
        assert!(!v.get(63));
        assert_eq!(v.count_ones(), 3);
        v.flip(64);
        assert!(!v.get(64));
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
    }

    #[test]
    fn xor_and_parity() {
        let a = BitVec::from_indices(70, [0, 3, 69]);
        let b = BitVec::from_indices(70, [3, 5, 69]);
        let mut c = a.clone();
        c.xor_assign(&b);
        assert_eq!(c.iter_ones().collect::<Vec<_>>(), vec![0, 5]);
        assert_eq!(a.and_count(&b), 2);
        assert!(!a.and_parity(&b));
    }

    #[test]
    fn basis_rank_and_span() {
        let mut basis = Gf2Basis::new();
        assert!(basis.insert(BitVec::from_indices(4, [0, 1])));
        assert!(basis.insert(BitVec::from_indices(4, [1, 2])));
        // (0,2) = (0,1) + (1,2): dependent
        assert!(!basis.insert(BitVec::from_indices(4, [0, 2])));
        assert_eq!(basis.rank(), 2);
        assert!(basis.contains(&BitVec::from_indices(4, [0, 2])));
        assert!(!basis.contains(&BitVec::from_indices(4, [3])));
    }

    #[test]
    fn shifted_and_resized() {
        let a = BitVec::from_indices(3, [0, 2]);
        let b = a.shifted(4, 8);
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![4, 6]);
        let c = b.resized(5);
        assert_eq!(c.iter_ones().collect::<Vec<_>>(), vec![4]);
    }
}
