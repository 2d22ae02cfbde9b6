//! Words of the free semigroup on `n` generators and their graded indexing.
//!
//! Words are ordered by length first and lexicographically within a length
//! (`g1 < g2 < ... < gn`). A word of length `k` with 0-based letters
//! `l_1 ... l_k` gets the index
//!
//! ```text
//! index = (1 + n + ... + n^(k-1)) + sum_j l_j * n^(k-j)
//! ```
//!
//! which does not depend on the truncation degree, so series truncated at
//! different degrees share one coordinate system.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest alphabet supported by the `u8` letter storage.
pub const MAX_GENERATORS: usize = 255;

/// An element of the free semigroup. Letters are stored 0-based; the
/// 1-based form `g1 ... gn` only appears at the I/O boundary.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    /// The identity `g0`.
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 0-based letters.
    pub fn from_letters(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    /// Single-letter word `g_{i+1}` from a 0-based generator index.
    pub fn letter(i: usize) -> Self {
        Word(vec![i as u8])
    }

    /// Builds a word from 1-based letters, validating them against `n`.
    pub fn from_one_based(letters: &[i64], n: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l < 1 || l as usize > n {
                return Err(Error::LetterOutOfRange { letter: l, n });
            }
            out.push((l - 1) as u8);
        }
        Ok(Word(out))
    }

    pub fn to_one_based(&self) -> Vec<i64> {
        self.0.iter().map(|&l| l as i64 + 1).collect()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reverse(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Number of occurrences of each generator (the multidegree of the word).
    pub fn multidegree(&self, n: usize) -> Vec<usize> {
        let mut k = vec![0; n];
        for &l in &self.0 {
            k[l as usize] += 1;
        }
        k
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "g0");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "g{}", l + 1)?;
        }
        Ok(())
    }
}

/// Index tables for all words of length at most `degree` over `n` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedEnumeration {
    n: usize,
    degree: usize,
    /// `offsets[k]` is the index of the first word of length `k`;
    /// `offsets[degree + 1]` is the total dimension.
    offsets: Vec<usize>,
    /// `powers[k] = n^k`.
    powers: Vec<usize>,
}

impl GradedEnumeration {
    pub fn new(n: usize, degree: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if n > MAX_GENERATORS {
            return Err(Error::AlphabetTooLarge(n));
        }
        let overflow = || Error::DimensionOverflow { n, degree };
        let mut powers = Vec::with_capacity(degree + 2);
        let mut offsets = Vec::with_capacity(degree + 2);
        let mut p: usize = 1;
        let mut off: usize = 0;
        for _ in 0..=degree + 1 {
            powers.push(p);
            offsets.push(off);
            off = off.checked_add(p).ok_or_else(overflow)?;
            p = p.checked_mul(n).ok_or_else(overflow)?;
        }
        if offsets[degree + 1] > (1usize << 62) {
            return Err(overflow());
        }
        Ok(GradedEnumeration {
            n,
            degree,
            offsets,
            powers,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `sum_{k <= degree} n^k`.
    pub fn total_dim(&self) -> usize {
        self.offsets[self.degree + 1]
    }

    /// Index of the first word of length `k` (`k <= degree + 1`).
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// `n^k` for `k <= degree + 1`.
    pub fn power(&self, k: usize) -> usize {
        self.powers[k]
    }

    /// Indices of the words of length `k`.
    pub fn level(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn index(&self, w: &Word) -> Option<usize> {
        if w.len() > self.degree {
            return None;
        }
        let mut code = 0usize;
        for &l in w.letters() {
            if l as usize >= self.n {
                return None;
            }
            code = code * self.n + l as usize;
        }
        Some(self.offsets[w.len()] + code)
    }

    /// Length of the word with index `i` (`i < total_dim`).
    pub fn length_of(&self, i: usize) -> usize {
        debug_assert!(i < self.total_dim());
        // offsets is strictly increasing
        match self.offsets.binary_search(&i) {
            Ok(k) => k,
            Err(k) => k - 1,
        }
    }

    /// `(length, positional code)` of index `i`.
    pub fn split(&self, i: usize) -> (usize, usize) {
        let k = self.length_of(i);
        (k, i - self.offsets[k])
    }

    /// Index from `(length, code)`.
    pub fn join(&self, len: usize, code: usize) -> usize {
        self.offsets[len] + code
    }

    pub fn unindex(&self, i: usize) -> Word {
        let (k, mut code) = self.split(i);
        let mut letters = vec![0u8; k];
        for slot in letters.iter_mut().rev() {
            *slot = (code % self.n) as u8;
            code /= self.n;
        }
        Word(letters)
    }

    /// Index of `uv`, or `None` when `|u| + |v| > degree`.
    pub fn concat_index(&self, u: usize, v: usize) -> Option<usize> {
        let (lu, cu) = self.split(u);
        let (lv, cv) = self.split(v);
        if lu + lv > self.degree {
            return None;
        }
        Some(self.offsets[lu + lv] + cu * self.powers[lv] + cv)
    }

    /// Index of the word with its last letter removed, together with that letter.
    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        let (k, code) = self.split(i);
        if k == 0 {
            return None;
        }
        Some((self.offsets[k - 1] + code / self.n, code % self.n))
    }

    /// Index of `w g_{letter+1}` given the index of `w`.
    pub fn child(&self, i: usize, letter: usize) -> Option<usize> {
        let (k, code) = self.split(i);
        if k + 1 > self.degree {
            return None;
        }
        Some(self.offsets[k + 1] + code * self.n + letter)
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.total_dim()).map(move |i| self.unindex(i))
    }
}

/// All words of length at most `degree`, in the graded total order.
pub fn enumerate_words(n: usize, degree: usize) -> Result<Vec<Word>> {
    let e = GradedEnumeration::new(n, degree)?;
    if e.total_dim() > 1 << 26 {
        return Err(Error::TooLarge {
            what: "word enumeration",
            size: e.total_dim() as u128,
            limit: 1 << 26,
        });
    }
    Ok(e.words().collect())
}

pub fn reverse_word(w: &Word) -> Word {
    w.reverse()
}

pub fn concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[i64]) -> Word {
        Word::from_one_based(letters, 3).unwrap()
    }

    #[test]
    fn small_enumeration_matches_listing() {
        let words = enumerate_words(2, 2).unwrap();
        let expected: Vec<Word> = vec![
            w(&[]),
            w(&[1]),
            w(&[2]),
            w(&[1, 1]),
            w(&[1, 2]),
            w(&[2, 1]),
            w(&[2, 2]),
        ];
        assert_eq!(words, expected);
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_words(2, 6).unwrap().len(), 127);
        assert_eq!(GradedEnumeration::new(1, 9).unwrap().total_dim(), 10);
        assert_eq!(GradedEnumeration::new(3, 4).unwrap().total_dim(), 121);
    }

    #[test]
    fn g1g2_precedes_g2g1() {
        assert!(w(&[1, 2]) < w(&[2, 1]));
        let e = GradedEnumeration::new(2, 2).unwrap();
        assert!(e.index(&w(&[1, 2])).unwrap() < e.index(&w(&[2, 1])).unwrap());
    }

    #[test]
    fn reverse_and_concat() {
        assert_eq!(reverse_word(&w(&[1, 2])), w(&[2, 1]));
        assert_eq!(reverse_word(&w(&[])), w(&[]));
        assert_eq!(reverse_word(&w(&[1, 1, 2])), w(&[2, 1, 1]));
        assert_eq!(concat(&w(&[1]), &w(&[2])), w(&[1, 2]));
        assert_eq!(concat(&w(&[]), &w(&[2, 2])), w(&[2, 2]));
        assert_eq!(concat(&w(&[1, 2]), &w(&[1])), w(&[1, 2, 1]));
    }

    #[test]
    fn rejects_empty_alphabet_and_bad_letters() {
        assert!(matches!(enumerate_words(0, 3), Err(Error::EmptyAlphabet)));
        assert!(Word::from_one_based(&[0], 2).is_err());
        assert!(Word::from_one_based(&[3], 2).is_err());
    }

    #[test]
    fn index_arithmetic_agrees_with_words() {
        let e = GradedEnumeration::new(3, 4).unwrap();
        for i in 0..e.total_dim() {
            let wi = e.unindex(i);
            assert_eq!(e.index(&wi), Some(i));
            if let Some((p, l)) = e.parent(i) {
                let mut letters = wi.letters().to_vec();
                assert_eq!(letters.pop(), Some(l as u8));
                assert_eq!(e.unindex(p), Word::from_letters(letters));
                assert_eq!(e.child(p, l), Some(i));
            }
        }
        let u = e.index(&w(&[2, 3])).unwrap();
        let v = e.index(&w(&[1, 1])).unwrap();
        assert_eq!(e.unindex(e.concat_index(u, v).unwrap()), w(&[2, 3, 1, 1]));
        let long = e.index(&w(&[1, 2, 3])).unwrap();
        assert_eq!(e.concat_index(long, v), None);
    }

    #[test]
    fn index_is_independent_of_degree() {
        let small = GradedEnumeration::new(2, 3).unwrap();
        let big = GradedEnumeration::new(2, 9).unwrap();
        for i in 0..small.total_dim() {
            assert_eq!(small.unindex(i), big.unindex(i));
        }
    }
}
