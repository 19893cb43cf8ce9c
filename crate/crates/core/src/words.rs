//! Binary words over the alphabet `{1, 2}`.
//!
//! A word `w = w_1 w_2 ... w_n` names the isometry `S_w = S_{w_1} S_{w_2} ... S_{w_n}`.
//! In the canonical representation on `l^2(Z)` we have `S_2 e_m = e_{2m}` and
//! `S_1 = U S_2`, so `S_1 e_m = e_{2m+1}`. Consequently `S_w e_m = e_{2^n m + t(w)}`
//! where the offset `t(w)` reads the word as a binary number whose *leftmost*
//! letter is the least significant bit, with letter `1` contributing bit `1`
//! and letter `2` contributing bit `0`.
//!
//! Words are ordered lexicographically with `1 < 2` and a proper prefix sorting
//! before its extensions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A finite word over `{1, 2}`; the empty word is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from letters, rejecting anything outside `{1, 2}`.
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| l != 1 && l != 2) {
            return Err(Error::Domain(format!("invalid letter {bad}: words use only 1 and 2")));
        }
        Ok(Word(letters))
    }

    pub(crate) fn from_letters(letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&l| l == 1 || l == 2));
        Word(letters)
    }

    pub fn letter(l: u8) -> Self {
        Word::new(vec![l]).expect("letter must be 1 or 2")
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

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// `self · l`
    pub fn push(&self, l: u8) -> Word {
        debug_assert!(l == 1 || l == 2);
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(l);
        Word(v)
    }

    /// `self · other`
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Drops the last letter.
    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// If `self = prefix · rest`, returns `rest`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    /// The offset `t(w)` as a machine integer, when it fits.
    pub(crate) fn offset_u64(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        let mut t = 0u64;
        for (j, &l) in self.0.iter().enumerate() {
            if l == 1 {
                t |= 1u64 << j;
            }
        }
        Some(t)
    }

    pub fn offset(&self) -> BigUint {
        if let Some(t) = self.offset_u64() {
            return BigUint::from(t);
        }
        let mut t = BigUint::zero();
        for (j, &l) in self.0.iter().enumerate() {
            if l == 1 {
                t.set_bit(j as u64, true);
            }
        }
        t
    }

    /// All words of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> Vec<Word> {
        assert!(n < usize::BITS as usize, "word length {n} too large to enumerate");
        (0..1usize << n)
            .map(|i| {
                Word((0..n).map(|j| if (i >> (n - 1 - j)) & 1 == 0 { 1 } else { 2 }).collect())
            })
            .collect()
    }

    /// Position of a word among [`Word::all_of_length`] of its length.
    pub fn lex_index(&self) -> usize {
        self.0.iter().fold(0usize, |acc, &l| (acc << 1) | usize::from(l == 2))
    }
}

/// Returns `(|w|, t(w))`, so that `S_w e_m = e_{2^{|w|} m + t(w)}`.
pub fn encode(w: &Word) -> (usize, BigUint) {
    (w.len(), w.offset())
}

/// Inverse of [`encode`].
pub fn decode(length: usize, offset: &BigUint) -> Result<Word> {
    if offset.bits() > length as u64 {
        return Err(Error::Domain(format!(
            "offset {offset} out of range for words of length {length}"
        )));
    }
    Ok(Word(
        (0..length as u64).map(|j| if offset.bit(j) { 1 } else { 2 }).collect(),
    ))
}

pub(crate) fn decode_u64(length: usize, offset: u64) -> Word {
    debug_assert!(length >= 64 || offset >> length == 0);
    Word((0..length).map(|j| if (offset >> j) & 1 == 1 { 1 } else { 2 }).collect())
}

/// True iff `words` is prefix-free and `sum 2^{-|w|} = 1`, i.e. the leaves of a
/// finite binary tree. Duplicates make a family fail.
pub fn is_partition<'a, I>(words: I) -> bool
where
    I: IntoIterator<Item = &'a Word>,
{
    let mut ws: Vec<&Word> = words.into_iter().collect();
    if ws.is_empty() {
        return false;
    }
    ws.sort();
    // in sorted order a prefix sits immediately before one of its extensions
    if ws.windows(2).any(|p| p[0].is_prefix_of(p[1])) {
        return false;
    }
    let depth = ws.iter().map(|w| w.len()).max().unwrap_or(0);
    let mut total = BigUint::zero();
    for w in &ws {
        total += BigUint::one() << (depth - w.len());
    }
    total == BigUint::one() << depth
}

/// A complete prefix-free family of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition(Vec<Word>);

impl Partition {
    pub fn new(mut words: Vec<Word>) -> Result<Self> {
        if !is_partition(&words) {
            return Err(Error::Domain("words do not form a complete prefix-free family".into()));
        }
        words.sort();
        Ok(Partition(words))
    }

    pub fn trivial() -> Self {
        Partition(vec![Word::empty()])
    }

    /// All words of a fixed length.
    pub fn uniform(depth: usize) -> Self {
        Partition(Word::all_of_length(depth))
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Replaces the leaf `w` by its two children.
    pub fn split(&self, w: &Word) -> Result<Partition> {
        let pos = self
            .0
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| Error::Domain(format!("{w} is not a leaf of the partition")))?;
        let mut words = self.0.clone();
        words.remove(pos);
        words.push(w.push(1));
        words.push(w.push(2));
        words.sort();
        Ok(Partition(words))
    }

    /// The leaf having `w` as a prefix or `w` extending it, if any.
    pub fn leaf_comparable_with(&self, w: &Word) -> Option<&Word> {
        self.0.iter().find(|x| x.is_prefix_of(w) || w.is_prefix_of(x))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(s.len());
        for (i, c) in s.char_indices() {
            match c {
                '1' => letters.push(1),
                '2' => letters.push(2),
                _ => {
                    return Err(Error::Parse {
                        position: i,
                        message: format!("unexpected '{c}' in word"),
                    })
                }
            }
        }
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&Word::empty()), (0, BigUint::from(0u8)));
        assert_eq!(encode(&w("1")), (1, BigUint::from(1u8)));
        assert_eq!(encode(&w("21")), (2, BigUint::from(2u8)));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(0, &BigUint::from(0u8)).unwrap(), Word::empty());
        assert_eq!(decode(1, &BigUint::from(1u8)).unwrap(), w("1"));
        assert_eq!(decode(2, &BigUint::from(2u8)).unwrap(), w("21"));
        assert!(matches!(decode(2, &BigUint::from(4u8)), Err(Error::Domain(_))));
    }

    #[test]
    fn partition_examples() {
        assert!(is_partition(&[Word::empty()]));
        assert!(is_partition(&[w("1"), w("21"), w("22")]));
        assert!(!is_partition(&[w("1"), w("21")]));
        assert!(!is_partition(&[w("1"), w("1"), w("2")]));
        assert!(!is_partition(&[w("1"), w("12"), w("2")]));
        assert!(!is_partition(std::iter::empty::<&Word>()));
    }

    #[test]
    fn lexicographic_order() {
        let all = Word::all_of_length(2);
        assert_eq!(all, vec![w("11"), w("12"), w("21"), w("22")]);
        assert!(Word::empty() < w("1") && w("1") < w("11") && w("12") < w("2"));
        for (i, x) in all.iter().enumerate() {
            assert_eq!(x.lex_index(), i);
        }
    }

    #[test]
    fn text_syntax() {
        assert_eq!(w("e"), Word::empty());
        assert_eq!(Word::empty().to_string(), "e");
        assert_eq!(w("112").to_string(), "112");
        assert!(matches!("13".parse::<Word>(), Err(Error::Parse { position: 1, .. })));
    }

    #[test]
    fn long_words_encode_exactly() {
        let long = Word::from_letters(vec![1; 100]);
        let (n, t) = encode(&long);
        assert_eq!(n, 100);
        assert_eq!(t, (BigUint::one() << 100usize) - 1u8);
        assert_eq!(decode(n, &t).unwrap(), long);
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(1u8..=2, 0..=max).prop_map(Word::from_letters)
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(x in arb_word(80)) {
            let (n, t) = encode(&x);
            prop_assert_eq!(decode(n, &t).unwrap(), x);
        }

        #[test]
        fn encode_is_bijective_at_fixed_length(n in 0usize..8) {
            let mut seen: Vec<u64> = Word::all_of_length(n)
                .iter()
                .map(|x| x.offset_u64().unwrap())
                .collect();
            seen.sort();
            prop_assert_eq!(seen, (0..1u64 << n).collect::<Vec<_>>());
        }

        #[test]
        fn caret_split_preserves_partitions(splits in proptest::collection::vec(any::<prop::sample::Index>(), 0..12)) {
            let mut p = Partition::trivial();
            for s in splits {
                let leaf = s.get(p.words()).clone();
                p = p.split(&leaf).unwrap();
                prop_assert!(is_partition(p.words()));
            }
        }
    }
}
