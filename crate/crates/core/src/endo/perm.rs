use std::fmt;

use num_traits::{One, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::words::Word;

/// A permutation unitary `u = Σ_β S_{π(β)} S_β*` of level `k`, where `β`
/// runs over the words of length `k`.
///
/// `perm[i]` is the lexicographic index of `π(β)` for the `i`-th word `β`.
/// Cycle notation numbers the words `1..2^k` in lexicographic order, so at
/// level 2 the words `11, 12, 21, 22` are `1, 2, 3, 4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermUnitary {
    level: usize,
    perm: Vec<usize>,
}

impl PermUnitary {
    pub fn new(level: usize, perm: Vec<usize>) -> Result<Self> {
        if level >= usize::BITS as usize - 1 || perm.len() != 1usize << level {
            return Err(Error::Domain(format!(
                "a level-{level} permutation acts on 2^{level} words, got {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &x in &perm {
            if x >= perm.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Domain("not a bijection of words".into()));
            }
        }
        Ok(PermUnitary { level, perm })
    }

    pub fn identity(level: usize) -> Self {
        PermUnitary { level, perm: (0..1usize << level).collect() }
    }

    /// The permutation `β ↦ f(β)` of the words of length `level`.
    pub fn from_fn(level: usize, f: impl Fn(&Word) -> Word) -> Result<Self> {
        let perm = Word::all_of_length(level)
            .iter()
            .map(|w| {
                let img = f(w);
                if img.len() != level {
                    return Err(Error::Domain(format!("{w} was sent to {img}, of a different length")));
                }
                Ok(img.lex_index())
            })
            .collect::<Result<Vec<_>>>()?;
        PermUnitary::new(level, perm)
    }

    /// Recognizes `e` as a permutation unitary, at the smallest level that
    /// displays it.
    pub fn from_element(e: &Element) -> Result<Self> {
        let level = e
            .monomials()
            .map(|m| m.alpha.len().max(m.beta.len()))
            .max()
            .unwrap_or(0);
        PermUnitary::from_element_at_level(e, level.max(1))
    }

    pub fn from_element_at_level(e: &Element, level: usize) -> Result<Self> {
        let not_perm = || Error::Domain("element is not a permutation unitary".into());
        if e.monomials().any(|m| m.alpha.len() > level || m.beta.len() > level) {
            return Err(not_perm());
        }
        // equal-length words expand in step, so normalizing β to `level`
        // also brings every gauge-invariant α to `level`
        let form = e.normalize(Some(level))?;
        let mut perm = vec![usize::MAX; 1 << level];
        for (m, c) in form.terms() {
            if !c.is_one() || !m.k.is_zero() || m.alpha.len() != level {
                return Err(not_perm());
            }
            perm[m.beta.lex_index()] = m.alpha.lex_index();
        }
        if perm.contains(&usize::MAX) {
            return Err(not_perm());
        }
        PermUnitary::new(level, perm).map_err(|_| not_perm())
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn image(&self, w: &Word) -> Word {
        assert_eq!(w.len(), self.level, "word length must match the level");
        word_at(self.level, self.perm[w.lex_index()])
    }

    pub fn element(&self) -> Element {
        let words = Word::all_of_length(self.level);
        Element::sum_of(
            words
                .iter()
                .enumerate()
                .map(|(i, b)| Monomial::new(words[self.perm[i]].clone(), 0, b.clone())),
        )
    }

    pub fn inverse(&self) -> PermUnitary {
        let mut inv = vec![0; self.perm.len()];
        for (i, &x) in self.perm.iter().enumerate() {
            inv[x] = i;
        }
        PermUnitary { level: self.level, perm: inv }
    }

    /// The same operator written at a deeper level: `S_{π(β)x} S_{βx}*`.
    pub fn lift(&self, level: usize) -> PermUnitary {
        assert!(level >= self.level);
        let extra = level - self.level;
        let perm = (0..1usize << level)
            .map(|i| (self.perm[i >> extra] << extra) | (i & ((1 << extra) - 1)))
            .collect();
        PermUnitary { level, perm }
    }

    /// The operator product `self · other`, at the larger of the two levels.
    pub fn compose(&self, other: &PermUnitary) -> PermUnitary {
        let level = self.level.max(other.level);
        let (a, b) = (self.lift(level), other.lift(level));
        PermUnitary { level, perm: b.perm.iter().map(|&x| a.perm[x]).collect() }
    }

    /// Disjoint cycles, 1-based, each starting at its smallest point, fixed
    /// points omitted; `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let mut seen = vec![false; self.perm.len()];
        let mut out = String::new();
        for start in 0..self.perm.len() {
            if seen[start] || self.perm[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push((x + 1).to_string());
                x = self.perm[x];
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Parses cycle notation such as `(1 3 4 2)(5 6)` or `()`. Without
    /// spaces, each digit is a point: `(1342)`.
    pub fn parse_cycles(level: usize, text: &str) -> Result<Self> {
        let n = 1usize << level;
        let bad = |position: usize, message: String| Error::Parse { position, message };
        let mut perm: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let bytes = text.as_bytes();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if i == bytes.len() {
            return Err(bad(0, "empty cycle notation".into()));
        }
        while i < bytes.len() {
            if bytes[i] != b'(' {
                return Err(bad(i, "expected '('".into()));
            }
            let close = text[i..].find(')').map(|p| p + i).ok_or_else(|| bad(i, "unclosed cycle".into()))?;
            let inner = &text[i + 1..close];
            let points: Vec<(usize, &str)> = if inner.trim().contains(char::is_whitespace) || inner.contains(',') {
                let mut pts = Vec::new();
                let mut off = i + 1;
                for tok in inner.split(|c: char| c.is_whitespace() || c == ',') {
                    if !tok.is_empty() {
                        let at = text[off..].find(tok).map_or(off, |p| p + off);
                        off = at + tok.len();
                        pts.push((at, tok));
                    }
                }
                pts
            } else {
                inner.char_indices().filter(|(_, c)| !c.is_whitespace()).map(|(j, c)| (i + 1 + j, &inner[j..j + c.len_utf8()])).collect()
            };
            let mut cycle = Vec::with_capacity(points.len());
            for (at, tok) in points {
                let x: usize = tok.parse().map_err(|_| bad(at, format!("'{tok}' is not a point")))?;
                if x == 0 || x > n {
                    return Err(bad(at, format!("point {x} outside 1..{n}")));
                }
                if std::mem::replace(&mut used[x - 1], true) {
                    return Err(bad(at, format!("point {x} repeated")));
                }
                cycle.push(x - 1);
            }
            for j in 0..cycle.len() {
                perm[cycle[j]] = cycle[(j + 1) % cycle.len()];
            }
            i = close + 1;
            skip_ws(&mut i);
        }
        Ok(PermUnitary { level, perm })
    }
}

impl fmt::Display for PermUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

/// The `index`-th word of length `level` in lexicographic order.
pub(crate) fn word_at(level: usize, index: usize) -> Word {
    Word::from_letters((0..level).map(|j| if (index >> (level - 1 - j)) & 1 == 0 { 1 } else { 2 }).collect())
}

/// The `index`-th permutation of `0..n` in lexicographic order.
pub(crate) fn nth_permutation(n: usize, mut index: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<u64> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as u64;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let q = (index / fact[i]) as usize;
        index %= fact[i];
        out.push(pool.remove(q));
    }
    out
}

pub(crate) fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;

    #[test]
    fn level_two_names() {
        let f = PermUnitary::from_element(&parse_element("F").unwrap()).unwrap();
        assert_eq!(f.cycle_notation(), "(2 3)");
        let u = PermUnitary::parse_cycles(2, "(1342)").unwrap();
        assert_eq!(u, PermUnitary::parse_cycles(2, "(1 3 4 2)").unwrap());
        assert_eq!(u.image(&"11".parse().unwrap()), "21".parse().unwrap());
        assert_eq!(PermUnitary::identity(3).cycle_notation(), "()");
        assert_eq!(PermUnitary::parse_cycles(3, "()").unwrap(), PermUnitary::identity(3));
        assert!(PermUnitary::parse_cycles(2, "(1 5)").is_err());
        assert!(PermUnitary::parse_cycles(2, "(1 2)(2 3)").is_err());
    }

    #[test]
    fn element_round_trip_and_lift() {
        let u = PermUnitary::parse_cycles(2, "(1 4)").unwrap();
        let e = u.element();
        assert!(e.is_unitary());
        assert!(e.membership().in_f2);
        assert_eq!(PermUnitary::from_element(&e).unwrap(), u);
        let lifted = u.lift(3);
        assert!(lifted.element().equals(&e));
        assert_eq!(PermUnitary::from_element_at_level(&e, 3).unwrap(), lifted);
        assert_eq!(PermUnitary::from_element(&Element::one()).unwrap(), PermUnitary::identity(1));
        assert!(PermUnitary::from_element(&parse_element("U").unwrap()).is_err());
        assert!(PermUnitary::from_element(&parse_element("S[1] S*[11] + S[2] S*[2]").unwrap()).is_err());
    }

    #[test]
    fn composition_matches_products() {
        let a = PermUnitary::parse_cycles(2, "(1 3 4 2)").unwrap();
        let b = PermUnitary::from_element(&Element::flip()).unwrap();
        assert!(a.compose(&b).element().equals(&a.element().mul(&b.element())));
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn lexicographic_permutations() {
        assert_eq!(nth_permutation(3, 0), vec![0, 1, 2]);
        assert_eq!(nth_permutation(3, 1), vec![0, 2, 1]);
        assert_eq!(nth_permutation(3, 5), vec![2, 1, 0]);
        assert_eq!(factorial(8), Some(40320));
        assert_eq!(word_at(3, 5), "212".parse().unwrap());
    }
}
