//! Canonical monomials `S_α U^k S_β*`.
//!
//! Every product of the generators `S_1, S_2, U` and their adjoints is either
//! zero or equal to exactly one triple `(α, k, β)`. Products are computed by
//! comparing the inner words and commuting powers of `U` past isometries with
//! [`push_u_through`]; nothing is expanded at this layer.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::words::{decode, decode_u64, Word};

/// Commutes `U^k` past `S_a`: returns `(a2, q)` with `U^k S_a = S_{a2} U^q`.
///
/// Equivalently `t(a) + k = 2^{|a|} q + t(a2)` with `0 <= t(a2) < 2^{|a|}`.
pub fn push_u_through(k: &BigInt, a: &Word) -> (Word, BigInt) {
    let n = a.len();
    if n == 0 {
        return (Word::empty(), k.clone());
    }
    if n <= 62 {
        if let (Some(k), Some(t)) = (k.to_i64(), a.offset_u64()) {
            let s = i128::from(t) + i128::from(k);
            let q = s >> n;
            let r = (s - (q << n)) as u64;
            return (decode_u64(n, r), BigInt::from(q));
        }
    }
    let s = BigInt::from(a.offset()) + k;
    let modulus = BigInt::one() << n;
    let (q, r) = s.div_mod_floor(&modulus);
    let r = r.to_biguint().expect("floor remainder is non-negative");
    (decode(n, &r).expect("remainder is in range"), q)
}

/// The partial isometry `S_alpha U^k S_beta*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alpha: Word,
    pub k: BigInt,
    pub beta: Word,
}

impl Monomial {
    pub fn new(alpha: Word, k: impl Into<BigInt>, beta: Word) -> Self {
        Monomial { alpha, k: k.into(), beta }
    }

    pub fn identity() -> Self {
        Monomial::new(Word::empty(), 0, Word::empty())
    }

    pub fn u_power(k: impl Into<BigInt>) -> Self {
        Monomial::new(Word::empty(), k, Word::empty())
    }

    /// The isometry `S_w`.
    pub fn s(w: Word) -> Self {
        Monomial::new(w, 0, Word::empty())
    }

    /// The co-isometry `S_w*`.
    pub fn s_adj(w: Word) -> Self {
        Monomial::new(Word::empty(), 0, w)
    }

    /// The range projection `P_w = S_w S_w*`.
    pub fn projection(w: Word) -> Self {
        Monomial::new(w.clone(), 0, w)
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty() && self.k.is_zero()
    }

    /// Operator product `self · other`, or `None` when it vanishes
    /// (`S_β* S_γ = 0` for incomparable `β`, `γ`).
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        let inner = &self.beta;
        let outer = &other.alpha;
        if let Some(gamma) = outer.strip_prefix(inner) {
            // S_α U^k1 S_γ U^k2 S_β2* = S_{α γ'} U^{q + k2} S_β2*
            let (g, q) = push_u_through(&self.k, &gamma);
            Some(Monomial { alpha: self.alpha.concat(&g), k: q + &other.k, beta: other.beta.clone() })
        } else if let Some(gamma) = inner.strip_prefix(outer) {
            // S_α U^k1 S_γ* U^k2 S_β2* = S_α U^{k1 - q} S_{β2 γ'}*  where U^{-k2} S_γ = S_γ' U^q
            let (g, q) = push_u_through(&-&other.k, &gamma);
            Some(Monomial { alpha: self.alpha.clone(), k: &self.k - q, beta: other.beta.concat(&g) })
        } else {
            None
        }
    }

    /// `(α, k, β) ↦ (β, -k, α)`.
    pub fn adjoint(&self) -> Monomial {
        Monomial { alpha: self.beta.clone(), k: -&self.k, beta: self.alpha.clone() }
    }

    /// Inserts `S_1 S_1* + S_2 S_2* = 1` on the right of `U^k`, lengthening both
    /// words by one letter. The two outputs sum to `self`.
    pub fn expand_right(&self) -> (Monomial, Monomial) {
        let (half, odd) = self.k.div_mod_floor(&BigInt::from(2));
        if odd.is_zero() {
            (
                Monomial { alpha: self.alpha.push(1), k: half.clone(), beta: self.beta.push(1) },
                Monomial { alpha: self.alpha.push(2), k: half, beta: self.beta.push(2) },
            )
        } else {
            (
                Monomial { alpha: self.alpha.push(1), k: half.clone(), beta: self.beta.push(2) },
                Monomial { alpha: self.alpha.push(2), k: half + 1, beta: self.beta.push(1) },
            )
        }
    }

    /// Inverse of [`Monomial::expand_right`]: if `left` and `right` are the two
    /// halves of a single monomial, returns it. `left` must be the half whose
    /// `alpha` ends in `1`.
    pub fn merge(left: &Monomial, right: &Monomial) -> Option<Monomial> {
        if left.alpha.last() != Some(1) || right.alpha.last() != Some(2) {
            return None;
        }
        let alpha = left.alpha.parent()?;
        if right.alpha.parent()? != alpha {
            return None;
        }
        let beta = left.beta.parent()?;
        if right.beta.parent()? != beta {
            return None;
        }
        match (left.beta.last()?, right.beta.last()?) {
            (1, 2) if left.k == right.k => Some(Monomial { alpha, k: &left.k * 2, beta }),
            (2, 1) if &left.k + 1 == right.k => {
                Some(Monomial { alpha, k: &left.k * 2 + 1, beta })
            }
            _ => None,
        }
    }

    /// `S_α U^k S_β*` belongs to the gauge-invariant part iff `|α| = |β|`.
    pub fn is_gauge_invariant(&self) -> bool {
        self.alpha.len() == self.beta.len()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alpha
            .cmp(&other.alpha)
            .then_with(|| self.beta.cmp(&other.beta))
            .then_with(|| self.k.cmp(&other.k))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let mut parts = Vec::with_capacity(3);
        if !self.alpha.is_empty() {
            parts.push(format!("S[{}]", self.alpha));
        }
        if self.k.is_one() {
            parts.push("U".to_string());
        } else if !self.k.is_zero() {
            parts.push(format!("U^{}", self.k));
        }
        if !self.beta.is_empty() {
            parts.push(format!("S*[{}]", self.beta));
        }
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn m(a: &str, k: i64, b: &str) -> Monomial {
        Monomial::new(w(a), k, w(b))
    }

    /// Exact action of a monomial on a basis index, written directly from the
    /// affine-map description; independent of `mul`.
    fn act(x: &Monomial, n: i64) -> Option<i64> {
        let lb = x.beta.len() as u32;
        let tb = x.beta.offset_u64().unwrap() as i64;
        if (n - tb).rem_euclid(1 << lb) != 0 {
            return None;
        }
        let j = (n - tb).div_euclid(1 << lb);
        let k = x.k.to_i64().unwrap();
        Some((1i64 << x.alpha.len()) * (j + k) + x.alpha.offset_u64().unwrap() as i64)
    }

    #[test]
    fn push_examples() {
        assert_eq!(push_u_through(&1.into(), &w("2")), (w("1"), 0.into()));
        assert_eq!(push_u_through(&2.into(), &w("2")), (w("2"), 1.into()));
        assert_eq!(push_u_through(&4.into(), &w("12")), (w("12"), 1.into()));
        assert_eq!(push_u_through(&(-1).into(), &w("2")), (w("1"), (-1).into()));
    }

    #[test]
    fn push_with_huge_exponent() {
        let k = BigInt::one() << 200usize;
        let (a2, q) = push_u_through(&(&k + 3), &w("121"));
        // t(121) = 1 + 4 = 5, 5 + 3 = 8 -> wraps once past 2^3
        assert_eq!(a2, w("222"));
        assert_eq!(q, (k >> 3usize) + 1);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(m("", 1, "").mul(&m("", 1, "")), Some(m("", 2, "")));
        assert_eq!(m("", 0, "1").mul(&m("2", 0, "")), None);
        assert_eq!(m("2", 1, "1").mul(&m("1", 0, "2")), Some(m("2", 1, "2")));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(m("", 1, "").adjoint(), m("", -1, ""));
        assert_eq!(m("2", 0, "").adjoint(), m("", 0, "2"));
        assert_eq!(m("1", 3, "21").adjoint(), m("21", -3, "1"));
    }

    #[test]
    fn expand_examples() {
        assert_eq!(m("", 2, "").expand_right(), (m("1", 1, "1"), m("2", 1, "2")));
        assert_eq!(m("", 1, "").expand_right(), (m("1", 0, "2"), m("2", 1, "1")));
        assert_eq!(m("2", 1, "2").expand_right(), (m("21", 0, "22"), m("22", 1, "21")));
        assert_eq!(m("", -1, "").expand_right(), (m("1", -1, "2"), m("2", 0, "1")));
    }

    #[test]
    fn display() {
        assert_eq!(m("112", 3, "21").to_string(), "S[112] U^3 S*[21]");
        assert_eq!(m("", -4, "").to_string(), "U^-4");
        assert_eq!(m("2", 0, "").to_string(), "S[2]");
        assert_eq!(Monomial::identity().to_string(), "1");
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        let word = proptest::collection::vec(1u8..=2, 0..5).prop_map(Word::from_letters);
        (word.clone(), -20i64..20, word).prop_map(|(a, k, b)| Monomial::new(a, k, b))
    }

    proptest! {
        #[test]
        fn push_identity_cases(a in proptest::collection::vec(1u8..=2, 0..10), q in -50i64..50) {
            let a = Word::from_letters(a);
            prop_assert_eq!(push_u_through(&BigInt::zero(), &a), (a.clone(), BigInt::zero()));
            let k = BigInt::from(q) << a.len();
            prop_assert_eq!(push_u_through(&k, &a), (a, BigInt::from(q)));
        }

        #[test]
        fn mul_matches_pointwise_composition(x in arb_mono(), y in arb_mono()) {
            let prod = x.mul(&y);
            for n in -70i64..70 {
                let expected = act(&y, n).and_then(|j| act(&x, j));
                let got = prod.as_ref().and_then(|p| act(p, n));
                prop_assert_eq!(got, expected);
            }
        }

        #[test]
        fn mul_is_associative(x in arb_mono(), y in arb_mono(), z in arb_mono()) {
            let left = x.mul(&y).and_then(|xy| xy.mul(&z));
            let right = y.mul(&z).and_then(|yz| x.mul(&yz));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn adjoint_reverses_products(x in arb_mono(), y in arb_mono()) {
            prop_assert_eq!(x.mul(&y).map(|p| p.adjoint()), y.adjoint().mul(&x.adjoint()));
            prop_assert_eq!(x.adjoint().adjoint(), x);
        }

        #[test]
        fn expansion_preserves_action(x in arb_mono()) {
            let (a, b) = x.expand_right();
            for n in -70i64..70 {
                let got = act(&a, n).or(act(&b, n));
                prop_assert!(act(&a, n).is_none() || act(&b, n).is_none());
                prop_assert_eq!(got, act(&x, n));
            }
            prop_assert_eq!(Monomial::merge(&a, &b), Some(x));
        }
    }
}
