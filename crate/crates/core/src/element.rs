//! Finite formal sums `Σ c_i S_{α_i} U^{k_i} S_{β_i}*`.
//!
//! Terms are kept collected in a sorted map, so iteration order is
//! deterministic. Operator equality is decided symbolically: both sides are
//! expanded until every `β` has the same length `L`, and at a common depth
//! distinct monomials are linearly independent operators, so the expanded
//! term maps agree iff the operators agree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::scalar::Scalar;
use crate::words::{is_partition, Word};
use crate::Rational;

/// Products with more term pairs than this are computed in parallel.
const PAR_MUL_THRESHOLD: usize = 4096;

#[derive(Clone, Debug)]
pub struct Element<C: Scalar = Rational> {
    terms: BTreeMap<Monomial, C>,
}

/// Subalgebra membership of a sum, read off termwise from its canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    /// Cuntz algebra: every charge vanishes.
    pub in_o2: bool,
    /// Bunce-Deddens (gauge-invariant) part: `|α| = |β|` in every term.
    pub in_qt: bool,
    /// UHF core: both of the above.
    pub in_f2: bool,
    /// Diagonal: UHF core and `α = β` in every term.
    pub in_d2: bool,
}

/// `e = Σ_j p_j U^{n_j}` with diagonal projections `p_j`.
#[derive(Clone, Debug)]
pub struct PutnamForm<C: Scalar = Rational> {
    pub parts: Vec<(Element<C>, BigInt)>,
}

impl<C: Scalar> Default for Element<C> {
    fn default() -> Self {
        Element::zero()
    }
}

impl<C: Scalar> Element<C> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Element::from_monomial(Monomial::identity())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, C::one());
        Element { terms }
    }

    /// Collects `(coefficient, monomial)` pairs, dropping zero sums.
    pub fn from_terms<I: IntoIterator<Item = (C, Monomial)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (c, m) in terms {
            e.add_term(m, c);
        }
        e
    }

    /// Sum of monomials with coefficient one.
    pub fn sum_of<I: IntoIterator<Item = Monomial>>(monomials: I) -> Self {
        Element::from_terms(monomials.into_iter().map(|m| (C::one(), m)))
    }

    pub fn u_power(k: impl Into<BigInt>) -> Self {
        Element::from_monomial(Monomial::u_power(k))
    }

    pub fn s(w: Word) -> Self {
        Element::from_monomial(Monomial::s(w))
    }

    pub fn s_adj(w: Word) -> Self {
        Element::from_monomial(Monomial::s_adj(w))
    }

    pub fn projection(w: Word) -> Self {
        Element::from_monomial(Monomial::projection(w))
    }

    /// The flip `f = S_1 S_2* + S_2 S_1*`.
    pub fn flip() -> Self {
        Element::sum_of([
            Monomial::new(Word::letter(1), 0, Word::letter(2)),
            Monomial::new(Word::letter(2), 0, Word::letter(1)),
        ])
    }

    /// `F = Σ_{i,j} S_i S_j S_i* S_j*`, the unitary implementing the canonical endomorphism.
    pub fn big_f() -> Self {
        Element::sum_of(Word::all_of_length(2).into_iter().map(|w| {
            let swapped = Word::from_letters(vec![w.letters()[1], w.letters()[0]]);
            Monomial::new(w, 0, swapped)
        }))
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Number of stored terms; not invariant under rewriting.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single monomial with coefficient one, if that is what this is.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn map_coeffs<D: Scalar, F: Fn(&C) -> D>(&self, f: F) -> Element<D> {
        Element::from_terms(self.terms.iter().map(|(m, c)| (f(c), m.clone())))
    }

    pub fn add(&self, other: &Element<C>) -> Element<C> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element<C>) -> Element<C> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element<C> {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Element<C> {
        Element::from_terms(self.terms.iter().map(|(m, x)| (x.clone() * c.clone(), m.clone())))
    }

    pub fn mul(&self, other: &Element<C>) -> Element<C> {
        if self.len() * other.len() > PAR_MUL_THRESHOLD {
            let lhs: Vec<_> = self.terms.iter().collect();
            let partials: Vec<Element<C>> = lhs
                .par_iter()
                .map(|(m1, c1)| {
                    let mut part = Element::zero();
                    for (m2, c2) in &other.terms {
                        if let Some(p) = m1.mul(m2) {
                            part.add_term(p, (*c1).clone() * c2.clone());
                        }
                    }
                    part
                })
                .collect();
            let mut out = Element::zero();
            for part in partials {
                for (m, c) in part.terms {
                    out.add_term(m, c);
                }
            }
            return out;
        }
        let mut out = Element::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(p) = m1.mul(m2) {
                    out.add_term(p, c1.clone() * c2.clone());
                }
            }
        }
        out
    }

    /// `e^n` for `n >= 0`.
    pub fn pow(&self, mut n: u64) -> Element<C> {
        let mut base = self.clone();
        let mut acc = Element::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).compact();
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).compact();
            }
        }
        acc
    }

    /// Adjoint. Coefficients are taken to be real.
    pub fn adjoint(&self) -> Element<C> {
        Element::from_terms(self.terms.iter().map(|(m, c)| (c.clone(), m.adjoint())))
    }

    /// The canonical endomorphism `x ↦ S_1 x S_1* + S_2 x S_2*`.
    pub fn phi(&self) -> Element<C> {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            for l in [1u8, 2] {
                let lw = Word::letter(l);
                out.add_term(
                    Monomial { alpha: lw.concat(&m.alpha), k: m.k.clone(), beta: lw.concat(&m.beta) },
                    c.clone(),
                );
            }
        }
        out
    }

    pub fn max_beta_len(&self) -> usize {
        self.terms.keys().map(|m| m.beta.len()).max().unwrap_or(0)
    }

    /// Expands every term with [`Monomial::expand_right`] until all `β` have
    /// length `depth` (default: the current maximum) and collects.
    pub fn normalize(&self, depth: Option<usize>) -> Result<Element<C>> {
        let max = self.max_beta_len();
        let depth = depth.unwrap_or(max);
        if depth < max {
            return Err(Error::Domain(format!(
                "normalization depth {depth} is below the longest co-isometry word ({max})"
            )));
        }
        Ok(self.normalize_unchecked(depth))
    }

    pub(crate) fn normalize_unchecked(&self, depth: usize) -> Element<C> {
        let mut out = Element::zero();
        let mut stack: Vec<Monomial> = Vec::new();
        for (m, c) in &self.terms {
            stack.push(m.clone());
            while let Some(x) = stack.pop() {
                if x.beta.len() >= depth {
                    out.add_term(x, c.clone());
                } else {
                    let (a, b) = x.expand_right();
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }

    /// The form at the minimal common co-isometry depth.
    pub fn canonical(&self) -> Element<C> {
        self.normalize_unchecked(self.max_beta_len())
    }

    /// Operator equality.
    pub fn equals(&self, other: &Element<C>) -> bool {
        let depth = self.max_beta_len().max(other.max_beta_len());
        self.normalize_unchecked(depth).terms == other.normalize_unchecked(depth).terms
    }

    /// Greedily undoes expansions: merges pairs of terms with equal
    /// coefficients that are the two halves of a single monomial. The result
    /// is operator-equal to `self` and usually much shorter.
    pub fn compact(&self) -> Element<C> {
        let mut terms = self.terms.clone();
        loop {
            let mut merged: Option<(Monomial, Monomial, Monomial)> = None;
            for (left, c) in &terms {
                let Some(right) = merge_partner(left) else { continue };
                if terms.get(&right) == Some(c) {
                    let m = Monomial::merge(left, &right).expect("partner merges");
                    merged = Some((left.clone(), right, m));
                    break;
                }
            }
            let Some((left, right, m)) = merged else { break };
            let c = terms.remove(&left).expect("present");
            terms.remove(&right);
            let mut e = Element { terms };
            e.add_term(m, c);
            terms = e.terms;
        }
        Element { terms }
    }

    /// Membership in the extended Thompson group: after normalization every
    /// coefficient is one and both the `α`s and the `β`s form complete
    /// prefix-free families. For such sums this is equivalent to unitarity.
    pub fn is_unitary(&self) -> bool {
        let canon = self.canonical();
        if canon.is_zero() || !canon.terms.values().all(|c| c.is_one()) {
            return false;
        }
        is_partition(canon.terms.keys().map(|m| &m.alpha))
            && is_partition(canon.terms.keys().map(|m| &m.beta))
    }

    /// Checks `e e* = 1 = e* e` directly.
    pub fn satisfies_unitary_relations(&self) -> bool {
        let one = Element::one();
        let adj = self.adjoint();
        self.mul(&adj).equals(&one) && adj.mul(self).equals(&one)
    }

    pub fn membership(&self) -> Membership {
        let canon = self.canonical();
        let in_o2 = canon.terms.keys().all(|m| m.k.is_zero());
        let in_qt = canon.terms.keys().all(|m| m.is_gauge_invariant());
        let in_f2 = in_o2 && in_qt;
        let in_d2 = in_f2 && canon.terms.keys().all(|m| m.alpha == m.beta);
        Membership { in_o2, in_qt, in_f2, in_d2 }
    }

    fn require_unitary(&self, what: &str) -> Result<()> {
        if self.is_unitary() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} requires a unitary of the extended Thompson group")))
        }
    }

    /// Rewrites a gauge-invariant unitary as `Σ p_j U^{n_j}`. A term
    /// `S_α U^k S_β*` with `|α| = |β| = m` equals `P_α U^{t(α) - t(β) + 2^m k}`.
    pub fn putnam_form(&self) -> Result<PutnamForm<C>> {
        self.require_unitary("the Putnam form")?;
        if !self.membership().in_qt {
            return Err(Error::Domain("the Putnam form requires a gauge-invariant element".into()));
        }
        let canon = self.canonical();
        let mut by_exponent: BTreeMap<BigInt, Element<C>> = BTreeMap::new();
        for m in canon.terms.keys() {
            let n = BigInt::from(m.alpha.offset()) - BigInt::from(m.beta.offset())
                + (&m.k << m.beta.len());
            by_exponent
                .entry(n)
                .or_default()
                .add_term(Monomial::projection(m.alpha.clone()), C::one());
        }
        Ok(PutnamForm { parts: by_exponent.into_iter().map(|(n, p)| (p.compact(), n)).collect() })
    }

    /// Splits `Σ S_{α_i} U^{k_i} S_{β_i}*` as
    /// `(Σ S_{α_i} U^{k_i} S_{α_i}*) · (Σ S_{α_j} S_{β_j}*)`, read at `depth`
    /// (default: canonical depth).
    pub fn bd_v_factor(&self, depth: Option<usize>) -> Result<(Element<C>, Element<C>)> {
        self.require_unitary("the diagonal/permutation factorization")?;
        let form = self.normalize(depth)?;
        let mut bd = Element::zero();
        let mut v = Element::zero();
        for m in form.terms.keys() {
            bd.add_term(Monomial::new(m.alpha.clone(), m.k.clone(), m.alpha.clone()), C::one());
            v.add_term(Monomial::new(m.alpha.clone(), 0, m.beta.clone()), C::one());
        }
        Ok((bd.compact(), v.compact()))
    }

    /// Sum of the charges of the canonical form.
    pub fn total_charge(&self) -> Result<BigInt> {
        self.require_unitary("the total charge")?;
        Ok(self.canonical().terms.keys().map(|m| m.k.clone()).sum())
    }

    /// `e^{-1}` for unitaries of the extended Thompson group, otherwise an error.
    pub fn inverse(&self) -> Result<Element<C>> {
        self.require_unitary("inversion")?;
        Ok(self.adjoint())
    }

    /// `e^k` for any integer `k`, with negative powers through the adjoint.
    pub fn power(&self, k: &BigInt) -> Result<Element<C>> {
        use num_traits::{Signed, ToPrimitive};
        let n = k
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Capacity(format!("exponent {k} too large")))?;
        if k.is_negative() {
            Ok(self.inverse()?.pow(n))
        } else {
            Ok(self.pow(n))
        }
    }
}

/// The monomial that [`Monomial::merge`] would pair with `left`.
fn merge_partner(left: &Monomial) -> Option<Monomial> {
    if left.alpha.last() != Some(1) {
        return None;
    }
    let alpha = left.alpha.parent()?.push(2);
    let beta_parent = left.beta.parent()?;
    match left.beta.last()? {
        1 => Some(Monomial { alpha, k: left.k.clone(), beta: beta_parent.push(2) }),
        _ => Some(Monomial { alpha, k: &left.k + 1, beta: beta_parent.push(1) }),
    }
}

impl<C: Scalar> PartialEq for Element<C> {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<C: Scalar> From<Monomial> for Element<C> {
    fn from(m: Monomial) -> Self {
        Element::from_monomial(m)
    }
}

impl<C: Scalar> PutnamForm<C> {
    /// `Σ_j p_j U^{n_j}`.
    pub fn reassemble(&self) -> Element<C> {
        self.parts.iter().fold(Element::zero(), |acc, (p, n)| {
            acc.add(&p.mul(&Element::u_power(n.clone())))
        })
    }

    /// `(Σ_j p_j = 1, Σ_j U^{-n_j} p_j U^{n_j} = 1)`.
    pub fn partition_conditions(&self) -> (bool, bool) {
        let one = Element::one();
        let sum = self.parts.iter().fold(Element::zero(), |acc, (p, _)| acc.add(p));
        let shifted = self.parts.iter().fold(Element::zero(), |acc, (p, n)| {
            let ad = Element::u_power(-n).mul(p).mul(&Element::u_power(n.clone()));
            acc.add(&ad)
        });
        (sum.equals(&one), shifted.equals(&one))
    }
}

impl<C: Scalar + fmt::Display + PartialOrd> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = *c < C::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// One row of the JSON export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub alpha: String,
    pub k: serde_json::Value,
    pub beta: String,
}

impl Element<Rational> {
    /// `[{coeff: "p/q", alpha: "word", k: int, beta: "word"}, ...]`
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                alpha: m.alpha.to_string(),
                k: bigint_json(&m.k),
                beta: m.beta.to_string(),
            })
            .collect();
        serde_json::to_value(rows).expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let rows: Vec<TermJson> = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse { position: 0, message: e.to_string() })?;
        let mut out = Element::zero();
        for row in rows {
            let coeff: Rational = row
                .coeff
                .parse()
                .map_err(|_| Error::Parse { position: 0, message: format!("bad coefficient {}", row.coeff) })?;
            let k = bigint_from_json(&row.k)?;
            out.add_term(Monomial::new(row.alpha.parse()?, k, row.beta.parse()?), coeff);
        }
        Ok(out)
    }
}

/// Integers go out as JSON numbers when they fit in 64 bits, as strings otherwise.
pub fn bigint_json(k: &BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match k.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(k.to_string()),
    }
}

/// Inverse of [`bigint_json`]; also accepts numeric strings.
pub fn bigint_from_json(value: &serde_json::Value) -> Result<BigInt> {
    let text = match value {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.clone(),
        other => return Err(Error::Parse { position: 0, message: format!("expected an integer, got {other}") }),
    };
    text.parse()
        .map_err(|_| Error::Parse { position: 0, message: format!("expected an integer, got {text}") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;
    use num_traits::One;

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    fn big_f() -> Element {
        el("S[11] S*[11] + S[12] S*[21] + S[21] S*[12] + S[22] S*[22]")
    }

    #[test]
    fn normalize_examples() {
        let u = el("U").normalize(Some(1)).unwrap();
        assert_eq!(u.terms, el("S[1] S*[2] + S[2] U S*[1]").terms);

        let cuntz = el("S[2] S*[2] + S[1] S*[1]");
        let at1 = cuntz.normalize(Some(1)).unwrap();
        assert_eq!(at1.terms, cuntz.terms);
        assert_eq!(at1.terms, Element::one().normalize(Some(1)).unwrap().terms);

        let f = big_f();
        assert_eq!(f.normalize(Some(2)).unwrap().terms, f.terms);
        assert!(matches!(f.normalize(Some(1)), Err(Error::Domain(_))));
    }

    #[test]
    fn arithmetic_examples() {
        assert!(el("U U*").equals(&Element::one()));
        assert!(big_f().mul(&big_f()).equals(&Element::one()));
        assert!(el("U").equals(&el("S[1] S*[2] + S[2] U S*[1]")));
        assert!(!el("U").equals(&el("U*")));
        assert!(el("U U").equals(&el("S[1] U S*[1] + S[2] U S*[2]")));
        assert!(el("2*U - U").equals(&el("U")));
        assert!(el("U - U").is_zero());
    }

    #[test]
    fn unitary_examples() {
        assert!(big_f().is_unitary());
        assert!(el("U").is_unitary());
        assert!(!el("S[2]").is_unitary());
        assert!(!el("2*U").is_unitary());
        assert!(!el("0").is_unitary());
        // overlapping identical monomials collect before the partition test
        assert!(!el("S[1] S*[1] + S[1] S*[1] + S[2] S*[2]").is_unitary());
        assert!(el("S[1] S*[1] + 1/2*S[2] S*[2] + 1/2*S[2] S*[2]").is_unitary());
    }

    #[test]
    fn unitary_test_agrees_with_relations() {
        for s in ["U", "S[1] S*[2] + S[2] S*[1]", "S[1] U^3 S*[22] + S[2] S*[21] + 0*U", "S[2]", "U + S[1]"] {
            let e = el(s);
            assert_eq!(e.is_unitary(), e.satisfies_unitary_relations(), "{s}");
        }
        assert!(el("-1").satisfies_unitary_relations() && !el("-1").is_unitary());
    }

    #[test]
    fn membership_examples() {
        let all = |a, b, c, d| Membership { in_o2: a, in_qt: b, in_f2: c, in_d2: d };
        assert_eq!(big_f().membership(), all(true, true, true, false));
        assert_eq!(el("U").membership(), all(false, true, false, false));
        assert_eq!(el("P[12]").membership(), all(true, true, true, true));
        assert_eq!(el("S[1] S*[2] + S[2] S*[1]").membership(), all(true, true, true, false));
        assert_eq!(el("S[1] S*[21] + S[21] S*[22] + S[22] S*[1]").membership(), all(true, false, false, false));
    }

    #[test]
    fn putnam_examples() {
        let pf = el("U").putnam_form().unwrap();
        assert_eq!(pf.parts.len(), 1);
        assert!(pf.parts[0].0.equals(&Element::one()) && pf.parts[0].1 == BigInt::from(1));

        let pf = el("S[2] U S*[2] + S[1] S*[1]").putnam_form().unwrap();
        let got: Vec<(String, BigInt)> = pf.parts.iter().map(|(p, n)| (p.to_string(), n.clone())).collect();
        assert_eq!(got, vec![("S[1] S*[1]".to_string(), 0.into()), ("S[2] S*[2]".to_string(), 2.into())]);

        // S_12 S_21* sends e_{4m+2} to e_{4m+1}: a shift by -1 on the range P_12
        let pf = big_f().putnam_form().unwrap();
        let got: Vec<(String, BigInt)> = pf.parts.iter().map(|(p, n)| (p.to_string(), n.clone())).collect();
        assert_eq!(
            got,
            vec![
                ("S[12] S*[12]".to_string(), (-1).into()),
                ("S[11] S*[11] + S[22] S*[22]".to_string(), 0.into()),
                ("S[21] S*[21]".to_string(), 1.into()),
            ]
        );
        assert_eq!(pf.partition_conditions(), (true, true));
        assert!(pf.reassemble().equals(&big_f()));

        assert!(matches!(el("S[1] S*[21] + S[21] S*[22] + S[22] S*[1]").putnam_form(), Err(Error::Domain(_))));
        assert!(matches!(el("S[1]").putnam_form(), Err(Error::Domain(_))));
    }

    #[test]
    fn factor_examples() {
        let (bd, v) = big_f().bd_v_factor(None).unwrap();
        assert!(bd.equals(&Element::one()) && v.equals(&big_f()));

        let (bd, v) = el("U").bd_v_factor(Some(1)).unwrap();
        assert!(bd.equals(&el("S[1] S*[1] + S[2] U S*[2]")));
        assert!(v.equals(&Element::flip()));
        assert!(bd.mul(&v).equals(&el("U")));

        let diag = el("S[1] U^3 S*[1] + S[2] U^-2 S*[2]");
        let (bd, v) = diag.bd_v_factor(None).unwrap();
        assert!(bd.equals(&diag) && v.equals(&Element::one()));
        assert!(matches!(el("S[1]").bd_v_factor(None), Err(Error::Domain(_))));
    }

    #[test]
    fn charge_examples() {
        assert_eq!(big_f().total_charge().unwrap(), BigInt::zero());
        assert_eq!(el("U").total_charge().unwrap(), BigInt::one());
        assert_eq!(el("U").normalize(Some(1)).unwrap().total_charge().unwrap(), BigInt::one());
        for n in -9i64..=9 {
            let un = el("U").power(&BigInt::from(n)).unwrap();
            assert!(un.equals(&Element::u_power(n)));
            assert_eq!(un.total_charge().unwrap(), BigInt::from(n));
        }
    }

    #[test]
    fn compact_recovers_short_forms() {
        assert_eq!(big_f().mul(&big_f()).compact().to_string(), "1");
        assert_eq!(el("U").normalize(Some(4)).unwrap().compact().to_string(), "U");
        assert_eq!(el("U^-7").normalize(Some(3)).unwrap().compact().to_string(), "U^-7");
    }

    #[test]
    fn display_and_json() {
        let e = el("3/2*S[112] U^3 S*[21] - U^-4 + S[2]");
        assert_eq!(e.to_string(), "-U^-4 + 3/2*S[112] U^3 S*[21] + S[2]");
        let back = Element::from_json(&e.to_json()).unwrap();
        assert_eq!(back.terms, e.terms);
        assert_eq!(e.to_json()[0]["alpha"], "e");
    }

    #[test]
    fn generic_scalars_agree() {
        let f = big_f();
        let fi: Element<BigInt> = f.map_coeffs(|c| c.to_integer());
        let ff: Element<f64> = f.map_coeffs(|c| if c.is_one() { 1.0 } else { 0.0 });
        assert!(fi.mul(&fi).equals(&Element::one()));
        assert!(ff.mul(&ff).equals(&Element::one()));
        assert!(fi.is_unitary() && ff.is_unitary());
        assert_eq!(fi.membership(), f.membership());
    }
}
