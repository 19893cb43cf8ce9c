//! The canonical representation on `l^2(Z)`: `U e_k = e_{k+1}`, `S_2 e_k = e_{2k}`.
//!
//! Everything here evaluates operators pointwise on basis vectors. It is
//! deliberately independent of the symbolic normal forms in [`crate::element`]
//! so that it can serve as a cross-check for them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::scalar::Scalar;
use crate::words::{is_partition, Word};
use crate::Rational;

/// Image of `e_n` under a single monomial, or `None` if `e_n` is outside its
/// initial space.
pub fn apply_monomial(m: &Monomial, n: &BigInt) -> Option<BigInt> {
    let (la, lb) = (m.alpha.len(), m.beta.len());
    if la <= 40 && lb <= 40 {
        if let (Some(n), Some(k)) = (n.to_i64(), m.k.to_i64()) {
            let tb = i128::from(m.beta.offset_u64()?);
            let ta = i128::from(m.alpha.offset_u64()?);
            let d = i128::from(n) - tb;
            if d & ((1i128 << lb) - 1) != 0 {
                return None;
            }
            let q = (d >> lb) + i128::from(k);
            // |q| < 2^64 and la <= 40, so this cannot overflow
            return Some(BigInt::from((q << la) + ta));
        }
    }
    let d = n - BigInt::from(m.beta.offset());
    let (q, r) = d.div_mod_floor(&(BigInt::one() << lb));
    if !r.is_zero() {
        return None;
    }
    Some(((q + &m.k) << la) + BigInt::from(m.alpha.offset()))
}

/// `e e_n` as a list of `(coefficient, index)`, sorted by index, with equal
/// indices collected and zero coefficients dropped.
pub fn apply_basis<C: Scalar>(e: &Element<C>, n: &BigInt) -> Vec<(C, BigInt)> {
    let mut out: Vec<(C, BigInt)> = Vec::new();
    for (m, c) in e.terms() {
        if let Some(j) = apply_monomial(m, n) {
            out.push((c.clone(), j));
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    let mut merged: Vec<(C, BigInt)> = Vec::with_capacity(out.len());
    for (c, j) in out {
        match merged.last_mut() {
            Some(last) if last.1 == j => last.0 = last.0.clone() + c,
            _ => merged.push((c, j)),
        }
    }
    merged.retain(|(c, _)| !c.is_zero());
    merged
}

/// Decides `e1 = e2` by evaluation alone.
///
/// Let `L` be the longest `β` on either side. On each residue class
/// `r mod 2^L` every term acts as an injective affine map of the class
/// parameter, and two distinct affine maps agree in at most one point. If
/// `m` terms are active on a class, then a nonzero difference survives at all
/// but at most `m - 1` points of the class, so `max(3, m)` representatives
/// `r - 2^L, r, r + 2^L, ...` suffice.
pub fn semantic_eq<C: Scalar>(e1: &Element<C>, e2: &Element<C>) -> bool {
    let depth = e1.max_beta_len().max(e2.max_beta_len());
    assert!(depth < 48, "oracle sweep over 2^{depth} residue classes is not feasible");
    let betas: Vec<&Word> = e1.monomials().chain(e2.monomials()).map(|m| &m.beta).collect();
    let classes = 1u64 << depth;
    let check = |r: u64| {
        let active = betas
            .iter()
            .filter(|b| {
                let lb = b.len();
                let mask = if lb == 64 { u64::MAX } else { (1u64 << lb) - 1 };
                b.offset_u64() == Some(r & mask)
            })
            .count();
        let reps = active.max(3) as i64;
        (0..reps).all(|j| {
            let n = BigInt::from(r) + (BigInt::from(j - 1) << depth);
            apply_basis(e1, &n) == apply_basis(e2, &n)
        })
    };
    if classes > 256 {
        (0..classes).into_par_iter().all(check)
    } else {
        (0..classes).all(check)
    }
}

/// A dyadic angle `a/2^n` in `[0, 1)`, standing for the scalar `e^{2πi a/2^n}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase(Rational);

impl Phase {
    pub fn zero() -> Self {
        Phase(Rational::zero())
    }

    /// `numerator / 2^exp`, reduced mod 1.
    pub fn dyadic(numerator: impl Into<BigInt>, exp: u32) -> Self {
        Phase::wrap(Rational::new(numerator.into(), BigInt::one() << exp))
    }

    pub fn new(angle: Rational) -> Result<Self> {
        let den = angle.denom();
        if !(den.is_positive() && (den & (den - BigInt::one())).is_zero()) {
            return Err(Error::Domain(format!(
                "phase {angle} does not have a power-of-two denominator"
            )));
        }
        Ok(Phase::wrap(angle))
    }

    fn wrap(angle: Rational) -> Self {
        Phase(angle.clone() - angle.floor())
    }

    pub fn angle(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Phase) -> Phase {
        Phase::wrap(&self.0 + &other.0)
    }

    pub fn neg(&self) -> Phase {
        Phase::wrap(-&self.0)
    }

    /// The phase of `z^k`.
    pub fn times(&self, k: &BigInt) -> Phase {
        Phase::wrap(&self.0 * Rational::from_integer(k.clone()))
    }

    /// `n` in the reduced form `a/2^n`.
    pub fn exponent(&self) -> u64 {
        self.0.denom().bits() - 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self.to_string())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.0.numer(), self.exponent())
    }
}

impl FromStr for Phase {
    type Err = Error;

    /// Accepts `a/2^n`, `a/b` with `b` a power of two, or an integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| Error::Parse { position: 0, message: message.to_string() };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            None => (s, None),
            Some((a, b)) => (a, Some(b.trim())),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad("expected an integer numerator"))?;
        let den: BigInt = match den {
            None => BigInt::one(),
            Some(d) => match d.strip_prefix("2^") {
                Some(e) => {
                    let e: u32 = e.parse().map_err(|_| bad("expected an exponent after 2^"))?;
                    BigInt::one() << e
                }
                None => d.parse().map_err(|_| bad("expected an integer denominator"))?,
            },
        };
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Phase::new(Rational::new(num, den))
    }
}

/// A basis vector times a phase, or the zero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisVector {
    Zero,
    Vector { phase: Phase, index: BigInt },
}

impl BasisVector {
    pub fn basis(index: impl Into<BigInt>) -> Self {
        BasisVector::Vector { phase: Phase::zero(), index: index.into() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            BasisVector::Zero => json!("zero"),
            BasisVector::Vector { phase, index } => json!({
                "phase": phase.to_string(),
                "index": crate::element::bigint_json(index),
            }),
        }
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisVector::Zero => f.write_str("zero"),
            BasisVector::Vector { phase, index } if phase.is_zero() => write!(f, "e_{index}"),
            BasisVector::Vector { phase, index } => write!(f, "exp(2πi·{phase}) e_{index}"),
        }
    }
}

/// Letters of a generator word. `Uz` with no phase uses the phase passed
/// to [`phase_apply`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    U,
    UAdj,
    S1,
    S1Adj,
    S2,
    S2Adj,
    Uz(Option<Phase>),
    UzAdj(Option<Phase>),
}

/// Parses whitespace-separated generators such as `Uz[1/4] U S2*`.
/// `Uz*[a]` and `Uz[a]*` are both accepted.
pub fn parse_generators(text: &str) -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for token in text.split_whitespace() {
        let position = text[offset..].find(token).map_or(offset, |p| offset + p);
        offset = position + token.len();
        let bad = || Error::Parse { position, message: format!("unknown generator '{token}'") };
        let g = match token {
            "U" => Generator::U,
            "U*" => Generator::UAdj,
            "S1" => Generator::S1,
            "S1*" => Generator::S1Adj,
            "S2" => Generator::S2,
            "S2*" => Generator::S2Adj,
            "Uz" => Generator::Uz(None),
            "Uz*" => Generator::UzAdj(None),
            _ => {
                let rest = token.strip_prefix("Uz").ok_or_else(bad)?;
                let (adj_before, rest) = match rest.strip_prefix('*') {
                    Some(r) => (true, r),
                    None => (false, rest),
                };
                let (rest, adj_after) = match rest.strip_suffix('*') {
                    Some(r) => (r, true),
                    None => (rest, false),
                };
                let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
                let phase: Phase = inner.parse().map_err(|e| match e {
                    Error::Parse { message, .. } => Error::Parse { position, message },
                    other => other,
                })?;
                if adj_before && adj_after {
                    return Err(bad());
                }
                if adj_before || adj_after {
                    Generator::UzAdj(Some(phase))
                } else {
                    Generator::Uz(Some(phase))
                }
            }
        };
        out.push(g);
    }
    Ok(out)
}

/// Applies the operator product `g_1 g_2 ... g_m` (rightmost first) to `e_k`.
pub fn phase_apply(z: &Phase, word: &[Generator], k: impl Into<BigInt>) -> BasisVector {
    let mut phase = Phase::zero();
    let mut n: BigInt = k.into();
    for g in word.iter().rev() {
        match g {
            Generator::U => n += 1,
            Generator::UAdj => n -= 1,
            Generator::S2 => n <<= 1,
            Generator::S1 => n = (n << 1) + 1,
            Generator::S2Adj | Generator::S1Adj => {
                let odd = n.is_odd();
                if odd != matches!(g, Generator::S1Adj) {
                    return BasisVector::Zero;
                }
                n = n.div_floor(&BigInt::from(2));
            }
            Generator::Uz(a) => phase = phase.add(&a.as_ref().unwrap_or(z).times(&n)),
            Generator::UzAdj(a) => phase = phase.add(&a.as_ref().unwrap_or(z).times(&n).neg()),
        }
    }
    BasisVector::Vector { phase, index: n }
}

/// `V = Σ_i e^{2πi θ_i} S_{α_i} U^{k_i} S_{β_i}*` with `{α_i}` and `{β_i}`
/// both complete prefix-free families, so that `V` sends each basis vector to
/// a phase times a basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedPermutative {
    terms: Vec<(Phase, Monomial)>,
}

impl DecoratedPermutative {
    pub fn new(terms: Vec<(Phase, Monomial)>) -> Result<Self> {
        if !is_partition(terms.iter().map(|(_, m)| &m.alpha))
            || !is_partition(terms.iter().map(|(_, m)| &m.beta))
        {
            return Err(Error::Domain(
                "the ranges and the domains of the terms must both form complete prefix-free families".into(),
            ));
        }
        Ok(DecoratedPermutative { terms })
    }

    /// Decorates the terms of a unitary element of the group `W`.
    pub fn from_element(e: &Element, phases: impl Fn(&Monomial) -> Phase) -> Result<Self> {
        if !e.is_unitary() {
            return Err(Error::Domain("element is not a unitary of the form Σ S_α U^k S_β*".into()));
        }
        DecoratedPermutative::new(e.terms().map(|(m, _)| (phases(m), m.clone())).collect())
    }

    pub fn terms(&self) -> &[(Phase, Monomial)] {
        &self.terms
    }

    pub fn apply(&self, n: &BigInt) -> BasisVector {
        for (phase, m) in &self.terms {
            if let Some(index) = apply_monomial(m, n) {
                return BasisVector::Vector { phase: phase.clone(), index };
            }
        }
        unreachable!("the domains form a complete family, so some term is active")
    }
}

/// A locally constant phase function: the diagonal unitary
/// `Σ_w e^{2πi θ_w} P_w` over a complete prefix-free family of leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafPhases {
    leaves: Vec<(Word, Phase)>,
}

impl LeafPhases {
    pub fn constant(phase: Phase) -> Self {
        LeafPhases { leaves: vec![(Word::empty(), phase)] }
    }

    pub fn leaves(&self) -> &[(Word, Phase)] {
        &self.leaves
    }

    pub fn is_trivial(&self) -> bool {
        self.leaves.iter().all(|(_, p)| p.is_zero())
    }

    /// The phase of the leaf containing `e_n`.
    pub fn phase_at(&self, n: &BigInt) -> &Phase {
        self.leaves
            .iter()
            .find(|(w, _)| apply_monomial(&Monomial::projection(w.clone()), n).is_some())
            .map(|(_, p)| p)
            .expect("leaves form a complete family")
    }

    /// Merges sibling leaves carrying the same phase until none are left.
    fn coarsen(mut leaves: Vec<(Word, Phase)>) -> Vec<(Word, Phase)> {
        loop {
            leaves.sort();
            let pair = leaves.windows(2).position(|p| {
                p[0].0.len() == p[1].0.len()
                    && p[0].0.last() == Some(1)
                    && p[0].0.parent() == p[1].0.parent()
                    && p[0].1 == p[1].1
            });
            match pair {
                None => return leaves,
                Some(i) => {
                    let parent = leaves[i].0.parent().expect("nonempty leaf");
                    let phase = leaves[i].1.clone();
                    leaves.splice(i..i + 2, [(parent, phase)]);
                }
            }
        }
    }
}

/// Splits `V = d P` with `d` diagonal and `P` a permutative unitary.
///
/// `P` keeps the monomials of `V` without phases (then compacted), and `d`
/// gives each range leaf `α_i` the phase of its term. Since `P` is determined
/// by where `V` sends each basis vector and `d` by the phases it picks up,
/// the factorization does not depend on how `V` was presented.
pub fn dp_split(v: &DecoratedPermutative) -> (LeafPhases, Element) {
    let p = Element::sum_of(v.terms.iter().map(|(_, m)| m.clone())).compact();
    let leaves = v.terms.iter().map(|(ph, m)| (m.alpha.clone(), ph.clone())).collect();
    (LeafPhases { leaves: LeafPhases::coarsen(leaves) }, p)
}

/// `d P e_n`, for checking a split against the original.
pub fn recompose_apply(d: &LeafPhases, p: &Element, n: &BigInt) -> BasisVector {
    match apply_basis(p, n).as_slice() {
        [] => BasisVector::Zero,
        [(c, j)] if c.is_one() => BasisVector::Vector { phase: d.phase_at(j).clone(), index: j.clone() },
        _ => panic!("P is not permutative"),
    }
}
