use serde_json::json;

use super::perm::PermUnitary;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::Word;

/// `λ_u(e)` for `e` in the Cuntz algebra, from `λ_u(S_i) = u S_i` alone.
pub fn lambda_o2(u: &Element, e: &Element) -> Result<Element> {
    if !e.membership().in_o2 {
        return Err(Error::Domain("λ_u without an image of U is only defined on the Cuntz algebra".into()));
    }
    let s = [u.mul(&Element::s(Word::letter(1))), u.mul(&Element::s(Word::letter(2)))];
    let image = |w: &Word| {
        w.letters().iter().fold(Element::one(), |acc, &l| acc.mul(&s[(l - 1) as usize]).compact())
    };
    let mut out = Element::zero();
    for (m, c) in e.canonical().terms() {
        let term = image(&m.alpha).mul(&image(&m.beta).adjoint());
        out = out.add(&term.scale(c));
    }
    Ok(out.compact())
}

#[derive(Clone, Debug)]
pub enum ProbeOutcome {
    /// `x_k = x_{k+1}` for `x_k = u_k* u* u_k`, and the common value `v`
    /// satisfies `λ_u(v) = u*`, so `λ_u ∘ λ_v = id` and `λ_u` is onto.
    Stabilized { at: usize, witness: Element },
    /// No certificate up to the given depth. `stalled_at` records an exact
    /// stabilization whose value failed the witness check.
    Inconclusive { depth: usize, stalled_at: Option<usize> },
}

impl ProbeOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ProbeOutcome::Stabilized { at, witness } => json!({
                "result": "stabilized",
                "stabilized_at": at,
                "witness": witness.to_string(),
            }),
            ProbeOutcome::Inconclusive { depth, stalled_at } => json!({
                "result": "inconclusive",
                "depth": depth,
                "stalled_at": stalled_at,
            }),
        }
    }
}

/// Semi-decision for surjectivity of `λ_u`, from `u_k = u φ(u) ... φ^{k-1}(u)`.
/// A positive answer is certified; anything else is inconclusive.
pub fn automorphism_probe(u: &PermUnitary, depth: usize) -> ProbeOutcome {
    let ue = u.element();
    let u_adj = ue.adjoint();
    let conj = |uk: &Element| uk.adjoint().mul(&u_adj).mul(uk).compact();
    let mut uk = ue.clone();
    let mut phi_k = ue.clone();
    let mut x = conj(&uk);
    let mut stalled_at = None;
    for k in 1..=depth {
        phi_k = phi_k.phi();
        uk = uk.mul(&phi_k).compact();
        let next = conj(&uk);
        if next.equals(&x) {
            let certified = lambda_o2(&ue, &x).map(|img| img.equals(&u_adj)).unwrap_or(false);
            if certified {
                return ProbeOutcome::Stabilized { at: k, witness: x };
            }
            stalled_at.get_or_insert(k);
        }
        x = next;
    }
    ProbeOutcome::Inconclusive { depth, stalled_at }
}
