//! Permutative endomorphisms `λ_u(S_i) = u S_i` of the Cuntz algebra and
//! their extensions to the whole algebra.
//!
//! `λ_u` extends with `λ(U) = Ũ` iff, writing `S̃_i = u S_i`,
//!
//! ```text
//! (ext1)  Ũ S̃_2 = S̃_1        (ext2)  Ũ S̃_1 = S̃_2 Ũ
//! ```
//!
//! Candidates for `Ũ` come from a finite menu ([`u_templates`]); both
//! equations are decided exactly by [`check_extension`].

mod construct;
mod enumerate;
mod perm;
mod probe;
mod table;
mod templates;

pub use construct::{
    f_tower, make_inner_phi, make_u_blocks, make_u_p, make_u_sigma, mixed_family, pure_family, Sign,
    Sigma,
};
pub use enumerate::{classify, enumerate_extendible, template_family, Classification, Mode};
pub use perm::PermUnitary;
pub use probe::{automorphism_probe, lambda_o2, ProbeOutcome};
pub use table::{parse_table, verify_table, RowOutcome, TableReport, TableRow, LEVEL3_TABLE, LEVEL3_TABLE_RAW};
pub use templates::{template_by_name, u_templates, Template, TemplateKind};

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::Word;

/// Outcome of the two extension equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtCheck {
    pub ext1: bool,
    pub ext2: bool,
}

impl ExtCheck {
    pub fn holds(&self) -> bool {
        self.ext1 && self.ext2
    }
}

/// Evaluates both extension equations for `λ_u` and the candidate `Ũ`.
pub fn check_extension_detail(u: &Element, u_tilde: &Element) -> Result<ExtCheck> {
    if !u_tilde.is_unitary() {
        return Err(Error::Domain("the candidate image of U must be a unitary of W".into()));
    }
    Ok(check_unchecked(u, u_tilde))
}

pub(crate) fn check_unchecked(u: &Element, u_tilde: &Element) -> ExtCheck {
    let s1 = u.mul(&Element::s(Word::letter(1)));
    let s2 = u.mul(&Element::s(Word::letter(2)));
    let ext1 = u_tilde.mul(&s2).equals(&s1);
    let ext2 = u_tilde.mul(&s1).equals(&s2.mul(u_tilde));
    ExtCheck { ext1, ext2 }
}

pub fn check_extension(u: &PermUnitary, u_tilde: &Element) -> Result<bool> {
    Ok(check_extension_detail(&u.element(), u_tilde)?.holds())
}

/// A permutation unitary together with a candidate image of `U`.
#[derive(Clone, Debug)]
pub struct ExtendedEndo {
    pub u: PermUnitary,
    pub u_tilde: Element,
    pub verified: bool,
}

impl ExtendedEndo {
    /// Runs [`check_extension`] and records the outcome.
    pub fn new(u: PermUnitary, u_tilde: Element) -> Result<Self> {
        let verified = check_extension(&u, &u_tilde)?;
        Ok(ExtendedEndo { u, u_tilde, verified })
    }

    /// The image of an arbitrary element under the extension
    /// `S_2 ↦ u S_2`, `U ↦ Ũ`, `S_1 = U S_2 ↦ Ũ u S_2`.
    pub fn apply(&self, e: &Element) -> Result<Element> {
        lambda_apply(self, e)
    }
}

/// See [`ExtendedEndo::apply`]; refuses unverified pairs.
pub fn lambda_apply(endo: &ExtendedEndo, e: &Element) -> Result<Element> {
    if !endo.verified {
        return Err(Error::Domain("the extension equations do not hold for this pair".into()));
    }
    let u = endo.u.element();
    let s2 = u.mul(&Element::s(Word::letter(2)));
    let s1 = endo.u_tilde.mul(&s2);
    let mut word_images: HashMap<Word, Element> = HashMap::new();
    let mut powers: HashMap<BigInt, Element> = HashMap::new();
    let mut image_of_word = |w: &Word| -> Element {
        word_images
            .entry(w.clone())
            .or_insert_with(|| {
                w.letters().iter().fold(Element::one(), |acc, &l| {
                    acc.mul(if l == 1 { &s1 } else { &s2 }).compact()
                })
            })
            .clone()
    };
    let mut out = Element::zero();
    for (m, c) in e.terms() {
        let power = match powers.get(&m.k) {
            Some(p) => p.clone(),
            None => {
                let p = endo.u_tilde.power(&m.k)?;
                powers.insert(m.k.clone(), p.clone());
                p
            }
        };
        let term = image_of_word(&m.alpha).mul(&power).mul(&image_of_word(&m.beta).adjoint());
        out = out.add(&term.scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    #[test]
    fn check_examples() {
        let u123 = PermUnitary::parse_cycles(2, "(1 2 3)").unwrap();
        let u134 = PermUnitary::parse_cycles(2, "(1 3 4)").unwrap();
        let tilde = el("U^2 P[2] + U^-2 P[1]");
        assert!(check_extension(&u123, &tilde).unwrap());
        let d = check_extension_detail(&u134.element(), &tilde).unwrap();
        assert_eq!(d, ExtCheck { ext1: true, ext2: false });
        assert!(check_extension(&PermUnitary::identity(1), &el("U")).unwrap());
        assert!(matches!(check_extension(&u123, &el("P[1]")), Err(Error::Domain(_))));
    }

    #[test]
    fn lambda_apply_examples() {
        let id = ExtendedEndo::new(PermUnitary::identity(1), el("U")).unwrap();
        for s in ["U^3 S[12] S*[2]", "f", "1/2*S[1] U^-1 + P[21]"] {
            assert!(lambda_apply(&id, &el(s)).unwrap().equals(&el(s)));
        }
        let f = PermUnitary::from_element(&el("F")).unwrap();
        let phi = ExtendedEndo::new(f, el("U^2")).unwrap();
        assert!(phi.verified);
        for s in ["S1", "S2", "U", "S[12] U^-3 S*[2]"] {
            assert!(lambda_apply(&phi, &el(s)).unwrap().equals(&el(s).phi()));
        }
        let bogus = ExtendedEndo::new(f_perm(), el("U")).unwrap();
        assert!(!bogus.verified);
        assert!(lambda_apply(&bogus, &el("U")).is_err());
    }

    fn f_perm() -> PermUnitary {
        PermUnitary::from_element(&Element::flip()).unwrap()
    }
}
