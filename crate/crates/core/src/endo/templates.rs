use std::fmt;

use num_bigint::BigInt;

use super::perm::{nth_permutation, PermUnitary};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TemplateKind {
    /// `U^{±2^{k-1}}`
    Pure { plus: bool },
    /// Variant 1: `φ^h(P_1) U^{2^{k-1}} + φ^h(P_2) U^{-2^{k-1}}`;
    /// variant 2 swaps `P_1` and `P_2`.
    Mixed { h: usize, variant: u8 },
    /// `p U p*`, or `p U* p*` when `adjoint`, for `p` of level `k - 1`.
    Inner { p: PermUnitary, adjoint: bool },
}

/// A candidate image of `U` for level-`k` permutation unitaries.
#[derive(Clone, Debug)]
pub struct Template {
    pub level: usize,
    pub name: String,
    pub kind: TemplateKind,
    pub element: Element,
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.element)
    }
}

fn half_power(k: usize) -> BigInt {
    BigInt::from(1) << (k - 1)
}

fn phi_power(e: &Element, h: usize) -> Element {
    (0..h).fold(e.clone(), |acc, _| acc.phi())
}

impl Template {
    pub fn pure(k: usize, plus: bool) -> Template {
        let n = half_power(k);
        let element = Element::u_power(if plus { n } else { -n });
        let name = if plus { "plus" } else { "minus" }.to_string();
        Template { level: k, name, kind: TemplateKind::Pure { plus }, element }
    }

    pub fn mixed(k: usize, h: usize, variant: u8) -> Result<Template> {
        if k < 2 || h > k - 2 || !(variant == 1 || variant == 2) {
            return Err(Error::Domain(format!(
                "mixed templates need k >= 2, 0 <= h <= k-2 and variant 1 or 2 (got k={k}, h={h}, variant={variant})"
            )));
        }
        let (plus, minus) = if variant == 1 { (1, 2) } else { (2, 1) };
        let n = half_power(k);
        let element = phi_power(&Element::projection(Word::letter(plus)), h)
            .mul(&Element::u_power(n.clone()))
            .add(&phi_power(&Element::projection(Word::letter(minus)), h).mul(&Element::u_power(-n)));
        Ok(Template { level: k, name: format!("mixed{variant}:{h}"), kind: TemplateKind::Mixed { h, variant }, element })
    }

    pub fn inner(k: usize, p: &PermUnitary, adjoint: bool) -> Result<Template> {
        if k < 2 || p.level() != k - 1 {
            return Err(Error::Domain(format!("inner templates at level {k} conjugate by level-{} permutations", k.saturating_sub(1))));
        }
        let pe = p.element();
        let u = Element::u_power(if adjoint { -1 } else { 1 });
        let element = pe.mul(&u).mul(&pe.adjoint()).compact();
        let prefix = if adjoint { "inner-adj" } else { "inner" };
        Ok(Template {
            level: k,
            name: format!("{prefix}:{}", p.cycle_notation()),
            kind: TemplateKind::Inner { p: p.clone(), adjoint },
            element,
        })
    }
}

/// `U^{±2^{k-1}}`, the `2(k-1)` mixed templates and the `2 (2^{k-1})!` inner
/// templates, in that order.
pub fn u_templates(k: usize) -> Result<Vec<Template>> {
    if k < 2 {
        return Err(Error::Domain("templates are defined for k >= 2".into()));
    }
    let n = 1usize << (k - 1);
    let count = super::perm::factorial(n).filter(|&c| c <= 100_000).ok_or_else(|| {
        Error::Capacity(format!("the inner templates at level {k} range over {n}! permutations"))
    })?;
    let mut out = vec![Template::pure(k, true), Template::pure(k, false)];
    for variant in [1, 2] {
        for h in 0..=k - 2 {
            out.push(Template::mixed(k, h, variant)?);
        }
    }
    for adjoint in [false, true] {
        for i in 0..count {
            let p = PermUnitary::new(k - 1, nth_permutation(n, i))?;
            out.push(Template::inner(k, &p, adjoint)?);
        }
    }
    for t in &out {
        assert!(t.element.is_unitary(), "template {} is not unitary", t.name);
    }
    Ok(out)
}

/// Looks up `plus`, `minus`, `mixed1:h`, `mixed2:h`, `inner:CYCLES` or
/// `inner-adj:CYCLES` at level `k`.
pub fn template_by_name(k: usize, name: &str) -> Result<Template> {
    if k < 2 {
        return Err(Error::Domain("templates are defined for k >= 2".into()));
    }
    let unknown = || Error::Parse { position: 0, message: format!("unknown template '{name}'") };
    match name {
        "plus" => return Ok(Template::pure(k, true)),
        "minus" => return Ok(Template::pure(k, false)),
        _ => {}
    }
    let (head, arg) = name.split_once(':').ok_or_else(unknown)?;
    match head {
        "mixed1" | "mixed2" => {
            let h: usize = arg.parse().map_err(|_| unknown())?;
            Template::mixed(k, h, if head == "mixed1" { 1 } else { 2 })
        }
        "inner" | "inner-adj" => {
            let p = PermUnitary::parse_cycles(k - 1, arg)?;
            Template::inner(k, &p, head == "inner-adj")
        }
        _ => Err(unknown()),
    }
}
