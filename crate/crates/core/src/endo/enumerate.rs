use std::collections::BTreeSet;
use std::str::FromStr;

use rayon::prelude::*;

use super::construct::{make_inner_phi, mixed_family, pure_family, Sign};
use super::perm::{factorial, nth_permutation, PermUnitary};
use super::templates::{u_templates, Template, TemplateKind};
use super::check_unchecked;
use crate::element::Element;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Brute,
    Constructive,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Mode::Brute),
            "constructive" => Ok(Mode::Constructive),
            _ => Err(Error::Parse { position: 0, message: format!("unknown mode '{s}' (expected brute or constructive)") }),
        }
    }
}

/// Level-`k` permutation unitaries `u` for which `λ_u` extends with
/// `λ(U) = template`.
///
/// Brute force tries all `(2^k)!` permutations (so `k <= 3`) and returns
/// them in lexicographic order of the permutation arrays. The constructive
/// mode lists the known families for every menu entry equal to `template`.
pub fn enumerate_extendible(k: usize, template: &Element, mode: Mode) -> Result<Vec<PermUnitary>> {
    if !template.is_unitary() {
        return Err(Error::Domain("the candidate image of U must be a unitary of W".into()));
    }
    match mode {
        Mode::Brute => brute(k, template),
        Mode::Constructive => constructive(k, template),
    }
}

fn brute(k: usize, template: &Element) -> Result<Vec<PermUnitary>> {
    if k > 3 {
        return Err(Error::Capacity(format!(
            "brute force at level {k} would try (2^{k})! permutations; the limit is level 3"
        )));
    }
    let n = 1usize << k;
    let count = factorial(n).expect("small factorial");
    Ok((0..count)
        .into_par_iter()
        .filter_map(|i| {
            let u = PermUnitary::new(k, nth_permutation(n, i)).expect("valid permutation");
            check_unchecked(&u.element(), template).holds().then_some(u)
        })
        .collect())
}

fn constructive(k: usize, template: &Element) -> Result<Vec<PermUnitary>> {
    let mut out = BTreeSet::new();
    for t in u_templates(k)? {
        if !t.element.equals(template) {
            continue;
        }
        out.extend(template_family(&t)?);
    }
    Ok(out.into_iter().collect())
}

/// The constructive family attached to one menu entry.
pub fn template_family(t: &Template) -> Result<Vec<PermUnitary>> {
    let k = t.level;
    match &t.kind {
        TemplateKind::Pure { plus } => pure_family(k, if *plus { Sign::Plus } else { Sign::Minus }),
        TemplateKind::Mixed { h, variant } => mixed_family(k, *h, *variant),
        TemplateKind::Inner { p, adjoint } => Ok(vec![make_inner_phi(p, *adjoint)?.u]),
    }
}

/// Result of running every template of a level against a set of unitaries.
#[derive(Clone, Debug)]
pub struct Classification {
    /// `(u, template name)` for every verified pair, ordered by `u`.
    pub pairs: Vec<(PermUnitary, String)>,
    /// Unitaries verifying against two templates that are not equal; the
    /// image of `U` should be unique, so this is expected to stay empty.
    pub conflicts: Vec<(PermUnitary, Vec<String>)>,
    /// Per template: brute-force results missing from the constructive
    /// family, and constructive results missing from brute force.
    pub differences: Vec<(String, Vec<PermUnitary>, Vec<PermUnitary>)>,
}

/// Brute-force classification over the whole template menu at level `k`.
pub fn classify(k: usize) -> Result<Classification> {
    let templates = u_templates(k)?;
    let mut pairs = Vec::new();
    let mut differences = Vec::new();
    for t in &templates {
        let found = brute(k, &t.element)?;
        let built: BTreeSet<PermUnitary> = template_family(t)?.into_iter().collect();
        let found_set: BTreeSet<PermUnitary> = found.iter().cloned().collect();
        let extra: Vec<_> = found_set.difference(&built).cloned().collect();
        let missing: Vec<_> = built.difference(&found_set).cloned().collect();
        if !extra.is_empty() || !missing.is_empty() {
            differences.push((t.name.clone(), extra, missing));
        }
        pairs.extend(found.into_iter().map(|u| (u, t.name.clone())));
    }
    pairs.sort();
    let mut conflicts = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let j = pairs[i..].iter().position(|(u, _)| *u != pairs[i].0).map_or(pairs.len(), |d| i + d);
        if j - i > 1 {
            let names: Vec<String> = pairs[i..j].iter().map(|(_, n)| n.clone()).collect();
            let elems: Vec<&Element> = names
                .iter()
                .map(|n| &templates.iter().find(|t| &t.name == n).expect("known template").element)
                .collect();
            if elems.iter().any(|e| !e.equals(elems[0])) {
                conflicts.push((pairs[i].0.clone(), names));
            }
        }
        i = j;
    }
    Ok(Classification { pairs, conflicts, differences })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;

    #[test]
    fn level_two_has_ten_pairs() {
        let c = classify(2).unwrap();
        let got: Vec<(String, String)> = c.pairs.iter().map(|(u, t)| (u.cycle_notation(), t.clone())).collect();
        let mut expected = vec![
            ("()", "inner:()"),
            ("(2 3)", "plus"),
            ("(1 3 4 2)", "plus"),
            ("(1 2 4 3)", "minus"),
            ("(1 4)", "minus"),
            ("(2 4 3)", "mixed1:0"),
            ("(1 2 3)", "mixed2:0"),
        ];
        let level2 = |s: &str| {
            PermUnitary::from_element_at_level(&parse_element(s).unwrap(), 2).unwrap().cycle_notation()
        };
        let (flip, f, ff) = (level2("f"), level2("f phi(f)"), level2("f phi(f) f"));
        expected.push((&flip, "inner-adj:()"));
        expected.push((&f, "inner:(1 2)"));
        expected.push((&ff, "inner-adj:(1 2)"));
        let mut expected: Vec<(String, String)> =
            expected.into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        expected.sort();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        assert_eq!(got_sorted, expected);
        assert!(c.conflicts.is_empty());
        assert!(c.differences.is_empty());
    }

    #[test]
    fn brute_capacity() {
        assert!(matches!(enumerate_extendible(4, &parse_element("U^8").unwrap(), Mode::Brute), Err(Error::Capacity(_))));
        assert!(matches!(enumerate_extendible(2, &parse_element("P[1]").unwrap(), Mode::Brute), Err(Error::Domain(_))));
    }
}
