//! Random inputs for property checks. All functions draw from a caller
//! supplied generator, so seeded generators give reproducible samples.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::element::Element;
use crate::monomial::Monomial;
use crate::wgroup::Diagram;
use crate::words::{Partition, Word};
use crate::Rational;

pub fn word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    Word::from_letters((0..n).map(|_| rng.gen_range(1..=2)).collect())
}

/// A partition with `leaves` leaves and no word longer than `max_depth`,
/// grown by splitting random leaves. Returns fewer leaves if the depth
/// bound leaves nothing to split.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, leaves: usize, max_depth: usize) -> Partition {
    let mut p = Partition::trivial();
    while p.len() < leaves {
        let open: Vec<&Word> = p.words().iter().filter(|w| w.len() < max_depth).collect();
        let Some(&w) = open.choose(rng) else { break };
        let w = w.clone();
        p = p.split(&w).expect("leaf of the partition");
    }
    p
}

/// A diagram with up to `max_leaves` leaves, trees of depth at most
/// `max_depth`, a random matching and charges in `-max_charge..=max_charge`.
pub fn diagram<R: Rng + ?Sized>(rng: &mut R, max_leaves: usize, max_depth: usize, max_charge: i64) -> Diagram {
    let n = rng.gen_range(1..=max_leaves);
    let top = partition(rng, n, max_depth);
    let mut bottom = partition(rng, top.len(), max_depth);
    // the two trees need equal leaf counts
    let n = top.len().min(bottom.len());
    let mut top = top;
    while top.len() > n || bottom.len() > n {
        if top.len() > n {
            top = shrink(&top);
        }
        if bottom.len() > n {
            bottom = shrink(&bottom);
        }
    }
    let mut matching: Vec<usize> = (0..n).collect();
    matching.shuffle(rng);
    let terms = top
        .words()
        .iter()
        .zip(&matching)
        .map(|(a, &q)| Monomial::new(a.clone(), rng.gen_range(-max_charge..=max_charge), bottom.words()[q].clone()))
        .collect();
    Diagram::from_monomials(terms).expect("two partitions of equal size")
}

/// Merges one pair of sibling leaves.
fn shrink(p: &Partition) -> Partition {
    let ws = p.words();
    for i in 0..ws.len().saturating_sub(1) {
        if ws[i].last() == Some(1) && ws[i].parent() == ws[i + 1].parent() && ws[i + 1].last() == Some(2) {
            let mut out: Vec<Word> = ws.to_vec();
            out.splice(i..i + 2, [ws[i].parent().expect("nonempty")]);
            return Partition::new(out).expect("merging siblings keeps a partition");
        }
    }
    unreachable!("a partition with two or more leaves has a sibling pair")
}

/// A random unitary of the extended Thompson group.
pub fn w_element<R: Rng + ?Sized>(rng: &mut R, max_leaves: usize, max_depth: usize, max_charge: i64) -> Element {
    diagram(rng, max_leaves, max_depth, max_charge).to_element()
}

fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let num = loop {
        let x: i64 = rng.gen_range(-3..=3);
        if x != 0 {
            break x;
        }
    };
    Rational::new(BigInt::from(num), BigInt::from(rng.gen_range(1..=2)))
}

/// A sum of up to `max_terms` monomials with words of length at most
/// `max_depth` and charges in `-max_charge..=max_charge`.
pub fn element<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, max_terms: usize, max_charge: i64) -> Element {
    let n = rng.gen_range(1..=max_terms);
    Element::from_terms((0..n).map(|_| {
        let m = Monomial::new(word(rng, max_depth), rng.gen_range(-max_charge..=max_charge), word(rng, max_depth));
        (coefficient(rng), m)
    }))
}

/// The same operator as `e`, written differently: some terms are expanded
/// once more, and some coefficients are split between a term and its
/// expansion. Every `β` stays within `max_depth`.
pub fn rewrite<R: Rng + ?Sized>(rng: &mut R, e: &Element, max_depth: usize) -> Element {
    let mut out = Element::zero();
    for (m, c) in e.terms() {
        let expandable = m.beta.len() < max_depth;
        match rng.gen_range(0..3) {
            1 if expandable => {
                let (a, b) = m.expand_right();
                out.add_term(a, c.clone());
                out.add_term(b, c.clone());
            }
            2 if expandable => {
                let part = coefficient(rng);
                let (a, b) = m.expand_right();
                out.add_term(m.clone(), c - &part);
                out.add_term(a, part.clone());
                out.add_term(b, part);
            }
            _ => out.add_term(m.clone(), c.clone()),
        }
    }
    out
}

/// `e` with one small random change; usually, but not always, a different operator.
pub fn perturb<R: Rng + ?Sized>(rng: &mut R, e: &Element) -> Element {
    let terms: Vec<(Monomial, Rational)> = e.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let Some((m, c)) = terms.choose(rng).cloned() else {
        return Element::one();
    };
    let mut out = e.clone();
    out.add_term(m.clone(), -c.clone());
    match rng.gen_range(0..4) {
        0 => {
            let delta = if rng.gen() { 1 } else { -1 };
            out.add_term(Monomial::new(m.alpha, m.k + delta, m.beta), c);
        }
        1 => out.add_term(m, c * Rational::from_integer(2.into())),
        2 => {}
        _ => {
            let mut letters = m.alpha.letters().to_vec();
            if letters.is_empty() {
                letters.push(1);
            } else {
                let i = rng.gen_range(0..letters.len());
                letters[i] = 3 - letters[i];
            }
            out.add_term(Monomial::new(Word::from_letters(letters), m.k, m.beta), c);
        }
    }
    out
}
