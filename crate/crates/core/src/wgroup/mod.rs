//! The extended Thompson group `W` as tree-pair diagrams with charges.
//!
//! A diagram `(T+, T-, τ, v)` stands for the unitary
//! `Σ_p S_{a_p} U^{v_p} S_{b_{τ(p)}}*` where `a_p` and `b_q` are the leaves of
//! `T+` and `T-` read left to right. Products are taken through the element
//! algebra and then reduced, so the monomial rules are the only source of
//! truth for the group law.

mod render;
mod tree;

pub use render::{render, RenderFormat};
pub use tree::Tree;

use std::fmt;

use num_bigint::BigInt;
use serde_json::json;

use crate::element::{bigint_from_json, bigint_json, Element};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    tplus: Tree,
    tminus: Tree,
    /// `tau[p]` is the (0-based) `T-` leaf matched with the `p`-th `T+` leaf.
    tau: Vec<usize>,
    v: Vec<BigInt>,
}

impl Diagram {
    /// `tau` is 0-based here; JSON and display use 1-based leaf numbers.
    pub fn new(tplus: Tree, tminus: Tree, tau: Vec<usize>, v: Vec<BigInt>) -> Result<Self> {
        let n = tplus.leaf_count();
        if tminus.leaf_count() != n {
            return Err(Error::Domain(format!(
                "trees have {n} and {} leaves",
                tminus.leaf_count()
            )));
        }
        if tau.len() != n || v.len() != n {
            return Err(Error::Domain(format!("τ and v must have length {n}")));
        }
        let mut seen = vec![false; n];
        for &q in &tau {
            if q >= n || std::mem::replace(&mut seen[q], true) {
                return Err(Error::Domain("τ is not a permutation".into()));
            }
        }
        Ok(Diagram { tplus, tminus, tau, v })
    }

    pub fn identity() -> Self {
        Diagram::u_power(0)
    }

    pub fn u_power(n: impl Into<BigInt>) -> Self {
        Diagram { tplus: Tree::Leaf, tminus: Tree::Leaf, tau: vec![0], v: vec![n.into()] }
    }

    pub fn tplus(&self) -> &Tree {
        &self.tplus
    }

    pub fn tminus(&self) -> &Tree {
        &self.tminus
    }

    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn charges(&self) -> &[BigInt] {
        &self.v
    }

    pub fn leaf_count(&self) -> usize {
        self.v.len()
    }

    /// The terms `S_{a_p} U^{v_p} S_{b_τ(p)}*` in `T+` leaf order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let a = self.tplus.leaves();
        let b = self.tminus.leaves();
        (0..a.len())
            .map(|p| Monomial::new(a[p].clone(), self.v[p].clone(), b[self.tau[p]].clone()))
            .collect()
    }

    pub fn to_element(&self) -> Element {
        Element::sum_of(self.monomials())
    }

    /// Reads a diagram off the canonical form of a unitary of `W`.
    pub fn from_element(e: &Element) -> Result<Self> {
        Diagram::from_element_at_depth(e, None)
    }

    /// Like [`Diagram::from_element`] with every `β` expanded to `depth`.
    pub fn from_element_at_depth(e: &Element, depth: Option<usize>) -> Result<Self> {
        if !e.is_unitary() {
            return Err(Error::Domain("only unitaries of the form Σ S_α U^k S_β* have diagrams".into()));
        }
        let form = e.normalize(depth)?;
        Diagram::from_monomials(form.monomials().cloned().collect())
    }

    /// Builds the diagram with exactly these terms, which must have complete
    /// prefix-free families of `α`s and `β`s.
    pub fn from_monomials(mut terms: Vec<Monomial>) -> Result<Self> {
        terms.sort_by(|x, y| x.alpha.cmp(&y.alpha));
        let tplus = Tree::from_leaves(terms.iter().map(|m| &m.alpha))?;
        let tminus = Tree::from_leaves(terms.iter().map(|m| &m.beta))?;
        let b = tminus.leaves();
        let tau = terms
            .iter()
            .map(|m| b.binary_search(&m.beta).expect("β is a leaf of T-"))
            .collect();
        let v = terms.into_iter().map(|m| m.k).collect();
        Ok(Diagram { tplus, tminus, tau, v })
    }

    /// Sibling leaf pairs that can be merged, as `(left, right)` indices into
    /// [`Diagram::monomials`].
    fn reduction_moves(terms: &[Monomial]) -> Vec<(usize, usize, Monomial)> {
        let mut moves = Vec::new();
        for (i, left) in terms.iter().enumerate() {
            if left.alpha.last() != Some(1) {
                continue;
            }
            let partner = left.alpha.parent().expect("nonempty").push(2);
            if let Ok(j) = terms.binary_search_by(|m| m.alpha.cmp(&partner)) {
                if let Some(merged) = Monomial::merge(left, &terms[j]) {
                    moves.push((i, j, merged));
                }
            }
        }
        moves
    }

    /// Applies reduction moves until none is left, deepest pair first (ties
    /// broken lexicographically). Each move replaces two sibling leaves by
    /// their parent in both trees and is the inverse of one expansion
    /// `U^{2k} = S_1 U^k S_1* + S_2 U^k S_2*`,
    /// `U^{2k+1} = S_1 U^k S_2* + S_2 U^{k+1} S_1*`.
    pub fn reduce(&self) -> Diagram {
        self.reduce_with(|moves| {
            let mut best = 0;
            for (i, m) in moves.iter().enumerate() {
                let (d, b) = (m.alpha.len(), &moves[best].alpha);
                if d > b.len() || (d == b.len() && m.alpha < *b) {
                    best = i;
                }
            }
            best
        })
    }

    /// Reduces with a caller-chosen move order: `pick` receives the merged
    /// monomials of all available moves and returns the index to apply.
    pub fn reduce_with<F: FnMut(&[Monomial]) -> usize>(&self, mut pick: F) -> Diagram {
        let mut terms = self.monomials();
        terms.sort_by(|x, y| x.alpha.cmp(&y.alpha));
        loop {
            let moves = Diagram::reduction_moves(&terms);
            if moves.is_empty() {
                break;
            }
            let merged: Vec<Monomial> = moves.iter().map(|m| m.2.clone()).collect();
            let choice = pick(&merged);
            let (i, j, m) = moves.into_iter().nth(choice).expect("pick returned a valid move");
            let (lo, hi) = (i.min(j), i.max(j));
            terms.remove(hi);
            terms.remove(lo);
            let pos = terms.partition_point(|x| x.alpha < m.alpha);
            terms.insert(pos, m);
        }
        Diagram::from_monomials(terms).expect("reduction keeps the leaf families complete")
    }

    pub fn is_reduced(&self) -> bool {
        let mut terms = self.monomials();
        terms.sort_by(|x, y| x.alpha.cmp(&y.alpha));
        Diagram::reduction_moves(&terms).is_empty()
    }

    pub fn group_mul(&self, other: &Diagram) -> Diagram {
        let product = self.to_element().mul(&other.to_element());
        Diagram::from_element(&product).expect("W is closed under products").reduce()
    }

    /// `(T-, T+, τ^{-1}, -v ∘ τ^{-1})`.
    pub fn group_inv(&self) -> Diagram {
        let n = self.leaf_count();
        let mut tau = vec![0; n];
        let mut v = vec![BigInt::from(0); n];
        for p in 0..n {
            tau[self.tau[p]] = p;
            v[self.tau[p]] = -&self.v[p];
        }
        Diagram { tplus: self.tminus.clone(), tminus: self.tplus.clone(), tau, v }
    }

    /// `Σ v`, which equals the total charge of the element.
    pub fn total_charge(&self) -> BigInt {
        self.v.iter().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "tplus": serde_json::to_value(&self.tplus).expect("trees serialize"),
            "tminus": serde_json::to_value(&self.tminus).expect("trees serialize"),
            "tau": self.tau.iter().map(|q| q + 1).collect::<Vec<_>>(),
            "v": self.v.iter().map(bigint_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |m: String| Error::Parse { position: 0, message: m };
        let field = |name: &str| value.get(name).ok_or_else(|| bad(format!("missing field '{name}'")));
        let tree = |name: &str| -> Result<Tree> {
            serde_json::from_value(field(name)?.clone()).map_err(|e| bad(format!("{name}: {e}")))
        };
        let tau: Vec<usize> =
            serde_json::from_value(field("tau")?.clone()).map_err(|e| bad(format!("tau: {e}")))?;
        if tau.contains(&0) {
            return Err(bad("tau uses leaf numbers starting at 1".into()));
        }
        let v = field("v")?
            .as_array()
            .ok_or_else(|| bad("v must be an array".into()))?
            .iter()
            .map(bigint_from_json)
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(tree("tplus")?, tree("tminus")?, tau.into_iter().map(|q| q - 1).collect(), v)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tau: Vec<String> = self.tau.iter().map(|q| (q + 1).to_string()).collect();
        let v: Vec<String> = self.v.iter().map(|k| k.to_string()).collect();
        write!(
            f,
            "T+ = {}, T- = {}, tau = [{}], v = [{}]",
            self.tplus,
            self.tminus,
            tau.join(", "),
            v.join(", ")
        )
    }
}

impl From<&Diagram> for Element<Rational> {
    fn from(d: &Diagram) -> Self {
        d.to_element()
    }
}
