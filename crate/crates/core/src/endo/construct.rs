use std::collections::BTreeMap;

use super::perm::{factorial, nth_permutation, word_at, PermUnitary};
use super::templates::Template;
use super::ExtendedEndo;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::words::{decode_u64, Word};

/// Families larger than this are refused rather than materialized.
const MAX_FAMILY: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

fn other(l: u8) -> u8 {
    3 - l
}

/// `u_p^+ = Σ_{μ,i} S_{μ i} S_{i p(μ)}*` and
/// `u_p^- = Σ_μ S_{μ1} S_{2 p(μ)}* + S_{μ2} S_{1 p(μ)}*`, of level `p.level() + 1`.
/// Both extend with `Ũ = U^{±2^{k-1}}`.
pub fn make_u_p(p: &PermUnitary, sign: Sign) -> PermUnitary {
    let k = p.level() + 1;
    let p_inv = p.inverse();
    PermUnitary::from_fn(k, |beta| {
        let i = beta.letters()[0];
        let nu = Word::from_letters(beta.letters()[1..].to_vec());
        let mu = p_inv.image(&nu);
        mu.push(if sign.is_plus() { i } else { other(i) })
    })
    .expect("u_p is a permutation")
}

/// All `(2^{k-1})!` unitaries `u_p^±` of level `k`, ordered by `p`.
pub fn pure_family(k: usize, sign: Sign) -> Result<Vec<PermUnitary>> {
    if k < 2 {
        return Err(Error::Domain("u_p needs k >= 2".into()));
    }
    let n = 1usize << (k - 1);
    let count = factorial(n)
        .filter(|&c| c <= MAX_FAMILY)
        .ok_or_else(|| Error::Capacity(format!("{n}! permutations at level {k} is too many to list")))?;
    (0..count)
        .map(|i| Ok(make_u_p(&PermUnitary::new(k - 1, nth_permutation(n, i))?, sign)))
        .collect()
}

fn insert_letter(w: &Word, at: usize, c: u8) -> Word {
    let mut v = w.letters().to_vec();
    v.insert(at, c);
    Word::from_letters(v)
}

/// The general unitary extending with the mixed template `(h, variant)`.
///
/// For the block letter `c ∈ {1, 2}`, `blocks[c-1]` is a permutation of the
/// words of length `k-2` (by lexicographic index) sending `r` to `r'`. Put
/// `v = r` and `w = r'`, each with `c` inserted after the first `h` letters.
/// If `c` is the letter carrying `U^{+2^{k-1}}` the block contributes
/// `S_{v2} S_{2w}* + S_{v1} S_{1w}*`, otherwise
/// `S_{v1} S_{2w}* + S_{v2} S_{1w}*`.
pub fn make_u_blocks(k: usize, h: usize, variant: u8, blocks: [&[usize]; 2]) -> Result<PermUnitary> {
    if k < 2 || h > k - 2 || !(variant == 1 || variant == 2) {
        return Err(Error::Domain(format!("need k >= 2, 0 <= h <= k-2, variant 1 or 2 (k={k}, h={h})")));
    }
    let m = 1usize << (k - 2);
    for b in blocks {
        PermUnitary::new(k - 2, b.to_vec())
            .map_err(|_| Error::Domain(format!("block maps must permute the {m} words of length {}", k - 2)))?;
    }
    let plus_letter = variant;
    let mut perm = vec![0; 1 << k];
    for c in [1u8, 2] {
        for (r, &r2) in blocks[(c - 1) as usize].iter().enumerate() {
            let v = insert_letter(&word_at(k - 2, r), h, c);
            let w = insert_letter(&word_at(k - 2, r2), h, c);
            let (first, second) = if c == plus_letter { (2, 1) } else { (1, 2) };
            // S_{v first} S_{2w}* + S_{v second} S_{1w}*
            perm[Word::letter(2).concat(&w).lex_index()] = v.push(first).lex_index();
            perm[Word::letter(1).concat(&w).lex_index()] = v.push(second).lex_index();
        }
    }
    PermUnitary::new(k, perm)
}

/// Permutations `σ_{α,c}` of the words of length `k-h-2`, indexed by a word
/// `α` of length `h` and a block letter `c`; missing entries are the identity.
#[derive(Clone, Debug, Default)]
pub struct Sigma {
    pub maps: BTreeMap<(Word, u8), Vec<usize>>,
}

/// The unitary `u_σ` with blocks `α c β ↦ α c σ_{α,c}(β)`.
pub fn make_u_sigma(k: usize, h: usize, variant: u8, sigma: &Sigma) -> Result<PermUnitary> {
    if k < 2 || h > k - 2 {
        return Err(Error::Domain(format!("need k >= 2 and 0 <= h <= k-2 (k={k}, h={h})")));
    }
    let tail = k - h - 2;
    for ((alpha, c), s) in &sigma.maps {
        if alpha.len() != h || !(*c == 1 || *c == 2) || PermUnitary::new(tail, s.clone()).is_err() {
            return Err(Error::Domain(format!(
                "σ entries are indexed by words of length {h} and a letter, and permute the words of length {tail}"
            )));
        }
    }
    let block = |c: u8| -> Vec<usize> {
        (0..1usize << (k - 2))
            .map(|r| {
                let (a, x) = (r >> tail, r & ((1 << tail) - 1));
                let alpha = word_at(h, a);
                let x2 = sigma.maps.get(&(alpha, c)).map_or(x, |s| s[x]);
                (a << tail) | x2
            })
            .collect()
    };
    let (b1, b2) = (block(1), block(2));
    make_u_blocks(k, h, variant, [&b1, &b2])
}

/// The `N_{k,h} = (2^h · (2^{k-h-2})!)^2` unitaries for the mixed template
/// `(h, variant)`: in each block the prefix `α` is rotated by the odometer
/// `t(α) ↦ t(α) + s mod 2^h` and the tail permuted by some `σ`, independently
/// for the two blocks.
pub fn mixed_family(k: usize, h: usize, variant: u8) -> Result<Vec<PermUnitary>> {
    Template::mixed(k, h, variant)?;
    let tail = k - h - 2;
    let shifts = 1u64 << h;
    let tails = factorial(1 << tail).ok_or_else(|| Error::Capacity("tail permutations overflow".into()))?;
    let per_block = shifts * tails;
    if per_block.checked_mul(per_block).is_none_or(|n| n > MAX_FAMILY) {
        return Err(Error::Capacity(format!("N_{{{k},{h}}} is too large to list")));
    }
    let block = |index: u64| -> Vec<usize> {
        let (s, t) = (index / tails, index % tails);
        let sigma = nth_permutation(1 << tail, t);
        (0..1usize << (k - 2))
            .map(|r| {
                let (a, x) = (r >> tail, r & ((1 << tail) - 1));
                let alpha = word_at(h, a);
                let t_alpha = alpha.offset_u64().expect("short word");
                let rotated = decode_u64(h, (t_alpha + s) & (shifts - 1));
                (rotated.lex_index() << tail) | sigma[x]
            })
            .collect()
    };
    let blocks: Vec<Vec<usize>> = (0..per_block).map(block).collect();
    let mut out = Vec::with_capacity((per_block * per_block) as usize);
    for b1 in &blocks {
        for b2 in &blocks {
            out.push(make_u_blocks(k, h, variant, [b1, b2])?);
        }
    }
    Ok(out)
}

/// `u = p φ(p*)` with `Ũ = p U p*`, or `u = p φ(p*) f` with `Ũ = p U* p*`.
pub fn make_inner_phi(p: &PermUnitary, with_flip: bool) -> Result<ExtendedEndo> {
    let k = p.level() + 1;
    let pe = p.element();
    let mut u = pe.mul(&pe.adjoint().phi());
    if with_flip {
        u = u.mul(&Element::flip());
    }
    let u = PermUnitary::from_element_at_level(&u, k)?;
    let tilde = Template::inner(k, p, with_flip)?.element;
    ExtendedEndo::new(u, tilde)
}

/// `F_1 = F` and `F_m = φ(F_{m-1}) F`, so that `λ_{F_m} = φ^m`.
pub fn f_tower(m: usize) -> Element {
    assert!(m >= 1);
    let f = Element::big_f();
    (1..m).fold(f.clone(), |acc, _| acc.phi().mul(&f).compact())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::check_extension;
    use crate::parse::parse_element;
    use std::collections::HashSet;

    fn el(s: &str) -> Element {
        parse_element(s).unwrap()
    }

    #[test]
    fn u_p_examples() {
        let id = PermUnitary::identity(1);
        assert!(make_u_p(&id, Sign::Plus).element().equals(&el("F")));
        for k in 2..=4 {
            let id = PermUnitary::identity(k - 1);
            let plus = make_u_p(&id, Sign::Plus).element();
            let minus = make_u_p(&id, Sign::Minus).element();
            assert!(plus.equals(&f_tower(k - 1)));
            assert!(minus.mul(&Element::flip()).equals(&plus));
        }
    }

    #[test]
    fn sigma_examples() {
        let u = make_u_sigma(2, 0, 1, &Sigma::default()).unwrap();
        assert_eq!(u.cycle_notation(), "(2 4 3)");
        let u = make_u_sigma(2, 0, 2, &Sigma::default()).unwrap();
        assert_eq!(u.cycle_notation(), "(1 2 3)");
        let mut bad = Sigma::default();
        bad.maps.insert((Word::empty(), 1), vec![0, 0]);
        assert!(make_u_sigma(3, 0, 1, &bad).is_err());
        assert!(make_u_sigma(3, 2, 1, &Sigma::default()).is_err());
    }

    #[test]
    fn sigma_is_a_subfamily_of_blocks() {
        let mut s = Sigma::default();
        s.maps.insert((Word::empty(), 2), vec![1, 0]);
        let u = make_u_sigma(3, 0, 1, &s).unwrap();
        let t = Template::mixed(3, 0, 1).unwrap();
        assert!(check_extension(&u, &t.element).unwrap());
        assert!(mixed_family(3, 0, 1).unwrap().contains(&u));
    }

    #[test]
    fn small_families_are_extendible_and_distinct() {
        for k in 2..=3 {
            for sign in [Sign::Plus, Sign::Minus] {
                let fam = pure_family(k, sign).unwrap();
                let t = Template::pure(k, sign.is_plus());
                assert!(fam.iter().all(|u| check_extension(u, &t.element).unwrap()));
                assert_eq!(fam.iter().collect::<HashSet<_>>().len(), fam.len());
            }
            for h in 0..=k - 2 {
                for variant in [1, 2] {
                    let fam = mixed_family(k, h, variant).unwrap();
                    let t = Template::mixed(k, h, variant).unwrap();
                    assert!(fam.iter().all(|u| check_extension(u, &t.element).unwrap()));
                    assert_eq!(fam.iter().collect::<HashSet<_>>().len(), fam.len());
                }
            }
        }
    }

    #[test]
    fn inner_examples() {
        let one = PermUnitary::identity(1);
        let e = make_inner_phi(&one, false).unwrap();
        assert!(e.verified && e.u.is_identity() && e.u_tilde.equals(&el("U")));
        let e = make_inner_phi(&one, true).unwrap();
        assert!(e.verified && e.u.element().equals(&el("f")) && e.u_tilde.equals(&el("U*")));
        let f = PermUnitary::from_element(&el("f")).unwrap();
        let e = make_inner_phi(&f, false).unwrap();
        assert!(e.verified && e.u_tilde.equals(&el("f U f")));
        assert!(e.u.element().equals(&el("f phi(f)")));
    }
}
