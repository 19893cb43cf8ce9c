use num_bigint::BigInt;
use num_traits::One;
use q2_core::canrep::{apply_basis, semantic_eq};
use q2_core::{parse_element, sample, Element, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn el(s: &str) -> Element {
    parse_element(s).unwrap()
}

/// `e1 (e2 e_n)` by linearity over the oracle.
fn compose(e1: &Element, e2: &Element, n: &BigInt) -> Vec<(Rational, BigInt)> {
    let mut acc = Element::<Rational>::zero();
    for (c, j) in apply_basis(e2, n) {
        for (d, i) in apply_basis(e1, &j) {
            acc.add_term(q2_core::Monomial::u_power(i), c.clone() * d);
        }
    }
    // read the index back off the U-power stand-ins
    let mut out: Vec<(Rational, BigInt)> = acc.terms().map(|(m, c)| (c.clone(), m.k.clone())).collect();
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

#[test]
fn symbolic_and_semantic_equality_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut equal, mut unequal) = (0, 0);
    for i in 0..2000 {
        let a = sample::element(&mut rng, 4, 10, 16);
        let b = if i % 2 == 0 { sample::rewrite(&mut rng, &a, 5) } else { sample::perturb(&mut rng, &a) };
        let sym = a.equals(&b);
        assert_eq!(sym, semantic_eq(&a, &b), "{a}  vs  {b}");
        if sym {
            equal += 1;
        } else {
            unequal += 1;
        }
    }
    assert!(equal >= 900 && unequal >= 900);
}

#[test]
fn products_compose_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let a = sample::element(&mut rng, 3, 5, 8);
        let b = sample::element(&mut rng, 3, 5, 8);
        let ab = a.mul(&b);
        for _ in 0..10 {
            let n = BigInt::from(rng.gen_range(-200..200));
            assert_eq!(apply_basis(&ab, &n), compose(&a, &b, &n));
        }
    }
}

#[test]
fn adjoint_is_the_transpose() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a = sample::element(&mut rng, 3, 4, 6);
        let adj = a.adjoint();
        for _ in 0..10 {
            let n = BigInt::from(rng.gen_range(-100..100));
            for (c, j) in apply_basis(&a, &n) {
                let back = apply_basis(&adj, &j);
                let entry = back.iter().find(|(_, i)| *i == n).map(|(d, _)| d.clone());
                assert_eq!(entry, Some(c));
            }
        }
    }
}

#[test]
fn unitaries_permute_basis_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let w = sample::w_element(&mut rng, 8, 4, 6);
        let mut images: Vec<BigInt> = (-300..300)
            .map(|n| {
                let img = apply_basis(&w, &BigInt::from(n));
                assert_eq!(img.len(), 1);
                assert!(img[0].0.is_one());
                img[0].1.clone()
            })
            .collect();
        let before = images.len();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), before);
        // preimages exist: the adjoint sends every image back
        let adj = w.adjoint();
        for n in -50..50 {
            assert_eq!(apply_basis(&adj, &BigInt::from(n)).len(), 1);
        }
    }
}

#[test]
fn even_charges_split_evenly() {
    for k in -20i64..20 {
        let lhs = el(&format!("U^{{{}}}", 2 * k));
        let rhs = el(&format!("S[1] U^{{{k}}} S*[1] + S[2] U^{{{k}}} S*[2]"));
        assert!(lhs.equals(&rhs) && semantic_eq(&lhs, &rhs));
    }
}

#[test]
fn relations_of_the_algebra() {
    assert!(el("S2 U").equals(&el("U^2 S2")));
    assert!(el("S2 S2* + U S2 S2* U*").equals(&Element::one()));
    assert!(el("S1* S1").equals(&Element::one()));
    assert!(el("S1* S2").is_zero());
    assert!(el("F F").equals(&Element::one()));
    assert!(semantic_eq(&el("F F"), &Element::one()));
}
