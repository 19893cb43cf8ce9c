use num_bigint::BigInt;
use q2_core::canrep::{apply_basis, semantic_eq};
use q2_core::wgroup::{render, Diagram, RenderFormat};
use q2_core::{parse_element, sample, Element};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn group_laws_on_random_diagrams() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let id = Diagram::identity();
    for _ in 0..150 {
        let a = sample::diagram(&mut rng, 5, 3, 6);
        let b = sample::diagram(&mut rng, 5, 3, 6);
        let c = sample::diagram(&mut rng, 5, 3, 6);
        let left = a.group_mul(&b).group_mul(&c);
        let right = a.group_mul(&b.group_mul(&c));
        assert!(left.to_element().equals(&right.to_element()));
        assert!(a.group_mul(&id).to_element().equals(&a.to_element()));
        assert!(id.group_mul(&a).to_element().equals(&a.to_element()));
        assert_eq!(a.group_mul(&a.group_inv()), id);
        assert_eq!(a.group_inv().group_mul(&a), id);
        assert_eq!(a.group_mul(&b).total_charge(), a.total_charge() + b.total_charge());
        assert_eq!(a.reduce().total_charge(), a.total_charge());
        assert_eq!(a.to_element().total_charge().unwrap(), a.total_charge());
    }
}

#[test]
fn reduction_preserves_the_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let d = sample::diagram(&mut rng, 4, 3, 5);
        let depth = rng.gen_range(3..=5);
        let expanded = Diagram::from_element_at_depth(&d.to_element(), Some(depth)).unwrap();
        let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
        let reduced = expanded.reduce_with(|moves| local.gen_range(0..moves.len()));
        assert!(reduced.is_reduced());
        assert!(reduced.leaf_count() <= expanded.leaf_count());
        assert!(semantic_eq(&reduced.to_element(), &expanded.to_element()));
    }
}

#[test]
fn reduction_is_independent_of_move_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let d = sample::diagram(&mut rng, 6, 4, 8);
        let depth = rng.gen_range(4..=6);
        let expanded = Diagram::from_element_at_depth(&d.to_element(), Some(depth)).unwrap();
        let canonical = expanded.reduce();
        for _ in 0..4 {
            let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
            let other = expanded.reduce_with(|moves| local.gen_range(0..moves.len()));
            assert_eq!(other, canonical, "confluence counterexample from {expanded}");
        }
        assert_eq!(canonical.reduce(), canonical);
        assert!(canonical.to_element().equals(&d.to_element()));
    }
}

#[test]
fn element_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..200 {
        let e = sample::w_element(&mut rng, 7, 4, 10);
        let d = Diagram::from_element(&e).unwrap();
        assert!(d.to_element().equals(&e));
        let r = d.reduce();
        assert_eq!(Diagram::from_element(&r.to_element()).unwrap().reduce(), r);
        assert_eq!(Diagram::from_json(&r.to_json()).unwrap(), r);
    }
}

#[test]
fn diagram_values_match_the_oracle() {
    let d = Diagram::from_element(&parse_element("S[11] U^3 S*[21] + S[12] U^-1 S*[1] + S[2] U^4 S*[22]").unwrap()).unwrap();
    for n in -40..40 {
        let n = BigInt::from(n);
        assert_eq!(apply_basis(&d.to_element(), &n), apply_basis(&d.reduce().to_element(), &n));
    }
    let dot = render(&d, RenderFormat::Dot);
    assert_eq!(dot.matches("style=dashed").count(), d.leaf_count());
    let tikz = render(&d, RenderFormat::Tikz);
    assert!(tikz.starts_with("\\begin{tikzpicture}"));
}

#[test]
fn charges_are_additive_on_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let a = sample::w_element(&mut rng, 6, 3, 9);
        let b = sample::w_element(&mut rng, 6, 3, 9);
        let ab: Element = a.mul(&b);
        assert_eq!(ab.total_charge().unwrap(), a.total_charge().unwrap() + b.total_charge().unwrap());
    }
}
