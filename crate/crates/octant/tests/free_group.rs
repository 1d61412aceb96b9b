use octant::free_group::*;
use proptest::prelude::*;

fn w(text: &str) -> Word {
    Word::parse_with_alphabet(text, 3).unwrap()
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1i32..=3, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::from_signed(3, &v.iter().map(|&(g, inv)| if inv { -g } else { g }).collect::<Vec<_>>()).unwrap())
}

#[test]
fn parse_and_render() {
    assert!(Word::parse("e").unwrap().is_empty());
    assert!(Word::parse("").unwrap().is_empty());
    let u = Word::parse("a b a' b'").unwrap();
    assert_eq!(u.len(), 4);
    assert_eq!(u.to_string(), "a b a' b'");
    assert_eq!(Word::parse("c1 c2'").unwrap(), Word::from_signed(2, &[1, -2]).unwrap());
    assert_eq!(Word::empty(3).to_string(), "e");
    assert!(Word::parse("a ?").is_err());
}

#[test]
fn inverse_examples() {
    assert_eq!(inverse(&w("a b'")), w("b a'"));
    assert!(inverse(&Word::empty(3)).is_empty());
}

#[test]
fn generator_degree_examples() {
    let commutator = w("a b a' b'");
    assert_eq!(generator_degree(&commutator, 1).unwrap(), 0);
    assert_eq!(generator_degree(&commutator, 2).unwrap(), 0);
    assert_eq!(generator_degree(&w("a a a"), 1).unwrap(), 3);
    assert!(generator_degree(&commutator, 4).is_err());
}

#[test]
fn reduction() {
    assert!(free_reduce(&w("a b b' a'")).is_empty());
    assert_eq!(free_reduce(&w("a b b' c")), w("a c"));
    assert_eq!(cyclic_reduce(&w("a b c a'")), w("b c"));
}

#[test]
fn spelling_length_golden() {
    assert_eq!(spelling_length(&Word::empty(3)), 0);
    // h X h⁻¹ with h = A B⁻¹ C, X = B.
    let h = w("a b' c");
    let conj = h.concat(&w("b")).concat(&inverse(&h));
    assert_eq!(spelling_length(&conj), 1);
    assert_eq!(spelling_length(&w("a b a' b'")), 2);
    assert_eq!(spelling_length(&w("a b c b' c' a'")), 2);
}

#[test]
fn optimal_pairing_examples() {
    assert_eq!(optimal_pairing(&w("a a'")).pairs, vec![(1, 2)]);
    assert_eq!(optimal_pairing(&w("a b a'")).pairs, vec![(1, 3)]);
    let u = w("a b a' b'");
    let p = optimal_pairing(&u);
    assert!(p.is_valid_for(&u));
    assert_eq!(p.pairs, vec![(1, 3)]);
    // Crossing pairs are rejected.
    assert!(!Pairing { pairs: vec![(1, 3), (2, 4)] }.is_valid_for(&u));
}

#[test]
fn homomorphism_examples() {
    // Φ: C ↦ A⁻¹B⁻¹ kills CBA; Ψ: C ↦ B⁻¹A⁻¹ kills ABC.
    let phi = [w("a"), w("b"), w("a' b'")];
    assert!(apply_homomorphism(&w("c b a"), &phi).unwrap().is_empty());
    assert!(apply_homomorphism(&inverse(&w("c b a")), &phi).unwrap().is_empty());
    let psi = [w("a"), w("b"), w("b' a'")];
    assert!(apply_homomorphism(&w("a b c"), &psi).unwrap().is_empty());
    let id = [w("a"), w("b"), w("c")];
    let u = w("a b b' c a");
    assert_eq!(apply_homomorphism(&u, &id).unwrap(), free_reduce(&u));
}

#[test]
fn certified_lower_bound_examples() {
    assert_eq!(certified_lower_bound(1, 1, 1, 0, 1, Variant::P), 2);
    assert_eq!(certified_lower_bound(1, 1, 1, 0, 1, Variant::Q), 0);
    assert_eq!(certified_lower_bound(2, 2, 2, 0, 0, Variant::P), 6);
    assert_eq!(certified_lower_bound(2, 2, 2, 0, 0, Variant::Q), 6);
}

#[test]
fn product_search_examples() {
    let shape = ProductShape { variant: Variant::P, i: 1, j: 1, k: 1, p: 0, n: 1 };
    let r = min_spelling_over_product(&ClassProductSpec::from_shape(shape, 3)).unwrap();
    assert_eq!((r.upper, r.lower), (2, 2));
    assert!(r.exact);
    assert_eq!(spelling_length(&r.witness) as i64, r.upper);

    let r = min_spelling_over_product(&ClassProductSpec::new(w("a b c"), vec![], 0)).unwrap();
    assert_eq!(r.upper, 3);
    assert!(r.exact);
}

#[test]
fn product_search_parity_instance() {
    let shape = ProductShape { variant: Variant::P, i: 2, j: 2, k: 2, p: 0, n: 1 };
    let r = min_spelling_over_product(&ClassProductSpec::from_shape(shape, 4)).unwrap();
    assert_eq!(r.lower, 5);
    assert!(r.upper >= r.lower);
    assert_eq!(r.upper % 2, 1);
    assert_eq!(spelling_length(&r.witness) as i64, r.upper);
}

#[test]
fn reduced_word_enumeration() {
    // 1 + 6 + 6·5 reduced words of length ≤ 2 over three generators.
    let all = reduced_words(3, 2);
    assert_eq!(all.len(), 37);
    assert!(all.iter().all(|u| free_reduce(u) == *u));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn inverse_is_involution(u in word_strategy(12)) {
        prop_assert_eq!(inverse(&inverse(&u)), u);
    }

    #[test]
    fn degree_survives_reduction(u in word_strategy(12)) {
        prop_assert_eq!(degrees(&u), degrees(&free_reduce(&u)));
    }

    #[test]
    fn subadditive(u in word_strategy(12), v in word_strategy(12)) {
        prop_assert!(spelling_length(&u.concat(&v)) <= spelling_length(&u) + spelling_length(&v));
    }

    #[test]
    fn cyclic(u in word_strategy(12), k in 0usize..12) {
        prop_assert_eq!(spelling_length(&u.rotate(k)), spelling_length(&u));
    }

    #[test]
    fn zero_law(u in word_strategy(12)) {
        prop_assert_eq!(spelling_length(&u) == 0, free_reduce(&u).is_empty());
    }

    #[test]
    fn descends_to_group(u in word_strategy(10), at in 0usize..11, g in 1i32..=3, inv in any::<bool>()) {
        let at = at.min(u.len());
        let g = if inv { -g } else { g };
        let mut signed: Vec<i32> = u.letters().iter().map(|l| l.sign() as i32 * l.generator as i32).collect();
        signed.splice(at..at, [g, -g]);
        let padded = Word::from_signed(3, &signed).unwrap();
        prop_assert_eq!(spelling_length(&padded), spelling_length(&u));
    }

    #[test]
    fn parity_and_abelian_bound(u in word_strategy(12)) {
        let l = spelling_length(&u) as i64;
        let a = abelian_bound(&u);
        prop_assert!(l >= a);
        prop_assert_eq!((l - a).rem_euclid(2), 0);
    }

    #[test]
    fn conjugation_invariant(u in word_strategy(8), h in word_strategy(4)) {
        let c = h.concat(&u).concat(&inverse(&h));
        prop_assert_eq!(spelling_length(&c), spelling_length(&u));
    }

    #[test]
    fn pairing_consistent(u in word_strategy(12)) {
        let p = optimal_pairing(&u);
        prop_assert!(p.is_valid_for(&u));
        prop_assert_eq!(u.len() as i64 - 2 * p.len() as i64, spelling_length(&u) as i64);
    }

    #[test]
    fn text_roundtrip(u in word_strategy(12)) {
        prop_assert_eq!(Word::parse_with_alphabet(&u.to_string(), 3).unwrap(), u);
    }
}
