use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistpoly::check::random_twisted_code;
use twistpoly::moves::{applicable_moves, apply_move, inverse};
use twistpoly::poly::{d_power, KProduct, MonomialKey};
use twistpoly::{bracket, normalized, ArrowPolynomial, TwistedGaussCode};

fn arb_key() -> impl Strategy<Value = MonomialKey> {
    (-12i64..12, prop::collection::vec((1u32..4, 1u32..3), 0..3), 0u32..3)
        .prop_map(|(a, k, m)| MonomialKey::new(a, KProduct::from_pairs(k), m))
}

fn arb_poly() -> impl Strategy<Value = ArrowPolynomial> {
    prop::collection::vec((arb_key(), -5i64..6), 0..6)
        .prop_map(|terms| ArrowPolynomial::from_terms(terms.into_iter().map(|(k, c)| (k, BigInt::from(c)))))
}

fn arb_diagram(max_crossings: usize, max_bars: usize) -> impl Strategy<Value = TwistedGaussCode> {
    (any::<u64>(), 0..=max_crossings, 1usize..=2).prop_map(move |(seed, n, k)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_twisted_code(&mut rng, n, k, max_bars)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &ArrowPolynomial::one(), p.clone());
    }

    #[test]
    fn writhe_normalization_composes(p in arb_poly(), a in -5i64..5, b in -5i64..5) {
        prop_assert_eq!(p.normalize_by_writhe(a).normalize_by_writhe(b), p.normalize_by_writhe(a + b));
    }

    #[test]
    fn loop_powers_multiply(a in 0u32..6, b in 0u32..6) {
        prop_assert_eq!(d_power::<BigInt>(a + b), &d_power::<BigInt>(a) * &d_power::<BigInt>(b));
    }

    #[test]
    fn text_and_json_roundtrip(p in arb_poly()) {
        let text: ArrowPolynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(&text, &p);
        prop_assert_eq!(ArrowPolynomial::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn codes_roundtrip_through_text(d in arb_diagram(6, 4)) {
        let back: TwistedGaussCode = d.to_string().parse().unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn writhe_ignores_rotation_and_labels(d in arb_diagram(6, 4), k in 0usize..12) {
        let r = d.rotated(0, k);
        prop_assert_eq!(r.writhe(), d.writhe());
        prop_assert_eq!(d.map_crossings(|c| 100 - c).writhe(), d.writhe());
        prop_assert_eq!(d.renumbered().writhe(), d.writhe());
    }

    #[test]
    fn polynomial_ignores_presentation(d in arb_diagram(5, 3), k in 0usize..12) {
        let p = normalized(&d).unwrap();
        prop_assert_eq!(normalized(&d.rotated(0, k)).unwrap(), p.clone());
        prop_assert_eq!(normalized(&d.renumbered()).unwrap(), p.clone());
        let order: Vec<usize> = (0..d.components().len()).rev().collect();
        prop_assert_eq!(normalized(&d.permuted_components(&order)).unwrap(), p);
    }

    #[test]
    fn moves_are_undone_by_their_inverse(d in arb_diagram(4, 3), pick in any::<prop::sample::Index>()) {
        let sites = applicable_moves(&d);
        prop_assume!(!sites.is_empty());
        let site = &sites[pick.index(sites.len())];
        let moved = apply_move(&d, site).unwrap();
        let back = apply_move(&moved, &inverse(&d, site).unwrap()).unwrap();
        prop_assert_eq!(back, d.clone());
        prop_assert_eq!(normalized(&moved).unwrap(), normalized(&d).unwrap());
    }

    #[test]
    fn bracket_has_no_odd_cusp_failures(d in arb_diagram(6, 4)) {
        prop_assert!(bracket(&d).is_ok());
    }
}
