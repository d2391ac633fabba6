mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistpoly::check::random_virtual_code;
use twistpoly::corpus::default_corpus;
use twistpoly::diagram::Sign;
use twistpoly::moves::r3_pattern_valid;
use twistpoly::{bracket, normalized, ArrowPolynomial, TwistedGaussCode};

#[test]
fn bracket_matches_brute_force_on_corpus() {
    let mut checked = 0;
    for e in default_corpus() {
        if e.code.has_bars() || e.code.crossing_count() > 6 {
            continue;
        }
        let got = bracket(&e.code).unwrap().forget_k();
        assert_eq!(got, common::kauffman_bracket(&e.code), "{}", e.name);
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn bracket_matches_brute_force_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=7 {
        for k in 1..=3 {
            for _ in 0..6 {
                let d = random_virtual_code(&mut rng, n, k);
                assert_eq!(bracket(&d).unwrap().forget_k(), common::kauffman_bracket(&d), "{d}");
            }
        }
    }
}

#[test]
fn trefoil_matches_the_known_f_polynomial() {
    let d: TwistedGaussCode = "O1+ U2+ O3+ U1+ O2+ U3+".parse().unwrap();
    let expected: ArrowPolynomial = "A^-4 + A^-12 - A^-16".parse().unwrap();
    assert_eq!(normalized(&d).unwrap(), expected);
}

#[test]
fn r3_predicate_matches_line_arrangements() {
    let geometric = common::r3_geometric_patterns();
    let signs = [Sign::Positive, Sign::Negative];
    let mut predicate = std::collections::BTreeSet::new();
    for sx in signs {
        for sy in signs {
            for sz in signs {
                for bits in 0..8 {
                    let (t, m, b) = (bits & 1 == 1, bits & 2 == 2, bits & 4 == 4);
                    if r3_pattern_valid(sx, sy, sz, t, m, b) {
                        predicate.insert((sx, sy, sz, t, m, b));
                    }
                }
            }
        }
    }
    assert_eq!(predicate.len(), 16);
    assert_eq!(geometric, predicate);
}
