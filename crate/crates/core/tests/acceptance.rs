//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! non-zero when a blocking criterion fails.
//!
//! All polynomial comparisons are exact structural equality of canonical
//! polynomials; no numeric tolerance is involved anywhere.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use twistpoly::check::{run_check, search_two_crossing, CheckOptions, Property};
use twistpoly::coloring::{bar_parity_check, framing_space_connected, is_checkerboard_colorable, min_cut_points};
use twistpoly::corpus::{default_corpus, CorpusEntry};
use twistpoly::diagram::{Role, Token};
use twistpoly::enumerate::enumerate_bar_placements;
use twistpoly::moves::random_equivalent;
use twistpoly::poly::MonomialKey;
use twistpoly::{bracket, normalized, ArrowPolynomial, TwistedGaussCode};

/// Whole-suite wall-clock budget.
const RUNTIME_BUDGET: Duration = Duration::from_secs(60);
/// Exact equality: polynomials must agree term by term.
const COEFFICIENT_TOLERANCE: i64 = 0;
/// Largest corpus diagram swept by the brute-force bracket.
const ORACLE_MAX_CROSSINGS: usize = 6;
const FRAMING_MAX_CROSSINGS: usize = 4;
const FRAMING_BOUND: u32 = 3;
const M_DEGREE_WALKS: usize = 50;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    blocking: bool,
    detail: String,
}

fn blocking(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, blocking: true, detail: detail.into() }
}

fn a(e: i64) -> ArrowPolynomial {
    ArrowPolynomial::a_power(e)
}

fn int(c: i64) -> ArrowPolynomial {
    ArrowPolynomial::constant(BigInt::from(c))
}

fn k1() -> ArrowPolynomial {
    ArrowPolynomial::k(1)
}

fn m() -> ArrowPolynomial {
    ArrowPolynomial::m_power(1)
}

fn code(s: &str) -> TwistedGaussCode {
    s.parse().expect("valid code")
}

/// Largest coefficient gap between two polynomials.
fn distance(p: &ArrowPolynomial, q: &ArrowPolynomial) -> BigInt {
    (p - q).terms().map(|(_, c)| if *c < BigInt::from(0) { -c.clone() } else { c.clone() }).max().unwrap_or_default()
}

fn exact(p: &ArrowPolynomial, q: &ArrowPolynomial) -> bool {
    distance(p, q) <= BigInt::from(COEFFICIENT_TOLERANCE)
}

fn mirror(p: &ArrowPolynomial) -> ArrowPolynomial {
    ArrowPolynomial::from_terms(p.terms().map(|(k, c)| (MonomialKey::new(-k.a_exp, k.k.clone(), k.m_exp), c.clone())))
}

fn criterion_1() -> Outcome {
    let expected = &a(-6) * &(&a(2) + &(&(&-a(4) + &int(1)) * &k1()));
    let got = normalized(&code("O1+ O2+ U1+ U2+")).unwrap();
    blocking(exact(&got, &expected), format!("expected {expected}, computed {got}"))
}

fn criterion_2() -> Outcome {
    let a4 = a(-4);
    let expected = [
        ("2.1", &a(-6) * &(&(&a(2) - &a(4)) + &int(1))),
        ("2.2", &a(-6) * &(&(&(&(&int(-1) + &a(4)) + &a(6)) * &m()) * &a4)),
        ("2.3", &a(-6) * &(&m() * &(&(&(&(-&(&k1() * &a4)) + &a(2)) - &k1()) + &int(2)))),
        ("2.4", &a(-6) * &(&(&(&(-&(&m().pow(2) * &a4)) + &a(2)) + &k1()) - &(&m().pow(2) - &int(1)))),
    ];
    let classes = enumerate_bar_placements(&code("O1+ O2+ U1+ U2+"), 2).unwrap();
    let twisted: Vec<&ArrowPolynomial> =
        classes.iter().filter(|c| c.placements.iter().all(|p| !p.arcs.is_empty())).map(|c| &c.polynomial).collect();
    let mut missing = Vec::new();
    for (name, p) in &expected {
        if !twisted.iter().any(|q| exact(q, p)) {
            missing.push(format!("{name} = {p}"));
        }
    }
    let found: Vec<String> = twisted.iter().map(|p| p.to_string()).collect();
    let detail = if missing.is_empty() {
        format!("{} barred classes, all four values present", twisted.len())
    } else {
        format!("missing {}; barred classes: {}", missing.join(", "), found.join(" ; "))
    };
    blocking(missing.is_empty(), detail)
}

fn criterion_3(corpus: &[CorpusEntry]) -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for e in corpus.iter().filter(|e| !e.code.has_bars() && e.code.crossing_count() <= ORACLE_MAX_CROSSINGS) {
        n += 1;
        if bracket(&e.code).unwrap().forget_k() != common::kauffman_bracket(&e.code) {
            bad.push(e.name.clone());
        }
    }
    blocking(bad.is_empty() && n > 0, format!("{n} diagrams, mismatches: {bad:?}"))
}

fn suite(property: Property, corpus: &[CorpusEntry], opts: &CheckOptions) -> Outcome {
    let r = run_check(property, corpus, opts);
    let detail = match r.smallest_violation() {
        None => format!("{} cases", r.cases),
        Some(v) => format!("{} of {} cases failed, smallest: {} ({})", r.violations.len(), r.cases, v.case, v.detail),
    };
    blocking(r.passed() && r.cases > 0, detail)
}

fn criterion_4(corpus: &[CorpusEntry]) -> Outcome {
    let opts = CheckOptions { walks: 200, steps: 20, max_crossings: 8, ..Default::default() };
    let too_big: Vec<&str> = corpus.iter().filter(|e| e.code.crossing_count() > opts.max_crossings).map(|e| e.name.as_str()).collect();
    let mut o = suite(Property::Invariance, corpus, &opts);
    if !too_big.is_empty() {
        o.pass = false;
        o.detail += &format!("; not swept: {too_big:?}");
    }
    o
}

fn criterion_6(corpus: &[CorpusEntry]) -> Outcome {
    let mut n = 0;
    let mut bad = Vec::new();
    for e in corpus.iter().filter(|e| !e.code.has_bars() && e.code.crossing_count() <= FRAMING_MAX_CROSSINGS) {
        n += 1;
        match framing_space_connected(&e.code, FRAMING_BOUND) {
            Ok(r) if r.connected => {}
            other => bad.push(format!("{}: {other:?}", e.name)),
        }
    }
    blocking(bad.is_empty() && n > 0, format!("{n} diagrams, disconnected: {bad:?}"))
}

/// Minimum cut points through alternate orientations: every edge carries an
/// orientation at its start that flips at each cut point, and at a crossing
/// the two ends of one strand point the same way while the two strands point
/// opposite ways.
fn cut_points_by_orientation(d: &TwistedGaussCode) -> u32 {
    let mut end_at = BTreeMap::new();
    let mut start_at = BTreeMap::new();
    let mut edges = 0;
    for comp in d.components() {
        let passes: Vec<_> = comp.iter().filter_map(|t| if let Token::Pass(p) = t { Some(*p) } else { None }).collect();
        for (i, p) in passes.iter().enumerate() {
            start_at.insert((p.crossing, p.role), edges + i);
            let q = passes[(i + 1) % passes.len()];
            end_at.insert((q.crossing, q.role), edges + i);
        }
        edges += passes.len();
    }
    assert!(edges <= 12, "exhaustive oracle");
    let mut best = u32::MAX;
    for cuts in 0u32..1 << edges {
        if cuts.count_ones() >= best {
            continue;
        }
        for s in 0u32..1 << edges {
            let bit = |x: u32, e: usize| x >> e & 1 == 1;
            // whether the strand through (c, role) points into c on its incoming edge
            let into = |c: u32, role: Role| {
                let e = end_at[&(c, role)];
                bit(s, e) ^ bit(cuts, e)
            };
            let ok = d.crossing_ids().into_iter().all(|c| {
                let same = |role: Role| into(c, role) == !bit(s, start_at[&(c, role)]);
                same(Role::Over) && same(Role::Under) && into(c, Role::Over) != into(c, Role::Under)
            });
            if ok {
                best = cuts.count_ones();
                break;
            }
        }
    }
    best
}

fn criterion_7(corpus: &[CorpusEntry]) -> Outcome {
    let mut bad = Vec::new();
    for e in corpus.iter().filter(|e| !e.code.has_bars()) {
        let p = min_cut_points(&e.code).unwrap().p_d;
        let n = e.code.crossing_count() as u32;
        if !p.is_multiple_of(2) || p > 2 * n {
            bad.push(format!("{}: P_d {p} with {n} crossings", e.name));
        }
        if 2 * n <= 8 && cut_points_by_orientation(&e.code) != p {
            bad.push(format!("{}: P_d {p}, orientation oracle {}", e.name, cut_points_by_orientation(&e.code)));
        }
    }
    let vk = code("O1+ O2+ U1+ U2+");
    let (p_vk, oracle_vk) = (min_cut_points(&vk).unwrap().p_d, cut_points_by_orientation(&vk));
    let p_tref = min_cut_points(&code("O1+ U2+ O3+ U1+ O2+ U3+")).unwrap().p_d;
    let pass = bad.is_empty() && p_vk == 2 && oracle_vk == 2 && p_tref == 0;
    blocking(pass, format!("virtual knot {p_vk} (oracle {oracle_vk}), trefoil {p_tref}, problems: {bad:?}"))
}

fn criterion_8(corpus: &[CorpusEntry]) -> Outcome {
    let mut n = 0;
    let mut bad = Vec::new();
    for e in corpus.iter().filter(|e| e.code.has_bars() && is_checkerboard_colorable(&e.code).colorable) {
        n += 1;
        let r = bar_parity_check(&e.code);
        if !r.even {
            bad.push(format!("{}: {r:?}", e.name));
        }
    }
    blocking(bad.is_empty() && n > 0, format!("{n} colorable twisted diagrams, odd: {bad:?}"))
}

fn criterion_9(corpus: &[CorpusEntry]) -> Outcome {
    let twisted: Vec<&CorpusEntry> = corpus.iter().filter(|e| e.code.has_bars()).collect();
    let mut bad = Vec::new();
    for e in &twisted {
        let deg = normalized(&e.code).unwrap().max_m_degree() as usize;
        if deg > e.code.bar_count() {
            bad.push(format!("{}: M-degree {deg}", e.name));
        }
    }
    for k in 0..M_DEGREE_WALKS {
        let e = twisted[k % twisted.len()];
        let w = random_equivalent(&e.code, 20, k as u64, 8);
        let deg = normalized(&w).unwrap().max_m_degree() as usize;
        if deg > w.bar_count() {
            bad.push(format!("walk {k} from {}: {w} has M-degree {deg}", e.name));
        }
    }
    blocking(bad.is_empty(), format!("{} diagrams and {M_DEGREE_WALKS} walks, violations: {bad:?}", twisted.len()))
}

fn criterion_13() -> Outcome {
    let k1_target = &(&-(&(&a(4) + &int(1)) * &k1().pow(2)) + &(&(&a(4) + &a(2)) + &int(1))) * &a(-2);
    let k2_head = &(&(&(&a(8) + &(&int(2) * &a(6))) + &(&int(2) * &a(4))) + &(&int(2) * &a(2))) + &int(1);
    let k2_tail = &(&(&(&a(8) + &(&int(2) * &a(6))) + &(&int(3) * &a(4))) + &(&int(2) * &a(2))) + &int(1);
    let k2_target = &(&-(&k2_head * &k1().pow(2)) + &k2_tail) * &a(-4);
    let mut lines = Vec::new();
    for (name, t) in [("K1", k1_target), ("K2", k2_target)] {
        let hits = search_two_crossing(&t, 2);
        let mirrored = search_two_crossing(&mirror(&t), 2);
        let show = |v: &[TwistedGaussCode]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" | ");
        lines.push(format!("{name}: {} hits [{}], {} mirror hits [{}]", hits.len(), show(&hits), mirrored.len(), show(&mirrored)));
    }
    Outcome { pass: true, blocking: false, detail: format!("report only; {}", lines.join("; ")) }
}

fn main() {
    let started = Instant::now();
    let corpus = default_corpus();
    let defaults = CheckOptions::default();
    let criteria: Vec<Criterion> = vec![
        ("virtual 2-crossing knot exact value", Box::new(criterion_1)),
        ("four twisted 2-crossing knots", Box::new(criterion_2)),
        ("bracket equals brute-force Kauffman bracket", Box::new(|| criterion_3(&corpus))),
        ("invariance under moves", Box::new(|| criterion_4(&corpus))),
        ("colorability criteria on colorable samples", Box::new(|| suite(Property::Criteria, &corpus, &CheckOptions { samples: 100, ..defaults.clone() }))),
        ("framing-space connectivity", Box::new(|| criterion_6(&corpus))),
        ("cut-point arithmetic", Box::new(|| criterion_7(&corpus))),
        ("bar parity", Box::new(|| criterion_8(&corpus))),
        ("M-degree bound", Box::new(|| criterion_9(&corpus))),
        ("cusp reduction confluence", Box::new(|| suite(Property::Confluence, &corpus, &CheckOptions { max_word_len: 10, ..defaults.clone() }))),
        ("classical braid closures have AS = {0}", Box::new(|| suite(Property::ClassicalAs0, &corpus, &defaults))),
        ("braid relations", Box::new(|| suite(Property::BraidRelations, &corpus, &defaults))),
        ("search for the K1 and K2 values", Box::new(criterion_13)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = match (o.pass, o.blocking) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (non-blocking)",
        };
        println!("{tag} {:>2} {name} [{:.2}s]: {}", i + 1, t.elapsed().as_secs_f64(), o.detail);
        if !o.pass && o.blocking {
            failed.push(i + 1);
        }
    }
    let elapsed = started.elapsed();
    let in_budget = elapsed <= RUNTIME_BUDGET;
    println!("{} runtime {:.2}s within {}s", if in_budget { "PASS" } else { "FAIL" }, elapsed.as_secs_f64(), RUNTIME_BUDGET.as_secs());
    if !failed.is_empty() || !in_budget {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
