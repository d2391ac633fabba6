//! Property suites over corpora and generated diagrams.
//!
//! Each suite counts the cases it checked and collects violations; the
//! smallest violation is the reproducing case reported by the command line.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrowsum::{bracket, criteria_of, normalized, reduce_word, ColorabilityVerdict, CircleWord, CuspSide, ReducedCircle, WordToken};
use crate::braid::{relations, BraidWord, Letter};
use crate::coloring::{bar_parity_check, framing_space_connected, is_checkerboard_colorable, min_cut_points, replace_cutpoints_with_bars};
use crate::corpus::CorpusEntry;
use crate::diagram::{Role, Sign, Token, TwistedGaussCode};
use crate::enumerate::place_bars;
use crate::moves::{applicable_moves, apply_move, random_equivalent, MoveSite};
use crate::ArrowPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Invariance,
    Criteria,
    FramingConnectivity,
    BarParity,
    Confluence,
    ClassicalAs0,
    BraidRelations,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Invariance,
        Property::Criteria,
        Property::FramingConnectivity,
        Property::BarParity,
        Property::Confluence,
        Property::ClassicalAs0,
        Property::BraidRelations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Invariance => "invariance",
            Property::Criteria => "criteria",
            Property::FramingConnectivity => "framing-connectivity",
            Property::BarParity => "bar-parity",
            Property::Confluence => "confluence",
            Property::ClassicalAs0 => "classical-as0",
            Property::BraidRelations => "braid-relations",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown property '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub steps: usize,
    pub seed: u64,
    /// Random move walks for the invariance suite.
    pub walks: usize,
    /// Crossing cap for move walks.
    pub max_crossings: usize,
    /// Generated diagrams or contexts for the sampling suites.
    pub samples: usize,
    /// Longest circle word in the confluence suite.
    pub max_word_len: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { steps: 20, seed: 42, walks: 200, max_crossings: 8, samples: 100, max_word_len: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub case: String,
    pub detail: String,
    /// Size used to pick the smallest reproducing case.
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub property: Property,
    pub cases: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn smallest_violation(&self) -> Option<&Violation> {
        self.violations.iter().min_by_key(|v| (v.size, v.case.len()))
    }
}

struct Tally {
    cases: usize,
    violations: Vec<Violation>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, violations: Vec::new() }
    }

    fn check(&mut self, ok: bool, size: usize, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(Violation { case: case(), detail: detail(), size });
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.violations.extend(other.violations);
    }

    fn report(self, property: Property) -> CheckReport {
        CheckReport { property, cases: self.cases, violations: self.violations }
    }
}

pub fn run_check(property: Property, corpus: &[CorpusEntry], opts: &CheckOptions) -> CheckReport {
    let t = match property {
        Property::Invariance => invariance(corpus, opts),
        Property::Criteria => criteria(corpus, opts),
        Property::FramingConnectivity => framing_connectivity(corpus, opts),
        Property::BarParity => bar_parity(corpus, opts),
        Property::Confluence => confluence(opts.max_word_len),
        Property::ClassicalAs0 => classical_as0(),
        Property::BraidRelations => braid_relations(opts),
    };
    t.report(property)
}

/// Random bar-free diagram with `n` crossings on at most `components`
/// components; every component carries at least one pass.
pub fn random_virtual_code<R: Rng>(rng: &mut R, n: usize, components: usize) -> TwistedGaussCode {
    let mut tokens: Vec<Token> = (1..=n as u32)
        .flat_map(|id| {
            let s = if rng.gen() { Sign::Positive } else { Sign::Negative };
            [Token::over(id, s), Token::under(id, s)]
        })
        .collect();
    tokens.shuffle(rng);
    let k = components.clamp(1, (2 * n).max(1));
    let mut cuts: Vec<usize> = (1..tokens.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut comps = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain([tokens.len()]) {
        comps.push(tokens[prev..c].to_vec());
        prev = c;
    }
    TwistedGaussCode::new(comps).expect("generated code is valid")
}

/// Random diagram with bars scattered over its arcs.
pub fn random_twisted_code<R: Rng>(rng: &mut R, n: usize, components: usize, max_bars: usize) -> TwistedGaussCode {
    let d = random_virtual_code(rng, n, components);
    let arcs = d.arcs().len();
    let count = rng.gen_range(0..=max_bars);
    let chosen: Vec<usize> = (0..count).map(|_| rng.gen_range(0..arcs)).collect();
    // place_bars adds one bar per listed arc, repeats included
    place_bars(&d, &chosen)
}

fn kink_factor(sign: Sign) -> ArrowPolynomial {
    let p = ArrowPolynomial::a_power(3 * sign.value());
    -p
}

fn invariance(corpus: &[CorpusEntry], opts: &CheckOptions) -> Tally {
    let mut t = Tally::new();
    let swept: Vec<&CorpusEntry> = corpus.iter().filter(|e| e.code.crossing_count() <= opts.max_crossings).collect();
    let per_entry: Vec<Tally> = swept
        .par_iter()
        .map(|e| {
            let mut t = Tally::new();
            let d = &e.code;
            let (Ok(base), Ok(norm)) = (bracket(d), normalized(d)) else { return t };
            for site in applicable_moves(d) {
                let Ok(moved) = apply_move(d, &site) else {
                    t.check(false, d.crossing_count(), || format!("{}: {d}", e.name), || format!("{site} failed to apply"));
                    continue;
                };
                let same = normalized(&moved).map(|p| p == norm).unwrap_or(false);
                t.check(same, moved.crossing_count(), || format!("{}: {d} -> {moved}", e.name), || format!("{site} changed the normalized polynomial"));
                let expected = match &site {
                    MoveSite::R1Insert { sign, .. } => &base * &kink_factor(*sign),
                    MoveSite::R1Delete { crossing } => {
                        let s = d.sign_of(*crossing).expect("site crossing exists");
                        // dividing by -A^{3s} is multiplying by -A^{-3s}
                        &base * &kink_factor(s.flip())
                    }
                    _ => base.clone(),
                };
                let ok = bracket(&moved).map(|p| p == expected).unwrap_or(false);
                t.check(ok, moved.crossing_count(), || format!("{}: {d} -> {moved}", e.name), || format!("{site} scaled the bracket wrongly"));
            }
            t
        })
        .collect();
    for p in per_entry {
        t.merge(p);
    }
    if corpus.is_empty() {
        return t;
    }
    let walks: Vec<Tally> = (0..opts.walks)
        .into_par_iter()
        .map(|k| {
            let mut t = Tally::new();
            let e = &corpus[k % corpus.len()];
            if e.code.crossing_count() > opts.max_crossings {
                return t;
            }
            let seed = opts.seed.wrapping_add(k as u64);
            let walked = random_equivalent(&e.code, opts.steps, seed, opts.max_crossings);
            let (Ok(a), Ok(b)) = (normalized(&e.code), normalized(&walked)) else { return t };
            t.check(a == b, walked.crossing_count(), || format!("{}: {} -> {walked}", e.name, e.code), || format!("walk with seed {seed} changed the normalized polynomial"));
            let m = b.max_m_degree() as usize;
            t.check(m <= walked.bar_count(), walked.crossing_count(), || walked.to_string(), || format!("M-degree {m} exceeds {} bars", walked.bar_count()));
            t
        })
        .collect();
    for w in walks {
        t.merge(w);
    }
    t
}

/// Colorable twisted diagrams from minimum cut-point framings of random
/// and corpus virtual diagrams.
pub fn colorable_twisted_samples(corpus: &[CorpusEntry], samples: usize, seed: u64) -> Vec<TwistedGaussCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sources: Vec<TwistedGaussCode> =
        corpus.iter().map(|e| e.code.clone()).filter(|d| !d.has_bars() && d.crossing_count() <= 8).collect();
    while sources.len() < samples {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=2);
        sources.push(random_virtual_code(&mut rng, n, k));
    }
    sources.truncate(samples.max(1));
    sources
        .into_iter()
        .map(|d| {
            let w = min_cut_points(&d).expect("bar-free source").witness;
            replace_cutpoints_with_bars(&d, &w).expect("minimum witness is a framing")
        })
        .collect()
}

fn criteria(corpus: &[CorpusEntry], opts: &CheckOptions) -> Tally {
    let mut t = Tally::new();
    let diagrams = colorable_twisted_samples(corpus, opts.samples, opts.seed);
    let results: Vec<_> = diagrams
        .par_iter()
        .map(|d| (d, is_checkerboard_colorable(d).colorable, normalized(d).map(|p| criteria_of(&p))))
        .collect();
    for (d, colorable, report) in results {
        t.check(colorable, d.crossing_count(), || d.to_string(), || "witness diagram is not colorable".into());
        let ok = matches!(&report, Ok(r) if r.verdict == ColorabilityVerdict::Inconclusive);
        t.check(ok, d.crossing_count(), || d.to_string(), || format!("colorable diagram fails a criterion: {report:?}"));
    }
    t
}

fn framing_connectivity(corpus: &[CorpusEntry], opts: &CheckOptions) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut diagrams: Vec<TwistedGaussCode> =
        corpus.iter().map(|e| e.code.clone()).filter(|d| !d.has_bars() && d.crossing_count() <= 4).collect();
    for _ in 0..opts.samples.min(20) {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=2);
        diagrams.push(random_virtual_code(&mut rng, n, k));
    }
    let results: Vec<_> = diagrams.par_iter().map(|d| (d, framing_space_connected(d, 3))).collect();
    for (d, r) in results {
        let ok = matches!(&r, Ok(r) if r.connected);
        t.check(ok, d.crossing_count(), || d.to_string(), || format!("{r:?}"));
    }
    t
}

fn bar_parity(corpus: &[CorpusEntry], opts: &CheckOptions) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut diagrams: Vec<TwistedGaussCode> = corpus.iter().map(|e| e.code.clone()).collect();
    for _ in 0..opts.samples {
        let n = rng.gen_range(0..=5);
        let k = rng.gen_range(1..=2);
        diagrams.push(random_twisted_code(&mut rng, n, k, 4));
    }
    diagrams.extend(colorable_twisted_samples(&[], opts.samples, opts.seed));
    for d in diagrams {
        let r = bar_parity_check(&d);
        t.check(r.consistent, d.crossing_count(), || d.to_string(), || format!("{r:?}"));
    }
    t
}

const L: WordToken = WordToken::Cusp(CuspSide::L);
const R: WordToken = WordToken::Cusp(CuspSide::R);
const B: WordToken = WordToken::Bar;

/// Outcome set of the rewrite system on circle words, computed without
/// using [`reduce_word`].
///
/// Words of one length are grouped into classes under rotation and under
/// moving a bar past a cusp (which flips the cusp). Deleting an adjacent
/// equal cusp pair or an adjacent bar pair leads to a class two shorter. A
/// class from which no deletion is possible is terminal and is read off
/// directly; the outcome set of any other class is the union over its
/// deletions. The rewrite system is confluent iff every set is a singleton.
pub struct ConfluenceOracle {
    classes: Vec<HashMap<Vec<WordToken>, usize>>,
    outcomes: Vec<Vec<BTreeSet<Result<ReducedCircle, String>>>>,
}

impl ConfluenceOracle {
    pub fn new(max_len: usize) -> Self {
        let mut classes = Vec::new();
        let mut outcomes: Vec<Vec<BTreeSet<Result<ReducedCircle, String>>>> = Vec::new();
        for len in 0..=max_len {
            let words = words_of_len(len);
            let class = classify(&words);
            let n_classes = class.values().copied().max().map_or(0, |m| m + 1);
            let mut sets: Vec<BTreeSet<Result<ReducedCircle, String>>> = vec![BTreeSet::new(); n_classes];
            let mut has_deletion = vec![false; n_classes];
            for (w, &c) in &class {
                for i in 0..len {
                    let j = (i + 1) % len;
                    if len < 2 || w[i] != w[j] {
                        continue;
                    }
                    has_deletion[c] = true;
                    let shorter: Vec<WordToken> =
                        (0..len).filter(|&k| k != i && k != j).map(|k| w[k]).collect();
                    let sc: usize = classes_lookup(&classes, &shorter);
                    let sub = outcomes[len - 2][sc].clone();
                    sets[c].extend(sub);
                }
            }
            for (w, &c) in &class {
                if !has_deletion[c] {
                    sets[c].insert(terminal(w));
                }
            }
            classes.push(class);
            outcomes.push(sets);
        }
        ConfluenceOracle { classes, outcomes }
    }

    /// Every normal form reachable from `w`.
    pub fn outcomes(&self, w: &[WordToken]) -> &BTreeSet<Result<ReducedCircle, String>> {
        let c = self.classes[w.len()][w];
        &self.outcomes[w.len()][c]
    }

    pub fn words(&self) -> impl Iterator<Item = &Vec<WordToken>> {
        self.classes.iter().flat_map(|m| m.keys())
    }
}

fn classes_lookup(classes: &[HashMap<Vec<WordToken>, usize>], w: &[WordToken]) -> usize {
    classes[w.len()][w]
}

fn words_of_len(len: usize) -> Vec<Vec<WordToken>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<WordToken>| {
                [L, R, B].into_iter().map(move |t| {
                    let mut v = w.clone();
                    v.push(t);
                    v
                })
            })
            .collect();
    }
    out.retain(|w| w.iter().filter(|t| **t != B).count() % 2 == 0);
    out
}

fn flip(t: WordToken) -> WordToken {
    match t {
        WordToken::Cusp(s) => WordToken::Cusp(s.flip()),
        WordToken::Bar => WordToken::Bar,
    }
}

fn classify(words: &[Vec<WordToken>]) -> HashMap<Vec<WordToken>, usize> {
    let mut class: HashMap<Vec<WordToken>, usize> = HashMap::new();
    let mut next = 0;
    for w in words {
        if class.contains_key(w) {
            continue;
        }
        let mut stack = vec![w.clone()];
        class.insert(w.clone(), next);
        while let Some(u) = stack.pop() {
            let n = u.len();
            let mut neighbours = Vec::new();
            if n > 1 {
                let mut r = u.clone();
                r.rotate_left(1);
                neighbours.push(r);
            }
            for i in 0..n.saturating_sub(1) {
                let (a, b) = (u[i], u[i + 1]);
                if (a == B) != (b == B) {
                    let mut v = u.clone();
                    v[i] = flip(b);
                    v[i + 1] = flip(a);
                    neighbours.push(v);
                }
            }
            for v in neighbours {
                if !class.contains_key(&v) {
                    class.insert(v.clone(), next);
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    class
}

fn terminal(w: &[WordToken]) -> Result<ReducedCircle, String> {
    let bars = w.iter().filter(|t| **t == B).count();
    let cusps = w.len() - bars;
    match (bars, cusps) {
        (0, 0) => Ok(ReducedCircle::Plain),
        (1, 0) => Ok(ReducedCircle::BarLoop),
        (0, n) if w.iter().zip(w.iter().cycle().skip(1)).all(|(a, b)| a != b) => Ok(ReducedCircle::Kn(n as u32 / 2)),
        _ => Err(CircleWord(w.to_vec()).to_string()),
    }
}

fn confluence(max_len: usize) -> Tally {
    let mut t = Tally::new();
    let oracle = ConfluenceOracle::new(max_len);
    let mut words: Vec<&Vec<WordToken>> = oracle.words().collect();
    words.sort_by_key(|w| (w.len(), (*w).clone()));
    for w in words {
        let got = reduce_word(&CircleWord(w.clone())).map_err(|e| e.to_string());
        let outs = oracle.outcomes(w);
        let ok = outs.len() == 1 && outs.iter().next() == Some(&got);
        t.check(ok, w.len(), || CircleWord(w.clone()).to_string(), || format!("reachable {outs:?}, reduce_word gives {got:?}"));
    }
    t
}

/// Every word in `σ_i^{±1}` with up to `max_letters` letters on `strands`
/// strands.
pub fn sigma_words(strands: usize, max_letters: usize) -> Vec<BraidWord> {
    let alphabet: Vec<Letter> = (1..strands).flat_map(|i| [Letter::Sigma(i), Letter::SigmaInv(i)]).collect();
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_letters {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out.into_iter().map(|l| BraidWord::new(strands, l).expect("letters in range")).collect()
}

fn classical_as0() -> Tally {
    let mut t = Tally::new();
    let words: Vec<BraidWord> = [2, 3].into_iter().flat_map(|n| sigma_words(n, 6)).collect();
    let results: Vec<_> = words
        .par_iter()
        .map(|w| {
            let d = w.closure().expect("valid word");
            (w, d.crossing_count(), normalized(&d))
        })
        .collect();
    for (w, n, p) in results {
        let ok = matches!(&p, Ok(p) if !p.contains_m() && !p.contains_k() && p.k_degree_set() == BTreeSet::from([0]));
        t.check(ok, n, || format!("braid {} {w}", w.strands()), || format!("{p:?}"));
    }
    t
}

fn random_letters<R: Rng>(rng: &mut R, strands: usize, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands);
            match rng.gen_range(0..5) {
                0 => Letter::Sigma(i),
                1 => Letter::SigmaInv(i),
                2 => Letter::Virtual(i),
                _ => Letter::Bar(rng.gen_range(1..=strands)),
            }
        })
        .collect()
}

fn braid_relations(opts: &CheckOptions) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut jobs = Vec::new();
    for strands in [3, 4] {
        let contexts = 1 + opts.samples / 10;
        for rel in relations(strands) {
            for k in 0..contexts {
                let (pre, post) = if k == 0 {
                    (Vec::new(), Vec::new())
                } else {
                    let a = rng.gen_range(0..=2);
                    let b = rng.gen_range(0..=2);
                    (random_letters(&mut rng, strands, a), random_letters(&mut rng, strands, b))
                };
                let build = |mid: &[Letter]| {
                    let letters: Vec<Letter> = pre.iter().chain(mid).chain(&post).copied().collect();
                    BraidWord::new(strands, letters).expect("letters in range")
                };
                jobs.push((rel.name, build(&rel.lhs), build(&rel.rhs)));
            }
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(name, l, r)| {
            let pl = normalized(&l.closure().expect("valid"));
            let pr = normalized(&r.closure().expect("valid"));
            (name, l, r, pl.is_ok() && pl == pr)
        })
        .collect();
    for (name, l, r, ok) in results {
        t.check(ok, l.letters().len(), || format!("braid {} {l} | {r}", l.strands()), || format!("relation '{name}' changes the closure"));
    }
    t
}

/// Every two-crossing code (one or two components, any signs) with at most
/// `max_bars` bars, up to rotation and T1.
pub fn two_crossing_codes(max_bars: usize) -> Vec<TwistedGaussCode> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let passes = [(1, Role::Over), (1, Role::Under), (2, Role::Over), (2, Role::Under)];
    let perms = permutations(4);
    for (s1, s2) in [(Sign::Positive, Sign::Positive), (Sign::Positive, Sign::Negative), (Sign::Negative, Sign::Positive), (Sign::Negative, Sign::Negative)] {
        for perm in &perms {
            let toks: Vec<Token> = perm
                .iter()
                .map(|&k| {
                    let (id, role) = passes[k];
                    let s = if id == 1 { s1 } else { s2 };
                    Token::Pass(crate::diagram::Pass::new(id, role, s))
                })
                .collect();
            for split in 0..4 {
                let comps = if split == 0 { vec![toks.clone()] } else { vec![toks[..split].to_vec(), toks[split..].to_vec()] };
                let d = TwistedGaussCode::new(comps).expect("valid");
                let arcs = d.arcs().len();
                for bars in subsets_upto(arcs, max_bars) {
                    let e = crate::moves::t1_normal_form(&place_bars(&d, &bars)).rotation_canonical();
                    if seen.insert(e.clone()) {
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn subsets_upto(n: usize, max: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize <= max).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

/// Codes from [`two_crossing_codes`] whose normalized polynomial equals
/// `target`.
pub fn search_two_crossing(target: &ArrowPolynomial, max_bars: usize) -> Vec<TwistedGaussCode> {
    two_crossing_codes(max_bars).into_par_iter().filter(|d| normalized(d).map(|p| &p == target).unwrap_or(false)).collect()
}
