//! Oriented state sum for the arrow polynomial of twisted link diagrams.
//!
//! Every classical crossing is smoothed either along the orientation
//! (oriented smoothing, no cusps) or against it (disoriented smoothing, one
//! cusp on each of the two resulting passages). Tracing the smoothed diagram
//! gives state circles, each read as a cyclic word of cusps and bars. The
//! word reduces to a plain loop, an irreducible `K_n`, or a loop carrying a
//! single bar (`M`).
//!
//! # Cusp sides
//!
//! Draw a positive crossing with both strands pointing up, over strand from
//! SW to NE. The disoriented smoothing joins the two incoming ends (SW, SE)
//! and the two outgoing ends (NW, NE); both cusps point at the centre of the
//! crossing. A circle entering the lower arc at SW has the centre on its
//! left, at SE on its right; entering the upper arc at NW has it on its
//! right, at NE on its left. For the positive crossing SW/NE are over ends,
//! for the negative one (over strand SE to NW) they are under ends, which
//! collapses to: the cusp is on the left iff the entry half-edge is an over
//! end of a positive crossing or an under end of a negative one.
//!
//! Sides are relative to the direction of travel, so they are only
//! comparable along a single circle, and a bar (a half twist of the
//! surface) swaps them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{Role, Sign, Token, TwistedGaussCode};
use crate::poly::{d_power, ArrowPoly, Coefficient, KProduct, MonomialKey};

/// Default cap on crossings for the exhaustive state sum.
pub const DEFAULT_MAX_CROSSINGS: usize = 24;

/// Environment variable that overrides [`DEFAULT_MAX_CROSSINGS`].
pub const MAX_CROSSINGS_ENV: &str = "TWISTPOLY_MAX_CROSSINGS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrowError {
    #[error("diagram has {crossings} crossings; the state sum is limited to {limit}")]
    TooManyCrossings { crossings: usize, limit: usize },
    #[error("smoothing state does not cover crossing {0}")]
    IncompleteState(u32),
    #[error("circle word has an odd number of cusps")]
    OddCuspCount,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSumConfig {
    pub max_crossings: usize,
    pub parallel: bool,
}

impl Default for StateSumConfig {
    fn default() -> Self {
        StateSumConfig { max_crossings: DEFAULT_MAX_CROSSINGS, parallel: true }
    }
}

impl StateSumConfig {
    /// Default config with the crossing cap taken from
    /// `TWISTPOLY_MAX_CROSSINGS` when set to a valid number.
    pub fn from_env() -> Self {
        let max_crossings = std::env::var(MAX_CROSSINGS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_CROSSINGS);
        StateSumConfig { max_crossings, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    Oriented,
    Disoriented,
}

/// A smoothing choice for every crossing.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SmoothingState {
    pub choice: BTreeMap<u32, Smoothing>,
}

impl SmoothingState {
    pub fn uniform(d: &TwistedGaussCode, s: Smoothing) -> Self {
        SmoothingState { choice: d.crossing_ids().into_iter().map(|id| (id, s)).collect() }
    }

    pub fn with(mut self, crossing: u32, s: Smoothing) -> Self {
        self.choice.insert(crossing, s);
        self
    }

    /// State number `bits` in the enumeration order used by the sum: bit `i`
    /// set means the `i`-th smallest crossing id is smoothed disoriented.
    pub fn from_bits(d: &TwistedGaussCode, bits: u64) -> Self {
        let choice = d
            .crossing_ids()
            .into_iter()
            .enumerate()
            .map(|(i, id)| (id, if bits >> i & 1 == 1 { Smoothing::Disoriented } else { Smoothing::Oriented }))
            .collect();
        SmoothingState { choice }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CuspSide {
    L,
    R,
}

impl CuspSide {
    pub fn flip(self) -> CuspSide {
        match self {
            CuspSide::L => CuspSide::R,
            CuspSide::R => CuspSide::L,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordToken {
    Cusp(CuspSide),
    Bar,
}

/// Cyclic word read along one state circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CircleWord(pub Vec<WordToken>);

impl CircleWord {
    pub fn cusp_count(&self) -> usize {
        self.0.iter().filter(|t| matches!(t, WordToken::Cusp(_))).count()
    }

    pub fn bar_count(&self) -> usize {
        self.0.iter().filter(|t| matches!(t, WordToken::Bar)).count()
    }
}

impl fmt::Display for CircleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match t {
                WordToken::Cusp(CuspSide::L) => f.write_str("L")?,
                WordToken::Cusp(CuspSide::R) => f.write_str("R")?,
                WordToken::Bar => f.write_str("B")?,
            }
        }
        f.write_str("]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReducedCircle {
    Plain,
    Kn(u32),
    BarLoop,
}

/// Reduces a circle word to normal form.
///
/// Bars are pushed to the end of the word, flipping every cusp they pass,
/// and cancelled in pairs. A surviving bar lets any cusp travel around the
/// circle and return flipped, so all cusps cancel and the result is a bar
/// loop. Otherwise equal adjacent cusps cancel cyclically until the word
/// alternates.
pub fn reduce_word(w: &CircleWord) -> Result<ReducedCircle, ArrowError> {
    reduce_tokens(&w.0)
}

fn reduce_tokens(tokens: &[WordToken]) -> Result<ReducedCircle, ArrowError> {
    let mut bars = 0usize;
    let mut stack: Vec<CuspSide> = Vec::with_capacity(tokens.len());
    for t in tokens {
        match t {
            WordToken::Bar => bars += 1,
            WordToken::Cusp(s) => {
                let s = if bars % 2 == 1 { s.flip() } else { *s };
                if stack.last() == Some(&s) {
                    stack.pop();
                } else {
                    stack.push(s);
                }
            }
        }
    }
    if stack.len() % 2 == 1 {
        return Err(ArrowError::OddCuspCount);
    }
    if bars % 2 == 1 {
        return Ok(ReducedCircle::BarLoop);
    }
    let mut lo = 0;
    let mut hi = stack.len();
    while hi - lo >= 2 && stack[lo] == stack[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    Ok(match (hi - lo) / 2 {
        0 => ReducedCircle::Plain,
        n => ReducedCircle::Kn(n as u32),
    })
}

/// Per-state data of the sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateEvaluation {
    pub alpha: usize,
    pub beta: usize,
    pub circle_count: usize,
    pub contents: Vec<ReducedCircle>,
}

impl StateEvaluation {
    pub fn m_count(&self) -> u32 {
        self.contents.iter().filter(|c| **c == ReducedCircle::BarLoop).count() as u32
    }

    pub fn k_product(&self) -> KProduct {
        KProduct::from_pairs(self.contents.iter().filter_map(|c| match c {
            ReducedCircle::Kn(n) => Some((*n, 1)),
            _ => None,
        }))
    }
}

const OVER: usize = 0;
const UNDER: usize = 1;
const IN: usize = 0;
const OUT: usize = 1;

fn half_edge(c: usize, role: usize, io: usize) -> usize {
    4 * c + 2 * role + io
}

/// Crossing/arc incidence of a diagram, indexed by dense crossing number.
///
/// Half-edge `4c + 2r + io` is the end of crossing `c` on the strand with
/// role `r` (0 over, 1 under), incoming (0) or outgoing (1).
#[derive(Clone, Debug)]
pub(crate) struct Skeleton {
    pub ids: Vec<u32>,
    pub positive: Vec<bool>,
    /// For each half-edge, the half-edge at the far end of its arc and the
    /// number of bars on the arc.
    pub across: Vec<(usize, usize)>,
    /// Bar counts of crossing-free components.
    pub free_loops: Vec<usize>,
}

impl Skeleton {
    pub fn new(d: &TwistedGaussCode) -> Self {
        let ids = d.crossing_ids();
        let index: HashMap<u32, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut positive = vec![true; ids.len()];
        let mut across = vec![(usize::MAX, 0); 4 * ids.len()];
        let mut free_loops = Vec::new();
        for arc in d.arcs() {
            let comp = d.component(arc.component);
            let (Some(s), Some(e)) = (arc.start, arc.end) else {
                free_loops.push(arc.bar_count());
                continue;
            };
            let (Token::Pass(ps), Token::Pass(pe)) = (comp[s], comp[e]) else { unreachable!("arc ends are passes") };
            let cs = index[&ps.crossing];
            let ce = index[&pe.crossing];
            positive[cs] = ps.sign == Sign::Positive;
            let from = half_edge(cs, role_bit(ps.role), OUT);
            let to = half_edge(ce, role_bit(pe.role), IN);
            across[from] = (to, arc.bar_count());
            across[to] = (from, arc.bar_count());
        }
        Skeleton { ids, positive, across, free_loops }
    }

    pub fn crossing_count(&self) -> usize {
        self.ids.len()
    }

    /// Traces all circles of the state encoded in `disoriented` (bit `c`
    /// set means crossing `c` is smoothed against the orientation) and calls
    /// `f` on each word.
    pub fn for_each_circle<F: FnMut(&[WordToken])>(&self, disoriented: &[bool], visited: &mut Vec<bool>, word: &mut Vec<WordToken>, mut f: F) {
        visited.clear();
        visited.resize(self.across.len(), false);
        for start in 0..self.across.len() {
            if visited[start] {
                continue;
            }
            word.clear();
            let mut h = start;
            loop {
                visited[h] = true;
                let (arrive, bars) = self.across[h];
                visited[arrive] = true;
                for _ in 0..bars {
                    word.push(WordToken::Bar);
                }
                let c = arrive >> 2;
                let role = (arrive >> 1) & 1;
                let io = arrive & 1;
                let next = if disoriented[c] {
                    let left = (role == OVER) == self.positive[c];
                    word.push(WordToken::Cusp(if left { CuspSide::L } else { CuspSide::R }));
                    half_edge(c, 1 - role, io)
                } else {
                    half_edge(c, 1 - role, 1 - io)
                };
                if next == start {
                    break;
                }
                h = next;
            }
            f(word);
        }
        for &bars in &self.free_loops {
            word.clear();
            word.extend(std::iter::repeat_n(WordToken::Bar, bars));
            f(word);
        }
    }

    /// `(alpha, beta)` for a state.
    pub fn weights(&self, disoriented: &[bool]) -> (usize, usize) {
        // Positive crossing: the oriented smoothing carries A. Negative: the
        // disoriented one does.
        let alpha = disoriented.iter().zip(&self.positive).filter(|(dis, pos)| **dis != **pos).count();
        (alpha, disoriented.len() - alpha)
    }
}

fn role_bit(r: Role) -> usize {
    match r {
        Role::Over => OVER,
        Role::Under => UNDER,
    }
}

fn state_vector(sk: &Skeleton, s: &SmoothingState) -> Result<Vec<bool>, ArrowError> {
    sk.ids
        .iter()
        .map(|id| match s.choice.get(id) {
            Some(Smoothing::Disoriented) => Ok(true),
            Some(Smoothing::Oriented) => Ok(false),
            None => Err(ArrowError::IncompleteState(*id)),
        })
        .collect()
}

/// Circle words of the diagram smoothed according to `s`.
pub fn resolve(d: &TwistedGaussCode, s: &SmoothingState) -> Result<Vec<CircleWord>, ArrowError> {
    let sk = Skeleton::new(d);
    let dis = state_vector(&sk, s)?;
    let mut out = Vec::new();
    sk.for_each_circle(&dis, &mut Vec::new(), &mut Vec::new(), |w| out.push(CircleWord(w.to_vec())));
    Ok(out)
}

/// Smoothing weights, circle count and reduced circles of one state.
pub fn evaluate_state(d: &TwistedGaussCode, s: &SmoothingState) -> Result<StateEvaluation, ArrowError> {
    let sk = Skeleton::new(d);
    let dis = state_vector(&sk, s)?;
    let (alpha, beta) = sk.weights(&dis);
    let mut contents = Vec::new();
    let mut err = None;
    sk.for_each_circle(&dis, &mut Vec::new(), &mut Vec::new(), |w| match reduce_tokens(w) {
        Ok(r) => contents.push(r),
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(StateEvaluation { alpha, beta, circle_count: contents.len(), contents })
}

/// Grouped state contributions: (alpha - beta, circle count, K product, M
/// exponent) -> number of states.
type Tally = HashMap<(i64, u32, KProduct, u32), i64>;

fn tally_range(sk: &Skeleton, range: std::ops::Range<u64>) -> Tally {
    let n = sk.crossing_count();
    let mut tally = Tally::new();
    let mut dis = vec![false; n];
    let mut visited = Vec::new();
    let mut word = Vec::new();
    let mut kn: Vec<(u32, u32)> = Vec::new();
    for bits in range {
        for (c, slot) in dis.iter_mut().enumerate() {
            *slot = bits >> c & 1 == 1;
        }
        let (alpha, beta) = sk.weights(&dis);
        let mut circles = 0u32;
        let mut m = 0u32;
        kn.clear();
        sk.for_each_circle(&dis, &mut visited, &mut word, |w| {
            circles += 1;
            match reduce_tokens(w).expect("state circles carry an even number of cusps") {
                ReducedCircle::Plain => {}
                ReducedCircle::BarLoop => m += 1,
                ReducedCircle::Kn(k) => kn.push((k, 1)),
            }
        });
        let key = (alpha as i64 - beta as i64, circles, KProduct::from_pairs(kn.iter().copied()), m);
        *tally.entry(key).or_insert(0) += 1;
    }
    tally
}

/// Unnormalized arrow polynomial with coefficients in `C`.
pub fn bracket_with<C: Coefficient>(d: &TwistedGaussCode, config: &StateSumConfig) -> Result<ArrowPoly<C>, ArrowError> {
    let sk = Skeleton::new(d);
    let n = sk.crossing_count();
    if n > config.max_crossings || n >= 63 {
        return Err(ArrowError::TooManyCrossings { crossings: n, limit: config.max_crossings.min(62) });
    }
    let total: u64 = 1 << n;
    let tally = if config.parallel && n >= 10 {
        let chunk = 1u64 << (n - 6);
        (0..total / chunk)
            .into_par_iter()
            .map(|i| tally_range(&sk, i * chunk..(i + 1) * chunk))
            .reduce(Tally::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            })
    } else {
        tally_range(&sk, 0..total)
    };

    // Deterministic assembly order.
    let mut entries: Vec<_> = tally.into_iter().collect();
    entries.sort();
    let mut d_cache: Vec<ArrowPoly<C>> = Vec::new();
    let mut out = ArrowPoly::zero();
    for ((a, circles, k, m), count) in entries {
        let l = circles.saturating_sub(1) as usize;
        while d_cache.len() <= l {
            d_cache.push(d_power(d_cache.len() as u32));
        }
        let coeff = C::from_i64(count).expect("state count fits the coefficient type");
        for (key, c) in d_cache[l].terms() {
            out.add_term(MonomialKey::new(key.a_exp + a, k.clone(), m), c.clone() * coeff.clone());
        }
    }
    Ok(out)
}

/// `<D>_A`, the unnormalized arrow polynomial.
pub fn bracket(d: &TwistedGaussCode) -> Result<ArrowPoly<BigInt>, ArrowError> {
    bracket_with(d, &StateSumConfig::default())
}

/// `<D>_NA = (-A^3)^{-w(D)} <D>_A`.
pub fn normalized(d: &TwistedGaussCode) -> Result<ArrowPoly<BigInt>, ArrowError> {
    normalized_with(d, &StateSumConfig::default())
}

pub fn normalized_with<C: Coefficient>(d: &TwistedGaussCode, config: &StateSumConfig) -> Result<ArrowPoly<C>, ArrowError> {
    Ok(bracket_with::<C>(d, config)?.normalize_by_writhe(d.writhe()))
}

/// Set of k-degrees over the surviving states.
pub fn as_set(d: &TwistedGaussCode) -> Result<BTreeSet<u64>, ArrowError> {
    Ok(bracket(d)?.k_degree_set())
}

/// Maximum degree of `M` in the normalized polynomial; a lower bound for the
/// number of bars of any equivalent diagram.
pub fn m_degree_lower_bound(d: &TwistedGaussCode) -> Result<u32, ArrowError> {
    Ok(normalized(d)?.max_m_degree())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorabilityVerdict {
    /// Some necessary condition fails: no checkerboard colorable diagram
    /// represents this link.
    NecessarilyNotColorable,
    /// All necessary conditions hold; colorability is not decided.
    Inconclusive,
}

/// The three necessary conditions for checkerboard colorability.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CriteriaReport {
    /// No term contains `M`.
    pub no_m: bool,
    /// Every k-degree is even.
    pub as_even: bool,
    /// In every term with K variables the largest index is at most the rest
    /// of the k-degree.
    pub dominant_index_bounded: bool,
    pub verdict: ColorabilityVerdict,
}

pub fn criteria_of<C: Coefficient>(p: &ArrowPoly<C>) -> CriteriaReport {
    let no_m = !p.contains_m();
    let as_even = p.k_degree_set().iter().all(|k| k % 2 == 0);
    let dominant_index_bounded = p.terms().all(|(key, _)| match key.k.max_index() {
        None => true,
        Some(i1) => {
            let total = key.k.k_degree();
            total % 2 == 0 && 2 * i1 as u64 <= total
        }
    });
    let verdict = if no_m && as_even && dominant_index_bounded {
        ColorabilityVerdict::Inconclusive
    } else {
        ColorabilityVerdict::NecessarilyNotColorable
    };
    CriteriaReport { no_m, as_even, dominant_index_bounded, verdict }
}

pub fn colorability_criteria(d: &TwistedGaussCode) -> Result<CriteriaReport, ArrowError> {
    Ok(criteria_of(&normalized(d)?))
}
