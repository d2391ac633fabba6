//! Twisted braids: words in `σ_i^{±1}`, `v_i` and `b_i`, their relations,
//! and closure to Gauss codes.
//!
//! Strands are numbered 1..=n from left to right and run downwards. `σ_i`
//! takes the strand at position `i+1` over the strand at position `i` and
//! is a positive crossing; `σ_i^{-1}` takes the strand at `i` over and is
//! negative. `v_i` swaps positions `i` and `i+1` virtually and `b_i` puts a
//! bar on the strand at position `i`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Sign, Token, TwistedGaussCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Sigma(usize),
    SigmaInv(usize),
    Virtual(usize),
    Bar(usize),
}

impl Letter {
    pub fn index(self) -> usize {
        match self {
            Letter::Sigma(i) | Letter::SigmaInv(i) | Letter::Virtual(i) | Letter::Bar(i) => i,
        }
    }

    fn fits(self, strands: usize) -> bool {
        let i = self.index();
        match self {
            Letter::Bar(_) => (1..=strands).contains(&i),
            _ => i >= 1 && i < strands,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sigma(i) => write!(f, "s{i}"),
            Letter::SigmaInv(i) => write!(f, "S{i}"),
            Letter::Virtual(i) => write!(f, "v{i}"),
            Letter::Bar(i) => write!(f, "b{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("unrecognized braid letter '{0}'")]
    BadLetter(String),
    #[error("letter {letter} is out of range for {strands} strands")]
    IndexOutOfRange { letter: Letter, strands: usize },
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("relation does not match at position {0}")]
    NoMatch(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        if let Some(&letter) = letters.iter().find(|l| !l.fits(strands)) {
            return Err(BraidError::IndexOutOfRange { letter, strands });
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parses whitespace separated letters `s1`, `S1` (inverse), `v1`, `b1`.
    pub fn parse(text: &str, strands: usize) -> Result<Self, BraidError> {
        let letters = text
            .split_whitespace()
            .map(|w| {
                let bad = || BraidError::BadLetter(w.to_string());
                let mut chars = w.chars();
                let head = chars.next().ok_or_else(bad)?;
                let i: usize = chars.as_str().parse().map_err(|_| bad())?;
                Ok(match head {
                    's' => Letter::Sigma(i),
                    'S' => Letter::SigmaInv(i),
                    'v' => Letter::Virtual(i),
                    'b' => Letter::Bar(i),
                    _ => return Err(bad()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn sigma_count(&self) -> usize {
        self.letters.iter().filter(|l| matches!(l, Letter::Sigma(_) | Letter::SigmaInv(_))).count()
    }

    /// Closes the braid. Crossing ids follow letter order; components are
    /// the cycles of the strand permutation, listed by smallest starting
    /// position.
    pub fn closure(&self) -> Result<TwistedGaussCode, BraidError> {
        let n = self.strands;
        // thread[p] is the starting position of the strand now at p.
        let mut thread: Vec<usize> = (0..n).collect();
        let mut trace: Vec<Vec<Token>> = vec![Vec::new(); n];
        let mut id = 0u32;
        for &l in &self.letters {
            if !l.fits(n) {
                return Err(BraidError::IndexOutOfRange { letter: l, strands: n });
            }
            let i = l.index() - 1;
            match l {
                Letter::Sigma(_) => {
                    id += 1;
                    trace[thread[i + 1]].push(Token::over(id, Sign::Positive));
                    trace[thread[i]].push(Token::under(id, Sign::Positive));
                    thread.swap(i, i + 1);
                }
                Letter::SigmaInv(_) => {
                    id += 1;
                    trace[thread[i]].push(Token::over(id, Sign::Negative));
                    trace[thread[i + 1]].push(Token::under(id, Sign::Negative));
                    thread.swap(i, i + 1);
                }
                Letter::Virtual(_) => thread.swap(i, i + 1),
                Letter::Bar(_) => trace[thread[i]].push(Token::Bar),
            }
        }
        // The strand ending at position p continues as the one starting at p.
        let mut successor = vec![0; n];
        for (p, &t) in thread.iter().enumerate() {
            successor[t] = p;
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut t = start;
            while !seen[t] {
                seen[t] = true;
                comp.extend_from_slice(&trace[t]);
                t = successor[t];
            }
            comps.push(comp);
        }
        Ok(TwistedGaussCode::from_components_unchecked(comps))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// One instance of a defining relation, `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: &'static str,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

/// Every relation instance whose letters fit on `strands` strands.
pub fn relations(strands: usize) -> Vec<Relation> {
    use Letter::{Bar as B, Sigma as S, SigmaInv as Si, Virtual as V};
    let mut out = Vec::new();
    let mut push = |name, lhs: Vec<Letter>, rhs: Vec<Letter>| {
        if lhs.iter().chain(&rhs).all(|l| l.fits(strands)) {
            out.push(Relation { name, lhs, rhs });
        }
    };
    let n = strands;
    for i in 1..n.max(1) {
        push("s S = 1", vec![S(i), Si(i)], vec![]);
        push("S s = 1", vec![Si(i), S(i)], vec![]);
        push("s s' S = S' s s'", vec![S(i), S(i + 1), Si(i)], vec![Si(i + 1), S(i), S(i + 1)]);
        push("b b' = b' b", vec![B(i), B(i + 1)], vec![B(i + 1), B(i)]);
        push("b v = v b'", vec![B(i), V(i)], vec![V(i), B(i + 1)]);
        push("b b' s b b' = v s v", vec![B(i), B(i + 1), S(i), B(i), B(i + 1)], vec![V(i), S(i), V(i)]);
        push("v v = 1", vec![V(i), V(i)], vec![]);
        push("v v' v = v' v v'", vec![V(i), V(i + 1), V(i)], vec![V(i + 1), V(i), V(i + 1)]);
        push("v s' v = v' s v'", vec![V(i), S(i + 1), V(i)], vec![V(i + 1), S(i), V(i + 1)]);
        for j in i + 2..n {
            push("s t = t s", vec![S(i), S(j)], vec![S(j), S(i)]);
            push("v w = w v", vec![V(i), V(j)], vec![V(j), V(i)]);
            push("s w = w s", vec![S(i), V(j)], vec![V(j), S(i)]);
            push("w s = s w", vec![S(j), V(i)], vec![V(i), S(j)]);
        }
    }
    for i in 1..=n {
        push("b b = 1", vec![B(i), B(i)], vec![]);
    }
    out
}

/// Replaces an occurrence of one side of `rel` at `position` by the other
/// side, trying the left side first. An empty side matches anywhere, so a
/// relation `x = 1` inserts `x` when `x` itself does not match.
pub fn apply_relation(w: &BraidWord, rel: &Relation, position: usize) -> Result<BraidWord, BraidError> {
    if let Some(out) = rewrite(w, &rel.lhs, &rel.rhs, position) {
        return Ok(out);
    }
    rewrite(w, &rel.rhs, &rel.lhs, position).ok_or(BraidError::NoMatch(position))
}

/// Rewrites `from` into `to` at `position` if `from` occurs there.
pub fn rewrite(w: &BraidWord, from: &[Letter], to: &[Letter], position: usize) -> Option<BraidWord> {
    let end = position.checked_add(from.len())?;
    if end > w.letters.len() || w.letters[position..end] != *from {
        return None;
    }
    if !to.iter().all(|l| l.fits(w.strands)) {
        return None;
    }
    let mut letters = w.letters[..position].to_vec();
    letters.extend_from_slice(to);
    letters.extend_from_slice(&w.letters[end..]);
    Some(BraidWord { strands: w.strands, letters })
}

/// A directed application of a relation instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSite {
    pub relation: Relation,
    pub position: usize,
    pub forward: bool,
}

impl RelationSite {
    pub fn apply(&self, w: &BraidWord) -> Option<BraidWord> {
        let (from, to) = if self.forward { (&self.relation.lhs, &self.relation.rhs) } else { (&self.relation.rhs, &self.relation.lhs) };
        rewrite(w, from, to, self.position)
    }
}

/// Every directed relation application on `w` that keeps the word at most
/// `max_letters` long.
pub fn relation_sites(w: &BraidWord, max_letters: usize) -> Vec<RelationSite> {
    let mut out = Vec::new();
    for rel in relations(w.strands) {
        for forward in [true, false] {
            let (from, to) = if forward { (&rel.lhs, &rel.rhs) } else { (&rel.rhs, &rel.lhs) };
            if w.letters.len() + to.len() > max_letters + from.len() {
                continue;
            }
            for position in 0..=w.letters.len() {
                if rewrite(w, from, to, position).is_some() {
                    out.push(RelationSite { relation: rel.clone(), position, forward });
                }
            }
        }
    }
    out
}

/// Applies `steps` random relations in either direction, choosing a
/// relation name uniformly among those applicable and then a site. Words
/// grow to at most eight letters beyond the starting length.
pub fn random_relation_walk(w: &BraidWord, steps: usize, seed: u64) -> BraidWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = w.letters.len() + 8;
    let mut cur = w.clone();
    for _ in 0..steps {
        let sites = relation_sites(&cur, cap);
        let mut names: Vec<&str> = sites.iter().map(|s| s.relation.name).collect();
        names.sort_unstable();
        names.dedup();
        let Some(&name) = names.choose(&mut rng) else { break };
        let pick: Vec<&RelationSite> = sites.iter().filter(|s| s.relation.name == name).collect();
        let site = pick.choose(&mut rng).expect("name has a site");
        cur = site.apply(&cur).expect("enumerated site applies");
    }
    cur
}
