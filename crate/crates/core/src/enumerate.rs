//! Bar placements on a fixed virtual diagram.
//!
//! Two bars on one arc cancel by T1 and bars on one arc commute, so a
//! placement is a set of arcs, each receiving a single bar just after the
//! pass the arc leaves.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrowsum::{normalized_with, ArrowError, StateSumConfig};
use crate::diagram::{Token, TwistedGaussCode};
use crate::moves::t1_normal_form;
use crate::ArrowPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("bar placements start from a bar-free diagram")]
    HasBars,
    #[error(transparent)]
    Arrow(#[from] ArrowError),
}

/// The diagram with one bar added to each listed arc.
pub fn place_bars(d: &TwistedGaussCode, arcs: &[usize]) -> TwistedGaussCode {
    let all = d.arcs();
    let mut comps: Vec<Vec<Token>> = d.components().to_vec();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for &k in arcs {
        let a = &all[k];
        at[a.component].push(a.start.map_or(0, |s| s + 1));
    }
    for (comp, mut pos) in comps.iter_mut().zip(at) {
        pos.sort_unstable_by(|a, b| b.cmp(a));
        for p in pos {
            comp.insert(p, Token::Bar);
        }
    }
    TwistedGaussCode::new(comps).expect("adding bars keeps the code valid")
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max.min(n) {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().map_or(0, |&l| l + 1);
            for k in from..n {
                let mut t: Vec<usize> = s.clone();
                t.push(k);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub arcs: Vec<usize>,
    pub code: String,
}

/// Placements sharing one normalized polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialClass {
    pub polynomial: ArrowPolynomial,
    pub placements: Vec<Placement>,
}

/// All placements of at most `max_bars` bars, grouped by normalized arrow
/// polynomial. Classes appear in order of their first placement (by size,
/// then lexicographically by arc).
pub fn enumerate_bar_placements(d: &TwistedGaussCode, max_bars: usize) -> Result<Vec<PolynomialClass>, EnumerateError> {
    if d.has_bars() {
        return Err(EnumerateError::HasBars);
    }
    let cfg = StateSumConfig::from_env();
    let mut seen = std::collections::HashSet::new();
    let candidates: Vec<(Vec<usize>, TwistedGaussCode)> = subsets(d.arcs().len(), max_bars)
        .into_iter()
        .map(|s| {
            let code = t1_normal_form(&place_bars(d, &s));
            (s, code)
        })
        .filter(|(_, code)| seen.insert(code.clone()))
        .collect();
    let polys: Vec<ArrowPolynomial> =
        candidates.par_iter().map(|(_, code)| normalized_with(code, &cfg)).collect::<Result<_, _>>()?;
    let mut classes: Vec<PolynomialClass> = Vec::new();
    for ((arcs, code), poly) in candidates.into_iter().zip(polys) {
        let p = Placement { arcs, code: code.to_string() };
        match classes.iter_mut().find(|c| c.polynomial == poly) {
            Some(c) => c.placements.push(p),
            None => classes.push(PolynomialClass { polynomial: poly, placements: vec![p] }),
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> TwistedGaussCode {
        s.parse().unwrap()
    }

    #[test]
    fn unknot_one_bar() {
        let classes = enumerate_bar_placements(&code(""), 1).unwrap();
        let polys: Vec<String> = classes.iter().map(|c| c.polynomial.to_string()).collect();
        assert_eq!(polys, vec!["1", "M"]);
    }

    #[test]
    fn zero_bars_is_the_input() {
        let d = code("O1+ O2+ U1+ U2+");
        let classes = enumerate_bar_placements(&d, 0).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].polynomial, crate::normalized(&d).unwrap());
    }

    #[test]
    fn placement_positions() {
        assert_eq!(place_bars(&code("O1+ O2+ U1+ U2+"), &[0, 3]), code("O1+ b O2+ U1+ U2+ b"));
        assert_eq!(place_bars(&code("()"), &[0]), code("b"));
        assert_eq!(subsets(4, 2).len(), 1 + 4 + 6);
    }

    #[test]
    fn rejects_barred_input() {
        assert_eq!(enumerate_bar_placements(&code("b"), 1), Err(EnumerateError::HasBars));
    }
}
