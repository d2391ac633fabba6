//! Reference computations shared by the integration tests. None of them go
//! through the state-sum tracer.

#![allow(dead_code)]

use twistpoly::diagram::{Role, Sign, Token, TwistedGaussCode};
use twistpoly::ArrowPolynomial;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    parent[ra] = rb;
}

/// Kauffman bracket of a bar-free diagram, `d^{loops-1}` convention.
///
/// Edges run from each pass to the next one on its component. A smoothing
/// glues the four edges at a crossing in pairs. Drawing a positive crossing
/// with the over strand SW to NE and the under strand SE to NW, rotating the
/// over strand counterclockwise sweeps the N and S regions, so the A
/// smoothing joins (over in, under out) and (under in, over out). The
/// negative crossing is its mirror, where the A smoothing joins the two
/// incoming and the two outgoing edges.
pub fn kauffman_bracket(d: &TwistedGaussCode) -> ArrowPolynomial {
    assert!(!d.has_bars(), "oracle covers bar-free diagrams only");
    let mut edge_in = std::collections::BTreeMap::new();
    let mut edge_out = std::collections::BTreeMap::new();
    let mut edges = 0usize;
    let mut free_loops = 0usize;
    for comp in d.components() {
        let passes: Vec<_> = comp
            .iter()
            .filter_map(|t| match t {
                Token::Pass(p) => Some(*p),
                Token::Bar => None,
            })
            .collect();
        if passes.is_empty() {
            free_loops += 1;
            continue;
        }
        let n = passes.len();
        for (i, p) in passes.iter().enumerate() {
            edge_out.insert((p.crossing, p.role), edges + i);
            let next = passes[(i + 1) % n];
            edge_in.insert((next.crossing, next.role), edges + i);
        }
        edges += n;
    }
    let ids = d.crossing_ids();
    let signs: Vec<Sign> = ids.iter().map(|&c| d.sign_of(c).unwrap()).collect();
    let n = ids.len();
    assert!(n <= 16, "oracle is exponential");
    let d_loop = -ArrowPolynomial::a_power(2) - ArrowPolynomial::a_power(-2);
    let mut total = ArrowPolynomial::zero();
    for mask in 0u32..1 << n {
        let mut parent: Vec<usize> = (0..edges).collect();
        let mut a_count = 0i64;
        for (k, &c) in ids.iter().enumerate() {
            let a_smoothing = mask >> k & 1 == 0;
            a_count += if a_smoothing { 1 } else { -1 };
            let (oi, oo) = (edge_in[&(c, Role::Over)], edge_out[&(c, Role::Over)]);
            let (ui, uo) = (edge_in[&(c, Role::Under)], edge_out[&(c, Role::Under)]);
            let in_out = a_smoothing == (signs[k] == Sign::Positive);
            if in_out {
                union(&mut parent, oi, uo);
                union(&mut parent, ui, oo);
            } else {
                union(&mut parent, oi, ui);
                union(&mut parent, oo, uo);
            }
        }
        let loops = (0..edges).filter(|&e| find(&mut parent, e) == e).count() + free_loops;
        total += ArrowPolynomial::a_power(a_count) * d_loop.pow(loops as u32 - 1);
    }
    total
}

/// A triangle of three straight strands at heights top > mid > bot, read off
/// as the pattern arguments of the R3 predicate.
///
/// Crossings are x = top/mid, y = top/bot, z = mid/bot. A crossing is
/// positive when the cross product of the over direction with the under
/// direction is positive.
pub fn r3_geometric_patterns() -> std::collections::BTreeSet<(Sign, Sign, Sign, bool, bool, bool)> {
    type P = (f64, f64);
    let cross = |u: P, v: P| u.0 * v.1 - u.1 * v.0;
    // line through p with direction u, intersection parameter along each
    let meet = |p: P, u: P, q: P, v: P| -> (f64, f64) {
        let w = (q.0 - p.0, q.1 - p.1);
        let den = cross(u, v);
        (cross(w, v) / den, cross(w, u) / den)
    };
    let sign = |over: P, under: P| if cross(over, under) > 0.0 { Sign::Positive } else { Sign::Negative };
    let mut out = std::collections::BTreeSet::new();
    let base: [(P, P); 3] = [((0.0, 0.0), (1.0, 0.0)), ((0.0, 0.0), (1.0, 1.0)), ((2.0, 0.0), (-1.0, 2.0))];
    for side in [-1.0, 1.0] {
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            for flips in 0..8 {
                let mut lines = base;
                // move the third line to either side of the first two's meeting point
                lines[2].0 .1 = side;
                for (k, l) in lines.iter_mut().enumerate() {
                    if flips >> k & 1 == 1 {
                        l.1 = (-l.1 .0, -l.1 .1);
                    }
                }
                let [t, m, b] = perm.map(|i| lines[i]);
                let (tx, mx) = meet(t.0, t.1, m.0, m.1);
                let (ty, by) = meet(t.0, t.1, b.0, b.1);
                let (mz, bz) = meet(m.0, m.1, b.0, b.1);
                out.insert((sign(t.1, m.1), sign(t.1, b.1), sign(m.1, b.1), tx < ty, mx < mz, by < bz));
            }
        }
    }
    out
}
