//! Checkerboard colorability, cut points and framings.
//!
//! A checkerboard coloring is the same thing as an alternate orientation:
//! every edge is oriented so that around each crossing the four ends
//! alternate in and out. Then the two ends of the over strand both point in
//! or both point out, and the under strand does the opposite. One bit per
//! crossing records which: `x_c = 1` means the over ends of `c` point into
//! `c`. An end of role `r` at `c` points in iff `x_c ^ (r == Under)`.
//!
//! An edge keeps its orientation along its length, except that a bar or a
//! cut point reverses it. So an edge from a pass `(c1, r1)` to a pass
//! `(c2, r2)` carrying `k` bars and cut points has exactly one inward end
//! iff `k` is even:
//!
//! ```text
//! x_c1 ^ x_c2 = 1 ^ k ^ [r1 == Under] ^ [r2 == Under]   (mod 2)
//! ```
//!
//! A crossing-free component has nothing to alternate with and needs an
//! even `k`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Role, Token, TwistedGaussCode};
use crate::moves::t1_normal_form;

/// Largest crossing count for the exhaustive cut-point minimization.
pub const MAX_CUTPOINT_CROSSINGS: usize = 20;

/// Default node budget of the framing-space search.
pub const DEFAULT_SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("cut points are defined for bar-free diagrams only")]
    HasBars,
    #[error("diagram has {crossings} crossings; exhaustive search is limited to {limit}")]
    TooManyCrossings { crossings: usize, limit: usize },
    #[error("no crossing {0} in the diagram")]
    UnknownCrossing(u32),
    #[error("no arc {0} in the diagram")]
    UnknownArc(usize),
    #[error("arc {arc} has {count} cut points; move II needs two")]
    TooFewCutPoints { arc: usize, count: u32 },
    #[error("not a checkerboard framing: {0}")]
    NotAFraming(String),
    #[error("framing search explored {explored} nodes without finishing")]
    SearchBudgetExceeded { explored: usize },
}

/// One parity equation `x_a ^ x_b = rhs`; a side is `None` on a degenerate
/// arc, which reads `0 = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcRelation {
    pub arc: usize,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub rhs: bool,
}

impl ArcRelation {
    fn holds(&self, x: &[bool], cuts: u32) -> bool {
        let lhs = self.a.is_some_and(|i| x[i]) ^ self.b.is_some_and(|i| x[i]);
        lhs == (self.rhs ^ (cuts % 2 == 1))
    }
}

/// Parity equations of a diagram, one per arc. Variables are crossings in
/// ascending id order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorConstraintSystem {
    pub crossings: Vec<u32>,
    pub relations: Vec<ArcRelation>,
}

pub fn constraint_system(d: &TwistedGaussCode) -> ColorConstraintSystem {
    let crossings = d.crossing_ids();
    let index: HashMap<u32, usize> = crossings.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let under = |r: Role| r == Role::Under;
    let relations = d
        .arcs()
        .into_iter()
        .enumerate()
        .map(|(arc, a)| {
            let odd_bars = a.bar_count() % 2 == 1;
            match (a.start, a.end) {
                (Some(s), Some(e)) => {
                    let comp = d.component(a.component);
                    let (Token::Pass(ps), Token::Pass(pe)) = (comp[s], comp[e]) else { unreachable!("arc ends are passes") };
                    ArcRelation {
                        arc,
                        a: Some(index[&ps.crossing]),
                        b: Some(index[&pe.crossing]),
                        rhs: !odd_bars ^ under(ps.role) ^ under(pe.role),
                    }
                }
                _ => ArcRelation { arc, a: None, b: None, rhs: odd_bars },
            }
        })
        .collect();
    ColorConstraintSystem { crossings, relations }
}

/// Union-find over crossings tracking the parity to the root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, i: usize) -> (usize, bool) {
        let p = self.parent[i];
        if p == i {
            return (i, false);
        }
        let (root, up) = self.find(p);
        self.parent[i] = root;
        self.parity[i] ^= up;
        (root, self.parity[i])
    }

    /// Adds `x_a ^ x_b = rhs`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, rhs: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rhs;
        }
        self.parent[ra] = rb;
        self.parity[ra] = pa ^ pb ^ rhs;
        true
    }
}

impl ColorConstraintSystem {
    /// A solution with every component root set to 0, if one exists.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let n = self.crossings.len();
        let mut uf = ParityUnionFind::new(n);
        for r in &self.relations {
            let ok = match (r.a, r.b) {
                (Some(a), Some(b)) => uf.union(a, b, r.rhs),
                _ => !r.rhs,
            };
            if !ok {
                return None;
            }
        }
        Some((0..n).map(|i| uf.find(i).1).collect())
    }

    /// Connected components of the crossing graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.crossings.len();
        let mut uf = ParityUnionFind::new(n);
        for r in &self.relations {
            if let (Some(a), Some(b)) = (r.a, r.b) {
                let (ra, pa) = uf.find(a);
                let (rb, pb) = uf.find(b);
                if ra != rb {
                    uf.union(a, b, pa ^ pb);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let root = uf.find(i).0;
            groups.entry(root).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn violations(&self, x: &[bool], cuts: &[u32]) -> usize {
        self.relations.iter().filter(|r| !r.holds(x, cuts.get(r.arc).copied().unwrap_or(0))).count()
    }

    fn to_map(&self, x: &[bool]) -> BTreeMap<u32, bool> {
        self.crossings.iter().copied().zip(x.iter().copied()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Colorability {
    pub colorable: bool,
    /// A coloring and its complement when colorable. Complementing any one
    /// constraint component also gives a coloring.
    pub colorings: Vec<BTreeMap<u32, bool>>,
    pub constraint_components: usize,
}

pub fn is_checkerboard_colorable(d: &TwistedGaussCode) -> Colorability {
    let sys = constraint_system(d);
    let constraint_components = sys.components().len();
    match sys.solve() {
        None => Colorability { colorable: false, colorings: Vec::new(), constraint_components },
        Some(x) => {
            let y: Vec<bool> = x.iter().map(|b| !b).collect();
            Colorability { colorable: true, colorings: vec![sys.to_map(&x), sys.to_map(&y)], constraint_components }
        }
    }
}

/// Cut points per arc (indexed as [`TwistedGaussCode::arcs`]) and a bit per
/// crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Framing {
    pub cut_counts: Vec<u32>,
    pub coloring: BTreeMap<u32, bool>,
}

impl Framing {
    pub fn cut_points(&self) -> u32 {
        self.cut_counts.iter().sum()
    }

    /// At most one cut point per arc.
    pub fn is_plain(&self) -> bool {
        self.cut_counts.iter().all(|&c| c <= 1)
    }

    /// Whether every arc relation holds with the cut points counted in.
    pub fn is_valid_for(&self, d: &TwistedGaussCode) -> bool {
        let sys = constraint_system(d);
        if self.cut_counts.len() != sys.relations.len() || self.coloring.keys().ne(sys.crossings.iter()) {
            return false;
        }
        let x: Vec<bool> = self.coloring.values().copied().collect();
        sys.violations(&x, &self.cut_counts) == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutPointReport {
    pub p_d: u32,
    pub witness: Framing,
}

/// Minimum number of cut points over all checkerboard framings.
///
/// For a fixed crossing assignment the cheapest framing puts one cut point
/// on each violated arc, so this minimizes violations by exhaustion, one
/// constraint component at a time.
pub fn min_cut_points(d: &TwistedGaussCode) -> Result<CutPointReport, ColoringError> {
    if d.has_bars() {
        return Err(ColoringError::HasBars);
    }
    let n = d.crossing_count();
    if n > MAX_CUTPOINT_CROSSINGS {
        return Err(ColoringError::TooManyCrossings { crossings: n, limit: MAX_CUTPOINT_CROSSINGS });
    }
    let sys = constraint_system(d);
    let mut x = vec![false; n];
    for comp in sys.components() {
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let rels: Vec<(u32, u32, bool)> = sys
            .relations
            .iter()
            .filter_map(|r| match (r.a, r.b) {
                (Some(a), Some(b)) if local.contains_key(&a) => Some((local[&a] as u32, local[&b] as u32, r.rhs)),
                _ => None,
            })
            .collect();
        let best = (0u64..1 << comp.len())
            .min_by_key(|bits| rels.iter().filter(|&&(a, b, rhs)| ((bits >> a ^ bits >> b) & 1 == 1) != rhs).count())
            .unwrap_or(0);
        for (k, &v) in comp.iter().enumerate() {
            x[v] = best >> k & 1 == 1;
        }
    }
    let cut_counts: Vec<u32> = sys.relations.iter().map(|r| u32::from(!r.holds(&x, 0))).collect();
    let witness = Framing { coloring: sys.to_map(&x), cut_counts };
    Ok(CutPointReport { p_d: witness.cut_points(), witness })
}

/// The plain framing determined by a crossing assignment.
pub fn plain_framing(d: &TwistedGaussCode, coloring: &BTreeMap<u32, bool>) -> Framing {
    let sys = constraint_system(d);
    let x: Vec<bool> = sys.crossings.iter().map(|id| coloring.get(id).copied().unwrap_or(false)).collect();
    let cut_counts = sys.relations.iter().map(|r| u32::from(!r.holds(&x, 0))).collect();
    Framing { cut_counts, coloring: sys.to_map(&x) }
}

/// Arcs meeting each end of `crossing`, with multiplicity.
fn incident_arcs(d: &TwistedGaussCode, crossing: u32) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, a) in d.arcs().iter().enumerate() {
        for end in [a.start, a.end].into_iter().flatten() {
            if d.component(a.component)[end].as_pass().map(|p| p.crossing) == Some(crossing) {
                out.push(k);
            }
        }
    }
    out
}

/// Move I: flips the crossing's bit and adds a cut point at each of its four
/// edge ends. An arc with both ends at the crossing gains two.
pub fn cut_move_one(d: &TwistedGaussCode, f: &Framing, crossing: u32) -> Result<Framing, ColoringError> {
    move_one(d, f, crossing, true)
}

/// Move I in the removing direction: flips the bit and takes a cut point
/// from each edge end.
pub fn cut_move_one_remove(d: &TwistedGaussCode, f: &Framing, crossing: u32) -> Result<Framing, ColoringError> {
    move_one(d, f, crossing, false)
}

fn move_one(d: &TwistedGaussCode, f: &Framing, crossing: u32, add: bool) -> Result<Framing, ColoringError> {
    let bit = f.coloring.get(&crossing).ok_or(ColoringError::UnknownCrossing(crossing))?;
    let mut out = f.clone();
    out.coloring.insert(crossing, !bit);
    for arc in incident_arcs(d, crossing) {
        let c = out.cut_counts.get_mut(arc).ok_or(ColoringError::UnknownArc(arc))?;
        if add {
            *c += 1;
        } else {
            *c = c.checked_sub(1).ok_or(ColoringError::TooFewCutPoints { arc, count: 0 })?;
        }
    }
    Ok(out)
}

/// Move II: removes two cut points from one arc.
pub fn cut_move_two(f: &Framing, arc: usize) -> Result<Framing, ColoringError> {
    let count = *f.cut_counts.get(arc).ok_or(ColoringError::UnknownArc(arc))?;
    if count < 2 {
        return Err(ColoringError::TooFewCutPoints { arc, count });
    }
    let mut out = f.clone();
    out.cut_counts[arc] -= 2;
    Ok(out)
}

/// Move II in the adding direction.
pub fn cut_move_two_inverse(f: &Framing, arc: usize) -> Result<Framing, ColoringError> {
    let mut out = f.clone();
    *out.cut_counts.get_mut(arc).ok_or(ColoringError::UnknownArc(arc))? += 2;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FramingConnectivity {
    pub connected: bool,
    pub bound: u32,
    pub plain_framings: usize,
    pub plain_reached: usize,
    pub nodes_explored: usize,
    /// Largest and mean move distance from the starting framing over the
    /// plain framings reached.
    pub max_distance: usize,
    pub mean_distance: f64,
}

/// Breadth-first search over framings with at most `bound` cut points per
/// arc, linked by moves I and II in both directions, from the plain framing
/// with every crossing bit 0.
pub fn framing_space_connected(d: &TwistedGaussCode, bound: u32) -> Result<FramingConnectivity, ColoringError> {
    framing_space_connected_with_budget(d, bound, DEFAULT_SEARCH_BUDGET)
}

pub fn framing_space_connected_with_budget(
    d: &TwistedGaussCode,
    bound: u32,
    budget: usize,
) -> Result<FramingConnectivity, ColoringError> {
    if d.has_bars() {
        return Err(ColoringError::HasBars);
    }
    let n = d.crossing_count();
    if n >= 32 {
        return Err(ColoringError::TooManyCrossings { crossings: n, limit: 31 });
    }
    let sys = constraint_system(d);
    let incident: Vec<Vec<usize>> = sys.crossings.iter().map(|&id| incident_arcs(d, id)).collect();
    let plain_cuts = |bits: u32| -> Vec<u8> {
        let x: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        sys.relations.iter().map(|r| u8::from(!r.holds(&x, 0))).collect()
    };
    let plain_framings = 1usize << n;
    let start = (0u32, plain_cuts(0));
    let mut dist: HashMap<(u32, Vec<u8>), usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    let bound8 = bound.min(u8::MAX as u32) as u8;
    while let Some((bits, cuts)) = queue.pop_front() {
        if dist.len() > budget {
            return Err(ColoringError::SearchBudgetExceeded { explored: dist.len() });
        }
        let here = dist[&(bits, cuts.clone())];
        let mut succ: Vec<(u32, Vec<u8>)> = Vec::new();
        for (c, arcs) in incident.iter().enumerate() {
            let mut up = cuts.clone();
            let mut down = cuts.clone();
            let mut down_ok = true;
            for &a in arcs {
                up[a] += 1;
                match down[a].checked_sub(1) {
                    Some(v) => down[a] = v,
                    None => down_ok = false,
                }
            }
            if up.iter().all(|&v| v <= bound8) {
                succ.push((bits ^ 1 << c, up));
            }
            if down_ok {
                succ.push((bits ^ 1 << c, down));
            }
        }
        for a in 0..cuts.len() {
            if cuts[a] >= 2 {
                let mut v = cuts.clone();
                v[a] -= 2;
                succ.push((bits, v));
            }
            if cuts[a] + 2 <= bound8 {
                let mut v = cuts.clone();
                v[a] += 2;
                succ.push((bits, v));
            }
        }
        for s in succ {
            if !dist.contains_key(&s) {
                dist.insert(s.clone(), here + 1);
                queue.push_back(s);
            }
        }
    }
    let distances: Vec<usize> =
        (0..plain_framings as u32).filter_map(|bits| dist.get(&(bits, plain_cuts(bits))).copied()).collect();
    let plain_reached = distances.len();
    let max_distance = distances.iter().copied().max().unwrap_or(0);
    let mean_distance = if distances.is_empty() { 0.0 } else { distances.iter().sum::<usize>() as f64 / distances.len() as f64 };
    Ok(FramingConnectivity {
        connected: plain_reached == plain_framings,
        bound,
        plain_framings,
        plain_reached,
        nodes_explored: dist.len(),
        max_distance,
        mean_distance,
    })
}

/// Turns each cut point of a plain framing into a bar placed just after the
/// pass its arc leaves.
pub fn replace_cutpoints_with_bars(d: &TwistedGaussCode, f: &Framing) -> Result<TwistedGaussCode, ColoringError> {
    if d.has_bars() {
        return Err(ColoringError::HasBars);
    }
    if !f.is_plain() {
        return Err(ColoringError::NotAFraming("more than one cut point on an arc".into()));
    }
    if !f.is_valid_for(d) {
        return Err(ColoringError::NotAFraming("arc relations do not hold".into()));
    }
    let arcs = d.arcs();
    let mut comps: Vec<Vec<Token>> = d.components().to_vec();
    let mut after: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (a, &count) in arcs.iter().zip(&f.cut_counts) {
        if count == 1 {
            let start = a.start.ok_or_else(|| ColoringError::NotAFraming("cut point on a crossing-free loop".into()))?;
            after[a.component].push(start);
        }
    }
    for (comp, mut starts) in comps.iter_mut().zip(after) {
        starts.sort_unstable_by(|a, b| b.cmp(a));
        for s in starts {
            comp.insert(s + 1, Token::Bar);
        }
    }
    Ok(TwistedGaussCode::new(comps).expect("adding bars keeps the code valid"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarParityReport {
    pub colorable: bool,
    pub normalized_bar_count: usize,
    pub even: bool,
    /// False only if a colorable diagram had an odd bar count.
    pub consistent: bool,
}

pub fn bar_parity_check(d: &TwistedGaussCode) -> BarParityReport {
    let colorable = is_checkerboard_colorable(d).colorable;
    let normalized_bar_count = t1_normal_form(d).bar_count();
    let even = normalized_bar_count.is_multiple_of(2);
    BarParityReport { colorable, normalized_bar_count, even, consistent: !colorable || even }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> TwistedGaussCode {
        s.parse().unwrap()
    }

    const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";
    const VK: &str = "O1+ O2+ U1+ U2+";

    /// Colorability by trying every assignment.
    fn brute_colorable(d: &TwistedGaussCode) -> bool {
        let sys = constraint_system(d);
        let n = sys.crossings.len();
        (0u32..1 << n).any(|bits| {
            let x: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            sys.violations(&x, &[]) == 0
        })
    }

    #[test]
    fn constraint_examples() {
        assert!(constraint_system(&code(TREFOIL)).solve().is_some());
        assert!(constraint_system(&code(VK)).solve().is_none());
        assert!(!brute_colorable(&code(VK)));
        let b = constraint_system(&code("b"));
        assert_eq!(b.relations, vec![ArcRelation { arc: 0, a: None, b: None, rhs: true }]);
        assert!(b.solve().is_none());
    }

    #[test]
    fn colorability_examples() {
        assert!(is_checkerboard_colorable(&code("")).colorable);
        assert!(!is_checkerboard_colorable(&code(VK)).colorable);
        let t = is_checkerboard_colorable(&code(TREFOIL));
        assert!(t.colorable);
        assert_eq!(t.colorings.len(), 2);
        assert_eq!(t.constraint_components, 1);
        for c in &t.colorings {
            assert!(plain_framing(&code(TREFOIL), c).cut_points() == 0);
        }
        assert!(t.colorings[0].values().zip(t.colorings[1].values()).all(|(a, b)| a != b));
    }

    #[test]
    fn witness_bars_make_vk_colorable() {
        let d = code(VK);
        let r = min_cut_points(&d).unwrap();
        assert_eq!(r.p_d, 2);
        let twisted = replace_cutpoints_with_bars(&d, &r.witness).unwrap();
        assert_eq!(twisted.bar_count(), 2);
        assert!(is_checkerboard_colorable(&twisted).colorable);
    }

    #[test]
    fn cut_point_examples() {
        assert_eq!(min_cut_points(&code(TREFOIL)).unwrap().p_d, 0);
        assert_eq!(min_cut_points(&code("")).unwrap().p_d, 0);
        assert_eq!(min_cut_points(&code("b")), Err(ColoringError::HasBars));
    }

    #[test]
    fn move_one_on_kink_and_trefoil() {
        let kink = code("O1+ U1+");
        let f = plain_framing(&kink, &BTreeMap::from([(1, false)]));
        assert_eq!(f.cut_counts, vec![0, 0]);
        let g = cut_move_one(&kink, &f, 1).unwrap();
        assert_eq!(g.cut_counts, vec![2, 2]);
        assert!(g.is_valid_for(&kink));

        let t = code(TREFOIL);
        let col = is_checkerboard_colorable(&t).colorings[0].clone();
        let f = Framing { cut_counts: vec![0; 6], coloring: col };
        let g = cut_move_one(&t, &f, 2).unwrap();
        assert_eq!(g.cut_counts.iter().filter(|&&c| c == 1).count(), 4);
        assert!(g.is_valid_for(&t));
        let h = cut_move_one(&t, &g, 2).unwrap();
        let mut back = h;
        for arc in 0..6 {
            while back.cut_counts[arc] >= 2 {
                back = cut_move_two(&back, arc).unwrap();
            }
        }
        assert_eq!(back, f);
        assert_eq!(cut_move_one(&t, &f, 9), Err(ColoringError::UnknownCrossing(9)));
    }

    #[test]
    fn move_two_examples() {
        let f = |v: u32| Framing { cut_counts: vec![v], coloring: BTreeMap::new() };
        assert_eq!(cut_move_two(&f(2), 0).unwrap(), f(0));
        assert_eq!(cut_move_two(&f(3), 0).unwrap(), f(1));
        assert_eq!(cut_move_two(&f(1), 0), Err(ColoringError::TooFewCutPoints { arc: 0, count: 1 }));
        assert_eq!(cut_move_two_inverse(&f(1), 0).unwrap(), f(3));
    }

    #[test]
    fn framing_space_examples() {
        for s in ["O1+ U1+", VK, TREFOIL] {
            let r = framing_space_connected(&code(s), 3).unwrap();
            assert!(r.connected, "{s}: {r:?}");
            assert_eq!(r.plain_framings, 1 << code(s).crossing_count());
        }
        assert!(matches!(
            framing_space_connected_with_budget(&code(TREFOIL), 3, 10),
            Err(ColoringError::SearchBudgetExceeded { .. })
        ));
    }

    #[test]
    fn replace_examples() {
        let t = code(TREFOIL);
        let f = plain_framing(&t, &is_checkerboard_colorable(&t).colorings[0]);
        assert_eq!(replace_cutpoints_with_bars(&t, &f).unwrap(), t);
        let u = code("");
        let f = plain_framing(&u, &BTreeMap::new());
        assert_eq!(replace_cutpoints_with_bars(&u, &f).unwrap(), u);
        let bad = Framing { cut_counts: vec![1; 6], coloring: f.coloring.clone() };
        assert!(matches!(replace_cutpoints_with_bars(&t, &bad), Err(ColoringError::NotAFraming(_))));
    }

    #[test]
    fn bar_parity_examples() {
        let r = bar_parity_check(&code("b b"));
        assert!(r.colorable && r.even && r.normalized_bar_count == 0);
        let r = bar_parity_check(&code("b"));
        assert!(!r.colorable && !r.even && r.normalized_bar_count == 1);
        let d = code(VK);
        let twisted = replace_cutpoints_with_bars(&d, &min_cut_points(&d).unwrap().witness).unwrap();
        assert!(bar_parity_check(&twisted).even);
    }

    #[test]
    fn union_find_matches_brute_force() {
        for s in [TREFOIL, VK, "O1+ U1+", "O1+ b O2+ U1+ b U2+", "O1+ b O2+ U1+ U2+", "O1+ U2- ; U1+ O2-", "b ; b"] {
            let d = code(s);
            assert_eq!(is_checkerboard_colorable(&d).colorable, brute_colorable(&d), "{s}");
        }
    }
}
