//! Extended Reidemeister moves on Gauss codes with bars.
//!
//! Virtual moves, detour moves and T2 (a bar sliding past a virtual
//! crossing) do not change a Gauss code, so only R1, R2, R3, T1 and T3 have
//! a rewriting form here.
//!
//! Pair insertions name a gap of a component. A gap with `seam` set straddles
//! the start of the linear token list: the first inserted token goes at the
//! end and the rest at the front. Deleting a pair that wraps around the
//! start produces such a gap as its inverse, so that a delete followed by
//! the matching insert is the identity on the token lists, not only up to
//! rotation.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Pass, Role, Sign, Token, TwistedGaussCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Insert,
    R1Delete,
    R2Insert,
    R2Delete,
    R3,
    T1Insert,
    T1Delete,
    T3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 8] = [
        MoveKind::R1Insert,
        MoveKind::R1Delete,
        MoveKind::R2Insert,
        MoveKind::R2Delete,
        MoveKind::R3,
        MoveKind::T1Insert,
        MoveKind::T1Delete,
        MoveKind::T3,
    ];

    pub fn is_insertion(self) -> bool {
        matches!(self, MoveKind::R1Insert | MoveKind::R2Insert | MoveKind::T1Insert)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gap {
    pub component: usize,
    pub position: usize,
    pub seam: bool,
}

impl Gap {
    pub fn at(component: usize, position: usize) -> Gap {
        Gap { component, position, seam: false }
    }
}

/// Side of a pass on which a bar sits, in traversal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BarSide {
    Before,
    After,
}

impl BarSide {
    fn flip(self) -> BarSide {
        match self {
            BarSide::Before => BarSide::After,
            BarSide::After => BarSide::Before,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveSite {
    /// Kink: `first` role then the other role of crossing `id`, both `sign`.
    R1Insert { gap: Gap, id: u32, first: Role, sign: Sign },
    R1Delete { crossing: u32 },
    /// Over pair `O_a O_b` at `over`; under pair at `under`, `U_a U_b` when
    /// parallel and `U_b U_a` otherwise. `a` has sign `sign`, `b` the
    /// opposite. `under_first` orders the pairs when both gaps coincide.
    R2Insert { over: Gap, under: Gap, ids: (u32, u32), parallel: bool, sign: Sign, under_first: bool },
    /// `a` is the first crossing along the over strand.
    R2Delete { a: u32, b: u32 },
    /// Triangle with top pair `{O_x, O_y}`, middle pair `{U_x, O_z}` and
    /// bottom pair `{U_y, U_z}`.
    R3 { x: u32, y: u32, z: u32 },
    T1Insert { gap: Gap },
    /// Bars at `position` and the next position (cyclically).
    T1Delete { component: usize, position: usize },
    /// Bars on the given sides of the over and under passes of `crossing`.
    T3 { crossing: u32, over_bar: BarSide, under_bar: BarSide },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Insert { .. } => MoveKind::R1Insert,
            MoveSite::R1Delete { .. } => MoveKind::R1Delete,
            MoveSite::R2Insert { .. } => MoveKind::R2Insert,
            MoveSite::R2Delete { .. } => MoveKind::R2Delete,
            MoveSite::R3 { .. } => MoveKind::R3,
            MoveSite::T1Insert { .. } => MoveKind::T1Insert,
            MoveSite::T1Delete { .. } => MoveKind::T1Delete,
            MoveSite::T3 { .. } => MoveKind::T3,
        }
    }

    /// Crossings added by the move.
    pub fn crossing_delta(&self) -> isize {
        match self.kind() {
            MoveKind::R1Insert => 1,
            MoveKind::R1Delete => -1,
            MoveKind::R2Insert => 2,
            MoveKind::R2Delete => -2,
            _ => 0,
        }
    }
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move site {0} does not match the diagram")]
    InvalidSite(String),
}

fn invalid(site: &MoveSite) -> MoveError {
    MoveError::InvalidSite(site.to_string())
}

fn pass_at(d: &TwistedGaussCode, c: usize, i: usize) -> Option<Pass> {
    d.component(c).get(i).and_then(|t| t.as_pass().copied())
}

fn next(len: usize, i: usize) -> usize {
    (i + 1) % len
}

/// Whether `j` immediately follows `i` in a component of length `len`.
fn follows(len: usize, i: usize, j: usize) -> bool {
    len >= 2 && i != j && next(len, i) == j
}

/// Order of two positions in one component that are cyclically adjacent,
/// preferring the non-wrapping reading for two-token components.
fn adjacent_order(len: usize, i: usize, j: usize) -> Option<(usize, usize)> {
    match (follows(len, i, j), follows(len, j, i)) {
        (true, true) => Some(if i < j { (i, j) } else { (j, i) }),
        (true, false) => Some((i, j)),
        (false, true) => Some((j, i)),
        (false, false) => None,
    }
}

/// Adjacent positions of crossing `a`'s role-`ra` pass and crossing `b`'s
/// role-`rb` pass, returned in traversal order.
fn pair(d: &TwistedGaussCode, a: u32, ra: Role, b: u32, rb: Role) -> Option<(usize, usize, usize)> {
    let (ca, ia) = d.locate(a, ra)?;
    let (cb, ib) = d.locate(b, rb)?;
    if ca != cb {
        return None;
    }
    let (i, j) = adjacent_order(d.component(ca).len(), ia, ib)?;
    Some((ca, i, j))
}

fn gaps(d: &TwistedGaussCode) -> Vec<Gap> {
    let mut out = Vec::new();
    for (c, comp) in d.components().iter().enumerate() {
        for p in 0..comp.len().max(1) {
            out.push(Gap::at(c, p));
        }
    }
    out
}

fn gap_valid(d: &TwistedGaussCode, g: Gap) -> bool {
    g.component < d.components().len() && {
        let len = d.component(g.component).len();
        if g.seam {
            len >= 1
        } else {
            g.position <= len
        }
    }
}

/// Rebuilds components with token pairs inserted at gaps; pairs sharing a
/// gap are emitted in list order.
fn insert_pairs(d: &TwistedGaussCode, inserts: &[(Gap, [Token; 2])]) -> TwistedGaussCode {
    let comps = d
        .components()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let mine: Vec<_> = inserts.iter().filter(|(g, _)| g.component == c).collect();
            let mut out = Vec::with_capacity(comp.len() + 2 * mine.len());
            let mut tail = Vec::new();
            for (g, toks) in &mine {
                if g.seam {
                    out.push(toks[1]);
                    tail.push(toks[0]);
                }
            }
            for i in 0..=comp.len() {
                for (g, toks) in &mine {
                    if !g.seam && g.position == i {
                        out.extend_from_slice(toks);
                    }
                }
                if i < comp.len() {
                    out.push(comp[i]);
                }
            }
            out.extend(tail);
            out
        })
        .collect();
    TwistedGaussCode::from_components_unchecked(comps)
}

/// Removes the given `(component, position)` tokens.
fn remove_positions(d: &TwistedGaussCode, positions: &[(usize, usize)]) -> TwistedGaussCode {
    let gone: BTreeSet<_> = positions.iter().copied().collect();
    let comps = d
        .components()
        .iter()
        .enumerate()
        .map(|(c, comp)| comp.iter().enumerate().filter(|(i, _)| !gone.contains(&(c, *i))).map(|(_, t)| *t).collect())
        .collect();
    TwistedGaussCode::from_components_unchecked(comps)
}

/// Gap left behind by deleting the adjacent pair at `(i, j)` of component
/// `c` together with the other `removed` tokens.
fn gap_after_removal(d: &TwistedGaussCode, c: usize, i: usize, j: usize, removed: &[(usize, usize)]) -> Gap {
    let len = d.component(c).len();
    if j < i || (len == 2 && i == 1) {
        return Gap { component: c, position: 0, seam: true };
    }
    let before = (0..i).filter(|k| !removed.contains(&(c, *k))).count();
    Gap::at(c, before)
}

/// Position of a token: component and index.
type Slot = (usize, usize);

fn swap_tokens(d: &TwistedGaussCode, swaps: &[(Slot, Slot)]) -> TwistedGaussCode {
    let mut comps = d.components().to_vec();
    for &((c1, i1), (c2, i2)) in swaps {
        let t = comps[c1][i1];
        comps[c1][i1] = comps[c2][i2];
        comps[c2][i2] = t;
    }
    TwistedGaussCode::from_components_unchecked(comps)
}

fn bit(s: Sign) -> bool {
    s == Sign::Negative
}

/// Whether an oriented triangle with the given crossing signs and strand
/// orders is a genuine R3 configuration.
///
/// `o_top` is true when the top strand meets `x` before `y`, `o_mid` when the
/// middle strand meets `x` before `z`, and `o_bot` when the bottom strand
/// meets `y` before `z`.
pub fn r3_pattern_valid(sx: Sign, sy: Sign, sz: Sign, o_top: bool, o_mid: bool, o_bot: bool) -> bool {
    (bit(sx) ^ bit(sy)) == (o_mid ^ o_bot) && (bit(sy) ^ bit(sz)) == (o_top ^ o_mid)
}

struct R3Match {
    top: (usize, usize, usize),
    mid: (usize, usize, usize),
    bot: (usize, usize, usize),
}

fn match_r3(d: &TwistedGaussCode, x: u32, y: u32, z: u32) -> Option<R3Match> {
    if x == y || y == z || x == z {
        return None;
    }
    let top = pair(d, x, Role::Over, y, Role::Over)?;
    let mid = pair(d, x, Role::Under, z, Role::Over)?;
    let bot = pair(d, y, Role::Under, z, Role::Under)?;
    let first_is = |(c, i, _): (usize, usize, usize), id: u32| pass_at(d, c, i).map(|p| p.crossing) == Some(id);
    let o_top = first_is(top, x);
    let o_mid = first_is(mid, x);
    let o_bot = first_is(bot, y);
    let (sx, sy, sz) = (d.sign_of(x)?, d.sign_of(y)?, d.sign_of(z)?);
    r3_pattern_valid(sx, sy, sz, o_top, o_mid, o_bot).then_some(R3Match { top, mid, bot })
}

struct R2Match {
    over: (usize, usize, usize),
    under: (usize, usize, usize),
}

fn match_r2(d: &TwistedGaussCode, a: u32, b: u32) -> Option<R2Match> {
    if a == b || d.sign_of(a)? == d.sign_of(b)? {
        return None;
    }
    let over = pair(d, a, Role::Over, b, Role::Over)?;
    if pass_at(d, over.0, over.1)?.crossing != a {
        return None;
    }
    let under = pair(d, a, Role::Under, b, Role::Under)?;
    Some(R2Match { over, under })
}

fn match_r1(d: &TwistedGaussCode, k: u32) -> Option<(usize, usize, usize)> {
    pair(d, k, Role::Over, k, Role::Under)
}

fn bar_position(d: &TwistedGaussCode, c: usize, i: usize, side: BarSide) -> Option<usize> {
    let len = d.component(c).len();
    if len < 2 {
        return None;
    }
    let j = match side {
        BarSide::After => next(len, i),
        BarSide::Before => (i + len - 1) % len,
    };
    d.component(c)[j].is_bar().then_some(j)
}

fn match_t3(d: &TwistedGaussCode, k: u32, over_bar: BarSide, under_bar: BarSide) -> Option<[(Slot, Slot); 2]> {
    let (co, io) = d.locate(k, Role::Over)?;
    let (cu, iu) = d.locate(k, Role::Under)?;
    let bo = bar_position(d, co, io, over_bar)?;
    let bu = bar_position(d, cu, iu, under_bar)?;
    if (co, bo) == (cu, bu) {
        return None;
    }
    Some([((co, io), (co, bo)), ((cu, iu), (cu, bu))])
}

fn match_t1(d: &TwistedGaussCode, c: usize, i: usize) -> Option<usize> {
    let comp = d.components().get(c)?;
    let len = comp.len();
    if i >= len || len < 2 {
        return None;
    }
    let j = next(len, i);
    (comp[i].is_bar() && comp[j].is_bar()).then_some(j)
}

/// All move sites of `d`, in a deterministic order.
pub fn applicable_moves(d: &TwistedGaussCode) -> Vec<MoveSite> {
    let mut out = Vec::new();
    let ids = d.crossing_ids();
    let fresh = d.max_crossing_id() + 1;
    let gs = gaps(d);

    for &g in &gs {
        for first in [Role::Over, Role::Under] {
            for sign in [Sign::Positive, Sign::Negative] {
                out.push(MoveSite::R1Insert { gap: g, id: fresh, first, sign });
            }
        }
    }
    for &k in &ids {
        if match_r1(d, k).is_some() {
            out.push(MoveSite::R1Delete { crossing: k });
        }
    }
    for &over in &gs {
        for &under in &gs {
            for parallel in [true, false] {
                for sign in [Sign::Positive, Sign::Negative] {
                    let orders: &[bool] = if over == under { &[false, true] } else { &[false] };
                    for &under_first in orders {
                        out.push(MoveSite::R2Insert { over, under, ids: (fresh, fresh + 1), parallel, sign, under_first });
                    }
                }
            }
        }
    }
    for (c, comp) in d.components().iter().enumerate() {
        let len = comp.len();
        for i in 0..len {
            if len == 2 && i == 1 {
                continue;
            }
            let (Some(p), Some(q)) = (pass_at(d, c, i), pass_at(d, c, next(len, i))) else { continue };
            if len >= 2 && p.role == Role::Over && q.role == Role::Over && match_r2(d, p.crossing, q.crossing).is_some() {
                out.push(MoveSite::R2Delete { a: p.crossing, b: q.crossing });
            }
        }
    }
    let mut r3 = BTreeSet::new();
    for &x in &ids {
        for &y in &ids {
            for &z in &ids {
                if match_r3(d, x, y, z).is_some() {
                    r3.insert((x, y, z));
                }
            }
        }
    }
    out.extend(r3.into_iter().map(|(x, y, z)| MoveSite::R3 { x, y, z }));
    for &g in &gs {
        out.push(MoveSite::T1Insert { gap: g });
    }
    for (c, comp) in d.components().iter().enumerate() {
        for i in 0..comp.len() {
            if comp.len() == 2 && i == 1 {
                continue;
            }
            if match_t1(d, c, i).is_some() {
                out.push(MoveSite::T1Delete { component: c, position: i });
            }
        }
    }
    for &k in &ids {
        for over_bar in [BarSide::Before, BarSide::After] {
            for under_bar in [BarSide::Before, BarSide::After] {
                if match_t3(d, k, over_bar, under_bar).is_some() {
                    out.push(MoveSite::T3 { crossing: k, over_bar, under_bar });
                }
            }
        }
    }
    out
}

/// Applies a move. Sites need not come from [`applicable_moves`]; any site
/// whose pattern matches is accepted.
pub fn apply_move(d: &TwistedGaussCode, site: &MoveSite) -> Result<TwistedGaussCode, MoveError> {
    let err = || invalid(site);
    let fresh = |id: u32| id != 0 && d.sign_of(id).is_none();
    match *site {
        MoveSite::R1Insert { gap, id, first, sign } => {
            if !gap_valid(d, gap) || !fresh(id) {
                return Err(err());
            }
            let toks = [Token::Pass(Pass::new(id, first, sign)), Token::Pass(Pass::new(id, first.other(), sign))];
            Ok(insert_pairs(d, &[(gap, toks)]))
        }
        MoveSite::R1Delete { crossing } => {
            let (c, i, j) = match_r1(d, crossing).ok_or_else(err)?;
            Ok(remove_positions(d, &[(c, i), (c, j)]))
        }
        MoveSite::R2Insert { over, under, ids: (a, b), parallel, sign, under_first } => {
            if !gap_valid(d, over) || !gap_valid(d, under) || a == b || !fresh(a) || !fresh(b) || (over.seam && under.seam) {
                return Err(err());
            }
            let o = [Token::over(a, sign), Token::over(b, sign.flip())];
            let u = if parallel {
                [Token::under(a, sign), Token::under(b, sign.flip())]
            } else {
                [Token::under(b, sign.flip()), Token::under(a, sign)]
            };
            let inserts = if under_first { [(under, u), (over, o)] } else { [(over, o), (under, u)] };
            Ok(insert_pairs(d, &inserts))
        }
        MoveSite::R2Delete { a, b } => {
            let m = match_r2(d, a, b).ok_or_else(err)?;
            let (co, io, jo) = m.over;
            let (cu, iu, ju) = m.under;
            Ok(remove_positions(d, &[(co, io), (co, jo), (cu, iu), (cu, ju)]))
        }
        MoveSite::R3 { x, y, z } => {
            let m = match_r3(d, x, y, z).ok_or_else(err)?;
            let sw = |(c, i, j): (usize, usize, usize)| ((c, i), (c, j));
            Ok(swap_tokens(d, &[sw(m.top), sw(m.mid), sw(m.bot)]))
        }
        MoveSite::T1Insert { gap } => {
            if !gap_valid(d, gap) {
                return Err(err());
            }
            Ok(insert_pairs(d, &[(gap, [Token::Bar, Token::Bar])]))
        }
        MoveSite::T1Delete { component, position } => {
            let j = match_t1(d, component, position).ok_or_else(err)?;
            Ok(remove_positions(d, &[(component, position), (component, j)]))
        }
        MoveSite::T3 { crossing, over_bar, under_bar } => {
            let swaps = match_t3(d, crossing, over_bar, under_bar).ok_or_else(err)?;
            let mut moved = swap_tokens(d, &swaps).into_components();
            // The passes exchange roles; the sign is kept.
            for comp in &mut moved {
                for t in comp.iter_mut() {
                    if let Token::Pass(p) = t {
                        if p.crossing == crossing {
                            p.role = p.role.other();
                        }
                    }
                }
            }
            Ok(TwistedGaussCode::from_components_unchecked(moved))
        }
    }
}

/// The site on `apply_move(d, site)` that undoes `site`.
pub fn inverse(d: &TwistedGaussCode, site: &MoveSite) -> Result<MoveSite, MoveError> {
    let err = || invalid(site);
    Ok(match *site {
        MoveSite::R1Insert { id, .. } => MoveSite::R1Delete { crossing: id },
        MoveSite::R1Delete { crossing } => {
            let (c, i, j) = match_r1(d, crossing).ok_or_else(err)?;
            let first = pass_at(d, c, i).ok_or_else(err)?;
            MoveSite::R1Insert { gap: gap_after_removal(d, c, i, j, &[(c, i), (c, j)]), id: crossing, first: first.role, sign: first.sign }
        }
        MoveSite::R2Insert { ids: (a, b), .. } => MoveSite::R2Delete { a, b },
        MoveSite::R2Delete { a, b } => {
            let m = match_r2(d, a, b).ok_or_else(err)?;
            let (co, io, jo) = m.over;
            let (cu, iu, ju) = m.under;
            let removed = [(co, io), (co, jo), (cu, iu), (cu, ju)];
            let over = gap_after_removal(d, co, io, jo, &removed);
            let under = gap_after_removal(d, cu, iu, ju, &removed);
            let parallel = pass_at(d, cu, iu).ok_or_else(err)?.crossing == a;
            let under_first = over == under && (iu < io);
            MoveSite::R2Insert { over, under, ids: (a, b), parallel, sign: d.sign_of(a).ok_or_else(err)?, under_first }
        }
        MoveSite::R3 { .. } => site.clone(),
        MoveSite::T1Insert { gap } => {
            let len = d.component(gap.component).len();
            let position = if gap.seam { len + 1 } else { gap.position };
            MoveSite::T1Delete { component: gap.component, position }
        }
        MoveSite::T1Delete { component, position } => {
            let j = match_t1(d, component, position).ok_or_else(err)?;
            let removed = [(component, position), (component, j)];
            MoveSite::T1Insert { gap: gap_after_removal(d, component, position, j, &removed) }
        }
        MoveSite::T3 { crossing, over_bar, under_bar } => {
            match_t3(d, crossing, over_bar, under_bar).ok_or_else(err)?;
            MoveSite::T3 { crossing, over_bar: under_bar.flip(), under_bar: over_bar.flip() }
        }
    })
}

/// Cancels bar pairs inside every arc, leaving at most one bar per arc.
///
/// An arc's bars are contiguous, so this is the unique normal form under T1
/// deletion. The wrap-around arc keeps its surviving bar on the side of the
/// start where the odd run was, so codes already in normal form are fixed.
pub fn t1_normal_form(d: &TwistedGaussCode) -> TwistedGaussCode {
    let comps = d
        .components()
        .iter()
        .map(|comp| {
            let bar_run = |it: &mut dyn Iterator<Item = &Token>| it.take_while(|t| t.is_bar()).count();
            if comp.iter().all(|t| t.is_bar()) {
                return vec![Token::Bar; comp.len() % 2];
            }
            let head = bar_run(&mut comp.iter());
            let tail = bar_run(&mut comp.iter().rev());
            let mut out = Vec::with_capacity(comp.len());
            if (head + tail) % 2 == 1 && head % 2 == 1 {
                out.push(Token::Bar);
            }
            let mut run = 0;
            for t in &comp[head..comp.len() - tail] {
                if t.is_bar() {
                    run += 1;
                } else {
                    if run % 2 == 1 {
                        out.push(Token::Bar);
                    }
                    run = 0;
                    out.push(*t);
                }
            }
            if (head + tail) % 2 == 1 && head % 2 == 0 {
                out.push(Token::Bar);
            }
            out
        })
        .collect();
    TwistedGaussCode::from_components_unchecked(comps)
}

/// Applies `steps` random moves. A move kind is chosen uniformly among the
/// kinds with at least one admissible site, then a site uniformly within
/// that kind; insertions that would exceed `max_crossings` are not
/// admissible.
pub fn random_equivalent(d: &TwistedGaussCode, steps: usize, seed: u64, max_crossings: usize) -> TwistedGaussCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    for _ in 0..steps {
        cur = random_step(&cur, &mut rng, max_crossings).map(|(_, next)| next).unwrap_or(cur);
    }
    cur
}

/// One random move, returning the site used and the result.
pub fn random_step<R: Rng>(d: &TwistedGaussCode, rng: &mut R, max_crossings: usize) -> Option<(MoveSite, TwistedGaussCode)> {
    let n = d.crossing_count() as isize;
    let sites: Vec<MoveSite> =
        applicable_moves(d).into_iter().filter(|s| n + s.crossing_delta() <= max_crossings as isize).collect();
    let kinds: Vec<MoveKind> = MoveKind::ALL.iter().copied().filter(|k| sites.iter().any(|s| s.kind() == *k)).collect();
    let kind = *kinds.choose(rng)?;
    let of_kind: Vec<&MoveSite> = sites.iter().filter(|s| s.kind() == kind).collect();
    let site = (*of_kind.choose(rng)?).clone();
    let next = apply_move(d, &site).expect("enumerated sites apply");
    Some((site, next))
}
