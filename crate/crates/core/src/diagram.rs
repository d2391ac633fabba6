//! Twisted link diagrams as oriented Gauss codes with bars.
//!
//! Virtual crossings are not recorded: every invariant in this crate is
//! unchanged by detour moves, and bars slide freely past virtual crossings,
//! so a Gauss code with bars determines the diagram up to moves that none of
//! the invariants can see.
//!
//! Text grammar (line oriented, UTF-8):
//!
//! ```text
//! O1+ O2+ b U1+ U2+ b   # 2-crossing twisted knot
//! O1+ U2- ; U1+ O2-     # two components on one line
//! ()                    # crossing-free component
//! ```
//!
//! Components are separated by `;` or newlines, a pass is `O`/`U`, a crossing
//! number and a sign, a bar is `b`, and `#` comments run to end of line. An
//! input with no components at all is the unknot (one empty component).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Role::Over => 'O',
            Role::Under => 'U',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// One passage of a strand through a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pass {
    pub crossing: u32,
    pub role: Role,
    pub sign: Sign,
}

impl Pass {
    pub fn new(crossing: u32, role: Role, sign: Sign) -> Self {
        Pass { crossing, role, sign }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Pass(Pass),
    Bar,
}

impl Token {
    pub fn over(crossing: u32, sign: Sign) -> Token {
        Token::Pass(Pass::new(crossing, Role::Over, sign))
    }

    pub fn under(crossing: u32, sign: Sign) -> Token {
        Token::Pass(Pass::new(crossing, Role::Under, sign))
    }

    pub fn as_pass(&self) -> Option<&Pass> {
        match self {
            Token::Pass(p) => Some(p),
            Token::Bar => None,
        }
    }

    pub fn is_bar(&self) -> bool {
        matches!(self, Token::Bar)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Bar => f.write_str("b"),
            Token::Pass(p) => write!(f, "{}{}{}", p.role.letter(), p.crossing, p.sign.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("crossing ids must be positive")]
    ZeroCrossingId,
    #[error("crossing {id} appears {count} times (expected exactly 2)")]
    CrossingCount { id: u32, count: usize },
    #[error("crossing {id} has two {role:?} passes")]
    DuplicateRole { id: u32, role: Role },
    #[error("crossing {id} has passes of opposite signs")]
    SignMismatch { id: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: malformed token '{token}'")]
    Syntax { line: usize, column: usize, token: String },
    #[error("line {line}, column {column}: {source}")]
    Validation {
        line: usize,
        column: usize,
        #[source]
        source: ValidationError,
    },
}

/// Maximal run of bars between two consecutive passes of a component, or all
/// of a crossing-free component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub component: usize,
    /// Position of the pass the arc leaves; `None` for a crossing-free component.
    pub start: Option<usize>,
    /// Position of the pass the arc enters.
    pub end: Option<usize>,
    /// Positions of the bar tokens on the arc, in traversal order.
    pub bars: Vec<usize>,
}

impl Arc {
    pub fn is_degenerate(&self) -> bool {
        self.start.is_none()
    }

    pub fn bar_count(&self) -> usize {
        self.bars.len()
    }
}

/// Multi-component cyclic token sequence; validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedGaussCode {
    components: Vec<Vec<Token>>,
}

impl TwistedGaussCode {
    pub fn new(components: Vec<Vec<Token>>) -> Result<Self, ValidationError> {
        validate(&components).map_err(|(e, _)| e)?;
        Ok(TwistedGaussCode { components })
    }

    /// The unknot: one empty component.
    pub fn unknot() -> Self {
        TwistedGaussCode { components: vec![Vec::new()] }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut components: Vec<Vec<Token>> = Vec::new();
        let mut locations: Vec<Vec<(usize, usize)>> = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let mut offset = 0;
            for chunk in line.split(';') {
                let chunk_start = offset;
                offset += chunk.len() + 1;
                let mut toks = Vec::new();
                let mut locs = Vec::new();
                let mut explicit_empty = false;
                let mut col = 0;
                for word in chunk.split_whitespace() {
                    let rel = chunk[col..].find(word).expect("word comes from chunk") + col;
                    col = rel + word.len();
                    let column = chunk_start + rel + 1;
                    if word == "()" {
                        if explicit_empty || !toks.is_empty() {
                            return Err(ParseError::Syntax { line: line_no + 1, column, token: word.into() });
                        }
                        explicit_empty = true;
                        continue;
                    }
                    if explicit_empty {
                        return Err(ParseError::Syntax { line: line_no + 1, column, token: word.into() });
                    }
                    let tok = parse_token(word)
                        .ok_or_else(|| ParseError::Syntax { line: line_no + 1, column, token: word.into() })?;
                    toks.push(tok);
                    locs.push((line_no + 1, column));
                }
                if explicit_empty || !toks.is_empty() {
                    components.push(toks);
                    locations.push(locs);
                }
            }
        }
        if components.is_empty() {
            components.push(Vec::new());
            locations.push(Vec::new());
        }
        if let Err((source, at)) = validate(&components) {
            let (line, column) = at.map(|(c, p)| locations[c][p]).unwrap_or((1, 1));
            return Err(ParseError::Validation { line, column, source });
        }
        Ok(TwistedGaussCode { components })
    }

    pub fn components(&self) -> &[Vec<Token>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[Token] {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Vec<Token>> {
        self.components
    }

    /// Distinct crossing ids, ascending.
    pub fn crossing_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.passes().map(|(_, _, p)| p.crossing).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn crossing_count(&self) -> usize {
        self.passes().count() / 2
    }

    pub fn max_crossing_id(&self) -> u32 {
        self.passes().map(|(_, _, p)| p.crossing).max().unwrap_or(0)
    }

    /// All passes as `(component, position, pass)`.
    pub fn passes(&self) -> impl Iterator<Item = (usize, usize, &Pass)> {
        self.components.iter().enumerate().flat_map(|(c, comp)| {
            comp.iter().enumerate().filter_map(move |(i, t)| t.as_pass().map(|p| (c, i, p)))
        })
    }

    /// Location `(component, position)` of the given pass.
    pub fn locate(&self, crossing: u32, role: Role) -> Option<(usize, usize)> {
        self.passes()
            .find(|(_, _, p)| p.crossing == crossing && p.role == role)
            .map(|(c, i, _)| (c, i))
    }

    pub fn sign_of(&self, crossing: u32) -> Option<Sign> {
        self.passes().find(|(_, _, p)| p.crossing == crossing).map(|(_, _, p)| p.sign)
    }

    /// Sum of crossing signs, each crossing counted once.
    pub fn writhe(&self) -> i64 {
        self.passes()
            .filter(|(_, _, p)| p.role == Role::Over)
            .map(|(_, _, p)| p.sign.value())
            .sum()
    }

    pub fn bar_count(&self) -> usize {
        self.components.iter().flatten().filter(|t| t.is_bar()).count()
    }

    pub fn has_bars(&self) -> bool {
        self.components.iter().flatten().any(|t| t.is_bar())
    }

    /// Edges between consecutive passes, per component in order.
    ///
    /// A component with passes yields one arc per pass (the arc leaving it);
    /// a crossing-free component yields a single degenerate arc.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut out = Vec::new();
        for (c, comp) in self.components.iter().enumerate() {
            let pass_positions: Vec<usize> =
                comp.iter().enumerate().filter(|(_, t)| !t.is_bar()).map(|(i, _)| i).collect();
            if pass_positions.is_empty() {
                out.push(Arc { component: c, start: None, end: None, bars: (0..comp.len()).collect() });
                continue;
            }
            let n = comp.len();
            for (k, &start) in pass_positions.iter().enumerate() {
                let end = pass_positions[(k + 1) % pass_positions.len()];
                let mut bars = Vec::new();
                let mut j = (start + 1) % n;
                while j != end {
                    bars.push(j);
                    j = (j + 1) % n;
                }
                out.push(Arc { component: c, start: Some(start), end: Some(end), bars });
            }
        }
        out
    }

    /// Renumbers crossings densely `1..=n` in order of first appearance.
    pub fn renumbered(&self) -> Self {
        let mut map = BTreeMap::new();
        let mut next = 1;
        for (_, _, p) in self.passes() {
            map.entry(p.crossing).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
        }
        self.map_crossings(|id| map[&id])
    }

    /// Applies an injective relabelling of crossing ids.
    pub fn map_crossings<F: Fn(u32) -> u32>(&self, f: F) -> Self {
        let components = self
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|t| match t {
                        Token::Bar => Token::Bar,
                        Token::Pass(p) => Token::Pass(Pass { crossing: f(p.crossing), ..*p }),
                    })
                    .collect()
            })
            .collect();
        TwistedGaussCode { components }
    }

    /// Rotates component `c` left by `k` positions.
    pub fn rotated(&self, c: usize, k: usize) -> Self {
        let mut components = self.components.clone();
        let comp = &mut components[c];
        if !comp.is_empty() {
            let k = k % comp.len();
            comp.rotate_left(k);
        }
        TwistedGaussCode { components }
    }

    /// Same diagram with components in another order.
    pub fn permuted_components(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.components.len());
        TwistedGaussCode { components: order.iter().map(|&i| self.components[i].clone()).collect() }
    }

    /// Representative that ignores where each cyclic component starts and
    /// the order of components; ids are left alone.
    pub fn rotation_canonical(&self) -> Self {
        let mut comps: Vec<Vec<Token>> = self
            .components
            .iter()
            .map(|comp| {
                (0..comp.len().max(1))
                    .map(|k| {
                        let mut r = comp.clone();
                        if !r.is_empty() {
                            r.rotate_left(k);
                        }
                        r
                    })
                    .min()
                    .unwrap_or_default()
            })
            .collect();
        comps.sort();
        TwistedGaussCode { components: comps }
    }

    /// Builds a code without validation. Callers guarantee validity.
    pub(crate) fn from_components_unchecked(components: Vec<Vec<Token>>) -> Self {
        debug_assert!(validate(&components).is_ok(), "invalid code: {:?}", components);
        TwistedGaussCode { components }
    }
}

impl Default for TwistedGaussCode {
    fn default() -> Self {
        Self::unknot()
    }
}

fn parse_token(word: &str) -> Option<Token> {
    if word == "b" {
        return Some(Token::Bar);
    }
    let bytes = word.as_bytes();
    if bytes.len() < 3 {
        return None;
    }
    let role = match bytes[0] {
        b'O' => Role::Over,
        b'U' => Role::Under,
        _ => return None,
    };
    let sign = match bytes[bytes.len() - 1] {
        b'+' => Sign::Positive,
        b'-' => Sign::Negative,
        _ => return None,
    };
    let digits = &word[1..word.len() - 1];
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let crossing: u32 = digits.parse().ok()?;
    Some(Token::Pass(Pass { crossing, role, sign }))
}

type Located<E> = (E, Option<(usize, usize)>);

fn validate(components: &[Vec<Token>]) -> Result<(), Located<ValidationError>> {
    struct Seen {
        over: Option<(usize, usize)>,
        under: Option<(usize, usize)>,
        sign: Sign,
        count: usize,
    }
    let mut seen: BTreeMap<u32, Seen> = BTreeMap::new();
    for (c, comp) in components.iter().enumerate() {
        for (i, t) in comp.iter().enumerate() {
            let Token::Pass(p) = t else { continue };
            if p.crossing == 0 {
                return Err((ValidationError::ZeroCrossingId, Some((c, i))));
            }
            let entry = seen.entry(p.crossing).or_insert(Seen { over: None, under: None, sign: p.sign, count: 0 });
            entry.count += 1;
            if entry.count > 2 {
                return Err((ValidationError::CrossingCount { id: p.crossing, count: entry.count }, Some((c, i))));
            }
            if entry.sign != p.sign {
                return Err((ValidationError::SignMismatch { id: p.crossing }, Some((c, i))));
            }
            let slot = match p.role {
                Role::Over => &mut entry.over,
                Role::Under => &mut entry.under,
            };
            if slot.is_some() {
                return Err((ValidationError::DuplicateRole { id: p.crossing, role: p.role }, Some((c, i))));
            }
            *slot = Some((c, i));
        }
    }
    for (&id, s) in &seen {
        if s.count != 2 {
            return Err((ValidationError::CrossingCount { id, count: s.count }, s.over.or(s.under)));
        }
    }
    Ok(())
}

impl FromStr for TwistedGaussCode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TwistedGaussCode::parse(s)
    }
}

impl fmt::Display for TwistedGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, comp) in self.components.iter().enumerate() {
            if c > 0 {
                f.write_str(" ; ")?;
            }
            if comp.is_empty() {
                f.write_str("()")?;
            }
            for (i, t) in comp.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", t)?;
            }
        }
        Ok(())
    }
}
