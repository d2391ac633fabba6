//! Exact arithmetic in `Z[A, A^-1, K1, K2, ..., M]`.
//!
//! Polynomials are stored as a sorted map from [`MonomialKey`] to a nonzero
//! coefficient, so every value is kept in canonical form and structural
//! equality is polynomial equality. The coefficient type is generic; the
//! crate root exposes [`ArrowPolynomial`](crate::ArrowPolynomial) with
//! arbitrary-precision coefficients, which is what the state sum uses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Scalar types usable as polynomial coefficients.
///
/// Anything exact and signed works; the state sum only ever adds, negates
/// and multiplies small integers into it.
pub trait Coefficient:
    Signed + Clone + Ord + std::hash::Hash + FromPrimitive + FromStr + fmt::Display + fmt::Debug + Send + Sync
{
}

impl<T> Coefficient for T where
    T: Signed + Clone + Ord + std::hash::Hash + FromPrimitive + FromStr + fmt::Display + fmt::Debug + Send + Sync
{
}

/// Product `K_{i1}^{j1} K_{i2}^{j2} ...`, kept sorted by index with no zero
/// multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KProduct(Vec<(u32, u32)>);

impl KProduct {
    pub fn one() -> Self {
        KProduct(Vec::new())
    }

    /// `K_index^mult`. A zero multiplicity yields the empty product.
    pub fn power(index: u32, mult: u32) -> Self {
        assert!(index >= 1, "K variables are indexed from 1");
        if mult == 0 {
            KProduct::one()
        } else {
            KProduct(vec![(index, mult)])
        }
    }

    /// Builds a product from arbitrary `(index, multiplicity)` pairs,
    /// merging repeats and dropping zero multiplicities.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut map = BTreeMap::new();
        for (i, j) in pairs {
            assert!(i >= 1, "K variables are indexed from 1");
            *map.entry(i).or_insert(0) += j;
        }
        KProduct(map.into_iter().filter(|&(_, j)| j > 0).collect())
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of `index * multiplicity`, i.e. half the reduced cusp count.
    pub fn k_degree(&self) -> u64 {
        self.0.iter().map(|&(i, j)| i as u64 * j as u64).sum()
    }

    /// Largest index occurring, if any.
    pub fn max_index(&self) -> Option<u32> {
        self.0.last().map(|&(i, _)| i)
    }

    pub fn multiply(&self, other: &KProduct) -> KProduct {
        KProduct::from_pairs(self.0.iter().chain(other.0.iter()).copied())
    }
}

/// Exponent data of a monomial. The derived order is the canonical term
/// order: A-exponent, then M-exponent, then the K product lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialKey {
    pub a_exp: i64,
    pub m_exp: u32,
    pub k: KProduct,
}

impl MonomialKey {
    pub fn new(a_exp: i64, k: KProduct, m_exp: u32) -> Self {
        MonomialKey { a_exp, m_exp, k }
    }

    pub fn is_constant(&self) -> bool {
        self.a_exp == 0 && self.m_exp == 0 && self.k.is_one()
    }

    fn multiply(&self, other: &MonomialKey) -> MonomialKey {
        MonomialKey {
            a_exp: self.a_exp + other.a_exp,
            m_exp: self.m_exp + other.m_exp,
            k: self.k.multiply(&other.k),
        }
    }
}

/// A single stored term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowMonomial<C> {
    pub coeff: C,
    pub key: MonomialKey,
}

/// Sparse polynomial in `A^{±1}`, `K_i` and `M` over the coefficient type `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArrowPoly<C> {
    terms: BTreeMap<MonomialKey, C>,
}

impl<C: Coefficient> ArrowPoly<C> {
    pub fn zero() -> Self {
        ArrowPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, MonomialKey::default())
    }

    pub fn monomial(coeff: C, key: MonomialKey) -> Self {
        let mut p = Self::zero();
        p.add_term(key, coeff);
        p
    }

    /// `A^e`.
    pub fn a_power(e: i64) -> Self {
        Self::monomial(C::one(), MonomialKey::new(e, KProduct::one(), 0))
    }

    /// `K_i`.
    pub fn k(i: u32) -> Self {
        Self::monomial(C::one(), MonomialKey::new(0, KProduct::power(i, 1), 0))
    }

    /// `M^n`.
    pub fn m_power(n: u32) -> Self {
        Self::monomial(C::one(), MonomialKey::new(0, KProduct::one(), n))
    }

    /// The loop value `d = -A^2 - A^-2`.
    pub fn loop_value() -> Self {
        let mut p = Self::zero();
        p.add_term(MonomialKey::new(2, KProduct::one(), 0), -C::one());
        p.add_term(MonomialKey::new(-2, KProduct::one(), 0), -C::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (MonomialKey, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (key, c) in terms {
            p.add_term(key, c);
        }
        p
    }

    /// Adds `c * key` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, key: MonomialKey, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(k, c)| k.is_constant() && c.is_one())
                .unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &C)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<ArrowMonomial<C>> {
        self.terms
            .iter()
            .map(|(k, c)| ArrowMonomial { coeff: c.clone(), key: k.clone() })
            .collect()
    }

    pub fn coefficient(&self, key: &MonomialKey) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    /// Multiplies by `sign * A^shift` without touching anything else.
    pub fn shift_a(&self, shift: i64, negate: bool) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let key = MonomialKey { a_exp: k.a_exp + shift, ..k.clone() };
                (key, if negate { -c.clone() } else { c.clone() })
            })
            .collect();
        ArrowPoly { terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest exponent of `M` among the terms (0 for the zero polynomial).
    pub fn max_m_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.m_exp).max().unwrap_or(0)
    }

    pub fn contains_m(&self) -> bool {
        self.terms.keys().any(|k| k.m_exp > 0)
    }

    pub fn contains_k(&self) -> bool {
        self.terms.keys().any(|k| !k.k.is_one())
    }

    /// Sets every `K_i` to 1 and leaves `A`, `M` alone.
    pub fn forget_k(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| {
            (MonomialKey { k: KProduct::one(), ..k.clone() }, c.clone())
        }))
    }

    /// Converts the coefficients into another coefficient type.
    pub fn convert<D: Coefficient + From<C>>(&self) -> ArrowPoly<D> {
        ArrowPoly::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), D::from(c.clone()))))
    }

    /// Multiplies by `(-A^3)^{-w}`.
    pub fn normalize_by_writhe(&self, w: i64) -> Self {
        self.shift_a(-3 * w, w.rem_euclid(2) == 1)
    }

    /// Substitutes `K_i = 1` and `M = d^{-1} M`, clearing the denominator.
    ///
    /// The result is `numerator / d^denominator_exp`, where the numerator
    /// still carries `M` symbolically.
    pub fn specialize_jones(&self) -> JonesSpecialization<C> {
        let n_max = self.max_m_degree();
        let mut d_cache: Vec<ArrowPoly<C>> = Vec::new();
        let mut numerator = Self::zero();
        for (key, c) in &self.terms {
            let shift = (n_max - key.m_exp) as usize;
            while d_cache.len() <= shift {
                d_cache.push(d_power(d_cache.len() as u32));
            }
            let term = Self::monomial(c.clone(), MonomialKey::new(key.a_exp, KProduct::one(), key.m_exp));
            numerator += &term * &d_cache[shift];
        }
        JonesSpecialization { numerator, denominator_exp: n_max }
    }

    /// `d` times [`specialize_jones`](Self::specialize_jones), the convention
    /// under which a checkerboard colorable diagram gives `d` times its Jones
    /// polynomial. One power of `d` is cancelled against the denominator when
    /// possible.
    pub fn specialize_jones_scaled(&self) -> JonesSpecialization<C> {
        let JonesSpecialization { numerator, denominator_exp } = self.specialize_jones();
        if denominator_exp > 0 {
            JonesSpecialization { numerator, denominator_exp: denominator_exp - 1 }
        } else {
            JonesSpecialization { numerator: &numerator * &Self::loop_value(), denominator_exp: 0 }
        }
    }

    /// The set of k-degrees over all terms.
    pub fn k_degree_set(&self) -> BTreeSet<u64> {
        self.terms.keys().map(|k| k.k.k_degree()).collect()
    }

    /// Canonical JSON value `{"terms":[{"c":..,"a":..,"k":{..},"m":..}, ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from_poly(self)).expect("polynomial JSON is always representable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, PolyParseError> {
        let pj: PolyJson = serde_json::from_value(value.clone()).map_err(|e| PolyParseError::Json(e.to_string()))?;
        pj.into_poly()
    }
}

/// `d^l` with `d = -A^2 - A^-2`, expanded.
pub fn d_power<C: Coefficient>(l: u32) -> ArrowPoly<C> {
    // Binomial expansion: (-1)^l sum_k C(l,k) A^{2l-4k}.
    let mut p = ArrowPoly::zero();
    let mut binom = C::one();
    for k in 0..=l {
        let c = if l.is_multiple_of(2) { binom.clone() } else { -binom.clone() };
        p.add_term(MonomialKey::new(2 * l as i64 - 4 * k as i64, KProduct::one(), 0), c);
        if k < l {
            binom = binom * C::from_u32(l - k).expect("binomial factor") / C::from_u32(k + 1).expect("binomial factor");
        }
    }
    p
}

/// Result of the Jones specialization: `numerator / d^denominator_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonesSpecialization<C: Coefficient> {
    pub numerator: ArrowPoly<C>,
    pub denominator_exp: u32,
}

impl<C: Coefficient> fmt::Display for JonesSpecialization<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.denominator_exp {
            0 => write!(f, "{}", self.numerator),
            1 => write!(f, "({}) / d", self.numerator),
            n => write!(f, "({}) / d^{}", self.numerator, n),
        }
    }
}

impl<C: Coefficient> Default for ArrowPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Zero for ArrowPoly<C> {
    fn zero() -> Self {
        ArrowPoly::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for ArrowPoly<C> {
    fn one() -> Self {
        ArrowPoly::one()
    }
}

impl<'a, C: Coefficient> Add<&'a ArrowPoly<C>> for &'a ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn add(self, rhs: &'a ArrowPoly<C>) -> ArrowPoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coefficient> Add for ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn add(mut self, rhs: ArrowPoly<C>) -> ArrowPoly<C> {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<'a, C: Coefficient> AddAssign<&'a ArrowPoly<C>> for ArrowPoly<C> {
    fn add_assign(&mut self, rhs: &'a ArrowPoly<C>) {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
}

impl<C: Coefficient> AddAssign for ArrowPoly<C> {
    fn add_assign(&mut self, rhs: ArrowPoly<C>) {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
    }
}

impl<C: Coefficient> Neg for ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn neg(self) -> ArrowPoly<C> {
        ArrowPoly { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<C: Coefficient> Neg for &ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn neg(self) -> ArrowPoly<C> {
        -self.clone()
    }
}

impl<'a, C: Coefficient> Sub<&'a ArrowPoly<C>> for &'a ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn sub(self, rhs: &'a ArrowPoly<C>) -> ArrowPoly<C> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn sub(self, rhs: ArrowPoly<C>) -> ArrowPoly<C> {
        &self - &rhs
    }
}

impl<'a, C: Coefficient> Mul<&'a ArrowPoly<C>> for &'a ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn mul(self, rhs: &'a ArrowPoly<C>) -> ArrowPoly<C> {
        let mut out = ArrowPoly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(k1.multiply(k2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Mul for ArrowPoly<C> {
    type Output = ArrowPoly<C>;

    fn mul(self, rhs: ArrowPoly<C>) -> ArrowPoly<C> {
        &self * &rhs
    }
}

impl<C: Coefficient> std::iter::Sum for ArrowPoly<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

// ---------------------------------------------------------------------------
// Text form: "A^-4 + A^-6 K1 - A^-2 K1", "2 K1^2 M^3", "-1", "0".

fn write_factors(f: &mut fmt::Formatter<'_>, key: &MonomialKey, mut first: bool) -> fmt::Result {
    let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
        if !first {
            f.write_str(" ")?;
        }
        first = false;
        Ok(())
    };
    match key.a_exp {
        0 => {}
        1 => {
            sep(f)?;
            f.write_str("A")?;
        }
        e => {
            sep(f)?;
            write!(f, "A^{}", e)?;
        }
    }
    for &(i, j) in key.k.pairs() {
        sep(f)?;
        if j == 1 {
            write!(f, "K{}", i)?;
        } else {
            write!(f, "K{}^{}", i, j)?;
        }
    }
    match key.m_exp {
        0 => {}
        1 => {
            sep(f)?;
            f.write_str("M")?;
        }
        e => {
            sep(f)?;
            write!(f, "M^{}", e)?;
        }
    }
    Ok(())
}

impl<C: Coefficient> fmt::Display for ArrowPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (key, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (n, negative) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if key.is_constant() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write_factors(f, key, true)?;
            } else {
                write!(f, "{}", mag)?;
                write_factors(f, key, false)?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for ArrowPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArrowPoly({})", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyParseError {
    #[error("unexpected token '{0}' in polynomial")]
    UnexpectedToken(String),
    #[error("polynomial text ended where a term was expected")]
    UnexpectedEnd,
    #[error("bad JSON polynomial: {0}")]
    Json(String),
}

fn parse_exponent<T: FromStr>(s: &str, tok: &str) -> Result<T, PolyParseError> {
    s.parse().map_err(|_| PolyParseError::UnexpectedToken(tok.to_string()))
}

impl<C: Coefficient> FromStr for ArrowPoly<C> {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens == ["0"] {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        let mut i = 0;
        let mut negate = false;
        let mut expect_term = true;
        let mut coeff: Option<C> = None;
        let mut key = MonomialKey::default();
        let mut k_pairs: Vec<(u32, u32)> = Vec::new();
        let mut in_term = false;

        let flush = |out: &mut Self, coeff: &mut Option<C>, key: &mut MonomialKey, k_pairs: &mut Vec<(u32, u32)>, negate: bool| {
            let mut c = coeff.take().unwrap_or_else(C::one);
            if negate {
                c = -c;
            }
            key.k = KProduct::from_pairs(k_pairs.drain(..));
            out.add_term(std::mem::take(key), c);
        };

        while i < tokens.len() {
            let tok = tokens[i];
            i += 1;
            if tok == "+" || tok == "-" {
                if in_term {
                    flush(&mut out, &mut coeff, &mut key, &mut k_pairs, negate);
                    in_term = false;
                } else if !expect_term || i > 1 {
                    return Err(PolyParseError::UnexpectedToken(tok.to_string()));
                }
                negate = tok == "-";
                expect_term = true;
                continue;
            }
            let mut body = tok;
            if !in_term {
                if let Some(rest) = body.strip_prefix('-') {
                    if i > 1 {
                        return Err(PolyParseError::UnexpectedToken(tok.to_string()));
                    }
                    negate = true;
                    body = rest;
                }
            }
            if body.is_empty() {
                return Err(PolyParseError::UnexpectedToken(tok.to_string()));
            }
            let first = body.as_bytes()[0];
            if first.is_ascii_digit() {
                if in_term {
                    return Err(PolyParseError::UnexpectedToken(tok.to_string()));
                }
                coeff = Some(body.parse().map_err(|_| PolyParseError::UnexpectedToken(tok.to_string()))?);
            } else if first == b'A' {
                let e: i64 = match body.strip_prefix("A^") {
                    Some(rest) => parse_exponent(rest, tok)?,
                    None if body == "A" => 1,
                    None => return Err(PolyParseError::UnexpectedToken(tok.to_string())),
                };
                key.a_exp += e;
            } else if first == b'M' {
                let e: u32 = match body.strip_prefix("M^") {
                    Some(rest) => parse_exponent(rest, tok)?,
                    None if body == "M" => 1,
                    None => return Err(PolyParseError::UnexpectedToken(tok.to_string())),
                };
                key.m_exp += e;
            } else if first == b'K' {
                let rest = &body[1..];
                let (idx, mult) = match rest.split_once('^') {
                    Some((a, b)) => (parse_exponent::<u32>(a, tok)?, parse_exponent::<u32>(b, tok)?),
                    None => (parse_exponent::<u32>(rest, tok)?, 1),
                };
                if idx == 0 {
                    return Err(PolyParseError::UnexpectedToken(tok.to_string()));
                }
                k_pairs.push((idx, mult));
            } else {
                return Err(PolyParseError::UnexpectedToken(tok.to_string()));
            }
            in_term = true;
            expect_term = false;
        }
        if in_term {
            flush(&mut out, &mut coeff, &mut key, &mut k_pairs, negate);
        } else {
            return Err(PolyParseError::UnexpectedEnd);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// JSON form.

/// K product as a JSON object keyed by index, written in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct KJson(Vec<(u32, u32)>);

impl Serialize for KJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (i, j) in &self.0 {
            map.serialize_entry(&i.to_string(), j)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for KJson {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct KVisitor;
        impl<'de> Visitor<'de> for KVisitor {
            type Value = KJson;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from K index to multiplicity")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut access: M) -> Result<KJson, M::Error> {
                let mut pairs = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, u32>()? {
                    let idx: u32 = k.parse().map_err(de::Error::custom)?;
                    pairs.push((idx, v));
                }
                Ok(KJson(pairs))
            }
        }
        deserializer.deserialize_map(KVisitor)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: serde_json::Number,
    a: i64,
    k: KJson,
    m: u32,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl PolyJson {
    fn from_poly<C: Coefficient>(p: &ArrowPoly<C>) -> Self {
        let terms = p
            .terms()
            .map(|(key, c)| TermJson {
                c: serde_json::Number::from_str(&c.to_string()).expect("integer coefficient renders as a JSON number"),
                a: key.a_exp,
                k: KJson(key.k.pairs().to_vec()),
                m: key.m_exp,
            })
            .collect();
        PolyJson { terms }
    }

    fn into_poly<C: Coefficient>(self) -> Result<ArrowPoly<C>, PolyParseError> {
        let mut p = ArrowPoly::zero();
        for t in self.terms {
            let c: C = t.c.to_string().parse().map_err(|_| PolyParseError::Json(format!("bad coefficient {}", t.c)))?;
            if t.k.0.iter().any(|&(i, _)| i == 0) {
                return Err(PolyParseError::Json("K index 0".into()));
            }
            p.add_term(MonomialKey::new(t.a, KProduct::from_pairs(t.k.0), t.m), c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = ArrowPoly<BigInt>;

    fn p(s: &str) -> P {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse_is_empty() {
        let sum = &P::a_power(2) + &(-P::a_power(2));
        assert!(sum.is_zero());
        assert_eq!(sum.to_string(), "0");
    }

    #[test]
    fn like_terms_merge() {
        assert_eq!(&P::k(1) + &P::k(1), P::monomial(BigInt::from(2), MonomialKey::new(0, KProduct::power(1, 1), 0)));
        assert_eq!((&P::k(1) + &P::k(1)).to_string(), "2 K1");
    }

    #[test]
    fn disjoint_keys_sort_canonically() {
        let lhs = &P::a_power(2) + &(&P::k(1) * &P::m_power(1));
        let sum = &lhs + &P::a_power(-2);
        assert_eq!(sum.to_string(), "A^-2 + K1 M + A^2");
        let ordered: Vec<String> = sum
            .terms()
            .map(|(k, c)| P::monomial(c.clone(), k.clone()).to_string())
            .collect();
        assert_eq!(ordered, vec!["A^-2", "K1 M", "A^2"]);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&P::k(1) * &P::k(1), p("K1^2"));
        let d = P::loop_value();
        assert_eq!(&d * &d, p("A^-4 + 2 + A^4"));
        assert_eq!(&P::a_power(-3) * &p("A^3 K4 M^2"), p("K4 M^2"));
    }

    #[test]
    fn d_power_examples() {
        assert_eq!(d_power::<BigInt>(0), P::one());
        assert_eq!(d_power::<BigInt>(1), p("-A^2 - A^-2"));
        assert_eq!(d_power::<BigInt>(2), p("A^4 + 2 + A^-4"));
        assert_eq!(d_power::<BigInt>(5), P::loop_value().pow(5));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(p("-A^3").normalize_by_writhe(1), P::one());
        assert_eq!(P::one().normalize_by_writhe(0), P::one());
        let vt = p("A^2 + K1 - A^4 K1");
        assert_eq!(vt.normalize_by_writhe(2), p("A^-4 + A^-6 K1 - A^-2 K1"));
        assert_eq!(P::one().normalize_by_writhe(-1), p("-A^3"));
    }

    #[test]
    fn jones_examples() {
        let j = p("A^-4 + A^-6 K1 - A^-2 K1").specialize_jones();
        assert_eq!(j.denominator_exp, 0);
        assert_eq!(j.numerator, &P::a_power(-6) * &p("A^2 - A^4 + 1"));
        let one = P::one().specialize_jones();
        assert_eq!((one.numerator, one.denominator_exp), (P::one(), 0));
        let m = P::m_power(1).specialize_jones();
        assert_eq!((m.numerator.clone(), m.denominator_exp), (P::m_power(1), 1));
        assert_eq!(m.to_string(), "(M) / d");
        // M^2 + 1 -> (M^2 + d^2) / d^2
        let j2 = p("M^2 + 1").specialize_jones();
        assert_eq!(j2.numerator, &P::m_power(2) + &d_power(2));
        assert_eq!(j2.denominator_exp, 2);
    }

    #[test]
    fn jones_scaled_cancels_one_d() {
        let s = P::m_power(1).specialize_jones_scaled();
        assert_eq!((s.numerator, s.denominator_exp), (P::m_power(1), 0));
        let s = P::one().specialize_jones_scaled();
        assert_eq!((s.numerator, s.denominator_exp), (P::loop_value(), 0));
    }

    #[test]
    fn k_degree_examples() {
        let q = p("A^3 K1 K4 M^2 + K2");
        assert!(q.k_degree_set().contains(&5));
        assert_eq!(P::one().k_degree_set(), BTreeSet::from([0]));
        assert_eq!(p("A^-4 + A^-6 K1 - A^-2 K1").k_degree_set(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn render_spec_example() {
        let q = p("A^-4 + A^-6 K1 - A^-2 K1");
        assert_eq!(q.to_string(), "A^-6 K1 + A^-4 - A^-2 K1");
        assert_eq!(p("-A^2 - A^-2").to_string(), "-A^-2 - A^2");
        assert_eq!(p("-3").to_string(), "-3");
        assert_eq!(p("2 A K3^2 M").to_string(), "2 A K3^2 M");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("A^x".parse::<P>().is_err());
        assert!("K0".parse::<P>().is_err());
        assert!("".parse::<P>().is_err());
        assert!("A +".parse::<P>().is_err());
        assert!("Q".parse::<P>().is_err());
    }

    #[test]
    fn json_shape_and_order() {
        let q = p("A^-4 + A^-6 K1 - A^-2 K1 K10^2 M");
        let s = serde_json::to_string(&q.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"terms":[{"c":1,"a":-6,"k":{"1":1},"m":0},{"c":1,"a":-4,"k":{},"m":0},{"c":-1,"a":-2,"k":{"1":1,"10":2},"m":1}]}"#
        );
        assert_eq!(P::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn big_coefficients_survive_json() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let q = P::constant(big);
        assert_eq!(P::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn generic_over_machine_integers() {
        let d: ArrowPoly<i64> = d_power(3);
        let wide: P = d.convert();
        assert_eq!(wide, d_power::<BigInt>(3));
    }
}
