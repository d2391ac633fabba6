//! Named diagram collections.
//!
//! A corpus file has one entry per line, either `name: code` or
//! `name: braid <strands> <letters>`; `#` starts a comment and blank lines
//! are ignored. Components of a code are separated by `;`.

use thiserror::Error;

use crate::braid::{BraidError, BraidWord};
use crate::diagram::{ParseError, TwistedGaussCode};

/// The corpus compiled into the crate.
pub const DEFAULT_CORPUS: &str = include_str!("../corpus/default.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub code: TwistedGaussCode,
    /// Braid the diagram was closed from, if any.
    pub braid: Option<BraidWord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: expected 'name: code'")]
    MissingName { line: usize },
    #[error("line {line}: {source}")]
    Code { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Braid { line: usize, source: BraidError },
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (name, rest) = body.split_once(':').ok_or(CorpusError::MissingName { line })?;
        let rest = rest.trim();
        let entry = if let Some(b) = rest.strip_prefix("braid ") {
            let b = b.trim_start();
            let (n, letters) = b.split_once(char::is_whitespace).unwrap_or((b, ""));
            let strands = n.parse().map_err(|_| CorpusError::Braid { line, source: BraidError::BadLetter(n.to_string()) })?;
            let word = BraidWord::parse(letters, strands).map_err(|source| CorpusError::Braid { line, source })?;
            let code = word.closure().map_err(|source| CorpusError::Braid { line, source })?;
            CorpusEntry { name: name.trim().to_string(), code, braid: Some(word) }
        } else {
            let code = TwistedGaussCode::parse(rest).map_err(|source| CorpusError::Code { line, source })?;
            CorpusEntry { name: name.trim().to_string(), code, braid: None }
        };
        out.push(entry);
    }
    Ok(out)
}

pub fn default_corpus() -> Vec<CorpusEntry> {
    parse_corpus(DEFAULT_CORPUS).expect("shipped corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_corpus_loads() {
        let c = default_corpus();
        assert!(c.len() >= 20);
        let get = |n: &str| c.iter().find(|e| e.name == n).unwrap();
        assert_eq!(get("unknot").code, TwistedGaussCode::unknot());
        assert_eq!(get("hopf").code.components().len(), 2);
        assert_eq!(get("figure-eight").code.crossing_count(), 4);
        assert_eq!(get("figure-eight").code.writhe(), 0);
        assert_eq!(get("trefoil").code, BraidWord::parse("s1 s1 s1", 2).unwrap().closure().unwrap().rotated(0, 3));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_corpus("# c\nno colon"), Err(CorpusError::MissingName { line: 2 }));
        assert!(matches!(parse_corpus("a: O1+"), Err(CorpusError::Code { line: 1, .. })));
        assert!(matches!(parse_corpus("a: braid 2 s2"), Err(CorpusError::Braid { line: 1, .. })));
    }
}
