//! PD-code ingestion: `PD[X(1,4,2,5), X(3,6,4,1), ...]`, with `O` entries
//! for crossingless circle components.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// One crossing `X(a,b,c,d)`: `a` is the incoming under-strand edge and
/// `b,c,d` follow counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub edges: [usize; 4],
}

impl Crossing {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        Self { edges: [a, b, c, d] }
    }
}

/// A planar-diagram code: a list of crossings plus crossingless circles.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PDCode {
    pub crossings: Vec<Crossing>,
    pub free_loops: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("edge label {label} appears {count} times (expected one or two)")]
    LabelMultiplicity { label: usize, count: usize },
}

impl PDCode {
    /// Parses the `PD[...]` text form.
    pub fn parse(text: &str) -> Result<Self, PdError> {
        Parser::new(text).parse()
    }

    /// Edge labels that appear exactly once: the open boundary edges.
    pub fn open_edges(&self) -> Vec<usize> {
        self.label_counts()
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn is_link(&self) -> bool {
        self.open_edges().is_empty()
    }

    fn label_counts(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for x in &self.crossings {
            for &e in &x.edges {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Occurrences of each label as (crossing, slot) pairs.
    pub fn occurrences(&self) -> BTreeMap<usize, Vec<(usize, usize)>> {
        let mut occ: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, x) in self.crossings.iter().enumerate() {
            for (s, &e) in x.edges.iter().enumerate() {
                occ.entry(e).or_default().push((c, s));
            }
        }
        occ
    }

    fn validate(&self) -> Result<(), PdError> {
        for (label, count) in self.label_counts() {
            if count > 2 {
                return Err(PdError::LabelMultiplicity { label, count });
            }
        }
        Ok(())
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PD[")?;
        let mut first = true;
        for x in &self.crossings {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(
                f,
                "X({},{},{},{})",
                x.edges[0], x.edges[1], x.edges[2], x.edges[3]
            )?;
        }
        for _ in 0..self.free_loops {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "O")?;
        }
        write!(f, "]")
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> PdError {
        PdError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, expected: u8) -> Result<(), PdError> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == expected {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", expected as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<usize, PdError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("number out of range"))
    }

    fn parse(mut self) -> Result<PDCode, PdError> {
        self.skip_ws();
        if !self.text[self.pos..].starts_with("PD") {
            return Err(self.error("expected 'PD'"));
        }
        self.pos += 2;
        self.eat(b'[')?;
        let mut pd = PDCode::default();
        loop {
            match self.peek() {
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                Some(b'X') => {
                    self.pos += 1;
                    self.eat(b'(')?;
                    let a = self.number()?;
                    self.eat(b',')?;
                    let b = self.number()?;
                    self.eat(b',')?;
                    let c = self.number()?;
                    self.eat(b',')?;
                    let d = self.number()?;
                    self.eat(b')')?;
                    pd.crossings.push(Crossing::new(a, b, c, d));
                }
                Some(b'O') => {
                    self.pos += 1;
                    pd.free_loops += 1;
                }
                Some(_) => return Err(self.error("expected 'X(...)', 'O' or ']'")),
                None => return Err(self.error("unterminated PD expression")),
            }
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected ',' or ']'")),
            }
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.error("trailing input after PD expression"));
        }
        pd.validate()?;
        Ok(pd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_crossing() {
        let pd = PDCode::parse("PD[X(1,4,2,3)]").unwrap();
        assert_eq!(pd.crossings.len(), 1);
        assert_eq!(pd.crossings[0].edges, [1, 4, 2, 3]);
        assert_eq!(pd.open_edges(), vec![1, 2, 3, 4]);
        assert!(!pd.is_link());
    }

    #[test]
    fn trefoil_parses() {
        let pd = PDCode::parse("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        assert_eq!(pd.crossings.len(), 3);
        assert!(pd.is_link());
        assert_eq!(pd.to_string(), "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]");
    }

    #[test]
    fn empty_and_circles() {
        let pd = PDCode::parse("PD[]").unwrap();
        assert!(pd.crossings.is_empty());
        assert_eq!(pd.free_loops, 0);
        let pd = PDCode::parse("PD[O, O]").unwrap();
        assert_eq!(pd.free_loops, 2);
    }

    #[test]
    fn label_multiplicity_rejected() {
        // label 1 appears three times
        let err = PDCode::parse("PD[X(1,1,1,2)]").unwrap_err();
        assert!(matches!(err, PdError::LabelMultiplicity { label: 1, count: 3 }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = PDCode::parse("PD[X(1,4,2)]").unwrap_err();
        assert!(matches!(err, PdError::Syntax { .. }));
    }
}
