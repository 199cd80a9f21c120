//! Alphabets and finite words.
//!
//! Symbols are the integers `1..=N`. The text format writes a word as its
//! symbols in decimal separated by single spaces; the empty word is `-`.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Symbol = u8;

/// Largest supported alphabet. Coded-shift patterns store symbol classes as
/// 64-bit masks.
pub const MAX_ALPHABET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_ALPHABET {
            return Err(Error::InvalidSpec(format!("alphabet size must be in 1..={MAX_ALPHABET}, got {size}")));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        1..=self.size as Symbol
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s >= 1 && (s as usize) <= self.size
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn from_slice(symbols: &[Symbol]) -> Self {
        Self(symbols.to_vec())
    }

    /// Parse the compact digit form used in shift specs (`"212"`), one
    /// symbol per character.
    pub fn from_digits(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d > 0)
                    .map(|d| d as Symbol)
                    .ok_or_else(|| Error::InvalidSpec(format!("bad symbol {c:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn concat(&self, other: &[Symbol]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Self(v)
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn contains_symbol(&self, s: Symbol) -> bool {
        self.0.contains(&s)
    }

    pub fn is_over(&self, alphabet: Alphabet) -> bool {
        self.0.iter().all(|&s| alphabet.contains(s))
    }
}

impl Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Self(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "-" {
            return Ok(Self::empty());
        }
        if text.is_empty() {
            return Err(Error::InvalidSpec("empty line is not a word; use -".into()));
        }
        text.split(' ')
            .map(|tok| match tok.parse::<Symbol>() {
                Ok(s) if s > 0 => Ok(s),
                _ => Err(Error::InvalidSpec(format!("bad symbol {tok:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parse a file in the word text format, skipping blank lines and `#` comments.
pub fn parse_word_lines(text: &str) -> Result<Vec<Word>> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::parse).collect()
}
