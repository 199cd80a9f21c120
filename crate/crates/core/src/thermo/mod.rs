//! Thermodynamic formalism for locally constant potentials on block graphs:
//! partition sums, pressure by transfer matrices, Gibbs–Markov equilibrium
//! measures and zero-temperature schedules.

mod measure;
mod pressure;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Edge};
use crate::lang::{enumerate_words, LanguageOracle};
use crate::scalar::Scalar;
use crate::word::{Alphabet, Word};

pub use measure::{equilibrium_markov, measure_entropy, MarkovMeasure};
pub use pressure::{
    partition_sum, pressure, sup_birkhoff_sum, weak_gibbs_audit, zero_temperature_path, GibbsAudit, PressureReport,
    ZeroTempPoint,
};

/// A potential that depends on the first `range` symbols of a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocallyConstantPotential<T> {
    range: usize,
    alphabet: Alphabet,
    table: BTreeMap<Word, T>,
}

impl<T: Scalar> LocallyConstantPotential<T> {
    /// Values on exactly the legal words of length `range`.
    pub fn new(lang: &dyn LanguageOracle, range: usize, table: BTreeMap<Word, T>) -> Result<Self> {
        if range == 0 {
            return Err(Error::InvalidSpec("potential range must be at least 1".into()));
        }
        let legal = enumerate_words(lang, range)?;
        if let Some(w) = legal.iter().find(|w| !table.contains_key(*w)) {
            return Err(Error::InvalidSpec(format!("potential has no value on {w}")));
        }
        if table.len() != legal.len() {
            let extra = table.keys().find(|w| legal.binary_search(w).is_err()).expect("some key is not legal");
            return Err(Error::InvalidSpec(format!("potential defined on illegal or mis-sized word {extra}")));
        }
        Ok(Self { range, alphabet: lang.alphabet(), table })
    }

    /// Same value everywhere.
    pub fn constant(lang: &dyn LanguageOracle, value: T) -> Result<Self> {
        let table = enumerate_words(lang, 1)?.into_iter().map(|w| (w, value.clone())).collect();
        Self::new(lang, 1, table)
    }

    /// Build from a function of the window.
    pub fn from_fn(lang: &dyn LanguageOracle, range: usize, f: impl Fn(&Word) -> T) -> Result<Self> {
        let table = enumerate_words(lang, range)?.into_iter().map(|w| {
            let v = f(&w);
            (w, v)
        });
        Self::new(lang, range, table.collect())
    }

    /// Parse `word value` lines; the word is either space-separated symbols
    /// or, as a single token, compact digits.
    pub fn parse(lang: &dyn LanguageOracle, text: &str, parse_value: impl Fn(&str) -> Option<T>) -> Result<Self> {
        let mut table = BTreeMap::new();
        let mut range = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let (value, word) = tokens.split_last().expect("line is not blank");
            let word = match word {
                [] => return Err(Error::InvalidSpec(format!("line {line:?} has no word"))),
                [single] => Word::from_digits(single)?,
                many => many.join(" ").parse()?,
            };
            let value = parse_value(value).ok_or_else(|| Error::InvalidSpec(format!("bad value {value:?}")))?;
            if *range.get_or_insert(word.len()) != word.len() {
                return Err(Error::InvalidSpec("potential words must share one length".into()));
            }
            if table.insert(word.clone(), value).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate potential word {word}")));
            }
        }
        let range = range.ok_or_else(|| Error::InvalidSpec("empty potential file".into()))?;
        Self::new(lang, range, table)
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn table(&self) -> &BTreeMap<Word, T> {
        &self.table
    }

    /// Value on the window starting at `w[0]`; `w` must have at least
    /// `range` symbols.
    pub fn at(&self, w: &[crate::word::Symbol]) -> &T {
        &self.table[&Word::from_slice(&w[..self.range])]
    }

    pub fn max_value(&self) -> T {
        self.table.values().cloned().reduce(T::max_of).expect("table is nonempty")
    }

    pub fn min_value(&self) -> T {
        self.table.values().cloned().reduce(T::min_of).expect("table is nonempty")
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LocallyConstantPotential<U> {
        LocallyConstantPotential {
            range: self.range,
            alphabet: self.alphabet,
            table: self.table.iter().map(|(w, v)| (w.clone(), f(v))).collect(),
        }
    }
}

/// Higher block presentation: vertices are the legal `(q-1)`-words, edges
/// the legal `q`-words, an edge `a_1..a_q` running from `a_1..a_{q-1}` to
/// `a_2..a_q` with label `a_q`. Bi-infinite paths are exactly the points of
/// a shift of finite type whose forbidden words have length at most `q`.
#[derive(Debug, Clone)]
pub struct BlockGraph {
    q: usize,
    alphabet: Alphabet,
    vertices: Vec<Word>,
    edge_words: Vec<Word>,
    graph: Digraph,
    vertex_index: HashMap<Word, usize>,
    edge_index: HashMap<Word, usize>,
}

impl BlockGraph {
    pub fn new(lang: &dyn LanguageOracle, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSpec("block length must be at least 1".into()));
        }
        let vertices = enumerate_words(lang, q - 1)?;
        let edge_words = enumerate_words(lang, q)?;
        let vertex_index: HashMap<Word, usize> = vertices.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let edge_index: HashMap<Word, usize> = edge_words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let edges = edge_words
            .iter()
            .map(|w| Edge {
                src: vertex_index[&Word::from_slice(&w[..q - 1])],
                dst: vertex_index[&Word::from_slice(&w[1..])],
                label: w[q - 1] as u32,
            })
            .collect();
        let graph = Digraph::new(vertices.len(), edges);
        Ok(Self { q, alphabet: lang.alphabet(), vertices, edge_words, graph, vertex_index, edge_index })
    }

    /// Block length large enough for both the potential and the memory of
    /// the shift.
    pub fn for_potential<T: Scalar>(
        lang: &dyn LanguageOracle,
        memory: usize,
        potential: &LocallyConstantPotential<T>,
    ) -> Result<Self> {
        Self::new(lang, potential.range().max(memory + 1))
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn edge_words(&self) -> &[Word] {
        &self.edge_words
    }

    pub fn vertex(&self, w: &[crate::word::Symbol]) -> Option<usize> {
        self.vertex_index.get(&Word::from_slice(w)).copied()
    }

    pub fn edge(&self, w: &[crate::word::Symbol]) -> Option<usize> {
        self.edge_index.get(&Word::from_slice(w)).copied()
    }

    /// Potential values per edge.
    pub fn weights<T: Scalar>(&self, potential: &LocallyConstantPotential<T>) -> Result<Vec<T>> {
        if potential.range() > self.q {
            return Err(Error::InvalidSpec(format!(
                "potential range {} exceeds block length {}",
                potential.range(),
                self.q
            )));
        }
        Ok(self.edge_words.iter().map(|w| potential.at(w).clone()).collect())
    }
}
