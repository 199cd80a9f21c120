use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lang::{LanguageOracle, State, WordAutomaton, UNBOUNDED};
use crate::word::{Alphabet, Symbol, Word};

use super::GapSet;

/// Bit `a - 1` is set when symbol `a` is in the class.
pub type SymbolSet = u64;

pub fn singleton(a: Symbol) -> SymbolSet {
    1u64 << (a - 1)
}

/// Symbols `lo..=hi` as a class.
pub fn range_set(lo: Symbol, hi: Symbol) -> SymbolSet {
    (lo..=hi).fold(0, |m, a| m | singleton(a))
}

/// A family of generator words sharing a shape: position `i` may hold any
/// symbol of class `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern(pub Vec<SymbolSet>);

impl Pattern {
    pub fn word(w: &[Symbol]) -> Self {
        Self(w.iter().map(|&a| singleton(a)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matches(&self, w: &[Symbol]) -> bool {
        w.len() == self.0.len() && w.iter().zip(&self.0).all(|(&a, &c)| c & singleton(a) != 0)
    }

    /// All words of the pattern in lexicographic order.
    pub fn expand(&self) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for &class in &self.0 {
            let syms: Vec<Symbol> = (1..=64u8).filter(|&a| class & singleton(a) != 0).collect();
            out = out
                .into_iter()
                .flat_map(|w| {
                    syms.iter().map(move |&a| {
                        let mut v = w.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Word::new).collect()
    }
}

/// A countable set of generator words, presented through finite truncations.
pub trait GeneratorSpec: Send + Sync + Debug {
    fn alphabet(&self) -> Alphabet;

    fn contains_empty(&self) -> bool {
        true
    }

    /// Patterns covering exactly the nonempty generators of length `<= max_len`.
    fn patterns_up_to(&self, max_len: usize) -> Vec<Pattern>;

    /// A length `B` such that every prefix, suffix and factor of length
    /// `<= n` of any generator (proper or not) already occurs in the same
    /// role in some generator of length `<= B`.
    fn fragment_bound(&self, n: usize) -> usize;

    fn is_finite(&self) -> bool;

    fn describe(&self) -> String;
}

/// Generator words of length `<= max_len`, including the empty word when
/// present, in order of length and then lexicographically.
pub fn enumerate_generators(gen: &dyn GeneratorSpec, max_len: usize) -> Vec<Word> {
    let mut words: Vec<Word> = gen.patterns_up_to(max_len).iter().flat_map(Pattern::expand).collect();
    if gen.contains_empty() {
        words.push(Word::empty());
    }
    words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    words.dedup();
    words
}

/// `{w 1 : w in {2..N}^s, s in S}`; for `N = 2` the S-gap generator `{2^s 1}`.
#[derive(Debug, Clone)]
pub struct GapGenerator {
    pub gaps: GapSet,
    pub n: usize,
}

impl GeneratorSpec for GapGenerator {
    fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.n).expect("validated by the constructor")
    }
    fn patterns_up_to(&self, max_len: usize) -> Vec<Pattern> {
        if max_len == 0 {
            return Vec::new();
        }
        let filler = range_set(2, self.n as Symbol);
        self.gaps
            .enumerate_up_to(max_len as u64 - 1)
            .into_iter()
            .map(|s| {
                let mut p = vec![filler; s as usize];
                p.push(singleton(1));
                Pattern(p)
            })
            .collect()
    }
    fn fragment_bound(&self, n: usize) -> usize {
        let s = match self.gaps.next_at_least(n as u64) {
            Some(s) => s,
            None => self.gaps.max_finite().unwrap_or(0),
        };
        s as usize + 1
    }
    fn is_finite(&self) -> bool {
        self.gaps.is_finite()
    }
    fn describe(&self) -> String {
        format!("fatsgap:N={}:{}", self.n, self.gaps)
    }
}

/// `{1^i 2^i : i in I}` with `I` a set of positive integers.
#[derive(Debug, Clone)]
pub struct BlockGenerator {
    pub index: GapSet,
}

impl GeneratorSpec for BlockGenerator {
    fn alphabet(&self) -> Alphabet {
        Alphabet::new(2).expect("two symbols")
    }
    fn patterns_up_to(&self, max_len: usize) -> Vec<Pattern> {
        self.index
            .enumerate_up_to(max_len as u64 / 2)
            .into_iter()
            .filter(|&i| i > 0)
            .map(|i| {
                let mut p = vec![singleton(1); i as usize];
                p.extend(std::iter::repeat_n(singleton(2), i as usize));
                Pattern(p)
            })
            .collect()
    }
    fn fragment_bound(&self, n: usize) -> usize {
        let i = match self.index.next_at_least(n.max(1) as u64) {
            Some(i) => i,
            None => self.index.max_finite().unwrap_or(0),
        };
        2 * i as usize
    }
    fn is_finite(&self) -> bool {
        self.index.is_finite()
    }
    fn describe(&self) -> String {
        format!("kucherenko:{}", self.index)
    }
}

/// A finite list of generator patterns (explicit words are singleton patterns).
#[derive(Debug, Clone)]
pub struct PatternListGenerator {
    alphabet: Alphabet,
    patterns: Vec<Pattern>,
    contains_empty: bool,
    label: String,
}

impl PatternListGenerator {
    pub fn from_words(alphabet: Alphabet, words: &[Word]) -> Result<Self> {
        if let Some(w) = words.iter().find(|w| !w.is_over(alphabet)) {
            return Err(Error::InvalidSpec(format!("generator {w} uses symbols outside the alphabet")));
        }
        let contains_empty = words.iter().any(|w| w.is_empty());
        let mut patterns: Vec<Pattern> = words.iter().filter(|w| !w.is_empty()).map(|w| Pattern::word(w)).collect();
        patterns.sort_by(|a, b| a.len().cmp(&b.len()).then(a.0.cmp(&b.0)));
        patterns.dedup();
        Ok(Self { alphabet, patterns, contains_empty, label: format!("{} words", words.len()) })
    }

    pub fn from_patterns(alphabet: Alphabet, patterns: Vec<Pattern>, label: String) -> Self {
        Self { alphabet, patterns, contains_empty: true, label }
    }
}

impl GeneratorSpec for PatternListGenerator {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn contains_empty(&self) -> bool {
        self.contains_empty
    }
    fn patterns_up_to(&self, max_len: usize) -> Vec<Pattern> {
        self.patterns.iter().filter(|p| p.len() <= max_len).cloned().collect()
    }
    fn fragment_bound(&self, _n: usize) -> usize {
        self.patterns.iter().map(Pattern::len).max().unwrap_or(0)
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn describe(&self) -> String {
        format!("coded:{}", self.label)
    }
}

/// Which collection derived from the generator an automaton reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodedCollection {
    /// Subwords of finite concatenations: the language itself.
    Language,
    /// Finite concatenations of generators.
    Concatenations,
    /// Proper suffixes of generators, with the empty word.
    ProperSuffixes,
    /// Proper prefixes of generators, with the empty word.
    ProperPrefixes,
}

// Special position ids inside a parse state.
const ANY: u32 = u32::MAX;
const ANY_PROPER: u32 = u32::MAX - 1;
const BOUNDARY: u32 = u32::MAX - 2;

/// Coded shift oracle.
///
/// A parse state is the sorted set of positions `(pattern, offset)` the
/// word read so far may end at; `BOUNDARY` marks the end of a generator.
/// Reading starts from every offset of every pattern, so the accepted words
/// are the subwords of finite concatenations. Generators of length up to
/// `fragment_bound(horizon)` are loaded, which makes membership exact for
/// words of length `<= horizon`.
#[derive(Debug, Clone)]
pub struct CodedShift {
    generator: Arc<dyn GeneratorSpec>,
    horizon: usize,
    patterns: Vec<Pattern>,
    offsets: Vec<u32>,
    owner: Vec<u32>,
    first: Vec<Vec<u32>>,
}

impl CodedShift {
    pub fn new(generator: Arc<dyn GeneratorSpec>, horizon: usize) -> Result<Self> {
        if !generator.contains_empty() {
            return Err(Error::InvalidSpec("generator set must contain the empty word".into()));
        }
        if horizon == UNBOUNDED && !generator.is_finite() {
            return Err(Error::InvalidSpec("an infinite generator set needs a finite horizon".into()));
        }
        let bound = generator.fragment_bound(if horizon == UNBOUNDED { 0 } else { horizon });
        let patterns = generator.patterns_up_to(bound);
        if patterns.is_empty() {
            return Err(Error::InvalidSpec("generator set has no nonempty word".into()));
        }
        let mut offsets = Vec::with_capacity(patterns.len());
        let mut owner = Vec::new();
        for (p, pat) in patterns.iter().enumerate() {
            offsets.push(owner.len() as u32);
            owner.extend(std::iter::repeat_n(p as u32, pat.len()));
        }
        if owner.len() >= BOUNDARY as usize {
            return Err(Error::InvalidSpec("too many generator positions".into()));
        }
        let alphabet = generator.alphabet();
        let first = alphabet
            .symbols()
            .map(|a| (0..patterns.len() as u32).filter(|&p| patterns[p as usize].0[0] & singleton(a) != 0).collect())
            .collect();
        Ok(Self { generator, horizon, patterns, offsets, owner, first })
    }

    pub fn generator(&self) -> &Arc<dyn GeneratorSpec> {
        &self.generator
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// An automaton for one of the derived collections.
    pub fn collection(&self, which: CodedCollection) -> CodedAutomaton<'_> {
        CodedAutomaton { shift: self, which }
    }

    fn advance_position(&self, p: u32, j: usize, a: Symbol, out: &mut Vec<u32>) {
        let pat = &self.patterns[p as usize];
        if pat.0[j] & singleton(a) != 0 {
            if j + 1 == pat.len() {
                out.push(BOUNDARY);
            } else {
                out.push(self.offsets[p as usize] + j as u32 + 1);
            }
        }
    }

    fn advance(&self, state: &[u32], a: Symbol, restart: bool) -> Option<State> {
        let mut out = Vec::new();
        for &id in state {
            match id {
                ANY | ANY_PROPER => {
                    let from = if id == ANY { 0 } else { 1 };
                    for (p, pat) in self.patterns.iter().enumerate() {
                        for j in from..pat.len() {
                            self.advance_position(p as u32, j, a, &mut out);
                        }
                    }
                }
                BOUNDARY => {
                    if restart {
                        for &p in &self.first[a as usize - 1] {
                            self.advance_position(p, 0, a, &mut out);
                        }
                    }
                }
                _ => {
                    let p = self.owner[id as usize];
                    let j = (id - self.offsets[p as usize]) as usize;
                    self.advance_position(p, j, a, &mut out);
                }
            }
        }
        if out.is_empty() {
            return None;
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }
}

impl WordAutomaton for CodedShift {
    fn alphabet(&self) -> Alphabet {
        self.generator.alphabet()
    }
    fn start(&self) -> State {
        vec![ANY]
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        self.advance(state, symbol, true)
    }
}

impl LanguageOracle for CodedShift {
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn as_coded(&self) -> Option<&CodedShift> {
        Some(self)
    }
    fn describe(&self) -> String {
        self.generator.describe()
    }
}

/// Automaton for a collection derived from a coded shift's generator.
pub struct CodedAutomaton<'a> {
    shift: &'a CodedShift,
    which: CodedCollection,
}

impl WordAutomaton for CodedAutomaton<'_> {
    fn alphabet(&self) -> Alphabet {
        self.shift.alphabet()
    }
    fn start(&self) -> State {
        match self.which {
            CodedCollection::Language => vec![ANY],
            CodedCollection::ProperSuffixes => vec![ANY_PROPER],
            CodedCollection::Concatenations | CodedCollection::ProperPrefixes => vec![BOUNDARY],
        }
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        let restart = matches!(self.which, CodedCollection::Language | CodedCollection::Concatenations);
        if self.which == CodedCollection::ProperPrefixes && state == &vec![BOUNDARY] {
            // The start state: begin a generator without having completed one.
            let mut out = Vec::new();
            for &p in &self.shift.first[symbol as usize - 1] {
                self.shift.advance_position(p, 0, symbol, &mut out);
            }
            out.retain(|&id| id != BOUNDARY);
            if out.is_empty() {
                return None;
            }
            out.sort_unstable();
            out.dedup();
            return Some(out);
        }
        let mut next = self.shift.advance(state, symbol, restart)?;
        if self.which == CodedCollection::ProperPrefixes {
            next.retain(|&id| id != BOUNDARY);
            if next.is_empty() {
                return None;
            }
        }
        Some(next)
    }
    fn accepting(&self, state: &State) -> bool {
        match self.which {
            CodedCollection::Language | CodedCollection::ProperPrefixes => true,
            CodedCollection::Concatenations => state.contains(&BOUNDARY),
            CodedCollection::ProperSuffixes => state == &vec![ANY_PROPER] || state.contains(&BOUNDARY),
        }
    }
}
