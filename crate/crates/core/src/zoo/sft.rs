use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lang::{LanguageOracle, State, WordAutomaton, UNBOUNDED};
use crate::word::{Alphabet, Symbol, Word};

/// The full shift on `N` symbols.
#[derive(Debug, Clone)]
pub struct FullShift {
    alphabet: Alphabet,
}

impl FullShift {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { alphabet: Alphabet::new(n)? })
    }
}

impl WordAutomaton for FullShift {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn start(&self) -> State {
        Vec::new()
    }
    fn step(&self, _state: &State, _symbol: Symbol) -> Option<State> {
        Some(Vec::new())
    }
}

impl LanguageOracle for FullShift {
    fn horizon(&self) -> usize {
        UNBOUNDED
    }
    fn describe(&self) -> String {
        format!("full:{}", self.alphabet.size())
    }
}

const MAX_BLOCKS: usize = 1 << 22;

/// Shift of finite type given by forbidden words.
///
/// The language is that of the subshift, so blocks that avoid every
/// forbidden word but cannot be extended to a bi-infinite point are
/// rejected as well. The state is the word read so far while it is shorter
/// than the memory, then its last `memory` symbols.
#[derive(Debug, Clone)]
pub struct Sft {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
    memory: usize,
    blocks: HashSet<Vec<Symbol>>,
    short: HashSet<Vec<Symbol>>,
    horizon: usize,
}

impl Sft {
    pub fn new(n: usize, forbidden: &[Word], horizon: usize) -> Result<Self> {
        let alphabet = Alphabet::new(n)?;
        if forbidden.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidSpec("forbidden words must be nonempty".into()));
        }
        if let Some(w) = forbidden.iter().find(|w| !w.is_over(alphabet)) {
            return Err(Error::InvalidSpec(format!("forbidden word {w} uses symbols outside 1..={n}")));
        }
        let forbidden = prune(forbidden);
        let max_len = forbidden.iter().map(|w| w.len()).max().unwrap_or(1);
        if horizon < max_len {
            return Err(Error::InvalidSpec(format!("horizon {horizon} is shorter than the longest forbidden word")));
        }
        let memory = max_len - 1;
        if (n as f64).powi(memory as i32) > MAX_BLOCKS as f64 {
            return Err(Error::InvalidSpec("forbidden words too long for the block presentation".into()));
        }
        let mut sft = Self { alphabet, forbidden, memory, blocks: HashSet::new(), short: HashSet::new(), horizon };
        sft.trim();
        Ok(sft)
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    fn clean(&self, w: &[Symbol]) -> bool {
        !self.forbidden.iter().any(|f| w.windows(f.len()).any(|x| x == &f[..]))
    }

    /// Keep only the memory-blocks lying on bi-infinite paths.
    fn trim(&mut self) {
        let m = self.memory;
        let syms: Vec<Symbol> = self.alphabet.symbols().collect();
        let mut blocks: Vec<Vec<Symbol>> = vec![Vec::new()];
        for _ in 0..m {
            blocks = blocks
                .into_iter()
                .flat_map(|b| {
                    syms.iter().map(move |&a| {
                        let mut c = b.clone();
                        c.push(a);
                        c
                    })
                })
                .filter(|b| self.clean(b))
                .collect();
        }
        let mut alive: HashSet<Vec<Symbol>> = blocks.into_iter().collect();
        loop {
            let before = alive.len();
            let snapshot = alive.clone();
            alive.retain(|b| {
                let has_out = syms.iter().any(|&a| {
                    let mut e = b.clone();
                    e.push(a);
                    self.clean(&e) && snapshot.contains(&e[1..])
                });
                let has_in = syms.iter().any(|&a| {
                    let mut e = vec![a];
                    e.extend_from_slice(b);
                    self.clean(&e) && snapshot.contains(&e[..m])
                });
                has_out && has_in
            });
            if alive.len() == before {
                break;
            }
        }
        let mut short = HashSet::new();
        for b in &alive {
            for i in 0..=b.len() {
                for j in i..=b.len() {
                    if j - i < m {
                        short.insert(b[i..j].to_vec());
                    }
                }
            }
        }
        self.blocks = alive;
        self.short = short;
    }
}

fn prune(forbidden: &[Word]) -> Vec<Word> {
    let mut words: Vec<Word> = forbidden.to_vec();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    words.dedup();
    let mut kept: Vec<Word> = Vec::new();
    for w in words {
        if !kept.iter().any(|k| w.windows(k.len()).any(|x| x == &k[..])) {
            kept.push(w);
        }
    }
    kept
}

impl WordAutomaton for Sft {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn start(&self) -> State {
        Vec::new()
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        let m = self.memory;
        let mut w: Vec<Symbol> = state.iter().map(|&x| x as Symbol).collect();
        w.push(symbol);
        let ok = if w.len() < m {
            self.short.contains(&w)
        } else if w.len() == m {
            self.blocks.contains(&w)
        } else {
            self.clean(&w) && self.blocks.contains(&w[1..])
        };
        if !ok {
            return None;
        }
        if w.len() > m {
            w.remove(0);
        }
        Some(w.into_iter().map(u32::from).collect())
    }
}

impl LanguageOracle for Sft {
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn describe(&self) -> String {
        let f: Vec<String> =
            self.forbidden.iter().map(|w| w.iter().map(|s| s.to_string()).collect::<String>()).collect();
        format!("sft:{}:forbid={}", self.alphabet.size(), f.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{count_words, enumerate_words, is_word};
    use num_bigint::BigUint;

    fn digits(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| Word::from_digits(s).unwrap()).collect()
    }

    fn brute_count(n: usize, alphabet: usize, forbidden: &[Word]) -> usize {
        let total = alphabet.pow(n as u32);
        (0..total)
            .filter(|&code| {
                let mut idx = code;
                let w: Vec<Symbol> = (0..n)
                    .map(|_| {
                        let s = (idx % alphabet) as Symbol + 1;
                        idx /= alphabet;
                        s
                    })
                    .collect();
                !forbidden.iter().any(|f| w.windows(f.len()).any(|x| x == &f[..]))
            })
            .count()
    }

    #[test]
    fn golden_mean() {
        let f = digits(&["11"]);
        let sft = Sft::new(2, &f, UNBOUNDED).unwrap();
        assert!(is_word(&sft, &[2, 1, 2]).unwrap());
        assert!(!is_word(&sft, &[2, 1, 1]).unwrap());
        for n in 0..12 {
            assert_eq!(count_words(&sft, n).unwrap(), BigUint::from(brute_count(n, 2, &f)));
        }
    }

    #[test]
    fn constant_words_only() {
        let sft = Sft::new(2, &digits(&["12", "21"]), UNBOUNDED).unwrap();
        for n in 1..=5 {
            assert_eq!(count_words(&sft, n).unwrap(), BigUint::from(2u32));
        }
    }

    #[test]
    fn pruning_keeps_minimal_words() {
        let sft = Sft::new(2, &digits(&["11", "211", "11", "12"]), UNBOUNDED).unwrap();
        assert_eq!(sft.forbidden(), &digits(&["11", "12"])[..]);
    }

    #[test]
    fn dead_ends_are_trimmed() {
        // 1 can never be followed: the subshift is {2^inf}.
        let sft = Sft::new(2, &digits(&["11", "12"]), UNBOUNDED).unwrap();
        assert!(!is_word(&sft, &[1]).unwrap());
        assert_eq!(enumerate_words(&sft, 3).unwrap(), digits(&["222"]));
    }

    #[test]
    fn single_symbol_forbidden() {
        let sft = Sft::new(3, &digits(&["2"]), UNBOUNDED).unwrap();
        assert_eq!(count_words(&sft, 4).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Sft::new(2, &[Word::empty()], 10).is_err());
        assert!(Sft::new(2, &digits(&["13"]), 10).is_err());
        assert!(Sft::new(2, &digits(&["111"]), 2).is_err());
    }
}
