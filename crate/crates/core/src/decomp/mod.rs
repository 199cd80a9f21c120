//! Language decompositions `L = Cp G Cs`: deterministic factorization,
//! fattened cores, specification certificates, obstruction-entropy bounds,
//! one-sided constraints and the counting maps for fat gap shifts.

mod ank;
mod constraints;
mod diagram;
mod spec;
mod theoremc;

use serde::Serialize;

use crate::entropy::{collection_growth, EntropyEstimate};
use crate::error::{Error, Result};
use crate::lang::{accepts, check_horizon, enumerate_words, LanguageOracle, State, Union, WordAutomaton};
use crate::word::{Alphabet, Symbol, Word};
use crate::zoo::{CodedCollection, CodedShift};

pub use ank::{ank_table, AnkTable};
pub use constraints::{enumerate_left_constraints, enumerate_right_constraints, Constraint};
pub use diagram::{diagram_decomposition, DiagramDecomposition};
pub use spec::{check_w_specification, SpecCertificate, SpecStatus};
pub use theoremc::{theoremc_multiplicity, Case, CaseTwo, TheoremCReport};

/// A collection of words given by an automaton.
pub type Collection<'a> = Box<dyn WordAutomaton + 'a>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub prefix: Word,
    pub core: Word,
    pub suffix: Word,
}

/// `L = Cp G Cs` with a fixed choice of factorization for every word.
pub trait Decomposition: Send + Sync {
    fn language(&self) -> &dyn LanguageOracle;
    fn prefixes(&self) -> Collection<'_>;
    fn cores(&self) -> Collection<'_>;
    fn suffixes(&self) -> Collection<'_>;
    fn describe(&self) -> String;

    /// Length up to which the three collections are exact.
    fn horizon(&self) -> usize {
        self.language().horizon()
    }

    /// Longest core, then shortest prefix.
    fn factorize(&self, w: &[Symbol]) -> Result<Factorization> {
        factorize_max_core(self, w)
    }
}

/// Membership flags of every prefix `w[..i]` in a collection.
fn prefix_flags(aut: &dyn WordAutomaton, w: &[Symbol]) -> Vec<bool> {
    let mut flags = vec![false; w.len() + 1];
    let mut s = Some(aut.start());
    for i in 0..=w.len() {
        match &s {
            Some(st) => flags[i] = aut.accepting(st),
            None => break,
        }
        if i < w.len() {
            s = s.and_then(|st| aut.step(&st, w[i]));
        }
    }
    flags
}

pub fn factorize_max_core<D: Decomposition + ?Sized>(d: &D, w: &[Symbol]) -> Result<Factorization> {
    check_horizon(d.language(), w.len())?;
    let n = w.len();
    let (cp, g, cs) = (d.prefixes(), d.cores(), d.suffixes());
    let pre = prefix_flags(cp.as_ref(), w);
    let suf: Vec<bool> = (0..=n).map(|j| accepts(cs.as_ref(), &w[j..])).collect();
    let core: Vec<Vec<bool>> = (0..=n).map(|i| prefix_flags(g.as_ref(), &w[i..])).collect();
    for len in (0..=n).rev() {
        for i in 0..=n - len {
            if pre[i] && core[i][len] && suf[i + len] {
                return Ok(Factorization {
                    prefix: Word::from_slice(&w[..i]),
                    core: Word::from_slice(&w[i..i + len]),
                    suffix: Word::from_slice(&w[i + len..]),
                });
            }
        }
    }
    Err(Error::FactorizeIncomplete(Word::from_slice(w)))
}

/// Check that a factorization multiplies back and lands in the collections.
pub fn factorization_is_sound<D: Decomposition + ?Sized>(d: &D, w: &[Symbol], f: &Factorization) -> bool {
    let joined = f.prefix.concat(&f.core).concat(&f.suffix);
    joined.symbols() == w
        && accepts(d.prefixes().as_ref(), &f.prefix)
        && accepts(d.cores().as_ref(), &f.core)
        && accepts(d.suffixes().as_ref(), &f.suffix)
}

/// Decomposition of a coded shift: proper generator suffixes, finite
/// concatenations of generators, proper generator prefixes.
pub struct NaturalDecomposition<'a> {
    shift: &'a CodedShift,
}

pub fn natural_coded_decomposition(lang: &dyn LanguageOracle) -> Result<NaturalDecomposition<'_>> {
    lang.as_coded().map(|shift| NaturalDecomposition { shift }).ok_or(Error::NotCoded)
}

impl Decomposition for NaturalDecomposition<'_> {
    fn language(&self) -> &dyn LanguageOracle {
        self.shift
    }
    fn prefixes(&self) -> Collection<'_> {
        Box::new(self.shift.collection(CodedCollection::ProperSuffixes))
    }
    fn cores(&self) -> Collection<'_> {
        Box::new(self.shift.collection(CodedCollection::Concatenations))
    }
    fn suffixes(&self) -> Collection<'_> {
        Box::new(self.shift.collection(CodedCollection::ProperPrefixes))
    }
    fn describe(&self) -> String {
        format!("natural:{}", self.shift.describe())
    }
}

/// Words of a language filtered by how they meet a marker symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerRule {
    /// Empty, or ending in the marker.
    EndsWith,
    /// Empty, or starting with the marker.
    StartsWith,
    /// Never containing the marker.
    Avoids,
}

pub struct Marked<'a> {
    pub lang: &'a dyn LanguageOracle,
    pub marker: Symbol,
    pub rule: MarkerRule,
}

impl WordAutomaton for Marked<'_> {
    fn alphabet(&self) -> Alphabet {
        self.lang.alphabet()
    }
    fn start(&self) -> State {
        let mut s = vec![0];
        s.extend(self.lang.start());
        s
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        if self.rule == MarkerRule::Avoids && symbol == self.marker {
            return None;
        }
        if self.rule == MarkerRule::StartsWith && state[0] == 0 && symbol != self.marker {
            return None;
        }
        let inner = self.lang.step(&state[1..].to_vec(), symbol)?;
        let tag = match self.rule {
            MarkerRule::EndsWith => symbol as u32,
            _ => 1,
        };
        let mut s = vec![tag];
        s.extend(inner);
        Some(s)
    }
    fn accepting(&self, state: &State) -> bool {
        match self.rule {
            MarkerRule::EndsWith => state[0] == 0 || state[0] == self.marker as u32,
            _ => true,
        }
    }
}

/// Decomposition whose core avoids the symbol `1`: prefixes end in `1`,
/// suffixes start with `1`.
pub struct FillerDecomposition<'a> {
    lang: &'a dyn LanguageOracle,
}

pub fn filler_decomposition(lang: &dyn LanguageOracle) -> FillerDecomposition<'_> {
    FillerDecomposition { lang }
}

impl Decomposition for FillerDecomposition<'_> {
    fn language(&self) -> &dyn LanguageOracle {
        self.lang
    }
    fn prefixes(&self) -> Collection<'_> {
        Box::new(Marked { lang: self.lang, marker: 1, rule: MarkerRule::EndsWith })
    }
    fn cores(&self) -> Collection<'_> {
        Box::new(Marked { lang: self.lang, marker: 1, rule: MarkerRule::Avoids })
    }
    fn suffixes(&self) -> Collection<'_> {
        Box::new(Marked { lang: self.lang, marker: 1, rule: MarkerRule::StartsWith })
    }
    fn describe(&self) -> String {
        format!("filler:{}", self.lang.describe())
    }
}

/// Decomposition assembled from explicit collections.
pub struct CustomDecomposition<'a> {
    pub lang: &'a dyn LanguageOracle,
    pub prefixes: &'a (dyn WordAutomaton + 'a),
    pub cores: &'a (dyn WordAutomaton + 'a),
    pub suffixes: &'a (dyn WordAutomaton + 'a),
    pub label: String,
}

struct Borrowed<'a>(&'a (dyn WordAutomaton + 'a));

impl WordAutomaton for Borrowed<'_> {
    fn alphabet(&self) -> Alphabet {
        self.0.alphabet()
    }
    fn start(&self) -> State {
        self.0.start()
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        self.0.step(state, symbol)
    }
    fn accepting(&self, state: &State) -> bool {
        self.0.accepting(state)
    }
}

impl Decomposition for CustomDecomposition<'_> {
    fn language(&self) -> &dyn LanguageOracle {
        self.lang
    }
    fn prefixes(&self) -> Collection<'_> {
        Box::new(Borrowed(self.prefixes))
    }
    fn cores(&self) -> Collection<'_> {
        Box::new(Borrowed(self.cores))
    }
    fn suffixes(&self) -> Collection<'_> {
        Box::new(Borrowed(self.suffixes))
    }
    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Whether `w` factors as `u v x` with `|u|, |x| <= m` and `u`, `v`, `x`
/// in the prefix, core and suffix collections.
pub fn in_fattened_core<D: Decomposition + ?Sized>(d: &D, m: usize, w: &[Symbol]) -> bool {
    let n = w.len();
    let (cp, g, cs) = (d.prefixes(), d.cores(), d.suffixes());
    let pre = prefix_flags(cp.as_ref(), &w[..m.min(n)]);
    for (i, _) in pre.iter().enumerate().filter(|(_, &ok)| ok) {
        let mut s = g.start();
        let mut ok_cores = vec![g.accepting(&s)];
        for &a in &w[i..] {
            match g.step(&s, a) {
                Some(t) => {
                    ok_cores.push(g.accepting(&t));
                    s = t;
                }
                None => break,
            }
        }
        for (len, &core_ok) in ok_cores.iter().enumerate() {
            let j = i + len;
            if core_ok && n - j <= m && accepts(cs.as_ref(), &w[j..]) {
                return true;
            }
        }
    }
    false
}

/// Length-`n` words of the fattened core of level `m`, in lexicographic order.
pub fn fattened_core<D: Decomposition + ?Sized>(d: &D, m: usize, n: usize) -> Result<Vec<Word>> {
    check_horizon(d.language(), n)?;
    if n > d.horizon() {
        return Err(Error::HorizonExceeded { len: n, horizon: d.horizon() });
    }
    Ok(enumerate_words(d.language(), n)?.into_iter().filter(|w| in_fattened_core(d, m, w)).collect())
}

/// Growth of `Cp ∪ Cs`: an upper-bound witness for the obstruction entropy
/// to specification, valid when the fattened cores have specification.
pub fn obstruction_upper_bound<D: Decomposition + ?Sized>(d: &D, n_max: usize) -> Result<EntropyEstimate> {
    if n_max > d.horizon() {
        return Err(Error::HorizonExceeded { len: n_max, horizon: d.horizon() });
    }
    let (cp, cs) = (d.prefixes(), d.suffixes());
    let union = Union { left: cp.as_ref(), right: cs.as_ref() };
    let mut est = collection_growth(&union, n_max);
    est.notes.push("upper bound contingent on specification of every fattened core".into());
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{accepted_profile, enumerate_accepted};
    use crate::zoo::{build_block_shift, build_fat_sgap, build_sft, build_sgap, FullShift, GapSet};
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn brute_fattened<D: Decomposition>(d: &D, m: usize, n: usize) -> Vec<Word> {
        let (cp, g, cs) = (d.prefixes(), d.cores(), d.suffixes());
        enumerate_words(d.language(), n)
            .unwrap()
            .into_iter()
            .filter(|w| {
                (0..=m.min(n)).any(|i| {
                    (0..=m.min(n - i)).any(|k| {
                        accepts(cp.as_ref(), &w[..i])
                            && accepts(g.as_ref(), &w[i..n - k])
                            && accepts(cs.as_ref(), &w[n - k..])
                    })
                })
            })
            .collect()
    }

    #[test]
    fn sgap_collections_have_one_word_per_length() {
        for spec in ["all", "powers:2", "arith:1:3"] {
            let lang = build_sgap(spec.parse().unwrap(), 20).unwrap();
            let d = natural_coded_decomposition(&lang).unwrap();
            let p = accepted_profile(d.prefixes().as_ref(), 20);
            let s = accepted_profile(d.suffixes().as_ref(), 20);
            assert!(p.iter().chain(&s).all(|c| *c == BigUint::from(1u32)), "{spec}");
        }
    }

    #[test]
    fn natural_factorizations_are_sound() {
        let langs: Vec<Box<dyn LanguageOracle>> = vec![
            Box::new(build_sgap("powers:2".parse().unwrap(), 12).unwrap()),
            Box::new(build_fat_sgap("powers:2".parse().unwrap(), 3, 8).unwrap()),
            Box::new(build_block_shift(GapSet::AllNonneg, 10).unwrap()),
            Box::new(build_sgap("list:1".parse().unwrap(), 10).unwrap()),
        ];
        for lang in &langs {
            let d = natural_coded_decomposition(lang.as_ref()).unwrap();
            for n in 0..=lang.horizon().min(8) {
                for w in enumerate_words(lang.as_ref(), n).unwrap() {
                    let f = d.factorize(&w).unwrap();
                    assert!(factorization_is_sound(&d, &w, &f), "{w}");
                }
            }
        }
    }

    #[test]
    fn not_coded_is_reported() {
        let full = FullShift::new(2).unwrap();
        assert!(matches!(natural_coded_decomposition(&full), Err(Error::NotCoded)));
    }

    #[test]
    fn filler_factorization_of_w1w() {
        let lang = build_fat_sgap("powers:2".parse().unwrap(), 3, 9).unwrap();
        let d = filler_decomposition(&lang);
        let w = Word::from_digits("2323").unwrap();
        let x = w.concat(&[1]).concat(&w);
        let f = d.factorize(&x).unwrap();
        assert_eq!(f.prefix, Word::empty());
        assert_eq!(f.core, w);
        assert_eq!(f.suffix, Word::from_digits("12323").unwrap());
    }

    #[test]
    fn fattened_core_filtration() {
        let lang = build_sgap("list:1".parse().unwrap(), 10).unwrap();
        let d = natural_coded_decomposition(&lang).unwrap();
        let g1 = fattened_core(&d, 1, 3).unwrap();
        assert_eq!(g1, brute_fattened(&d, 1, 3));
        let texts: Vec<String> = g1.iter().map(|w| w.to_string()).collect();
        assert_eq!(texts, ["1 2 1", "2 1 2"]);
        for n in 0..=6 {
            let all = enumerate_words(&lang, n).unwrap();
            assert_eq!(fattened_core(&d, n, n).unwrap(), all);
            let g0 = fattened_core(&d, 0, n).unwrap();
            let cores = enumerate_accepted(d.cores().as_ref(), n);
            assert_eq!(g0, cores);
        }
    }

    #[test]
    fn obstruction_bounds() {
        let lang = build_sgap("powers:2".parse().unwrap(), 20).unwrap();
        let d = natural_coded_decomposition(&lang).unwrap();
        let e = obstruction_upper_bound(&d, 20).unwrap();
        assert!((e.value - 2f64.ln() / 20.0).abs() < 1e-12);
        let block = build_block_shift(GapSet::AllNonneg, 16).unwrap();
        let k = natural_coded_decomposition(&block).unwrap();
        assert!(obstruction_upper_bound(&k, 16).unwrap().value < 0.25);
    }

    #[test]
    fn custom_sft_decomposition() {
        let sft = build_sft(2, &[Word::from_digits("11").unwrap()], 12).unwrap();
        let empty = crate::lang::Predicate { alphabet: sft.alphabet(), accept: |w: &[Symbol]| w.is_empty() };
        let ends2 = crate::lang::Predicate { alphabet: sft.alphabet(), accept: |w: &[Symbol]| w.last() != Some(&1) };
        let tail = crate::lang::Predicate { alphabet: sft.alphabet(), accept: |w: &[Symbol]| w.is_empty() || w == [1] };
        let d = CustomDecomposition {
            lang: &sft,
            prefixes: &empty,
            cores: &ends2,
            suffixes: &tail,
            label: "ends-in-2".into(),
        };
        for n in 0..=8 {
            for w in enumerate_words(&sft, n).unwrap() {
                let f = d.factorize(&w).unwrap();
                assert!(factorization_is_sound(&d, &w, &f));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn filtration_is_monotone(which in 0usize..3, n in 1usize..7) {
            let lang: Box<dyn LanguageOracle> = match which {
                0 => Box::new(build_sgap("powers:2".parse().unwrap(), 10).unwrap()),
                1 => Box::new(build_fat_sgap("powers:2".parse().unwrap(), 3, 8).unwrap()),
                _ => Box::new(build_block_shift(GapSet::AllNonneg, 10).unwrap()),
            };
            let d = natural_coded_decomposition(lang.as_ref()).unwrap();
            let mut prev = 0;
            for m in 0..=n {
                let g = fattened_core(&d, m, n).unwrap();
                prop_assert_eq!(&g, &brute_fattened(&d, m, n));
                prop_assert!(g.len() >= prev);
                prev = g.len();
            }
            prop_assert_eq!(prev, enumerate_words(lang.as_ref(), n).unwrap().len());
        }
    }
}
