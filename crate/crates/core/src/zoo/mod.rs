//! Constructors for the shift families: full shifts, shifts of finite type,
//! coded shifts, S-gap and fat S-gap shifts, and the `{1^i 2^i}` family.
//!
//! Coded shifts are two-sided: a word belongs to the language when it is a
//! subword of a finite concatenation of generators. Boundary fragments are
//! certified by loading every generator up to
//! [`GeneratorSpec::fragment_bound`] of the horizon, so straddling parses
//! of long generators are represented by shorter ones with the same
//! fragments.

mod coded;
mod gapset;
mod sft;
mod spec;

use std::sync::Arc;

pub use coded::{
    enumerate_generators, range_set, singleton, BlockGenerator, CodedAutomaton, CodedCollection, CodedShift,
    GapGenerator, GeneratorSpec, Pattern, PatternListGenerator, SymbolSet,
};
pub use gapset::GapSet;
pub use sft::{FullShift, Sft};
pub use spec::ShiftSpec;

use crate::error::{Error, Result};
use crate::word::Word;

/// Default exactness horizon for an alphabet of `n` symbols.
pub fn default_horizon(n: usize) -> usize {
    match n {
        0..=2 => 24,
        3 => 16,
        _ => 12,
    }
}

pub fn build_sft(n: usize, forbidden: &[Word], horizon: usize) -> Result<Sft> {
    Sft::new(n, forbidden, horizon)
}

pub fn build_coded(generator: Arc<dyn GeneratorSpec>, horizon: usize) -> Result<CodedShift> {
    CodedShift::new(generator, horizon)
}

/// Coded shift generated by `{2^s 1 : s in S}`.
pub fn build_sgap(gaps: GapSet, horizon: usize) -> Result<CodedShift> {
    build_fat_sgap(gaps, 2, horizon)
}

/// Coded shift generated by `{w 1 : w in {2..N}^s, s in S}`.
pub fn build_fat_sgap(gaps: GapSet, n: usize, horizon: usize) -> Result<CodedShift> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("fat gap shifts need N >= 2, got {n}")));
    }
    crate::word::Alphabet::new(n)?;
    CodedShift::new(Arc::new(GapGenerator { gaps, n }), horizon)
}

/// Coded shift generated by `{1^i 2^i : i in I}`.
pub fn build_block_shift(index: GapSet, horizon: usize) -> Result<CodedShift> {
    if index.next_at_least(1).is_none() {
        return Err(Error::InvalidSpec("index set has no positive member".into()));
    }
    CodedShift::new(Arc::new(BlockGenerator { index }), horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{count_words, enumerate_words, is_word, LanguageOracle};
    use proptest::prelude::*;

    #[test]
    fn fat_with_two_symbols_is_sgap() {
        for spec in ["powers:2", "list:0,2", "arith:1:2", "all"] {
            let gaps: GapSet = spec.parse().unwrap();
            let a = build_sgap(gaps.clone(), 14).unwrap();
            let b = build_fat_sgap(gaps, 2, 14).unwrap();
            for n in 0..=14 {
                assert_eq!(enumerate_words(&a, n).unwrap(), enumerate_words(&b, n).unwrap());
            }
        }
    }

    #[test]
    fn all_gaps_give_full_shift() {
        for n_sym in 2..=4 {
            let h = 8;
            let s = build_fat_sgap(GapSet::AllNonneg, n_sym, h).unwrap();
            for n in 0..=h {
                assert_eq!(count_words(&s, n).unwrap(), num_bigint::BigUint::from(n_sym).pow(n as u32));
            }
        }
    }

    #[test]
    fn fat_gap_contains_filler_full_shift() {
        let s = build_fat_sgap("powers:2".parse().unwrap(), 3, 16).unwrap();
        for n in 0..=16 {
            assert!(count_words(&s, n).unwrap() >= num_bigint::BigUint::from(2u32).pow(n as u32));
        }
    }

    #[test]
    fn constructor_errors() {
        assert!(build_fat_sgap(GapSet::AllNonneg, 1, 8).is_err());
        assert!(build_block_shift(GapSet::List(vec![0]), 8).is_err());
    }

    fn oracles() -> Vec<Box<dyn LanguageOracle>> {
        vec![
            Box::new(build_sgap("list:0,2".parse().unwrap(), 12).unwrap()),
            Box::new(build_sgap("powers:2".parse().unwrap(), 12).unwrap()),
            Box::new(build_fat_sgap("powers:2".parse().unwrap(), 3, 9).unwrap()),
            Box::new(build_block_shift(GapSet::AllNonneg, 12).unwrap()),
            Box::new(build_sft(2, &[Word::from_digits("11").unwrap()], 12).unwrap()),
            Box::new(build_sft(3, &[Word::from_digits("12").unwrap(), Word::from_digits("333").unwrap()], 9).unwrap()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn factorial_and_extendable(which in 0usize..6, n in 0usize..9) {
            let lang = &oracles()[which];
            for w in enumerate_words(lang.as_ref(), n).unwrap() {
                for i in 0..=w.len() {
                    for j in i..=w.len() {
                        prop_assert!(is_word(lang.as_ref(), &w[i..j]).unwrap());
                    }
                }
                if n < lang.horizon() {
                    let ext = lang.alphabet().symbols().any(|a| is_word(lang.as_ref(), &w.concat(&[a])).unwrap());
                    prop_assert!(ext, "{} has no extension", w);
                }
            }
        }

        #[test]
        fn subadditive_counts(which in 0usize..6, m in 0usize..5, n in 0usize..5) {
            let lang = &oracles()[which];
            let c = |k| count_words(lang.as_ref(), k).unwrap();
            prop_assert!(c(m + n) <= c(m) * c(n));
        }

        #[test]
        fn count_matches_enumeration(which in 0usize..6, n in 0usize..9) {
            let lang = &oracles()[which];
            let listed = enumerate_words(lang.as_ref(), n).unwrap();
            prop_assert_eq!(num_bigint::BigUint::from(listed.len()), count_words(lang.as_ref(), n).unwrap());
            let mut sorted = listed.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted, listed);
        }
    }
}
