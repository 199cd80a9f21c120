use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::{enumerate_words, is_word, LanguageOracle, UNBOUNDED};
use crate::word::Word;
use crate::zoo::{CodedShift, PatternListGenerator};

/// Coded shift built by alternating the chosen words with connectors.
#[derive(Debug, Clone)]
pub struct GluedShift {
    pub shift: CodedShift,
    pub generators: Vec<Word>,
    pub summary: GlueSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlueSummary {
    pub words: usize,
    pub t: usize,
    pub generators: usize,
    /// Per word, the number of connectors that work before every word.
    pub connectors: Vec<usize>,
}

/// The coded shift generated by `{v w}` where `v` is one of `words` and `w`,
/// of length at most `t`, satisfies `v w v'` legal for every `v'` in
/// `words`.
pub fn glue_subshift(lang: &dyn LanguageOracle, words: &[Word], t: usize) -> Result<GluedShift> {
    if words.is_empty() || words.iter().any(|w| w.is_empty()) {
        return Err(Error::InvalidSpec("gluing needs nonempty words".into()));
    }
    let longest = words.iter().map(|w| w.len()).max().expect("nonempty");
    let need = 2 * longest + t;
    if need > lang.horizon() {
        return Err(Error::HorizonExceeded { len: need, horizon: lang.horizon() });
    }
    let mut candidates = Vec::new();
    for len in 0..=t {
        candidates.extend(enumerate_words(lang, len)?);
    }
    let mut generators = vec![Word::empty()];
    let mut counts = Vec::with_capacity(words.len());
    for v in words {
        let mut found = 0;
        for w in &candidates {
            let vw = v.concat(w);
            let mut ok = true;
            for u in words {
                if !is_word(lang, &vw.concat(u))? {
                    ok = false;
                    break;
                }
            }
            if ok {
                generators.push(vw);
                found += 1;
            }
        }
        if found == 0 {
            return Err(blocking_pair(lang, words, v, &candidates, t)?);
        }
        counts.push(found);
    }
    generators.sort();
    generators.dedup();
    let alphabet = lang.alphabet();
    let gen = PatternListGenerator::from_words(alphabet, &generators)?;
    let shift = CodedShift::new(Arc::new(gen), UNBOUNDED)?;
    let summary = GlueSummary { words: words.len(), t, generators: generators.len() - 1, connectors: counts };
    Ok(GluedShift { shift, generators: generators.into_iter().filter(|g| !g.is_empty()).collect(), summary })
}

/// A right partner that no connector reaches, or failing that the partner
/// ruling out the shortest connector.
fn blocking_pair(lang: &dyn LanguageOracle, words: &[Word], v: &Word, candidates: &[Word], t: usize) -> Result<Error> {
    for u in words {
        let mut any = false;
        for w in candidates {
            if is_word(lang, &v.concat(w).concat(u))? {
                any = true;
                break;
            }
        }
        if !any {
            return Ok(Error::NoConnector { left: v.clone(), right: u.clone(), t });
        }
    }
    let w = candidates.first().cloned().unwrap_or_else(Word::empty);
    for u in words {
        if !is_word(lang, &v.concat(&w).concat(u))? {
            return Ok(Error::NoConnector { left: v.clone(), right: u.clone(), t });
        }
    }
    unreachable!("some partner blocks every connector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::automaton_entropy;
    use crate::lang::enumerate_accepted;
    use crate::zoo::{build_sft, FullShift};

    #[test]
    fn single_symbol_without_gaps() {
        let full = FullShift::new(2).unwrap();
        let g = glue_subshift(&full, &[Word::from_digits("1").unwrap()], 0).unwrap();
        assert_eq!(g.generators, vec![Word::from_digits("1").unwrap()]);
        for n in 1..=6 {
            let words = enumerate_accepted(&g.shift, n);
            assert_eq!(words, vec![Word::new(vec![1; n])]);
        }
        assert_eq!(automaton_entropy(&g.shift, 1000).unwrap().value, 0.0);
    }

    #[test]
    fn entropy_shrinks_with_word_length() {
        let full = FullShift::new(2).unwrap();
        let mut last = f64::INFINITY;
        for k in [4usize, 8, 16] {
            let v = Word::new((0..k).map(|i| 1 + (i % 3 == 0) as u8).collect());
            let g = glue_subshift(&full, &[v], 1).unwrap();
            let h = automaton_entropy(&g.shift, 100_000).unwrap().value;
            assert!(h < last && h <= (2.0f64 * 2.0).ln() / k as f64 + 1e-9, "k={k} h={h}");
            last = h;
        }
    }

    #[test]
    fn glued_words_stay_in_the_ambient() {
        let sft = build_sft(2, &[Word::from_digits("11").unwrap()], 24).unwrap();
        let words: Vec<Word> = ["1 2 2", "2 1 2"].iter().map(|s| s.parse().unwrap()).collect();
        let g = glue_subshift(&sft, &words, 2).unwrap();
        for n in 1..=14 {
            for w in enumerate_accepted(&g.shift, n) {
                assert!(is_word(&sft, &w).unwrap(), "{w}");
            }
        }
        let blocked = glue_subshift(&sft, &["2 1".parse().unwrap(), "1 2".parse().unwrap()], 0).unwrap_err();
        assert_eq!(blocked, Error::NoConnector { left: "2 1".parse().unwrap(), right: "1 2".parse().unwrap(), t: 0 });
    }
}
