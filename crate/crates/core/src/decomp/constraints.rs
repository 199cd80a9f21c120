use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::{enumerate_words, is_word, run, LanguageOracle, State};
use crate::word::Word;

/// A word together with an extension that separates it from the word with
/// one end symbol dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub word: Word,
    pub witness: Word,
}

fn check(lang: &dyn LanguageOracle, n: usize, ext: usize) -> Result<()> {
    if n + ext > lang.horizon() {
        return Err(Error::HorizonExceeded { len: n + ext, horizon: lang.horizon() });
    }
    Ok(())
}

/// Length-`n` words `w` with some `v`, `|v| <= ext`, such that
/// `w[1..] v` is legal but `w v` is not. The witness is the shortlex-least.
pub fn enumerate_left_constraints(lang: &dyn LanguageOracle, n: usize, ext: usize) -> Result<Vec<Constraint>> {
    check(lang, n, ext)?;
    let alphabet = lang.alphabet();
    let mut out = Vec::new();
    for w in enumerate_words(lang, n)? {
        if w.is_empty() {
            continue;
        }
        let tail = run(lang, &w[1..]).expect("subwords of legal words are legal");
        let full = run(lang, &w);
        // Breadth-first over extensions, tracking both runs.
        let mut layer: Vec<(Word, State, Option<State>)> = vec![(Word::empty(), tail, full)];
        let mut seen: BTreeSet<(State, Option<State>)> = BTreeSet::new();
        let mut witness = None;
        'search: for _ in 0..ext {
            let mut next = Vec::new();
            for (v, t, f) in &layer {
                for a in alphabet.symbols() {
                    let Some(t2) = lang.step(t, a) else { continue };
                    let f2 = f.as_ref().and_then(|s| lang.step(s, a));
                    let v2 = v.concat(&[a]);
                    if f2.is_none() {
                        witness = Some(v2);
                        break 'search;
                    }
                    if seen.insert((t2.clone(), f2.clone())) {
                        next.push((v2, t2, f2));
                    }
                }
            }
            layer = next;
        }
        if let Some(witness) = witness {
            out.push(Constraint { word: w, witness });
        }
    }
    Ok(out)
}

/// Length-`n` words `w` with some `v`, `|v| <= ext`, such that
/// `v w[..n-1]` is legal but `v w` is not. The witness is the shortlex-least.
pub fn enumerate_right_constraints(lang: &dyn LanguageOracle, n: usize, ext: usize) -> Result<Vec<Constraint>> {
    check(lang, n, ext)?;
    let mut candidates = Vec::new();
    for len in 1..=ext {
        candidates.extend(enumerate_words(lang, len)?);
    }
    let mut out = Vec::new();
    for w in enumerate_words(lang, n)? {
        if w.is_empty() {
            continue;
        }
        let head = &w[..n - 1];
        for v in &candidates {
            if run(lang, &v.concat(head)).is_some() && !is_word(lang, &v.concat(&w))? {
                out.push(Constraint { word: w.clone(), witness: v.clone() });
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{build_sft, build_sgap, FullShift};

    fn brute_left(lang: &dyn LanguageOracle, n: usize, ext: usize) -> Vec<Word> {
        let mut vs = Vec::new();
        for len in 1..=ext {
            vs.extend(crate::lang::enumerate_accepted(
                &crate::zoo::FullShift::new(lang.alphabet().size()).unwrap(),
                len,
            ));
        }
        enumerate_words(lang, n)
            .unwrap()
            .into_iter()
            .filter(|w| {
                vs.iter().any(|v| {
                    is_word(lang, &Word::from_slice(&w[1..]).concat(v)).unwrap()
                        && !is_word(lang, &w.concat(v)).unwrap()
                })
            })
            .collect()
    }

    #[test]
    fn full_shift_has_none() {
        let full = FullShift::new(2).unwrap();
        for n in 1..=4 {
            assert!(enumerate_left_constraints(&full, n, 4).unwrap().is_empty());
            assert!(enumerate_right_constraints(&full, n, 4).unwrap().is_empty());
        }
    }

    #[test]
    fn golden_mean_constraints() {
        let sft = build_sft(2, &[Word::from_digits("11").unwrap()], 20).unwrap();
        let one = enumerate_left_constraints(&sft, 1, 3).unwrap();
        assert_eq!(
            one,
            vec![Constraint { word: Word::from_digits("1").unwrap(), witness: Word::from_digits("1").unwrap() }]
        );
        for n in 2..=5 {
            assert!(enumerate_left_constraints(&sft, n, 4).unwrap().is_empty());
            assert!(enumerate_right_constraints(&sft, n, 4).unwrap().is_empty());
        }
    }

    #[test]
    fn sgap_constraints_match_brute_force() {
        let lang = build_sgap("list:0,2".parse().unwrap(), 12).unwrap();
        for n in 1..=4 {
            let left = enumerate_left_constraints(&lang, n, 6).unwrap();
            let words: Vec<Word> = left.iter().map(|c| c.word.clone()).collect();
            assert_eq!(words, brute_left(&lang, n, 6));
            let text: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            match n {
                2 => assert_eq!(text, ["1 2", "2 2"]),
                3 | 4 => assert!(text.is_empty()),
                _ => {}
            }
            for c in &left {
                assert!(is_word(&lang, &Word::from_slice(&c.word[1..]).concat(&c.witness)).unwrap());
                assert!(!is_word(&lang, &c.word.concat(&c.witness)).unwrap());
            }
            for c in enumerate_right_constraints(&lang, n, 6).unwrap() {
                assert!(is_word(&lang, &c.witness.concat(&c.word[..n - 1])).unwrap());
                assert!(!is_word(&lang, &c.witness.concat(&c.word)).unwrap());
            }
        }
    }
}
