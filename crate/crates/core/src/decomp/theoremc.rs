use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::{accepts, State, WordAutomaton};
use crate::word::{Symbol, Word};

use super::{check_w_specification, Decomposition, SpecStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// Every core word avoids the symbol 1.
    One,
    /// Some core word contains 1.
    Two,
}

/// A core word with at least two 1s, none adjacent, and a gap size for the
/// core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseTwo {
    pub u: Word,
    pub t: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCReport {
    pub case: Case,
    pub ell: u32,
    /// Length of the words `w` fed to the map.
    pub word_length: usize,
    pub words: usize,
    pub case_two: Option<CaseTwo>,
    pub a_ell: Option<usize>,
    /// `2 a / 3 > 2^(ell - 1)`.
    pub a_ell_large: Option<bool>,
    pub distinct_images: usize,
    pub max_multiplicity: usize,
    #[serde(serialize_with = "as_string")]
    pub bound: BigUint,
    pub within_bound: bool,
    pub injective: bool,
    /// Factor lengths outside the one-symbol estimates.
    pub estimate_violations: usize,
    /// Words with the 1 inside the core.
    pub core_hits: usize,
    /// Of those, prefixes outside `[a - 2^(ell-1), a]`.
    pub core_hit_violations: usize,
    pub window: (usize, usize),
    pub window_violations: usize,
    pub image_lengths: (usize, usize),
    pub witness: Word,
    pub notes: Vec<String>,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl TheoremCReport {
    pub fn passed(&self) -> bool {
        self.within_bound
            && self.estimate_violations == 0
            && self.core_hit_violations == 0
            && self.window_violations == 0
            && (self.case == Case::Two || self.injective)
    }
}

/// Shortlex-least accepted word whose 1s number at least `min_ones`, are
/// pairwise separated, and (for `min_ones == 1`) exist at all. Lengths up
/// to `max_len`.
fn find_core_word(core: &dyn WordAutomaton, min_ones: usize, max_len: usize) -> Option<Word> {
    // State: automaton state, 1s seen (capped), last symbol was 1.
    let mut seen: HashSet<(State, usize, bool)> = HashSet::new();
    let mut layer = vec![(Word::empty(), core.start(), 0usize, false)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, s, ones, last1) in &layer {
            for a in core.alphabet().symbols() {
                if min_ones > 1 && a == 1 && *last1 {
                    continue;
                }
                let Some(t) = core.step(s, a) else { continue };
                let ones2 = (*ones + usize::from(a == 1)).min(min_ones);
                let w2 = w.concat(&[a]);
                if ones2 >= min_ones && core.accepting(&t) {
                    return Some(w2);
                }
                if seen.insert((t.clone(), ones2, a == 1)) {
                    next.push((w2, t, ones2, a == 1));
                }
            }
        }
        layer = next;
    }
    None
}

fn words_over_fillers(n_symbols: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| (2..=n_symbols as Symbol).map(move |a| w.concat(&[a]))).collect();
    }
    out
}

/// Apply the counting map `w -> s(w1w)` if the 1 lands in the suffix, else
/// `p(w1w)`, to every `w` over `{2..N}` of the case's length, and audit
/// fiber sizes and factor lengths.
///
/// The case is detected from the core unless `case` is given; for the second
/// case `u` and `t` are searched for unless supplied.
pub fn theoremc_multiplicity<D: Decomposition + ?Sized>(
    d: &D,
    n_symbols: usize,
    ell: u32,
    case: Option<Case>,
    case_two: Option<CaseTwo>,
) -> Result<TheoremCReport> {
    if n_symbols < 3 || ell < 1 {
        return Err(Error::InvalidSpec("need N >= 3 and ell >= 1".into()));
    }
    let half = 1usize << (ell - 1);
    let full = 1usize << ell;
    let horizon = d.horizon().min(d.language().horizon());
    let cores = d.cores();
    let search_len = horizon.min(2 * full + 1);
    let detected = match find_core_word(cores.as_ref(), 1, search_len) {
        Some(_) => Case::Two,
        None => Case::One,
    };
    let case = case.unwrap_or(detected);
    if case != detected {
        return Err(Error::InvalidSpec(format!("requested {case:?} but the core gives {detected:?}")));
    }
    let mut notes = Vec::new();
    let (word_length, window, case_two, a_ell) = match case {
        Case::One => (full, (full + 1, 2 * full + 1), None, None),
        Case::Two => {
            let params = match case_two {
                Some(p) => p,
                None => {
                    let u = find_core_word(cores.as_ref(), 2, search_len).ok_or_else(|| {
                        Error::InvalidSpec("no core word with two separated 1s within the horizon".into())
                    })?;
                    let len = ((horizon.saturating_sub(4)) / 2).clamp(1, 4);
                    let cert = check_w_specification(d, 0, 4, len, 0)?;
                    let SpecStatus::Verified { t } = cert.status else {
                        return Err(Error::InvalidSpec("core has no gap size within 4".into()));
                    };
                    notes.push(format!("gap size from core words of length <= {len}"));
                    CaseTwo { u, t }
                }
            };
            let tail = params.u.iter().rev().take_while(|&&a| a != 1).count();
            let a = full as i64 - 2 * params.t as i64 - tail as i64 - 1;
            if a < 1 {
                return Err(Error::InvalidSpec(format!("a_ell = {a} is not positive")));
            }
            let a = a as usize;
            (a, (a.saturating_sub(half), 2 * a + 1), Some(params), Some(a))
        }
    };
    let a_ell_large = a_ell.map(|a| 2 * a > 3 * half);
    if a_ell_large == Some(false) {
        notes.push("ell below the range where the lemma's size condition holds".into());
    }
    let need = 2 * word_length + 1;
    if need > horizon {
        return Err(Error::HorizonExceeded { len: need, horizon });
    }

    let (cp, cs) = (d.prefixes(), d.suffixes());
    let words = words_over_fillers(n_symbols, word_length);
    let mut fibers: BTreeMap<Word, usize> = BTreeMap::new();
    let mut estimate_violations = 0;
    let mut core_hits = 0;
    let mut core_hit_violations = 0;
    let mut window_violations = 0;
    let mut lengths = (usize::MAX, 0);
    for w in &words {
        let x = w.concat(&[1]).concat(w);
        let f = d.factorize(&x)?;
        for r in [&f.prefix, &f.suffix] {
            let ok = if r.contains_symbol(1) {
                (word_length + 1..=2 * word_length + 1).contains(&r.len())
            } else {
                r.len() <= word_length
            };
            estimate_violations += usize::from(!ok);
        }
        if f.core.contains_symbol(1) {
            core_hits += 1;
            let lo = a_ell.map_or(0, |a| a.saturating_sub(half));
            let hi = a_ell.unwrap_or(0);
            if !(lo..=hi).contains(&f.prefix.len()) {
                core_hit_violations += 1;
            }
        }
        let image = if f.suffix.contains_symbol(1) { f.suffix } else { f.prefix };
        let member = accepts(cp.as_ref(), &image) || accepts(cs.as_ref(), &image);
        if !member || !(window.0..=window.1).contains(&image.len()) {
            window_violations += 1;
        }
        lengths = (lengths.0.min(image.len()), lengths.1.max(image.len()));
        *fibers.entry(image).or_default() += 1;
    }
    let (witness, max_multiplicity) =
        fibers.iter().fold((Word::empty(), 0), |acc, (w, &c)| if c > acc.1 { (w.clone(), c) } else { acc });
    let bound = match case {
        Case::One => BigUint::from(1u32),
        Case::Two => num_traits::pow(BigUint::from(n_symbols as u64 - 1), half),
    };
    Ok(TheoremCReport {
        case,
        ell,
        word_length,
        words: words.len(),
        case_two,
        a_ell,
        a_ell_large,
        distinct_images: fibers.len(),
        max_multiplicity,
        within_bound: BigUint::from(max_multiplicity) <= bound,
        bound,
        injective: max_multiplicity <= 1,
        estimate_violations,
        core_hits,
        core_hit_violations,
        window,
        window_violations,
        image_lengths: lengths,
        witness,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{filler_decomposition, natural_coded_decomposition};
    use crate::zoo::build_fat_sgap;

    #[test]
    fn filler_case_is_injective() {
        for ell in [2u32, 3] {
            let lang = build_fat_sgap("powers:2".parse().unwrap(), 3, (2usize << ell) + 1).unwrap();
            let d = filler_decomposition(&lang);
            let r = theoremc_multiplicity(&d, 3, ell, None, None).unwrap();
            assert_eq!(r.case, Case::One);
            assert_eq!(r.words, 1 << (1 << ell));
            assert!(r.injective && r.passed(), "{r:?}");
            assert_eq!(r.image_lengths, ((1 << ell) + 1, (1 << ell) + 1));
        }
    }

    #[test]
    fn natural_case_two() {
        let lang = build_fat_sgap("powers:2".parse().unwrap(), 3, 17).unwrap();
        let d = natural_coded_decomposition(&lang).unwrap();
        for (ell, a) in [(2u32, 3usize), (3, 7)] {
            let r = theoremc_multiplicity(&d, 3, ell, None, None).unwrap();
            assert_eq!(r.case, Case::Two);
            let p = r.case_two.as_ref().unwrap();
            assert_eq!(p.u.to_string(), "2 2 1 2 2 1");
            assert_eq!(p.t, 0);
            assert_eq!(r.a_ell, Some(a));
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.a_ell_large, Some(ell == 3));
        }
    }

    #[test]
    fn mismatched_case_is_rejected() {
        let lang = build_fat_sgap("powers:2".parse().unwrap(), 3, 17).unwrap();
        let d = natural_coded_decomposition(&lang).unwrap();
        assert!(theoremc_multiplicity(&d, 3, 2, Some(Case::One), None).is_err());
        let short = build_fat_sgap("powers:2".parse().unwrap(), 3, 8).unwrap();
        let d = filler_decomposition(&short);
        assert!(matches!(theoremc_multiplicity(&d, 3, 2, None, None), Err(Error::HorizonExceeded { .. })));
    }
}
