use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::lang::count_profile;
use crate::zoo::{build_fat_sgap, enumerate_generators, GapSet, GeneratorSpec};

/// Number of concatenations of `k` generators of total length `n` for the
/// fat gap shift with gap set `S` over `N` symbols, with the checks
/// against generator and language counts.
#[derive(Debug, Clone, Serialize)]
pub struct AnkTable {
    pub n_max: usize,
    pub k_max: usize,
    /// `entries[n][k]`, both indices from zero.
    #[serde(serialize_with = "serialize_table")]
    pub entries: Vec<Vec<BigUint>>,
    /// Language counts `l_n`.
    #[serde(serialize_with = "serialize_row")]
    pub words: Vec<BigUint>,
    /// `sum_k A(n, k) <= l_n`.
    pub bounded_by_language: bool,
    /// `A(n, 1)` equals the closed form and the number of generators.
    pub single_generators: bool,
    /// `A(n, k + l) = sum_m A(n - m, k) A(m, l)` for all `k + l <= k_max`.
    pub convolution: bool,
}

fn serialize_row<S: serde::Serializer>(row: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(row.iter().map(|x| x.to_string()))
}

fn serialize_table<S: serde::Serializer>(t: &[Vec<BigUint>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

impl AnkTable {
    pub fn get(&self, n: usize, k: usize) -> &BigUint {
        &self.entries[n][k]
    }

    pub fn holds(&self) -> bool {
        self.bounded_by_language && self.single_generators && self.convolution
    }
}

fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let n_max = a.len() - 1;
    (0..=n_max).map(|n| (1..n).map(|m| &a[n - m] * &b[m]).fold(BigUint::zero(), |acc, x| acc + x)).collect()
}

pub fn ank_table(gaps: &GapSet, n_symbols: usize, n_max: usize, k_max: usize) -> Result<AnkTable> {
    let lang = build_fat_sgap(gaps.clone(), n_symbols, n_max)?;
    let words = count_profile(&lang, n_max)?;
    let base = BigUint::from(n_symbols as u64 - 1);
    let mut first = vec![BigUint::zero(); n_max + 1];
    for (n, slot) in first.iter_mut().enumerate().skip(1) {
        if gaps.contains(n as u64 - 1) {
            *slot = num_traits::pow(base.clone(), n - 1);
        }
    }
    // columns[k][n] = A(n, k)
    let mut columns = vec![vec![BigUint::zero(); n_max + 1], first.clone()];
    for k in 2..=k_max {
        let next = convolve(&columns[k - 1], &first);
        columns.push(next);
    }

    let generator = lang.generator().clone();
    let generators = enumerate_generators(generator.as_ref() as &dyn GeneratorSpec, n_max);
    let single_generators =
        (1..=n_max).all(|n| BigUint::from(generators.iter().filter(|w| w.len() == n).count()) == first[n]);
    let convolution =
        (1..=k_max).all(|k| (1..=k_max - k).all(|l| convolve(&columns[k], &columns[l]) == columns[k + l]));
    let bounded_by_language = (1..=n_max).all(|n| {
        let total: BigUint = (1..=k_max.min(n)).map(|k| columns[k][n].clone()).fold(BigUint::zero(), |a, b| a + b);
        total <= words[n]
    });
    let entries = (0..=n_max).map(|n| (0..=k_max).map(|k| columns[k][n].clone()).collect()).collect();
    Ok(AnkTable { n_max, k_max, entries, words, bounded_by_language, single_generators, convolution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::WordAutomaton;
    use crate::zoo::CodedCollection;
    use num_traits::One;
    use std::collections::HashMap;

    /// Concatenations of length `n` with exactly `k` generators, counted by
    /// the number of 1s.
    fn brute(gaps: &GapSet, n_symbols: usize, n: usize, k: usize) -> BigUint {
        let lang = build_fat_sgap(gaps.clone(), n_symbols, n).unwrap();
        let aut = lang.collection(CodedCollection::Concatenations);
        let mut layer: HashMap<(Vec<u32>, usize), BigUint> = HashMap::from([((aut.start(), 0), BigUint::one())]);
        for _ in 0..n {
            let mut next: HashMap<(Vec<u32>, usize), BigUint> = HashMap::new();
            for ((s, ones), c) in &layer {
                for a in aut.alphabet().symbols() {
                    if let Some(t) = aut.step(s, a) {
                        *next.entry((t, ones + usize::from(a == 1))).or_default() += c;
                    }
                }
            }
            layer = next;
        }
        layer.iter().filter(|((s, ones), _)| *ones == k && aut.accepting(s)).map(|(_, c)| c.clone()).sum()
    }

    #[test]
    fn all_gaps_two_symbols() {
        let t = ank_table(&GapSet::AllNonneg, 2, 12, 4).unwrap();
        assert!((1..=12).all(|n| *t.get(n, 1) == BigUint::one()));
        assert!(t.holds());
    }

    #[test]
    fn powers_of_two_three_symbols() {
        let gaps = GapSet::powers(2).unwrap();
        let t = ank_table(&gaps, 3, 16, 5).unwrap();
        assert_eq!(*t.get(3, 1), BigUint::from(4u32));
        assert_eq!(*t.get(2, 1), BigUint::zero());
        assert_eq!(*t.get(6, 2), BigUint::from(16u32));
        assert!(t.holds());
        for n in 1..=10 {
            for k in 1..=4 {
                assert_eq!(*t.get(n, k), brute(&gaps, 3, n, k), "n={n} k={k}");
            }
        }
    }
}
