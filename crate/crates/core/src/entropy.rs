//! Topological entropy by word-count growth, Perron roots, and the
//! characteristic equation of (fat) S-gap shifts.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{adjacency_radius, Digraph};
use crate::lang::{accepted_profile, check_horizon, explore, LanguageOracle, WordAutomaton};
use crate::zoo::GapSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Growth,
    Perron,
    Root,
}

/// Extrapolations that are not theorems; reported alongside growth values.
#[derive(Debug, Clone, Serialize)]
pub struct Advisory {
    /// `log(c_n / c_{n-1})` at the largest `n`.
    pub ratio: Option<f64>,
    /// Aitken's delta-squared on the last three per-`n` values.
    pub aitken: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyEstimate {
    pub method: Method,
    /// Nats.
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub n_used: Option<usize>,
    pub tolerance: Option<f64>,
    /// `(1/n) log c_n` at the largest `n`, when counts were taken.
    pub upper_hint: Option<f64>,
    /// `(1/n) log c_n` for `n = 1..=n_used`.
    pub per_n: Vec<f64>,
    pub advisory: Option<Advisory>,
    pub notes: Vec<String>,
}

fn log_big(c: &BigUint) -> f64 {
    if let Some(x) = c.to_f64().filter(|x| x.is_finite()) {
        return x.ln();
    }
    let bits = c.bits();
    let shift = bits.saturating_sub(64);
    (c >> shift).to_f64().expect("fits after shifting").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Growth estimate from exact counts `c_0..=c_n`.
pub fn growth_from_counts(counts: &[BigUint]) -> EntropyEstimate {
    let n_max = counts.len() - 1;
    let mut notes = Vec::new();
    let per_n: Vec<f64> = (1..=n_max)
        .map(|n| if counts[n] == BigUint::from(0u32) { 0.0 } else { log_big(&counts[n]) / n as f64 })
        .collect();
    if counts[1..].iter().any(|c| *c == BigUint::from(0u32)) {
        notes.push("some counts are zero; their growth is reported as 0".into());
    }
    let value = per_n.last().copied().unwrap_or(0.0).max(0.0);
    let ratio = (n_max >= 2 && counts[n_max - 1] > BigUint::from(0u32) && counts[n_max] > BigUint::from(0u32))
        .then(|| log_big(&counts[n_max]) - log_big(&counts[n_max - 1]));
    let aitken = (per_n.len() >= 3).then(|| {
        let k = per_n.len();
        let (a, b, c) = (per_n[k - 3], per_n[k - 2], per_n[k - 1]);
        let d = c - 2.0 * b + a;
        if d.abs() < 1e-15 {
            c
        } else {
            c - (c - b) * (c - b) / d
        }
    });
    EntropyEstimate {
        method: Method::Growth,
        value,
        bracket_lo: 0.0,
        bracket_hi: value,
        n_used: Some(n_max),
        tolerance: None,
        upper_hint: Some(value),
        per_n,
        advisory: Some(Advisory { ratio, aitken }),
        notes,
    }
}

/// `(1/n_max) log #L_{n_max}`, an upper bound for the entropy by Fekete's lemma.
pub fn growth_entropy<L: LanguageOracle + ?Sized>(lang: &L, n_max: usize) -> Result<EntropyEstimate> {
    if n_max == 0 {
        return Err(Error::InvalidSpec("growth needs n_max >= 1".into()));
    }
    check_horizon(lang, n_max)?;
    Ok(growth_from_counts(&accepted_profile(lang, n_max)))
}

/// Growth of an arbitrary word collection.
pub fn collection_growth<A: WordAutomaton + ?Sized>(aut: &A, n_max: usize) -> EntropyEstimate {
    growth_from_counts(&accepted_profile(aut, n_max.max(1)))
}

/// Log of the adjacency spectral radius.
pub fn perron_entropy(graph: &Digraph) -> Result<EntropyEstimate> {
    let p = adjacency_radius(graph)?;
    Ok(EntropyEstimate {
        method: Method::Perron,
        value: p.rho.ln().max(0.0),
        bracket_lo: p.lower.ln().max(0.0),
        bracket_hi: p.upper.ln().max(0.0),
        n_used: None,
        tolerance: Some(crate::graph::PERRON_TOL),
        upper_hint: None,
        per_n: Vec::new(),
        advisory: None,
        notes: Vec::new(),
    })
}

/// Perron entropy of the automaton presenting a language. Exact for
/// finite-state languages (shifts of finite type, sofic and glued shifts,
/// complete diagrams); for coded shifts with infinitely many generators it
/// is the entropy of the horizon truncation.
pub fn automaton_entropy<L: LanguageOracle + ?Sized>(lang: &L, max_states: usize) -> Result<EntropyEstimate> {
    let g = explore(lang, max_states)?;
    let mut est = perron_entropy(&Digraph::from_state_graph(&g))?;
    if lang.as_coded().is_some_and(|c| !c.generator().is_finite()) {
        est.notes.push("generator set is infinite: value is for the horizon truncation".into());
    }
    Ok(est)
}

/// Certified bounds on `sum_{s in S} y^(s+1)` for `0 < y`: the partial sum
/// and partial sum plus a geometric tail bound. For `y < 1` terms are added
/// until the tail bound drops below `tail_tol`.
pub fn gap_series(gaps: &GapSet, y: f64, tail_tol: f64) -> (f64, f64) {
    if let Some(max) = gaps.max_finite() {
        let s: f64 = gaps.enumerate_up_to(max).iter().map(|&k| y.powf(k as f64 + 1.0)).sum();
        return (s, s);
    }
    assert!(y < 1.0, "infinite gap series diverges at y >= 1");
    // tail after K: sum_{m > K} y^(m+1) = y^(K+2) / (1 - y)
    let k = ((tail_tol * (1.0 - y)).ln() / y.ln()).ceil().max(0.0) as u64;
    let partial: f64 = gaps.enumerate_up_to(k).iter().map(|&s| y.powf(s as f64 + 1.0)).sum();
    let tail = y.powf(k as f64 + 2.0) / (1.0 - y);
    (partial, partial + tail)
}

#[derive(Debug, Clone, Serialize)]
pub struct RootEstimate {
    pub estimate: EntropyEstimate,
    /// Bracket on the root `x0` of `1 = sum_{s in S} (N-1)^s x^(s+1)`.
    pub x_lo: f64,
    pub x_hi: f64,
    /// Lower bound of the first-generation series `F_1` at `x_lo`.
    pub f1_at_root: f64,
    pub iterations: usize,
}

const ROOT_ITERATIONS: usize = 1_000_000;

/// Entropy `log(1/x0)` of the fat S-gap shift on `N` symbols, where `x0`
/// solves `N - 1 = sum_{s in S} ((N-1) x)^(s+1)`. Bisection in
/// `y = (N-1) x` with certified series bounds; the returned bracket has
/// width at most `tol`.
pub fn gap_entropy_root(gaps: &GapSet, n: usize, tol: f64) -> Result<RootEstimate> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("need N >= 2, got {n}")));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidSpec("tolerance must be positive".into()));
    }
    let target = (n - 1) as f64;
    let tail_tol = tol / 10.0;
    let mut lo = 0.0f64;
    let mut hi = if gaps.is_finite() {
        let mut h = 1.0;
        while gap_series(gaps, h, tail_tol).0 < target {
            h *= 2.0;
            if h > 1e300 {
                return Err(Error::NonConvergence("characteristic series never reaches N - 1".into()));
            }
        }
        h
    } else {
        1.0
    };
    let mut iterations = 0;
    while lo == 0.0 || (hi / lo).ln() > tol {
        iterations += 1;
        if iterations > ROOT_ITERATIONS {
            return Err(Error::NonConvergence("bisection bracket did not shrink below tol".into()));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let mut tail = tail_tol;
        loop {
            let (below, above) = gap_series(gaps, mid, tail);
            if below >= target {
                hi = mid;
                break;
            }
            if above < target {
                lo = mid;
                break;
            }
            if tail < 1e-200 {
                // The root sits within rounding of mid.
                lo = mid;
                hi = mid;
                break;
            }
            tail *= 1e-3;
        }
    }
    let base = target.ln();
    let value_lo = (base - hi.ln()).max(0.0);
    let value_hi = (base - lo.ln()).max(0.0);
    if value_hi - value_lo > tol {
        return Err(Error::NonConvergence("bracket wider than tolerance".into()));
    }
    let x_lo = lo / target;
    let f1 = gap_series(gaps, lo, tail_tol).0 / target;
    let mut notes = Vec::new();
    if gaps.is_finite() && hi > 1.0 {
        notes.push("root lies beyond 1/(N-1) because the gap set is finite".into());
    }
    Ok(RootEstimate {
        estimate: EntropyEstimate {
            method: Method::Root,
            value: 0.5 * (value_lo + value_hi),
            bracket_lo: value_lo,
            bracket_hi: value_hi,
            n_used: None,
            tolerance: Some(tol),
            upper_hint: None,
            per_n: Vec::new(),
            advisory: None,
            notes,
        },
        x_lo,
        x_hi: hi / target,
        f1_at_root: f1,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;
    use crate::zoo::{build_fat_sgap, build_sft, build_sgap, FullShift};
    use proptest::prelude::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn full_shift_growth_is_exact() {
        for n in [1, 5, 10] {
            let e = growth_entropy(&FullShift::new(2).unwrap(), n).unwrap();
            assert!((e.value - LN2).abs() < 1e-15);
        }
    }

    #[test]
    fn golden_mean_growth() {
        let sft = build_sft(2, &[Word::from_digits("11").unwrap()], 40).unwrap();
        let e = growth_entropy(&sft, 20).unwrap();
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((e.value - golden).abs() < 0.02);
        assert!(e.value >= golden);
        let p = automaton_entropy(&sft, 100).unwrap();
        assert!((p.value - golden).abs() < 1e-11);
    }

    #[test]
    fn fat_gap_growth_exceeds_log2() {
        let s = build_fat_sgap("powers:2".parse().unwrap(), 3, 16).unwrap();
        let e = growth_entropy(&s, 16).unwrap();
        assert!(e.value > LN2);
        let counts = accepted_profile(&s, 16);
        assert_eq!(counts[8], BigUint::from(1856u32));
        assert_eq!(counts[12], BigUint::from(57856u32));
        assert_eq!(counts[16], BigUint::from(1627136u32));
    }

    #[test]
    fn perron_examples() {
        let loops = Digraph::from_triples(1, &[(0, 1, 0), (0, 2, 0)]);
        assert!((perron_entropy(&loops).unwrap().value - LN2).abs() < 1e-12);
        let golden = Digraph::from_triples(2, &[(0, 1, 0), (0, 2, 1), (1, 1, 0)]);
        let g = perron_entropy(&golden).unwrap();
        assert!((g.value - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-11);
        let cycle = Digraph::from_triples(3, &[(0, 1, 1), (1, 1, 2), (2, 1, 0)]);
        assert!(perron_entropy(&cycle).unwrap().value.abs() < 1e-11);
    }

    #[test]
    fn root_geometric_cases() {
        let r = gap_entropy_root(&GapSet::AllNonneg, 2, 1e-10).unwrap();
        assert!((r.estimate.value - LN2).abs() < 1e-10);
        let r3 = gap_entropy_root(&GapSet::AllNonneg, 3, 1e-10).unwrap();
        assert!((r3.estimate.value - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn root_for_powers_of_two() {
        let r = gap_entropy_root(&GapSet::Powers(2), 3, 1e-10).unwrap();
        let v = r.estimate.value;
        assert!(v > LN2 + 0.05 && v < 3f64.ln(), "{v}");
        assert!((v - 0.7912918951531452).abs() < 1e-9);
        assert!(r.f1_at_root > 0.99 && r.f1_at_root <= 1.0);
        assert!(r.estimate.bracket_hi - r.estimate.bracket_lo <= 1e-10);
    }

    #[test]
    fn root_for_finite_sets() {
        // S = {1}: the single periodic orbit (21)^inf.
        let r = gap_entropy_root(&GapSet::list(vec![1]).unwrap(), 2, 1e-10).unwrap();
        assert!(r.estimate.value.abs() < 1e-10);
        // S = {0, 1}: golden mean, lambda^2 = lambda + 1.
        let g = gap_entropy_root(&GapSet::list(vec![0, 1]).unwrap(), 2, 1e-10).unwrap();
        assert!((g.estimate.value - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn root_matches_sofic_perron_for_finite_sets() {
        for spec in ["list:0,2", "list:1,2,5", "list:0,3"] {
            let gaps: GapSet = spec.parse().unwrap();
            let lang = build_sgap(gaps.clone(), 24).unwrap();
            let p = automaton_entropy(&lang, 10_000).unwrap();
            let r = gap_entropy_root(&gaps, 2, 1e-10).unwrap();
            assert!((p.value - r.estimate.value).abs() < 1e-9, "{spec}");
        }
    }

    #[test]
    fn cross_method_agreement() {
        let n_max = 20;
        let lang = build_sgap(GapSet::AllNonneg, 24).unwrap();
        let g = growth_entropy(&lang, n_max).unwrap();
        let r = gap_entropy_root(&GapSet::AllNonneg, 2, 1e-10).unwrap();
        assert!((g.value - r.estimate.value).abs() <= (1e-10f64).max(2.0 / n_max as f64));
    }

    #[test]
    fn growth_sequence_is_subadditive() {
        let s = build_fat_sgap("powers:2".parse().unwrap(), 3, 16).unwrap();
        let counts = accepted_profile(&s, 16);
        for m in 1..=8 {
            for n in 1..=8 {
                assert!(counts[m + n] <= &counts[m] * &counts[n]);
            }
        }
        let e = growth_from_counts(&counts);
        assert!(e.value <= e.upper_hint.unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn monotone_in_gap_set(extra in proptest::collection::vec(0u64..12, 1..4), base in proptest::collection::vec(0u64..12, 1..4)) {
            let small = GapSet::list(base.clone()).unwrap();
            let mut both = base;
            both.extend(extra);
            let large = GapSet::list(both).unwrap();
            let a = gap_entropy_root(&small, 2, 1e-10).unwrap().estimate.value;
            let b = gap_entropy_root(&large, 2, 1e-10).unwrap().estimate.value;
            prop_assert!(a <= b + 1e-10);
        }

        #[test]
        fn monotone_in_alphabet(which in 0usize..4, n in 2usize..6) {
            let gaps = [GapSet::AllNonneg, GapSet::Powers(2), GapSet::Powers(3), GapSet::Arithmetic { start: 1, step: 2 }][which].clone();
            let a = gap_entropy_root(&gaps, n, 1e-10).unwrap().estimate.value;
            let b = gap_entropy_root(&gaps, n + 1, 1e-10).unwrap().estimate.value;
            prop_assert!(a < b);
            if n >= 3 {
                prop_assert!(a > ((n - 1) as f64).ln());
            }
        }
    }
}
