use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::{check_horizon, enumerate_accepted, run, LanguageOracle, State, WordAutomaton};
use crate::scalar::Real;
use crate::word::Symbol;

use super::measure::transfer;
use super::{equilibrium_markov, measure_entropy, BlockGraph, LocallyConstantPotential, MarkovMeasure};

#[derive(Debug, Clone, Serialize)]
pub struct PressureReport<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
    pub beta: T,
    pub method: &'static str,
}

/// `log` of the spectral radius of the transfer matrix `exp(beta phi(e))`.
/// Weights are gauged so that optimal cycles have weight one, which keeps
/// large `beta` from underflowing.
pub fn pressure<T: Real>(
    blocks: &BlockGraph,
    potential: &LocallyConstantPotential<T>,
    beta: T,
) -> Result<PressureReport<T>> {
    let t = transfer(blocks, potential, beta)?;
    Ok(PressureReport {
        value: t.log_pressure(),
        lower: t.shift + t.right.lower.ln(),
        upper: t.shift + t.right.upper.ln(),
        beta,
        method: "transfer-matrix",
    })
}

fn extend_max<T: Real>(
    lang: &dyn LanguageOracle,
    potential: &LocallyConstantPotential<T>,
    buf: &mut Vec<Symbol>,
    state: &State,
    remaining: usize,
) -> Option<T> {
    if remaining == 0 {
        let r = potential.range();
        return Some((0..buf.len() + 1 - r).map(|i| *potential.at(&buf[i..])).sum());
    }
    let mut best: Option<T> = None;
    for a in lang.alphabet().symbols() {
        if let Some(next) = lang.step(state, a) {
            buf.push(a);
            if let Some(v) = extend_max(lang, potential, buf, &next, remaining - 1) {
                best = Some(best.map_or(v, |b| b.max(v)));
            }
            buf.pop();
        }
    }
    best
}

/// `sup` over the cylinder of `w` of the Birkhoff sum `S_n phi`, `n = |w|`:
/// the windows that stick out past `w` are maximized over legal
/// extensions. `None` when `w` has no legal extension.
pub fn sup_birkhoff_sum<T: Real>(
    lang: &dyn LanguageOracle,
    potential: &LocallyConstantPotential<T>,
    w: &[Symbol],
) -> Result<Option<T>> {
    let r = potential.range();
    let n = w.len();
    check_horizon(lang, n + r - 1)?;
    let Some(state) = run(lang, w) else { return Ok(None) };
    let inside = n.saturating_sub(r - 1);
    let fixed: T = (0..inside).map(|i| *potential.at(&w[i..])).sum();
    // The windows starting in the last `r - 1` symbols run past `w`.
    let mut buf = w[inside..].to_vec();
    let tail = extend_max(lang, potential, &mut buf, &state, r - 1);
    Ok(tail.map(|t| fixed + t))
}

/// `sum over w in D_n of sup exp S_n phi` for the words of length `n` of a
/// collection that are legal in `lang`.
pub fn partition_sum<T: Real>(
    lang: &dyn LanguageOracle,
    collection: &dyn WordAutomaton,
    potential: &LocallyConstantPotential<T>,
    n: usize,
) -> Result<T> {
    check_horizon(lang, n + potential.range() - 1)?;
    let words = enumerate_accepted(collection, n);
    let mut total = T::zero();
    for w in words {
        if let Some(s) = sup_birkhoff_sum(lang, potential, &w)? {
            total = total + s.exp();
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct GibbsAudit {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub words: usize,
}

/// Extremes of `mu[w] / exp(-P n + sup S_n(beta phi))` over `words`.
pub fn weak_gibbs_audit<T: Real>(
    lang: &dyn LanguageOracle,
    mu: &MarkovMeasure<T>,
    potential: &LocallyConstantPotential<T>,
    beta: T,
    pressure: T,
    words: &[crate::word::Word],
) -> Result<GibbsAudit> {
    let scaled = potential.map(|v| beta * *v);
    let mut audit = GibbsAudit { min_ratio: f64::INFINITY, max_ratio: 0.0, words: 0 };
    for w in words {
        let Some(s) = sup_birkhoff_sum(lang, &scaled, w)? else { continue };
        let n = T::from_usize(w.len()).expect("representable");
        let ratio = (mu.cylinder_mass(w).ln() + pressure * n - s).exp().to_f64_lossy();
        audit.min_ratio = audit.min_ratio.min(ratio);
        audit.max_ratio = audit.max_ratio.max(ratio);
        audit.words += 1;
    }
    if audit.words == 0 {
        return Err(Error::EmptySelection);
    }
    Ok(audit)
}

#[derive(Debug, Clone)]
pub struct ZeroTempPoint<T> {
    pub beta: T,
    pub pressure: T,
    pub entropy: T,
    pub integral: T,
    pub measure: MarkovMeasure<T>,
}

/// Equilibrium measures of `beta f` along an increasing schedule.
pub fn zero_temperature_path<T: Real>(
    blocks: &BlockGraph,
    f: &LocallyConstantPotential<T>,
    betas: &[T],
) -> Result<Vec<ZeroTempPoint<T>>> {
    if betas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec("beta schedule must be increasing".into()));
    }
    betas
        .par_iter()
        .map(|&beta| {
            let measure = equilibrium_markov(blocks, f, beta)?;
            let p = pressure(blocks, f, beta)?;
            Ok(ZeroTempPoint {
                beta,
                pressure: p.value,
                entropy: measure_entropy(&measure),
                integral: measure.integral(f)?,
                measure,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::count_words;
    use crate::zoo::{build_sft, FullShift, Sft};
    use crate::Word;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn golden() -> Sft {
        build_sft(2, &[Word::from_digits("11").unwrap()], 24).unwrap()
    }

    fn random_potential(sft: &Sft, values: &[f64]) -> LocallyConstantPotential<f64> {
        let i = std::cell::Cell::new(0);
        LocallyConstantPotential::from_fn(sft, 2, |_| {
            i.set(i.get() + 1);
            values[(i.get() - 1) % values.len()]
        })
        .unwrap()
    }

    #[test]
    fn partition_sums() {
        let sft = golden();
        let zero = LocallyConstantPotential::constant(&sft, 0.0).unwrap();
        for n in 1..=8 {
            let z = partition_sum(&sft, &sft, &zero, n).unwrap();
            assert_eq!(z, count_words(&sft, n).unwrap().to_f64().unwrap());
        }
        let full = FullShift::new(2).unwrap();
        let (a, b) = (0.3f64, -1.2f64);
        let f = LocallyConstantPotential::from_fn(&full, 1, |w| if w[0] == 1 { a } else { b }).unwrap();
        let z = partition_sum(&full, &full, &f, 2).unwrap();
        assert!((z - (a.exp() + b.exp()).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn sup_uses_extensions() {
        let sft = golden();
        // Windows 11 are illegal, so after a trailing 1 only 12 can follow.
        let f = LocallyConstantPotential::from_fn(&sft, 2, |w| match w.symbols() {
            [1, 2] => -5.0,
            [2, 1] => 1.0,
            _ => 0.0,
        })
        .unwrap();
        assert_eq!(sup_birkhoff_sum(&sft, &f, &[2, 1]).unwrap(), Some(-4.0));
        assert_eq!(sup_birkhoff_sum(&sft, &f, &[2, 2]).unwrap(), Some(1.0));
        assert_eq!(sup_birkhoff_sum(&sft, &f, &[1, 1]).unwrap(), None);
    }

    #[test]
    fn pressure_examples() {
        let sft = golden();
        let blocks = BlockGraph::new(&sft, 2).unwrap();
        let zero = LocallyConstantPotential::constant(&sft, 0.0).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((pressure(&blocks, &zero, 0.0).unwrap().value - phi.ln()).abs() < 1e-11);
        let full = FullShift::new(2).unwrap();
        let fb = BlockGraph::new(&full, 1).unwrap();
        let f = LocallyConstantPotential::from_fn(&full, 1, |w| if w[0] == 1 { 0.0 } else { -1.0 }).unwrap();
        let p = pressure(&fb, &f, 1.0).unwrap();
        assert!((p.value - (1.0 + (-1f64).exp()).ln()).abs() < 1e-11);
        assert!(p.lower <= p.value && p.value <= p.upper);
        let mut last = f64::INFINITY;
        for beta in [0.0, 0.5, 1.0, 2.0, 8.0, 64.0] {
            let v = pressure(&fb, &f, beta).unwrap().value;
            assert!(v <= last + 1e-12);
            last = v;
        }
    }

    #[test]
    fn weak_gibbs_bands() {
        let sft = golden();
        let blocks = BlockGraph::new(&sft, 2).unwrap();
        let zero = LocallyConstantPotential::constant(&sft, 0.0).unwrap();
        let mu = equilibrium_markov(&blocks, &zero, 1.0).unwrap();
        let p = pressure(&blocks, &zero, 1.0).unwrap().value;
        let mut bands = Vec::new();
        for n in [2, 6, 10, 14] {
            let words = crate::lang::enumerate_words(&sft, n).unwrap();
            let a = weak_gibbs_audit(&sft, &mu, &zero, 1.0, p, &words).unwrap();
            bands.push(a.max_ratio / a.min_ratio);
        }
        assert!(bands.iter().all(|&b| b < 3.0), "{bands:?}");

        let full = FullShift::new(2).unwrap();
        let zero = LocallyConstantPotential::constant(&full, 0.0).unwrap();
        let skew = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
        let spread: Vec<f64> = [2, 6, 10]
            .iter()
            .map(|&n| {
                let words = crate::lang::enumerate_words(&full, n).unwrap();
                let a = weak_gibbs_audit(&full, &skew, &zero, 1.0, 2f64.ln(), &words).unwrap();
                a.max_ratio / a.min_ratio
            })
            .collect();
        assert!(spread.windows(2).all(|w| w[1] > 10.0 * w[0]), "{spread:?}");
    }

    #[test]
    fn freezing_on_a_fixed_point() {
        let sft = golden();
        let blocks = BlockGraph::new(&sft, 2).unwrap();
        let f = LocallyConstantPotential::from_fn(&sft, 1, |w| if w[0] == 2 { -1.0 } else { 0.0 }).unwrap();
        let betas: Vec<f64> = (1..=9).map(|k| 2f64.powi(k)).collect();
        let path = zero_temperature_path(&blocks, &f, &betas).unwrap();
        // Golden-mean words cannot repeat 1, so the maximum of f is -1/2 on (12)^inf.
        for w in path.windows(2) {
            assert!(w[1].integral >= w[0].integral - 1e-12);
            assert!(w[1].entropy <= w[0].entropy + 1e-12);
        }
        let last = path.last().unwrap();
        assert!((last.integral + 0.5).abs() < 1e-3);
        assert!(last.entropy < 1e-2);
        assert!(zero_temperature_path(&blocks, &f, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn transitions_are_continuous_in_beta() {
        let sft = golden();
        let blocks = BlockGraph::new(&sft, 2).unwrap();
        let f = random_potential(&sft, &[0.3, -0.7, 0.1]);
        let target = equilibrium_markov(&blocks, &f, 1.5).unwrap();
        let mut prev = f64::INFINITY;
        for k in 4..12 {
            let beta = 1.5 + 2f64.powi(-k);
            let mu = equilibrium_markov(&blocks, &f, beta).unwrap();
            let d = mu.transition().iter().zip(target.transition()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn variational_identity(values in proptest::collection::vec(-2.0f64..2.0, 3), beta in 0.0f64..6.0) {
            let sft = golden();
            let blocks = BlockGraph::new(&sft, 2).unwrap();
            let f = random_potential(&sft, &values);
            let mu = equilibrium_markov(&blocks, &f, beta).unwrap();
            let p = pressure(&blocks, &f, beta).unwrap().value;
            let residual = measure_entropy(&mu) + beta * mu.integral(&f).unwrap() - p;
            prop_assert!(residual.abs() < 1e-9, "{}", residual);
        }

        #[test]
        fn pressure_is_convex(values in proptest::collection::vec(-2.0f64..2.0, 3)) {
            let sft = golden();
            let blocks = BlockGraph::new(&sft, 2).unwrap();
            let f = random_potential(&sft, &values);
            let grid: Vec<f64> = (0..12).map(|i| i as f64 * 0.5).collect();
            let p: Vec<f64> = grid.iter().map(|&b| pressure(&blocks, &f, b).unwrap().value).collect();
            for w in p.windows(3) {
                prop_assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-9);
            }
            for i in 0..grid.len() - 1 {
                let slope = (p[i + 1] - p[i]) / (grid[i + 1] - grid[i]);
                let a = equilibrium_markov(&blocks, &f, grid[i]).unwrap().integral(&f).unwrap();
                let b = equilibrium_markov(&blocks, &f, grid[i + 1]).unwrap().integral(&f).unwrap();
                prop_assert!(slope >= a.min(b) - 1e-9 && slope <= a.max(b) + 1e-9);
            }
        }
    }
}
