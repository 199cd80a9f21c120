use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::thermo::{measure_entropy, LocallyConstantPotential, MarkovMeasure};
use crate::word::Word;

#[derive(Debug, Clone, Serialize)]
pub struct TypicalWord {
    pub word: Word,
    pub mass: f64,
    /// Birkhoff averages of each potential over the windows inside the word.
    pub averages: Vec<f64>,
}

/// Words of one length with near-typical cylinder mass and averages.
#[derive(Debug, Clone, Serialize)]
pub struct TypicalWordSet {
    pub k: usize,
    pub epsilon: f64,
    pub entropy: f64,
    pub integrals: Vec<f64>,
    pub candidates: usize,
    pub words: Vec<TypicalWord>,
    /// Total mass of the selected cylinders.
    pub achieved_mass: f64,
    /// `[mass e^((h-eps)k), e^((h+eps)k)]`.
    pub count_window: (f64, f64),
    pub in_window: bool,
}

impl TypicalWordSet {
    pub fn word_list(&self) -> Vec<Word> {
        self.words.iter().map(|w| w.word.clone()).collect()
    }
}

const SLACK: f64 = 1e-9;

fn is_ergodic(mu: &MarkovMeasure<f64>) -> bool {
    let g = mu.blocks().graph();
    let support: Vec<usize> = (0..g.vertex_count()).filter(|&v| mu.stationary()[v] > 0.0).collect();
    let live: Vec<usize> =
        (0..g.edges().len()).filter(|&e| mu.transition()[e] > 0.0 && mu.stationary()[g.edges()[e].src] > 0.0).collect();
    let comps = g.with_edges(&live).sccs();
    comps.iter().filter(|c| c.iter().any(|v| support.contains(v))).count() == 1
}

/// Length-`k` words with `e^(-k(h+eps)) <= mu[w] <= e^(-k(h-eps))` whose
/// averages of every `f` are within `eps/2` of the integral.
pub fn select_typical_words(
    mu: &MarkovMeasure<f64>,
    fs: &[LocallyConstantPotential<f64>],
    epsilon: f64,
    k: usize,
) -> Result<TypicalWordSet> {
    if k == 0 || epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidSpec("need k >= 1 and eps > 0".into()));
    }
    if let Some(f) = fs.iter().find(|f| f.range() > k) {
        return Err(Error::InvalidSpec(format!("potential range {} exceeds k = {k}", f.range())));
    }
    if !is_ergodic(mu) {
        return Err(Error::Reducible("measure has more than one communicating class".into()));
    }
    let h = measure_entropy(mu);
    let integrals = fs.iter().map(|f| mu.integral(f)).collect::<Result<Vec<_>>>()?;
    let kf = k as f64;
    let lo = (-kf * (h + epsilon)).exp() * (1.0 - SLACK);
    let hi = (-kf * (h - epsilon)).exp() * (1.0 + SLACK);
    let candidates = mu.support_with_mass(k);
    let words: Vec<TypicalWord> = candidates
        .par_iter()
        .filter_map(|(w, mass)| {
            let mass = *mass;
            if mass < lo || mass > hi {
                return None;
            }
            let averages: Vec<f64> = fs
                .iter()
                .map(|f| {
                    let windows = k - f.range() + 1;
                    (0..windows).map(|i| *f.at(&w[i..])).sum::<f64>() / windows as f64
                })
                .collect();
            let typical = averages.iter().zip(&integrals).all(|(a, i)| (a - i).abs() <= epsilon / 2.0 + SLACK);
            typical.then(|| TypicalWord { word: w.clone(), mass, averages })
        })
        .collect();
    if words.is_empty() {
        return Err(Error::EmptySelection);
    }
    let achieved_mass: f64 = words.iter().map(|w| w.mass).sum();
    let count_window = (achieved_mass * (kf * (h - epsilon)).exp(), (kf * (h + epsilon)).exp());
    let count = words.len() as f64;
    let in_window = count >= count_window.0 * (1.0 - SLACK) && count <= count_window.1 * (1.0 + SLACK);
    Ok(TypicalWordSet {
        k,
        epsilon,
        entropy: h,
        integrals,
        candidates: candidates.len(),
        words,
        achieved_mass,
        count_window,
        in_window,
    })
}
