//! Ergodic optimization for locally constant potentials: maximal ergodic
//! averages as maximum cycle means on block graphs, maximizing periodic
//! measures, word selection and gluing, and the distance potential of a
//! subshift.

mod glue;
mod karp;
mod typical;

use serde::Serialize;

use crate::entropy::perron_entropy;
use crate::error::{Error, Result};
use crate::lang::{enumerate_words, LanguageOracle};
use crate::scalar::Scalar;
use crate::thermo::{zero_temperature_path, BlockGraph, LocallyConstantPotential, MarkovMeasure};
use crate::word::Word;

pub use glue::{glue_subshift, GluedShift};
pub(crate) use karp::cycle_potentials;
pub use karp::{karp, least_cycle, simple_cycles, tight_edges};
pub use typical::{select_typical_words, TypicalWord, TypicalWordSet};

/// A periodic orbit given by a cycle of the block graph.
#[derive(Debug, Clone)]
pub struct CycleMeasure<T> {
    /// Edge indices, starting at the least.
    pub cycle: Vec<usize>,
    /// The block words of those edges.
    pub words: Vec<Word>,
    pub mean: T,
    pub measure: MarkovMeasure<f64>,
}

impl<T: Scalar> CycleMeasure<T> {
    fn new(blocks: &BlockGraph, weights: &[T], cycle: Vec<usize>) -> Result<Self> {
        let total = cycle.iter().fold(T::zero(), |acc, &e| acc + weights[e].clone());
        let mean = total / T::from_usize_lossy(cycle.len());
        let words = cycle.iter().map(|&e| blocks.edge_words()[e].clone()).collect();
        let measure = MarkovMeasure::periodic(blocks.clone(), &cycle)?;
        Ok(Self { cycle, words, mean, measure })
    }

    /// The repeating block of the orbit, one symbol per edge.
    pub fn period(&self) -> Word {
        Word::new(self.words.iter().map(|w| w[w.len() - 1]).collect())
    }
}

#[derive(Debug, Clone)]
pub struct ErgodicMaximum<T> {
    pub value: T,
    pub cycle: CycleMeasure<T>,
    /// Edges on optimal cycles.
    pub tight_edges: Vec<usize>,
}

/// Largest integral of `f` over invariant measures of the shift presented by
/// `blocks`, with the shortest optimal cycle (least edge sequence on ties).
pub fn max_ergodic_average<T: Scalar>(
    blocks: &BlockGraph,
    f: &LocallyConstantPotential<T>,
) -> Result<ErgodicMaximum<T>> {
    let weights = blocks.weights(f)?;
    let g = blocks.graph();
    let value = karp(g, &weights)?;
    let tight = tight_edges(g, &weights, &value);
    let cycle = least_cycle(g, &tight).ok_or(Error::NoCycle)?;
    Ok(ErgodicMaximum { cycle: CycleMeasure::new(blocks, &weights, cycle)?, value, tight_edges: tight })
}

/// Depth-`m` distance to a target subshift: `0` on target words, otherwise
/// `-2^-j` with `j` the length of the longest prefix in the target language.
pub fn distance_potential<T: Scalar>(
    target: &dyn LanguageOracle,
    ambient: &dyn LanguageOracle,
    m: usize,
) -> Result<LocallyConstantPotential<T>> {
    if m == 0 || m > 62 {
        return Err(Error::InvalidSpec(format!("distance depth must lie in 1..=62, got {m}")));
    }
    for lang in [target, ambient] {
        if m > lang.horizon() {
            return Err(Error::HorizonExceeded { len: m, horizon: lang.horizon() });
        }
    }
    let table = enumerate_words(ambient, m)?
        .into_iter()
        .map(|w| {
            let mut state = Some(target.start());
            let mut j = 0;
            for &a in w.iter() {
                state = state.and_then(|s| target.step(&s, a));
                if state.is_none() {
                    break;
                }
                j += 1;
            }
            let value = if j == m { T::zero() } else { T::ratio(-1, 1i64 << j) };
            (w, value)
        })
        .collect();
    LocallyConstantPotential::new(ambient, m, table)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfilePoint {
    pub beta: f64,
    pub pressure: f64,
    pub entropy: f64,
    pub integral: f64,
    /// Maximal average minus the integral.
    pub deficit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyProfile {
    pub max_average: f64,
    pub optimal_period: Word,
    /// Entropy of the subgraph of edges on optimal cycles, the largest
    /// entropy of a maximizing measure.
    pub maximizer_entropy: f64,
    pub tight_edges: usize,
    /// Number of optimal simple cycles, when the graph is small enough to
    /// list them.
    pub optimal_cycles: Option<usize>,
    pub points: Vec<ProfilePoint>,
    /// Last entropy minus the maximizer entropy.
    pub entropy_gap: f64,
    pub final_deficit: f64,
}

const LISTED_VERTICES: usize = 8;
const LISTED_CYCLES: usize = 10_000;

/// Equilibrium states of `beta f` along the schedule compared with the
/// maximizing measures of `f`.
pub fn maximizer_entropy_profile(
    blocks: &BlockGraph,
    f: &LocallyConstantPotential<f64>,
    betas: &[f64],
) -> Result<EntropyProfile> {
    if betas.is_empty() {
        return Err(Error::InvalidSpec("empty beta schedule".into()));
    }
    let max = max_ergodic_average(blocks, f)?;
    let tight_graph = blocks.graph().with_edges(&max.tight_edges);
    let maximizer_entropy = perron_entropy(&tight_graph)?.value;
    let optimal_cycles = (blocks.graph().vertex_count() <= LISTED_VERTICES)
        .then(|| simple_cycles(blocks.graph(), &max.tight_edges, LISTED_CYCLES).map(|c| c.len()))
        .flatten();
    let points: Vec<ProfilePoint> = zero_temperature_path(blocks, f, betas)?
        .into_iter()
        .map(|p| ProfilePoint {
            beta: p.beta,
            pressure: p.pressure,
            entropy: p.entropy,
            integral: p.integral,
            deficit: max.value - p.integral,
        })
        .collect();
    let last = points.last().expect("schedule is nonempty");
    Ok(EntropyProfile {
        max_average: max.value,
        optimal_period: max.cycle.period(),
        maximizer_entropy,
        tight_edges: max.tight_edges.len(),
        optimal_cycles,
        entropy_gap: last.entropy - maximizer_entropy,
        final_deficit: last.deficit,
        points,
    })
}
