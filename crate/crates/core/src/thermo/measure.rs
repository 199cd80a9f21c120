use serde::Serialize;

use crate::ergopt::{cycle_potentials, karp};
use crate::error::{Error, Result};
use crate::graph::{perron_irreducible, Digraph, Perron, PERRON_TOL};
use crate::scalar::Real;
use crate::word::{Symbol, Word};
use crate::zoo::FullShift;

use super::{BlockGraph, LocallyConstantPotential};

/// Relative gap below which two component Perron roots count as tied.
const TIE: f64 = 1e-9;

/// Markov measure on the edges of a block graph.
#[derive(Debug, Clone)]
pub struct MarkovMeasure<T> {
    blocks: BlockGraph,
    /// Per edge: probability of taking it from its source.
    transition: Vec<T>,
    /// Per vertex.
    stationary: Vec<T>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureSummary {
    pub entropy: f64,
    pub stationarity_residual: f64,
    pub support_vertices: usize,
    pub transitions: Vec<(String, f64)>,
    pub stationary: Vec<(String, f64)>,
}

impl<T: Real> MarkovMeasure<T> {
    pub fn new(blocks: BlockGraph, transition: Vec<T>, stationary: Vec<T>) -> Result<Self> {
        let g = blocks.graph();
        if transition.len() != g.edges().len() || stationary.len() != g.vertex_count() {
            return Err(Error::InvalidSpec("measure does not match its block graph".into()));
        }
        let tol = T::from_f64(1e-9).expect("representable");
        let total: T = stationary.iter().copied().sum();
        if (total - T::one()).abs() > tol || stationary.iter().any(|p| *p < T::zero()) {
            return Err(Error::InvalidSpec("stationary vector is not a probability vector".into()));
        }
        for (v, &p) in stationary.iter().enumerate() {
            let row: T = g.out_edges(v).iter().map(|&e| transition[e]).sum();
            if p > T::zero() && (row - T::one()).abs() > tol {
                return Err(Error::InvalidSpec(format!("transition row {v} sums to {row}")));
            }
        }
        let m = Self { blocks, transition, stationary };
        if m.stationarity_residual() > tol {
            return Err(Error::InvalidSpec("vector is not stationary".into()));
        }
        Ok(m)
    }

    /// Product measure on the full shift over `probs.len()` symbols.
    pub fn bernoulli(probs: &[T]) -> Result<Self> {
        let blocks = BlockGraph::new(&FullShift::new(probs.len())?, 1)?;
        let transition = blocks.edge_words().iter().map(|w| probs[w[0] as usize - 1]).collect();
        Self::new(blocks, transition, vec![T::one()])
    }

    /// Periodic orbit along a closed walk of distinct vertices.
    pub fn periodic(blocks: BlockGraph, cycle: &[usize]) -> Result<Self> {
        let g = blocks.graph();
        let ok = !cycle.is_empty()
            && cycle.iter().zip(cycle.iter().cycle().skip(1)).all(|(&a, &b)| g.edges()[a].dst == g.edges()[b].src);
        if !ok {
            return Err(Error::InvalidSpec("edges do not form a closed walk".into()));
        }
        let mut transition = vec![T::zero(); g.edges().len()];
        let mut stationary = vec![T::zero(); g.vertex_count()];
        let share = T::one() / T::from_usize(cycle.len()).expect("representable");
        for &e in cycle {
            transition[e] = T::one();
            let src = g.edges()[e].src;
            if stationary[src] > T::zero() {
                return Err(Error::InvalidSpec("cycle revisits a vertex".into()));
            }
            stationary[src] = share;
        }
        Self::new(blocks, transition, stationary)
    }

    pub fn blocks(&self) -> &BlockGraph {
        &self.blocks
    }

    pub fn transition(&self) -> &[T] {
        &self.transition
    }

    pub fn stationary(&self) -> &[T] {
        &self.stationary
    }

    /// Largest entry of `|pi P - pi|`.
    pub fn stationarity_residual(&self) -> T {
        let g = self.blocks.graph();
        let mut next = vec![T::zero(); g.vertex_count()];
        for (e, edge) in g.edges().iter().enumerate() {
            next[edge.dst] = next[edge.dst] + self.stationary[edge.src] * self.transition[e];
        }
        next.iter().zip(&self.stationary).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max)
    }

    /// Mass of the cylinder of `w`.
    pub fn cylinder_mass(&self, w: &[Symbol]) -> T {
        let k = self.blocks.q() - 1;
        if w.len() < k {
            return self
                .blocks
                .vertices()
                .iter()
                .zip(&self.stationary)
                .filter(|(v, _)| v.starts_with(w))
                .map(|(_, p)| *p)
                .sum();
        }
        let Some(v) = self.blocks.vertex(&w[..k]) else { return T::zero() };
        let mut mass = self.stationary[v];
        for end in k + 1..=w.len() {
            match self.blocks.edge(&w[end - k - 1..end]) {
                Some(e) => mass = mass * self.transition[e],
                None => return T::zero(),
            }
        }
        mass
    }

    /// Integral of a potential whose range fits the block length.
    pub fn integral(&self, potential: &LocallyConstantPotential<T>) -> Result<T> {
        let weights = self.blocks.weights(potential)?;
        let g = self.blocks.graph();
        Ok(g.edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                let p = self.stationary[edge.src] * self.transition[e];
                if p > T::zero() {
                    p * weights[e]
                } else {
                    T::zero()
                }
            })
            .sum())
    }

    /// Words of length `n` with positive mass, in lexicographic order.
    pub fn support_words(&self, n: usize) -> Vec<Word> {
        self.support_with_mass(n).into_iter().map(|(w, _)| w).collect()
    }

    /// Words of length `n` with positive mass and their masses, in
    /// lexicographic order.
    pub fn support_with_mass(&self, n: usize) -> Vec<(Word, T)> {
        let k = self.blocks.q() - 1;
        let g = self.blocks.graph();
        let symbols: Vec<Symbol> = self.blocks.alphabet().symbols().collect();
        let mut out = Vec::new();
        let mut stack = vec![(Word::empty(), T::one())];
        while let Some((w, mass)) = stack.pop() {
            if mass <= T::zero() {
                continue;
            }
            if w.len() == n {
                out.push((w, mass));
                continue;
            }
            if w.len() < k {
                for &a in symbols.iter().rev() {
                    let next = w.concat(&[a]);
                    let m = self.cylinder_mass(&next);
                    stack.push((next, m));
                }
                continue;
            }
            let v = self.blocks.vertex(&w[w.len() - k..]).expect("supported words end in a vertex");
            for &e in g.out_edges(v).iter().rev() {
                let a = self.blocks.edge_words()[e][k];
                stack.push((w.concat(&[a]), mass * self.transition[e]));
            }
        }
        out
    }

    pub fn summary(&self) -> MeasureSummary {
        let g = self.blocks.graph();
        MeasureSummary {
            entropy: measure_entropy(self).to_f64_lossy(),
            stationarity_residual: self.stationarity_residual().to_f64_lossy(),
            support_vertices: self.stationary.iter().filter(|p| **p > T::zero()).count(),
            transitions: g
                .edges()
                .iter()
                .enumerate()
                .filter(|(e, edge)| self.stationary[edge.src] > T::zero() && self.transition[*e] > T::zero())
                .map(|(e, _)| (self.blocks.edge_words()[e].to_string(), self.transition[e].to_f64_lossy()))
                .collect(),
            stationary: self
                .blocks
                .vertices()
                .iter()
                .zip(&self.stationary)
                .filter(|(_, p)| **p > T::zero())
                .map(|(v, p)| (v.to_string(), p.to_f64_lossy()))
                .collect(),
        }
    }
}

/// Entropy `-sum_v pi(v) sum_e p(e) log p(e)`.
pub fn measure_entropy<T: Real>(mu: &MarkovMeasure<T>) -> T {
    let g = mu.blocks.graph();
    let mut h = T::zero();
    for (e, edge) in g.edges().iter().enumerate() {
        let p = mu.transition[e];
        if p > T::zero() && mu.stationary[edge.src] > T::zero() {
            h = h - mu.stationary[edge.src] * p * p.ln();
        }
    }
    h.max(T::zero())
}

/// The dominant irreducible piece of the transfer matrix of `beta * phi`.
pub(crate) struct Transfer<T> {
    /// Edge weights `exp(beta phi - shift)`, gauged by a coboundary.
    pub weights: Vec<T>,
    pub shift: T,
    pub component: Vec<usize>,
    pub right: Perron<T>,
    pub left: Perron<T>,
    /// Another component whose root ties with the dominant one.
    pub tied: bool,
}

impl<T: Real> Transfer<T> {
    pub fn log_pressure(&self) -> T {
        self.shift + self.right.rho.ln()
    }
}

pub(crate) fn transfer<T: Real>(
    blocks: &BlockGraph,
    potential: &LocallyConstantPotential<T>,
    beta: T,
) -> Result<Transfer<T>> {
    let scaled: Vec<T> = blocks.weights(potential)?.into_iter().map(|v| beta * v).collect();
    if scaled.is_empty() {
        return Err(Error::NoCycle);
    }
    let g = blocks.graph();
    // Gauge by longest-path potentials so optimal cycles carry weight 1 and
    // nothing on them underflows at large beta.
    let shift = karp(g, &scaled)?;
    let h = cycle_potentials(g, &scaled, &shift);
    let gauged: Vec<T> =
        g.edges().iter().zip(&scaled).map(|(edge, &s)| (s - shift + h[edge.src] - h[edge.dst]).exp()).collect();
    // Edges far below the optimal cycles can starve the Perron vectors into
    // underflow; they are pruned in steps until both vectors stay positive.
    let mut last = Error::NoCycle;
    for cutoff in [0.0, 1e-300, 1e-250, 1e-200, 1e-150, 1e-100, 1e-50] {
        let cutoff = T::from_f64(cutoff).unwrap_or_else(T::zero);
        let weights: Vec<T> = gauged.iter().map(|&w| if w > cutoff { w } else { T::zero() }).collect();
        match dominant(g, &weights) {
            Ok((component, right, left, tied)) => return Ok(Transfer { weights, shift, component, right, left, tied }),
            Err(e @ Error::NonConvergence(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

type Dominant<T> = (Vec<usize>, Perron<T>, Perron<T>, bool);

fn dominant<T: Real>(g: &Digraph, weights: &[T]) -> Result<Dominant<T>> {
    let live: Vec<usize> = (0..weights.len()).filter(|&e| weights[e] > T::zero()).collect();
    let positive = g.with_edges(&live);
    let mut best: Option<(Vec<usize>, Perron<T>)> = None;
    let mut tied = false;
    let tie = T::from_f64(TIE).expect("representable");
    for comp in positive.cyclic_sccs() {
        let p = component_perron(&positive, &live, weights, &comp, false)?;
        match &best {
            Some((_, b)) if (p.rho - b.rho).abs() <= tie * b.rho => tied = true,
            Some((_, b)) if p.rho < b.rho => {}
            _ => {
                tied = false;
                best = Some((comp, p));
            }
        }
    }
    let (component, right) = best.ok_or(Error::NoCycle)?;
    let left = component_perron(&positive, &live, weights, &component, true)?;
    Ok((component, right, left, tied))
}

/// Perron data of one component, indexed by the component's vertex order;
/// `left` transposes the matrix.
fn component_perron<T: Real>(
    positive: &Digraph,
    live: &[usize],
    weights: &[T],
    comp: &[usize],
    left: bool,
) -> Result<Perron<T>> {
    let (sub, origin) = positive.induced(comp);
    let entries: Vec<(usize, usize, T)> = sub
        .edges()
        .iter()
        .zip(&origin)
        .map(|(e, &i)| {
            let w = weights[live[i]];
            if left {
                (e.dst, e.src, w)
            } else {
                (e.src, e.dst, w)
            }
        })
        .collect();
    perron_irreducible(comp.len(), &entries, PERRON_TOL)
}

/// Gibbs–Markov measure of `beta * phi` on the dominant component:
/// `p(e) = w(e) r(dst) / (rho r(src))` and `pi = l r` normalized.
pub fn equilibrium_markov<T: Real>(
    blocks: &BlockGraph,
    potential: &LocallyConstantPotential<T>,
    beta: T,
) -> Result<MarkovMeasure<T>> {
    let t = transfer(blocks, potential, beta)?;
    if t.tied {
        return Err(Error::Reducible("two components share the largest Perron root".into()));
    }
    let g = blocks.graph();
    let mut r = vec![T::zero(); g.vertex_count()];
    let mut l = vec![T::zero(); g.vertex_count()];
    for (k, &v) in t.component.iter().enumerate() {
        r[v] = t.right.vector[k];
        l[v] = t.left.vector[k];
    }
    let rho = t.right.rho;
    let mut transition = vec![T::zero(); g.edges().len()];
    for v in 0..g.vertex_count() {
        let out = g.out_edges(v);
        if r[v] > T::zero() {
            // Normalize each row exactly to absorb the eigenvalue error.
            let raw: Vec<T> = out.iter().map(|&e| t.weights[e] * r[g.edges()[e].dst] / (rho * r[v])).collect();
            let total: T = raw.iter().copied().sum();
            for (&e, p) in out.iter().zip(raw) {
                transition[e] = p / total;
            }
        } else if !out.is_empty() {
            let share = T::one() / T::from_usize(out.len()).expect("representable");
            for &e in out {
                transition[e] = share;
            }
        }
    }
    let mut stationary: Vec<T> = l.iter().zip(&r).map(|(a, b)| *a * *b).collect();
    let total: T = stationary.iter().copied().sum();
    stationary.iter_mut().for_each(|p| *p = *p / total);
    // One power step on the stationary vector removes the left-vector error.
    let mut refined = vec![T::zero(); g.vertex_count()];
    for (e, edge) in g.edges().iter().enumerate() {
        refined[edge.dst] = refined[edge.dst] + stationary[edge.src] * transition[e];
    }
    let total: T = refined.iter().copied().sum();
    refined.iter_mut().for_each(|p| *p = *p / total);
    MarkovMeasure::new(blocks.clone(), transition, refined)
}
