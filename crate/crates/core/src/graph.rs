//! Finite labelled digraphs, strongly connected components and Perron roots.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::StateGraph;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: u32,
}

/// Directed multigraph on vertices `0..n` with labelled edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Digraph {
    n: usize,
    edges: Vec<Edge>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Self {
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            assert!(e.src < n && e.dst < n, "edge {e:?} outside 0..{n}");
            out[e.src].push(i);
        }
        Self { n, edges, out }
    }

    pub fn from_triples(n: usize, triples: &[(usize, u32, usize)]) -> Self {
        Self::new(n, triples.iter().map(|&(src, label, dst)| Edge { src, dst, label }).collect())
    }

    pub fn from_state_graph(g: &StateGraph) -> Self {
        Self::new(g.states.len(), g.edges.iter().map(|&(src, a, dst)| Edge { src, dst, label: a as u32 }).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Indices into [`Digraph::edges`] of the edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Strongly connected components, each sorted, listed by least vertex.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.n, self.edges.len());
        let nodes: Vec<_> = (0..self.n).map(|_| g.add_node(())).collect();
        for e in &self.edges {
            g.add_edge(nodes[e.src], nodes[e.dst], ());
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Components that carry at least one edge, hence a cycle.
    pub fn cyclic_sccs(&self) -> Vec<Vec<usize>> {
        let comps = self.sccs();
        let mut id = vec![usize::MAX; self.n];
        for (k, c) in comps.iter().enumerate() {
            for &v in c {
                id[v] = k;
            }
        }
        let mut cyclic = vec![false; comps.len()];
        for e in &self.edges {
            if id[e.src] == id[e.dst] {
                cyclic[id[e.src]] = true;
            }
        }
        comps.into_iter().zip(cyclic).filter(|(_, c)| *c).map(|(v, _)| v).collect()
    }

    pub fn has_cycle(&self) -> bool {
        !self.cyclic_sccs().is_empty()
    }

    /// One strongly connected component covering every vertex, with an edge.
    pub fn is_irreducible(&self) -> bool {
        let c = self.cyclic_sccs();
        c.len() == 1 && c[0].len() == self.n
    }

    /// Subgraph on `keep` (in the given order) with the edges inside it.
    /// Returns the subgraph and, for each of its edges, the original index.
    pub fn induced(&self, keep: &[usize]) -> (Digraph, Vec<usize>) {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if pos[e.src] != usize::MAX && pos[e.dst] != usize::MAX {
                edges.push(Edge { src: pos[e.src], dst: pos[e.dst], label: e.label });
                origin.push(i);
            }
        }
        (Digraph::new(keep.len(), edges), origin)
    }

    /// Subgraph keeping every vertex but only the selected edges.
    pub fn with_edges(&self, keep: &[usize]) -> Digraph {
        Digraph::new(self.n, keep.iter().map(|&i| self.edges[i]).collect())
    }
}

/// Perron root with Collatz–Wielandt brackets and the positive eigenvector.
#[derive(Debug, Clone, Serialize)]
pub struct Perron<T> {
    pub rho: T,
    pub lower: T,
    pub upper: T,
    pub vector: Vec<T>,
    pub iterations: usize,
}

pub const PERRON_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 1_000_000;

/// Power iteration on `shift * I + A` for an irreducible nonnegative matrix
/// given as weighted edges. The shift removes periodicity and tracks the
/// current upper bracket, so it stays comparable to the root even when the
/// entries are spread over many orders of magnitude.
pub fn perron_irreducible<T: Real>(n: usize, entries: &[(usize, usize, T)], tol: f64) -> Result<Perron<T>> {
    if n == 0 || entries.is_empty() {
        return Err(Error::NoCycle);
    }
    let mut shift = entries.iter().map(|e| e.2).fold(T::zero(), T::max);
    if shift <= T::zero() {
        return Err(Error::NoCycle);
    }
    let tol = T::from_f64(tol).expect("tolerance is representable");
    let mut v = vec![T::one(); n];
    let mut w = vec![T::zero(); n];
    for it in 1..=MAX_ITERATIONS {
        w.iter_mut().zip(&v).for_each(|(wi, &vi)| *wi = shift * vi);
        for &(i, j, a) in entries {
            w[i] = w[i] + a * v[j];
        }
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for (wi, vi) in w.iter().zip(&v) {
            let r = *wi / *vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let lower = (lo - shift).max(T::zero());
        let upper = hi - shift;
        let top = w.iter().copied().fold(T::zero(), T::max);
        v.iter_mut().zip(&w).for_each(|(vi, &wi)| *vi = wi / top);
        if v.iter().any(|x| *x <= T::zero() || !x.is_finite()) {
            return Err(Error::NonConvergence("Perron vector lost positivity".into()));
        }
        if upper - lower <= tol * upper.max(T::min_positive_value()) {
            let rho = (lower + upper) / (T::one() + T::one());
            return Ok(Perron { rho, lower, upper, vector: v, iterations: it });
        }
        if upper > T::zero() {
            shift = upper;
        }
    }
    Err(Error::NonConvergence(format!("power iteration exceeded {MAX_ITERATIONS} steps")))
}

/// Spectral radius of a weighted digraph: the largest Perron root over its
/// cyclic strongly connected components. The vector is that of the
/// maximizing component, extended by zero.
pub fn spectral_radius<T: Real>(graph: &Digraph, weights: &[T], tol: f64) -> Result<Perron<T>> {
    assert_eq!(weights.len(), graph.edges().len());
    let mut best: Option<Perron<T>> = None;
    for comp in graph.cyclic_sccs() {
        let (sub, origin) = graph.induced(&comp);
        let entries: Vec<(usize, usize, T)> =
            sub.edges().iter().zip(&origin).map(|(e, &i)| (e.src, e.dst, weights[i])).collect();
        let entries: Vec<_> = entries.into_iter().filter(|e| e.2 > T::zero()).collect();
        if entries.is_empty() {
            continue;
        }
        let mut p = match perron_irreducible(comp.len(), &entries, tol) {
            Ok(p) => p,
            Err(Error::NoCycle) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| p.rho > b.rho) {
            let mut full = vec![T::zero(); graph.vertex_count()];
            for (k, &v) in comp.iter().enumerate() {
                full[v] = p.vector[k];
            }
            p.vector = full;
            best = Some(p);
        }
    }
    best.ok_or(Error::NoCycle)
}

/// Unweighted spectral radius (number of paths growth rate).
pub fn adjacency_radius(graph: &Digraph) -> Result<Perron<f64>> {
    spectral_radius(graph, &vec![1.0; graph.edges().len()], PERRON_TOL)
}
