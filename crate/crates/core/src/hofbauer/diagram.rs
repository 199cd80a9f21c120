use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{adjacency_radius, Digraph};
use crate::lang::{LanguageOracle, State, WordAutomaton, UNBOUNDED};
use crate::scalar::Scalar;
use crate::word::{Alphabet, Symbol};

use super::map::PiecewiseMonotoneMap;

/// Follower set represented by the open interval of points it codes.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex<S> {
    pub symbol: Symbol,
    pub lo: S,
    pub hi: S,
    /// Least `n` with the vertex in the `n`-th level set.
    pub level: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DiagramEdge {
    pub src: usize,
    pub label: Symbol,
    pub dst: usize,
}

/// Truncated Markov diagram of a piecewise monotone map.
///
/// Vertices of level `depth` (the frontier) carry their edges into already
/// known vertices; successors that would be new are recorded in `leaks`.
#[derive(Debug, Clone)]
pub struct MarkovDiagram<S> {
    map: PiecewiseMonotoneMap<S>,
    vertices: Vec<Vertex<S>>,
    edges: Vec<DiagramEdge>,
    /// `out[v][j - 1]`: successor of `v` with symbol `j`.
    out: Vec<Vec<Option<usize>>>,
    leaks: Vec<bool>,
    depth: usize,
    steps: usize,
    complete: bool,
}

impl<S: Scalar> MarkovDiagram<S> {
    pub fn map(&self) -> &PiecewiseMonotoneMap<S> {
        &self.map
    }

    pub fn vertices(&self) -> &[Vertex<S>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[DiagramEdge] {
        &self.edges
    }

    /// The `n` of the last level set built; when complete, the least `n`
    /// with level set `n + 1` equal to level set `n`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Recursion steps performed.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    /// Vertices with a successor outside the truncation.
    pub fn leaks(&self) -> &[bool] {
        &self.leaks
    }

    pub fn successor(&self, v: usize, j: Symbol) -> Option<usize> {
        self.out[v].get(j as usize - 1).copied().flatten()
    }

    pub fn graph(&self) -> Digraph {
        Digraph::from_triples(
            self.vertices.len(),
            &self.edges.iter().map(|e| (e.src, e.label as u32, e.dst)).collect::<Vec<_>>(),
        )
    }

    /// Number of vertices in each level set `0..=depth`.
    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.depth).map(|n| self.vertices.iter().filter(|v| v.level <= n).count()).collect()
    }

    /// The `(src label dst)` edge list followed by the `id symbol lo hi`
    /// vertex table.
    pub fn export(&self) -> (String, String) {
        let mut edges = String::new();
        for e in &self.edges {
            writeln!(edges, "{} {} {}", e.src, e.label, e.dst).expect("writing to a string");
        }
        let mut table = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(table, "{} {} {} {}", i, v.symbol, v.lo, v.hi).expect("writing to a string");
        }
        (edges, table)
    }

    /// Words read along paths starting in the level-zero set.
    pub fn language(&self) -> DiagramLanguage<'_, S> {
        DiagramLanguage { diagram: self }
    }

    fn find(&self, symbol: Symbol, lo: &S, hi: &S) -> Result<Option<usize>> {
        for (i, v) in self.vertices.iter().enumerate() {
            if v.symbol != symbol {
                continue;
            }
            if v.lo.same(lo) && v.hi.same(hi) {
                return Ok(Some(i));
            }
            if v.lo.ambiguous(lo) || v.hi.ambiguous(hi) {
                let (a, b) = if v.lo.ambiguous(lo) { (&v.lo, lo) } else { (&v.hi, hi) };
                return Err(Error::ToleranceCollision(a.to_f64_lossy(), b.to_f64_lossy()));
            }
        }
        Ok(None)
    }

    /// Successor intervals of `v`, one per symbol whose domain meets the image.
    fn successors(&self, v: usize) -> Result<Vec<(Symbol, S, S)>> {
        let vert = &self.vertices[v];
        let branch = &self.map.branches()[vert.symbol as usize - 1];
        let (a, b) = branch.image(&vert.lo, &vert.hi);
        let mut out = Vec::new();
        for (i, dom) in self.map.branches().iter().enumerate() {
            let lo = S::max_of(a.clone(), dom.lo.clone());
            let hi = S::min_of(b.clone(), dom.hi.clone());
            if lo.ambiguous(&hi) {
                return Err(Error::ToleranceCollision(lo.to_f64_lossy(), hi.to_f64_lossy()));
            }
            if lo < hi && !lo.same(&hi) {
                out.push((i as Symbol + 1, lo, hi));
            }
        }
        Ok(out)
    }
}

/// Build the diagram by running the level recursion at most `max_depth`
/// times, stopping early at a fixpoint.
pub fn build_diagram<S: Scalar>(map: &PiecewiseMonotoneMap<S>, max_depth: usize) -> Result<MarkovDiagram<S>> {
    let k = map.branches().len();
    let mut d = MarkovDiagram {
        map: map.clone(),
        vertices: map
            .branches()
            .iter()
            .enumerate()
            .map(|(i, b)| Vertex { symbol: i as Symbol + 1, lo: b.lo.clone(), hi: b.hi.clone(), level: 0 })
            .collect(),
        edges: Vec::new(),
        out: vec![vec![None; k]; k],
        leaks: vec![false; k],
        depth: 0,
        steps: 0,
        complete: false,
    };
    let mut frontier: Vec<usize> = (0..k).collect();
    for step in 1..=max_depth {
        let mut fresh = Vec::new();
        for &v in &frontier {
            for (j, lo, hi) in d.successors(v)? {
                let dst = match d.find(j, &lo, &hi)? {
                    Some(i) => i,
                    None => {
                        d.vertices.push(Vertex { symbol: j, lo, hi, level: step });
                        d.out.push(vec![None; k]);
                        d.leaks.push(false);
                        fresh.push(d.vertices.len() - 1);
                        d.vertices.len() - 1
                    }
                };
                d.out[v][j as usize - 1] = Some(dst);
                d.edges.push(DiagramEdge { src: v, label: j, dst });
            }
        }
        d.steps = step;
        if fresh.is_empty() {
            d.complete = true;
            d.depth = step - 1;
            d.edges.sort();
            return Ok(d);
        }
        d.depth = step;
        frontier = fresh;
    }
    // Frontier rule: keep edges of the last level into known vertices.
    for &v in &frontier {
        for (j, lo, hi) in d.successors(v)? {
            match d.find(j, &lo, &hi)? {
                Some(dst) => {
                    d.out[v][j as usize - 1] = Some(dst);
                    d.edges.push(DiagramEdge { src: v, label: j, dst });
                }
                None => d.leaks[v] = true,
            }
        }
    }
    d.edges.sort();
    Ok(d)
}

/// Language of a diagram: exact at every length when the diagram is
/// complete, and up to `depth + 1` otherwise.
pub struct DiagramLanguage<'a, S> {
    diagram: &'a MarkovDiagram<S>,
}

impl<S: Scalar> WordAutomaton for DiagramLanguage<'_, S> {
    fn alphabet(&self) -> Alphabet {
        self.diagram.map.alphabet()
    }
    fn start(&self) -> State {
        Vec::new()
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        match state.first() {
            None => Some(vec![symbol as u32 - 1]),
            Some(&v) => self.diagram.successor(v as usize, symbol).map(|d| vec![d as u32]),
        }
    }
}

impl<S: Scalar> LanguageOracle for DiagramLanguage<'_, S> {
    fn horizon(&self) -> usize {
        if self.diagram.complete {
            UNBOUNDED
        } else {
            self.diagram.depth + 1
        }
    }
    fn describe(&self) -> String {
        format!("map:{}", self.diagram.map.describe())
    }
}

/// Irreducible component chosen from a truncated diagram.
#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub perron: f64,
    /// Some member has successors beyond the truncation.
    pub leaks: bool,
}

/// The successor-closed cyclic component with the largest Perron root
/// (ties go to the component with the least vertex).
pub fn closed_component(graph: &Digraph) -> Result<Component> {
    let comps = graph.cyclic_sccs();
    let mut id = vec![usize::MAX; graph.vertex_count()];
    for (k, c) in comps.iter().enumerate() {
        for &v in c {
            id[v] = k;
        }
    }
    let mut best: Option<Component> = None;
    for (k, comp) in comps.iter().enumerate() {
        let closed = comp.iter().all(|&v| graph.out_edges(v).iter().all(|&e| id[graph.edges()[e].dst] == k));
        if !closed {
            continue;
        }
        let (sub, _) = graph.induced(comp);
        let rho = adjacency_radius(&sub)?.rho;
        if best.as_ref().is_none_or(|b| rho > b.perron + 1e-12) {
            best = Some(Component { vertices: comp.clone(), perron: rho, leaks: false });
        }
    }
    best.ok_or(Error::NoComponent)
}

impl<S: Scalar> MarkovDiagram<S> {
    pub fn closed_component(&self) -> Result<Component> {
        let mut c = closed_component(&self.graph())?;
        c.leaks = c.vertices.iter().any(|&v| self.leaks[v]);
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::perron_entropy;
    use crate::lang::{enumerate_words, is_word};
    use crate::scalar::Scalar;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    fn golden() -> PiecewiseMonotoneMap<f64> {
        PiecewiseMonotoneMap::alpha_beta(0.0, (1.0 + 5f64.sqrt()) / 2.0).unwrap()
    }

    #[test]
    fn doubling_diagram() {
        let t = PiecewiseMonotoneMap::alpha_beta(q(0, 1), q(2, 1)).unwrap();
        let d = build_diagram(&t, 10).unwrap();
        assert!(d.complete());
        assert_eq!(d.vertices().len(), 2);
        assert_eq!((d.depth(), d.steps()), (0, 1));
        assert_eq!(d.edges().len(), 4);
        let c = d.closed_component().unwrap();
        assert_eq!(c.vertices, vec![0, 1]);
        assert!((c.perron - 2.0).abs() < 1e-11);
    }

    #[test]
    fn golden_diagram() {
        let d = build_diagram(&golden(), 10).unwrap();
        assert!(d.complete());
        assert_eq!(d.vertices().len(), 2);
        let h = perron_entropy(&d.graph()).unwrap().value;
        assert!((h - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-9);
        let lang = d.language();
        assert!(!is_word(&lang, &[2, 2]).unwrap());
        assert!(is_word(&lang, &[2, 1, 2, 1, 1]).unwrap());
    }

    #[test]
    fn shifted_doubling_closes_up() {
        let t = PiecewiseMonotoneMap::alpha_beta(q(3, 10), q(2, 1)).unwrap();
        let d = build_diagram(&t, 10).unwrap();
        assert!(d.complete());
        assert_eq!(d.level_sizes(), vec![3, 5, 7, 9, 11]);
    }

    #[test]
    fn beta_diagram_keeps_growing() {
        let t = PiecewiseMonotoneMap::alpha_beta(q(0, 1), q(9, 5)).unwrap();
        let d = build_diagram(&t, 10).unwrap();
        assert!(!d.complete());
        let sizes = d.level_sizes();
        assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
        assert_eq!(d.language().horizon(), 11);
    }

    #[test]
    fn exact_and_float_agree() {
        let exact = build_diagram(&PiecewiseMonotoneMap::alpha_beta(q(1, 5), q(5, 2)).unwrap(), 8).unwrap();
        let float = build_diagram(&PiecewiseMonotoneMap::alpha_beta(0.2, 2.5).unwrap(), 8).unwrap();
        assert_eq!(exact.vertices().len(), float.vertices().len());
        assert_eq!(exact.edges(), float.edges());
        assert_eq!(exact.complete(), float.complete());
    }

    #[test]
    fn edges_are_sound() {
        let t = PiecewiseMonotoneMap::neg_beta(q(9, 5)).unwrap();
        let d = build_diagram(&t, 12).unwrap();
        for e in d.edges() {
            let src = &d.vertices()[e.src];
            let dst = &d.vertices()[e.dst];
            let b = &t.branches()[src.symbol as usize - 1];
            let (a, c) = b.image(&src.lo, &src.hi);
            let dom = &t.branches()[e.label as usize - 1];
            assert_eq!(dst.symbol, e.label);
            assert_eq!(dst.lo, BigRational::max_of(a, dom.lo.clone()));
            assert_eq!(dst.hi, BigRational::min_of(c, dom.hi.clone()));
        }
    }

    #[test]
    fn language_matches_cylinders() {
        for t in [
            PiecewiseMonotoneMap::neg_beta(q(9, 5)).unwrap(),
            PiecewiseMonotoneMap::alpha_beta(q(3, 10), q(2, 1)).unwrap(),
            PiecewiseMonotoneMap::alpha_beta(q(0, 1), q(9, 5)).unwrap(),
        ] {
            let d = build_diagram(&t, 9).unwrap();
            let lang = d.language();
            for n in 1..=8 {
                let words = enumerate_words(&lang, n).unwrap();
                for w in &words {
                    assert!(t.cylinder(w).is_some(), "{w} has an empty cylinder");
                }
                let all = crate::lang::enumerate_accepted(&crate::zoo::FullShift::new(t.branches().len()).unwrap(), n);
                let realized = all.iter().filter(|w| t.cylinder(w).is_some()).count();
                assert_eq!(realized, words.len());
            }
        }
    }

    #[test]
    fn closed_component_prefers_larger_sink() {
        // {0} has one loop and feeds the sink {1, 2}, which carries two loops per vertex.
        let g = Digraph::from_triples(3, &[(0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 2, 2), (2, 1, 1), (2, 2, 2)]);
        assert_eq!(closed_component(&g).unwrap().vertices, vec![1, 2]);
        let acyclic = Digraph::from_triples(2, &[(0, 1, 1)]);
        assert_eq!(closed_component(&acyclic).unwrap_err(), Error::NoComponent);
    }

    #[test]
    fn export_formats() {
        let d = build_diagram(&golden(), 5).unwrap();
        let (edges, table) = d.export();
        assert_eq!(edges.lines().count(), 3);
        assert_eq!(table.lines().count(), 2);
        assert!(edges.lines().all(|l| l.split(' ').count() == 3));
    }
}
