use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::scalar::Scalar;

/// Maximum mean weight of a cycle.
///
/// Karp's recurrence with every vertex as a source: `d[k][v]` is the
/// heaviest walk of exactly `k` edges ending at `v`, and the answer is
/// `max_v min_k (d[n][v] - d[k][v]) / (n - k)`.
pub fn karp<T: Scalar>(graph: &Digraph, weights: &[T]) -> Result<T> {
    assert_eq!(weights.len(), graph.edges().len(), "one weight per edge");
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::NoCycle);
    }
    let mut d: Vec<Vec<Option<T>>> = vec![vec![Some(T::zero()); n]];
    for k in 1..=n {
        let mut next: Vec<Option<T>> = vec![None; n];
        for (e, edge) in graph.edges().iter().enumerate() {
            let Some(x) = &d[k - 1][edge.src] else { continue };
            let cand = x.clone() + weights[e].clone();
            if next[edge.dst].as_ref().is_none_or(|y| cand > *y) {
                next[edge.dst] = Some(cand);
            }
        }
        d.push(next);
    }
    let mut best: Option<T> = None;
    for (v, top) in d[n].iter().enumerate() {
        let Some(top) = top else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].as_ref().map(|x| (top.clone() - x.clone()) / T::from_usize_lossy(n - k)))
            .reduce(T::min_of);
        if let Some(w) = worst {
            best = Some(match best {
                Some(b) => T::max_of(b, w),
                None => w,
            });
        }
    }
    best.ok_or(Error::NoCycle)
}

/// Edges lying on some cycle of mean `value`, the maximum cycle mean.
///
/// Longest-path potentials for `w - value` certify every edge of slack zero;
/// every cycle of the resulting subgraph is optimal and every optimal cycle
/// lies in it.
pub fn tight_edges<T: Scalar>(graph: &Digraph, weights: &[T], value: &T) -> Vec<usize> {
    let n = graph.vertex_count();
    let h = cycle_potentials(graph, weights, value);
    let scale = weights.iter().map(|w| w.abs().to_f64_lossy()).fold(1.0, f64::max);
    let tol = T::from_f64(T::tolerance() * scale * (n as f64 + 1.0)).unwrap_or_else(T::zero);
    let tight: Vec<usize> = (0..graph.edges().len())
        .filter(|&e| {
            let edge = graph.edges()[e];
            let slack = h[edge.dst].clone() - (h[edge.src].clone() + weights[e].clone() - value.clone());
            slack <= tol
        })
        .collect();
    on_cycles(graph, &tight)
}

/// Longest-path potentials `h` for `w - value`, so that
/// `h[dst] >= h[src] + w(e) - value` on every edge once `value` is the
/// maximum cycle mean.
pub(crate) fn cycle_potentials<T: Scalar>(graph: &Digraph, weights: &[T], value: &T) -> Vec<T> {
    let mut h = vec![T::zero(); graph.vertex_count()];
    for _ in 0..graph.vertex_count() {
        let mut changed = false;
        for (e, edge) in graph.edges().iter().enumerate() {
            let cand = h[edge.src].clone() + weights[e].clone() - value.clone();
            if cand > h[edge.dst] {
                h[edge.dst] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    h
}

/// The subset of `edges` inside cyclic components of the subgraph they form.
fn on_cycles(graph: &Digraph, edges: &[usize]) -> Vec<usize> {
    let sub = graph.with_edges(edges);
    let mut id = vec![usize::MAX; graph.vertex_count()];
    for (k, c) in sub.cyclic_sccs().iter().enumerate() {
        for &v in c {
            id[v] = k;
        }
    }
    edges
        .iter()
        .copied()
        .filter(|&e| {
            let edge = graph.edges()[e];
            id[edge.src] != usize::MAX && id[edge.src] == id[edge.dst]
        })
        .collect()
}

/// Shortest cycle within `edges`, ties broken by the lexicographically least
/// edge sequence, which starts at its least edge index.
pub fn least_cycle(graph: &Digraph, edges: &[usize]) -> Option<Vec<usize>> {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for (i, &e0) in sorted.iter().enumerate() {
        let allowed = &sorted[i + 1..];
        let edge = graph.edges()[e0];
        let dist = distances_to(graph, allowed, edge.src);
        let Some(d) = dist[edge.dst] else { continue };
        if best.as_ref().is_some_and(|b| b.0 <= d + 1) {
            continue;
        }
        best = Some((d + 1, e0, dist.iter().map(|x| x.unwrap_or(usize::MAX)).collect()));
    }
    let (len, e0, dist) = best?;
    let i = sorted.binary_search(&e0).expect("present");
    let allowed: BTreeSet<usize> = sorted[i + 1..].iter().copied().collect();
    let mut cycle = vec![e0];
    let mut cur = graph.edges()[e0].dst;
    for rem in (1..len).rev() {
        let next = graph
            .out_edges(cur)
            .iter()
            .copied()
            .filter(|e| allowed.contains(e) && dist[graph.edges()[*e].dst] == rem - 1)
            .min()
            .expect("a shortest path continues");
        cycle.push(next);
        cur = graph.edges()[next].dst;
    }
    Some(cycle)
}

/// Breadth-first distances to `target` along `edges`.
fn distances_to(graph: &Digraph, edges: &[usize], target: usize) -> Vec<Option<usize>> {
    let mut incoming = vec![Vec::new(); graph.vertex_count()];
    for &e in edges {
        let edge = graph.edges()[e];
        incoming[edge.dst].push(edge.src);
    }
    let mut dist = vec![None; graph.vertex_count()];
    dist[target] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued vertices have a distance");
        for &u in &incoming[v] {
            if dist[u].is_none() {
                dist[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Every simple cycle within `edges`, each rotated to start at its least
/// edge index, sorted. `None` once more than `limit` are found.
pub fn simple_cycles(graph: &Digraph, edges: &[usize], limit: usize) -> Option<Vec<Vec<usize>>> {
    let allowed: BTreeSet<usize> = edges.iter().copied().collect();
    let n = graph.vertex_count();
    let mut out = Vec::new();
    for s in 0..n {
        let mut path = Vec::new();
        let mut on_path = vec![false; n];
        on_path[s] = true;
        if !dfs(graph, &allowed, s, s, &mut path, &mut on_path, &mut out, limit) {
            return None;
        }
    }
    for c in &mut out {
        let k = (0..c.len()).min_by_key(|&i| c[i]).expect("cycles are nonempty");
        c.rotate_left(k);
    }
    out.sort();
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    graph: &Digraph,
    allowed: &BTreeSet<usize>,
    start: usize,
    cur: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> bool {
    for &e in graph.out_edges(cur) {
        if !allowed.contains(&e) {
            continue;
        }
        let v = graph.edges()[e].dst;
        if v == start {
            path.push(e);
            out.push(path.clone());
            path.pop();
            if out.len() > limit {
                return false;
            }
        } else if v > start && !on_path[v] {
            on_path[v] = true;
            path.push(e);
            let ok = dfs(graph, allowed, start, v, path, on_path, out, limit);
            path.pop();
            on_path[v] = false;
            if !ok {
                return false;
            }
        }
    }
    true
}
