use crate::error::{Error, Result};
use crate::hofbauer::{Component, MarkovDiagram};
use crate::lang::{LanguageOracle, State, WordAutomaton, UNBOUNDED};
use crate::scalar::Scalar;
use crate::word::{Alphabet, Symbol};

use super::{Collection, Decomposition};

/// Decomposition of the words read along paths inside a closed component
/// of a Markov diagram, cut at level `N`. Words are read from paths that
/// start in the level-`N` set; the core runs between vertices of that set
/// and the suffix never returns to it.
pub struct DiagramDecomposition<'a, S> {
    diagram: &'a MarkovDiagram<S>,
    member: Vec<bool>,
    cut: usize,
    horizon: usize,
    lang: PathWords<'a, S>,
}

pub fn diagram_decomposition<'a, S: Scalar>(
    diagram: &'a MarkovDiagram<S>,
    component: &Component,
    cut: usize,
) -> Result<DiagramDecomposition<'a, S>> {
    if !diagram.complete() && cut > diagram.depth() {
        return Err(Error::InvalidSpec(format!("cut {cut} exceeds diagram depth {}", diagram.depth())));
    }
    let mut member = vec![false; diagram.vertices().len()];
    for &v in &component.vertices {
        member[v] = true;
    }
    let horizon = if diagram.complete() { UNBOUNDED } else { diagram.depth() - cut };
    let lang = PathWords { diagram, member: member.clone(), start: Start::FromCut, horizon, cut };
    Ok(DiagramDecomposition { diagram, member, cut, horizon, lang })
}

impl<S: Scalar> DiagramDecomposition<'_, S> {
    /// The diagram was cut off before reaching a fixpoint.
    pub fn truncated(&self) -> bool {
        !self.diagram.complete()
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    fn paths(&self, start: Start) -> PathWords<'_, S> {
        PathWords { diagram: self.diagram, member: self.member.clone(), start, horizon: self.horizon, cut: self.cut }
    }
}

impl<S: Scalar> Decomposition for DiagramDecomposition<'_, S> {
    fn language(&self) -> &dyn LanguageOracle {
        &self.lang
    }
    fn prefixes(&self) -> Collection<'_> {
        Box::new(EmptyOnly(self.diagram.map().alphabet()))
    }
    fn cores(&self) -> Collection<'_> {
        Box::new(self.paths(Start::Core))
    }
    fn suffixes(&self) -> Collection<'_> {
        Box::new(self.paths(Start::Escape))
    }
    fn describe(&self) -> String {
        format!("diagram:{}:cut={}", self.diagram.map().describe(), self.cut)
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Start {
    /// From the level-`N` set; every word accepted.
    FromCut,
    /// From and back to the level-`N` set.
    Core,
    /// First vertex outside the level-`N` set, never re-entering it.
    Escape,
}

/// Words of paths in the component, read through the subset construction.
/// The state is `[started, vertices...]`.
struct PathWords<'a, S> {
    diagram: &'a MarkovDiagram<S>,
    member: Vec<bool>,
    start: Start,
    horizon: usize,
    cut: usize,
}

impl<S: Scalar> PathWords<'_, S> {
    fn low(&self, v: usize) -> bool {
        self.diagram.vertices()[v].level <= self.cut
    }

    fn allowed(&self, v: usize, first: bool) -> bool {
        if !self.member[v] {
            return false;
        }
        match self.start {
            Start::FromCut | Start::Core => !first || self.low(v),
            Start::Escape => !self.low(v) && (!first || self.diagram.vertices()[v].level == self.cut + 1),
        }
    }
}

impl<S: Scalar> WordAutomaton for PathWords<'_, S> {
    fn alphabet(&self) -> Alphabet {
        self.diagram.map().alphabet()
    }
    fn start(&self) -> State {
        vec![0]
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        let mut next: Vec<u32> = if state[0] == 0 {
            (0..self.member.len())
                .filter(|&v| self.diagram.vertices()[v].symbol == symbol && self.allowed(v, true))
                .map(|v| v as u32)
                .collect()
        } else {
            state[1..]
                .iter()
                .filter_map(|&v| self.diagram.successor(v as usize, symbol))
                .filter(|&d| self.allowed(d, false))
                .map(|d| d as u32)
                .collect()
        };
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            return None;
        }
        let mut s = vec![1];
        s.extend(next);
        Some(s)
    }
    fn accepting(&self, state: &State) -> bool {
        match self.start {
            Start::Core => state[0] == 0 || state[1..].iter().any(|&v| self.low(v as usize)),
            _ => true,
        }
    }
}

impl<S: Scalar> LanguageOracle for PathWords<'_, S> {
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn describe(&self) -> String {
        format!("component-paths:{}", self.diagram.map().describe())
    }
}

struct EmptyOnly(Alphabet);

impl WordAutomaton for EmptyOnly {
    fn alphabet(&self) -> Alphabet {
        self.0
    }
    fn start(&self) -> State {
        Vec::new()
    }
    fn step(&self, _state: &State, _symbol: Symbol) -> Option<State> {
        None
    }
}
