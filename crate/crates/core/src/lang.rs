//! Language oracles and the word-level operations built on them.
//!
//! Every oracle in the crate is a deterministic automaton over opaque
//! states: [`WordAutomaton::step`] returns `None` once the word read so far
//! has left the collection's prefix closure. Languages of subshifts accept
//! every live state; decomposition collections use [`WordAutomaton::accepting`]
//! to single out their members.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Symbol, Word};
use crate::zoo::CodedShift;

/// Opaque automaton state. Equal states must have equal futures.
pub type State = Vec<u32>;

/// Horizon value for oracles that are exact at every length.
pub const UNBOUNDED: usize = usize::MAX;

pub trait WordAutomaton: Send + Sync {
    fn alphabet(&self) -> Alphabet;
    fn start(&self) -> State;
    fn step(&self, state: &State, symbol: Symbol) -> Option<State>;
    fn accepting(&self, _state: &State) -> bool {
        true
    }
}

/// A factorial, right-extendable language with an explicit exactness horizon.
pub trait LanguageOracle: WordAutomaton {
    fn horizon(&self) -> usize;

    /// The generating family, for oracles built from one.
    fn as_coded(&self) -> Option<&CodedShift> {
        None
    }

    fn describe(&self) -> String;
}

impl<T: WordAutomaton + ?Sized> WordAutomaton for Arc<T> {
    fn alphabet(&self) -> Alphabet {
        (**self).alphabet()
    }
    fn start(&self) -> State {
        (**self).start()
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        (**self).step(state, symbol)
    }
    fn accepting(&self, state: &State) -> bool {
        (**self).accepting(state)
    }
}

impl<T: LanguageOracle + ?Sized> LanguageOracle for Arc<T> {
    fn horizon(&self) -> usize {
        (**self).horizon()
    }
    fn as_coded(&self) -> Option<&CodedShift> {
        (**self).as_coded()
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// State reached after reading `w`, or `None` if `w` is rejected on the way.
pub fn run<A: WordAutomaton + ?Sized>(aut: &A, w: &[Symbol]) -> Option<State> {
    run_from(aut, aut.start(), w)
}

pub fn run_from<A: WordAutomaton + ?Sized>(aut: &A, state: State, w: &[Symbol]) -> Option<State> {
    let mut s = state;
    for &a in w {
        if !aut.alphabet().contains(a) {
            return None;
        }
        s = aut.step(&s, a)?;
    }
    Some(s)
}

pub fn accepts<A: WordAutomaton + ?Sized>(aut: &A, w: &[Symbol]) -> bool {
    run(aut, w).is_some_and(|s| aut.accepting(&s))
}

pub fn check_horizon<L: LanguageOracle + ?Sized>(lang: &L, n: usize) -> Result<()> {
    if n > lang.horizon() {
        Err(Error::HorizonExceeded { len: n, horizon: lang.horizon() })
    } else {
        Ok(())
    }
}

pub fn is_word<L: LanguageOracle + ?Sized>(lang: &L, w: &[Symbol]) -> Result<bool> {
    check_horizon(lang, w.len())?;
    Ok(accepts(lang, w))
}

pub fn enumerate_words<L: LanguageOracle + ?Sized>(lang: &L, n: usize) -> Result<Vec<Word>> {
    check_horizon(lang, n)?;
    Ok(enumerate_accepted(lang, n))
}

pub fn count_words<L: LanguageOracle + ?Sized>(lang: &L, n: usize) -> Result<BigUint> {
    check_horizon(lang, n)?;
    Ok(count_accepted(lang, n))
}

/// Word counts for every length `0..=n_max`.
pub fn count_profile<L: LanguageOracle + ?Sized>(lang: &L, n_max: usize) -> Result<Vec<BigUint>> {
    check_horizon(lang, n_max)?;
    Ok(accepted_profile(lang, n_max))
}

/// Count as a `u64`, failing with `Overflow` if it does not fit.
pub fn count_words_u64<L: LanguageOracle + ?Sized>(lang: &L, n: usize) -> Result<u64> {
    let c = count_words(lang, n)?;
    u64::try_from(&c).map_err(|_| Error::Overflow)
}

/// Accepted words of length `n` in lexicographic order.
pub fn enumerate_accepted<A: WordAutomaton + ?Sized>(aut: &A, n: usize) -> Vec<Word> {
    let start = aut.start();
    if n == 0 {
        return if aut.accepting(&start) { vec![Word::empty()] } else { Vec::new() };
    }
    let firsts: Vec<Symbol> = aut.alphabet().symbols().collect();
    firsts
        .par_iter()
        .map(|&a| {
            let mut out = Vec::new();
            if let Some(s) = aut.step(&start, a) {
                let mut prefix = vec![a];
                dfs(aut, &s, &mut prefix, n, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn dfs<A: WordAutomaton + ?Sized>(aut: &A, state: &State, prefix: &mut Vec<Symbol>, n: usize, out: &mut Vec<Word>) {
    if prefix.len() == n {
        if aut.accepting(state) {
            out.push(Word::from_slice(prefix));
        }
        return;
    }
    for a in aut.alphabet().symbols() {
        if let Some(next) = aut.step(state, a) {
            prefix.push(a);
            dfs(aut, &next, prefix, n, out);
            prefix.pop();
        }
    }
}

pub fn count_accepted<A: WordAutomaton + ?Sized>(aut: &A, n: usize) -> BigUint {
    accepted_profile(aut, n).pop().unwrap_or_default()
}

/// Number of accepted words of each length `0..=n_max`, by dynamic
/// programming over distinct states. Runs in `u64` and falls back to big
/// integers on overflow.
pub fn accepted_profile<A: WordAutomaton + ?Sized>(aut: &A, n_max: usize) -> Vec<BigUint> {
    match profile_with::<A, u64>(aut, n_max, |a, b| a.checked_add(*b)) {
        Some(v) => v.into_iter().map(BigUint::from).collect(),
        None => {
            profile_with::<A, BigUint>(aut, n_max, |a, b| Some(a + b)).expect("big integer arithmetic cannot overflow")
        }
    }
}

fn profile_with<A, C>(aut: &A, n_max: usize, add: impl Fn(&C, &C) -> Option<C>) -> Option<Vec<C>>
where
    A: WordAutomaton + ?Sized,
    C: Clone + Zero + One,
{
    let mut layer: HashMap<State, C> = HashMap::new();
    layer.insert(aut.start(), C::one());
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut total = C::zero();
        for (s, c) in &layer {
            if aut.accepting(s) {
                total = add(&total, c)?;
            }
        }
        out.push(total);
        if n == n_max {
            break;
        }
        let mut next: HashMap<State, C> = HashMap::with_capacity(layer.len());
        for (s, c) in &layer {
            for a in aut.alphabet().symbols() {
                if let Some(t) = aut.step(s, a) {
                    match next.get_mut(&t) {
                        Some(e) => *e = add(e, c)?,
                        None => {
                            next.insert(t, c.clone());
                        }
                    }
                }
            }
        }
        layer = next;
    }
    Some(out)
}

/// Reachable part of an automaton as an explicit labelled graph.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub states: Vec<State>,
    /// `(source, symbol, target)` triples.
    pub edges: Vec<(usize, Symbol, usize)>,
    pub start: usize,
}

/// Breadth-first exploration of every state reachable from the start.
pub fn explore<A: WordAutomaton + ?Sized>(aut: &A, max_states: usize) -> Result<StateGraph> {
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states = vec![aut.start()];
    index.insert(states[0].clone(), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for a in aut.alphabet().symbols() {
            let Some(t) = aut.step(&states[i], a) else { continue };
            let j = match index.get(&t) {
                Some(&j) => j,
                None => {
                    if states.len() >= max_states {
                        return Err(Error::StateLimit(max_states));
                    }
                    states.push(t.clone());
                    index.insert(t, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            edges.push((i, a, j));
        }
    }
    Ok(StateGraph { states, edges, start: 0 })
}

const DEAD: u32 = u32::MAX;

/// Encode a pair of optional states as one state.
pub(crate) fn pack_pair(a: Option<&State>, b: Option<&State>) -> State {
    let mut v = Vec::with_capacity(2 + a.map_or(0, Vec::len) + b.map_or(0, Vec::len));
    match a {
        Some(a) => {
            v.push(a.len() as u32);
            v.extend_from_slice(a);
        }
        None => v.push(DEAD),
    }
    match b {
        Some(b) => {
            v.push(b.len() as u32);
            v.extend_from_slice(b);
        }
        None => v.push(DEAD),
    }
    v
}

pub(crate) fn unpack_pair(s: &State) -> (Option<State>, Option<State>) {
    let (a, rest) = if s[0] == DEAD {
        (None, &s[1..])
    } else {
        let n = s[0] as usize;
        (Some(s[1..1 + n].to_vec()), &s[1 + n..])
    };
    let b = if rest[0] == DEAD { None } else { Some(rest[1..1 + rest[0] as usize].to_vec()) };
    (a, b)
}

/// Union of two collections over the same alphabet.
pub struct Union<'a> {
    pub left: &'a dyn WordAutomaton,
    pub right: &'a dyn WordAutomaton,
}

impl WordAutomaton for Union<'_> {
    fn alphabet(&self) -> Alphabet {
        self.left.alphabet()
    }
    fn start(&self) -> State {
        pack_pair(Some(&self.left.start()), Some(&self.right.start()))
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        let (a, b) = unpack_pair(state);
        let a = a.and_then(|s| self.left.step(&s, symbol));
        let b = b.and_then(|s| self.right.step(&s, symbol));
        if a.is_none() && b.is_none() {
            return None;
        }
        Some(pack_pair(a.as_ref(), b.as_ref()))
    }
    fn accepting(&self, state: &State) -> bool {
        let (a, b) = unpack_pair(state);
        a.is_some_and(|s| self.left.accepting(&s)) || b.is_some_and(|s| self.right.accepting(&s))
    }
}

/// Intersection of two collections over the same alphabet.
pub struct Intersection<'a> {
    pub left: &'a dyn WordAutomaton,
    pub right: &'a dyn WordAutomaton,
}

impl WordAutomaton for Intersection<'_> {
    fn alphabet(&self) -> Alphabet {
        self.left.alphabet()
    }
    fn start(&self) -> State {
        pack_pair(Some(&self.left.start()), Some(&self.right.start()))
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        let (a, b) = unpack_pair(state);
        let a = self.left.step(&a?, symbol)?;
        let b = self.right.step(&b?, symbol)?;
        Some(pack_pair(Some(&a), Some(&b)))
    }
    fn accepting(&self, state: &State) -> bool {
        let (a, b) = unpack_pair(state);
        a.is_some_and(|s| self.left.accepting(&s)) && b.is_some_and(|s| self.right.accepting(&s))
    }
}

/// Every word over an alphabet up to a given horizon, with an explicit
/// acceptance predicate. Used for collections defined by a property that
/// is checked on the whole word.
pub struct Predicate<F: Fn(&[Symbol]) -> bool + Send + Sync> {
    pub alphabet: Alphabet,
    pub accept: F,
}

impl<F: Fn(&[Symbol]) -> bool + Send + Sync> WordAutomaton for Predicate<F> {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
    fn start(&self) -> State {
        Vec::new()
    }
    fn step(&self, state: &State, symbol: Symbol) -> Option<State> {
        let mut s = state.clone();
        s.push(symbol as u32);
        Some(s)
    }
    fn accepting(&self, state: &State) -> bool {
        let w: Vec<Symbol> = state.iter().map(|&x| x as Symbol).collect();
        (self.accept)(&w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{FullShift, Sft};

    #[test]
    fn full_shift_basics() {
        let full = FullShift::new(2).unwrap();
        assert!(is_word(&full, &[1, 2, 1, 2]).unwrap());
        let words = enumerate_words(&full, 2).unwrap();
        let text: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(text, ["1 1", "1 2", "2 1", "2 2"]);
        assert_eq!(enumerate_words(&full, 0).unwrap(), vec![Word::empty()]);
        let full3 = FullShift::new(3).unwrap();
        assert_eq!(count_words(&full3, 4).unwrap(), BigUint::from(81u32));
    }

    #[test]
    fn counting_falls_back_to_big_integers() {
        let full = FullShift::new(10).unwrap();
        let c = count_words(&full, 40).unwrap();
        assert_eq!(c, num_traits::pow(BigUint::from(10u32), 40));
        assert_eq!(count_words_u64(&full, 40), Err(Error::Overflow));
    }

    #[test]
    fn golden_mean_counts() {
        let sft = Sft::new(2, &[Word::from_digits("11").unwrap()], 30).unwrap();
        assert!(!is_word(&sft, &[2, 1, 1]).unwrap());
        assert_eq!(count_words(&sft, 3).unwrap(), BigUint::from(5u32));
        assert_eq!(enumerate_words(&sft, 3).unwrap().len(), 5);
        assert!(matches!(is_word(&sft, &[1; 31]), Err(Error::HorizonExceeded { .. })));
    }

    #[test]
    fn union_and_intersection() {
        let ends1 = Predicate { alphabet: Alphabet::new(2).unwrap(), accept: |w: &[u8]| w.last() == Some(&1) };
        let starts1 = Predicate { alphabet: Alphabet::new(2).unwrap(), accept: |w: &[u8]| w.first() == Some(&1) };
        let u = Union { left: &ends1, right: &starts1 };
        let i = Intersection { left: &ends1, right: &starts1 };
        assert_eq!(count_accepted(&u, 3), BigUint::from(6u32));
        assert_eq!(count_accepted(&i, 3), BigUint::from(2u32));
    }

    #[test]
    fn explore_golden_mean() {
        let sft = Sft::new(2, &[Word::from_digits("11").unwrap()], UNBOUNDED).unwrap();
        let g = explore(&sft, 100).unwrap();
        assert!(g.states.len() <= 4);
    }
}
