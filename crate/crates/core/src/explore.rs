//! Reachable-state construction shared by all complement constructions.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::bitset::StateSet;
use crate::nbw::{Nbw, State, Symbol};

/// An automaton whose states are macrostates of type `M`.
///
/// State `i` of `automaton` is `macrostates[i]`. If the construction left
/// transitions undefined, the automaton is completed with one extra sink
/// state that has no macrostate.
#[derive(Clone, Debug)]
pub struct Complement<M> {
    pub automaton: Nbw,
    macrostates: Vec<M>,
    index: HashMap<M, State>,
}

impl<M: Clone + Eq + Hash> Complement<M> {
    pub fn macrostates(&self) -> &[M] {
        &self.macrostates
    }

    /// Number of reachable macrostates, not counting a completion sink.
    pub fn num_macrostates(&self) -> usize {
        self.macrostates.len()
    }

    pub fn macrostate(&self, q: State) -> Option<&M> {
        self.macrostates.get(q)
    }

    pub fn index_of(&self, m: &M) -> Option<State> {
        self.index.get(m).copied()
    }

    pub fn successors(&self, m: &M, s: Symbol) -> Vec<&M> {
        match self.index_of(m) {
            Some(q) => self.automaton.succ(q, s).iter().filter_map(|r| self.macrostate(r)).collect(),
            None => Vec::new(),
        }
    }

    pub fn has_transition(&self, from: &M, s: Symbol, to: &M) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Some(p), Some(q)) => self.automaton.succ(p, s).contains(q),
            _ => false,
        }
    }

    /// The complement automaton started from `m` alone.
    pub fn rooted(&self, m: &M) -> Option<Nbw> {
        let q = self.index_of(m)?;
        Some(self.automaton.rooted_at(StateSet::singleton(self.automaton.n(), q)))
    }
}

/// Breadth-first construction from `initial`. Successors of each macrostate
/// are sorted and deduplicated, so the numbering is reproducible.
///
/// Panics if more than `bound` macrostates are reached.
pub(crate) fn explore<M: Clone + Eq + Hash + Ord>(
    alphabet: &[String],
    initial: Vec<M>,
    bound: u128,
    mut succ: impl FnMut(&M, Symbol) -> Vec<M>,
    accepting: impl Fn(&M) -> bool,
    name: impl Fn(&M) -> String,
) -> Complement<M> {
    let mut macrostates: Vec<M> = Vec::new();
    let mut index: HashMap<M, State> = HashMap::new();
    let mut edges: Vec<(State, Symbol, State)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |m: M, macrostates: &mut Vec<M>, queue: &mut VecDeque<State>| -> State {
        if let Some(&q) = index.get(&m) {
            return q;
        }
        let q = macrostates.len();
        assert!((q as u128) < bound, "construction exceeded its bound of {bound} macrostates");
        index.insert(m.clone(), q);
        macrostates.push(m);
        queue.push_back(q);
        q
    };
    let mut init = initial;
    init.sort();
    init.dedup();
    let initial_states: Vec<State> = init.into_iter().map(|m| intern(m, &mut macrostates, &mut queue)).collect();
    while let Some(p) = queue.pop_front() {
        for s in 0..alphabet.len() {
            let mut next = succ(&macrostates[p], s);
            next.sort();
            next.dedup();
            for m in next {
                let q = intern(m, &mut macrostates, &mut queue);
                edges.push((p, s, q));
            }
        }
    }
    let n = macrostates.len();
    let mut a = Nbw::new(n, alphabet);
    for (p, s, q) in edges {
        a.add_transition(p, s, q);
    }
    for q in initial_states {
        a.set_initial(q);
    }
    for (q, m) in macrostates.iter().enumerate() {
        if accepting(m) {
            a.set_accepting(q);
        }
    }
    a.set_names(macrostates.iter().map(name).collect());
    let automaton = a.complete();
    let index = macrostates.iter().cloned().enumerate().map(|(q, m)| (m, q)).collect();
    Complement { automaton, macrostates, index }
}
