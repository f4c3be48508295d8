use crate::bitset::StateSet;
use crate::error::{Error, Result};

pub type State = usize;
pub type Symbol = usize;

/// A nondeterministic Büchi automaton over a finite alphabet.
///
/// States are `0..n`. Symbols are indices into the alphabet, which is kept
/// sorted. Every automaton carries a total order on its states; the default
/// order is ascending index. State names only affect rendering and are
/// ignored by equality.
#[derive(Clone, Debug)]
pub struct Nbw {
    alphabet: Vec<String>,
    initial: StateSet,
    accepting: StateSet,
    delta: Vec<Vec<StateSet>>,
    order: Vec<State>,
    position: Vec<usize>,
    names: Vec<String>,
}

impl PartialEq for Nbw {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.initial == other.initial
            && self.accepting == other.accepting
            && self.delta == other.delta
            && self.order == other.order
    }
}

impl Eq for Nbw {}

impl Nbw {
    /// An automaton with `n` states, no transitions and no initial or
    /// accepting states. Duplicate symbols are merged.
    pub fn new<S: AsRef<str>>(n: usize, alphabet: &[S]) -> Self {
        let mut alphabet: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        alphabet.sort();
        alphabet.dedup();
        let k = alphabet.len();
        Nbw {
            alphabet,
            initial: StateSet::new(n),
            accepting: StateSet::new(n),
            delta: vec![vec![StateSet::new(n); k]; n],
            order: (0..n).collect(),
            position: (0..n).collect(),
            names: (0..n).map(|q| q.to_string()).collect(),
        }
    }

    pub fn add_transition(&mut self, from: State, symbol: Symbol, to: State) {
        self.delta[from][symbol].insert(to);
    }

    pub fn set_initial(&mut self, q: State) {
        self.initial.insert(q);
    }

    pub fn set_accepting(&mut self, q: State) {
        self.accepting.insert(q);
    }

    pub fn set_initial_states(&mut self, states: StateSet) {
        self.initial = states;
    }

    pub fn set_accepting_states(&mut self, states: StateSet) {
        self.accepting = states;
    }

    pub fn set_names(&mut self, names: Vec<String>) {
        assert_eq!(names.len(), self.n(), "one name per state");
        self.names = names;
    }

    /// Replaces the state order. `order` lists every state once, smallest first.
    pub fn with_order(mut self, order: Vec<State>) -> Result<Self> {
        let n = self.n();
        if order.len() != n {
            return Err(Error::InvalidOrder(format!("expected {n} states, got {}", order.len())));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &q) in order.iter().enumerate() {
            if q >= n || position[q] != usize::MAX {
                return Err(Error::InvalidOrder(format!("state {q} is out of range or repeated")));
            }
            position[q] = i;
        }
        self.order = order;
        self.position = position;
        Ok(self)
    }

    /// Same automaton with `initial` as its only initial states.
    pub fn rooted_at(&self, initial: StateSet) -> Nbw {
        let mut a = self.clone();
        a.initial = initial;
        a
    }

    pub fn n(&self) -> usize {
        self.delta.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn accepting(&self) -> &StateSet {
        &self.accepting
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting.contains(q)
    }

    pub fn succ(&self, q: State, a: Symbol) -> &StateSet {
        &self.delta[q][a]
    }

    /// Image of a set of states under one symbol.
    pub fn post(&self, set: &StateSet, a: Symbol) -> StateSet {
        let mut out = StateSet::new(self.n());
        for q in set.iter() {
            out.union_with(&self.delta[q][a]);
        }
        out
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::new(self.n())
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.n())
    }

    pub fn name(&self, q: State) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_default_names(&self) -> bool {
        self.names.iter().enumerate().all(|(q, s)| *s == q.to_string())
    }

    /// States listed from smallest to largest in the state order.
    pub fn order(&self) -> &[State] {
        &self.order
    }

    pub fn has_default_order(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &q)| i == q)
    }

    /// Position of `q` in the state order.
    pub fn position(&self, q: State) -> usize {
        self.position[q]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (State, Symbol, State)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter().enumerate().flat_map(move |(a, targets)| targets.iter().map(move |q| (p, a, q)))
        })
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(|t| !t.is_empty()))
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().all(|row| row.iter().all(|t| t.len() == 1))
    }

    /// Every state has at most one predecessor per symbol.
    pub fn is_reverse_deterministic(&self) -> bool {
        let n = self.n();
        (0..self.num_symbols()).all(|a| {
            let mut seen = vec![false; n];
            for p in 0..n {
                for q in self.delta[p][a].iter() {
                    if seen[q] {
                        return false;
                    }
                    seen[q] = true;
                }
            }
            true
        })
    }

    /// Adds a non-accepting sink as the last state and redirects every
    /// missing transition to it. Complete automata are returned unchanged.
    pub fn complete(&self) -> Nbw {
        if self.is_complete() {
            return self.clone();
        }
        let n = self.n();
        let sink = n;
        let k = self.num_symbols();
        let mut a = Nbw::new(n + 1, &self.alphabet);
        a.initial = StateSet::from_states(n + 1, self.initial.iter());
        a.accepting = StateSet::from_states(n + 1, self.accepting.iter());
        for p in 0..n {
            for s in 0..k {
                if self.delta[p][s].is_empty() {
                    a.add_transition(p, s, sink);
                } else {
                    for q in self.delta[p][s].iter() {
                        a.add_transition(p, s, q);
                    }
                }
            }
        }
        for s in 0..k {
            a.add_transition(sink, s, sink);
        }
        let mut order = self.order.clone();
        order.push(sink);
        let mut names = self.names.clone();
        names.push(if self.has_default_names() { sink.to_string() } else { "sink".to_string() });
        a.names = names;
        a.with_order(order).expect("extended order is a permutation")
    }

    /// States reachable from `from`, including `from` itself.
    pub fn reachable_from(&self, from: &StateSet) -> StateSet {
        let mut seen = from.clone();
        let mut stack: Vec<State> = from.iter().collect();
        while let Some(p) = stack.pop() {
            for row in &self.delta[p] {
                for q in row.iter() {
                    if !seen.contains(q) {
                        seen.insert(q);
                        stack.push(q);
                    }
                }
            }
        }
        seen
    }

    pub fn reachable(&self) -> StateSet {
        self.reachable_from(&self.initial)
    }

    pub fn same_alphabet(&self, other: &Nbw) -> bool {
        self.alphabet == other.alphabet
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_state_no_edges() -> Nbw {
        let mut a = Nbw::new(1, &["a", "b"]);
        a.set_initial(0);
        a
    }

    #[test]
    fn alphabet_is_sorted_and_deduplicated() {
        let a = Nbw::new(1, &["b", "a", "b"]);
        assert_eq!(a.alphabet(), &["a".to_string(), "b".to_string()]);
        assert_eq!(a.symbol("b"), Some(1));
        assert_eq!(a.symbol("c"), None);
    }

    #[test]
    fn completion_adds_single_sink() {
        let a = one_state_no_edges();
        let c = a.complete();
        assert_eq!(c.n(), 2);
        assert!(c.is_complete());
        for s in 0..2 {
            assert_eq!(c.succ(0, s), &StateSet::singleton(2, 1));
            assert_eq!(c.succ(1, s), &StateSet::singleton(2, 1));
        }
        assert!(!c.is_accepting(1));
        assert_eq!(c.order(), &[0, 1]);
        assert_eq!(c.complete(), c);
    }

    #[test]
    fn custom_order_is_validated() {
        let a = Nbw::new(3, &["a"]);
        let b = a.clone().with_order(vec![2, 1, 0]).unwrap();
        assert_eq!(b.position(2), 0);
        assert!(a.clone().with_order(vec![0, 0, 1]).is_err());
        assert!(a.with_order(vec![0, 1]).is_err());
    }

    #[test]
    fn reverse_determinism() {
        let mut a = Nbw::new(2, &["a"]);
        a.set_initial(0);
        a.add_transition(0, 0, 1);
        a.add_transition(1, 0, 0);
        assert!(a.is_reverse_deterministic());
        a.add_transition(1, 0, 1);
        assert!(!a.is_reverse_deterministic());
    }
}
