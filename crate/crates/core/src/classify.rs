use std::collections::VecDeque;

use crate::bitset::StateSet;
use crate::error::{Error, Result};
use crate::graph::{coreachable, sccs, Sccs};
use crate::lasso::LassoWord;
use crate::nbw::{Nbw, State, Symbol};

/// Split of a limit deterministic automaton into a nondeterministic part and
/// a deterministic part that contains every accepting state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdbwPartition {
    pub q_n: StateSet,
    pub q_d: StateSet,
}

impl LdbwPartition {
    /// Checks the partition against `a`: the parts cover all states and are
    /// disjoint, accepting states are deterministic, and every deterministic
    /// state has exactly one successor per symbol, itself deterministic.
    pub fn validate(&self, a: &Nbw) -> Result<()> {
        let all = a.all_states();
        if self.q_n.union(&self.q_d) != all || !self.q_n.is_disjoint(&self.q_d) {
            return Err(Error::InvalidPartition("parts must be disjoint and cover all states".into()));
        }
        if !a.accepting().is_subset(&self.q_d) {
            return Err(Error::InvalidPartition("accepting states must be deterministic".into()));
        }
        for q in self.q_d.iter() {
            for s in 0..a.num_symbols() {
                let t = a.succ(q, s);
                if t.len() != 1 || !t.is_subset(&self.q_d) {
                    return Err(Error::InvalidPartition(format!(
                        "state {} on {} must have one deterministic successor",
                        a.name(q),
                        a.alphabet()[s]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Successors inside the nondeterministic part.
    pub fn delta_n(&self, a: &Nbw, set: &StateSet, s: Symbol) -> StateSet {
        a.post(&set.intersection(&self.q_n), s).intersection(&self.q_n)
    }

    /// Jumps from the nondeterministic part into the deterministic part.
    pub fn delta_j(&self, a: &Nbw, set: &StateSet, s: Symbol) -> StateSet {
        a.post(&set.intersection(&self.q_n), s).intersection(&self.q_d)
    }

    /// Image of deterministic states.
    pub fn delta_d_set(&self, a: &Nbw, set: &StateSet, s: Symbol) -> StateSet {
        a.post(&set.intersection(&self.q_d), s)
    }

    /// The unique successor of a deterministic state.
    pub fn delta_d(&self, a: &Nbw, q: State, s: Symbol) -> State {
        debug_assert!(self.q_d.contains(q));
        a.succ(q, s).first().expect("deterministic state has a successor")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub complete: bool,
    pub deterministic: bool,
    pub reverse_deterministic: bool,
    pub limit_deterministic: bool,
    pub finitely_ambiguous: bool,
    pub ldbw_partition: Option<LdbwPartition>,
}

pub fn classify(a: &Nbw) -> ClassificationReport {
    let partition = ldbw_partition(a).ok();
    ClassificationReport {
        complete: a.is_complete(),
        deterministic: a.is_deterministic(),
        reverse_deterministic: a.is_reverse_deterministic(),
        limit_deterministic: partition.is_some(),
        finitely_ambiguous: is_finitely_ambiguous(a),
        ldbw_partition: partition,
    }
}

/// The partition whose deterministic part is the forward closure of the
/// accepting states, i.e. the smallest valid deterministic part.
pub fn ldbw_partition(a: &Nbw) -> Result<LdbwPartition> {
    let q_d = a.reachable_from(a.accepting());
    for q in q_d.iter() {
        for s in 0..a.num_symbols() {
            let k = a.succ(q, s).len();
            if k != 1 {
                return Err(Error::NotLimitDeterministic {
                    state: q,
                    symbol: a.alphabet()[s].clone(),
                    successors: k,
                });
            }
        }
    }
    Ok(LdbwPartition { q_n: a.all_states().difference(&q_d), q_d })
}

/// The partition whose deterministic part is as large as possible: every
/// state from which only deterministic states are reachable.
pub fn maximal_ldbw_partition(a: &Nbw) -> Result<LdbwPartition> {
    let n = a.n();
    let succ = adjacency(a);
    let bad: Vec<bool> = (0..n).map(|q| (0..a.num_symbols()).any(|s| a.succ(q, s).len() != 1)).collect();
    let reaches_bad = coreachable(&succ, &bad);
    let q_d = StateSet::from_states(n, (0..n).filter(|&q| !reaches_bad[q]));
    if let Some(f) = a.accepting().iter().find(|&f| !q_d.contains(f)) {
        return Err(Error::AcceptingNotDeterministic(f));
    }
    Ok(LdbwPartition { q_n: a.all_states().difference(&q_d), q_d })
}

fn adjacency(a: &Nbw) -> Vec<Vec<usize>> {
    (0..a.n())
        .map(|p| {
            let mut out: Vec<usize> = (0..a.num_symbols()).flat_map(|s| a.succ(p, s).iter()).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

pub fn is_finitely_ambiguous(a: &Nbw) -> bool {
    infinite_ambiguity_witness(a).is_none()
}

/// A word with infinitely many accepting runs, if one exists.
///
/// The automaton has infinitely many accepting runs on some word iff there
/// are a reachable state `p`, a state `t` and a nonempty word `z` with runs
/// `p -z-> p` and `p -z-> t` that leave `p` through different successors,
/// and a run `t -z-> t` that visits an accepting state. The word `u z^ω`,
/// with `u` leading to `p`, then has one accepting run per number of
/// `z`-rounds spent at `p` before switching to `t`. Conversely, every word
/// with infinitely many accepting runs yields such a pattern.
pub fn infinite_ambiguity_witness(a: &Nbw) -> Option<LassoWord> {
    let n = a.n();
    let k = a.num_symbols();
    let succ = adjacency(a);
    let scc = sccs(&succ);
    let reach = a.reachable();
    let acc_comp: Vec<bool> = (0..scc.members.len())
        .map(|c| scc.nontrivial[c] && scc.members[c].iter().any(|&q| a.is_accepting(q)))
        .collect();
    let on_acc_cycle: Vec<bool> = (0..n).map(|q| acc_comp[scc.comp[q]]).collect();
    let live = coreachable(&succ, &on_acc_cycle);

    for p in (0..n).filter(|&p| reach.contains(p) && live[p] && scc.on_cycle(p)) {
        let branching = (0..k).any(|s| a.succ(p, s).len() >= 2);
        if !branching {
            continue;
        }
        let from_p = a.reachable_from(&StateSet::singleton(n, p));
        for t in (0..n).filter(|&t| on_acc_cycle[t] && from_p.contains(t)) {
            if let Some(z) = pattern_word(a, &scc, p, t) {
                let u = shortest_word(a, a.initial(), p).expect("p is reachable");
                return Some(LassoWord::new(u, z).canonical());
            }
        }
    }
    None
}

/// Searches the triple product for the pattern described in
/// [`infinite_ambiguity_witness`] with fixed `p` and `t`.
fn pattern_word(a: &Nbw, scc: &Sccs, p: State, t: State) -> Option<Vec<Symbol>> {
    let n = a.n();
    let k = a.num_symbols();
    let in_p = |q: State| scc.comp[q] == scc.comp[p];
    let in_t = |q: State| scc.comp[q] == scc.comp[t];
    let from_p = a.reachable_from(&StateSet::singleton(n, p));
    let succ = adjacency(a);
    let mut target = vec![false; n];
    target[t] = true;
    let to_t = coreachable(&succ, &target);
    let middle = |q: State| from_p.contains(q) && to_t[q];

    let encode = |x: State, y: State, z: State, f: bool| ((x * n + y) * n + z) * 2 + f as usize;
    let size = n * n * n * 2;
    let mut parent: Vec<Option<(usize, Symbol)>> = vec![None; size];
    let mut seen = vec![false; size];
    let mut queue = VecDeque::new();
    const ROOT: usize = usize::MAX;

    for s in 0..k {
        for x in a.succ(p, s).iter().filter(|&x| in_p(x)) {
            for y in a.succ(p, s).iter().filter(|&y| y != x && middle(y)) {
                for z in a.succ(t, s).iter().filter(|&z| in_t(z)) {
                    let f = a.is_accepting(t) || a.is_accepting(z);
                    let id = encode(x, y, z, f);
                    if !seen[id] {
                        seen[id] = true;
                        parent[id] = Some((ROOT, s));
                        queue.push_back((x, y, z, f));
                    }
                }
            }
        }
    }
    let goal = encode(p, t, t, true);
    while let Some((x, y, z, f)) = queue.pop_front() {
        let id = encode(x, y, z, f);
        if id == goal {
            let mut word = Vec::new();
            let mut cur = id;
            while cur != ROOT {
                let (prev, s) = parent[cur].unwrap();
                word.push(s);
                cur = prev;
            }
            word.reverse();
            return Some(word);
        }
        for s in 0..k {
            for x2 in a.succ(x, s).iter().filter(|&q| in_p(q)) {
                for y2 in a.succ(y, s).iter().filter(|&q| middle(q)) {
                    for z2 in a.succ(z, s).iter().filter(|&q| in_t(q)) {
                        let f2 = f || a.is_accepting(z2);
                        let id2 = encode(x2, y2, z2, f2);
                        if !seen[id2] {
                            seen[id2] = true;
                            parent[id2] = Some((id, s));
                            queue.push_back((x2, y2, z2, f2));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Shortest word leading from some state in `from` to `to`.
pub(crate) fn shortest_word(a: &Nbw, from: &StateSet, to: State) -> Option<Vec<Symbol>> {
    let n = a.n();
    let mut parent: Vec<Option<(State, Symbol)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for q in from.iter() {
        seen[q] = true;
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        if q == to {
            let mut word = Vec::new();
            let mut cur = q;
            while let Some((prev, s)) = parent[cur] {
                word.push(s);
                cur = prev;
            }
            word.reverse();
            return Some(word);
        }
        for s in 0..a.num_symbols() {
            for r in a.succ(q, s).iter() {
                if !seen[r] {
                    seen[r] = true;
                    parent[r] = Some((q, s));
                    queue.push_back(r);
                }
            }
        }
    }
    None
}
