//! Run DAGs over lasso words, kept finite by folding the periodic tail.
//!
//! A DAG over `u v^ω` is unrolled level by level until a level repeats at
//! the same loop phase. Levels `0..=start+len` are stored explicitly, where
//! level `start + len` has the same content as level `start`. All analyses
//! run on the quotient graph that wraps level `start + len` back onto
//! `start`; every infinite path of the DAG maps to an infinite path of the
//! quotient and back.

use std::collections::HashMap;
use std::hash::Hash;

use crate::bitset::StateSet;
use crate::error::{Error, Result};
use crate::graph::{coreachable, sccs};
use crate::lasso::LassoWord;
use crate::nbw::{Nbw, State, Symbol};

/// Edges kept between a level and its successor level on one symbol: each
/// successor state keeps only the edge from its smallest predecessor in
/// the state order.
#[derive(Clone, Debug)]
pub struct ReducedStep {
    owner: Vec<Option<State>>,
}

impl ReducedStep {
    pub fn new(a: &Nbw, level: &StateSet, s: Symbol) -> Self {
        let mut owner = vec![None; a.n()];
        for &q in a.order() {
            if !level.contains(q) {
                continue;
            }
            for r in a.succ(q, s).iter() {
                if owner[r].is_none() {
                    owner[r] = Some(q);
                }
            }
        }
        ReducedStep { owner }
    }

    /// The predecessor whose edge into `r` survives.
    pub fn owner(&self, r: State) -> Option<State> {
        self.owner[r]
    }

    /// Successors whose surviving edge starts in `tracked`.
    pub fn image(&self, tracked: &StateSet) -> StateSet {
        let n = self.owner.len();
        StateSet::from_states(n, (0..n).filter(|&r| self.owner[r].is_some_and(|q| tracked.contains(q))))
    }
}

/// Successors of `tracked` in the reduced DAG when the whole level is
/// `level`. The level acts as context: a state of `tracked` loses its edge
/// to `r` whenever a smaller state of the level also reaches `r`.
pub fn reduced_successors(a: &Nbw, level: &StateSet, tracked: &StateSet, s: Symbol) -> Result<StateSet> {
    if !tracked.is_subset(level) {
        return Err(Error::TrackedNotSubset);
    }
    Ok(ReducedStep::new(a, level, s).image(tracked))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagVertex<L> {
    pub label: L,
    pub accepting: bool,
    /// Indices of predecessors in the previous level.
    pub preds: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LevelDag<L> {
    levels: Vec<Vec<DagVertex<L>>>,
    period_start: usize,
    period_len: usize,
}

/// Unrolls a DAG over `w`. `step` builds the next level from the current
/// one and must depend only on the level content and the symbol; `key`
/// must determine the level content.
pub(crate) fn unroll<L, K: Hash + Eq>(
    w: &LassoWord,
    level0: Vec<DagVertex<L>>,
    mut step: impl FnMut(&[DagVertex<L>], Symbol) -> Vec<DagVertex<L>>,
    key: impl Fn(&[DagVertex<L>]) -> K,
) -> LevelDag<L> {
    let stem = w.stem().len();
    let period = w.cycle().len();
    let mut seen: HashMap<(K, usize), usize> = HashMap::new();
    let mut levels = vec![level0];
    loop {
        let l = levels.len() - 1;
        if l >= stem {
            let k = (key(&levels[l]), (l - stem) % period);
            if let Some(&start) = seen.get(&k) {
                return LevelDag { levels, period_start: start, period_len: l - start };
            }
            seen.insert(k, l);
        }
        let next = step(&levels[l], w.letter(l));
        levels.push(next);
    }
}

/// Per-vertex facts about a DAG, indexed by level (below `start + len`) and
/// position in the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagAnalysis {
    /// The vertex starts no infinite path.
    pub finite: Vec<Vec<bool>>,
    /// The vertex is not finite and reaches no accepting vertex.
    pub f_free: Vec<Vec<bool>>,
    /// The vertex lies on an infinite path visiting accepting vertices infinitely often.
    pub on_accepting_branch: Vec<Vec<bool>>,
    /// Some infinite path visits accepting vertices infinitely often.
    pub accepting: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagReport {
    pub accepting: bool,
    /// Least level `s > 0` after which every accepting vertex is finite.
    pub stable_level: Option<usize>,
    /// Least level `d ≥ 1` after which every vertex on an accepting branch
    /// has a single predecessor. Absent for non-accepting DAGs.
    pub separating_level: Option<usize>,
    /// Number of non-finite vertices per level in the periodic part (the maximum over its levels).
    pub omega_branch_count_at_tail: usize,
}

/// Result of repeatedly removing finite and then accepting-free vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruning {
    /// Rank of each vertex, indexed like [`DagAnalysis`].
    pub ranks: Vec<Vec<u32>>,
    /// Index `i` of the first empty graph `G^i`, if the sequence empties.
    pub emptied_at: Option<usize>,
}

struct Quotient {
    offset: Vec<usize>,
    succ: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

impl<L> LevelDag<L> {
    pub fn period_start(&self) -> usize {
        self.period_start
    }

    pub fn period_len(&self) -> usize {
        self.period_len
    }

    /// Levels `0..=period_start + period_len`; the last repeats `period_start`.
    pub fn levels(&self) -> &[Vec<DagVertex<L>>] {
        &self.levels
    }

    /// Any level of the infinite DAG. Vertex indices and predecessor lists
    /// are those of the stored level with the same content and incoming edges.
    pub fn level(&self, i: usize) -> &[DagVertex<L>] {
        let end = self.period_start + self.period_len;
        if i <= end {
            &self.levels[i]
        } else {
            &self.levels[self.period_start + 1 + (i - self.period_start - 1) % self.period_len]
        }
    }

    fn core_levels(&self) -> usize {
        self.period_start + self.period_len
    }

    fn quotient(&self) -> Quotient {
        let core = self.core_levels();
        let mut offset = Vec::with_capacity(core + 1);
        let mut total = 0;
        for l in 0..core {
            offset.push(total);
            total += self.levels[l].len();
        }
        offset.push(total);
        let mut succ = vec![Vec::new(); total];
        let mut accepting = vec![false; total];
        for l in 0..core {
            for (i, v) in self.levels[l].iter().enumerate() {
                accepting[offset[l] + i] = v.accepting;
            }
        }
        for l in 1..=core {
            let target_level = if l == core { self.period_start } else { l };
            for (i, v) in self.levels[l].iter().enumerate() {
                for &p in &v.preds {
                    succ[offset[l - 1] + p].push(offset[target_level] + i);
                }
            }
        }
        Quotient { offset, succ, accepting }
    }

    fn split<T: Clone>(&self, q: &Quotient, flat: &[T]) -> Vec<Vec<T>> {
        (0..self.core_levels()).map(|l| flat[q.offset[l]..q.offset[l + 1]].to_vec()).collect()
    }

    fn quotient_id(&self, q: &Quotient, level: usize, i: usize) -> usize {
        let l = if level == self.core_levels() { self.period_start } else { level };
        q.offset[l] + i
    }

    pub fn analysis(&self) -> DagAnalysis {
        let q = self.quotient();
        let s = sccs(&q.succ);
        let n = q.succ.len();
        let cyclic: Vec<bool> = (0..n).map(|v| s.on_cycle(v)).collect();
        let infinite = coreachable(&q.succ, &cyclic);
        let reaches_f = coreachable(&q.succ, &q.accepting);
        let acc_comp: Vec<bool> = (0..s.members.len())
            .map(|c| s.nontrivial[c] && s.members[c].iter().any(|&v| q.accepting[v]))
            .collect();
        let acc_cycle: Vec<bool> = (0..n).map(|v| acc_comp[s.comp[v]]).collect();
        let on_acc = coreachable(&q.succ, &acc_cycle);
        let finite: Vec<bool> = infinite.iter().map(|b| !b).collect();
        let f_free: Vec<bool> = (0..n).map(|v| infinite[v] && !reaches_f[v]).collect();
        DagAnalysis {
            finite: self.split(&q, &finite),
            f_free: self.split(&q, &f_free),
            on_accepting_branch: self.split(&q, &on_acc),
            accepting: acc_cycle.iter().any(|&b| b),
        }
    }

    pub fn report(&self) -> DagReport {
        let an = self.analysis();
        let core = self.core_levels();
        let ps = self.period_start;

        let mut stable = Some(1);
        for l in 0..core {
            for (i, v) in self.levels[l].iter().enumerate() {
                if v.accepting && !an.finite[l][i] {
                    stable = if l >= ps { None } else { stable.map(|s: usize| s.max(l + 1)) };
                }
            }
            if stable.is_none() {
                break;
            }
        }

        let separating = if an.accepting {
            let mut last = 0;
            let mut recurring = false;
            for l in 1..=core {
                let shared = self.levels[l].iter().enumerate().any(|(i, v)| {
                    let ll = if l == core { ps } else { l };
                    an.on_accepting_branch[ll][i] && v.preds.len() > 1
                });
                if shared {
                    if l > ps {
                        recurring = true;
                    }
                    last = l;
                }
            }
            if recurring {
                None
            } else {
                Some(last.max(1))
            }
        } else {
            None
        };

        let tail = (ps..core).map(|l| an.finite[l].iter().filter(|f| !**f).count()).max().unwrap_or(0);

        DagReport {
            accepting: an.accepting,
            stable_level: stable,
            separating_level: separating,
            omega_branch_count_at_tail: tail,
        }
    }

    /// Alternately removes finite vertices (even steps) and accepting-free
    /// vertices (odd steps). A vertex removed at step `i` gets rank `i`.
    /// Vertices that are never removed get the smallest even rank that is at
    /// least `max_rank` and every assigned rank.
    pub fn pruning(&self, max_rank: u32) -> Pruning {
        let q = self.quotient();
        let n = q.succ.len();
        let mut alive = vec![true; n];
        let mut rank: Vec<Option<u32>> = vec![None; n];
        let mut step = 0u32;
        let mut idle = 0;
        let emptied_at = loop {
            if alive.iter().all(|a| !a) {
                break Some(step as usize);
            }
            if idle == 2 {
                break None;
            }
            let sub: Vec<Vec<usize>> = (0..n)
                .map(|v| if alive[v] { q.succ[v].iter().copied().filter(|&w| alive[w]).collect() } else { Vec::new() })
                .collect();
            let remove: Vec<bool> = if step.is_multiple_of(2) {
                let s = sccs(&sub);
                let cyclic: Vec<bool> = (0..n).map(|v| alive[v] && s.on_cycle(v)).collect();
                let infinite = coreachable(&sub, &cyclic);
                (0..n).map(|v| alive[v] && !infinite[v]).collect()
            } else {
                let targets: Vec<bool> = (0..n).map(|v| alive[v] && q.accepting[v]).collect();
                let reaches = coreachable(&sub, &targets);
                (0..n).map(|v| alive[v] && !reaches[v]).collect()
            };
            if remove.iter().any(|&r| r) {
                idle = 0;
                for v in 0..n {
                    if remove[v] {
                        alive[v] = false;
                        rank[v] = Some(step);
                    }
                }
            } else {
                idle += 1;
            }
            step += 1;
        };
        let top = rank.iter().flatten().copied().max().unwrap_or(0).max(max_rank);
        let survivor = top + top % 2;
        let flat: Vec<u32> = rank.into_iter().map(|r| r.unwrap_or(survivor)).collect();
        Pruning { ranks: self.split(&q, &flat), emptied_at }
    }

    /// Every vertex above level 0 has exactly one predecessor.
    pub fn is_codeterministic(&self) -> bool {
        self.levels.iter().skip(1).all(|level| level.iter().all(|v| v.preds.len() == 1))
    }

    /// Ranks never increase along edges and accepting vertices have even ranks.
    pub fn is_valid_ranking(&self, ranks: &[Vec<u32>]) -> bool {
        let q = self.quotient();
        let core = self.core_levels();
        let rank_of = |l: usize, i: usize| {
            let id = self.quotient_id(&q, l, i);
            let l2 = if l == core { self.period_start } else { l };
            ranks[l2][id - q.offset[l2]]
        };
        for l in 0..=core {
            for (i, v) in self.levels[l].iter().enumerate() {
                let r = rank_of(l, i);
                if v.accepting && r % 2 == 1 {
                    return false;
                }
                if l > 0 && v.preds.iter().any(|&p| rank_of(l - 1, p) < r) {
                    return false;
                }
            }
        }
        true
    }

    /// Every edge `(level, from, to)` between stored levels.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (l, level) in self.levels.iter().enumerate().skip(1) {
            for (i, v) in level.iter().enumerate() {
                for &p in &v.preds {
                    out.push((l - 1, p, i));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DagMode {
    Full,
    Reduced,
}

/// Run DAG of an automaton over a lasso word. Vertices of a level are
/// ordered by state index.
#[derive(Clone, Debug)]
pub struct LassoDag {
    pub mode: DagMode,
    pub num_states: usize,
    pub graph: LevelDag<State>,
}

impl LassoDag {
    /// Largest rank a rejecting DAG needs: `2n` for full DAGs, 2 for reduced ones.
    pub fn max_rank(&self) -> u32 {
        match self.mode {
            DagMode::Full => 2 * self.num_states as u32,
            DagMode::Reduced => 2,
        }
    }

    /// Position of `state` in level `level`, if present.
    pub fn vertex(&self, level: usize, state: State) -> Option<usize> {
        self.graph.level(level).iter().position(|v| v.label == state)
    }

    /// States at a level.
    pub fn states_at(&self, level: usize) -> Vec<State> {
        self.graph.level(level).iter().map(|v| v.label).collect()
    }

    /// Whether the edge `(from, level) → (to, level + 1)` exists.
    pub fn has_edge(&self, level: usize, from: State, to: State) -> bool {
        let Some(p) = self.vertex(level, from) else { return false };
        let Some(v) = self.vertex(level + 1, to) else { return false };
        self.graph.level(level + 1)[v].preds.contains(&p)
    }
}

pub fn lasso_dag(a: &Nbw, w: &LassoWord, mode: DagMode) -> LassoDag {
    let vertex = |q: State, preds: Vec<usize>| DagVertex { label: q, accepting: a.is_accepting(q), preds };
    let level0 = a.initial().iter().map(|q| vertex(q, Vec::new())).collect();
    let graph = unroll(
        w,
        level0,
        |level, s| {
            let set = StateSet::from_states(a.n(), level.iter().map(|v| v.label));
            let index: HashMap<State, usize> = level.iter().enumerate().map(|(i, v)| (v.label, i)).collect();
            let next = a.post(&set, s);
            match mode {
                DagMode::Full => next
                    .iter()
                    .map(|r| {
                        let preds = level.iter().enumerate().filter(|(_, v)| a.succ(v.label, s).contains(r)).map(|(i, _)| i).collect();
                        vertex(r, preds)
                    })
                    .collect(),
                DagMode::Reduced => {
                    let step = ReducedStep::new(a, &set, s);
                    next.iter().map(|r| vertex(r, vec![index[&step.owner(r).unwrap()]])).collect()
                }
            }
        },
        |level| StateSet::from_states(a.n(), level.iter().map(|v| v.label)),
    );
    if a.n() < 32 {
        let bound = w.stem().len() + ((1usize << a.n()) + 1) * w.cycle().len();
        debug_assert!(graph.levels.len() <= bound + 1);
    }
    LassoDag { mode, num_states: a.n(), graph }
}

pub fn analyze_dag(d: &LassoDag) -> DagReport {
    d.graph.report()
}

pub fn classical_ranks(d: &LassoDag) -> Pruning {
    d.graph.pruning(d.max_rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::lang::{member, random_nbw, Shape};
    use crate::lasso::enumerate_lassos;
    use proptest::prelude::*;

    fn set(n: usize, states: &[usize]) -> StateSet {
        StateSet::from_states(n, states.iter().copied())
    }

    fn b_omega() -> LassoWord {
        LassoWord::new(vec![], vec![1])
    }

    #[test]
    fn reduced_transition_at_level_one() {
        let a = a_fig2();
        let b = a.symbol("b").unwrap();
        let level = set(4, &[1, 2]);
        assert_eq!(reduced_successors(&a, &level, &set(4, &[1]), b).unwrap(), set(4, &[1]));
        assert_eq!(reduced_successors(&a, &level, &set(4, &[2]), b).unwrap(), set(4, &[]));
        assert_eq!(reduced_successors(&a, &level, &set(4, &[]), b).unwrap(), set(4, &[]));
        assert_eq!(reduced_successors(&a, &set(4, &[0]), &set(4, &[0]), b).unwrap(), set(4, &[1, 2]));
        assert_eq!(reduced_successors(&a, &set(4, &[2]), &set(4, &[2]), b).unwrap(), set(4, &[1]));
        assert_eq!(reduced_successors(&a, &set(4, &[1]), &set(4, &[2]), b), Err(Error::TrackedNotSubset));
    }

    #[test]
    fn reduced_dag_of_figure_two() {
        let d = lasso_dag(&a_fig2(), &b_omega(), DagMode::Reduced);
        assert_eq!(d.states_at(0), vec![0]);
        assert_eq!(d.states_at(1), vec![1, 2]);
        assert_eq!(d.states_at(2), vec![1]);
        assert_eq!(d.states_at(7), vec![1]);
        assert!(d.has_edge(1, 1, 1));
        assert!(!d.has_edge(1, 2, 1));
        assert!(d.graph.is_codeterministic());
        let full = lasso_dag(&a_fig2(), &b_omega(), DagMode::Full);
        assert!(full.has_edge(1, 2, 1));
        assert!(!full.graph.is_codeterministic());
    }

    #[test]
    fn separating_level_of_figure_two() {
        let r = analyze_dag(&lasso_dag(&a_fig2(), &b_omega(), DagMode::Full));
        assert!(r.accepting);
        assert_eq!(r.separating_level, Some(2));
        assert_eq!(r.stable_level, None);
    }

    #[test]
    fn figure_five_has_one_branch_when_reduced() {
        let a_omega = LassoWord::new(vec![], vec![0]);
        let d = lasso_dag(&b_fig5(), &a_omega, DagMode::Reduced);
        let r = analyze_dag(&d);
        assert!(!r.accepting);
        assert_eq!(r.stable_level, Some(1));
        assert_eq!(r.omega_branch_count_at_tail, 1);
        // the q2 vertices have no successors
        for l in 2..6 {
            assert!(!d.has_edge(l, 2, 2));
            assert!(d.has_edge(l, 0, 0));
        }
        // the full DAG has no stable level
        let full = analyze_dag(&lasso_dag(&b_fig5(), &a_omega, DagMode::Full));
        assert!(!full.accepting);
        assert_eq!(full.stable_level, None);
    }

    #[test]
    fn figure_five_ranks() {
        let a_omega = LassoWord::new(vec![], vec![0]);
        let d = lasso_dag(&b_fig5(), &a_omega, DagMode::Reduced);
        let p = classical_ranks(&d);
        for (l, ranks) in p.ranks.iter().enumerate() {
            for (i, v) in d.graph.level(l).iter().enumerate() {
                let expected = if v.label == 0 { 1 } else { 0 };
                assert_eq!(ranks[i], expected, "level {l} state {}", v.label);
            }
        }
        assert_eq!(p.emptied_at, Some(2));
        assert!(d.graph.is_valid_ranking(&p.ranks));
    }

    #[test]
    fn accepting_branch_gets_top_rank() {
        let d = lasso_dag(&a_fig2(), &b_omega(), DagMode::Reduced);
        let p = classical_ranks(&d);
        assert_eq!(p.emptied_at, None);
        let i = d.vertex(3, 1).unwrap();
        assert_eq!(p.ranks[d.graph.period_start()][i], 2);
        assert!(d.graph.is_valid_ranking(&p.ranks));
    }

    #[test]
    fn without_accepting_states_everything_infinite_is_rank_one() {
        let mut a = a_fig2();
        a.set_accepting_states(StateSet::new(4));
        let d = lasso_dag(&a, &b_omega(), DagMode::Full);
        let an = d.graph.analysis();
        let p = classical_ranks(&d);
        for (l, level) in an.finite.iter().enumerate() {
            for (i, &fin) in level.iter().enumerate() {
                if !fin {
                    assert_eq!(p.ranks[l][i], 1);
                }
            }
        }
    }

    #[test]
    fn bad_order_loses_the_accepting_branch() {
        let a = n_fig1().with_order(vec![2, 1, 0, 3]).unwrap();
        assert!(member(&a, &b_omega()));
        let r = analyze_dag(&lasso_dag(&a, &b_omega(), DagMode::Reduced));
        assert!(!r.accepting);
        // with the natural order the branch survives
        let r = analyze_dag(&lasso_dag(&n_fig1(), &b_omega(), DagMode::Reduced));
        assert!(r.accepting);
    }

    #[test]
    fn one_state_loop() {
        let mut a = Nbw::new(1, &["a"]);
        a.set_initial(0);
        a.add_transition(0, 0, 0);
        let w = LassoWord::new(vec![], vec![0, 0, 0]);
        let d = lasso_dag(&a, &w, DagMode::Reduced);
        assert_eq!(d.graph.period_len(), 3);
        assert_eq!(analyze_dag(&d).omega_branch_count_at_tail, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reduced_dags_of_finitely_ambiguous_automata(seed in 0u64..10_000, n in 1usize..=4) {
            let a = random_nbw(n, 2, 0.4, 0.4, seed, Shape::Fanbw).unwrap();
            for w in enumerate_lassos(2, 2, 2) {
                let m = member(&a, &w);
                let full = lasso_dag(&a, &w, DagMode::Full);
                let red = lasso_dag(&a, &w, DagMode::Reduced);
                let fr = analyze_dag(&full);
                let rr = analyze_dag(&red);
                prop_assert!(red.graph.is_codeterministic());
                prop_assert_eq!(fr.accepting, m);
                prop_assert_eq!(rr.accepting, m);
                prop_assert!(rr.omega_branch_count_at_tail <= n);
                prop_assert_eq!(rr.stable_level.is_some(), !m);
                let p = classical_ranks(&red);
                prop_assert_eq!(p.emptied_at.is_some_and(|k| k <= 3), !m);
                prop_assert!(red.graph.is_valid_ranking(&p.ranks));
                if m {
                    prop_assert!(fr.separating_level.is_some());
                }
            }
        }

        #[test]
        fn full_dags_rank_within_2n(seed in 0u64..10_000, n in 1usize..=4) {
            let a = random_nbw(n, 2, 0.4, 0.4, seed, Shape::Any).unwrap();
            for w in enumerate_lassos(2, 2, 2) {
                let full = lasso_dag(&a, &w, DagMode::Full);
                let p = classical_ranks(&full);
                prop_assert!(full.graph.is_valid_ranking(&p.ranks));
                let m = member(&a, &w);
                prop_assert_eq!(p.emptied_at.is_some(), !m);
                if let Some(k) = p.emptied_at {
                    prop_assert!(k <= 2 * n + 1);
                }
            }
        }
    }
}
