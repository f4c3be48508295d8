//! Language-level queries on lasso words and whole automata.

use std::collections::{HashMap, VecDeque};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{is_finitely_ambiguous, shortest_word};
use crate::error::{Error, Result};
use crate::graph::{coreachable, sccs};
use crate::lasso::{enumerate_lassos, LassoWord};
use crate::nbw::{Nbw, State, Symbol};

/// Product of the automaton with the positions of a lasso word, restricted
/// to nodes reachable from the initial states.
struct LassoProduct {
    /// Position and state of every node.
    nodes: Vec<(usize, State)>,
    succ: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

impl LassoProduct {
    fn new(a: &Nbw, w: &LassoWord) -> Self {
        Self::with_successors(a, w, |q, s| a.succ(q, s).iter())
    }

    fn with_successors<I: IntoIterator<Item = State>>(a: &Nbw, w: &LassoWord, succ_of: impl Fn(State, Symbol) -> I) -> Self {
        let stem = w.stem().len();
        let len = stem + w.cycle().len();
        let next_pos = |i: usize| if i + 1 < len { i + 1 } else { stem };
        let mut index: HashMap<(usize, State), usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut queue = VecDeque::new();
        for q in a.initial().iter() {
            index.insert((0, q), nodes.len());
            nodes.push((0, q));
            queue.push_back(nodes.len() - 1);
        }
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        while let Some(v) = queue.pop_front() {
            let (i, q) = nodes[v];
            let j = next_pos(i);
            for r in succ_of(q, w.letter(i)) {
                let id = *index.entry((j, r)).or_insert_with(|| {
                    nodes.push((j, r));
                    succ.push(Vec::new());
                    queue.push_back(nodes.len() - 1);
                    nodes.len() - 1
                });
                succ[v].push(id);
            }
        }
        let accepting = nodes.iter().map(|&(_, q)| a.is_accepting(q)).collect();
        LassoProduct { nodes, succ, accepting }
    }

    /// Nodes lying in a cycle that contains an accepting node.
    fn accepting_cycle_nodes(&self) -> Vec<bool> {
        let s = sccs(&self.succ);
        let acc_comp: Vec<bool> = (0..s.members.len())
            .map(|c| s.nontrivial[c] && s.members[c].iter().any(|&v| self.accepting[v]))
            .collect();
        (0..self.nodes.len()).map(|v| acc_comp[s.comp[v]]).collect()
    }
}

/// Whether the automaton accepts `stem · loop^ω`.
pub fn member(a: &Nbw, w: &LassoWord) -> bool {
    LassoProduct::new(a, w).accepting_cycle_nodes().into_iter().any(|b| b)
}

/// Successor lists of every state, for repeated membership queries on one
/// large automaton.
struct SparseDelta(Vec<Vec<Vec<State>>>);

impl SparseDelta {
    fn new(a: &Nbw) -> Self {
        SparseDelta((0..a.n()).map(|q| (0..a.num_symbols()).map(|s| a.succ(q, s).iter().collect()).collect()).collect())
    }

    fn member(&self, a: &Nbw, w: &LassoWord) -> bool {
        let p = LassoProduct::with_successors(a, w, |q, s| self.0[q][s].iter().copied());
        p.accepting_cycle_nodes().into_iter().any(|b| b)
    }
}

/// Membership by explicit enumeration of runs, independent of [`member`].
///
/// A run is accepting in lasso shape iff it is in the same state at two
/// loop boundaries and visits an accepting state in between. Such a run, if
/// any exists, already shows within `2n + 1` loop rounds.
pub fn member_by_runs(a: &Nbw, w: &LassoWord) -> bool {
    let rounds = 2 * a.n() + 1;
    let len = w.stem().len() + rounds * w.cycle().len();
    let mut boundary: Vec<(State, usize)> = Vec::new();
    a.initial().iter().any(|q| runs_from(a, w, q, 0, 0, len, &mut boundary))
}

fn runs_from(a: &Nbw, w: &LassoWord, q: State, i: usize, seen_f: usize, len: usize, boundary: &mut Vec<(State, usize)>) -> bool {
    let stem = w.stem().len();
    let at_boundary = i >= stem && (i - stem).is_multiple_of(w.cycle().len());
    if at_boundary {
        if boundary.iter().any(|&(p, f)| p == q && f < seen_f) {
            return true;
        }
        boundary.push((q, seen_f));
    }
    let mut found = false;
    if i < len {
        let f = seen_f + a.is_accepting(q) as usize;
        for r in a.succ(q, w.letter(i)).iter() {
            if runs_from(a, w, r, i + 1, f, len, boundary) {
                found = true;
                break;
            }
        }
    }
    if at_boundary {
        boundary.pop();
    }
    found
}

/// Whether the automaton has infinitely many accepting runs on the word.
///
/// This holds iff some reachable product node on a cycle can continue along
/// that cycle and also leave through a different edge into a node from
/// which an accepting run exists.
pub fn has_infinitely_many_accepting_runs(a: &Nbw, w: &LassoWord) -> bool {
    let p = LassoProduct::new(a, w);
    let s = sccs(&p.succ);
    let live = coreachable(&p.succ, &p.accepting_cycle_nodes());
    (0..p.nodes.len()).any(|v| {
        if !s.on_cycle(v) {
            return false;
        }
        p.succ[v].iter().any(|&x| {
            live[x] && p.succ[v].iter().any(|&c| c != x && s.comp[c] == s.comp[v])
        })
    })
}

/// A lasso word accepted by the automaton, or `None` if the language is empty.
pub fn is_empty(a: &Nbw) -> Option<LassoWord> {
    let n = a.n();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|p| (0..a.num_symbols()).flat_map(|s| a.succ(p, s).iter()).collect())
        .collect();
    let s = sccs(&succ);
    let reach = a.reachable();
    // closest accepting state on a cycle
    let target = bfs_order(a)
        .into_iter()
        .find(|&q| reach.contains(q) && a.is_accepting(q) && s.on_cycle(q))?;
    let stem = shortest_word(a, a.initial(), target)?;
    let comp = s.comp[target];
    let cycle = shortest_cycle(a, target, |q| s.comp[q] == comp);
    Some(LassoWord::new(stem, cycle).canonical())
}

fn bfs_order(a: &Nbw) -> Vec<State> {
    let mut seen = a.initial().clone();
    let mut order: Vec<State> = a.initial().iter().collect();
    let mut i = 0;
    while i < order.len() {
        let p = order[i];
        i += 1;
        for s in 0..a.num_symbols() {
            for q in a.succ(p, s).iter() {
                if !seen.contains(q) {
                    seen.insert(q);
                    order.push(q);
                }
            }
        }
    }
    order
}

/// Shortest nonempty word leading from `q` back to `q` through states allowed by `keep`.
fn shortest_cycle(a: &Nbw, q: State, keep: impl Fn(State) -> bool) -> Vec<Symbol> {
    let n = a.n();
    let mut parent: Vec<Option<(State, Symbol)>> = vec![None; n];
    let mut queue = VecDeque::new();
    for s in 0..a.num_symbols() {
        for r in a.succ(q, s).iter() {
            if r == q {
                return vec![s];
            }
            if keep(r) && parent[r].is_none() {
                parent[r] = Some((q, s));
                queue.push_back(r);
            }
        }
    }
    while let Some(p) = queue.pop_front() {
        for s in 0..a.num_symbols() {
            for r in a.succ(p, s).iter() {
                if r == q {
                    let mut word = vec![s];
                    let mut cur = p;
                    while cur != q {
                        let (prev, sym) = parent[cur].unwrap();
                        word.push(sym);
                        cur = prev;
                    }
                    word.reverse();
                    return word;
                }
                if keep(r) && parent[r].is_none() {
                    parent[r] = Some((p, s));
                    queue.push_back(r);
                }
            }
        }
    }
    panic!("state {q} is not on a cycle")
}

/// Büchi product accepting the intersection of both languages. Only
/// reachable product states are built.
pub fn intersect(a: &Nbw, b: &Nbw) -> Result<Nbw> {
    if !a.same_alphabet(b) {
        return Err(Error::AlphabetMismatch);
    }
    type Node = (State, State, u8);
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    for p in a.initial().iter() {
        for q in b.initial().iter() {
            index.insert((p, q, 0), nodes.len());
            nodes.push((p, q, 0));
        }
    }
    let num_initial = nodes.len();
    let mut edges = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (p, q, c) = nodes[i];
        // switch copies after seeing the accepting state of the tracked side
        let c2 = match c {
            0 if a.is_accepting(p) => 1,
            1 if b.is_accepting(q) => 0,
            _ => c,
        };
        for s in 0..a.num_symbols() {
            for p2 in a.succ(p, s).iter() {
                for q2 in b.succ(q, s).iter() {
                    let key = (p2, q2, c2);
                    let j = *index.entry(key).or_insert_with(|| {
                        nodes.push(key);
                        nodes.len() - 1
                    });
                    edges.push((i, s, j));
                }
            }
        }
        i += 1;
    }
    let n = nodes.len();
    let mut out = Nbw::new(n, a.alphabet());
    for (i, s, j) in edges {
        out.add_transition(i, s, j);
    }
    for (i, &(p, _, c)) in nodes.iter().enumerate() {
        if i < num_initial {
            out.set_initial(i);
        }
        if c == 0 && a.is_accepting(p) {
            out.set_accepting(i);
        }
    }
    out.set_names(nodes.iter().map(|&(p, q, c)| format!("({},{},{c})", a.name(p), b.name(q))).collect());
    Ok(out)
}

/// Result of a bounded or exact language check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub passed: bool,
    pub counterexample: Option<LassoWord>,
    pub lassos_tested: usize,
    /// Membership of the counterexample in the left and right automaton.
    pub membership: Option<(bool, bool)>,
}

/// Checks `L(c) = Σ^ω \ L(a)` on every lasso with bounded stem and loop.
pub fn complement_check(a: &Nbw, c: &Nbw, max_stem: usize, max_loop: usize) -> Result<CheckReport> {
    if !a.same_alphabet(c) {
        return Err(Error::AlphabetMismatch);
    }
    let lassos = enumerate_lassos(a.num_symbols(), max_stem, max_loop);
    let (da, dc) = (SparseDelta::new(a), SparseDelta::new(c));
    for (i, w) in lassos.iter().enumerate() {
        let (x, y) = (da.member(a, w), dc.member(c, w));
        if x == y {
            return Ok(CheckReport {
                passed: false,
                counterexample: Some(w.clone()),
                lassos_tested: i + 1,
                membership: Some((x, y)),
            });
        }
    }
    Ok(CheckReport { passed: true, counterexample: None, lassos_tested: lassos.len(), membership: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Any,
    Ldbw,
    Fanbw,
}

impl FromStr for Shape {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "any" => Ok(Shape::Any),
            "ldbw" => Ok(Shape::Ldbw),
            "fanbw" => Ok(Shape::Fanbw),
            _ => Err(format!("unknown shape `{s}` (expected any, ldbw or fanbw)")),
        }
    }
}

const FANBW_ATTEMPTS: usize = 1000;

/// A seeded random complete automaton with `n` states over the letters
/// `a, b, c, ...`.
///
/// Each potential transition is present with probability `density` and each
/// state is accepting with probability `acc_fraction`; state 0 is always
/// initial. Missing transitions are filled with one random target, so no
/// state is added. `Ldbw` builds a deterministic part closed under
/// transitions that holds every accepting state; `Fanbw` samples until the
/// automaton is finitely ambiguous.
pub fn random_nbw(n: usize, alphabet_size: usize, density: f64, acc_fraction: f64, seed: u64, shape: Shape) -> Result<Nbw> {
    assert!(n >= 1 && alphabet_size >= 1, "need at least one state and one symbol");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match shape {
        Shape::Any => Ok(sample_any(&mut rng, n, alphabet_size, density, acc_fraction)),
        Shape::Ldbw => Ok(sample_ldbw(&mut rng, n, alphabet_size, density, acc_fraction)),
        Shape::Fanbw => {
            for _ in 0..FANBW_ATTEMPTS {
                let a = sample_any(&mut rng, n, alphabet_size, density, acc_fraction);
                if is_finitely_ambiguous(&a) {
                    return Ok(a);
                }
            }
            Err(Error::ShapeUnsatisfiable(FANBW_ATTEMPTS))
        }
    }
}

fn letters(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("s{i}") })
        .collect()
}

fn sample_any(rng: &mut ChaCha8Rng, n: usize, k: usize, density: f64, acc: f64) -> Nbw {
    let mut a = Nbw::new(n, &letters(k));
    a.set_initial(0);
    for q in 0..n {
        if rng.gen_bool(acc) {
            a.set_accepting(q);
        }
        for s in 0..k {
            for r in 0..n {
                if rng.gen_bool(density) {
                    a.add_transition(q, s, r);
                }
            }
            if a.succ(q, s).is_empty() {
                a.add_transition(q, s, rng.gen_range(0..n));
            }
        }
    }
    a
}

fn sample_ldbw(rng: &mut ChaCha8Rng, n: usize, k: usize, density: f64, acc: f64) -> Nbw {
    let d = rng.gen_range(1..=n);
    let first_d = n - d;
    let mut a = Nbw::new(n, &letters(k));
    a.set_initial(0);
    for q in 0..n {
        let deterministic = q >= first_d;
        if deterministic && rng.gen_bool(acc) {
            a.set_accepting(q);
        }
        for s in 0..k {
            if deterministic {
                a.add_transition(q, s, rng.gen_range(first_d..n));
                continue;
            }
            for r in 0..n {
                if rng.gen_bool(density) {
                    a.add_transition(q, s, r);
                }
            }
            if a.succ(q, s).is_empty() {
                a.add_transition(q, s, rng.gen_range(0..n));
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, ldbw_partition};
    use crate::bitset::StateSet;
    use crate::fixtures::*;
    use crate::lasso::enumerate_lassos;
    use proptest::prelude::*;

    fn w(stem: &[usize], cycle: &[usize]) -> LassoWord {
        LassoWord::new(stem.to_vec(), cycle.to_vec())
    }

    #[test]
    fn figure_two_language() {
        let a = a_fig2();
        assert!(member(&a, &w(&[], &[1])));
        assert!(member(&a, &w(&[0, 0], &[1])));
        assert!(!member(&a, &w(&[1, 1], &[0])));
        assert!(!member(&a, &w(&[], &[0])));
        assert!(!member(&a, &w(&[], &[0, 1])));
    }

    #[test]
    fn no_accepting_states_means_empty() {
        let mut a = n_fig1();
        a.set_accepting_states(StateSet::new(4));
        for x in enumerate_lassos(2, 2, 2) {
            assert!(!member(&a, &x));
        }
        assert_eq!(is_empty(&a), None);
    }

    #[test]
    fn emptiness_witnesses() {
        assert_eq!(is_empty(&b_fig5()), None);
        let wit = is_empty(&a_fig2()).unwrap();
        assert!(member(&a_fig2(), &wit));
        assert_eq!(wit, w(&[], &[1]));
        let wit = is_empty(&f_partial()).unwrap();
        assert!(member(&f_partial(), &wit));
    }

    #[test]
    fn naive_membership_agrees_on_fixtures() {
        for name in crate::fixtures::NAMES {
            let a = by_name(name).unwrap();
            for x in enumerate_lassos(a.num_symbols(), 3, 3) {
                assert_eq!(member(&a, &x), member_by_runs(&a, &x), "{name} {x}");
            }
        }
    }

    #[test]
    fn completion_preserves_language() {
        let a = f_partial();
        let c = a.complete();
        assert_eq!(c.n(), a.n() + 1);
        for x in enumerate_lassos(2, 4, 4) {
            assert_eq!(member(&a, &x), member(&c, &x), "{x}");
        }
        // (ab)^ω and (abb)^ω are in, a^ω is not
        assert!(member(&c, &w(&[], &[0, 1])));
        assert!(member(&c, &w(&[], &[0, 1, 1])));
        assert!(!member(&c, &w(&[], &[0])));
    }

    #[test]
    fn infinitely_many_runs_on_fixtures() {
        let b_omega = w(&[], &[1]);
        assert!(has_infinitely_many_accepting_runs(&n_fig1(), &b_omega));
        assert!(has_infinitely_many_accepting_runs(&l_fig3(), &b_omega));
        assert!(!has_infinitely_many_accepting_runs(&a_fig2(), &b_omega));
        assert!(!has_infinitely_many_accepting_runs(&f_fig3(), &b_omega));
        // rejected words never have accepting runs
        assert!(!has_infinitely_many_accepting_runs(&n_fig1(), &w(&[], &[0])));
    }

    #[test]
    fn intersection_with_universal_and_self() {
        let mut u = Nbw::new(1, &["a", "b"]);
        u.set_initial(0);
        u.set_accepting(0);
        u.add_transition(0, 0, 0);
        u.add_transition(0, 1, 0);
        for a in [a_fig2(), n_fig1(), f_partial()] {
            let p = intersect(&a, &u).unwrap();
            let s = intersect(&a, &a).unwrap();
            for x in enumerate_lassos(2, 3, 3) {
                assert_eq!(member(&p, &x), member(&a, &x));
                assert_eq!(member(&s, &x), member(&a, &x));
            }
        }
        assert_eq!(intersect(&a_fig2(), &b_fig5()), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn self_is_not_a_complement() {
        let a = a_fig2();
        // a^ω comes first in the enumeration and is rejected by both sides
        let r = complement_check(&a, &a, 1, 1).unwrap();
        assert!(!r.passed);
        assert_eq!(r.counterexample, Some(w(&[], &[0])));
        assert_eq!(r.membership, Some((false, false)));
        assert_eq!(r.lassos_tested, 1);
        // b^ω is accepted by both sides
        let mut c = a.clone();
        c.set_accepting_states(a.all_states());
        let r = complement_check(&a, &c, 1, 1).unwrap();
        assert_eq!(r.counterexample, Some(w(&[], &[1])));
        assert_eq!(r.membership, Some((true, true)));
    }

    #[test]
    fn random_generation_is_seeded() {
        for shape in [Shape::Any, Shape::Ldbw, Shape::Fanbw] {
            let x = random_nbw(4, 2, 0.3, 0.3, 7, shape).unwrap();
            let y = random_nbw(4, 2, 0.3, 0.3, 7, shape).unwrap();
            assert_eq!(x, y);
            assert!(x.is_complete());
            assert_eq!(x.n(), 4);
        }
        for seed in 0..30 {
            let l = random_nbw(4, 2, 0.4, 0.5, seed, Shape::Ldbw).unwrap();
            assert!(ldbw_partition(&l).is_ok());
            let f = random_nbw(4, 2, 0.4, 0.5, seed, Shape::Fanbw).unwrap();
            assert!(classify(&f).finitely_ambiguous);
        }
    }

    #[test]
    fn shape_parsing() {
        assert_eq!("ldbw".parse::<Shape>(), Ok(Shape::Ldbw));
        assert!("tree".parse::<Shape>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn membership_matches_run_enumeration(seed in 0u64..10_000, n in 1usize..=4) {
            let a = random_nbw(n, 2, 0.35, 0.4, seed, Shape::Any).unwrap();
            for x in enumerate_lassos(2, 2, 2) {
                prop_assert_eq!(member(&a, &x), member_by_runs(&a, &x));
            }
        }

        #[test]
        fn emptiness_matches_exhaustive_search(seed in 0u64..10_000, n in 1usize..=3) {
            let a = random_nbw(n, 2, 0.3, 0.3, seed, Shape::Any).unwrap();
            let bound = 1usize << n;
            let some_accepted = enumerate_lassos(2, bound.min(4), bound.min(4)).iter().any(|x| member(&a, x));
            match is_empty(&a) {
                Some(wit) => prop_assert!(member(&a, &wit)),
                None => prop_assert!(!some_accepted),
            }
            if some_accepted {
                prop_assert!(is_empty(&a).is_some());
            }
        }

        #[test]
        fn ambiguity_decision_matches_run_counting(seed in 0u64..10_000, n in 1usize..=4) {
            let a = random_nbw(n, 2, 0.4, 0.4, seed, Shape::Any).unwrap();
            let lassos = enumerate_lassos(2, 3, 3);
            let infinite = lassos.iter().any(|x| has_infinitely_many_accepting_runs(&a, x));
            match crate::classify::infinite_ambiguity_witness(&a) {
                Some(wit) => prop_assert!(has_infinitely_many_accepting_runs(&a, &wit)),
                None => prop_assert!(!infinite),
            }
        }
    }
}
