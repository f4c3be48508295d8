//! Codeterministic run DAGs of limit deterministic automata and the
//! complement built on them.
//!
//! The nondeterministic part of a level is kept as a single set vertex.
//! Deterministic vertices carry priorities: when several candidate edges
//! lead to the same deterministic state, only the edge from the vertex with
//! the lowest priority is kept. Deterministic states are ordered before
//! nondeterministic ones.

use std::collections::BTreeMap;

use crate::bitset::StateSet;
use crate::classify::LdbwPartition;
use crate::error::Result;
use crate::explore::{explore, Complement};
use crate::lasso::LassoWord;
use crate::nbw::{Nbw, State, Symbol};
use crate::run_dag::{unroll, DagReport, DagVertex, LevelDag};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LdbwVertex {
    Det(State),
    Nondet(StateSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LdbwLabel {
    pub vertex: LdbwVertex,
    pub priority: usize,
}

#[derive(Clone, Debug)]
pub struct LdbwDag {
    pub graph: LevelDag<LdbwLabel>,
}

impl LdbwDag {
    pub fn report(&self) -> DagReport {
        self.graph.report()
    }

    /// Priority of the deterministic vertex for `q` at `level`.
    pub fn det_priority(&self, level: usize, q: State) -> Option<usize> {
        self.graph.level(level).iter().find(|v| v.label.vertex == LdbwVertex::Det(q)).map(|v| v.label.priority)
    }

    /// The nondeterministic vertex at `level` and its priority.
    pub fn nondet(&self, level: usize) -> Option<(&StateSet, usize)> {
        self.graph.level(level).iter().find_map(|v| match &v.label.vertex {
            LdbwVertex::Nondet(s) => Some((s, v.label.priority)),
            LdbwVertex::Det(_) => None,
        })
    }
}

/// The partition extended to the completion of `a`: a completion sink is
/// deterministic.
fn extend_partition(a: &Nbw, p: &LdbwPartition) -> LdbwPartition {
    let n = a.n();
    let mut q_d = StateSet::from_states(n, p.q_d.iter());
    let q_n = StateSet::from_states(n, p.q_n.iter());
    for q in 0..n {
        if !q_d.contains(q) && !q_n.contains(q) {
            q_d.insert(q);
        }
    }
    LdbwPartition { q_n, q_d }
}

fn prepare(a: &Nbw, p: &LdbwPartition) -> Result<(Nbw, LdbwPartition)> {
    let a = a.complete();
    let p = extend_partition(&a, p);
    p.validate(&a)?;
    Ok((a, p))
}

/// Renumbers priorities to `1..=m` keeping their order, then sorts the level
/// with deterministic vertices first in state order.
fn normalize(a: &Nbw, mut level: Vec<DagVertex<LdbwLabel>>) -> Vec<DagVertex<LdbwLabel>> {
    let mut prios: Vec<usize> = level.iter().map(|v| v.label.priority).collect();
    prios.sort();
    prios.dedup();
    for v in &mut level {
        v.label.priority = prios.binary_search(&v.label.priority).unwrap() + 1;
    }
    level.sort_by_key(|v| match &v.label.vertex {
        LdbwVertex::Det(q) => (0, a.position(*q)),
        LdbwVertex::Nondet(_) => (1, 0),
    });
    level
}

fn by_position(a: &Nbw, set: &StateSet) -> Vec<State> {
    let mut states: Vec<State> = set.iter().collect();
    states.sort_by_key(|&q| a.position(q));
    states
}

fn ldbw_step(a: &Nbw, p: &LdbwPartition, level: &[DagVertex<LdbwLabel>], s: Symbol) -> Vec<DagVertex<LdbwLabel>> {
    // deterministic successors keep their lowest-priority predecessor
    let mut det: BTreeMap<State, (usize, usize)> = BTreeMap::new();
    for (i, v) in level.iter().enumerate() {
        if let LdbwVertex::Det(q) = v.label.vertex {
            let d = p.delta_d(a, q, s);
            let candidate = (v.label.priority, i);
            det.entry(d).and_modify(|best| *best = (*best).min(candidate)).or_insert(candidate);
        }
    }
    let mut next: Vec<DagVertex<LdbwLabel>> = det
        .iter()
        .map(|(&d, &(priority, i))| DagVertex {
            label: LdbwLabel { vertex: LdbwVertex::Det(d), priority },
            accepting: a.is_accepting(d),
            preds: vec![i],
        })
        .collect();
    let nondet = level.iter().enumerate().find_map(|(i, v)| match &v.label.vertex {
        LdbwVertex::Nondet(set) => Some((i, set, v.label.priority)),
        LdbwVertex::Det(_) => None,
    });
    if let Some((i, set, priority)) = nondet {
        let mut jumps = p.delta_j(a, set, s);
        for &d in det.keys() {
            jumps.remove(d);
        }
        let jumps = by_position(a, &jumps);
        for (k, &j) in jumps.iter().enumerate() {
            next.push(DagVertex {
                label: LdbwLabel { vertex: LdbwVertex::Det(j), priority: priority + k },
                accepting: a.is_accepting(j),
                preds: vec![i],
            });
        }
        let rest = p.delta_n(a, set, s);
        if !rest.is_empty() {
            next.push(DagVertex {
                label: LdbwLabel { vertex: LdbwVertex::Nondet(rest), priority: priority + jumps.len() },
                accepting: false,
                preds: vec![i],
            });
        }
    }
    normalize(a, next)
}

/// Codeterministic DAG of a limit deterministic automaton over `w`.
/// Priorities are renumbered densely on every level, which keeps their
/// relative order and hence the kept edges.
pub fn ldbw_codet_dag(a: &Nbw, p: &LdbwPartition, w: &LassoWord) -> Result<LdbwDag> {
    let (a, p) = prepare(a, p)?;
    let mut level0 = Vec::new();
    let initial_det = by_position(&a, &a.initial().intersection(&p.q_d));
    for (k, &q) in initial_det.iter().enumerate() {
        level0.push(DagVertex {
            label: LdbwLabel { vertex: LdbwVertex::Det(q), priority: k + 1 },
            accepting: a.is_accepting(q),
            preds: Vec::new(),
        });
    }
    let initial_nondet = a.initial().intersection(&p.q_n);
    if !initial_nondet.is_empty() {
        level0.push(DagVertex {
            label: LdbwLabel { vertex: LdbwVertex::Nondet(initial_nondet), priority: initial_det.len() + 1 },
            accepting: false,
            preds: Vec::new(),
        });
    }
    let level0 = normalize(&a, level0);
    let graph = unroll(
        w,
        level0,
        |level, s| ldbw_step(&a, &p, level, s),
        |level| level.iter().map(|v| v.label.clone()).collect::<Vec<_>>(),
    );
    Ok(LdbwDag { graph })
}

/// Macrostate of the complement: a subset before the jump, and the sets
/// `(N, S, B, C)` after it. `N` holds nondeterministic states, `S` safe
/// deterministic runs, `B` runs under observation and `C` runs waiting for
/// the next observation round.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NsbcMacrostate {
    Subset(StateSet),
    Tracking { n: StateSet, s: StateSet, b: StateSet, c: StateSet },
}

impl NsbcMacrostate {
    pub fn tracking(n: StateSet, s: StateSet, b: StateSet, c: StateSet) -> Self {
        NsbcMacrostate::Tracking { n, s, b, c }
    }

    pub fn is_accepting(&self) -> bool {
        matches!(self, NsbcMacrostate::Tracking { b, .. } if b.is_empty())
    }

    /// `S`, `B`, `C` are pairwise disjoint and `S` avoids accepting states.
    pub fn is_well_formed(&self, a: &Nbw, p: &LdbwPartition) -> bool {
        match self {
            NsbcMacrostate::Subset(_) => true,
            NsbcMacrostate::Tracking { n, s, b, c } => {
                n.is_subset(&p.q_n)
                    && [s, b, c].iter().all(|x| x.is_subset(&p.q_d))
                    && s.is_disjoint(b)
                    && s.is_disjoint(c)
                    && b.is_disjoint(c)
                    && s.is_disjoint(a.accepting())
            }
        }
    }

    pub fn render(&self, a: &Nbw) -> String {
        let names = a.names();
        match self {
            NsbcMacrostate::Subset(r) => r.display_with(names).to_string(),
            NsbcMacrostate::Tracking { n, s, b, c } => format!(
                "({},{},{},{})",
                n.display_with(names),
                s.display_with(names),
                b.display_with(names),
                c.display_with(names)
            ),
        }
    }
}

pub fn nsbc_track(a: &Nbw, p: &LdbwPartition, m: (&StateSet, &StateSet, &StateSet, &StateSet), sym: Symbol) -> NsbcMacrostate {
    let (n, s, b, c) = m;
    let n2 = p.delta_n(a, n, sym);
    let s_image = p.delta_d_set(a, s, sym);
    let s2 = s_image.difference(a.accepting());
    let mut pending = p.delta_d_set(a, c, sym);
    pending.union_with(&p.delta_j(a, n, sym));
    pending.union_with(&s_image.intersection(a.accepting()));
    pending.difference_with(&s2);
    let (b2, c2) = if b.is_empty() {
        (pending, StateSet::new(a.n()))
    } else {
        let b2 = p.delta_d_set(a, b, sym).difference(&s2);
        let c2 = pending.difference(&b2);
        (b2, c2)
    };
    NsbcMacrostate::Tracking { n: n2, s: s2, b: b2, c: c2 }
}

/// Tracking macrostate a subset is bound to before the jump.
pub fn nsbc_binding(a: &Nbw, p: &LdbwPartition, r: &StateSet) -> (StateSet, StateSet, StateSet, StateSet) {
    (
        r.intersection(&p.q_n),
        r.intersection(&p.q_d).difference(a.accepting()),
        r.intersection(a.accepting()),
        StateSet::new(a.n()),
    )
}

pub fn nsbc_jump(a: &Nbw, p: &LdbwPartition, r: &StateSet, sym: Symbol) -> NsbcMacrostate {
    let (n, s, b, c) = nsbc_binding(a, p, r);
    nsbc_track(a, p, (&n, &s, &b, &c), sym)
}

pub fn nsbc_successors(a: &Nbw, p: &LdbwPartition, m: &NsbcMacrostate, sym: Symbol) -> Vec<NsbcMacrostate> {
    match m {
        NsbcMacrostate::Subset(r) => vec![NsbcMacrostate::Subset(a.post(r, sym)), nsbc_jump(a, p, r, sym)],
        NsbcMacrostate::Tracking { n, s, b, c } => vec![nsbc_track(a, p, (n, s, b, c), sym)],
    }
}

/// `2^|Q| + 2^|Q_N| * 3^|F| * 4^|Q_D \ F|`.
pub fn nsbc_bound(a: &Nbw, p: &LdbwPartition) -> u128 {
    let f = a.accepting().len() as u32;
    let qn = p.q_n.len() as u32;
    let rest = p.q_d.difference(a.accepting()).len() as u32;
    let tracking = 2u128.saturating_pow(qn).saturating_mul(3u128.saturating_pow(f)).saturating_mul(4u128.saturating_pow(rest));
    2u128.saturating_pow(a.n() as u32).saturating_add(tracking)
}

/// Complement of a limit deterministic automaton under partition `p`. The
/// input is completed first; a completion sink joins the deterministic part.
pub fn nsbc_complement(a: &Nbw, p: &LdbwPartition) -> Result<Complement<NsbcMacrostate>> {
    let (a, p) = prepare(a, p)?;
    Ok(explore(
        a.alphabet(),
        vec![NsbcMacrostate::Subset(a.initial().clone())],
        nsbc_bound(&a, &p),
        |m, sym| nsbc_successors(&a, &p, m, sym),
        NsbcMacrostate::is_accepting,
        |m| m.render(&a),
    ))
}
