//! Slices, disambiguation and the slice-based complement for finitely
//! ambiguous automata.

use crate::bitset::StateSet;
use crate::classify::is_finitely_ambiguous;
use crate::error::{Error, Result};
use crate::explore::{explore, Complement};
use crate::nbw::{Nbw, Symbol};
use crate::run_dag::ReducedStep;

/// An ordered sequence of nonempty, pairwise disjoint state sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slice(pub Vec<StateSet>);

impl Slice {
    /// Splits `set` into its non-accepting and accepting parts, dropping empty ones.
    pub fn initial(a: &Nbw, set: &StateSet) -> Slice {
        let parts = [set.difference(a.accepting()), set.intersection(a.accepting())];
        Slice(parts.into_iter().filter(|s| !s.is_empty()).collect())
    }

    pub fn is_well_formed(&self) -> bool {
        let mut seen = StateSet::new(0);
        for s in &self.0 {
            if s.is_empty() || !s.is_disjoint(&seen) {
                return false;
            }
            seen.union_with(s);
        }
        true
    }

    pub fn render(&self, a: &Nbw) -> String {
        let parts: Vec<String> = self.0.iter().map(|s| s.display_with(a.names()).to_string()).collect();
        format!("<{}>", parts.join(","))
    }
}

/// Successor slice together with, for each old block, the new indices of its
/// surviving children.
fn slice_step(a: &Nbw, s: &Slice, sym: Symbol) -> (Slice, Vec<Vec<usize>>) {
    let mut parts = Vec::with_capacity(2 * s.0.len());
    for block in &s.0 {
        let image = a.post(block, sym);
        parts.push(image.difference(a.accepting()));
        parts.push(image.intersection(a.accepting()));
    }
    // keep each state only in its rightmost block
    let mut later = StateSet::new(a.n());
    for part in parts.iter_mut().rev() {
        part.difference_with(&later);
        later.union_with(part);
    }
    let mut new_index = vec![None; parts.len()];
    let mut blocks = Vec::new();
    for (i, part) in parts.into_iter().enumerate() {
        if !part.is_empty() {
            new_index[i] = Some(blocks.len());
            blocks.push(part);
        }
    }
    let children = (0..s.0.len()).map(|j| [2 * j, 2 * j + 1].iter().filter_map(|&i| new_index[i]).collect()).collect();
    (Slice(blocks), children)
}

pub fn slice_successor(a: &Nbw, s: &Slice, sym: Symbol) -> Slice {
    slice_step(a, s, sym).0
}

/// A finitely ambiguous automaton with the same language.
///
/// States are pairs of a slice and one of its blocks. A run follows one
/// block of the slice DAG into one of its children; it dies with the block.
/// A state is accepting if its block consists of accepting states.
pub fn disambiguate(a: &Nbw) -> Nbw {
    let a = a.complete();
    let init = Slice::initial(&a, a.initial());
    let initial = (0..init.0.len()).map(|j| (init.clone(), j)).collect();
    let c = explore(
        a.alphabet(),
        initial,
        u128::MAX,
        |(s, j), sym| {
            let (next, children) = slice_step(&a, s, sym);
            children[*j].iter().map(|&k| (next.clone(), k)).collect()
        },
        |(s, j)| s.0[*j].is_subset(a.accepting()),
        |(s, j)| format!("{}#{j}", s.render(&a)),
    );
    c.automaton
}

/// Macrostate of the slice-based complement: a subset before the jump, and
/// the tracked sets `(N, C, B)` after it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SliceMacrostate {
    Subset(StateSet),
    Tracking { n: StateSet, c: StateSet, b: StateSet },
}

impl SliceMacrostate {
    pub fn tracking(n: StateSet, c: StateSet, b: StateSet) -> Self {
        SliceMacrostate::Tracking { n, c, b }
    }

    pub fn is_accepting(&self) -> bool {
        matches!(self, SliceMacrostate::Tracking { b, .. } if b.is_empty())
    }

    /// `B ⊆ C ⊆ N` in the tracking phase.
    pub fn is_well_formed(&self) -> bool {
        match self {
            SliceMacrostate::Subset(_) => true,
            SliceMacrostate::Tracking { n, c, b } => b.is_subset(c) && c.is_subset(n),
        }
    }

    pub fn render(&self, a: &Nbw) -> String {
        let names = a.names();
        match self {
            SliceMacrostate::Subset(s) => s.display_with(names).to_string(),
            SliceMacrostate::Tracking { n, c, b } => {
                format!("({},{},{})", n.display_with(names), c.display_with(names), b.display_with(names))
            }
        }
    }
}

/// Successor of a tracking macrostate. All sets follow the reduced DAG
/// with the whole level `N` as context.
pub fn slc_track(a: &Nbw, n: &StateSet, c: &StateSet, b: &StateSet, sym: Symbol) -> SliceMacrostate {
    let step = ReducedStep::new(a, n, sym);
    let n2 = step.image(n);
    let c2 = step.image(c).union(&n2.intersection(a.accepting()));
    let b2 = if b.is_empty() { c2.clone() } else { step.image(b) };
    SliceMacrostate::Tracking { n: n2, c: c2, b: b2 }
}

/// The jump from the subset phase into the tracking phase.
pub fn slc_jump(a: &Nbw, s: &StateSet, sym: Symbol) -> SliceMacrostate {
    let f = s.intersection(a.accepting());
    slc_track(a, s, &f, &f, sym)
}

pub fn slc_successors(a: &Nbw, m: &SliceMacrostate, sym: Symbol) -> Vec<SliceMacrostate> {
    match m {
        SliceMacrostate::Subset(s) => vec![SliceMacrostate::Subset(a.post(s, sym)), slc_jump(a, s, sym)],
        SliceMacrostate::Tracking { n, c, b } => vec![slc_track(a, n, c, b, sym)],
    }
}

pub fn slc_bound(n: usize) -> u128 {
    let n = n as u32;
    2u128.saturating_pow(n).saturating_add(4u128.saturating_pow(n))
}

/// Slice-based complement of a finitely ambiguous automaton. The input is
/// completed first.
pub fn slc_complement_fa(a: &Nbw) -> Result<Complement<SliceMacrostate>> {
    let a = a.complete();
    if !is_finitely_ambiguous(&a) {
        return Err(Error::NotFinitelyAmbiguous);
    }
    Ok(slc_complement_unchecked(&a))
}

/// Same as [`slc_complement_fa`] without the ambiguity check. The result is
/// only a complement if `a` is finitely ambiguous.
pub fn slc_complement_unchecked(a: &Nbw) -> Complement<SliceMacrostate> {
    let a = a.complete();
    explore(
        a.alphabet(),
        vec![SliceMacrostate::Subset(a.initial().clone())],
        slc_bound(a.n()),
        |m, sym| slc_successors(&a, m, sym),
        SliceMacrostate::is_accepting,
        |m| m.render(&a),
    )
}

/// Complement of an arbitrary automaton: disambiguate, then apply the
/// slice-based construction.
pub fn slc_complement_general(a: &Nbw) -> Complement<SliceMacrostate> {
    slc_complement_unchecked(&disambiguate(a))
}

/// `m1` accepts at least what `m2` accepts when both track the same level
/// and `m1` tracks fewer accepting visits.
pub fn slc_subsumes(m1: &SliceMacrostate, m2: &SliceMacrostate) -> Result<bool> {
    match (m1, m2) {
        (SliceMacrostate::Tracking { n: n1, c: c1, .. }, SliceMacrostate::Tracking { n: n2, c: c2, .. }) => {
            Ok(n1 == n2 && c1.is_subset(c2))
        }
        _ => Err(Error::PhaseMismatch),
    }
}
