//! Rank-based complementation with breakpoints.
//!
//! A macrostate guesses the ranks of the current DAG level and tracks, in
//! the breakpoint set, the even-ranked vertices still waiting to reach an
//! odd rank. The general construction ranks the full run DAG with ranks up
//! to `2n`. For finitely ambiguous automata the reduced DAG needs only the
//! ranks 0, 1 and 2.

use std::fmt::Write as _;

use crate::bitset::StateSet;
use crate::classify::is_finitely_ambiguous;
use crate::error::{Error, Result};
use crate::explore::{explore, Complement};
use crate::nbw::{Nbw, State, Symbol};
use crate::run_dag::ReducedStep;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Full run DAG, ranks up to `2n`.
    General,
    /// Reduced run DAG, ranks up to 2. Requires a finitely ambiguous input.
    Fa,
}

impl RankMode {
    pub fn max_rank(self, n: usize) -> u32 {
        match self {
            RankMode::General => 2 * n as u32,
            RankMode::Fa => 2,
        }
    }
}

/// A level ranking (`None` for states not on the level) and a breakpoint set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankMacrostate {
    pub ranking: Vec<Option<u32>>,
    pub breakpoint: StateSet,
}

impl RankMacrostate {
    pub fn new(ranking: Vec<Option<u32>>, breakpoint: StateSet) -> Self {
        RankMacrostate { ranking, breakpoint }
    }

    /// Builds a macrostate from a compact ranking string such as `"2___"`,
    /// one character per state, `_` for unranked states.
    pub fn parse(ranking: &str, breakpoint: &[State]) -> Self {
        let ranking: Vec<Option<u32>> = ranking.chars().map(|c| c.to_digit(10)).collect();
        let n = ranking.len();
        RankMacrostate { ranking, breakpoint: StateSet::from_states(n, breakpoint.iter().copied()) }
    }

    pub fn domain(&self) -> StateSet {
        let n = self.ranking.len();
        StateSet::from_states(n, (0..n).filter(|&q| self.ranking[q].is_some()))
    }

    fn with_parity(&self, parity: u32) -> StateSet {
        let n = self.ranking.len();
        StateSet::from_states(n, (0..n).filter(|&q| self.ranking[q].is_some_and(|r| r % 2 == parity)))
    }

    pub fn even(&self) -> StateSet {
        self.with_parity(0)
    }

    pub fn odd(&self) -> StateSet {
        self.with_parity(1)
    }

    pub fn is_accepting(&self) -> bool {
        self.breakpoint.is_empty()
    }

    /// Accepting states have even ranks, the breakpoint lies within the
    /// even-ranked states, and no rank exceeds `max_rank`.
    pub fn is_well_formed(&self, a: &Nbw, max_rank: u32) -> bool {
        let ranks_ok = self.ranking.iter().enumerate().all(|(q, r)| match r {
            Some(r) => *r <= max_rank && (!a.is_accepting(q) || r % 2 == 0),
            None => true,
        });
        ranks_ok && self.breakpoint.is_subset(&self.even())
    }

    pub fn render(&self, a: &Nbw) -> String {
        let mut s = String::from("(");
        for (q, r) in self.ranking.iter().enumerate() {
            if q > 0 {
                s.push(' ');
            }
            match r {
                Some(r) => write!(s, "{r}").unwrap(),
                None => s.push('_'),
            }
        }
        write!(s, ", {})", self.breakpoint.display_with(a.names())).unwrap();
        s
    }
}

/// Successor map of the current level: the successor states and, for each of
/// them, the predecessors that bound its rank.
struct Coverage {
    targets: Vec<State>,
    bounds: Vec<u32>,
    reduced: Option<ReducedStep>,
}

impl Coverage {
    fn new(a: &Nbw, m: &RankMacrostate, s: Symbol, mode: RankMode) -> Self {
        let dom = m.domain();
        let targets: Vec<State> = a.post(&dom, s).iter().collect();
        let reduced = (mode == RankMode::Fa).then(|| ReducedStep::new(a, &dom, s));
        let bounds = targets
            .iter()
            .map(|&r| match &reduced {
                Some(step) => m.ranking[step.owner(r).unwrap()].unwrap(),
                None => dom.iter().filter(|&q| a.succ(q, s).contains(r)).map(|q| m.ranking[q].unwrap()).min().unwrap(),
            })
            .collect();
        Coverage { targets, bounds, reduced }
    }

    fn image(&self, a: &Nbw, set: &StateSet, s: Symbol) -> StateSet {
        match &self.reduced {
            Some(step) => step.image(set),
            None => a.post(set, s),
        }
    }
}

/// Every level ranking covering `m.ranking` under `s`, in lexicographic
/// order of the ranks of the successor states taken by ascending index.
pub fn covering_rankings(a: &Nbw, m: &RankMacrostate, s: Symbol, max_rank: u32, mode: RankMode) -> Vec<Vec<Option<u32>>> {
    rankings_of(a, &Coverage::new(a, m, s, mode), max_rank)
}

fn rankings_of(a: &Nbw, cov: &Coverage, max_rank: u32) -> Vec<Vec<Option<u32>>> {
    let choices: Vec<Vec<u32>> = cov
        .targets
        .iter()
        .zip(&cov.bounds)
        .map(|(&r, &b)| (0..=b.min(max_rank)).filter(|k| !a.is_accepting(r) || k % 2 == 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut current = vec![None; a.n()];
    fn go(i: usize, targets: &[State], choices: &[Vec<u32>], current: &mut Vec<Option<u32>>, out: &mut Vec<Vec<Option<u32>>>) {
        if i == targets.len() {
            out.push(current.clone());
            return;
        }
        for &k in &choices[i] {
            current[targets[i]] = Some(k);
            go(i + 1, targets, choices, current, out);
        }
        current[targets[i]] = None;
    }
    go(0, &cov.targets, &choices, &mut current, &mut out);
    out
}

/// All successors of `m` under `s`.
pub fn rank_successors(a: &Nbw, m: &RankMacrostate, s: Symbol, mode: RankMode) -> Vec<RankMacrostate> {
    let cov = Coverage::new(a, m, s, mode);
    let tracked = if m.breakpoint.is_empty() { None } else { Some(cov.image(a, &m.breakpoint, s)) };
    rankings_of(a, &cov, mode.max_rank(a.n()))
        .into_iter()
        .map(|ranking| {
            let next = RankMacrostate { ranking, breakpoint: StateSet::new(a.n()) };
            let breakpoint = match &tracked {
                Some(t) => t.difference(&next.odd()),
                None => next.even(),
            };
            RankMacrostate { breakpoint, ..next }
        })
        .collect()
}

pub fn initial_rank_macrostate(a: &Nbw, mode: RankMode) -> RankMacrostate {
    let top = mode.max_rank(a.n());
    let ranking = (0..a.n()).map(|q| a.initial().contains(q).then_some(top)).collect();
    RankMacrostate { ranking, breakpoint: StateSet::new(a.n()) }
}

/// Largest number of macrostates the construction may reach on `n` states.
pub fn rank_bound(n: usize, mode: RankMode) -> u128 {
    let n32 = n as u32;
    match mode {
        RankMode::General => (8 * n as u128).saturating_pow(n32),
        RankMode::Fa => 6u128.saturating_pow(n32),
    }
}

/// Complement by level rankings. The input is completed first.
pub fn rkc_complement(a: &Nbw, mode: RankMode) -> Result<Complement<RankMacrostate>> {
    let a = a.complete();
    if mode == RankMode::Fa && !is_finitely_ambiguous(&a) {
        return Err(Error::NotFinitelyAmbiguous);
    }
    Ok(explore(
        a.alphabet(),
        vec![initial_rank_macrostate(&a, mode)],
        rank_bound(a.n(), mode),
        |m, s| rank_successors(&a, m, s, mode),
        RankMacrostate::is_accepting,
        |m| m.render(&a),
    ))
}

/// Syntactic subsumption: `m1` accepts at least what `m2` accepts when both
/// rank the same states, `m1` ranks each at least as high, and its
/// breakpoint is smaller.
pub fn rank_subsumes(m1: &RankMacrostate, m2: &RankMacrostate) -> bool {
    m1.domain() == m2.domain()
        && m1.ranking.iter().zip(&m2.ranking).all(|(r1, r2)| match (r1, r2) {
            (Some(r1), Some(r2)) => r1 >= r2,
            _ => true,
        })
        && m1.breakpoint.is_subset(&m2.breakpoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::lang::{complement_check, member, random_nbw, Shape};
    use crate::lasso::enumerate_lassos;
    use proptest::prelude::*;

    fn ms(r: &str, o: &[State]) -> RankMacrostate {
        RankMacrostate::parse(r, o)
    }

    #[test]
    fn rankings_on_a() {
        let a = a_fig2();
        let init = initial_rank_macrostate(&a, RankMode::Fa);
        assert_eq!(init, ms("2___", &[]));
        let got = covering_rankings(&a, &init, 0, 2, RankMode::Fa);
        let want: Vec<Vec<Option<u32>>> = (0..=2).map(|k| vec![Some(k), None, None, None]).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn rankings_on_b() {
        let a = a_fig2();
        let got = covering_rankings(&a, &ms("2___", &[]), 1, 2, RankMode::Fa);
        assert_eq!(got.len(), 6);
        for r in &got {
            assert!(matches!(r[1], Some(0) | Some(2)));
            assert!(r[2].is_some() && r[0].is_none() && r[3].is_none());
        }
    }

    #[test]
    fn empty_domain_has_one_covering_ranking() {
        let a = a_fig2();
        let got = covering_rankings(&a, &ms("____", &[]), 0, 2, RankMode::Fa);
        assert_eq!(got, vec![vec![None; 4]]);
    }

    #[test]
    fn worked_example_transitions() {
        let a = a_fig2();
        let c = rkc_complement(&a, RankMode::Fa).unwrap();
        let init = ms("2___", &[]);
        assert_eq!(c.index_of(&init), Some(0));
        let on_a: Vec<RankMacrostate> = c.successors(&init, 0).into_iter().cloned().collect();
        assert_eq!(on_a, vec![ms("0___", &[0]), ms("1___", &[]), ms("2___", &[0])]);
        let mut on_b: Vec<RankMacrostate> = c.successors(&init, 1).into_iter().cloned().collect();
        on_b.sort();
        let mut want = vec![
            ms("_00_", &[1, 2]),
            ms("_01_", &[1]),
            ms("_02_", &[1, 2]),
            ms("_20_", &[1, 2]),
            ms("_21_", &[1]),
            ms("_22_", &[1, 2]),
        ];
        want.sort();
        assert_eq!(on_b, want);
        assert!(c.automaton.is_accepting(0));
    }

    #[test]
    fn subsumption_examples() {
        assert!(rank_subsumes(&ms("_01_", &[1]), &ms("_00_", &[1, 2])));
        assert!(rank_subsumes(&ms("_01_", &[1]), &ms("_01_", &[1])));
        assert!(!rank_subsumes(&ms("_20_", &[1, 2]), &ms("_02_", &[1, 2])));
        assert!(!rank_subsumes(&ms("_2__", &[1]), &ms("_22_", &[1])));
    }

    #[test]
    fn fa_mode_rejects_infinitely_ambiguous_input() {
        assert_eq!(rkc_complement(&n_fig1(), RankMode::Fa).unwrap_err(), Error::NotFinitelyAmbiguous);
        assert!(rkc_complement(&n_fig1(), RankMode::General).is_ok());
    }

    #[test]
    fn fixtures_are_complemented() {
        for name in NAMES {
            let a = by_name(name).unwrap();
            let c = rkc_complement(&a, RankMode::General).unwrap();
            assert!(complement_check(&a, &c.automaton, 3, 3).unwrap().passed, "{name} general");
            if let Ok(c) = rkc_complement(&a, RankMode::Fa) {
                assert!(complement_check(&a, &c.automaton, 3, 3).unwrap().passed, "{name} fa");
            }
        }
    }

    #[test]
    fn empty_acceptance_gives_universal_complement() {
        let mut a = a_fig2();
        a.set_accepting_states(StateSet::new(4));
        for mode in [RankMode::Fa, RankMode::General] {
            let c = rkc_complement(&a, mode).unwrap();
            assert!(enumerate_lassos(2, 3, 3).iter().all(|w| member(&c.automaton, w)));
        }
    }

    #[test]
    fn universal_input_gives_empty_complement() {
        let mut a = Nbw::new(1, &["a", "b"]);
        a.set_initial(0);
        a.set_accepting(0);
        a.add_transition(0, 0, 0);
        a.add_transition(0, 1, 0);
        for mode in [RankMode::Fa, RankMode::General] {
            let c = rkc_complement(&a, mode).unwrap();
            assert!(enumerate_lassos(2, 3, 3).iter().all(|w| !member(&c.automaton, w)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn fa_complement_is_correct(seed in 0u64..10_000, n in 1usize..=5) {
            let a = random_nbw(n, 2, 0.4, 0.4, seed, Shape::Fanbw).unwrap();
            let c = rkc_complement(&a, RankMode::Fa).unwrap();
            prop_assert!(c.num_macrostates() as u128 <= rank_bound(n, RankMode::Fa));
            for m in c.macrostates() {
                prop_assert!(m.is_well_formed(&a, 2));
            }
            prop_assert!(complement_check(&a, &c.automaton, 3, 3).unwrap().passed);
        }

        #[test]
        fn general_complement_is_correct(seed in 0u64..10_000, n in 1usize..=3) {
            let a = random_nbw(n, 2, 0.4, 0.4, seed, Shape::Any).unwrap();
            let c = rkc_complement(&a, RankMode::General).unwrap();
            prop_assert!(complement_check(&a, &c.automaton, 3, 3).unwrap().passed);
        }
    }
}
