//! Choosing a complement construction, and containment checking on top of it.

use std::fmt;
use std::str::FromStr;

use crate::classify::{classify, ldbw_partition};
use crate::error::{Error, Result};
use crate::lang::{intersect, is_empty, member, CheckReport};
use crate::ldbw::nsbc_complement;
use crate::nbw::Nbw;
use crate::rank::{rkc_complement, RankMode};
use crate::slice::{slc_complement_fa, slc_complement_general};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// `nsbc` for limit deterministic input, else `slc-fa` for finitely
    /// ambiguous input, else `slc`.
    Auto,
    /// Rank-based, any input.
    Rkc,
    /// Rank-based with ranks up to 2, finitely ambiguous input.
    RkcFa,
    /// Slice-based, finitely ambiguous input.
    SlcFa,
    /// Disambiguation followed by `slc-fa`, any input.
    Slc,
    /// Limit deterministic input, minimal partition.
    Nsbc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] =
        [Algorithm::Auto, Algorithm::Rkc, Algorithm::RkcFa, Algorithm::SlcFa, Algorithm::Slc, Algorithm::Nsbc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Rkc => "rkc",
            Algorithm::RkcFa => "rkc-fa",
            Algorithm::SlcFa => "slc-fa",
            Algorithm::Slc => "slc",
            Algorithm::Nsbc => "nsbc",
        }
    }

    /// The construction `Auto` picks for `a`.
    pub fn resolve(self, a: &Nbw) -> Algorithm {
        if self != Algorithm::Auto {
            return self;
        }
        let report = classify(&a.complete());
        if report.limit_deterministic {
            Algorithm::Nsbc
        } else if report.finitely_ambiguous {
            Algorithm::SlcFa
        } else {
            Algorithm::Slc
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected auto, rkc, rkc-fa, slc-fa, slc or nsbc)"))
    }
}

/// Complement automaton of `a`. Precondition failures are reported as
/// [`Error::IncompatibleAlgorithm`].
pub fn complement(a: &Nbw, algo: Algorithm) -> Result<Nbw> {
    let algo = algo.resolve(a);
    let result = match algo {
        Algorithm::Rkc => rkc_complement(a, RankMode::General).map(|c| c.automaton),
        Algorithm::RkcFa => rkc_complement(a, RankMode::Fa).map(|c| c.automaton),
        Algorithm::SlcFa => slc_complement_fa(a).map(|c| c.automaton),
        Algorithm::Slc => Ok(slc_complement_general(a).automaton),
        Algorithm::Nsbc => ldbw_partition(&a.complete()).and_then(|p| nsbc_complement(a, &p)).map(|c| c.automaton),
        Algorithm::Auto => unreachable!("resolved above"),
    };
    result.map_err(|e| {
        if e.is_precondition() {
            Error::IncompatibleAlgorithm { algorithm: algo.to_string(), reason: e.to_string() }
        } else {
            e
        }
    })
}

/// Decides `L(a) ⊆ L(b)` by checking `L(a) ∩ L(complement(b))` for
/// emptiness. A counterexample is accepted by `a` and rejected by `b`.
pub fn contains(a: &Nbw, b: &Nbw, algo: Algorithm) -> Result<CheckReport> {
    if !a.same_alphabet(b) {
        return Err(Error::AlphabetMismatch);
    }
    let c = complement(b, algo)?;
    let product = intersect(a, &c)?;
    Ok(match is_empty(&product) {
        None => CheckReport { passed: true, counterexample: None, lassos_tested: 0, membership: None },
        Some(w) => {
            let membership = Some((member(a, &w), member(b, &w)));
            CheckReport { passed: false, counterexample: Some(w), lassos_tested: 0, membership }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::lang::complement_check;
    use crate::lasso::LassoWord;

    fn universal() -> Nbw {
        let mut u = Nbw::new(1, &["a", "b"]);
        u.set_initial(0);
        u.set_accepting(0);
        u.add_transition(0, 0, 0);
        u.add_transition(0, 1, 0);
        u
    }

    #[test]
    fn auto_dispatch() {
        assert_eq!(Algorithm::Auto.resolve(&n_fig1()), Algorithm::Nsbc);
        assert_eq!(Algorithm::Auto.resolve(&f_fig3()), Algorithm::SlcFa);
        assert_eq!(Algorithm::RkcFa.resolve(&n_fig1()), Algorithm::RkcFa);
        let mut both = n_fig1();
        both.set_accepting(0);
        assert_eq!(Algorithm::Auto.resolve(&both), Algorithm::Slc);
    }

    #[test]
    fn names_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.name().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("ramsey".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_algorithm_on_every_eligible_fixture() {
        for name in NAMES {
            let a = by_name(name).unwrap();
            for algo in Algorithm::ALL {
                match complement(&a, algo) {
                    Ok(c) => assert!(complement_check(&a, &c, 3, 3).unwrap().passed, "{name} {algo}"),
                    Err(e) => assert!(matches!(e, Error::IncompatibleAlgorithm { .. }), "{name} {algo}: {e}"),
                }
            }
        }
        assert!(complement(&n_fig1(), Algorithm::SlcFa).is_err());
        assert!(complement(&f_fig3(), Algorithm::Nsbc).is_err());
    }

    #[test]
    fn equal_languages_contain_each_other() {
        let r = contains(&a_fig2(), &n_fig1(), Algorithm::Auto).unwrap();
        assert!(r.passed);
        assert!(contains(&n_fig1(), &a_fig2(), Algorithm::Auto).unwrap().passed);
        for name in NAMES {
            let a = by_name(name).unwrap();
            assert!(contains(&a, &a, Algorithm::Auto).unwrap().passed, "{name}");
        }
    }

    #[test]
    fn universal_is_not_contained() {
        let r = contains(&universal(), &a_fig2(), Algorithm::SlcFa).unwrap();
        assert!(!r.passed);
        let w = r.counterexample.unwrap();
        assert_eq!(r.membership, Some((true, false)));
        assert!(!member(&a_fig2(), &w));
        assert_eq!(w, LassoWord::new(vec![], vec![0]));
    }

    #[test]
    fn alphabets_must_match() {
        let mut c = Nbw::new(1, &["a"]);
        c.set_initial(0);
        c.add_transition(0, 0, 0);
        assert_eq!(contains(&c, &a_fig2(), Algorithm::Auto).unwrap_err(), Error::AlphabetMismatch);
    }
}
