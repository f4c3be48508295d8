//! Small named automata used throughout the documentation and tests.
//!
//! | name        | language                      | classes             |
//! |-------------|-------------------------------|---------------------|
//! | `N_fig1`    | a^i b^ω                       | LD, not FA          |
//! | `A_fig2`    | a^i b^ω                       | LD, FA (2-ambiguous)|
//! | `L_fig3`    | contains b^ω                  | LD, not FA          |
//! | `F_fig3`    | a^i b^ω                       | FA, not LD          |
//! | `B_fig5`    | empty                         | LD, FA              |
//! | `F_partial` | {abb, ab, bbb}^ω, incomplete  | FA, not LD          |

use crate::nbw::Nbw;

pub const NAMES: [&str; 6] = ["N_fig1", "A_fig2", "L_fig3", "F_fig3", "B_fig5", "F_partial"];

fn build(prefix: &str, n: usize, alphabet: &[&str], edges: &[(usize, &str, usize)], initial: &[usize], accepting: &[usize]) -> Nbw {
    let mut a = Nbw::new(n, alphabet);
    for &(p, s, q) in edges {
        let s = a.symbol(s).expect("fixture symbol");
        a.add_transition(p, s, q);
    }
    for &q in initial {
        a.set_initial(q);
    }
    for &q in accepting {
        a.set_accepting(q);
    }
    a.set_names((0..n).map(|q| format!("{prefix}{q}")).collect());
    a
}

/// Limit deterministic but infinitely ambiguous: b^ω has one accepting run
/// per number of b's read in q2 before moving to q1.
pub fn n_fig1() -> Nbw {
    build(
        "q",
        4,
        &["a", "b"],
        &[
            (0, "a", 0),
            (0, "b", 1),
            (0, "b", 2),
            (1, "a", 3),
            (1, "b", 1),
            (2, "a", 3),
            (2, "b", 1),
            (2, "b", 2),
            (3, "a", 3),
            (3, "b", 3),
        ],
        &[0],
        &[1],
    )
}

/// `n_fig1` without the q2 self-loop: same language, at most two accepting runs per word.
pub fn a_fig2() -> Nbw {
    build(
        "q",
        4,
        &["a", "b"],
        &[
            (0, "a", 0),
            (0, "b", 1),
            (0, "b", 2),
            (1, "a", 3),
            (1, "b", 1),
            (2, "a", 3),
            (2, "b", 1),
            (3, "a", 3),
            (3, "b", 3),
        ],
        &[0],
        &[1],
    )
}

pub fn l_fig3() -> Nbw {
    build(
        "l",
        3,
        &["a", "b"],
        &[(0, "a", 0), (0, "b", 0), (0, "b", 1), (1, "a", 2), (1, "b", 1), (2, "a", 2), (2, "b", 2)],
        &[0],
        &[1],
    )
}

/// `a_fig2` with the rejecting sink split in two, one of which is reached
/// nondeterministically from the other.
pub fn f_fig3() -> Nbw {
    build(
        "f",
        5,
        &["a", "b"],
        &[
            (0, "a", 0),
            (0, "b", 1),
            (0, "b", 2),
            (1, "a", 3),
            (1, "b", 1),
            (2, "a", 4),
            (2, "b", 1),
            (3, "a", 3),
            (3, "a", 4),
            (3, "b", 3),
            (4, "a", 4),
            (4, "b", 4),
        ],
        &[0],
        &[1],
    )
}

/// Unary automaton with empty language whose full run DAG still has
/// infinitely many ω-branches through accepting vertices.
pub fn b_fig5() -> Nbw {
    build("q", 3, &["a"], &[(0, "a", 0), (0, "a", 1), (1, "a", 2), (2, "a", 2)], &[0], &[1])
}

/// Incomplete finitely ambiguous automaton that is not limit deterministic.
pub fn f_partial() -> Nbw {
    build(
        "f",
        3,
        &["a", "b"],
        &[(0, "a", 1), (0, "a", 2), (0, "b", 1), (1, "b", 2), (2, "b", 0)],
        &[0],
        &[0],
    )
}

pub fn by_name(name: &str) -> Option<Nbw> {
    Some(match name {
        "N_fig1" => n_fig1(),
        "A_fig2" => a_fig2(),
        "L_fig3" => l_fig3(),
        "F_fig3" => f_fig3(),
        "B_fig5" => b_fig5(),
        "F_partial" => f_partial(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_names_resolve() {
        for name in NAMES {
            assert!(by_name(name).is_some(), "{name}");
        }
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn figure_automata_are_complete() {
        for name in ["N_fig1", "A_fig2", "L_fig3", "F_fig3", "B_fig5"] {
            assert!(by_name(name).unwrap().is_complete(), "{name}");
        }
        assert!(!f_partial().is_complete());
    }

    #[test]
    fn a_fig2_drops_one_edge_of_n_fig1() {
        assert_eq!(n_fig1().transitions().count(), a_fig2().transitions().count() + 1);
        assert_eq!(a_fig2().complete(), a_fig2());
    }
}
