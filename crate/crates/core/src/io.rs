//! Text format for automata and DOT rendering.
//!
//! ```text
//! # comments start with '#'
//! states: 4
//! alphabet: a b
//! initial: 0
//! accepting: 1
//! order: 0 1 2 3
//! names: q0 q1 q2 q3
//! 0 a 0
//! 0 b 1
//! ```
//!
//! States are `0..states`. The `order` line is optional and lists the state
//! order from smallest to largest. The optional `names` line gives display
//! names, one token per state. Every other line is a transition
//! `SRC SYM DST`. Headers must come before transitions.

use std::fmt::Write as _;

use crate::bitset::StateSet;
use crate::error::{Error, Result};
use crate::ldbw::{LdbwDag, LdbwVertex};
use crate::nbw::{Nbw, State};
use crate::run_dag::LassoDag;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Complete the automaton with a sink after parsing.
    pub complete: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { complete: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub automaton: Nbw,
    pub warnings: Vec<Warning>,
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

#[derive(Default)]
struct Header {
    states: Option<usize>,
    alphabet: Option<Vec<String>>,
    initial: Option<Vec<State>>,
    accepting: Vec<State>,
    order: Option<Vec<State>>,
    names: Option<(usize, Vec<String>)>,
}

fn state_list(line: usize, items: &[(usize, &str)], n: Option<usize>) -> Result<Vec<State>> {
    let n = n.ok_or_else(|| parse_error(line, 1, "`states` must be declared first"))?;
    items
        .iter()
        .map(|&(col, tok)| {
            let q: State = tok.parse().map_err(|_| parse_error(line, col, format!("expected a state number, found `{tok}`")))?;
            if q >= n {
                return Err(Error::UndeclaredState { line, state: q });
            }
            Ok(q)
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Nbw> {
    parse_with(text, ParseOptions::default()).map(|p| p.automaton)
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<Parsed> {
    let mut header = Header::default();
    let mut edges: Vec<(usize, State, String, State)> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if let Some(colon) = content.find(':') {
            if !edges.is_empty() {
                return Err(parse_error(line, 1, "headers must precede transitions"));
            }
            let key = content[..colon].trim();
            let offset = content[..=colon].chars().count();
            let items: Vec<(usize, &str)> = tokens(&content[colon + 1..]).into_iter().map(|(c, t)| (c + offset, t)).collect();
            match key {
                "states" => {
                    let [(col, tok)] = items[..] else {
                        return Err(parse_error(line, offset + 1, "expected one state count"));
                    };
                    header.states = Some(tok.parse().map_err(|_| parse_error(line, col, format!("expected a number, found `{tok}`")))?);
                }
                "alphabet" => {
                    if items.is_empty() {
                        return Err(parse_error(line, offset + 1, "alphabet is empty"));
                    }
                    header.alphabet = Some(items.iter().map(|(_, t)| t.to_string()).collect());
                }
                "initial" => header.initial = Some(state_list(line, &items, header.states)?),
                "accepting" => header.accepting = state_list(line, &items, header.states)?,
                "order" => header.order = Some(state_list(line, &items, header.states)?),
                "names" => header.names = Some((line, items.iter().map(|(_, t)| t.to_string()).collect())),
                _ => return Err(parse_error(line, 1, format!("unknown header `{key}`"))),
            }
            continue;
        }
        let toks = tokens(content);
        if toks.len() != 3 {
            let col = toks.get(3).map_or(1, |t| t.0);
            return Err(parse_error(line, col, "expected a transition `SRC SYM DST`"));
        }
        let src = state_list(line, &toks[0..1], header.states)?[0];
        let dst = state_list(line, &toks[2..3], header.states)?[0];
        let (col, sym) = toks[1];
        match &header.alphabet {
            Some(alphabet) if alphabet.iter().any(|s| s == sym) => {}
            Some(_) => return Err(parse_error(line, col, format!("unknown symbol `{sym}`"))),
            None => return Err(parse_error(line, 1, "`alphabet` must be declared before transitions")),
        }
        edges.push((line, src, sym.to_string(), dst));
    }
    let end = last_line + 1;
    let n = header.states.ok_or_else(|| parse_error(end, 1, "missing `states` header"))?;
    let alphabet = header.alphabet.ok_or_else(|| parse_error(end, 1, "missing `alphabet` header"))?;
    let initial = header.initial.ok_or_else(|| parse_error(end, 1, "missing `initial` header"))?;
    if initial.is_empty() {
        return Err(parse_error(end, 1, "no initial state"));
    }
    let mut a = Nbw::new(n, &alphabet);
    if a.num_symbols() != alphabet.len() {
        return Err(parse_error(end, 1, "alphabet lists a symbol twice"));
    }
    let mut warnings = Vec::new();
    for (line, p, sym, q) in edges {
        let s = a.symbol(&sym).expect("checked above");
        if a.succ(p, s).contains(q) {
            warnings.push(Warning { line, message: format!("duplicate transition `{p} {sym} {q}` merged") });
        }
        a.add_transition(p, s, q);
    }
    a.set_initial_states(StateSet::from_states(n, initial));
    a.set_accepting_states(StateSet::from_states(n, header.accepting));
    if let Some((line, names)) = header.names {
        if names.len() != n {
            return Err(parse_error(line, 1, format!("expected {n} names, found {}", names.len())));
        }
        a.set_names(names);
    }
    if let Some(order) = header.order {
        a = a.with_order(order)?;
    }
    if options.complete {
        a = a.complete();
    }
    Ok(Parsed { automaton: a, warnings })
}

fn join<I: IntoIterator<Item = T>, T: ToString>(items: I) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical text: states ascending, symbols in alphabet order. Names are
/// written only if they differ from the state numbers.
pub fn write(a: &Nbw) -> String {
    let mut out = String::new();
    writeln!(out, "states: {}", a.n()).unwrap();
    writeln!(out, "alphabet: {}", a.alphabet().join(" ")).unwrap();
    writeln!(out, "initial: {}", join(a.initial().iter())).unwrap();
    writeln!(out, "accepting: {}", join(a.accepting().iter())).unwrap();
    if !a.has_default_order() {
        writeln!(out, "order: {}", join(a.order().iter())).unwrap();
    }
    if !a.has_default_names() && a.names().iter().all(|s| tokens(s).len() == 1 && !s.contains('#')) {
        writeln!(out, "names: {}", a.names().join(" ")).unwrap();
    }
    for (p, s, q) in a.transitions() {
        writeln!(out, "{p} {} {q}", a.alphabet()[s]).unwrap();
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn nbw_to_dot(a: &Nbw) -> String {
    let mut out = String::from("digraph nbw {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in 0..a.n() {
        let shape = if a.is_accepting(q) { "doublecircle" } else { "circle" };
        writeln!(out, "  s{q} [label=\"{}\", shape={shape}];", escape(a.name(q))).unwrap();
    }
    for q in a.initial().iter() {
        writeln!(out, "  init{q} [shape=point];\n  init{q} -> s{q};").unwrap();
    }
    for p in 0..a.n() {
        for q in 0..a.n() {
            let labels: Vec<&str> =
                (0..a.num_symbols()).filter(|&s| a.succ(p, s).contains(q)).map(|s| a.alphabet()[s].as_str()).collect();
            if !labels.is_empty() {
                writeln!(out, "  s{p} -> s{q} [label=\"{}\"];", escape(&labels.join(","))).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// One cluster per level, shown up to the first repetition of the periodic
/// part. The edges of `d` are solid. If `other` is given (usually the full
/// DAG over the same word), its edges missing from `d` are drawn dashed.
pub fn lasso_dag_to_dot(a: &Nbw, d: &LassoDag, other: Option<&LassoDag>) -> String {
    let mut out = String::from("digraph dag {\n  rankdir=LR;\n  node [shape=circle];\n");
    let last = d.graph.levels().len();
    for l in 0..last {
        let level = d.graph.level(l);
        if level.is_empty() {
            continue;
        }
        writeln!(out, "  subgraph cluster_{l} {{\n    label=\"{l}\";\n    rank=same;").unwrap();
        for (i, v) in level.iter().enumerate() {
            let shape = if v.accepting { "doublecircle" } else { "circle" };
            writeln!(out, "    v{l}_{i} [label=\"{}\", shape={shape}];", escape(a.name(v.label))).unwrap();
        }
        out.push_str("  }\n");
    }
    for l in 1..last {
        for (i, v) in d.graph.level(l).iter().enumerate() {
            for &p in &v.preds {
                writeln!(out, "  v{}_{p} -> v{l}_{i};", l - 1).unwrap();
            }
        }
        if let Some(other) = other {
            for v in other.graph.level(l) {
                for &p in &v.preds {
                    let from = other.graph.level(l - 1)[p].label;
                    if !d.has_edge(l - 1, from, v.label) {
                        if let (Some(pi), Some(vi)) = (d.vertex(l - 1, from), d.vertex(l, v.label)) {
                            writeln!(out, "  v{}_{pi} -> v{l}_{vi} [style=dashed];", l - 1).unwrap();
                        }
                    }
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Codeterministic DAG of a limit deterministic automaton with priorities
/// as part of the vertex labels.
pub fn ldbw_dag_to_dot(a: &Nbw, d: &LdbwDag) -> String {
    let mut out = String::from("digraph ldbw_dag {\n  rankdir=LR;\n  node [shape=circle];\n");
    let last = d.graph.levels().len();
    for l in 0..last {
        let level = d.graph.level(l);
        if level.is_empty() {
            continue;
        }
        writeln!(out, "  subgraph cluster_{l} {{\n    label=\"{l}\";\n    rank=same;").unwrap();
        for (i, v) in level.iter().enumerate() {
            let (text, shape) = match &v.label.vertex {
                LdbwVertex::Det(q) => (a.name(*q).to_string(), if v.accepting { "doublecircle" } else { "circle" }),
                LdbwVertex::Nondet(s) => (s.display_with(a.names()).to_string(), "box"),
            };
            writeln!(out, "    v{l}_{i} [label=\"{} : {}\", shape={shape}];", escape(&text), v.label.priority).unwrap();
        }
        out.push_str("  }\n");
    }
    for l in 1..last {
        for (i, v) in d.graph.level(l).iter().enumerate() {
            for &p in &v.preds {
                writeln!(out, "  v{}_{p} -> v{l}_{i};", l - 1).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, ldbw_partition};
    use crate::fixtures::*;
    use crate::lang::{random_nbw, Shape};
    use crate::lasso::LassoWord;
    use crate::ldbw::ldbw_codet_dag;
    use crate::run_dag::{lasso_dag, DagMode};
    use proptest::prelude::*;

    const A_FIG2: &str = "\
# two accepting runs on b^omega
states: 4
alphabet: a b
initial: 0
accepting: 1
0 a 0
0 b 1
0 b 2
1 a 3
1 b 1
2 a 3
2 b 1
3 a 3
3 b 3
";

    #[test]
    fn parses_figure_two() {
        let a = parse(A_FIG2).unwrap();
        assert_eq!(a, a_fig2());
        let r = classify(&a);
        assert!(r.limit_deterministic && r.finitely_ambiguous);
    }

    #[test]
    fn empty_body_is_completed() {
        let a = parse("states: 1\nalphabet: a\ninitial: 0\naccepting:\n").unwrap();
        assert_eq!(a.n(), 2);
        assert!(a.is_complete());
        let raw = parse_with("states: 1\nalphabet: a\ninitial: 0\n", ParseOptions { complete: false }).unwrap();
        assert_eq!(raw.automaton.n(), 1);
    }

    #[test]
    fn unknown_symbol_reports_position() {
        let text = "states: 2\nalphabet: a b\ninitial: 0\n0 a 1\n1 c 0\n";
        assert_eq!(
            parse(text).unwrap_err(),
            Error::Parse { line: 5, column: 3, message: "unknown symbol `c`".into() }
        );
    }

    #[test]
    fn other_errors() {
        assert_eq!(parse("states: 2\nalphabet: a\ninitial: 5\n").unwrap_err(), Error::UndeclaredState { line: 3, state: 5 });
        assert!(matches!(parse("states: x\n"), Err(Error::Parse { line: 1, column: 9, .. })));
        assert!(matches!(parse("states: 1\nalphabet: a\ninitial: 0\n0 a\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse("states: 1\nalphabet: a\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse("states: 1\nalphabet: a\ninitial: 0\n0 a 0\ninitial: 0\n"), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(parse("states: 2\nalphabet: a\ninitial: 0\norder: 0 0\n"), Err(Error::InvalidOrder(_))));
    }

    #[test]
    fn duplicates_are_merged_with_a_warning() {
        let p = parse_with("states: 1\nalphabet: a\ninitial: 0\n0 a 0\n0 a 0\n", ParseOptions::default()).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.warnings[0].line, 5);
        assert_eq!(p.automaton.transitions().count(), 1);
    }

    #[test]
    fn fixtures_round_trip() {
        for name in NAMES {
            let a = by_name(name).unwrap().complete();
            let text = write(&a);
            let back = parse(&text).unwrap();
            assert_eq!(back, a, "{name}");
            assert_eq!(back.names(), a.names());
        }
        let ordered = n_fig1().with_order(vec![2, 1, 0, 3]).unwrap();
        assert_eq!(parse(&write(&ordered)).unwrap(), ordered);
    }

    #[test]
    fn dot_output() {
        let a = a_fig2();
        let dot = nbw_to_dot(&a);
        assert!(dot.contains("s1 [label=\"q1\", shape=doublecircle]"));
        assert!(dot.contains("s0 -> s1 [label=\"b\"]"));
        let w = LassoWord::new(vec![], vec![1]);
        let reduced = lasso_dag(&a, &w, DagMode::Reduced);
        let full = lasso_dag(&a, &w, DagMode::Full);
        let dot = lasso_dag_to_dot(&a, &reduced, Some(&full));
        assert_eq!(dot.matches("style=dashed").count(), 1);
        assert!(dot.contains("subgraph cluster_0"));
        let n = n_fig1();
        let d = ldbw_codet_dag(&n, &ldbw_partition(&n).unwrap(), &w).unwrap();
        let dot = ldbw_dag_to_dot(&n, &d);
        assert!(dot.contains("label=\"{q2} : 2\""));
        assert!(dot.contains("label=\"q1 : 1\""));
    }

    #[test]
    fn empty_dag_is_header_only() {
        let a = Nbw::new(1, &["a"]);
        let d = lasso_dag(&a, &LassoWord::new(vec![], vec![0]), DagMode::Full);
        assert_eq!(lasso_dag_to_dot(&a, &d, None), "digraph dag {\n  rankdir=LR;\n  node [shape=circle];\n}\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn random_round_trip(seed in any::<u64>(), n in 1usize..=6, k in 1usize..=3) {
            let a = random_nbw(n, k, 0.4, 0.3, seed, Shape::Any).unwrap();
            prop_assert_eq!(parse(&write(&a)).unwrap(), a);
        }
    }
}
