use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::nbw::Symbol;

/// An ultimately periodic word `stem · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    stem: Vec<Symbol>,
    cycle: Vec<Symbol>,
}

impl LassoWord {
    /// Panics if `cycle` is empty.
    pub fn new(stem: Vec<Symbol>, cycle: Vec<Symbol>) -> Self {
        assert!(!cycle.is_empty(), "lasso loop must be nonempty");
        LassoWord { stem, cycle }
    }

    pub fn stem(&self) -> &[Symbol] {
        &self.stem
    }

    pub fn cycle(&self) -> &[Symbol] {
        &self.cycle
    }

    /// The `i`-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> Symbol {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Unique representation of the same infinite word: the loop is replaced
    /// by its primitive root and the stem is made as short as possible.
    pub fn canonical(&self) -> LassoWord {
        let mut cycle = primitive_root(&self.cycle).to_vec();
        let mut stem = self.stem.clone();
        while let Some(&last) = stem.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            stem.pop();
            cycle.rotate_right(1);
        }
        LassoWord { stem, cycle }
    }

    /// True iff both lassos denote the same infinite word.
    pub fn same_word(&self, other: &LassoWord) -> bool {
        self.canonical() == other.canonical()
    }

    /// Renders as `stem;loop`. Letters are concatenated when every symbol is
    /// a single character and separated by spaces otherwise.
    pub fn format(&self, alphabet: &[String]) -> String {
        format!("{};{}", format_symbols(&self.stem, alphabet), format_symbols(&self.cycle, alphabet))
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})^w", self.stem, self.cycle)
    }
}

fn primitive_root(v: &[Symbol]) -> &[Symbol] {
    let n = v.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p]) {
            return &v[..p];
        }
    }
    v
}

pub fn format_symbols(word: &[Symbol], alphabet: &[String]) -> String {
    let compact = alphabet.iter().all(|s| s.chars().count() == 1);
    let parts: Vec<&str> = word.iter().map(|&s| alphabet[s].as_str()).collect();
    if compact {
        parts.concat()
    } else {
        parts.join(" ")
    }
}

/// Parses a finite word. Whitespace or commas separate symbols; a single
/// token is split into characters when the alphabet consists of characters.
pub fn parse_symbols(text: &str, alphabet: &[String]) -> Result<Vec<Symbol>> {
    let lookup = |tok: &str| {
        alphabet
            .iter()
            .position(|s| s == tok)
            .ok_or_else(|| Error::UnknownSymbol(tok.to_string()))
    };
    let tokens: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
    if tokens.len() == 1 && alphabet.iter().all(|s| s.chars().count() == 1) {
        return tokens[0].chars().map(|c| lookup(&c.to_string())).collect();
    }
    tokens.into_iter().map(lookup).collect()
}

/// Parses the `stem;loop` notation produced by [`LassoWord::format`].
pub fn parse_lasso(text: &str, alphabet: &[String]) -> Result<LassoWord> {
    let (stem, cycle) = text.split_once(';').ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "expected `stem;loop`".into(),
    })?;
    let stem = parse_symbols(stem, alphabet)?;
    let cycle = parse_symbols(cycle, alphabet)?;
    if cycle.is_empty() {
        return Err(Error::Parse { line: 1, column: text.len(), message: "empty loop".into() });
    }
    Ok(LassoWord::new(stem, cycle))
}

/// All distinct infinite words `u v^ω` with `|u| ≤ max_stem` and
/// `1 ≤ |v| ≤ max_loop` over `num_symbols` letters, in canonical form,
/// ordered by total length, then stem, then loop.
pub fn enumerate_lassos(num_symbols: usize, max_stem: usize, max_loop: usize) -> Vec<LassoWord> {
    let mut seen = BTreeSet::new();
    for s in 0..=max_stem {
        for stem in words_of_length(num_symbols, s) {
            for l in 1..=max_loop {
                for cycle in words_of_length(num_symbols, l) {
                    seen.insert(LassoWord { stem: stem.clone(), cycle }.canonical());
                }
            }
        }
    }
    let mut out: Vec<LassoWord> = seen.into_iter().collect();
    out.sort_by(|x, y| {
        (x.stem.len() + x.cycle.len(), &x.stem, &x.cycle).cmp(&(y.stem.len() + y.cycle.len(), &y.stem, &y.cycle))
    });
    out
}

/// All words of length `len`, in lexicographic order.
pub fn words_of_length(num_symbols: usize, len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..num_symbols).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn canonical_form_trims_and_rotates() {
        // ab(ab)^ω = (ab)^ω
        let w = LassoWord::new(vec![0, 1], vec![0, 1]);
        assert_eq!(w.canonical(), LassoWord::new(vec![], vec![0, 1]));
        // b(ab)^ω = (ba)^ω
        let w = LassoWord::new(vec![1], vec![0, 1]);
        assert_eq!(w.canonical(), LassoWord::new(vec![], vec![1, 0]));
        // (bb)^ω = b^ω
        let w = LassoWord::new(vec![], vec![1, 1]);
        assert_eq!(w.canonical(), LassoWord::new(vec![], vec![1]));
        // a(b)^ω stays
        let w = LassoWord::new(vec![0], vec![1]);
        assert_eq!(w.canonical(), w);
    }

    #[test]
    fn enumeration_counts() {
        // |u| = 0, |v| = 1 over {a,b}: a^ω, b^ω
        assert_eq!(enumerate_lassos(2, 0, 1).len(), 2);
        // adds (ab)^ω and (ba)^ω
        assert_eq!(enumerate_lassos(2, 0, 2).len(), 4);
        // with one stem letter: a b^ω and b a^ω join, a(ba)^ω=(ab)^ω etc.
        assert_eq!(enumerate_lassos(2, 1, 1).len(), 4);
        let all = enumerate_lassos(2, 3, 3);
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(all.len(), distinct.len());
        assert!(all.iter().all(|w| w.canonical() == *w));
    }

    #[test]
    fn format_and_parse() {
        let w = LassoWord::new(vec![0, 1], vec![1]);
        assert_eq!(w.format(&ab()), "ab;b");
        assert_eq!(parse_lasso("ab;b", &ab()).unwrap(), w);
        assert_eq!(parse_lasso(";b", &ab()).unwrap(), LassoWord::new(vec![], vec![1]));
        assert!(parse_lasso("ab;", &ab()).is_err());
        assert!(parse_lasso("ac;b", &ab()).is_err());
        let long: Vec<String> = vec!["go".into(), "stop".into()];
        assert_eq!(parse_symbols("go stop,go", &long).unwrap(), vec![0, 1, 0]);
        assert_eq!(LassoWord::new(vec![0], vec![1]).format(&long), "go;stop");
    }

    proptest! {
        #[test]
        fn canonical_preserves_word(stem in proptest::collection::vec(0usize..2, 0..5),
                                    cycle in proptest::collection::vec(0usize..2, 1..5)) {
            let w = LassoWord::new(stem, cycle);
            let c = w.canonical();
            for i in 0..40 {
                prop_assert_eq!(w.letter(i), c.letter(i));
            }
            prop_assert_eq!(c.canonical(), c.clone());
            prop_assert!(c.stem().len() <= w.stem().len());
        }
    }
}
