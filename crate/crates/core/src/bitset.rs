use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

/// A set of automaton states backed by a bit vector.
///
/// Equality, hashing and ordering only look at the members, so two sets with
/// different capacities but the same elements compare equal. The ordering is
/// the lexicographic order of the ascending member lists.
#[derive(Clone, Default)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn new(capacity: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn singleton(capacity: usize, q: usize) -> Self {
        let mut s = Self::new(capacity.max(q + 1));
        s.insert(q);
        s
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(capacity: usize, states: I) -> Self {
        let mut s = Self::new(capacity);
        for q in states {
            s.insert(q);
        }
        s
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        s.0.insert_range(..);
        s
    }

    pub fn insert(&mut self, q: usize) {
        if q >= self.0.len() {
            self.0.grow(q + 1);
        }
        self.0.insert(q);
    }

    pub fn remove(&mut self, q: usize) {
        if q < self.0.len() {
            self.0.set(q, false);
        }
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.contains(q)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.ones().next()
    }

    fn widen(&mut self, other: &StateSet) {
        if other.0.len() > self.0.len() {
            self.0.grow(other.0.len());
        }
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.widen(other);
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.iter().all(|q| other.contains(q))
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Blocks with trailing zero blocks stripped, so that equal sets share a
    /// representation regardless of capacity.
    fn trimmed(&self) -> &[usize] {
        let blocks = self.0.as_slice();
        let end = blocks.iter().rposition(|&b| b != 0).map_or(0, |i| i + 1);
        &blocks[..end]
    }

    /// Renders the set with the given state names, e.g. `{q1,q2}`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedSet { set: self, names }
    }
}

struct NamedSet<'a> {
    set: &'a StateSet,
    names: &'a [String],
}

impl fmt::Display for NamedSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.set.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match self.names.get(q) {
                Some(name) => write!(f, "{name}")?,
                None => write!(f, "{q}")?,
            }
        }
        write!(f, "}}")
    }
}

impl PartialEq for StateSet {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for StateSet {}

impl Hash for StateSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
