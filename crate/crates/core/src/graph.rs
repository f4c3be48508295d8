//! Strongly connected components over adjacency lists.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

pub(crate) struct Sccs {
    /// Component index of every node.
    pub comp: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// A component is nontrivial if it contains a cycle.
    pub nontrivial: Vec<bool>,
}

impl Sccs {
    pub fn on_cycle(&self, v: usize) -> bool {
        self.nontrivial[self.comp[v]]
    }
}

pub(crate) fn sccs(succ: &[Vec<usize>]) -> Sccs {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(succ.len(), 0);
    for _ in 0..succ.len() {
        g.add_node(());
    }
    for (v, out) in succ.iter().enumerate() {
        for &w in out {
            g.add_edge(NodeIndex::new(v), NodeIndex::new(w), ());
        }
    }
    let mut comp = vec![0; succ.len()];
    let mut members = Vec::new();
    let mut nontrivial = Vec::new();
    for (c, scc) in tarjan_scc(&g).into_iter().enumerate() {
        let nodes: Vec<usize> = scc.iter().map(|x| x.index()).collect();
        for &v in &nodes {
            comp[v] = c;
        }
        let cyclic = nodes.len() > 1 || succ[nodes[0]].contains(&nodes[0]);
        members.push(nodes);
        nontrivial.push(cyclic);
    }
    Sccs { comp, members, nontrivial }
}

/// Nodes that can reach some node in `targets` (targets included).
pub(crate) fn coreachable(succ: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, out) in succ.iter().enumerate() {
        for &w in out {
            pred[w].push(v);
        }
    }
    let mut seen = targets.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&v| targets[v]).collect();
    while let Some(w) = stack.pop() {
        for &v in &pred[w] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_and_cycles() {
        // 0 -> 1 -> 2 -> 1, 3 self-loop, 4 isolated
        let succ = vec![vec![1], vec![2], vec![1], vec![3], vec![]];
        let s = sccs(&succ);
        assert_eq!(s.comp[1], s.comp[2]);
        assert!(!s.on_cycle(0));
        assert!(s.on_cycle(1) && s.on_cycle(3));
        assert!(!s.on_cycle(4));
        let co = coreachable(&succ, &[false, false, false, true, false]);
        assert_eq!(co, vec![false, false, false, true, false]);
        let co = coreachable(&succ, &[false, false, true, false, false]);
        assert_eq!(co, vec![true, true, true, false, false]);
    }
}
