//! The thirteen digraph algebras between `D⊕D` and `B = M4`, where the
//! first summand sits on the sources {1, 2} and the second on the sinks {3, 4}.

use std::collections::BTreeSet;

use crate::cycle::CYCLE_EDGES;
use crate::homology::Digraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeNode {
    pub label: &'static str,
    pub digraph: Digraph,
    /// Labels of the nodes this one covers (immediately below it).
    pub covers: Vec<&'static str>,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    pub nodes: Vec<LatticeNode>,
}

const SOURCE_PAIR: [(usize, usize); 2] = [(0, 1), (1, 0)];
const SINK_PAIR: [(usize, usize); 2] = [(2, 3), (3, 2)];

fn graph(edges: &[(usize, usize)]) -> Digraph {
    Digraph::with_loops(4, edges.iter().copied()).expect("vertices in range").transitive_closure()
}

fn joined(parts: &[&[(usize, usize)]]) -> Digraph {
    let all: Vec<(usize, usize)> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    graph(&all)
}

pub fn intermediate_lattice() -> Lattice {
    let a: Vec<(usize, usize)> = CYCLE_EDGES.to_vec();
    let a_star: Vec<(usize, usize)> = a.iter().map(|&(i, j)| (j, i)).collect();
    let both: Vec<(usize, usize)> = SOURCE_PAIR.iter().chain(SINK_PAIR.iter()).copied().collect();
    let complete: Vec<(usize, usize)> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
    let raw: Vec<(&'static str, Digraph)> = vec![
        ("D⊕D", graph(&[])),
        ("D̃⊕D", graph(&SOURCE_PAIR)),
        ("D⊕D̃", graph(&SINK_PAIR)),
        ("D̃⊕D̃", graph(&both)),
        ("A", graph(&a)),
        ("A*", graph(&a_star)),
        ("⟨A,D̃⊕D⟩", joined(&[&a, &SOURCE_PAIR])),
        ("⟨A*,D̃⊕D⟩", joined(&[&a_star, &SOURCE_PAIR])),
        ("⟨A,D⊕D̃⟩", joined(&[&a, &SINK_PAIR])),
        ("⟨A*,D⊕D̃⟩", joined(&[&a_star, &SINK_PAIR])),
        ("⟨A,D̃⊕D̃⟩", joined(&[&a, &both])),
        ("⟨A*,D̃⊕D̃⟩", joined(&[&a_star, &both])),
        ("B", graph(&complete)),
    ];
    let leq = |x: &Digraph, y: &Digraph| x.edges().is_subset(y.edges());
    let nodes = raw
        .iter()
        .map(|(label, g)| {
            let below: Vec<usize> = (0..raw.len()).filter(|&j| raw[j].1 != *g && leq(&raw[j].1, g)).collect();
            let covers = below
                .iter()
                .filter(|&&j| !below.iter().any(|&k| k != j && leq(&raw[j].1, &raw[k].1)))
                .map(|&j| raw[j].0)
                .collect();
            LatticeNode { label, digraph: g.clone(), covers }
        })
        .collect();
    Lattice { nodes }
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.nodes[i].digraph.edges().is_subset(self.nodes[j].digraph.edges())
    }

    /// The adjoint: transpose of the digraph.
    pub fn star(&self, i: usize) -> usize {
        let t = self.nodes[i].digraph.transpose();
        self.nodes.iter().position(|n| n.digraph == t).expect("lattice is closed under adjoints")
    }

    pub fn self_adjoint(&self) -> Vec<&'static str> {
        (0..self.len()).filter(|&i| self.star(i) == i).map(|i| self.nodes[i].label).collect()
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq(i, j)))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq(j, i)))
    }

    pub fn star_is_order_automorphism(&self) -> bool {
        let n = self.len();
        let image: BTreeSet<usize> = (0..n).map(|i| self.star(i)).collect();
        image.len() == n
            && (0..n).all(|i| self.star(self.star(i)) == i)
            && (0..n).all(|i| (0..n).all(|j| self.leq(i, j) == self.leq(self.star(i), self.star(j))))
    }

    /// Hasse edges `(lower, upper)` by label.
    pub fn hasse_edges(&self) -> Vec<(&'static str, &'static str)> {
        self.nodes.iter().flat_map(|n| n.covers.iter().map(move |&c| (c, n.label))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_nodes() {
        let l = intermediate_lattice();
        assert_eq!(l.len(), 13);
        assert_eq!(l.nodes[l.minimum().unwrap()].label, "D⊕D");
        assert_eq!(l.nodes[l.maximum().unwrap()].label, "B");
        assert!(l.star_is_order_automorphism());
        assert_eq!(l.self_adjoint(), vec!["D⊕D", "D̃⊕D", "D⊕D̃", "D̃⊕D̃", "B"]);
        let graphs: BTreeSet<_> = l.nodes.iter().map(|n| n.digraph.edges().clone()).collect();
        assert_eq!(graphs.len(), 13);
        assert!(l.nodes.iter().all(|n| n.digraph.validate().is_empty()));
    }

    #[test]
    fn chain_through_a() {
        let l = intermediate_lattice();
        let i = |s| l.index_of(s).unwrap();
        assert!(l.leq(i("A"), i("⟨A,D̃⊕D⟩")));
        assert!(l.leq(i("⟨A,D̃⊕D⟩"), i("⟨A,D̃⊕D̃⟩")));
        assert!(l.leq(i("⟨A,D̃⊕D̃⟩"), i("B")));
        assert!(!l.leq(i("A"), i("A*")));
        assert_eq!(l.nodes[i("B")].covers.len(), 2);
    }
}
