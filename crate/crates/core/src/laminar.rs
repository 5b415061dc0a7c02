//! Rooted-tree representation of a laminar family of vertex sets.
//!
//! Each family member is a non-root node; a vertex maps to the node of the
//! smallest member containing it, or to the root if no member does. The
//! vertices of every subtree are stored contiguously, so the set below a
//! node is emitted as a slice.

use serde::{Deserialize, Serialize};

use crate::error::LaminarError;
use crate::graph::Vertex;

pub const ROOT: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaminarTree {
    universe: usize,
    parent: Vec<Option<usize>>,
    /// `(vertex, node)` for vertices not mapped to the root, sorted by vertex.
    node_of: Vec<(Vertex, usize)>,
    /// Non-root vertices in subtree order.
    order: Vec<Vertex>,
    /// `order[start[v]..end[v]]` is the subtree of node `v`.
    start: Vec<usize>,
    end: Vec<usize>,
}

impl LaminarTree {
    /// Builds the tree for `family` over vertices `0..universe`. Duplicate
    /// members collapse to one node; crossing members are rejected.
    pub fn build(family: &[Vec<Vertex>], universe: usize) -> Result<LaminarTree, LaminarError> {
        let mut sets: Vec<Vec<Vertex>> = Vec::with_capacity(family.len());
        for member in family {
            let mut s = member.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(LaminarError::EmptyMember);
            }
            if let Some(&v) = s.iter().find(|&&v| v >= universe) {
                return Err(LaminarError::OutsideUniverse { vertex: v, n: universe });
            }
            sets.push(s);
        }
        sets.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        sets.dedup();

        let mut phi = vec![ROOT; universe];
        let mut parent: Vec<Option<usize>> = vec![None];
        let mut node_sets: Vec<&[Vertex]> = vec![&[]];
        for set in &sets {
            let p = phi[set[0]];
            if let Some(&v) = set.iter().find(|&&v| phi[v] != p) {
                let clash = if phi[v] != ROOT { phi[v] } else { p };
                return Err(LaminarError::Crossing {
                    first: node_sets[clash].to_vec(),
                    second: set.clone(),
                });
            }
            let id = parent.len();
            parent.push(Some(p));
            node_sets.push(set);
            for &v in set {
                phi[v] = id;
            }
        }

        let nodes = parent.len();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for (id, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(id);
            }
        }
        let mut own: Vec<Vec<Vertex>> = vec![Vec::new(); nodes];
        for (v, &node) in phi.iter().enumerate() {
            if node != ROOT {
                own[node].push(v);
            }
        }
        let mut order = Vec::new();
        let mut start = vec![0; nodes];
        let mut end = vec![0; nodes];
        let mut stack: Vec<(usize, bool)> = vec![(ROOT, false)];
        while let Some((node, done)) = stack.pop() {
            if done {
                end[node] = order.len();
                continue;
            }
            start[node] = order.len();
            order.extend_from_slice(&own[node]);
            stack.push((node, true));
            for &c in children[node].iter().rev() {
                stack.push((c, false));
            }
        }
        let node_of: Vec<(Vertex, usize)> = phi
            .iter()
            .enumerate()
            .filter(|(_, &node)| node != ROOT)
            .map(|(v, &node)| (v, node))
            .collect();
        Ok(LaminarTree {
            universe,
            parent,
            node_of,
            order,
            start,
            end,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    /// Node a vertex is mapped to.
    pub fn phi(&self, x: Vertex) -> Result<usize, LaminarError> {
        if x >= self.universe {
            return Err(LaminarError::UnknownVertex { vertex: x });
        }
        Ok(self
            .node_of
            .binary_search_by_key(&x, |&(v, _)| v)
            .map(|i| self.node_of[i].1)
            .unwrap_or(ROOT))
    }

    /// Vertices mapped into the subtree of `node`.
    pub fn node_set(&self, node: usize) -> &[Vertex] {
        &self.order[self.start[node]..self.end[node]]
    }

    /// Smallest member containing `x`, or `None` when no member does.
    pub fn subtree_set(&self, x: Vertex) -> Result<Option<&[Vertex]>, LaminarError> {
        match self.phi(x)? {
            ROOT => Ok(None),
            node => Ok(Some(self.node_set(node))),
        }
    }

    /// All members, one per non-root node, each sorted.
    pub fn members(&self) -> Vec<Vec<Vertex>> {
        (1..self.node_count())
            .map(|node| {
                let mut s = self.node_set(node).to_vec();
                s.sort_unstable();
                s
            })
            .collect()
    }

    /// Node records plus one map entry and one order slot per vertex not
    /// mapped to the root.
    pub fn words(&self) -> usize {
        self.node_count() + self.node_of.len() + self.order.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nested_family() {
        let t = LaminarTree::build(&[vec![0], vec![1], vec![0, 1]], 3).unwrap();
        assert_eq!(t.node_count(), 4);
        let ab = t.phi(0).map(|n| t.parent(n).unwrap()).unwrap();
        assert_eq!(t.parent(ab), Some(ROOT));
        assert_eq!(t.parent(t.phi(1).unwrap()), Some(ab));
        assert_eq!(t.phi(2).unwrap(), ROOT);
        assert_eq!(t.subtree_set(0).unwrap(), Some(&[0][..]));
        assert_eq!(t.subtree_set(2).unwrap(), None);
    }

    #[test]
    fn empty_family() {
        let t = LaminarTree::build(&[], 2).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.phi(0).unwrap(), ROOT);
        assert_eq!(t.phi(1).unwrap(), ROOT);
        assert_eq!(t.words(), 1);
    }

    #[test]
    fn pair_member() {
        let t = LaminarTree::build(&[vec![0, 1]], 3).unwrap();
        let mut s = t.subtree_set(1).unwrap().unwrap().to_vec();
        s.sort();
        assert_eq!(s, vec![0, 1]);
    }

    #[test]
    fn rejects_crossing() {
        let err = LaminarTree::build(&[vec![0, 1], vec![1, 2]], 3).unwrap_err();
        assert!(matches!(err, LaminarError::Crossing { .. }));
    }

    #[test]
    fn duplicates_collapse() {
        let t = LaminarTree::build(&[vec![2, 0], vec![0, 2], vec![0]], 4).unwrap();
        assert_eq!(t.node_count(), 3);
    }

    #[test]
    fn unknown_vertex() {
        let t = LaminarTree::build(&[vec![0]], 2).unwrap();
        assert_eq!(
            t.subtree_set(5).unwrap_err(),
            LaminarError::UnknownVertex { vertex: 5 }
        );
        assert!(matches!(
            LaminarTree::build(&[vec![3]], 2),
            Err(LaminarError::OutsideUniverse { .. })
        ));
    }

    /// Random laminar families from recursive interval splitting.
    fn laminar_family() -> impl Strategy<Value = (usize, Vec<Vec<Vertex>>)> {
        (2usize..24, proptest::collection::vec((0usize..100, 0usize..100), 0..30)).prop_map(
            |(n, cuts)| {
                let mut family = Vec::new();
                let mut intervals = vec![(0usize, n)];
                for (a, b) in cuts {
                    let i = a % intervals.len();
                    let (lo, hi) = intervals[i];
                    if hi - lo < 2 {
                        continue;
                    }
                    let mid = lo + 1 + b % (hi - lo - 1);
                    intervals[i] = (lo, mid);
                    intervals.push((mid, hi));
                    family.push((lo..mid).collect::<Vec<_>>());
                    family.push((mid..hi).collect::<Vec<_>>());
                }
                (n, family)
            },
        )
    }

    proptest! {
        #[test]
        fn members_round_trip((n, family) in laminar_family()) {
            let t = LaminarTree::build(&family, n).unwrap();
            let mut expected: Vec<Vec<Vertex>> = family.clone();
            expected.sort();
            expected.dedup();
            let mut got = t.members();
            got.sort();
            prop_assert_eq!(&got, &expected);
            prop_assert!(t.node_count() <= 2 * family.len() + 1);
            for x in 0..n {
                let smallest = family
                    .iter()
                    .filter(|c| c.contains(&x))
                    .min_by_key(|c| c.len());
                let got = t.subtree_set(x).unwrap().map(|s| {
                    let mut s = s.to_vec();
                    s.sort();
                    s
                });
                prop_assert_eq!(got.as_ref(), smallest);
            }
        }
    }
}
