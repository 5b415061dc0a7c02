//! Full binary tree over vertices whose LCA nodes store edge mincut
//! capacities, answering post-failure capacity queries in constant time.
//!
//! Construction recurses over a vertex set `U`: when some covered edge has
//! both endpoints in `U`, the one with the cheapest mincut is selected, its
//! capacity is stored, and `U` is split by that mincut. Otherwise `U`
//! becomes a leaf. For a covered edge `(x, y)` the node where `x` and `y`
//! part ways selected an edge whose mincut `e` also crosses and which is no
//! more expensive than `C(e)`, so it is a mincut for `e`.

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, OracleError};
use crate::gomory_hu::anchor;
use crate::graph::{Capacity, EdgeId, Graph, Vertex};
use crate::lca::EulerLca;
use crate::steiner::EdgeMincut;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapNode {
    /// `None` for leaves.
    pub cap: Option<Capacity>,
    pub left: usize,
    pub right: usize,
    pub edge: Option<EdgeId>,
    /// Mincut of the selected edge, without the anchor vertex. Present only
    /// in augmented trees.
    pub cut: Option<Vec<Vertex>>,
}

/// Answer to a capacity query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapAnswer {
    pub capacity: Capacity,
    pub changed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CapRecord", try_from = "CapRecord")]
pub struct CapTree {
    nodes: Vec<CapNode>,
    root: usize,
    leaf_of: Vec<Option<usize>>,
    lambda: Capacity,
    covered: Vec<bool>,
    lca: EulerLca,
}

#[derive(Serialize, Deserialize)]
struct CapRecord {
    nodes: Vec<CapNode>,
    root: usize,
    leaf_of: Vec<Option<usize>>,
    lambda: Capacity,
    covered: Vec<EdgeId>,
    edges: usize,
}

impl From<CapTree> for CapRecord {
    fn from(t: CapTree) -> Self {
        CapRecord {
            edges: t.covered.len(),
            covered: (0..t.covered.len()).filter(|&i| t.covered[i]).collect(),
            nodes: t.nodes,
            root: t.root,
            leaf_of: t.leaf_of,
            lambda: t.lambda,
        }
    }
}

impl TryFrom<CapRecord> for CapTree {
    type Error = String;
    fn try_from(r: CapRecord) -> Result<Self, Self::Error> {
        let k = r.nodes.len();
        if r.root >= k {
            return Err("root out of range".into());
        }
        for node in &r.nodes {
            if node.cap.is_some() && (node.left >= k || node.right >= k) {
                return Err("child index out of range".into());
            }
        }
        if r.leaf_of.iter().flatten().any(|&l| l >= k) {
            return Err("leaf index out of range".into());
        }
        let mut covered = vec![false; r.edges];
        for id in r.covered {
            *covered.get_mut(id).ok_or("covered edge out of range")? = true;
        }
        let lca = EulerLca::new(&children(&r.nodes), r.root);
        Ok(CapTree {
            nodes: r.nodes,
            root: r.root,
            leaf_of: r.leaf_of,
            lambda: r.lambda,
            covered,
            lca,
        })
    }
}

fn children(nodes: &[CapNode]) -> Vec<Vec<usize>> {
    nodes
        .iter()
        .map(|nd| match nd.cap {
            Some(_) => vec![nd.left, nd.right],
            None => Vec::new(),
        })
        .collect()
}

impl CapTree {
    /// Builds the tree for the covered edge set `edges` over `universe`,
    /// which must contain every endpoint. `table[id]` is the mincut of edge
    /// `id` on the whole graph. With `augment`, every internal node also
    /// keeps the mincut of its selected edge.
    pub fn build(
        g: &Graph,
        lambda: Capacity,
        table: &[EdgeMincut],
        edges: &[EdgeId],
        universe: &[Vertex],
        augment: bool,
    ) -> CapTree {
        let n = g.n();
        let mut covered = vec![false; g.m()];
        for &id in edges {
            covered[id] = true;
        }
        let mut order: Vec<EdgeId> = edges.to_vec();
        order.sort_unstable_by_key(|&id| {
            let e = g.edge(id);
            (table[id].capacity, e.u, e.v)
        });
        order.dedup();

        let mut nodes: Vec<CapNode> = Vec::new();
        let mut leaf_of = vec![None; n];
        let mut mark = vec![false; n];
        let mut side = vec![false; n];
        // (vertex set, edges sorted by selection key, slot in the parent)
        let mut stack: Vec<(Vec<Vertex>, Vec<EdgeId>, Option<(usize, bool)>)> =
            vec![(universe.to_vec(), order, None)];
        while let Some((set, cand, slot)) = stack.pop() {
            let id = nodes.len();
            if let Some((p, is_left)) = slot {
                if is_left {
                    nodes[p].left = id;
                } else {
                    nodes[p].right = id;
                }
            }
            for &v in &set {
                mark[v] = true;
            }
            let inside: Vec<EdgeId> = cand
                .into_iter()
                .filter(|&e| mark[g.edge(e).u] && mark[g.edge(e).v])
                .collect();
            for &v in &set {
                mark[v] = false;
            }
            let Some(&sel) = inside.first() else {
                for &v in &set {
                    leaf_of[v] = Some(id);
                }
                nodes.push(CapNode {
                    cap: None,
                    left: 0,
                    right: 0,
                    edge: None,
                    cut: None,
                });
                continue;
            };

            let mc = &table[sel];
            for &v in &mc.cut.side {
                side[v] = true;
            }
            let (l, r): (Vec<Vertex>, Vec<Vertex>) = set.iter().partition(|&&v| side[v]);
            let (le, re): (Vec<EdgeId>, Vec<EdgeId>) = inside
                .into_iter()
                .filter(|&e| side[g.edge(e).u] == side[g.edge(e).v])
                .partition(|&e| side[g.edge(e).u]);
            let cut = augment.then(|| {
                let a = anchor(n);
                if side[a] {
                    (0..n).filter(|&v| !side[v]).collect()
                } else {
                    mc.cut.side.clone()
                }
            });
            for &v in &mc.cut.side {
                side[v] = false;
            }
            nodes.push(CapNode {
                cap: Some(mc.capacity),
                left: 0,
                right: 0,
                edge: Some(sel),
                cut,
            });
            stack.push((r, re, Some((id, false))));
            stack.push((l, le, Some((id, true))));
        }
        let lca = EulerLca::new(&children(&nodes), 0);
        CapTree {
            nodes,
            root: 0,
            leaf_of,
            lambda,
            covered,
            lca,
        }
    }

    pub fn lambda(&self) -> Capacity {
        self.lambda
    }

    pub fn nodes(&self) -> &[CapNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn leaf(&self, x: Vertex) -> Option<usize> {
        self.leaf_of.get(x).copied().flatten()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|nd| nd.cap.is_none()).count()
    }

    pub fn covers(&self, id: EdgeId) -> bool {
        self.covered.get(id).copied().unwrap_or(false)
    }

    /// Node where the leaves of `x` and `y` meet.
    pub fn lca_node(&self, g: &Graph, x: Vertex, y: Vertex) -> Result<usize, OracleError> {
        let id = g.find_edge(x, y)?;
        if !self.covers(id) {
            return Err(OracleError::NotCovered { u: x, v: y });
        }
        match (self.leaf(x), self.leaf(y)) {
            (Some(a), Some(b)) if a != b => Ok(self.lca.lca(a, b)),
            _ => Err(OracleError::Invariant(format!(
                "endpoints of covered edge ({x},{y}) share a leaf"
            ))),
        }
    }

    /// Capacity of the mincut for covered edge `(x, y)`.
    pub fn edge_cap(&self, g: &Graph, x: Vertex, y: Vertex) -> Result<Capacity, OracleError> {
        let node = self.lca_node(g, x, y)?;
        self.nodes[node]
            .cap
            .ok_or_else(|| OracleError::Invariant("LCA of two leaves is a leaf".into()))
    }

    /// Steiner mincut capacity after reducing `w(x, y)` by `delta`.
    pub fn cap_query(
        &self,
        g: &Graph,
        x: Vertex,
        y: Vertex,
        delta: Capacity,
    ) -> Result<CapAnswer, OracleError> {
        let w = g.edge(g.find_edge(x, y)?).w;
        if delta > w {
            return Err(GraphError::DeltaOutOfRange { delta, w }.into());
        }
        let c = self.edge_cap(g, x, y)?;
        let reduced = c - delta;
        Ok(CapAnswer {
            capacity: reduced.min(self.lambda),
            changed: reduced < self.lambda,
        })
    }

    /// Whether reducing `w(x, y)` by `delta` lowers the Steiner mincut.
    /// With `delta = w(x, y)` this decides vitality.
    pub fn edge_vitality_via_tree(
        &self,
        g: &Graph,
        x: Vertex,
        y: Vertex,
        delta: Capacity,
    ) -> Result<bool, OracleError> {
        Ok(self.cap_query(g, x, y, delta)?.changed)
    }

    /// Stored cut at `node`, if the tree is augmented.
    pub fn stored_cut(&self, node: usize) -> Option<&[Vertex]> {
        self.nodes[node].cut.as_deref()
    }

    /// One record per node, one slot per leaf-map entry, `λ_S`, and every
    /// vertex id of stored cuts.
    pub fn words(&self) -> usize {
        let cuts: usize = self
            .nodes
            .iter()
            .filter_map(|nd| nd.cut.as_ref().map(Vec::len))
            .sum();
        self.nodes.len() + self.leaf_of.len() + 1 + cuts
    }

    #[doc(hidden)]
    pub fn tamper_cap(&mut self, node: usize, cap: Capacity) {
        self.nodes[node].cap = Some(cap);
    }
}

/// Builds the tree over all of `V` for the edges `edges`.
pub fn build_cap_tree(
    g: &Graph,
    lambda: Capacity,
    table: &[EdgeMincut],
    edges: &[EdgeId],
) -> CapTree {
    let universe: Vec<Vertex> = (0..g.n()).collect();
    CapTree::build(g, lambda, table, edges, &universe, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gomory_hu::GomoryHuTree;
    use crate::steiner::{all_edge_mincuts, SteinerBase};

    fn full_tree(g: &Graph) -> CapTree {
        let gh = GomoryHuTree::build(g);
        let base = SteinerBase::with_gomory_hu(g, &gh);
        let table = all_edge_mincuts(&base, &gh);
        let all: Vec<EdgeId> = (0..g.m()).collect();
        build_cap_tree(g, base.lambda(), &table, &all)
    }

    fn path() -> Graph {
        Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap()
    }

    #[test]
    fn triangle_levels() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [0, 1, 2]).unwrap();
        let t = full_tree(&g);
        assert_eq!(t.nodes()[0].cap, Some(2));
        assert_eq!(t.leaf_count(), 3);
        let internal: Vec<_> = t.nodes().iter().filter_map(|nd| nd.cap).collect();
        assert_eq!(internal, vec![2, 2]);
    }

    #[test]
    fn empty_edge_set_is_one_leaf() {
        let g = Graph::new(2, [(0, 1, 5)], [0, 1]).unwrap();
        let t = build_cap_tree(&g, 5, &[], &[]);
        assert_eq!(t.nodes().len(), 1);
        assert_eq!(t.leaf(0), t.leaf(1));
        assert_eq!(
            t.cap_query(&g, 0, 1, 0).unwrap_err(),
            OracleError::NotCovered { u: 0, v: 1 }
        );
    }

    #[test]
    fn path_selects_light_edge_first() {
        let g = path();
        let t = full_tree(&g);
        let root = &t.nodes()[0];
        assert_eq!(root.cap, Some(1));
        assert_eq!(root.edge, g.edge_id(1, 2));
        let left = &t.nodes()[root.left];
        assert_eq!(left.cap, Some(3));
        assert!(t.nodes()[root.right].cap.is_none());
    }

    #[test]
    fn path_queries() {
        let g = path();
        let t = full_tree(&g);
        assert_eq!(
            t.cap_query(&g, 0, 1, 3).unwrap(),
            CapAnswer {
                capacity: 0,
                changed: true
            }
        );
        assert_eq!(
            t.cap_query(&g, 1, 2, 0).unwrap(),
            CapAnswer {
                capacity: 1,
                changed: false
            }
        );
        assert!(t.edge_vitality_via_tree(&g, 0, 1, 3).unwrap());
        assert!(!t.edge_vitality_via_tree(&g, 0, 1, 0).unwrap());
        assert!(matches!(
            t.cap_query(&g, 1, 2, 2),
            Err(OracleError::Graph(GraphError::DeltaOutOfRange { delta: 2, w: 1 }))
        ));
        assert!(matches!(
            t.cap_query(&g, 0, 2, 0),
            Err(OracleError::Graph(GraphError::UnknownEdge { .. }))
        ));
    }

    #[test]
    fn triangles_with_bridge() {
        // {0,1,2} and {3,4,5} unit triangles joined by (2,3)
        let g = Graph::new(
            6,
            [
                (0, 1, 1),
                (1, 2, 1),
                (0, 2, 1),
                (3, 4, 1),
                (4, 5, 1),
                (3, 5, 1),
                (2, 3, 1),
            ],
            0..6,
        )
        .unwrap();
        let t = full_tree(&g);
        assert_eq!(t.lambda(), 1);
        assert_eq!(
            t.cap_query(&g, 0, 1, 1).unwrap(),
            CapAnswer {
                capacity: 1,
                changed: false
            }
        );
        assert!(!t.edge_vitality_via_tree(&g, 0, 1, 1).unwrap());
        assert!(t.edge_vitality_via_tree(&g, 2, 3, 1).unwrap());
    }

    #[test]
    fn serde_round_trip_rebuilds_lca() {
        let g = path();
        let t = full_tree(&g);
        let json = serde_json::to_string(&t).unwrap();
        let back: CapTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.cap_query(&g, 0, 1, 3).unwrap().capacity, 0);
    }
}
