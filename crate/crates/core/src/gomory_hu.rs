//! Gomory–Hu cut trees built with the original contraction scheme.
//!
//! Every tree edge `(v, parent(v))` carries the capacity of a minimum cut
//! separating `v` from its parent, and the vertex set of the subtree below
//! `v` *is* such a minimum cut in the graph. Queries report the cheapest
//! edge on a tree path together with the side that contains the first
//! query vertex.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, OracleError};
use crate::flow::FlowNetwork;
use crate::graph::{Capacity, Cut, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GhRecord", try_from = "GhRecord")]
pub struct GomoryHuTree {
    n: usize,
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    edge_cap: Vec<Capacity>,
    depth: Vec<usize>,
    preorder: Vec<Vertex>,
    pos: Vec<usize>,
    size: Vec<usize>,
    // up[j][v]: 2^j-th ancestor; low[j][v]: cheapest (cap, child) on that climb
    up: Vec<Vec<Vertex>>,
    low: Vec<Vec<(Capacity, Vertex)>>,
}

#[derive(Serialize, Deserialize)]
struct GhRecord {
    parent: Vec<Option<Vertex>>,
    edge_cap: Vec<Capacity>,
}

impl From<GomoryHuTree> for GhRecord {
    fn from(t: GomoryHuTree) -> Self {
        GhRecord {
            parent: t.parent,
            edge_cap: t.edge_cap,
        }
    }
}

impl TryFrom<GhRecord> for GomoryHuTree {
    type Error = String;
    fn try_from(r: GhRecord) -> Result<Self, Self::Error> {
        GomoryHuTree::from_parents(r.parent, r.edge_cap).map_err(|e| e.to_string())
    }
}

/// Vertex that oriented cuts leave out: the highest-numbered one.
pub fn anchor(n: usize) -> Vertex {
    n - 1
}

/// Identifies a tree edge by its child endpoint.
pub type TreeEdge = Vertex;

impl GomoryHuTree {
    /// Builds a cut tree by repeatedly splitting a supernode with one
    /// minimum cut in the graph where every other branch of the current
    /// tree is contracted to a single vertex.
    pub fn build(g: &Graph) -> GomoryHuTree {
        let n = g.n();
        if n == 1 {
            return GomoryHuTree::from_parents(vec![None], vec![0]).expect("single vertex");
        }
        let mut members: Vec<Vec<Vertex>> = vec![(0..n).collect()];
        let mut owner: Vec<usize> = vec![0; n];
        let mut tree: Vec<(usize, usize, Capacity)> = Vec::new();
        let mut pending: Vec<usize> = vec![0];

        while let Some(x) = pending.pop() {
            if members[x].len() < 2 {
                continue;
            }
            let nodes = members.len();
            let mut tree_adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
            for &(a, b, _) in &tree {
                tree_adj[a].push(b);
                tree_adj[b].push(a);
            }
            // branch label for every supernode other than x
            let mut branch = vec![usize::MAX; nodes];
            let mut branch_count = 0;
            for &y in &tree_adj[x] {
                branch[y] = branch_count;
                let mut queue = VecDeque::from([y]);
                while let Some(z) = queue.pop_front() {
                    for &w in &tree_adj[z] {
                        if w != x && branch[w] == usize::MAX {
                            branch[w] = branch_count;
                            queue.push_back(w);
                        }
                    }
                }
                branch_count += 1;
            }

            let xs = &members[x];
            let mut local = vec![usize::MAX; n];
            for (i, &v) in xs.iter().enumerate() {
                local[v] = i;
            }
            let k = xs.len();
            let node_of = |v: Vertex| -> usize {
                if owner[v] == x {
                    local[v]
                } else {
                    k + branch[owner[v]]
                }
            };
            let contracted = g.edges().iter().filter_map(|e| {
                let (a, b) = (node_of(e.u), node_of(e.v));
                (a != b).then_some((a, b, e.w))
            });
            let mut net = FlowNetwork::from_edges(k + branch_count, contracted);
            let (s, t) = (xs[0], xs[1]);
            let res = net
                .min_cut(&[local[s]], &[local[t]], true)
                .expect("distinct terminals");
            let mut in_side = vec![false; k + branch_count];
            for &c in &res.side {
                in_side[c] = true;
            }

            let (keep, split): (Vec<Vertex>, Vec<Vertex>) =
                xs.iter().partition(|&&v| in_side[local[v]]);
            let y = members.len();
            for &v in &split {
                owner[v] = y;
            }
            members[x] = keep;
            members.push(split);
            for edge in tree.iter_mut() {
                let other = if edge.0 == x {
                    edge.1
                } else if edge.1 == x {
                    edge.0
                } else {
                    continue;
                };
                if !in_side[k + branch[other]] {
                    if edge.0 == x {
                        edge.0 = y;
                    } else {
                        edge.1 = y;
                    }
                }
            }
            tree.push((x, y, res.capacity));
            pending.push(x);
            pending.push(y);
        }

        // Every supernode is now a single vertex.
        let vertex_of: Vec<Vertex> = members.iter().map(|m| m[0]).collect();
        let mut adj: Vec<Vec<(Vertex, Capacity)>> = vec![Vec::new(); n];
        for &(a, b, c) in &tree {
            let (va, vb) = (vertex_of[a], vertex_of[b]);
            adj[va].push((vb, c));
            adj[vb].push((va, c));
        }
        let mut parent = vec![None; n];
        let mut edge_cap = vec![0; n];
        // Rooting at the anchor makes every anchor-free side a subtree slice.
        let root = anchor(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, c) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    edge_cap[w] = c;
                    queue.push_back(w);
                }
            }
        }
        GomoryHuTree::from_parents(parent, edge_cap).expect("construction yields a spanning tree")
    }

    /// Rebuilds query structures from a parent array. Exactly one vertex
    /// must have no parent.
    pub fn from_parents(
        parent: Vec<Option<Vertex>>,
        edge_cap: Vec<Capacity>,
    ) -> Result<GomoryHuTree, OracleError> {
        let n = parent.len();
        if edge_cap.len() != n || n == 0 {
            return Err(OracleError::Invariant("parent/cap length mismatch".into()));
        }
        let roots: Vec<Vertex> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(OracleError::Invariant(format!(
                "tree must have exactly one root, found {}",
                roots.len()
            )));
        }
        let root = roots[0];
        let mut children: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = parent[v] {
                if p >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: p, n }.into());
                }
                children[p].push(v);
            }
        }
        let mut depth = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &c in children[v].iter().rev() {
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if preorder.len() != n {
            return Err(OracleError::Invariant("parent array contains a cycle".into()));
        }
        let mut pos = vec![0; n];
        for (i, &v) in preorder.iter().enumerate() {
            pos[v] = i;
        }
        let mut size = vec![1; n];
        for &v in preorder.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }

        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut up = vec![vec![root; n]];
        let mut low = vec![vec![(Capacity::MAX, root); n]];
        for v in 0..n {
            if let Some(p) = parent[v] {
                up[0][v] = p;
                low[0][v] = (edge_cap[v], v);
            }
        }
        for j in 1..levels {
            let (prev_up, prev_low) = (&up[j - 1], &low[j - 1]);
            let mut nu = vec![root; n];
            let mut nl = vec![(Capacity::MAX, root); n];
            for v in 0..n {
                let mid = prev_up[v];
                nu[v] = prev_up[mid];
                nl[v] = prev_low[v].min(prev_low[mid]);
            }
            up.push(nu);
            low.push(nl);
        }

        Ok(GomoryHuTree {
            n,
            root,
            parent,
            edge_cap,
            depth,
            preorder,
            pos,
            size,
            up,
            low,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    /// Capacity of the tree edge from `v` to its parent.
    pub fn edge_cap(&self, v: Vertex) -> Capacity {
        self.edge_cap[v]
    }

    /// Tree edges as `(child, parent, cap)`.
    pub fn tree_edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Capacity)> + '_ {
        (0..self.n).filter_map(|v| self.parent[v].map(|p| (v, p, self.edge_cap[v])))
    }

    pub fn in_subtree(&self, v: Vertex, top: Vertex) -> bool {
        self.pos[top] <= self.pos[v] && self.pos[v] < self.pos[top] + self.size[top]
    }

    /// Vertices below tree edge `child`, as a contiguous slice.
    pub fn subtree(&self, child: TreeEdge) -> &[Vertex] {
        &self.preorder[self.pos[child]..self.pos[child] + self.size[child]]
    }

    /// Side of tree edge `child` that contains `u`, emitted in time linear
    /// in its size.
    pub fn side_containing(&self, child: TreeEdge, u: Vertex) -> Vec<Vertex> {
        if self.in_subtree(u, child) {
            self.subtree(child).to_vec()
        } else {
            self.outside(child)
        }
    }

    /// Side of tree edge `child` that does not contain `anchor`.
    pub fn side_excluding(&self, child: TreeEdge, anchor: Vertex) -> Vec<Vertex> {
        if self.in_subtree(anchor, child) {
            self.outside(child)
        } else {
            self.subtree(child).to_vec()
        }
    }

    fn outside(&self, child: TreeEdge) -> Vec<Vertex> {
        let (a, b) = (self.pos[child], self.pos[child] + self.size[child]);
        let mut out = Vec::with_capacity(self.n - self.size[child]);
        out.extend_from_slice(&self.preorder[..a]);
        out.extend_from_slice(&self.preorder[b..]);
        out
    }

    /// Cheapest tree edge on the u–v path as `(cap, child)`.
    pub fn path_min(&self, u: Vertex, v: Vertex) -> Result<(Capacity, TreeEdge), OracleError> {
        if u >= self.n || v >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: u.max(v),
                n: self.n,
            }
            .into());
        }
        if u == v {
            return Err(OracleError::SameVertex);
        }
        let (mut a, mut b) = (u, v);
        let mut best = (Capacity::MAX, self.root);
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut j = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                best = best.min(self.low[j][a]);
                a = self.up[j][a];
            }
            diff >>= 1;
            j += 1;
        }
        if a != b {
            for j in (0..self.up.len()).rev() {
                if self.up[j][a] != self.up[j][b] {
                    best = best.min(self.low[j][a]).min(self.low[j][b]);
                    a = self.up[j][a];
                    b = self.up[j][b];
                }
            }
            best = best.min(self.low[0][a]).min(self.low[0][b]);
        }
        Ok(best)
    }

    /// Minimum (u,v)-cut capacity and the side containing `u`.
    pub fn query(&self, u: Vertex, v: Vertex) -> Result<Cut, OracleError> {
        let (cap, child) = self.path_min(u, v)?;
        Ok(Cut::new(self.side_containing(child, u), cap))
    }

    /// Number of Steiner vertices in every subtree.
    fn steiner_counts(&self, g: &Graph) -> Vec<usize> {
        let mut cnt: Vec<usize> = (0..self.n).map(|v| g.is_steiner(v) as usize).collect();
        for &v in self.preorder.iter().rev() {
            if let Some(p) = self.parent[v] {
                cnt[p] += cnt[v];
            }
        }
        cnt
    }

    /// Cheapest tree edge that separates two Steiner vertices; its subtree
    /// is a Steiner minimum cut.
    pub fn steiner_mincut_edge(&self, g: &Graph) -> (Capacity, TreeEdge) {
        let cnt = self.steiner_counts(g);
        let k = g.terminals().len();
        (0..self.n)
            .filter(|&v| self.parent[v].is_some() && cnt[v] > 0 && cnt[v] < k)
            .map(|v| (self.edge_cap[v], v))
            .min()
            .expect("a tree over at least two Steiner vertices separates them")
    }

    /// Post-failure global minimum cut when `S = V`: reduce `w(u,v)` by
    /// `delta` and report the new capacity with a witnessing cut.
    pub fn global_failure_query(
        &self,
        g: &Graph,
        u: Vertex,
        v: Vertex,
        delta: Capacity,
    ) -> Result<Cut, OracleError> {
        if !g.is_global() {
            return Err(OracleError::NotGlobal);
        }
        let id = g.find_edge(u, v)?;
        let w = g.edge(id).w;
        if delta > w {
            return Err(GraphError::DeltaOutOfRange { delta, w }.into());
        }
        let (lambda, min_edge) = self.steiner_mincut_edge(g);
        let (c, child) = self.path_min(u, v)?;
        if c - delta < lambda {
            Ok(Cut::new(self.side_containing(child, u), c - delta))
        } else {
            Ok(Cut::new(self.side_containing(min_edge, u), lambda))
        }
    }

    /// Stored words: parent and capacity per non-root vertex, the preorder
    /// array and subtree sizes, and two header words.
    pub fn words(&self) -> usize {
        2 * (self.n - 1) + 2 * self.n + 2
    }

    /// One `t <v> <parent> <cap>` line per non-root vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, p, c) in self.tree_edges() {
            let _ = writeln!(out, "t {v} {p} {c}");
        }
        out
    }

    pub fn from_text(n: usize, text: &str) -> Result<GomoryHuTree, OracleError> {
        let mut parent = vec![None; n];
        let mut cap = vec![0; n];
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || OracleError::Invariant(format!("bad tree line `{line}`"));
            if f.len() != 4 || f[0] != "t" {
                return Err(bad());
            }
            let v: usize = f[1].parse().map_err(|_| bad())?;
            let p: usize = f[2].parse().map_err(|_| bad())?;
            let c: Capacity = f[3].parse().map_err(|_| bad())?;
            if v >= n {
                return Err(bad());
            }
            parent[v] = Some(p);
            cap[v] = c;
        }
        GomoryHuTree::from_parents(parent, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> Graph {
        Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap()
    }

    fn triangles_bridge() -> Graph {
        Graph::new(
            6,
            [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)],
            0..6,
        )
        .unwrap()
    }

    #[test]
    fn path_tree_is_the_path() {
        let g = path_abc();
        let t = GomoryHuTree::build(&g);
        let mut edges: Vec<_> = t
            .tree_edges()
            .map(|(a, b, c)| (a.min(b), a.max(b), c))
            .collect();
        edges.sort();
        assert_eq!(edges, vec![(0, 1, 3), (1, 2, 1)]);
        assert_eq!(t.query(0, 2).unwrap(), Cut::new(vec![0, 1], 1));
        assert_eq!(t.query(0, 1).unwrap(), Cut::new(vec![0], 3));
        assert_eq!(t.query(1, 1).unwrap_err(), OracleError::SameVertex);
    }

    #[test]
    fn triangle_tree_caps() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [0, 1, 2]).unwrap();
        let t = GomoryHuTree::build(&g);
        assert!(t.tree_edges().all(|(_, _, c)| c == 2));
    }

    #[test]
    fn single_edge_tree() {
        let g = Graph::new(2, [(0, 1, 7)], [0, 1]).unwrap();
        let t = GomoryHuTree::build(&g);
        assert_eq!(t.tree_edges().collect::<Vec<_>>(), vec![(0, 1, 7)]);
        assert_eq!(t.root(), 1);
    }

    #[test]
    fn disconnected_graph_gets_zero_edges() {
        let g = Graph::new(4, [(0, 1, 2), (2, 3, 5)], [0, 3]).unwrap();
        let t = GomoryHuTree::build(&g);
        assert_eq!(t.query(0, 3).unwrap().capacity, 0);
        assert_eq!(t.query(2, 3).unwrap().capacity, 5);
        let side = t.query(1, 2).unwrap();
        assert_eq!(g.cut_capacity(&side.side).unwrap(), 0);
    }

    #[test]
    fn global_failure_examples() {
        let g = triangles_bridge();
        let t = GomoryHuTree::build(&g);
        let bridge = t.global_failure_query(&g, 2, 3, 1).unwrap();
        assert_eq!(bridge, Cut::new(vec![0, 1, 2], 0));
        let inner = t.global_failure_query(&g, 0, 1, 1).unwrap();
        assert_eq!(inner.capacity, 1);
        assert_eq!(inner.side, vec![0, 1, 2]);
        let none = t.global_failure_query(&g, 4, 5, 0).unwrap();
        assert_eq!(none.capacity, 1);
        assert!(matches!(
            t.global_failure_query(&g, 4, 5, 2),
            Err(OracleError::Graph(GraphError::DeltaOutOfRange { .. }))
        ));
        assert_eq!(
            t.global_failure_query(&path_abc(), 0, 1, 0).unwrap_err(),
            OracleError::NotGlobal
        );
    }

    #[test]
    fn text_round_trip() {
        let g = triangles_bridge();
        let t = GomoryHuTree::build(&g);
        let back = GomoryHuTree::from_text(6, &t.to_text()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn words_are_linear() {
        let t = GomoryHuTree::build(&triangles_bridge());
        assert_eq!(t.words(), 4 * 6);
    }
}
