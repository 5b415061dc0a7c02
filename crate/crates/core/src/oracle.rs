//! The cut oracle: a Steiner mincut after reducing one edge's capacity.
//!
//! When the reduction does not push the edge's mincut below `λ_S`, the
//! stored Steiner mincut is still optimal. Otherwise the answer is a mincut
//! for the edge, found by edge type:
//!
//! * both endpoints non-Steiner: an augmented [`CapTree`] over those edges;
//! * both endpoints Steiner: the Gomory–Hu tree;
//! * one Steiner endpoint `x`, non-Steiner `u`: the nearest mincuts of the
//!   vital edges at `u` form a laminar family, and the smallest member
//!   containing `x` is the nearest mincut of `(x, u)`.

use serde::{Deserialize, Serialize};

use crate::cap_tree::{build_cap_tree, CapAnswer, CapTree};
use crate::error::{GraphError, OracleError};
use crate::gomory_hu::{anchor, GomoryHuTree};
use crate::graph::{Capacity, Cut, EdgeId, EdgeType, Graph, Vertex};
use crate::laminar::LaminarTree;
use crate::steiner::{all_edge_mincuts, EdgeMincut, SteinerBase};

/// Answer to a cut query. `cut.capacity` is measured in the reduced graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutAnswer {
    pub capacity: Capacity,
    pub changed: bool,
    pub cut: Cut,
}

/// Stored words per component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub type1: usize,
    pub gh: usize,
    pub type3: usize,
    pub captree: usize,
    pub mincut: usize,
}

impl SpaceReport {
    pub fn total(&self) -> usize {
        self.type1 + self.gh + self.type3 + self.captree + self.mincut
    }
}

/// Laminar trees of nearest mincuts, one per non-Steiner endpoint of a
/// Type-3 edge, sorted by that endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Type3Forest {
    trees: Vec<(Vertex, LaminarTree)>,
}

impl Type3Forest {
    fn build(g: &Graph, base: &SteinerBase<'_>, table: &[EdgeMincut]) -> Result<Self, OracleError> {
        let n = g.n();
        let mut vital_at: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        let mut endpoints: Vec<Vertex> = Vec::new();
        for (id, mc) in table.iter().enumerate() {
            if let EdgeType::Type3 {
                steiner_end,
                non_steiner_end,
            } = g.classify_id(id)
            {
                endpoints.push(non_steiner_end);
                if mc.vital {
                    vital_at[non_steiner_end].push(steiner_end);
                }
            }
        }
        endpoints.sort_unstable();
        endpoints.dedup();

        let mut trees = Vec::with_capacity(endpoints.len());
        for u in endpoints {
            let mut family = Vec::with_capacity(vital_at[u].len());
            for &x in &vital_at[u] {
                family.push(base.nearest_mincut(x, u)?);
            }
            let sides: Vec<Vec<Vertex>> = family.iter().map(|nm| nm.cut.side.clone()).collect();
            let tree = LaminarTree::build(&sides, n)?;
            for nm in &family {
                let got = tree.subtree_set(nm.x)?.map(|s| {
                    let mut s = s.to_vec();
                    s.sort_unstable();
                    s
                });
                if got.as_deref() != Some(&nm.cut.side[..]) {
                    return Err(OracleError::Invariant(format!(
                        "subtree of {} in the tree of {u} is not its nearest mincut",
                        nm.x
                    )));
                }
            }
            trees.push((u, tree));
        }
        Ok(Type3Forest { trees })
    }

    pub fn tree(&self, u: Vertex) -> Option<&LaminarTree> {
        self.trees
            .binary_search_by_key(&u, |(v, _)| *v)
            .ok()
            .map(|i| &self.trees[i].1)
    }

    pub fn trees(&self) -> &[(Vertex, LaminarTree)] {
        &self.trees
    }

    pub fn words(&self) -> usize {
        self.trees.iter().map(|(_, t)| 1 + t.words()).sum()
    }
}

/// Sub-quadratic oracle answering both capacity and cut queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullOracle {
    graph: Graph,
    lambda: Capacity,
    mincut: Cut,
    gh: GomoryHuTree,
    cap_tree: CapTree,
    type1: Option<CapTree>,
    type3: Type3Forest,
}

/// Quadratic-space reference: a cap tree over every edge whose nodes keep
/// the full mincut of their selected edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineQuadraticOracle {
    mincut: Cut,
    tree: CapTree,
}

fn check_delta(g: &Graph, x: Vertex, y: Vertex, delta: Capacity) -> Result<EdgeId, OracleError> {
    let id = g.find_edge(x, y)?;
    let w = g.edge(id).w;
    if delta > w {
        return Err(GraphError::DeltaOutOfRange { delta, w }.into());
    }
    Ok(id)
}

/// `side` or its complement, whichever leaves out the anchor.
pub fn orient(side: &[Vertex], n: usize) -> Vec<Vertex> {
    let mut mask = vec![false; n];
    for &v in side {
        mask[v] = true;
    }
    if mask[anchor(n)] {
        (0..n).filter(|&v| !mask[v]).collect()
    } else {
        side.to_vec()
    }
}

struct Parts {
    gh: GomoryHuTree,
    lambda: Capacity,
    mincut: Cut,
    table: Vec<EdgeMincut>,
}

fn parts(g: &Graph) -> Parts {
    let gh = GomoryHuTree::build(g);
    let (lambda, child) = gh.steiner_mincut_edge(g);
    let mincut = Cut::new(gh.side_excluding(child, anchor(g.n())), lambda);
    let table = {
        let base = SteinerBase::with_gomory_hu(g, &gh);
        all_edge_mincuts(&base, &gh)
    };
    Parts {
        gh,
        lambda,
        mincut,
        table,
    }
}

impl FullOracle {
    pub fn build(g: &Graph) -> Result<FullOracle, OracleError> {
        let p = parts(g);
        FullOracle::from_parts(g, p)
    }

    /// Builds both oracles from one set of edge mincuts.
    pub fn build_with_baseline(
        g: &Graph,
    ) -> Result<(FullOracle, BaselineQuadraticOracle), OracleError> {
        let p = parts(g);
        let all: Vec<EdgeId> = (0..g.m()).collect();
        let universe: Vec<Vertex> = (0..g.n()).collect();
        let baseline = BaselineQuadraticOracle {
            mincut: p.mincut.clone(),
            tree: CapTree::build(g, p.lambda, &p.table, &all, &universe, true),
        };
        Ok((FullOracle::from_parts(g, p)?, baseline))
    }

    fn from_parts(g: &Graph, p: Parts) -> Result<FullOracle, OracleError> {
        let Parts {
            gh,
            lambda,
            mincut,
            table,
        } = p;
        let all: Vec<EdgeId> = (0..g.m()).collect();
        let cap_tree = build_cap_tree(g, lambda, &table, &all);

        let type1_edges: Vec<EdgeId> = (0..g.m())
            .filter(|&id| g.classify_id(id) == EdgeType::Type1)
            .collect();
        let type1 = (!type1_edges.is_empty()).then(|| {
            let mut universe: Vec<Vertex> = type1_edges
                .iter()
                .flat_map(|&id| [g.edge(id).u, g.edge(id).v])
                .collect();
            universe.sort_unstable();
            universe.dedup();
            CapTree::build(g, lambda, &table, &type1_edges, &universe, true)
        });

        let type3 = {
            let base = SteinerBase::with_gomory_hu(g, &gh);
            Type3Forest::build(g, &base, &table)?
        };
        Ok(FullOracle {
            graph: g.clone(),
            lambda,
            mincut,
            gh,
            cap_tree,
            type1,
            type3,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lambda(&self) -> Capacity {
        self.lambda
    }

    /// Stored Steiner mincut, without the anchor vertex.
    pub fn mincut(&self) -> &Cut {
        &self.mincut
    }

    pub fn gomory_hu(&self) -> &GomoryHuTree {
        &self.gh
    }

    pub fn cap_tree(&self) -> &CapTree {
        &self.cap_tree
    }

    pub fn type1(&self) -> Option<&CapTree> {
        self.type1.as_ref()
    }

    pub fn type3(&self) -> &Type3Forest {
        &self.type3
    }

    pub fn cap_query(&self, x: Vertex, y: Vertex, delta: Capacity) -> Result<CapAnswer, OracleError> {
        self.cap_tree.cap_query(&self.graph, x, y, delta)
    }

    /// A Steiner mincut of the graph with `w(x, y)` reduced by `delta`.
    ///
    /// Type-3 answers contain the Steiner endpoint; all others leave out
    /// the anchor vertex `n - 1`.
    pub fn cut_query(&self, x: Vertex, y: Vertex, delta: Capacity) -> Result<CutAnswer, OracleError> {
        let g = &self.graph;
        let id = check_delta(g, x, y, delta)?;
        let ans = self.cap_tree.cap_query(g, x, y, delta)?;
        if !ans.changed {
            return Ok(CutAnswer {
                capacity: ans.capacity,
                changed: false,
                cut: self.mincut.clone(),
            });
        }
        let side: Vec<Vertex> = match g.classify_id(id) {
            EdgeType::Type1 => {
                let t = self
                    .type1
                    .as_ref()
                    .ok_or_else(|| OracleError::Invariant("missing Type-1 tree".into()))?;
                let node = t.lca_node(g, x, y)?;
                t.stored_cut(node)
                    .ok_or_else(|| OracleError::Invariant("Type-1 node without a cut".into()))?
                    .to_vec()
            }
            EdgeType::Type2 => {
                let (_, child) = self.gh.path_min(x, y)?;
                self.gh.side_excluding(child, anchor(g.n()))
            }
            EdgeType::Type3 {
                steiner_end,
                non_steiner_end,
            } => self
                .type3
                .tree(non_steiner_end)
                .and_then(|t| t.subtree_set(steiner_end).ok().flatten())
                .ok_or(OracleError::NotVital {
                    u: steiner_end,
                    v: non_steiner_end,
                })?
                .to_vec(),
        };
        Ok(CutAnswer {
            capacity: ans.capacity,
            changed: true,
            cut: Cut::new(side, ans.capacity),
        })
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport {
            type1: self.type1.as_ref().map_or(0, CapTree::words),
            gh: self.gh.words(),
            type3: self.type3.words(),
            captree: self.cap_tree.words(),
            mincut: self.mincut.len() + 1,
        }
    }

    /// Overwrites the capacity stored at a cap-tree node.
    #[doc(hidden)]
    pub fn tamper_cap_tree(&mut self, node: usize, cap: Capacity) {
        self.cap_tree.tamper_cap(node, cap);
    }
}

impl BaselineQuadraticOracle {
    pub fn build(g: &Graph) -> Result<BaselineQuadraticOracle, OracleError> {
        Ok(FullOracle::build_with_baseline(g)?.1)
    }

    pub fn tree(&self) -> &CapTree {
        &self.tree
    }

    pub fn cap_query(
        &self,
        g: &Graph,
        x: Vertex,
        y: Vertex,
        delta: Capacity,
    ) -> Result<CapAnswer, OracleError> {
        self.tree.cap_query(g, x, y, delta)
    }

    /// Same contract as [`FullOracle::cut_query`], always leaving out the
    /// anchor vertex.
    pub fn cut_query(
        &self,
        g: &Graph,
        x: Vertex,
        y: Vertex,
        delta: Capacity,
    ) -> Result<CutAnswer, OracleError> {
        check_delta(g, x, y, delta)?;
        let ans = self.tree.cap_query(g, x, y, delta)?;
        let cut = if ans.changed {
            let node = self.tree.lca_node(g, x, y)?;
            let side = self
                .tree
                .stored_cut(node)
                .ok_or_else(|| OracleError::Invariant("baseline node without a cut".into()))?;
            Cut::new(side.to_vec(), ans.capacity)
        } else {
            self.mincut.clone()
        };
        Ok(CutAnswer {
            capacity: ans.capacity,
            changed: ans.changed,
            cut,
        })
    }

    pub fn words(&self) -> usize {
        self.tree.words() + self.mincut.len() + 1
    }
}

pub fn build_full_oracle(g: &Graph) -> Result<FullOracle, OracleError> {
    FullOracle::build(g)
}

pub fn build_baseline_oracle(g: &Graph) -> Result<BaselineQuadraticOracle, OracleError> {
    BaselineQuadraticOracle::build(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> Graph {
        Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap()
    }

    fn triangle(steiner: &[Vertex]) -> Graph {
        Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], steiner.to_vec()).unwrap()
    }

    #[test]
    fn path_failure_isolates_a() {
        let g = path();
        let o = FullOracle::build(&g).unwrap();
        let ans = o.cut_query(0, 1, 3).unwrap();
        assert_eq!(ans.capacity, 0);
        assert!(ans.changed);
        assert_eq!(ans.cut.side, vec![0]);
    }

    #[test]
    fn zero_delta_returns_stored_mincut() {
        let g = path();
        let o = FullOracle::build(&g).unwrap();
        let ans = o.cut_query(0, 1, 0).unwrap();
        assert!(!ans.changed);
        assert_eq!(&ans.cut, o.mincut());
        assert_eq!(ans.cut.side, vec![0, 1]);
    }

    #[test]
    fn triangle_type3_reports_nearest() {
        let g = triangle(&[0, 1]);
        let o = FullOracle::build(&g).unwrap();
        let ans = o.cut_query(0, 2, 1).unwrap();
        assert_eq!(ans.capacity, 1);
        assert_eq!(ans.cut.side, vec![0]);
        let forest = o.type3();
        assert_eq!(forest.trees().len(), 1);
        let mut members = forest.tree(2).unwrap().members();
        members.sort();
        assert_eq!(members, vec![vec![0], vec![1]]);
    }

    #[test]
    fn global_graph_has_no_type1_or_type3() {
        let g = triangle(&[0, 1, 2]);
        let o = FullOracle::build(&g).unwrap();
        let r = o.space_report();
        assert_eq!(r.type1, 0);
        assert_eq!(r.type3, 0);
        assert_eq!(r.gh, 12);
    }

    #[test]
    fn path_of_four_components() {
        // s1 - u - v - s2
        let g = Graph::new(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], [0, 3]).unwrap();
        let o = FullOracle::build(&g).unwrap();
        assert!(o.type1().is_some());
        let us: Vec<Vertex> = o.type3().trees().iter().map(|(u, _)| *u).collect();
        assert_eq!(us, vec![1, 2]);
        let ans = o.cut_query(1, 2, 1).unwrap();
        assert_eq!(ans.capacity, 0);
        assert_eq!(ans.cut.side, vec![0, 1]);
    }

    #[test]
    fn baseline_agrees_on_path() {
        let g = path();
        let (o, b) = FullOracle::build_with_baseline(&g).unwrap();
        for (x, y, w) in [(0, 1, 3), (1, 2, 1)] {
            for d in 0..=w {
                assert_eq!(
                    o.cut_query(x, y, d).unwrap().capacity,
                    b.cut_query(&g, x, y, d).unwrap().capacity
                );
            }
        }
        assert_eq!(b.cut_query(&g, 0, 1, 3).unwrap().cut.side, vec![0]);
    }

    #[test]
    fn rejects_bad_queries() {
        let o = FullOracle::build(&path()).unwrap();
        assert!(matches!(
            o.cut_query(0, 2, 0),
            Err(OracleError::Graph(GraphError::UnknownEdge { .. }))
        ));
        assert!(matches!(
            o.cut_query(1, 2, 5),
            Err(OracleError::Graph(GraphError::DeltaOutOfRange { .. }))
        ));
    }
}
