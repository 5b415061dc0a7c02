//! Steiner-mincut primitives on top of the flow engine: the Steiner mincut,
//! the mincut for an edge, vitality, and nearest mincuts.
//!
//! A mincut for `e = (x, y)` is a cheapest Steiner cut that `e` crosses. Every
//! such cut holds `x` and some Steiner vertex on one side and `y` and some
//! Steiner vertex on the other, so it is found by a family of terminal-set
//! flows. When `x` (or `y`) is Steiner it witnesses its own side. When
//! neither is, a fixed Steiner vertex `s1` is on one of the two sides, which
//! leaves `2(|S| - 1)` flows instead of one per ordered Steiner pair.

use crate::error::OracleError;
use crate::flow::FlowNetwork;
use crate::gomory_hu::GomoryHuTree;
use crate::graph::{Capacity, Cut, EdgeId, EdgeType, Graph, Vertex};

/// Mincut for one edge. `cut.side` contains `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMincut {
    pub edge: EdgeId,
    pub x: Vertex,
    pub y: Vertex,
    pub w: Capacity,
    pub capacity: Capacity,
    pub cut: Cut,
    pub vital: bool,
}

/// Unique inclusion-minimal mincut of a vital Type-3 edge `(x, u)`,
/// oriented to contain the Steiner endpoint `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestMincut {
    pub x: Vertex,
    pub u: Vertex,
    pub cut: Cut,
}

/// One terminal-set flow: sources, sinks, and the Steiner pair it forces
/// apart (used for Gomory–Hu lower bounds).
#[derive(Debug, Clone)]
struct Candidate {
    sources: Vec<Vertex>,
    sinks: Vec<Vertex>,
    pair: (Vertex, Vertex),
}

/// Per-graph context holding the cached Steiner mincut.
#[derive(Debug, Clone)]
pub struct SteinerBase<'g> {
    graph: &'g Graph,
    lambda: Capacity,
    mincut: Cut,
    gh: Option<&'g GomoryHuTree>,
}

impl<'g> SteinerBase<'g> {
    /// Computes λ_S by flows from the first Steiner vertex to every other.
    pub fn new(graph: &'g Graph) -> Self {
        let (lambda, mincut) = steiner_mincut_by_flows(graph);
        SteinerBase {
            graph,
            lambda,
            mincut,
            gh: None,
        }
    }

    /// Uses a Gomory–Hu tree of the same graph for λ_S and to skip flows
    /// whose pairwise lower bound already exceeds the best value.
    pub fn with_gomory_hu(graph: &'g Graph, gh: &'g GomoryHuTree) -> Self {
        let (lambda, child) = gh.steiner_mincut_edge(graph);
        let anchor = graph.terminals()[0];
        let mincut = Cut::new(gh.side_containing(child, anchor), lambda);
        SteinerBase {
            graph,
            lambda,
            mincut,
            gh: Some(gh),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn lambda(&self) -> Capacity {
        self.lambda
    }

    /// A Steiner mincut containing the first Steiner vertex.
    pub fn steiner_mincut(&self) -> &Cut {
        &self.mincut
    }

    fn candidates(&self, x: Vertex, y: Vertex) -> Vec<Candidate> {
        let g = self.graph;
        let terms = g.terminals();
        match (g.is_steiner(x), g.is_steiner(y)) {
            (true, true) => vec![Candidate {
                sources: vec![x],
                sinks: vec![y],
                pair: (x, y),
            }],
            (true, false) => terms
                .iter()
                .filter(|&&s| s != x)
                .map(|&s| Candidate {
                    sources: vec![x],
                    sinks: vec![y, s],
                    pair: (x, s),
                })
                .collect(),
            (false, true) => terms
                .iter()
                .filter(|&&s| s != y)
                .map(|&s| Candidate {
                    sources: vec![x, s],
                    sinks: vec![y],
                    pair: (s, y),
                })
                .collect(),
            (false, false) => {
                let s1 = terms[0];
                let inside = terms.iter().skip(1).map(|&s| Candidate {
                    sources: vec![x, s1],
                    sinks: vec![y, s],
                    pair: (s1, s),
                });
                let outside = terms.iter().skip(1).map(|&s| Candidate {
                    sources: vec![x, s],
                    sinks: vec![y, s1],
                    pair: (s, s1),
                });
                inside.chain(outside).collect()
            }
        }
    }

    /// Candidates ordered by a valid lower bound on their flow value.
    fn bounded_candidates(&self, x: Vertex, y: Vertex) -> Vec<(Capacity, Candidate)> {
        let cands = self.candidates(x, y);
        match self.gh {
            None => cands.into_iter().map(|c| (0, c)).collect(),
            Some(gh) => {
                let base = gh.path_min(x, y).map(|p| p.0).unwrap_or(0);
                let mut out: Vec<(Capacity, Candidate)> = cands
                    .into_iter()
                    .map(|c| {
                        let pair = gh.path_min(c.pair.0, c.pair.1).map(|p| p.0).unwrap_or(0);
                        (base.max(pair), c)
                    })
                    .collect();
                out.sort_by_key(|(lb, _)| *lb);
                out
            }
        }
    }

    /// Runs candidate flows for `(x, y)`. Returns the optimum and every
    /// minimal source side achieving it when `collect_all`, otherwise just
    /// the first optimal side found.
    fn scan(&self, x: Vertex, y: Vertex, collect_all: bool) -> (Capacity, Vec<Vec<Vertex>>) {
        let mut net = FlowNetwork::from_graph(self.graph);
        let mut best = Capacity::MAX;
        let mut sides: Vec<Vec<Vertex>> = Vec::new();
        for (lb, cand) in self.bounded_candidates(x, y) {
            if lb > best || (!collect_all && lb == best) {
                break;
            }
            let r = net
                .min_cut(&cand.sources, &cand.sinks, true)
                .expect("candidate terminals are disjoint");
            if r.capacity < best {
                best = r.capacity;
                sides.clear();
                sides.push(r.side);
            } else if r.capacity == best && collect_all {
                sides.push(r.side);
            }
        }
        (best, sides)
    }

    /// Mincut for edge `(x, y)`, oriented to contain `x`.
    pub fn mincut_for_edge(&self, x: Vertex, y: Vertex) -> Result<EdgeMincut, OracleError> {
        let id = self.graph.find_edge(x, y)?;
        let w = self.graph.edge(id).w;
        let (capacity, sides) = self.scan(x, y, false);
        let side = sides.into_iter().next().ok_or_else(|| {
            OracleError::Invariant(format!("no Steiner cut separates ({x},{y})"))
        })?;
        Ok(EdgeMincut {
            edge: id,
            x,
            y,
            w,
            capacity,
            cut: Cut::new(side, capacity),
            vital: capacity - w < self.lambda,
        })
    }

    pub fn is_vital(&self, x: Vertex, y: Vertex) -> Result<bool, OracleError> {
        Ok(self.mincut_for_edge(x, y)?.vital)
    }

    fn type3_ends(&self, a: Vertex, b: Vertex) -> Result<(Vertex, Vertex, Capacity), OracleError> {
        match self.graph.classify_edge(a, b)? {
            EdgeType::Type3 {
                steiner_end,
                non_steiner_end,
            } => {
                let w = self.graph.edge(self.graph.find_edge(a, b)?).w;
                Ok((steiner_end, non_steiner_end, w))
            }
            _ => Err(OracleError::NotType3 { u: a, v: b }),
        }
    }

    /// Nearest mincut of a vital Type-3 edge `(x, u)` with `x` Steiner.
    ///
    /// The minimal source side of any optimal candidate flow is contained in
    /// the nearest mincut, and mincuts for the edge that contain `x` are
    /// closed under intersection, so one optimal flow suffices.
    pub fn nearest_mincut(&self, a: Vertex, b: Vertex) -> Result<NearestMincut, OracleError> {
        let (x, u, w) = self.type3_ends(a, b)?;
        let (capacity, sides) = self.scan(x, u, false);
        if capacity - w >= self.lambda {
            return Err(OracleError::NotVital { u: a, v: b });
        }
        let side = sides
            .into_iter()
            .next()
            .ok_or_else(|| OracleError::Invariant("no candidate cut".into()))?;
        Ok(NearestMincut {
            x,
            u,
            cut: Cut::new(side, capacity),
        })
    }

    /// Like [`SteinerBase::nearest_mincut`], but runs every optimal
    /// candidate and checks that the smallest minimal side is contained in
    /// all others.
    pub fn nearest_mincut_exhaustive(
        &self,
        a: Vertex,
        b: Vertex,
    ) -> Result<NearestMincut, OracleError> {
        let (x, u, w) = self.type3_ends(a, b)?;
        let (capacity, sides) = self.scan(x, u, true);
        if capacity - w >= self.lambda {
            return Err(OracleError::NotVital { u: a, v: b });
        }
        let cuts: Vec<Cut> = sides.into_iter().map(|s| Cut::new(s, capacity)).collect();
        let smallest = cuts
            .iter()
            .min_by_key(|c| c.len())
            .cloned()
            .ok_or_else(|| OracleError::Invariant("no candidate cut".into()))?;
        if !cuts.iter().all(|c| smallest.is_subset_of(c)) {
            return Err(OracleError::NearestNotUnique { u: x, v: u });
        }
        Ok(NearestMincut { x, u, cut: smallest })
    }
}

fn steiner_mincut_by_flows(g: &Graph) -> (Capacity, Cut) {
    let terms = g.terminals();
    let s0 = terms[0];
    let mut net = FlowNetwork::from_graph(g);
    let mut best: Option<(Capacity, Vec<Vertex>)> = None;
    for &t in &terms[1..] {
        let r = net.min_cut(&[s0], &[t], true).expect("distinct terminals");
        if best.as_ref().is_none_or(|(c, _)| r.capacity < *c) {
            best = Some((r.capacity, r.side));
        }
    }
    let (cap, side) = best.expect("at least two Steiner vertices");
    (cap, Cut::new(side, cap))
}

/// λ_S and a Steiner mincut containing the lowest-numbered Steiner vertex.
pub fn steiner_mincut(g: &Graph) -> (Capacity, Cut) {
    steiner_mincut_by_flows(g)
}

pub fn mincut_for_edge(g: &Graph, x: Vertex, y: Vertex) -> Result<EdgeMincut, OracleError> {
    SteinerBase::new(g).mincut_for_edge(x, y)
}

pub fn is_vital(g: &Graph, x: Vertex, y: Vertex) -> Result<bool, OracleError> {
    SteinerBase::new(g).is_vital(x, y)
}

pub fn nearest_mincut(g: &Graph, x: Vertex, u: Vertex) -> Result<NearestMincut, OracleError> {
    SteinerBase::new(g).nearest_mincut(x, u)
}

/// Mincuts for every edge of `g`, indexed by edge id.
///
/// Type-2 edges take their cut straight from the Gomory–Hu tree; the rest
/// run candidate flows pruned by tree lower bounds.
pub fn all_edge_mincuts(base: &SteinerBase<'_>, gh: &GomoryHuTree) -> Vec<EdgeMincut> {
    let g = base.graph();
    g.edges()
        .iter()
        .enumerate()
        .map(|(id, e)| match g.classify_id(id) {
            EdgeType::Type2 => {
                let cut = gh.query(e.u, e.v).expect("distinct endpoints");
                EdgeMincut {
                    edge: id,
                    x: e.u,
                    y: e.v,
                    w: e.w,
                    capacity: cut.capacity,
                    vital: cut.capacity - e.w < base.lambda(),
                    cut,
                }
            }
            _ => base
                .mincut_for_edge(e.u, e.v)
                .expect("edge taken from the graph"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> Graph {
        Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap()
    }

    fn k3(steiner: &[Vertex]) -> Graph {
        Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], steiner.iter().copied()).unwrap()
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
    fn steiner_mincut_examples() {
        assert_eq!(steiner_mincut(&k3(&[0, 1, 2])), (2, Cut::new(vec![0], 2)));
        assert_eq!(steiner_mincut(&path_abc()), (1, Cut::new(vec![0, 1], 1)));
        assert_eq!(
            steiner_mincut(&triangles_bridge()),
            (1, Cut::new(vec![0, 1, 2], 1))
        );
    }

    use crate::error::GraphError;

    #[test]
    fn mincut_for_edge_examples() {
        let m = mincut_for_edge(&path_abc(), 0, 1).unwrap();
        assert_eq!((m.capacity, m.cut.side.clone(), m.vital), (3, vec![0], true));
        let m = mincut_for_edge(&k3(&[0, 1, 2]), 0, 1).unwrap();
        assert_eq!((m.capacity, m.cut.side.clone()), (2, vec![0]));
        let m = mincut_for_edge(&triangles_bridge(), 0, 1).unwrap();
        assert_eq!((m.capacity, m.cut.side.clone(), m.vital), (2, vec![0], false));
        assert!(matches!(
            mincut_for_edge(&path_abc(), 0, 2),
            Err(OracleError::Graph(GraphError::UnknownEdge { .. }))
        ));
    }

    #[test]
    fn type1_edge_uses_both_orientations() {
        // s1 - u - v - s2 plus a chord s1 - v.
        let g = Graph::new(4, [(0, 1, 5), (1, 2, 1), (2, 3, 5), (0, 2, 4)], [0, 3]).unwrap();
        let m = mincut_for_edge(&g, 1, 2).unwrap();
        assert_eq!(m.capacity, 5);
        assert!(m.cut.contains(1) && !m.cut.contains(2));
        assert_eq!(g.cut_capacity(&m.cut.side).unwrap(), 5);
    }

    #[test]
    fn vitality_examples() {
        assert!(is_vital(&path_abc(), 0, 1).unwrap());
        assert!(!is_vital(&triangles_bridge(), 0, 1).unwrap());
        let z = Graph::new(3, [(0, 1, 0), (1, 2, 2), (0, 2, 2)], [0, 2]).unwrap();
        assert!(!is_vital(&z, 0, 1).unwrap());
    }

    #[test]
    fn nearest_mincut_examples() {
        let g = k3(&[0, 1]);
        assert_eq!(nearest_mincut(&g, 0, 2).unwrap().cut.side, vec![0]);
        assert_eq!(nearest_mincut(&g, 2, 1).unwrap().cut.side, vec![1]);
        assert_eq!(nearest_mincut(&path_abc(), 0, 1).unwrap().cut.side, vec![0]);
        let base = SteinerBase::new(&g);
        assert_eq!(
            base.nearest_mincut_exhaustive(0, 2).unwrap(),
            base.nearest_mincut(0, 2).unwrap()
        );
    }

    #[test]
    fn nearest_mincut_refusals() {
        let g = k3(&[0, 1]);
        assert_eq!(
            nearest_mincut(&g, 0, 1).unwrap_err(),
            OracleError::NotType3 { u: 0, v: 1 }
        );
        // Heavy triangle plus a light pendant Steiner vertex: (0,2) is not vital.
        let h = Graph::new(4, [(0, 1, 5), (1, 2, 5), (0, 2, 5), (2, 3, 1)], [0, 1, 3]).unwrap();
        assert_eq!(
            nearest_mincut(&h, 0, 2).unwrap_err(),
            OracleError::NotVital { u: 0, v: 2 }
        );
    }

    #[test]
    fn gomory_hu_pruning_agrees() {
        let g = Graph::new(
            6,
            [(0, 1, 2), (1, 2, 3), (2, 3, 1), (3, 4, 4), (4, 5, 2), (5, 0, 1), (1, 4, 2)],
            [0, 3, 5],
        )
        .unwrap();
        let gh = GomoryHuTree::build(&g);
        let plain = SteinerBase::new(&g);
        let fast = SteinerBase::with_gomory_hu(&g, &gh);
        assert_eq!(plain.lambda(), fast.lambda());
        for e in g.edges() {
            let a = plain.mincut_for_edge(e.u, e.v).unwrap();
            let b = fast.mincut_for_edge(e.u, e.v).unwrap();
            assert_eq!(a.capacity, b.capacity);
            assert_eq!(a.vital, b.vital);
        }
    }
}
