//! Exact s-t minimum cuts with contracted terminal sets (Dinic).
//!
//! Terminal sets are attached to a super-source and super-sink by arcs of
//! capacity `1 + total`, which no cut separating the sets can saturate.

use std::collections::VecDeque;

use crate::error::FlowError;
use crate::graph::{Capacity, Graph, Vertex};

/// Sources and sinks for one minimum-cut computation on a graph.
#[derive(Debug, Clone)]
pub struct FlowProblem<'g> {
    pub graph: &'g Graph,
    pub sources: Vec<Vertex>,
    pub sinks: Vec<Vertex>,
}

impl<'g> FlowProblem<'g> {
    pub fn new(
        graph: &'g Graph,
        sources: Vec<Vertex>,
        sinks: Vec<Vertex>,
    ) -> Result<Self, FlowError> {
        validate_terminals(graph.n(), &sources, &sinks)?;
        Ok(FlowProblem {
            graph,
            sources,
            sinks,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCutResult {
    pub capacity: Capacity,
    /// Value of the maximum flow; always equal to `capacity`.
    pub flow_value: Capacity,
    /// Sorted source side: contains every source and no sink.
    pub side: Vec<Vertex>,
    /// `side` is the inclusion-minimal minimum-cut source side.
    pub minimal: bool,
}

/// Minimum cut for `p`. With `want_minimal` the source side is the set of
/// vertices reachable from the sources in the final residual network;
/// otherwise it is the complement of the vertices that reach the sinks.
pub fn min_cut(p: &FlowProblem<'_>, want_minimal: bool) -> MinCutResult {
    let mut net = FlowNetwork::from_graph(p.graph);
    net.min_cut(&p.sources, &p.sinks, want_minimal)
        .expect("FlowProblem terminals were validated")
}

fn validate_terminals(n: usize, sources: &[Vertex], sinks: &[Vertex]) -> Result<(), FlowError> {
    if sources.is_empty() || sinks.is_empty() {
        return Err(FlowError::EmptyTerminals);
    }
    let mut seen = vec![0u8; n];
    for &s in sources {
        if s >= n {
            return Err(FlowError::OutOfRange { vertex: s, n });
        }
        seen[s] = 1;
    }
    for &t in sinks {
        if t >= n {
            return Err(FlowError::OutOfRange { vertex: t, n });
        }
        if seen[t] == 1 {
            return Err(FlowError::Overlap { vertex: t });
        }
    }
    Ok(())
}

/// Reusable residual network over an undirected capacitated graph.
///
/// Each undirected edge becomes a pair of mutually reverse arcs, both with
/// the edge capacity. Two extra nodes serve as super-source and super-sink.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    n: usize,
    head: Vec<usize>,
    base_cap: Vec<Capacity>,
    cap: Vec<Capacity>,
    adj: Vec<Vec<usize>>,
    base_arcs: usize,
    infinite: Capacity,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn from_graph(g: &Graph) -> Self {
        Self::from_edges(g.n(), g.edges().iter().map(|e| (e.u, e.v, e.w)))
    }

    /// Network on nodes `0..n` from undirected weighted edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex, Capacity)>) -> Self {
        let mut net = FlowNetwork {
            n,
            head: Vec::new(),
            base_cap: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n + 2],
            base_arcs: 0,
            infinite: 1,
            level: vec![0; n + 2],
            iter: vec![0; n + 2],
        };
        let mut total: Capacity = 0;
        for (u, v, w) in edges {
            if w == 0 {
                continue;
            }
            total += w;
            net.push_pair(u, v, w, w);
        }
        net.base_arcs = net.head.len();
        net.base_cap = net.cap.clone();
        net.infinite = total + 1;
        net
    }

    fn push_pair(&mut self, u: usize, v: usize, cuv: Capacity, cvu: Capacity) {
        let a = self.head.len();
        self.head.push(v);
        self.cap.push(cuv);
        self.adj[u].push(a);
        self.head.push(u);
        self.cap.push(cvu);
        self.adj[v].push(a + 1);
    }

    fn reset(&mut self) {
        let super_source = self.n;
        let super_sink = self.n + 1;
        while self.head.len() > self.base_arcs {
            let a = self.head.len() - 2;
            let (u, v) = (self.head[a + 1], self.head[a]);
            if u < self.n {
                self.adj[u].pop();
            }
            if v < self.n {
                self.adj[v].pop();
            }
            self.head.truncate(a);
            self.cap.truncate(a);
        }
        self.adj[super_source].clear();
        self.adj[super_sink].clear();
        self.cap.copy_from_slice(&self.base_cap);
    }

    /// Minimum cut separating `sources` from `sinks`. The network is reset
    /// before every call, so one instance can serve many queries.
    pub fn min_cut(
        &mut self,
        sources: &[Vertex],
        sinks: &[Vertex],
        want_minimal: bool,
    ) -> Result<MinCutResult, FlowError> {
        validate_terminals(self.n, sources, sinks)?;
        self.reset();
        let s = self.n;
        let t = self.n + 1;
        for &x in sources {
            self.push_pair(s, x, self.infinite, 0);
        }
        for &y in sinks {
            self.push_pair(y, t, self.infinite, 0);
        }
        let flow = self.dinic(s, t);

        let reach_source = self.residual_reach_from(s);
        let minimal_side: Vec<Vertex> = (0..self.n).filter(|&x| reach_source[x]).collect();
        let side = if want_minimal {
            minimal_side.clone()
        } else {
            let reach_sink = self.residual_reach_to(t);
            (0..self.n).filter(|&x| !reach_sink[x]).collect()
        };
        let minimal = side == minimal_side;
        Ok(MinCutResult {
            capacity: flow,
            flow_value: flow,
            side,
            minimal,
        })
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut q = VecDeque::new();
        self.level[s] = 0;
        q.push_back(s);
        while let Some(x) = q.pop_front() {
            for &a in &self.adj[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && self.level[y] < 0 {
                    self.level[y] = self.level[x] + 1;
                    q.push_back(y);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, x: usize, t: usize, limit: Capacity) -> Capacity {
        if x == t {
            return limit;
        }
        while self.iter[x] < self.adj[x].len() {
            let a = self.adj[x][self.iter[x]];
            let y = self.head[a];
            if self.cap[a] > 0 && self.level[y] == self.level[x] + 1 {
                let pushed = self.dfs(y, t, limit.min(self.cap[a]));
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[x] += 1;
        }
        0
    }

    fn dinic(&mut self, s: usize, t: usize) -> Capacity {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, Capacity::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    fn residual_reach_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n + 2];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &a in &self.adj[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Nodes that can still reach `t` through residual arcs.
    fn residual_reach_to(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n + 2];
        let mut stack = vec![t];
        seen[t] = true;
        while let Some(x) = stack.pop() {
            // arc a^1 goes y -> x when a goes x -> y
            for &a in &self.adj[x] {
                let y = self.head[a];
                if self.cap[a ^ 1] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> Graph {
        Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, [(0, 1, 5)], [0, 1]).unwrap();
        let r = min_cut(&FlowProblem::new(&g, vec![0], vec![1]).unwrap(), true);
        assert_eq!((r.capacity, r.side), (5, vec![0]));
    }

    #[test]
    fn path_minimal_side() {
        let g = path_abc();
        let r = min_cut(&FlowProblem::new(&g, vec![0], vec![2]).unwrap(), true);
        assert_eq!(r.capacity, 1);
        assert_eq!(r.side, vec![0, 1]);
        assert!(r.minimal);
    }

    #[test]
    fn triangle_multi_sink() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [0, 1, 2]).unwrap();
        let r = min_cut(&FlowProblem::new(&g, vec![0], vec![1, 2]).unwrap(), true);
        assert_eq!((r.capacity, r.side), (2, vec![0]));
    }

    #[test]
    fn maximal_side_differs_on_ties() {
        // 0 -1- 1 -1- 2 : both {0} and {0,1} are minimum cuts.
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1)], [0, 2]).unwrap();
        let mut net = FlowNetwork::from_graph(&g);
        let min = net.min_cut(&[0], &[2], true).unwrap();
        let max = net.min_cut(&[0], &[2], false).unwrap();
        assert_eq!(min.side, vec![0]);
        assert_eq!(max.side, vec![0, 1]);
        assert!(!max.minimal);
        assert_eq!(min.capacity, max.capacity);
    }

    #[test]
    fn rejects_bad_terminals() {
        let g = path_abc();
        assert_eq!(
            FlowProblem::new(&g, vec![], vec![1]).unwrap_err(),
            FlowError::EmptyTerminals
        );
        assert_eq!(
            FlowProblem::new(&g, vec![0, 1], vec![1]).unwrap_err(),
            FlowError::Overlap { vertex: 1 }
        );
    }

    #[test]
    fn network_reuse_is_stateless() {
        let g = Graph::new(
            4,
            [(0, 1, 2), (1, 2, 2), (2, 3, 2), (3, 0, 2), (0, 2, 1)],
            [0, 2],
        )
        .unwrap();
        let mut net = FlowNetwork::from_graph(&g);
        let a = net.min_cut(&[0], &[2], true).unwrap();
        let _ = net.min_cut(&[1, 3], &[0], true).unwrap();
        let b = net.min_cut(&[0], &[2], true).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.capacity, 5);
    }
}
