//! Undirected capacitated graphs with a distinguished Steiner set.
//!
//! Parallel edges are merged when a graph is built, so an edge is identified
//! by its unordered endpoint pair. Vertex ids are `0..n`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, ParseError};

pub type Vertex = usize;
pub type Capacity = u64;
pub type EdgeId = usize;

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub w: Capacity,
}

impl Edge {
    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn has_endpoint(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }
}

/// Classification of an edge by how many of its endpoints are Steiner vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeType {
    /// Both endpoints are nonSteiner.
    Type1,
    /// Both endpoints are Steiner.
    Type2,
    /// Exactly one endpoint is Steiner.
    Type3 {
        steiner_end: Vertex,
        non_steiner_end: Vertex,
    },
}

impl EdgeType {
    pub fn index(&self) -> u8 {
        match self {
            EdgeType::Type1 => 1,
            EdgeType::Type2 => 2,
            EdgeType::Type3 { .. } => 3,
        }
    }
}

/// One side of a vertex bipartition together with a capacity.
///
/// `side` is kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub side: Vec<Vertex>,
    pub capacity: Capacity,
}

impl Cut {
    pub fn new(mut side: Vec<Vertex>, capacity: Capacity) -> Self {
        side.sort_unstable();
        side.dedup();
        Cut { side, capacity }
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.side.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.side {
            m[x] = true;
        }
        m
    }

    pub fn complement(&self, n: usize) -> Cut {
        let mask = self.mask(n);
        Cut {
            side: (0..n).filter(|&x| !mask[x]).collect(),
            capacity: self.capacity,
        }
    }

    /// Orients the cut so that it does not contain `anchor`.
    pub fn excluding(self, anchor: Vertex, n: usize) -> Cut {
        if self.contains(anchor) {
            self.complement(n)
        } else {
            self
        }
    }

    pub fn is_subset_of(&self, other: &Cut) -> bool {
        self.side.iter().all(|&x| other.contains(x))
    }
}

impl fmt::Display for Cut {
    /// Sorted vertex ids followed by `cap=<value>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.side {
            write!(f, "{x} ")?;
        }
        write!(f, "cap={}", self.capacity)
    }
}

/// Undirected weighted graph with a Steiner set. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphRecord", try_from = "GraphRecord")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
    index: HashMap<(Vertex, Vertex), EdgeId>,
    steiner: Vec<bool>,
    terminals: Vec<Vertex>,
    total_capacity: Capacity,
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    n: usize,
    steiner: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex, Capacity)>,
}

impl From<Graph> for GraphRecord {
    fn from(g: Graph) -> Self {
        GraphRecord {
            n: g.n,
            edges: g.edges.iter().map(|e| (e.u, e.v, e.w)).collect(),
            steiner: g.terminals,
        }
    }
}

impl TryFrom<GraphRecord> for Graph {
    type Error = GraphError;
    fn try_from(r: GraphRecord) -> Result<Self, Self::Error> {
        Graph::new(r.n, r.edges, r.steiner)
    }
}

impl Graph {
    /// Builds a graph from raw edges and a Steiner list.
    ///
    /// Parallel edges are merged by summing capacities and the edge list is
    /// sorted by `(u, v)`, so edge ids are canonical.
    pub fn new(
        n: usize,
        raw_edges: impl IntoIterator<Item = (Vertex, Vertex, Capacity)>,
        steiner_vertices: impl IntoIterator<Item = Vertex>,
    ) -> Result<Graph, GraphError> {
        let mut steiner = vec![false; n];
        for s in steiner_vertices {
            if s >= n {
                return Err(GraphError::VertexOutOfRange { vertex: s, n });
            }
            if steiner[s] {
                return Err(GraphError::DuplicateSteiner { vertex: s });
            }
            steiner[s] = true;
        }
        let terminals: Vec<Vertex> = (0..n).filter(|&x| steiner[x]).collect();
        if terminals.len() < 2 {
            return Err(GraphError::TooFewSteiner {
                count: terminals.len(),
            });
        }

        let mut merged: HashMap<(Vertex, Vertex), Capacity> = HashMap::new();
        for (a, b, w) in raw_edges {
            if a >= n {
                return Err(GraphError::VertexOutOfRange { vertex: a, n });
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            let key = (a.min(b), a.max(b));
            let slot = merged.entry(key).or_insert(0);
            *slot = slot.checked_add(w).ok_or(GraphError::CapacityOverflow)?;
        }
        let mut edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        edges.sort_unstable();

        let mut total: Capacity = 0;
        for e in &edges {
            total = total.checked_add(e.w).ok_or(GraphError::CapacityOverflow)?;
        }
        // The flow engine uses 1 + total as an unsaturable arc capacity and
        // pushes up to that much through a single vertex.
        if total > Capacity::MAX / 4 {
            return Err(GraphError::CapacityOverflow);
        }

        let mut adj = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
            index.insert((e.u, e.v), id);
        }
        Ok(Graph {
            n,
            edges,
            adj,
            index,
            steiner,
            terminals,
            total_capacity: total,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn neighbors(&self, x: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[x]
    }

    pub fn is_steiner(&self, x: Vertex) -> bool {
        self.steiner[x]
    }

    pub fn steiner_mask(&self) -> &[bool] {
        &self.steiner
    }

    /// Steiner vertices in increasing order.
    pub fn terminals(&self) -> &[Vertex] {
        &self.terminals
    }

    pub fn is_global(&self) -> bool {
        self.terminals.len() == self.n
    }

    pub fn total_capacity(&self) -> Capacity {
        self.total_capacity
    }

    pub fn edge_id(&self, a: Vertex, b: Vertex) -> Option<EdgeId> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn find_edge(&self, a: Vertex, b: Vertex) -> Result<EdgeId, GraphError> {
        self.edge_id(a, b)
            .ok_or(GraphError::UnknownEdge { u: a, v: b })
    }

    /// Type of edge `(a, b)` in constant time.
    pub fn classify_edge(&self, a: Vertex, b: Vertex) -> Result<EdgeType, GraphError> {
        let id = self.find_edge(a, b)?;
        Ok(self.classify_id(id))
    }

    pub fn classify_id(&self, id: EdgeId) -> EdgeType {
        let e = self.edges[id];
        match (self.steiner[e.u], self.steiner[e.v]) {
            (false, false) => EdgeType::Type1,
            (true, true) => EdgeType::Type2,
            (true, false) => EdgeType::Type3 {
                steiner_end: e.u,
                non_steiner_end: e.v,
            },
            (false, true) => EdgeType::Type3 {
                steiner_end: e.v,
                non_steiner_end: e.u,
            },
        }
    }

    fn side_mask(&self, side: &[Vertex]) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.n];
        let mut count = 0;
        for &x in side {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
            if !mask[x] {
                mask[x] = true;
                count += 1;
            }
        }
        if count == 0 || count == self.n {
            return Err(GraphError::ImproperSide);
        }
        Ok(mask)
    }

    /// Sum of capacities of edges with exactly one endpoint in `side`.
    pub fn cut_capacity(&self, side: &[Vertex]) -> Result<Capacity, GraphError> {
        let mask = self.side_mask(side)?;
        Ok(self.mask_capacity(&mask))
    }

    /// `cut_capacity` over a membership mask; no properness check.
    pub fn mask_capacity(&self, mask: &[bool]) -> Capacity {
        self.edges
            .iter()
            .filter(|e| mask[e.u] != mask[e.v])
            .map(|e| e.w)
            .sum()
    }

    /// True iff both `side` and its complement hold a Steiner vertex.
    pub fn is_steiner_cut(&self, side: &[Vertex]) -> Result<bool, GraphError> {
        let mask = self.side_mask(side)?;
        Ok(self.mask_is_steiner(&mask))
    }

    pub fn mask_is_steiner(&self, mask: &[bool]) -> bool {
        let inside = self.terminals.iter().any(|&s| mask[s]);
        let outside = self.terminals.iter().any(|&s| !mask[s]);
        inside && outside
    }

    /// Builds a `Cut` for `side`, computing its capacity.
    pub fn cut(&self, side: Vec<Vertex>) -> Result<Cut, GraphError> {
        let cap = self.cut_capacity(&side)?;
        Ok(Cut::new(side, cap))
    }

    /// Serializes to the line-oriented graph format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p {} {}", self.n, self.edges.len());
        for &s in &self.terminals {
            let _ = writeln!(out, "s {s}");
        }
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.w);
        }
        out
    }

    /// Copy of the graph with `w(a,b)` reduced by `delta`.
    pub fn with_reduced_edge(
        &self,
        a: Vertex,
        b: Vertex,
        delta: Capacity,
    ) -> Result<Graph, GraphError> {
        let id = self.find_edge(a, b)?;
        let w = self.edges[id].w;
        if delta > w {
            return Err(GraphError::DeltaOutOfRange { delta, w });
        }
        let mut g = self.clone();
        g.edges[id].w = w - delta;
        g.total_capacity -= delta;
        Ok(g)
    }
}

/// Parses the line-oriented graph format.
///
/// ```text
/// # comment
/// p <n> <m>
/// s <vertex>
/// e <u> <v> <w>
/// ```
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut steiner: Vec<Vertex> = Vec::new();
    let mut seen_steiner: HashMap<Vertex, usize> = HashMap::new();
    let mut edges: Vec<(Vertex, Vertex, Capacity)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let malformed = |reason: &str| ParseError::Malformed {
            line,
            reason: reason.to_string(),
        };
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(malformed("duplicate header"));
                }
                if fields.len() != 3 {
                    return Err(malformed("header must be `p <n> <m>`"));
                }
                let n = parse_count(fields[1], line)?;
                let m = parse_count(fields[2], line)?;
                header = Some((n, m, line));
            }
            "s" => {
                let (n, _, _) = header.ok_or(ParseError::MissingHeader { line })?;
                if fields.len() != 2 {
                    return Err(malformed("steiner line must be `s <vertex>`"));
                }
                let x = parse_vertex(fields[1], n, line)?;
                if let Some(&first) = seen_steiner.get(&x) {
                    return Err(ParseError::DuplicateSteiner {
                        line,
                        vertex: x,
                        first_line: first,
                    });
                }
                seen_steiner.insert(x, line);
                steiner.push(x);
            }
            "e" => {
                let (n, _, _) = header.ok_or(ParseError::MissingHeader { line })?;
                if fields.len() != 4 {
                    return Err(malformed("edge line must be `e <u> <v> <w>`"));
                }
                let u = parse_vertex(fields[1], n, line)?;
                let v = parse_vertex(fields[2], n, line)?;
                if u == v {
                    return Err(ParseError::SelfLoop { line, vertex: u });
                }
                let w = parse_capacity(fields[3], line)?;
                edges.push((u, v, w));
            }
            other => {
                return Err(malformed(&format!("unknown record type `{other}`")));
            }
        }
    }

    let (n, m, header_line) = header.ok_or(ParseError::MissingHeader { line: 0 })?;
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            line: header_line,
            declared: m,
            found: edges.len(),
        });
    }
    if steiner.len() < 2 {
        return Err(ParseError::TooFewSteiner {
            count: steiner.len(),
        });
    }
    Graph::new(n, edges, steiner).map_err(ParseError::Invalid)
}

fn parse_count(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| ParseError::Malformed {
        line,
        reason: format!("`{tok}` is not a non-negative integer"),
    })
}

fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<Vertex, ParseError> {
    let x = tok.parse::<i64>().map_err(|_| ParseError::Malformed {
        line,
        reason: format!("`{tok}` is not a vertex id"),
    })?;
    if x < 0 || x as u64 >= n as u64 {
        return Err(ParseError::VertexOutOfRange { line, vertex: x, n });
    }
    Ok(x as Vertex)
}

fn parse_capacity(tok: &str, line: usize) -> Result<Capacity, ParseError> {
    if let Some(rest) = tok.strip_prefix('-') {
        if rest.parse::<f64>().is_ok() {
            return Err(ParseError::NegativeCapacity {
                line,
                value: tok.to_string(),
            });
        }
    }
    tok.parse::<Capacity>().map_err(|_| ParseError::Malformed {
        line,
        reason: format!("capacity `{tok}` is not a non-negative integer"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> Graph {
        Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap()
    }

    #[test]
    fn parses_triangle_with_full_steiner_set() {
        let g = parse_graph("p 3 3\ns 0\ns 1\ns 2\ne 0 1 1\ne 1 2 1\ne 0 2 1\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert!(g.is_global());
        assert!(g.edges().iter().all(|e| e.w == 1));
    }

    #[test]
    fn merges_parallel_edges() {
        let g = parse_graph("p 2 2\ns 0\ns 1\ne 0 1 2\ne 1 0 3\n").unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edge(0), Edge { u: 0, v: 1, w: 5 });
    }

    #[test]
    fn rejects_single_steiner_vertex() {
        let err = parse_graph("p 2 1\ns 0\ne 0 1 4\n").unwrap_err();
        assert!(matches!(err, ParseError::TooFewSteiner { count: 1 }));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph("# c\np 3 1\ns 0\ns 0\ne 0 1 1\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::DuplicateSteiner { line: 4, vertex: 0, first_line: 3 }
        ));
        let err = parse_graph("p 3 1\ns 0\ns 1\ne 0 1 -2\n").unwrap_err();
        assert!(matches!(err, ParseError::NegativeCapacity { line: 4, .. }));
        let err = parse_graph("p 3 1\ns 0\ns 1\ne 0 1 2.5\n").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 4, .. }));
        let err = parse_graph("p 3 1\ns 0\ns 1\nx 0 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 4, .. }));
        let err = parse_graph("s 0\n").unwrap_err();
        assert!(matches!(err, ParseError::MissingHeader { line: 1 }));
        let err = parse_graph("p 3 1\ns 0\ns 5\n").unwrap_err();
        assert!(matches!(err, ParseError::VertexOutOfRange { line: 3, .. }));
        let err = parse_graph("p 3 2\ns 0\ns 1\ne 0 1 1\n").unwrap_err();
        assert!(matches!(err, ParseError::EdgeCount { declared: 2, found: 1, .. }));
        let err = parse_graph("p 3 1\ns 0\ns 1\ne 1 1 1\n").unwrap_err();
        assert!(matches!(err, ParseError::SelfLoop { line: 4, .. }));
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::new(5, [(0, 1, 3), (3, 1, 0), (2, 4, 9)], [1, 4, 2]).unwrap();
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn classifies_edges() {
        let g = Graph::new(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], [0, 3]).unwrap();
        assert_eq!(g.classify_edge(1, 2).unwrap(), EdgeType::Type1);
        assert_eq!(
            g.classify_edge(1, 0).unwrap(),
            EdgeType::Type3 { steiner_end: 0, non_steiner_end: 1 }
        );
        let k3 = Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [0, 1, 2]).unwrap();
        assert_eq!(k3.classify_edge(2, 0).unwrap(), EdgeType::Type2);
        let p = path_abc();
        assert_eq!(
            p.classify_edge(0, 1).unwrap(),
            EdgeType::Type3 { steiner_end: 0, non_steiner_end: 1 }
        );
        assert!(matches!(p.classify_edge(0, 2), Err(GraphError::UnknownEdge { .. })));
    }

    #[test]
    fn cut_capacity_examples() {
        let k3 = Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [0, 1, 2]).unwrap();
        assert_eq!(k3.cut_capacity(&[0]).unwrap(), 2);
        let p = path_abc();
        assert_eq!(p.cut_capacity(&[0, 1]).unwrap(), 1);
        assert_eq!(p.cut_capacity(&[0, 2]).unwrap(), 4);
        assert!(matches!(p.cut_capacity(&[]), Err(GraphError::ImproperSide)));
        assert!(matches!(p.cut_capacity(&[0, 1, 2]), Err(GraphError::ImproperSide)));
    }

    #[test]
    fn steiner_cut_examples() {
        let p = path_abc();
        assert!(p.is_steiner_cut(&[0, 1]).unwrap());
        assert!(!p.is_steiner_cut(&[1]).unwrap());
        let k3 = Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [0, 1, 2]).unwrap();
        for side in [vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]] {
            assert!(k3.is_steiner_cut(&side).unwrap());
        }
    }

    #[test]
    fn cut_display_is_sorted() {
        let c = Cut::new(vec![3, 1, 2], 7);
        assert_eq!(c.to_string(), "1 2 3 cap=7");
    }

    #[test]
    fn reduced_edge_checks_range() {
        let p = path_abc();
        let q = p.with_reduced_edge(1, 0, 3).unwrap();
        assert_eq!(q.edge(0).w, 0);
        assert!(matches!(
            p.with_reduced_edge(0, 1, 4),
            Err(GraphError::DeltaOutOfRange { delta: 4, w: 3 })
        ));
    }
}
