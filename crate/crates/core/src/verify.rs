//! Exhaustive cut enumeration and the property suite built on it.
//!
//! [`BruteForce`] lists every side that leaves out vertex `n - 1`, so it
//! needs no flow code at all. The suite compares the flow-based structures
//! against it and checks the structural properties of nearest mincuts.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, OracleError};
use crate::flow::FlowNetwork;
use crate::graph::{Capacity, EdgeId, EdgeType, Graph, Vertex};
use crate::oracle::{BaselineQuadraticOracle, FullOracle};
use crate::steiner::SteinerBase;

/// Largest graph the enumerator accepts.
pub const BRUTE_LIMIT: usize = 20;
/// Largest graph the property suite accepts.
pub const SUITE_LIMIT: usize = 14;

type Mask = u32;

fn to_vec(mask: Mask) -> Vec<Vertex> {
    (0..Mask::BITS as usize).filter(|&v| mask >> v & 1 == 1).collect()
}

fn has(mask: Mask, v: Vertex) -> bool {
    mask >> v & 1 == 1
}

/// Ground truth from enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceAnswer {
    pub lambda: Capacity,
    /// Every Steiner mincut, as the side without `n - 1`.
    pub mincuts: Vec<Vec<Vertex>>,
    /// Mincut capacity per edge id.
    pub edge_mincut: Vec<Capacity>,
    pub vital: Vec<bool>,
}

/// All anchor-free sides of a graph with their capacities.
#[derive(Debug, Clone)]
pub struct BruteForce {
    n: usize,
    edges: Vec<(Vertex, Vertex, Capacity)>,
    steiner: Mask,
    /// Capacity of every anchor-free side, indexed by its mask.
    cap: Vec<Capacity>,
    lambda: Capacity,
    edge_cap: Vec<Capacity>,
}

impl BruteForce {
    pub fn new(g: &Graph) -> Result<BruteForce, OracleError> {
        let n = g.n();
        if n > BRUTE_LIMIT {
            return Err(OracleError::TooLarge {
                n,
                limit: BRUTE_LIMIT,
            });
        }
        let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        let steiner = g.terminals().iter().fold(0, |m, &s| m | 1 << s);
        let sides = 1usize << (n - 1);
        let mut cap = vec![0; sides];
        for (mask, c) in cap.iter_mut().enumerate() {
            let mask = mask as Mask;
            *c = edges
                .iter()
                .filter(|&&(u, v, _)| has(mask, u) != has(mask, v))
                .map(|&(_, _, w)| w)
                .sum();
        }
        let mut bf = BruteForce {
            n,
            edges,
            steiner,
            cap,
            lambda: Capacity::MAX,
            edge_cap: Vec::new(),
        };
        let mut edge_cap = vec![Capacity::MAX; bf.edges.len()];
        let mut lambda = Capacity::MAX;
        for mask in bf.steiner_sides() {
            let c = bf.cap[mask as usize];
            lambda = lambda.min(c);
            for (id, &(u, v, _)) in bf.edges.iter().enumerate() {
                if has(mask, u) != has(mask, v) {
                    edge_cap[id] = edge_cap[id].min(c);
                }
            }
        }
        bf.lambda = lambda;
        bf.edge_cap = edge_cap;
        Ok(bf)
    }

    fn full(&self) -> Mask {
        ((1u64 << self.n) - 1) as Mask
    }

    fn is_steiner(&self, mask: Mask) -> bool {
        let inside = mask & self.steiner;
        inside != 0 && inside != self.steiner
    }

    /// Anchor-free Steiner sides.
    fn steiner_sides(&self) -> impl Iterator<Item = Mask> + '_ {
        (1..self.cap.len() as Mask).filter(|&m| self.is_steiner(m))
    }

    /// Capacity of any side, anchored or not.
    pub fn capacity(&self, mask: Mask) -> Capacity {
        let m = if has(mask, self.n - 1) {
            self.full() & !mask
        } else {
            mask
        };
        self.cap[m as usize]
    }

    pub fn lambda(&self) -> Capacity {
        self.lambda
    }

    pub fn edge_mincut_cap(&self, id: EdgeId) -> Capacity {
        self.edge_cap[id]
    }

    pub fn vital(&self, id: EdgeId) -> bool {
        self.edge_cap[id] - self.edges[id].2 < self.lambda
    }

    fn contributes(&self, id: EdgeId, mask: Mask) -> bool {
        let (u, v, _) = self.edges[id];
        has(mask, u) != has(mask, v)
    }

    /// Every mincut for edge `id`, as the side containing `x`.
    pub fn edge_mincuts_containing(&self, id: EdgeId, x: Vertex) -> Vec<Mask> {
        let target = self.edge_cap[id];
        self.steiner_sides()
            .filter(|&m| self.contributes(id, m) && self.cap[m as usize] == target)
            .map(|m| if has(m, x) { m } else { self.full() & !m })
            .collect()
    }

    /// Inclusion-minimal mincuts for edge `id` containing `x`.
    pub fn nearest_mincuts(&self, id: EdgeId, x: Vertex) -> Vec<Mask> {
        let all = self.edge_mincuts_containing(id, x);
        all.iter()
            .copied()
            .filter(|&c| !all.iter().any(|&d| d != c && d & c == d))
            .collect()
    }

    /// Whether `mask` is a Steiner cut that edge `id` crosses with the
    /// cheapest possible capacity.
    pub fn is_mincut_for(&self, id: EdgeId, mask: Mask) -> bool {
        self.is_steiner(mask)
            && self.contributes(id, mask)
            && self.capacity(mask) == self.edge_cap[id]
    }

    /// Steiner mincut capacity after reducing edge `id` by `delta`.
    pub fn cap_after(&self, id: EdgeId, delta: Capacity) -> Capacity {
        self.steiner_sides()
            .map(|m| {
                let c = self.cap[m as usize];
                if self.contributes(id, m) {
                    c - delta
                } else {
                    c
                }
            })
            .min()
            .unwrap_or(Capacity::MAX)
    }

    /// Cheapest side separating `u` from `v`, Steiner or not.
    pub fn pair_mincut(&self, u: Vertex, v: Vertex) -> Capacity {
        (1..self.cap.len() as Mask)
            .filter(|&m| has(m, u) != has(m, v))
            .map(|m| self.cap[m as usize])
            .min()
            .unwrap_or(Capacity::MAX)
    }

    pub fn answer(&self) -> BruteForceAnswer {
        BruteForceAnswer {
            lambda: self.lambda,
            mincuts: self
                .steiner_sides()
                .filter(|&m| self.cap[m as usize] == self.lambda)
                .map(to_vec)
                .collect(),
            edge_mincut: self.edge_cap.clone(),
            vital: (0..self.edges.len()).map(|id| self.vital(id)).collect(),
        }
    }
}

pub fn brute_steiner_mincut(g: &Graph) -> Result<BruteForceAnswer, OracleError> {
    Ok(BruteForce::new(g)?.answer())
}

/// Steiner mincut capacity of `g` with `w(x, y)` reduced by `delta`.
pub fn brute_cap_after(
    g: &Graph,
    x: Vertex,
    y: Vertex,
    delta: Capacity,
) -> Result<Capacity, OracleError> {
    let id = g.find_edge(x, y)?;
    let w = g.edge(id).w;
    if delta > w {
        return Err(GraphError::DeltaOutOfRange { delta, w }.into());
    }
    Ok(BruteForce::new(g)?.cap_after(id, delta))
}

/// First failure of a property, replayable from `graph`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub detail: String,
    pub graph: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub instances: usize,
    pub records: Vec<LemmaRecord>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.failures == 0)
    }

    pub fn record(&self, name: &str) -> Option<&LemmaRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Adds another report, keeping the first counterexample per property.
    pub fn merge(&mut self, other: SuiteReport) {
        self.instances += other.instances;
        for rec in other.records {
            match self.records.iter_mut().find(|r| r.name == rec.name) {
                Some(r) => {
                    r.checked += rec.checked;
                    r.failures += rec.failures;
                    if r.counterexample.is_none() {
                        r.counterexample = rec.counterexample;
                    }
                }
                None => self.records.push(rec),
            }
        }
    }

    /// One line per property: `<name> PASS|FAIL checked=<k> failures=<f>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let status = if r.failures == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{} {status} checked={} failures={}",
                r.name, r.checked, r.failures
            );
            if let Some(c) = &r.counterexample {
                let _ = writeln!(out, "  counterexample: {}", c.detail);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Property names, in report order.
pub const PROPERTIES: &[&str] = &[
    "steiner-mincut",
    "edge-mincut",
    "vitality",
    "gomory-hu",
    "gomory-hu-type2",
    "submodularity",
    "disjoint",
    "intersection",
    "uniqueness",
    "subset",
    "type3-forest",
    "cap-tree-lca",
    "cap-monotone",
    "cap-oracle",
    "cut-oracle",
    "baseline-parity",
];

struct Suite<'a> {
    g: &'a Graph,
    records: Vec<LemmaRecord>,
}

impl Suite<'_> {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let graph = self.g.to_text();
        let r = self
            .records
            .iter_mut()
            .find(|r| r.name == name)
            .expect("known property");
        r.checked += 1;
        if !ok {
            r.failures += 1;
            if r.counterexample.is_none() {
                r.counterexample = Some(Counterexample {
                    detail: detail(),
                    graph,
                });
            }
        }
    }
}

/// Δ values sampled per edge: 0, 1, ⌈w/2⌉, w and one seeded value.
pub fn delta_samples(w: Capacity, rng: &mut impl Rng) -> Vec<Capacity> {
    let mut ds = vec![0, 1.min(w), w.div_ceil(2), w, rng.gen_range(0..=w)];
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// Builds both oracles and runs every property on `g`.
pub fn run_property_suite(g: &Graph) -> Result<SuiteReport, OracleError> {
    let (oracle, baseline) = FullOracle::build_with_baseline(g)?;
    run_property_suite_on(g, &oracle, &baseline, 0)
}

/// Runs every property against prebuilt oracles; `seed` drives the sampled
/// Δ values and set pairs.
pub fn run_property_suite_on(
    g: &Graph,
    oracle: &FullOracle,
    baseline: &BaselineQuadraticOracle,
    seed: u64,
) -> Result<SuiteReport, OracleError> {
    let n = g.n();
    if n > SUITE_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: SUITE_LIMIT,
        });
    }
    let bf = BruteForce::new(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Suite {
        g,
        records: PROPERTIES
            .iter()
            .map(|&name| LemmaRecord {
                name: name.into(),
                checked: 0,
                failures: 0,
                counterexample: None,
            })
            .collect(),
    };
    let mask_of = |side: &[Vertex]| side.iter().fold(0 as Mask, |m, &v| m | 1 << v);
    let base = SteinerBase::new(g);

    s.check("steiner-mincut", base.lambda() == bf.lambda(), || {
        format!("flows give {}, enumeration {}", base.lambda(), bf.lambda())
    });
    s.check("steiner-mincut", oracle.lambda() == bf.lambda(), || {
        format!("oracle stores {}, enumeration {}", oracle.lambda(), bf.lambda())
    });
    let stored = mask_of(&oracle.mincut().side);
    s.check(
        "steiner-mincut",
        bf.is_steiner(stored) && bf.capacity(stored) == bf.lambda(),
        || format!("stored mincut {:?} is not a Steiner mincut", oracle.mincut().side),
    );

    for (id, e) in g.edges().iter().enumerate() {
        let mc = base.mincut_for_edge(e.u, e.v)?;
        let m = mask_of(&mc.cut.side);
        s.check(
            "edge-mincut",
            mc.capacity == bf.edge_mincut_cap(id) && bf.is_mincut_for(id, m) && has(m, e.u),
            || {
                format!(
                    "edge ({},{}): flows give {} with side {:?}, enumeration {}",
                    e.u,
                    e.v,
                    mc.capacity,
                    mc.cut.side,
                    bf.edge_mincut_cap(id)
                )
            },
        );
        s.check("vitality", mc.vital == bf.vital(id), || {
            format!("edge ({},{}): vital={} expected {}", e.u, e.v, mc.vital, bf.vital(id))
        });
    }

    // Gomory–Hu: path minima against flows and enumeration, and every
    // subtree recomputes to its edge capacity.
    let gh = oracle.gomory_hu();
    let mut net = FlowNetwork::from_graph(g);
    for u in 0..n {
        for v in u + 1..n {
            let (c, _) = gh.path_min(u, v)?;
            let flow = net.min_cut(&[u], &[v], true)?.capacity;
            let brute = bf.pair_mincut(u, v);
            s.check("gomory-hu", c == flow && c == brute, || {
                format!("pair ({u},{v}): tree {c}, flow {flow}, enumeration {brute}")
            });
        }
    }
    for (child, _, c) in gh.tree_edges() {
        let side = gh.subtree(child);
        let got = g.cut_capacity(side)?;
        s.check("gomory-hu", got == c, || {
            format!("tree edge below {child}: stored {c}, side recomputes to {got}")
        });
    }
    for (id, e) in g.edges().iter().enumerate() {
        if g.classify_id(id) == EdgeType::Type2 {
            let cut = gh.query(e.u, e.v)?;
            s.check("gomory-hu-type2", bf.is_mincut_for(id, mask_of(&cut.side)), || {
                format!("edge ({},{}): tree cut {:?} is not a mincut for it", e.u, e.v, cut.side)
            });
        }
    }

    let full = bf.full();
    for _ in 0..64 {
        let a: Mask = rng.gen::<Mask>() & full;
        let b: Mask = rng.gen::<Mask>() & full;
        let c = |m: Mask| bf.capacity(m);
        s.check(
            "submodularity",
            c(a) + c(b) >= c(a & b) + c(a | b) && c(a) + c(b) >= c(a & !b) + c(b & !a),
            || format!("sets {:?} and {:?}", to_vec(a), to_vec(b)),
        );
    }

    // Nearest-mincut structure, per non-Steiner vertex.
    let mut type3: Vec<Vec<(EdgeId, Vertex)>> = vec![Vec::new(); n];
    for id in 0..g.m() {
        if let EdgeType::Type3 {
            steiner_end,
            non_steiner_end,
        } = g.classify_id(id)
        {
            type3[non_steiner_end].push((id, steiner_end));
        }
    }
    for (u, edges) in type3.iter().enumerate() {
        let nearest: Vec<Vec<Mask>> = edges
            .iter()
            .map(|&(id, x)| bf.nearest_mincuts(id, x))
            .collect();
        for (i, &(_, x)) in edges.iter().enumerate() {
            for (j, &(_, x2)) in edges.iter().enumerate() {
                if i == j {
                    continue;
                }
                for &c1 in &nearest[i] {
                    for &c2 in &nearest[j] {
                        let lhs = !has(c1, x2) && !has(c2, x);
                        s.check("disjoint", lhs == (c1 & c2 == 0), || {
                            format!(
                                "u={u}: nearest {:?} of ({x},{u}) and {:?} of ({x2},{u})",
                                to_vec(c1),
                                to_vec(c2)
                            )
                        });
                    }
                }
            }
        }

        let vital: Vec<usize> = (0..edges.len()).filter(|&i| bf.vital(edges[i].0)).collect();
        for &i in &vital {
            let (id1, _) = edges[i];
            let all1 = bf.edge_mincuts_containing(id1, edges[i].1);
            for &j in &vital {
                let (id2, x2) = edges[j];
                for &c1 in &all1 {
                    for &c2 in &bf.edge_mincuts_containing(id2, x2) {
                        let lhs = has(c1, x2);
                        s.check("intersection", lhs == bf.is_mincut_for(id2, c1 & c2), || {
                            format!(
                                "u={u}: C1={:?} for ({},{u}), C2={:?} for ({x2},{u})",
                                to_vec(c1),
                                edges[i].1,
                                to_vec(c2)
                            )
                        });
                    }
                }
            }
        }

        for &i in &vital {
            let x = edges[i].1;
            let unique = nearest[i].len() == 1;
            s.check("uniqueness", unique, || {
                format!("edge ({x},{u}) has {} nearest mincuts", nearest[i].len())
            });
            if !unique {
                continue;
            }
            let want = nearest[i][0];
            let flows = base.nearest_mincut_exhaustive(x, u);
            s.check(
                "uniqueness",
                matches!(&flows, Ok(nm) if mask_of(&nm.cut.side) == want),
                || format!("edge ({x},{u}): flows give {flows:?}, expected {:?}", to_vec(want)),
            );
            let stored = oracle
                .type3()
                .tree(u)
                .and_then(|t| t.subtree_set(x).ok().flatten())
                .map(mask_of);
            s.check("type3-forest", stored == Some(want), || {
                format!(
                    "edge ({x},{u}): forest holds {:?}, expected {:?}",
                    stored.map(to_vec),
                    to_vec(want)
                )
            });
        }
        for &i in &vital {
            for &j in &vital {
                if i == j || nearest[i].len() != 1 || nearest[j].len() != 1 {
                    continue;
                }
                let (ni, nj) = (nearest[i][0], nearest[j][0]);
                let x2 = edges[j].1;
                s.check("subset", has(ni, x2) == (nj & ni == nj), || {
                    format!(
                        "u={u}: N({},{u})={:?}, N({x2},{u})={:?}",
                        edges[i].1,
                        to_vec(ni),
                        to_vec(nj)
                    )
                });
            }
        }
    }

    // Oracles.
    let tree = oracle.cap_tree();
    for (id, e) in g.edges().iter().enumerate() {
        let c = tree.edge_cap(g, e.u, e.v)?;
        s.check("cap-tree-lca", c == bf.edge_mincut_cap(id), || {
            format!("edge ({},{}): LCA holds {c}, expected {}", e.u, e.v, bf.edge_mincut_cap(id))
        });

        let ds = delta_samples(e.w, &mut rng);
        let mut prev = Capacity::MAX;
        for &d in &ds {
            let cap = oracle.cap_query(e.u, e.v, d)?;
            let ok = cap.capacity <= prev && (d != 0 || cap.capacity == bf.lambda());
            s.check("cap-monotone", ok, || {
                format!("edge ({},{}): Δ={d} gives {}", e.u, e.v, cap.capacity)
            });
            prev = cap.capacity;

            let truth = bf.cap_after(id, d);
            s.check(
                "cap-oracle",
                cap.capacity == truth && cap.changed == (truth < bf.lambda()),
                || format!("edge ({},{}), Δ={d}: {cap:?}, expected {truth}", e.u, e.v),
            );

            let reduced = g.with_reduced_edge(e.u, e.v, d)?;
            let ans = oracle.cut_query(e.u, e.v, d)?;
            let valid = |side: &[Vertex], claimed: Capacity| -> bool {
                reduced.is_steiner_cut(side).unwrap_or(false)
                    && reduced.cut_capacity(side).ok() == Some(claimed)
            };
            s.check(
                "cut-oracle",
                ans.capacity == truth
                    && ans.cut.capacity == truth
                    && ans.changed == cap.changed
                    && valid(&ans.cut.side, truth),
                || {
                    format!(
                        "edge ({},{}), Δ={d}: cut {} expected capacity {truth}",
                        e.u, e.v, ans.cut
                    )
                },
            );
            let b = baseline.cut_query(g, e.u, e.v, d)?;
            s.check(
                "baseline-parity",
                b.capacity == ans.capacity && valid(&b.cut.side, b.capacity),
                || {
                    format!(
                        "edge ({},{}), Δ={d}: baseline {} vs oracle {}",
                        e.u, e.v, b.cut, ans.cut
                    )
                },
            );
        }
    }

    Ok(SuiteReport {
        instances: 1,
        records: s.records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3(steiner: &[Vertex]) -> Graph {
        Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], steiner.to_vec()).unwrap()
    }

    #[test]
    fn triangle_enumeration() {
        let a = brute_steiner_mincut(&k3(&[0, 1, 2])).unwrap();
        assert_eq!(a.lambda, 2);
        assert_eq!(a.mincuts, vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(a.edge_mincut, vec![2, 2, 2]);
    }

    #[test]
    fn path_enumeration() {
        let g = Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap();
        let a = brute_steiner_mincut(&g).unwrap();
        assert_eq!(a.lambda, 1);
        assert_eq!(a.mincuts, vec![vec![0, 1]]);
        assert_eq!(brute_cap_after(&g, 0, 1, 3).unwrap(), 0);
        assert_eq!(brute_cap_after(&g, 1, 2, 0).unwrap(), 1);
        assert!(brute_cap_after(&g, 1, 2, 2).is_err());
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, [(0, 1, 9)], [0, 1]).unwrap();
        assert_eq!(brute_steiner_mincut(&g).unwrap().lambda, 9);
    }

    #[test]
    fn too_large() {
        let g = Graph::new(21, [(0, 1, 1)], [0, 1]).unwrap();
        assert!(matches!(
            BruteForce::new(&g),
            Err(OracleError::TooLarge { n: 21, .. })
        ));
    }

    #[test]
    fn suite_passes_on_triangle() {
        let r = run_property_suite(&k3(&[0, 1])).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.record("disjoint").unwrap().checked > 0);
        assert!(r.record("type3-forest").unwrap().checked > 0);
    }

    #[test]
    fn suite_flags_tampered_cap_tree() {
        let g = Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap();
        let (mut o, b) = FullOracle::build_with_baseline(&g).unwrap();
        o.tamper_cap_tree(0, 7);
        let r = run_property_suite_on(&g, &o, &b, 0).unwrap();
        assert!(!r.passed());
        assert!(r.record("cap-tree-lca").unwrap().failures > 0);
        assert!(r.record("disjoint").unwrap().failures == 0);
        assert!(r.to_text().contains("cap-tree-lca FAIL"));
    }

    #[test]
    fn delta_samples_cover_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ds = delta_samples(7, &mut rng);
        for d in [0, 1, 4, 7] {
            assert!(ds.contains(&d));
        }
        assert_eq!(delta_samples(0, &mut rng), vec![0]);
    }
}
