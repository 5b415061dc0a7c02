//! Graph families: the three lower-bound constructions and seeded random
//! graphs.
//!
//! In the lower-bound constructions, vertices `0..r` form the left part `L`
//! and `r..n` the right part `R`, with `r = n / 2`. Both parts are cliques of
//! "infinite" edges whose capacity is one more than the sum of all finite
//! capacities, so `L` is the only Steiner cut of finite capacity.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::gomory_hu::GomoryHuTree;
use crate::graph::{Capacity, Graph, Vertex};
use crate::steiner::{all_edge_mincuts, SteinerBase};

/// Cross-edge capacities of `G(M)`: `rows = n / 2`, `cols = (n + 1) / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixInstance {
    rows: Vec<Vec<Capacity>>,
}

impl MatrixInstance {
    pub fn new(rows: Vec<Vec<Capacity>>) -> Result<Self, OracleError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || (c != r && c != r + 1) {
            return Err(OracleError::Generator(format!(
                "matrix must be floor(n/2) x floor((n+1)/2), got {r} x {c}"
            )));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(OracleError::Generator("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|&v| v == 0) {
            return Err(OracleError::Generator("matrix entries must be positive".into()));
        }
        Ok(MatrixInstance { rows })
    }

    /// Entries uniform in `[1, max]`.
    pub fn random(n: usize, max: Capacity, rng: &mut impl Rng) -> Result<Self, OracleError> {
        if n < 2 || max == 0 {
            return Err(OracleError::Generator("need n >= 2 and max >= 1".into()));
        }
        let (r, c) = (n / 2, n.div_ceil(2));
        let rows = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(1..=max)).collect())
            .collect();
        MatrixInstance::new(rows)
    }

    /// Parses whitespace-separated rows, one per line.
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        MatrixInstance::new(parse_rows(text, |tok| tok.parse::<Capacity>().ok())?)
    }

    pub fn n(&self) -> usize {
        self.rows.len() + self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Capacity>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Capacity {
        self.rows[i][j]
    }

    pub fn sum(&self) -> Capacity {
        self.rows.iter().flatten().sum()
    }
}

fn parse_rows<T>(text: &str, cell: impl Fn(&str) -> Option<T>) -> Result<Vec<Vec<T>>, OracleError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, line)| {
            line.split_whitespace()
                .map(|tok| {
                    cell(tok).ok_or_else(|| {
                        OracleError::Generator(format!("row {}: bad entry {tok:?}", i + 1))
                    })
                })
                .collect()
        })
        .collect()
}

/// Left vertex `a_i`.
pub fn left_vertex(i: usize) -> Vertex {
    i
}

/// Right vertex `b_j` in a graph on `n` vertices.
pub fn right_vertex(n: usize, j: usize) -> Vertex {
    n / 2 + j
}

/// `floor(k/2)` Steiner vertices from the start of `L`, the rest from `R`.
fn split_steiner(r: usize, c: usize, k: usize) -> Result<Vec<Vertex>, OracleError> {
    let (kl, kr) = (k / 2, k.div_ceil(2));
    if k < 2 || kl > r || kr > c {
        return Err(OracleError::Generator(format!(
            "cannot place {k} Steiner vertices in parts of size {r} and {c}"
        )));
    }
    Ok((0..kl).chain(r..r + kr).collect())
}

fn two_cliques(
    r: usize,
    c: usize,
    cross: impl Fn(usize, usize) -> Capacity,
    steiner: usize,
) -> Result<Graph, OracleError> {
    let n = r + c;
    let mut edges = Vec::new();
    let mut finite: Capacity = 0;
    for i in 0..r {
        for j in 0..c {
            let w = cross(i, j);
            finite += w;
            edges.push((i, r + j, w));
        }
    }
    let inf = finite + 1;
    for part in [0..r, r..n] {
        for a in part.clone() {
            for b in a + 1..part.end {
                edges.push((a, b, inf));
            }
        }
    }
    let s = split_steiner(r, c, steiner)?;
    Ok(Graph::new(n, edges, s)?)
}

/// `G(M)`: failing cross edge `(a_i, b_j)` drops the Steiner mincut to
/// `λ - M[i][j]`.
pub fn gen_capacity_lb(m: &MatrixInstance, steiner: usize) -> Result<Graph, OracleError> {
    let (r, c) = (m.rows.len(), m.rows[0].len());
    two_cliques(r, c, |i, j| m.rows[i][j], steiner)
}

/// Bipartite adjacency between `L` and `R` of `G(B)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartite {
    adj: Vec<Vec<bool>>,
}

impl Bipartite {
    pub fn new(adj: Vec<Vec<bool>>) -> Result<Self, OracleError> {
        let r = adj.len();
        let c = adj.first().map_or(0, Vec::len);
        if r == 0 || (c != r && c != r + 1) || adj.iter().any(|row| row.len() != c) {
            return Err(OracleError::Generator(
                "bipartition must be floor(n/2) x floor((n+1)/2)".into(),
            ));
        }
        Ok(Bipartite { adj })
    }

    /// Each cross pair present with probability `p`.
    pub fn random(n: usize, p: f64, rng: &mut impl Rng) -> Result<Self, OracleError> {
        if n < 2 || !(0.0..=1.0).contains(&p) {
            return Err(OracleError::Generator("need n >= 2 and p in [0, 1]".into()));
        }
        let (r, c) = (n / 2, n.div_ceil(2));
        Bipartite::new(
            (0..r)
                .map(|_| (0..c).map(|_| rng.gen_bool(p)).collect())
                .collect(),
        )
    }

    /// Rows of `0`/`1` tokens.
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        Bipartite::new(parse_rows(text, |tok| match tok {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        })?)
    }

    pub fn n(&self) -> usize {
        self.adj.len() + self.adj[0].len()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.adj
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().flatten().filter(|&&b| b).count()
    }
}

/// `G(B)`: cross edges of capacity 1 for pairs in `B` and 0 otherwise.
/// Zero edges are kept so that every cross pair can be queried.
pub fn gen_bipartite_lb(b: &Bipartite, steiner: usize) -> Result<Graph, OracleError> {
    let (r, c) = (b.adj.len(), b.adj[0].len());
    two_cliques(r, c, |i, j| b.adj[i][j] as Capacity, steiner)
}

/// Parameters of a `G_s(H)` instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsParams {
    /// Steiner mincut of `H` after any scaling.
    pub lambda: Capacity,
    /// Largest `c(C(e)) - w(e)` over vital edges of `H`.
    pub alpha: Capacity,
    /// Capacity of the new edge `(s, a)`.
    pub lambda_prime: Capacity,
    pub a: Vertex,
    pub s: Vertex,
    /// Whether the capacities of `H` were doubled.
    pub scaled: bool,
}

/// `G_s(H)`: `H` plus a Steiner vertex `s = n_H` joined to the smallest
/// Steiner vertex `a` of `H` by an edge of capacity `(λ + α) / 2`. Its only
/// Steiner mincut is `V_H`.
///
/// When `λ + α` is odd, all capacities of `H` are doubled first if
/// `allow_scaling`, otherwise the instance is rejected.
pub fn gen_reporting_lb(h: &Graph, allow_scaling: bool) -> Result<(Graph, GsParams), OracleError> {
    let gh = GomoryHuTree::build(h);
    let base = SteinerBase::with_gomory_hu(h, &gh);
    let lambda = base.lambda();
    let alpha = all_edge_mincuts(&base, &gh)
        .iter()
        .filter(|mc| mc.vital)
        .map(|mc| mc.capacity - mc.w)
        .max()
        .ok_or_else(|| OracleError::Generator("H has no vital edge".into()))?;
    let scaled = (lambda + alpha) % 2 == 1;
    if scaled && !allow_scaling {
        return Err(OracleError::Generator(format!(
            "lambda + alpha = {} is odd",
            lambda + alpha
        )));
    }
    let k: Capacity = if scaled { 2 } else { 1 };
    let (lambda, alpha) = (k * lambda, k * alpha);
    let lambda_prime = (lambda + alpha) / 2;
    if alpha >= lambda || lambda_prime >= lambda {
        return Err(OracleError::Invariant(format!(
            "expected alpha < lambda' < lambda, got {alpha}, {lambda_prime}, {lambda}"
        )));
    }
    let n = h.n();
    let (a, s) = (h.terminals()[0], n);
    let edges = h
        .edges()
        .iter()
        .map(|e| (e.u, e.v, k * e.w))
        .chain([(a, s, lambda_prime)]);
    let steiner = h.terminals().iter().copied().chain([s]);
    let g = Graph::new(n + 1, edges, steiner)?;
    Ok((
        g,
        GsParams {
            lambda,
            alpha,
            lambda_prime,
            a,
            s,
            scaled,
        },
    ))
}

/// Number of Steiner vertices for a fraction `f` of `n`, at least two.
pub fn steiner_count(n: usize, f: f64) -> usize {
    ((f * n as f64).round() as usize).clamp(2, n)
}

/// Seeded connected graph: a random spanning tree plus each remaining pair
/// with probability `density`, capacities uniform in `weights`.
pub fn gen_random(
    n: usize,
    density: f64,
    weights: (Capacity, Capacity),
    steiner_fraction: f64,
    seed: u64,
) -> Result<Graph, OracleError> {
    if n < 2 {
        return Err(OracleError::Generator("need n >= 2".into()));
    }
    if !(0.0..=1.0).contains(&density) || !(0.0..=1.0).contains(&steiner_fraction) {
        return Err(OracleError::Generator(
            "density and steiner fraction must lie in [0, 1]".into(),
        ));
    }
    let (lo, hi) = weights;
    if lo > hi {
        return Err(OracleError::Generator(format!("empty weight range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for i in 1..n {
        let (a, b) = (order[i], order[rng.gen_range(0..i)]);
        present[a][b] = true;
        present[b][a] = true;
        edges.push((a, b, rng.gen_range(lo..=hi)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !present[a][b] && rng.gen_bool(density) {
                edges.push((a, b, rng.gen_range(lo..=hi)));
            }
        }
    }
    let k = steiner_count(n, steiner_fraction);
    let mut steiner: Vec<Vertex> = (0..n).collect();
    steiner.shuffle(&mut rng);
    steiner.truncate(k);
    Ok(Graph::new(n, edges, steiner)?)
}

/// Seeded mix of small random graphs: `n` cycles through `4..=12`, the
/// Steiner set through `2`, `ceil(n/2)` and `n` vertices, and every fourth
/// graph uses capacities in `[0, 3]` to produce ties and zero edges.
pub fn mixed_corpus(count: usize, seed: u64) -> Vec<Graph> {
    (0..count)
        .map(|i| {
            let n = 4 + i % 9;
            let k = match i % 3 {
                0 => 2,
                1 => n.div_ceil(2),
                _ => n,
            };
            let weights = if i % 4 == 3 { (0, 3) } else { (1, 10) };
            let density = [0.3, 0.5, 0.8][i / 3 % 3];
            let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64);
            gen_random(n, density, weights, k as f64 / n as f64, s)
                .expect("corpus parameters are feasible")
        })
        .collect()
}

/// Path `0 - 1 - ... - n-1` with heavy capacities plus light chords of span
/// two or three. Edge mincuts are long prefixes of the path, so stored cuts
/// are large. `steiner` vertices are chosen at random, always including
/// both ends.
pub fn gen_chain(n: usize, steiner: usize, seed: u64) -> Result<Graph, OracleError> {
    if n < 2 || steiner < 2 || steiner > n {
        return Err(OracleError::Generator(format!(
            "need 2 <= steiner <= n, got n={n}, steiner={steiner}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(2 * n);
    for i in 0..n - 1 {
        edges.push((i, i + 1, rng.gen_range(20..=40)));
    }
    for i in 0..n.saturating_sub(2) {
        if rng.gen_bool(0.5) {
            let span = if i + 3 < n && rng.gen_bool(0.5) { 3 } else { 2 };
            edges.push((i, i + span, 1));
        }
    }
    let mut inner: Vec<Vertex> = (1..n - 1).collect();
    inner.shuffle(&mut rng);
    let mut s: Vec<Vertex> = vec![0, n - 1];
    s.extend(inner.into_iter().take(steiner - 2));
    Ok(Graph::new(n, edges, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::steiner_mincut;

    #[test]
    fn matrix_n4() {
        let m = MatrixInstance::new(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let g = gen_capacity_lb(&m, 2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(steiner_mincut(&g).0, 10);
        let r = g.with_reduced_edge(left_vertex(0), right_vertex(4, 1), 2).unwrap();
        assert_eq!(steiner_mincut(&r).0, 8);
    }

    #[test]
    fn matrix_n2() {
        let m = MatrixInstance::new(vec![vec![7]]).unwrap();
        let g = gen_capacity_lb(&m, 2).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(steiner_mincut(&g).0, 7);
    }

    #[test]
    fn matrix_rejects_bad_shapes() {
        assert!(MatrixInstance::new(vec![vec![1, 2, 3]]).is_err());
        assert!(MatrixInstance::new(vec![vec![1], vec![2, 3]]).is_err());
        assert!(MatrixInstance::new(vec![vec![0]]).is_err());
        let m = MatrixInstance::new(vec![vec![1]]).unwrap();
        assert!(gen_capacity_lb(&m, 3).is_err());
    }

    #[test]
    fn matrix_parse() {
        let m = MatrixInstance::parse("1 2\n3 4\n").unwrap();
        assert_eq!(m.sum(), 10);
        assert!(MatrixInstance::parse("1 x\n3 4\n").is_err());
    }

    #[test]
    fn bipartite_counts() {
        let empty = Bipartite::new(vec![vec![false; 3]; 2]).unwrap();
        let g = gen_bipartite_lb(&empty, 2).unwrap();
        assert_eq!(steiner_mincut(&g).0, 0);
        let full = Bipartite::new(vec![vec![true; 3]; 2]).unwrap();
        let g = gen_bipartite_lb(&full, 3).unwrap();
        assert_eq!(steiner_mincut(&g).0, 6);
        assert_eq!(g.m(), 6 + 1 + 3);
    }

    #[test]
    fn gsh_on_path_needs_scaling() {
        let h = Graph::new(3, [(0, 1, 3), (1, 2, 1)], [0, 2]).unwrap();
        assert!(gen_reporting_lb(&h, false).is_err());
        let (g, p) = gen_reporting_lb(&h, true).unwrap();
        assert!(p.scaled);
        assert_eq!((p.lambda, p.alpha, p.lambda_prime), (2, 0, 1));
        assert_eq!((p.a, p.s), (0, 3));
        let (lambda, cut) = steiner_mincut(&g);
        assert_eq!(lambda, 1);
        assert_eq!(cut.side, vec![0, 1, 2]);
    }

    #[test]
    fn random_is_deterministic() {
        let a = gen_random(8, 0.5, (1, 10), 0.5, 1).unwrap();
        let b = gen_random(8, 0.5, (1, 10), 0.5, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.terminals().len(), 4);
        let k = gen_random(12, 1.0, (1, 1), 0.25, 7).unwrap();
        assert_eq!(k.m(), 66);
        assert_eq!(k.terminals().len(), 3);
        assert!(gen_random(8, 0.5, (1, 10), 1.0, 3).unwrap().is_global());
    }

    #[test]
    fn chain_shape() {
        let g = gen_chain(16, 4, 5).unwrap();
        assert_eq!(g.terminals().len(), 4);
        assert!(g.is_steiner(0) && g.is_steiner(15));
        assert!(gen_chain(4, 5, 0).is_err());
    }
}
