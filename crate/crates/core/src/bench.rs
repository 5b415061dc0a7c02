//! Space and latency measurements over graph families.
//!
//! A family spec reads `<kind>:<sizes>:<rule>`:
//!
//! * `kind` is `chain` or `random`;
//! * `sizes` is a comma list (`128,256`) or a doubling range (`64..512`);
//! * `rule` picks `|S|`: `global` (`S = V`), `sqrt` (`n - ceil(sqrt n) + 1`),
//!   `two`, or a fraction such as `0.5`.

use std::fmt::Write as _;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::generators::{gen_chain, gen_random, steiner_count};
use crate::graph::{Capacity, Graph};
use crate::oracle::{FullOracle, SpaceReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FamilyKind {
    Chain,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SteinerRule {
    Global,
    Sqrt,
    Two,
    Fraction(f64),
}

impl SteinerRule {
    pub fn count(&self, n: usize) -> usize {
        match *self {
            SteinerRule::Global => n,
            SteinerRule::Sqrt => n + 1 - (n as f64).sqrt().ceil() as usize,
            SteinerRule::Two => 2,
            SteinerRule::Fraction(f) => steiner_count(n, f),
        }
        .clamp(2, n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub sizes: Vec<usize>,
    pub rule: SteinerRule,
}

impl FromStr for FamilySpec {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| OracleError::Generator(format!("family spec {s:?}: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, sizes, rule] = parts[..] else {
            return Err(bad("expected <kind>:<sizes>:<rule>"));
        };
        let kind = match kind {
            "chain" => FamilyKind::Chain,
            "random" => FamilyKind::Random,
            _ => return Err(bad("kind must be chain or random")),
        };
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad("bad size"));
        let sizes = if let Some((lo, hi)) = sizes.split_once("..") {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo == 0 || lo > hi {
                return Err(bad("empty size range"));
            }
            std::iter::successors(Some(lo), |&n| Some(n * 2))
                .take_while(|&n| n <= hi)
                .collect()
        } else {
            sizes.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        if sizes.iter().any(|&n| n < 2) {
            return Err(bad("sizes must be at least 2"));
        }
        let rule = match rule {
            "global" => SteinerRule::Global,
            "sqrt" => SteinerRule::Sqrt,
            "two" => SteinerRule::Two,
            f => match f.parse::<f64>() {
                Ok(f) if (0.0..=1.0).contains(&f) => SteinerRule::Fraction(f),
                _ => return Err(bad("rule must be global, sqrt, two or a fraction")),
            },
        };
        Ok(FamilySpec { kind, sizes, rule })
    }
}

impl FamilySpec {
    pub fn graph(&self, n: usize, seed: u64) -> Result<Graph, OracleError> {
        let k = self.rule.count(n);
        match self.kind {
            FamilyKind::Chain => gen_chain(n, k, seed),
            FamilyKind::Random => {
                let density = (6.0 / n as f64).min(1.0);
                gen_random(n, density, (1, 20), k as f64 / n as f64, seed)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub steiner: usize,
    pub m: usize,
    pub build_ms: f64,
    pub words: usize,
    pub space: SpaceReport,
    pub baseline_words: Option<usize>,
    pub cap_ns: f64,
    pub cut_ns: f64,
    /// `(|C|, ns)` per sampled cut query.
    pub cut_samples: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchOptions {
    pub seed: u64,
    pub queries: usize,
    pub baseline: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            seed: 1,
            queries: 2000,
            baseline: false,
        }
    }
}

/// Query workload: random edges with Δ uniform in `[0, w]`.
fn workload(g: &Graph, count: usize, rng: &mut impl Rng) -> Vec<(usize, usize, Capacity)> {
    (0..count)
        .map(|_| {
            let e = g.edge(rng.gen_range(0..g.m()));
            (e.u, e.v, rng.gen_range(0..=e.w))
        })
        .collect()
}

pub fn bench_graph(g: &Graph, opts: &BenchOptions) -> Result<BenchRow, OracleError> {
    let start = Instant::now();
    let (oracle, baseline) = if opts.baseline {
        let (o, b) = FullOracle::build_with_baseline(g)?;
        (o, Some(b))
    } else {
        (FullOracle::build(g)?, None)
    };
    let build_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ g.n() as u64);
    let queries = workload(g, opts.queries.max(1), &mut rng);
    for &(x, y, d) in &queries {
        black_box(oracle.cap_query(x, y, d)?);
    }
    let t = Instant::now();
    for &(x, y, d) in &queries {
        black_box(oracle.cap_query(x, y, d)?);
    }
    let cap_ns = t.elapsed().as_nanos() as f64 / queries.len() as f64;

    // Per query: the fastest of several timed batches, which filters out
    // preemption and cache misses caused by other processes.
    const REPEAT: usize = 16;
    const BATCHES: usize = 5;
    let mut cut_samples = Vec::with_capacity(queries.len());
    for &(x, y, d) in &queries {
        let mut size = 0;
        let mut best = f64::MAX;
        for _ in 0..BATCHES {
            let t = Instant::now();
            for _ in 0..REPEAT {
                size = black_box(oracle.cut_query(x, y, d)?).cut.len();
            }
            best = best.min(t.elapsed().as_nanos() as f64 / REPEAT as f64);
        }
        cut_samples.push((size, best));
    }
    let cut_ns = cut_samples.iter().map(|s| s.1).sum::<f64>() / cut_samples.len() as f64;

    let space = oracle.space_report();
    Ok(BenchRow {
        n: g.n(),
        steiner: g.terminals().len(),
        m: g.m(),
        build_ms,
        words: space.total(),
        space,
        baseline_words: baseline.map(|b| b.words()),
        cap_ns,
        cut_ns,
        cut_samples,
    })
}

pub fn run_bench(spec: &FamilySpec, opts: &BenchOptions) -> Result<Vec<BenchRow>, OracleError> {
    spec.sizes
        .iter()
        .map(|&n| bench_graph(&spec.graph(n, opts.seed.wrapping_add(n as u64))?, opts))
        .collect()
}

/// Whitespace table, one row per instance.
pub fn to_table(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "n S m build_ms words_stored baseline_words avg_cap_query_ns avg_cut_query_ns\n",
    );
    for r in rows {
        let base = r.baseline_words.map_or("-".to_string(), |w| w.to_string());
        let _ = writeln!(
            out,
            "{} {} {} {:.1} {} {} {:.1} {:.1}",
            r.n, r.steiner, r.m, r.build_ms, r.words, base, r.cap_ns, r.cut_ns
        );
    }
    out
}

/// Least-squares line `y = a + b x` and its coefficient of determination.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return (my, 0.0, 0.0);
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (a, b, r2)
}

/// Mean latency per distinct cut size, which averages out timer noise
/// before fitting.
pub fn latency_by_size(samples: &[(usize, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = samples.to_vec();
    sorted.sort_by_key(|s| s.0);
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let size = sorted[i].0;
        let j = sorted[i..].iter().take_while(|s| s.0 == size).count() + i;
        let mean = sorted[i..j].iter().map(|s| s.1).sum::<f64>() / (j - i) as f64;
        out.push((size as f64, mean));
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        let s: FamilySpec = "chain:64..512:global".parse().unwrap();
        assert_eq!(s.sizes, vec![64, 128, 256, 512]);
        assert_eq!(s.rule, SteinerRule::Global);
        let s: FamilySpec = "random:10,20:0.5".parse().unwrap();
        assert_eq!((s.kind, s.sizes.clone()), (FamilyKind::Random, vec![10, 20]));
        assert_eq!(s.rule.count(20), 10);
        for bad in ["chain:64", "tree:64:two", "chain:0..4:two", "chain:8:half", "chain:1:two"] {
            assert!(bad.parse::<FamilySpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn steiner_rules() {
        assert_eq!(SteinerRule::Sqrt.count(128), 128 - 12 + 1);
        assert_eq!(SteinerRule::Sqrt.count(256), 241);
        assert_eq!(SteinerRule::Two.count(100), 2);
        assert_eq!(SteinerRule::Global.count(7), 7);
    }

    #[test]
    fn fit_recovers_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 + 2.0 * i as f64)).collect();
        let (a, b, r2) = linear_fit(&pts);
        assert!((a - 3.0).abs() < 1e-9 && (b - 2.0).abs() < 1e-9);
        assert!((r2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grouping_by_size() {
        let g = latency_by_size(&[(2, 10.0), (1, 4.0), (2, 20.0)]);
        assert_eq!(g, vec![(1.0, 4.0), (2.0, 15.0)]);
    }

    #[test]
    fn small_bench_runs() {
        let spec: FamilySpec = "chain:16,32:sqrt".parse().unwrap();
        let rows = run_bench(
            &spec,
            &BenchOptions {
                seed: 3,
                queries: 50,
                baseline: true,
            },
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.baseline_words.is_some() && r.words > 0));
        assert!(to_table(&rows).lines().count() == 3);
    }
}
