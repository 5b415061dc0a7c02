use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steiner_sentry::bench::{run_bench, to_table, BenchOptions, FamilySpec};
use steiner_sentry::generators::{
    gen_bipartite_lb, gen_capacity_lb, gen_random, gen_reporting_lb, mixed_corpus, Bipartite,
    MatrixInstance,
};
use steiner_sentry::oracle::FullOracle;
use steiner_sentry::persist::{load_oracle, save_oracle};
use steiner_sentry::verify::{run_property_suite, SuiteReport};
use steiner_sentry::{parse_graph, Graph, GraphError, OracleError, ParseError};

const DEFAULT_SEED: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "steiner-sentry",
    version,
    about = "Steiner mincut sensitivity oracles for single edge failures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an oracle from a graph file and print its size.
    Build {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Steiner mincut capacity after reducing w(u,v) by DELTA.
    Cap(Query),
    /// A Steiner mincut after reducing w(u,v) by DELTA.
    Cut(Query),
    /// Check every structure against exhaustive enumeration.
    Verify {
        #[arg(short, long)]
        graph: Option<PathBuf>,
        #[arg(long, env = "STEINER_SENTRY_SEED", default_value = DEFAULT_SEED)]
        seed: u64,
        /// Number of seeded random graphs to check in addition to --graph.
        #[arg(long, default_value_t = 0)]
        count: usize,
        /// Print the machine-readable summary instead of text.
        #[arg(long)]
        json: bool,
        /// Write counterexample graphs into this directory.
        #[arg(long)]
        counterexamples: Option<PathBuf>,
    },
    /// Generate a graph file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output file (stdout when absent).
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Measure space and query latency over a graph family.
    Bench {
        /// `<chain|random>:<sizes>:<global|sqrt|two|fraction>`
        #[arg(long)]
        family: String,
        #[arg(long, env = "STEINER_SENTRY_SEED", default_value = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        queries: usize,
        /// Also build the quadratic baseline and report its size.
        #[arg(long)]
        baseline: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct Query {
    #[arg(short, long)]
    oracle: PathBuf,
    #[arg(short)]
    u: usize,
    #[arg(short)]
    v: usize,
    #[arg(short, long, allow_negative_numbers = true)]
    delta: i64,
}

#[derive(Subcommand, Debug)]
enum GenFamily {
    /// Two-clique graph whose cross edges carry a matrix.
    Matrix {
        #[arg(long)]
        n: Option<usize>,
        /// Matrix rows, whitespace separated (random when absent).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        max: u64,
        #[arg(long, default_value_t = 2)]
        steiner: usize,
        #[arg(long, env = "STEINER_SENTRY_SEED", default_value = DEFAULT_SEED)]
        seed: u64,
    },
    /// Two-clique graph whose cross edges encode a bipartite graph.
    Bipartite {
        #[arg(long)]
        n: Option<usize>,
        /// Rows of 0/1 entries (random when absent).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        steiner: usize,
        #[arg(long, env = "STEINER_SENTRY_SEED", default_value = DEFAULT_SEED)]
        seed: u64,
    },
    /// Attach a new Steiner vertex to a graph so its mincut becomes unique.
    Gsh {
        #[arg(short, long)]
        graph: PathBuf,
        /// Fail instead of doubling capacities when lambda + alpha is odd.
        #[arg(long)]
        strict: bool,
    },
    /// Seeded connected random graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 1)]
        wmin: u64,
        #[arg(long, default_value_t = 10)]
        wmax: u64,
        #[arg(long, default_value_t = 0.5)]
        steiner_fraction: f64,
        #[arg(long, env = "STEINER_SENTRY_SEED", default_value = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Delta given on the command line was negative.
#[derive(Debug)]
struct NegativeDelta(i64);

impl std::fmt::Display for NegativeDelta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "delta {} is negative", self.0)
    }
}

impl std::error::Error for NegativeDelta {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<ParseError>().is_some() || cause.downcast_ref::<clap::Error>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<NegativeDelta>().is_some() {
            return 4;
        }
        let graph_err = cause.downcast_ref::<GraphError>().or_else(|| match cause.downcast_ref() {
            Some(OracleError::Graph(g)) => Some(g),
            _ => None,
        });
        match graph_err {
            Some(GraphError::UnknownEdge { .. } | GraphError::VertexOutOfRange { .. }) => return 3,
            Some(GraphError::DeltaOutOfRange { .. }) => return 4,
            Some(GraphError::TooFewSteiner { .. }) => return 2,
            _ => {}
        }
    }
    1
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_graph(&text)?)
}

fn read_oracle(path: &Path) -> Result<FullOracle> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_oracle(&text).with_context(|| format!("loading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn query_delta(q: &Query) -> Result<u64> {
    u64::try_from(q.delta).map_err(|_| NegativeDelta(q.delta).into())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build { graph, out } => {
            let g = read_graph(&graph)?;
            let o = FullOracle::build(&g)?;
            fs::write(&out, save_oracle(&o)).with_context(|| format!("writing {}", out.display()))?;
            let r = o.space_report();
            println!("n={} m={} S={} lambda={}", g.n(), g.m(), g.terminals().len(), o.lambda());
            println!(
                "words type1={} gh={} type3={} captree={} mincut={} total={}",
                r.type1,
                r.gh,
                r.type3,
                r.captree,
                r.mincut,
                r.total()
            );
        }
        Command::Cap(q) => {
            let delta = query_delta(&q)?;
            let o = read_oracle(&q.oracle)?;
            let a = o.cap_query(q.u, q.v, delta)?;
            println!("{} {}", a.capacity, changed_word(a.changed));
        }
        Command::Cut(q) => {
            let delta = query_delta(&q)?;
            let o = read_oracle(&q.oracle)?;
            let a = o.cut_query(q.u, q.v, delta)?;
            println!("{} {}", a.capacity, changed_word(a.changed));
            println!("{}", a.cut);
        }
        Command::Verify {
            graph,
            seed,
            count,
            json,
            counterexamples,
        } => {
            if graph.is_none() && count == 0 {
                bail!("nothing to verify: pass --graph and/or --count");
            }
            let mut graphs = Vec::new();
            if let Some(p) = &graph {
                graphs.push(read_graph(p)?);
            }
            graphs.extend(mixed_corpus(count, seed));
            let mut report = SuiteReport::default();
            for g in &graphs {
                report.merge(run_property_suite(g)?);
            }
            if json {
                println!("{}", report.to_json());
            } else {
                println!("instances={}", report.instances);
                print!("{}", report.to_text());
            }
            if let Some(dir) = counterexamples {
                fs::create_dir_all(&dir)?;
                for r in &report.records {
                    if let Some(c) = &r.counterexample {
                        let path = dir.join(format!("{}.txt", r.name));
                        fs::write(&path, format!("# {}\n{}", c.detail, c.graph))?;
                    }
                }
            }
            if !report.passed() {
                bail!("property suite reported failures");
            }
        }
        Command::Gen { family, out } => {
            let g = generate(family)?;
            emit(out.as_deref(), &g.to_text())?;
        }
        Command::Bench {
            family,
            seed,
            queries,
            baseline,
            json,
        } => {
            let spec: FamilySpec = family.parse()?;
            let rows = run_bench(
                &spec,
                &BenchOptions {
                    seed,
                    queries,
                    baseline,
                },
            )?;
            if json {
                println!("{}", serde_json::to_string(&rows)?);
            } else {
                print!("{}", to_table(&rows));
            }
        }
    }
    Ok(())
}

fn changed_word(changed: bool) -> &'static str {
    if changed {
        "changed"
    } else {
        "unchanged"
    }
}

fn generate(family: GenFamily) -> Result<Graph> {
    Ok(match family {
        GenFamily::Matrix {
            n,
            input,
            max,
            steiner,
            seed,
        } => {
            let m = match (input, n) {
                (Some(p), _) => MatrixInstance::parse(&fs::read_to_string(&p)?)?,
                (None, Some(n)) => MatrixInstance::random(n, max, &mut ChaCha8Rng::seed_from_u64(seed))?,
                (None, None) => bail!("gen matrix needs --n or --input"),
            };
            gen_capacity_lb(&m, steiner)?
        }
        GenFamily::Bipartite {
            n,
            input,
            p,
            steiner,
            seed,
        } => {
            let b = match (input, n) {
                (Some(path), _) => Bipartite::parse(&fs::read_to_string(&path)?)?,
                (None, Some(n)) => Bipartite::random(n, p, &mut ChaCha8Rng::seed_from_u64(seed))?,
                (None, None) => bail!("gen bipartite needs --n or --input"),
            };
            gen_bipartite_lb(&b, steiner)?
        }
        GenFamily::Gsh { graph, strict } => {
            let h = read_graph(&graph)?;
            let (g, p) = gen_reporting_lb(&h, !strict)?;
            eprintln!(
                "lambda={} alpha={} lambda'={} a={} s={} scaled={}",
                p.lambda, p.alpha, p.lambda_prime, p.a, p.s, p.scaled
            );
            g
        }
        GenFamily::Random {
            n,
            density,
            wmin,
            wmax,
            steiner_fraction,
            seed,
        } => gen_random(n, density, (wmin, wmax), steiner_fraction, seed)?,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
