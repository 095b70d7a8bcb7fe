mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use localcut::connectivity::{vertex_connectivity_directed, vertex_connectivity_undirected, ConnectivityConfig};
use localcut::harness::oracle::{
    check_split_lemmas, oracle_min_edge_cut, oracle_min_edge_out_components, oracle_min_vertex_out_components,
    oracle_mkecs, oracle_vertex_connectivity,
};
use localcut::harness::{generate, load_config, run_experiment, GeneratorSpec};
use localcut::local::{detect_component_param, detect_vertex_out_component, TimeMode};
use localcut::mkecs::{baseline_mkecs, mkecs_directed, mkecs_undirected};
use localcut::testers::{test_k_edge_connectivity, test_k_vertex_connectivity, Model, TesterConfig};
use localcut::{parse_edge_list, parse_undirected_edge_list, write_edge_list, Graph, Incidence, UndirectedGraph, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Local cut detection, vertex connectivity, k-edge-connected decomposition
/// and connectivity testing on edge-list graphs.
///
/// Exit status: 0 on success or accept, 1 when a cut or reject is reported,
/// 2 on errors.
#[derive(Parser)]
#[command(name = "localcut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Edge-list file ("n m" header, then 1-based "tail head" lines); `-`
    /// reads stdin.
    #[arg(long, short = 'g')]
    graph: PathBuf,
    /// Read each line as an undirected edge.
    #[arg(long)]
    undirected: bool,
}

#[derive(Args)]
struct SeedArg {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Expected,
    WorstCase,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Edge,
    Vertex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Bounded,
    Unbounded,
}

#[derive(Subcommand)]
enum Command {
    /// Look for a k-edge-out component containing the source.
    DetectEdgeComponent {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        /// Target success probability.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Expected)]
        mode: ModeArg,
        /// 1-based source vertex.
        #[arg(long)]
        source: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Look for a k-vertex-out component containing the source.
    DetectVertexComponent {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Bound the symmetric volume instead of the volume.
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        source: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Compute the vertex connectivity with a minimum separator.
    VertexConnectivity {
        #[arg(long, short = 'g')]
        graph: PathBuf,
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
        #[arg(long)]
        undirected: bool,
        /// Each sampling step fails with probability at most n^-confidence.
        #[arg(long, default_value_t = 2.0)]
        confidence: f64,
        /// Answer exactly on graphs with at most this many vertices.
        #[arg(long)]
        exact_fallback_threshold: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Maximal k-edge-connected subgraphs, one class per line.
    Mkecs {
        #[arg(long, short = 'g')]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "undirected")]
        directed: bool,
        #[arg(long)]
        undirected: bool,
        /// Size bound for the local searches (directed).
        #[arg(long, conflicts_with = "gamma")]
        delta: Option<usize>,
        /// Size ratio for the local searches (undirected).
        #[arg(long)]
        gamma: Option<f64>,
        /// Use the repeated global-cut baseline.
        #[arg(long)]
        baseline: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// One-sided tester for k-edge or k-vertex connectivity.
    TestConnectivity {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Degree bound (bounded) or average degree (unbounded); defaults
        /// to the graph's maximum or average degree.
        #[arg(long)]
        degree: Option<f64>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Generate an instance and print it as an edge list.
    Gen {
        /// Generator spec as JSON, e.g. '{"family":"clique_union","count":3,"size":4}'.
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        seed: SeedArg,
        /// Write the edge list here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the planted-structure certificate as JSON.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Brute-force reference answers for small graphs.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Run a seeded experiment described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write one JSON trial record per line.
        #[arg(long)]
        ndjson: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Run with this master seed instead of the config's.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum OracleQuery {
    /// All minimal k-edge-out components containing the source.
    EdgeOut {
        #[arg(long)]
        source: usize,
        #[arg(long)]
        k: usize,
    },
    /// All minimal k-vertex-out components containing the source.
    VertexOut {
        #[arg(long)]
        source: usize,
        #[arg(long)]
        k: usize,
    },
    /// Global minimum edge cut.
    MinEdgeCut,
    /// Exact vertex connectivity.
    VertexConnectivity,
    /// Maximal k-edge-connected subgraphs.
    Mkecs {
        #[arg(long)]
        k: usize,
    },
    /// Check the split-graph correspondence for every source.
    SplitLemmas,
}

/// What a command printed and how it should exit.
enum Outcome {
    Success,
    Found,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Found) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_directed(path: &Path) -> Result<Graph> {
    parse_edge_list(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_undirected(path: &Path) -> Result<UndirectedGraph> {
    parse_undirected_edge_list(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

impl Input {
    fn load(&self) -> Result<Graph> {
        if self.undirected {
            Ok(load_undirected(&self.graph)?.to_bidirected())
        } else {
            load_directed(&self.graph)
        }
    }
}

fn source_vertex(g: &Graph, source: usize) -> Result<Vertex> {
    if source == 0 || source > g.vertex_count() {
        bail!("source {source} out of range 1..={}", g.vertex_count());
    }
    Ok(source - 1)
}

fn print_json(value: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn found(flag: bool) -> Outcome {
    if flag {
        Outcome::Found
    } else {
        Outcome::Success
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::DetectEdgeComponent {
            input,
            k,
            delta,
            p,
            mode,
            source,
            seed,
        } => {
            let g = input.load()?;
            let s = source_vertex(&g, source)?;
            let mode = match mode {
                ModeArg::Expected => TimeMode::Expected,
                ModeArg::WorstCase => TimeMode::WorstCase,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let r = detect_component_param(&g, s, k, delta, p, mode, &mut rng)?;
            print_json(&render::edge_component(&g, &r))?;
            Ok(found(r.is_found()))
        }
        Command::DetectVertexComponent {
            input,
            k,
            delta,
            p,
            symmetric,
            source,
            seed,
        } => {
            let g = input.load()?;
            let s = source_vertex(&g, source)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let r = detect_vertex_out_component(&g, s, k, delta, p, symmetric, &mut rng)?;
            print_json(&render::vertex_component(&r))?;
            Ok(found(r.is_found()))
        }
        Command::VertexConnectivity {
            graph,
            undirected,
            confidence,
            exact_fallback_threshold,
            seed,
            ..
        } => {
            let config = ConnectivityConfig {
                confidence,
                exact_fallback_threshold,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let result = if undirected {
                vertex_connectivity_undirected(&load_undirected(&graph)?, config, &mut rng)
            } else {
                vertex_connectivity_directed(&load_directed(&graph)?, config, &mut rng)
            };
            print_json(&render::connectivity(&result))?;
            Ok(Outcome::Success)
        }
        Command::Mkecs {
            graph,
            k,
            undirected,
            delta,
            gamma,
            baseline,
            seed,
            ..
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let decomposition = if undirected {
                let u = load_undirected(&graph)?;
                if delta.is_some() {
                    bail!("--delta applies to directed graphs; use --gamma");
                }
                if baseline {
                    baseline_mkecs(&u.to_bidirected(), k)
                } else {
                    mkecs_undirected(&u, k, gamma, &mut rng)?
                }
            } else {
                let g = load_directed(&graph)?;
                if gamma.is_some() {
                    bail!("--gamma applies to undirected graphs; use --delta");
                }
                if baseline {
                    baseline_mkecs(&g, k)
                } else {
                    mkecs_directed(&g, k, delta, &mut rng)?
                }
            };
            for class in &decomposition.classes {
                let line: Vec<String> = render::ids(class).iter().map(ToString::to_string).collect();
                println!("{}", line.join(" "));
            }
            Ok(Outcome::Success)
        }
        Command::TestConnectivity {
            input,
            property,
            k,
            epsilon,
            model,
            degree,
            trials,
            seed,
        } => {
            let g = input.load()?;
            let n = g.vertex_count().max(1);
            let model = match model {
                ModelArg::Bounded => Model::Bounded {
                    degree: match degree {
                        Some(d) => d as usize,
                        None => (0..g.vertex_count())
                            .map(|v| g.out_degree(v).max(g.in_degree(v)))
                            .max()
                            .unwrap_or(0)
                            .max(1),
                    },
                },
                ModelArg::Unbounded => Model::Unbounded {
                    average_degree: degree.unwrap_or((g.edge_count() as f64 / n as f64).max(1.0)),
                },
            };
            let cfg = TesterConfig {
                k,
                epsilon,
                model,
                edge_count: g.edge_count(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let mut verdicts = Vec::with_capacity(trials);
            let mut rejects = 0;
            for _ in 0..trials.max(1) {
                let v = match property {
                    PropertyArg::Edge => test_k_edge_connectivity(&g, &cfg, &mut rng)?,
                    PropertyArg::Vertex => test_k_vertex_connectivity(&g, &cfg, &mut rng)?,
                };
                rejects += usize::from(v.is_reject());
                verdicts.push(render::tester_verdict(&g, &v));
            }
            let out = if verdicts.len() == 1 {
                verdicts.pop().unwrap_or_default()
            } else {
                json!({"trials": verdicts.len(), "rejects": rejects, "verdicts": verdicts})
            };
            print_json(&out)?;
            Ok(found(rejects > 0))
        }
        Command::Gen {
            spec,
            seed,
            out,
            certificate,
        } => {
            let spec: GeneratorSpec = {
                let de = &mut serde_json::Deserializer::from_str(&spec);
                serde_path_to_error::deserialize(de).map_err(|e| anyhow::anyhow!("spec field `{}`: {}", e.path(), e.inner()))?
            };
            let instance = generate(&spec, seed.seed)?;
            let text = match &instance.undirected {
                Some(u) => write_edge_list(u.n, &u.edges),
                None => write_edge_list(instance.graph.vertex_count(), instance.graph.endpoints()),
            };
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            if let Some(path) = certificate {
                let body = serde_json::to_string_pretty(&render::certificate(&instance.certificate))?;
                std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Outcome::Success)
        }
        Command::Oracle { input, query } => {
            let g = input.load()?;
            let (n, edges) = (g.vertex_count(), g.endpoints());
            let classes = |sets: Vec<Vec<Vertex>>| sets.iter().map(|s| render::ids(s)).collect::<Vec<_>>();
            let (value, outcome) = match query {
                OracleQuery::EdgeOut { source, k } => {
                    let sets = oracle_min_edge_out_components(n, edges, source_vertex(&g, source)?, k)?;
                    let any = !sets.is_empty();
                    (json!({"components": classes(sets)}), found(any))
                }
                OracleQuery::VertexOut { source, k } => {
                    let sets = oracle_min_vertex_out_components(n, edges, source_vertex(&g, source)?, k)?;
                    let any = !sets.is_empty();
                    (json!({"components": classes(sets)}), found(any))
                }
                OracleQuery::MinEdgeCut => match oracle_min_edge_cut(n, edges)? {
                    Some((size, side)) => (json!({"size": size, "source_side": render::ids(&side)}), Outcome::Success),
                    None => (json!({"size": null}), Outcome::Success),
                },
                OracleQuery::VertexConnectivity => {
                    (json!({"kappa": oracle_vertex_connectivity(n, edges)?}), Outcome::Success)
                }
                OracleQuery::Mkecs { k } => (json!({"classes": classes(oracle_mkecs(n, edges, k)?)}), Outcome::Success),
                OracleQuery::SplitLemmas => {
                    let report = check_split_lemmas(n, edges)?;
                    let bad = !report.violations.is_empty();
                    (
                        json!({
                            "sources": report.sources,
                            "forward_sets": report.forward_sets,
                            "backward_sets": report.backward_sets,
                            "violations": report.violations,
                        }),
                        found(bad),
                    )
                }
            };
            print_json(&value)?;
            Ok(outcome)
        }
        Command::Experiment {
            config,
            report,
            ndjson,
            csv,
            seed,
        } => {
            let mut cfg = load_config(&config).with_context(|| format!("loading {}", config.display()))?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let result = run_experiment(&cfg)?;
            if let Some(path) = report {
                result.write_json(&path)?;
            }
            if let Some(path) = ndjson {
                result.write_ndjson(&path)?;
            }
            if let Some(path) = csv {
                result.write_csv(&path)?;
            }
            print_json(&json!({"name": result.config.name, "summary": result.summary, "wall_clock_ms": result.wall_clock_ms}))?;
            Ok(Outcome::Success)
        }
    }
}
