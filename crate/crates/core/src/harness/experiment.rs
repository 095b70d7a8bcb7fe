use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate, Certificate, GeneratorSpec, Instance};
use super::oracle::{oracle_vertex_connectivity, FLOW_LIMIT};
use super::stats::{Proportion, Z_99};
use crate::connectivity::{vertex_connectivity_directed, vertex_connectivity_undirected, ConnectivityConfig};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::local::{detect_component_param, detect_vertex_out_component, TimeMode};
use crate::measure::{verify_k_edge_out, verify_vertex_out};
use crate::mkecs::{baseline_mkecs, mkecs_directed, mkecs_undirected};
use crate::testers::{test_k_edge_connectivity, test_k_vertex_connectivity, Model, TesterConfig};

/// A batch of seeded trials of one task on one instance family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    /// Master seed; trial `i` draws from stream `i` of this seed.
    pub seed: u64,
    pub trials: usize,
    pub generator: GeneratorSpec,
    /// Generate one instance from the master seed instead of one per trial.
    #[serde(default)]
    pub fixed_instance: bool,
    pub task: Task,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Edge,
    Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Bounded,
    Unbounded,
}

fn half() -> f64 {
    0.5
}

/// What each trial runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// Success: a component was found.
    DetectEdgeComponent {
        k: usize,
        delta: usize,
        #[serde(default = "half")]
        p: f64,
        #[serde(default)]
        mode: TimeMode,
        /// Defaults to a planted component's first vertex, else a random one.
        #[serde(default)]
        source: Option<Vertex>,
    },
    /// Success: a component was found.
    DetectVertexComponent {
        k: usize,
        delta: usize,
        #[serde(default = "half")]
        p: f64,
        #[serde(default)]
        symmetric: bool,
        #[serde(default)]
        source: Option<Vertex>,
    },
    /// Success: κ matches the flow oracle (or, above its size limit, the
    /// witness validates).
    VertexConnectivity {
        #[serde(default)]
        undirected: bool,
        #[serde(default)]
        confidence: Option<f64>,
    },
    /// Success: the partition equals the baseline decomposition.
    Mkecs {
        k: usize,
        #[serde(default)]
        undirected: bool,
        #[serde(default)]
        delta: Option<usize>,
        #[serde(default)]
        gamma: Option<f64>,
    },
    /// Success: the tester rejected.
    TestConnectivity {
        property: Property,
        k: usize,
        epsilon: f64,
        model: ModelKind,
        /// Degree bound or average degree; defaults to the instance's
        /// maximum or average degree.
        #[serde(default)]
        degree: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub instance_seed: u64,
    pub success: bool,
    /// False if an answer failed its structural check.
    pub valid: bool,
    pub outcome: String,
    pub queries: u64,
    pub processed_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub successes: Proportion,
    pub rate: f64,
    pub sigma: f64,
    pub ci99: (f64, f64),
    pub violations: usize,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub max_processed_edges: usize,
    /// Per-call processed-edge bound for the detection tasks.
    pub processed_edge_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
    pub wall_clock_ms: u128,
}

/// Parses a JSON config, reporting schema errors with their field path.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// The RNG for trial `index`: stream `index` of the master seed.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Processed-edge bound of one detection call with `reps` trials.
fn processed_bound(k: usize, delta: usize, reps: usize) -> usize {
    reps * (k * 2 * k * (delta + k) + delta + 1)
}

/// Runs every trial (in parallel) and summarizes them. Trial outcomes depend
/// only on the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let fixed = if config.fixed_instance {
        Some(generate(&config.generator, config.seed)?)
    } else {
        None
    };
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(config.seed, i);
            let instance_seed = if config.fixed_instance { config.seed } else { rng.gen() };
            let owned;
            let instance = match &fixed {
                Some(inst) => inst,
                None => {
                    owned = generate(&config.generator, instance_seed)?;
                    &owned
                }
            };
            run_trial(&config.task, instance, i, instance_seed, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&config.task, &trials);
    Ok(ExperimentReport {
        config: config.clone(),
        trials,
        summary,
        wall_clock_ms: start.elapsed().as_millis(),
    })
}

fn pick_source<R: Rng + ?Sized>(source: Option<Vertex>, instance: &Instance, rng: &mut R) -> Result<Vertex> {
    let n = instance.graph.vertex_count();
    let s = match (source, &instance.certificate) {
        (Some(s), _) => s,
        (None, Certificate::EdgeOutComponent { members, .. }) => members[0],
        (None, _) => rng.gen_range(0..n.max(1)),
    };
    instance.graph.check_vertex(s)?;
    Ok(s)
}

fn run_trial<R: Rng + ?Sized>(task: &Task, instance: &Instance, trial: usize, instance_seed: u64, rng: &mut R) -> Result<TrialRecord> {
    let g = &instance.graph;
    let mut record = TrialRecord {
        trial,
        instance_seed,
        success: false,
        valid: true,
        outcome: String::new(),
        queries: 0,
        processed_edges: 0,
    };
    match *task {
        Task::DetectEdgeComponent {
            k,
            delta,
            p,
            mode,
            source,
        } => {
            let s = pick_source(source, instance, rng)?;
            let r = detect_component_param(g, s, k, delta, p, mode, rng)?;
            record.success = r.is_found();
            record.valid = !r.is_found()
                || (verify_k_edge_out(g, &r.members, k)
                    && r.members.contains(&s)
                    && r.edge_size <= (2 * k * (delta + k)).max(delta));
            record.outcome = format!("size={}", r.members.len());
            record.queries = r.queries_used;
            record.processed_edges = r.processed_edges;
        }
        Task::DetectVertexComponent {
            k,
            delta,
            p,
            symmetric,
            source,
        } => {
            let s = pick_source(source, instance, rng)?;
            let r = detect_vertex_out_component(g, s, k, delta, p, symmetric, rng)?;
            record.success = r.is_found();
            record.valid = !r.is_found() || (verify_vertex_out(g, &r.members, k) && r.members.contains(&s));
            record.outcome = format!("size={} boundary={}", r.members.len(), r.boundary.len());
            record.queries = r.queries_used;
            record.processed_edges = r.processed_edges;
        }
        Task::VertexConnectivity { undirected, confidence } => {
            let mut cfg = ConnectivityConfig::default();
            if let Some(c) = confidence {
                cfg.confidence = c;
            }
            let result = match (&instance.undirected, undirected) {
                (Some(u), true) => vertex_connectivity_undirected(u, cfg, rng),
                (None, true) => {
                    return Err(Error::InvalidParameter("undirected connectivity needs an undirected family".into()))
                }
                (_, false) => vertex_connectivity_directed(g, cfg, rng),
            };
            record.valid = match &result.witness {
                Some(cut) => cut.size() == result.kappa && cut.validate(g),
                None => true,
            };
            record.success = if g.vertex_count() <= FLOW_LIMIT {
                oracle_vertex_connectivity(g.vertex_count(), g.endpoints())? == result.kappa
            } else {
                record.valid
            };
            record.outcome = format!("kappa={}", result.kappa);
            record.queries = result.probes.iter().map(|p| p.stats.local_queries).sum();
        }
        Task::Mkecs {
            k,
            undirected,
            delta,
            gamma,
        } => {
            let d = match (&instance.undirected, undirected) {
                (Some(u), true) => mkecs_undirected(u, k, gamma, rng)?,
                (None, true) => {
                    return Err(Error::InvalidParameter("undirected decomposition needs an undirected family".into()))
                }
                (_, false) => mkecs_directed(g, k, delta, rng)?,
            };
            record.success = d == baseline_mkecs(g, k);
            record.valid = record.success;
            record.outcome = format!("classes={}", d.classes.len());
        }
        Task::TestConnectivity {
            property,
            k,
            epsilon,
            model,
            degree,
        } => {
            let n = g.vertex_count().max(1);
            let model = match model {
                ModelKind::Bounded => Model::Bounded {
                    degree: degree.map_or_else(|| max_degree(g), |d| d as usize),
                },
                ModelKind::Unbounded => Model::Unbounded {
                    average_degree: degree.unwrap_or((g.edge_count() as f64 / n as f64).max(1.0)),
                },
            };
            let cfg = TesterConfig {
                k,
                epsilon,
                model,
                edge_count: g.edge_count(),
            };
            let verdict = match property {
                Property::Edge => test_k_edge_connectivity(g, &cfg, rng)?,
                Property::Vertex => test_k_vertex_connectivity(g, &cfg, rng)?,
            };
            record.success = verdict.is_reject();
            record.valid = match &verdict.decision {
                crate::testers::TesterDecision::Reject { witness } => witness.validate(g, k),
                crate::testers::TesterDecision::Accept => true,
            };
            record.outcome = if record.success { "reject" } else { "accept" }.into();
            record.queries = verdict.queries_used;
        }
    }
    Ok(record)
}

fn max_degree(g: &crate::graph::Graph) -> usize {
    use crate::graph::Incidence;
    (0..g.vertex_count())
        .map(|v| g.out_degree(v).max(g.in_degree(v)))
        .max()
        .unwrap_or(0)
        .max(1)
}

fn summarize(task: &Task, trials: &[TrialRecord]) -> Summary {
    let successes = Proportion::new(trials.iter().filter(|t| t.success).count(), trials.len());
    let queries: Vec<u64> = trials.iter().map(|t| t.queries).collect();
    let processed_edge_bound = match *task {
        Task::DetectEdgeComponent { k, delta, p, mode, .. } => {
            Some(processed_bound(k, delta, crate::local::repetitions(p, mode)))
        }
        Task::DetectVertexComponent { k, delta, p, .. } => {
            // detection runs on the split graph with volume budget 3Δ
            Some(processed_bound(k, 3 * delta, crate::local::repetitions(p, TimeMode::Expected)))
        }
        _ => None,
    };
    Summary {
        rate: successes.rate(),
        sigma: successes.sigma(),
        ci99: successes.wilson(Z_99),
        successes,
        violations: trials.iter().filter(|t| !t.valid).count(),
        mean_queries: if trials.is_empty() {
            0.0
        } else {
            queries.iter().sum::<u64>() as f64 / trials.len() as f64
        },
        max_queries: queries.iter().copied().max().unwrap_or(0),
        max_processed_edges: trials.iter().map(|t| t.processed_edges).max().unwrap_or(0),
        processed_edge_bound,
    }
}

impl ExperimentReport {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(file, self).map_err(std::io::Error::from)?;
        Ok(())
    }

    /// One JSON object per trial per line.
    pub fn write_ndjson(&self, path: &Path) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        for t in &self.trials {
            serde_json::to_writer(&mut file, t).map_err(std::io::Error::from)?;
            file.write_all(b"\n")?;
        }
        file.flush()?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
        for t in &self.trials {
            w.serialize(t).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted_config() -> ExperimentConfig {
        parse_config(
            r#"{
                "name": "planted",
                "seed": 7,
                "trials": 40,
                "generator": {"family": "planted_edge_component", "component_size": 4, "k": 2, "blob_edges": 200},
                "task": {"kind": "detect_edge_component", "k": 2, "delta": 8}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn reruns_reproduce_trials() {
        let cfg = planted_config();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.summary.violations, 0);
        assert!(a.summary.max_processed_edges <= a.summary.processed_edge_bound.unwrap());
    }

    #[test]
    fn config_errors_carry_the_field_path() {
        let err = parse_config(r#"{"name": "x", "seed": 1, "trials": 2, "generator": {"family": "complete", "n": "four"}, "task": {"kind": "mkecs", "k": 2}}"#)
            .unwrap_err();
        match err {
            Error::Config { path, .. } => assert!(path.starts_with("generator"), "{path}"),
            other => panic!("{other:?}"),
        }
        let err = parse_config(r#"{"name": "x", "seed": 1, "trials": 2, "generator": {"family": "figure1"}, "task": {"kind": "mkecs", "k": 2, "bogus": 1}}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn writers_produce_one_row_per_trial() {
        let report = run_experiment(&planted_config()).unwrap();
        let dir = std::env::temp_dir().join(format!("localcut-exp-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        report.write_ndjson(&dir.join("t.ndjson")).unwrap();
        report.write_csv(&dir.join("t.csv")).unwrap();
        report.write_json(&dir.join("r.json")).unwrap();
        let nd = std::fs::read_to_string(dir.join("t.ndjson")).unwrap();
        assert_eq!(nd.lines().count(), 40);
        let csv = std::fs::read_to_string(dir.join("t.csv")).unwrap();
        assert_eq!(csv.lines().count(), 41);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
