//! Instance generators, brute-force oracles, and the seeded experiment
//! runner used by the CLI, the acceptance suite, and the benches.

pub mod experiment;
pub mod generate;
pub mod oracle;
pub mod stats;

pub use experiment::{load_config, parse_config, run_experiment, ExperimentConfig, ExperimentReport, Task, TrialRecord};
pub use generate::{generate, Certificate, GeneratorSpec, Instance};
pub use stats::{Proportion, Z_99};
