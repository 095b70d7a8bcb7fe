//! Instance builders shared by the benchmarks.

use localcut::harness::{generate, GeneratorSpec, Instance};
use localcut::Graph;

/// Planted `k`-edge-out component of `size` vertices next to a blob with
/// roughly `blob_edges` edges.
pub fn planted(size: usize, k: usize, blob_edges: usize, seed: u64) -> Instance {
    generate(
        &GeneratorSpec::PlantedEdgeComponent {
            component_size: size,
            k,
            blob_edges,
        },
        seed,
    )
    .expect("feasible planted instance")
}

pub fn random_strongly_connected(n: usize, m: usize, seed: u64) -> Graph {
    generate(&GeneratorSpec::RandomStronglyConnected { n, m }, seed)
        .expect("feasible random instance")
        .graph
}

/// Undirected graph with a separator of `sep` vertices between two cliques.
pub fn separator(side: usize, sep: usize, seed: u64) -> Instance {
    generate(
        &GeneratorSpec::PlantedSeparator {
            side_sizes: [side, side],
            sep_size: sep,
        },
        seed,
    )
    .expect("feasible separator instance")
}
