//! Fixtures shared by the benchmarks in `benches/`.

use seio_core::seclink::{case_seed, gen_triple, Triple};

/// `n` generated triples of height `depth`, reproducible from `seed`.
pub fn triples(seed: u64, n: usize, depth: usize) -> Vec<Triple> {
    (0..n)
        .map(|i| gen_triple(case_seed(seed, i), depth))
        .collect()
}
