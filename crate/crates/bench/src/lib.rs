//! Fixed inputs shared by the benchmarks.

use permx_core::{to_matrix, Permutation, PermutationMatrix};

/// A host of length `n` built by repeated skew and direct sums, so it has
/// plenty of structure for the containment search to work through.
pub fn layered_host(n: usize) -> Permutation {
    let block: Permutation = "2413".parse().unwrap();
    let mut host = block.clone();
    let mut skew = true;
    while host.len() + block.len() <= n {
        host = if skew { host.skew_sum(&block) } else { host.direct_sum(&block) }.unwrap();
        skew = !skew;
    }
    host
}

pub fn pattern(text: &str) -> Permutation {
    text.parse().unwrap()
}

pub fn pattern_matrix(text: &str) -> PermutationMatrix {
    to_matrix(&pattern(text))
}
