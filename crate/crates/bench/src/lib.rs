//! Workloads shared by the benchmarks.

use apart_core::random::{LtsGenerator, RandomLtsParams};
use apart_core::Lts;

/// A fixed corpus of random systems.
pub fn corpus(count: usize, max_states: usize, tau_probability: f64, seed: u64) -> Vec<Lts> {
    let params = RandomLtsParams { max_states, max_labels: 3, tau_probability, density: 0.25 };
    LtsGenerator::new(params, seed).take(count).collect()
}

/// A chain `p0 -a-> p1 -a-> ... -a-> pn` next to the same chain one step
/// shorter; the two heads are apart at level `n`.
pub fn chains(n: usize) -> Lts {
    let mut b = apart_core::LtsBuilder::new();
    for i in 0..n {
        b.transition(&format!("p{i}"), "a", &format!("p{}", i + 1));
    }
    for i in 0..n.saturating_sub(1) {
        b.transition(&format!("q{i}"), "a", &format!("q{}", i + 1));
    }
    b.state("q0");
    b.build().expect("chain is well formed")
}
