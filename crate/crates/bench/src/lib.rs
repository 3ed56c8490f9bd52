//! Fixtures shared by the benchmarks in `benches/`.

use ncgap::codes::CodeSpec;
use ncgap::packing::{Demand, PackingInstance};
use ncgap::rational::ratio;

pub fn hadamard(k: usize) -> CodeSpec {
    CodeSpec::hadamard(k, ratio(1, 8)).expect("valid hadamard parameters")
}

/// Complete graph on `n` vertices with one session spanning the first `t`.
pub fn complete_graph(n: u32, t: u32) -> PackingInstance {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect::<Vec<_>>();
    let capacity = vec![1; edges.len()];
    let sessions = vec![Demand { terminals: (0..t).collect(), demand: 1 }];
    PackingInstance::new(n as usize, edges, capacity, sessions).expect("valid packing instance")
}
