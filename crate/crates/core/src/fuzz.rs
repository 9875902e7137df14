//! Seeded random instances for property testing and the `verify` command:
//! connected graphs with rational conductances, disjoint boundary sets, and
//! valid cutset families built from threshold cuts of a random potential.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::electric::WeightedGraph;
use crate::nashwilliams::{proportional_allocation, Allocation, Cutset};
use crate::Rat;

/// A random graph with boundary sets, cutsets and a valid proportional
/// allocation; everything determined by the seed.
#[derive(Debug, Clone)]
pub struct FuzzInstance {
    pub graph: WeightedGraph,
    pub source: Vec<usize>,
    pub sink: Vec<usize>,
    pub cutsets: Vec<Cutset>,
    pub weights: Vec<Rat>,
    pub allocation: Allocation<Rat>,
}

fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(BigInt::from(rng.gen_range(1..=9)), BigInt::from(rng.gen_range(1..=9)))
}

fn graph_with_boundary(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
) -> (WeightedGraph, Vec<usize>, Vec<usize>) {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let mut edges = Vec::new();
    // random spanning tree keeps the graph connected
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, small_rat(rng)));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v, small_rat(rng)));
        }
    }
    let g = WeightedGraph::new(n, edges);
    // disjoint nonempty boundary sets from a shuffled vertex list
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let a_size = rng.gen_range(1..=(n / 2).max(1));
    let b_size = rng.gen_range(1..=(n - a_size).min(n / 2).max(1));
    let source = order[..a_size].to_vec();
    let sink = order[a_size..a_size + b_size].to_vec();
    (g, source, sink)
}

/// A random connected graph with disjoint nonempty boundary sets, up to
/// `max_vertices` vertices.
pub fn random_graph(seed: u64, max_vertices: usize) -> (WeightedGraph, Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    graph_with_boundary(&mut rng, max_vertices)
}

/// A full instance: graph, boundaries, and 1..=4 threshold cutsets of a
/// random potential (0 on the source, 1 on the sink), with random positive
/// weights and the proportional allocation.
pub fn random_instance(seed: u64, max_vertices: usize) -> FuzzInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (graph, source, sink) = graph_with_boundary(&mut rng, max_vertices);
    // random potential; every source-to-sink path crosses each threshold,
    // so each threshold's crossing edges form a genuine cutset
    let mut h = alloc::vec![0.0f64; graph.n];
    for v in 0..graph.n {
        h[v] = rng.gen_range(0.05..0.95);
    }
    for &v in &source {
        h[v] = 0.0;
    }
    for &v in &sink {
        h[v] = 1.0;
    }
    let count = rng.gen_range(1..=4);
    let mut cutsets = Vec::new();
    let mut weights = Vec::new();
    for id in 0..count {
        let theta = rng.gen_range(0.01..1.0);
        let edges: BTreeSet<usize> = graph
            .edges
            .iter()
            .enumerate()
            .filter(|(_, (u, v, _))| h[*u].min(h[*v]) < theta && theta <= h[*u].max(h[*v]))
            .map(|(e, _)| e)
            .collect();
        cutsets.push(Cutset { id, edges, label: None });
        weights.push(small_rat(&mut rng));
    }
    let allocation = proportional_allocation(&graph, &cutsets, &weights).unwrap();
    FuzzInstance { graph, source, sink, cutsets, weights, allocation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electric::{effective_resistance_exact, Resistance};
    use crate::nashwilliams::{validate_cutset, wnw_bound};

    #[test]
    fn deterministic_per_seed() {
        let a = random_instance(42, 24);
        let b = random_instance(42, 24);
        assert_eq!(a.graph.edges, b.graph.edges);
        assert_eq!(a.source, b.source);
        assert_eq!(a.allocation.entries, b.allocation.entries);
        let c = random_instance(43, 24);
        assert!(a.graph.edges != c.graph.edges || a.source != c.source);
    }

    #[test]
    fn boundaries_disjoint_and_nonempty() {
        for seed in 0..200 {
            let (g, a, b) = random_graph(seed, 32);
            assert!(!a.is_empty() && !b.is_empty());
            assert!(a.iter().all(|v| !b.contains(v)));
            assert!(a.iter().chain(&b).all(|&v| v < g.n));
        }
    }

    #[test]
    fn cutsets_are_valid() {
        for seed in 0..200 {
            let inst = random_instance(seed, 32);
            for cs in &inst.cutsets {
                assert!(
                    validate_cutset(&inst.graph, &cs.edges, &inst.source, &inst.sink),
                    "seed={seed} cutset={}",
                    cs.id
                );
            }
        }
    }

    #[test]
    fn bounds_are_sound() {
        for seed in 0..120 {
            let inst = random_instance(seed, 24);
            let report =
                wnw_bound(&inst.graph, &inst.cutsets, &inst.allocation, Some(&inst.weights), None)
                    .unwrap();
            match effective_resistance_exact(&inst.graph, &inst.source, &inst.sink).unwrap() {
                Resistance::Finite(res) => assert!(report.bound <= res, "seed={seed}"),
                Resistance::Infinite => panic!("spanning tree keeps the graph connected"),
            }
        }
    }
}
