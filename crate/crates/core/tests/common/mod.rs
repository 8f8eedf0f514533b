#![allow(dead_code)]

use gradual_core::{OrderingPartition, Topology, WeightedFramework};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every ordered pair, self-loops included, is an attack with probability `density`.
pub fn random_topology<R: Rng>(rng: &mut R, n: usize, density: f64) -> Topology {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen::<f64>() < density {
                edges.push((a, b));
            }
        }
    }
    Topology::from_indices(n, &edges).unwrap()
}

/// Acyclic: only attacks from lower to higher index.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, density: f64) -> Topology {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < density {
                edges.push((a, b));
            }
        }
    }
    Topology::from_indices(n, &edges).unwrap()
}

/// n ∈ 1..=max_n, density ~ U(0,1), weights ~ U(0,1).
pub fn random_framework<R: Rng>(rng: &mut R, max_n: usize) -> WeightedFramework {
    let n = rng.gen_range(1..=max_n);
    let density = rng.gen::<f64>();
    let t = random_topology(rng, n, density);
    let w = (0..n).map(|_| rng.gen::<f64>()).collect();
    WeightedFramework::new(t, w).unwrap()
}

/// Shuffles the arguments and cuts them into a random number of non-empty classes.
pub fn random_partition<R: Rng>(rng: &mut R, topology: &Topology) -> OrderingPartition {
    let mut ids: Vec<String> = topology.ids().to_vec();
    ids.shuffle(rng);
    let mut classes: Vec<Vec<String>> = Vec::new();
    for id in ids {
        match classes.last_mut() {
            Some(c) if rng.gen_bool(0.35) => c.push(id),
            _ => classes.push(vec![id]),
        }
    }
    OrderingPartition::new(classes).unwrap()
}

pub fn small_framework() -> WeightedFramework {
    WeightedFramework::build(
        &["a0", "a1", "a2", "a3"],
        &[("a0", "a2"), ("a1", "a1"), ("a1", "a2"), ("a2", "a2"), ("a3", "a2")],
        &[0.43, 0.39, 0.92, 0.3],
    )
    .unwrap()
}

pub fn max_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
