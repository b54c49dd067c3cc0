use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

const MAX_ATTEMPTS: usize = 100_000;

/// Uniform random simple cubic graph on `n` vertices by the configuration
/// model: pair up 3n stubs uniformly, reject loops and repeated pairs,
/// try again. Same seed, same graph.
pub fn sample_cubic(n: usize, seed: u64) -> Result<Graph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Sampling(format!("cubic graphs need even n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..3 * n).map(|s| s / 3).collect();
    'attempt: for _ in 0..MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(3 * n / 2);
        for pair in stubs.chunks(2) {
            if pair[0] == pair[1] {
                continue 'attempt;
            }
            let e = Edge::new(pair[0], pair[1]);
            if edges.contains(&e) {
                continue 'attempt;
            }
            edges.push(e);
        }
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
        return Graph::from_edges(n, &pairs);
    }
    Err(Error::Sampling(format!(
        "no simple pairing after {MAX_ATTEMPTS} attempts"
    )))
}

/// `count` cubic graphs on `n` vertices; sample `i` uses the `i`-th seed
/// drawn from a generator seeded with `seed`.
pub fn sample_cubic_batch(n: usize, count: usize, seed: u64) -> Result<Vec<Graph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..count).map(|_| rng.gen()).collect();
    seeds.into_iter().map(|s| sample_cubic(n, s)).collect()
}

/// Random graph with maximum degree at most 3: a random edge budget is
/// filled greedily from a shuffled list of vertex pairs.
pub fn random_subcubic(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(&mut rng);
    let target = rng.gen_range(0..=3 * n / 2);
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for (a, b) in pairs {
        if edges.len() == target {
            break;
        }
        if deg[a] < 3 && deg[b] < 3 {
            deg[a] += 1;
            deg[b] += 1;
            edges.push((a, b));
        }
    }
    Graph::from_edges(n, &edges).expect("pairs are distinct and in range")
}
