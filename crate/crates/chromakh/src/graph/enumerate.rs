//! Enumeration of connected graphs up to isomorphism by canonical
//! augmentation: every connected graph on n vertices arises from a
//! connected graph on n - 1 vertices by adding one vertex with a
//! nonempty neighborhood, so each level is generated from the previous
//! one and deduplicated through canonical keys.

use super::SimpleGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// All connected graphs on `v` vertices up to isomorphism, in a
/// deterministic order. Intended for sweep scales (`v <= 8`).
pub fn connected_graphs(v: usize) -> Vec<SimpleGraph> {
    assert!(v >= 1 && v <= 8, "enumeration is sized for 1 <= v <= 8");
    let mut level: Vec<SimpleGraph> = vec![SimpleGraph::new(1, []).unwrap()];
    for n in 2..=v {
        let mut seen: HashSet<(usize, Vec<u64>)> = HashSet::new();
        let mut next: Vec<SimpleGraph> = Vec::new();
        for g in &level {
            for nbrs in 1u64..(1 << (n - 1)) {
                let mut edges = g.edges().to_vec();
                let mut m = nbrs;
                while m != 0 {
                    let w = m.trailing_zeros() as usize;
                    m &= m - 1;
                    edges.push((w, n - 1));
                }
                let cand = SimpleGraph::new(n, edges).unwrap();
                let key = cand.canonical_key();
                if seen.insert(key.clone()) {
                    // Store the canonical representative so the output is
                    // independent of the augmentation path.
                    next.push(from_canonical_key(&key));
                }
            }
        }
        next.sort_by_key(|g| g.canonical_key().1);
        level = next;
    }
    level
}

fn from_canonical_key(key: &(usize, Vec<u64>)) -> SimpleGraph {
    let (n, rows) = key;
    let mut edges = Vec::new();
    for a in 0..*n {
        for b in a + 1..*n {
            if rows[a] & (1 << b) != 0 {
                edges.push((a, b));
            }
        }
    }
    SimpleGraph::new(*n, edges).unwrap()
}

/// Deterministic sample of `count` connected graphs on `v` vertices
/// (without replacement; the whole level if it is smaller).
pub fn sample_connected_graphs(v: usize, count: usize, seed: u64) -> Vec<SimpleGraph> {
    let all = connected_graphs(v);
    if all.len() <= count {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..all.len()).collect();
    idx.shuffle(&mut rng);
    let mut take: Vec<usize> = idx.into_iter().take(count).collect();
    take.sort_unstable();
    take.into_iter().map(|i| all[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequence() {
        // Connected graphs on 1..=6 vertices: 1, 1, 2, 6, 21, 112.
        let expected = [1usize, 1, 2, 6, 21, 112];
        for (i, &want) in expected.iter().enumerate() {
            assert_eq!(connected_graphs(i + 1).len(), want, "v = {}", i + 1);
        }
    }

    #[test]
    fn seven_vertex_count() {
        assert_eq!(connected_graphs(7).len(), 853);
    }

    #[test]
    fn all_enumerated_graphs_are_connected_and_canonical() {
        for g in connected_graphs(5) {
            assert!(g.is_connected());
            assert_eq!(g.canonical_key().1, g.adjacency());
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_connected_graphs(6, 10, 7);
        let b = sample_connected_graphs(6, 10, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
    }
}
