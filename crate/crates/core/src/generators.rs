// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Seeded random-graph generators and deterministic fixtures.
//!
//! All random models draw from [`ChaCha8Rng`] seeded through
//! `SeedableRng::seed_from_u64`, so a given spec and seed always yields the
//! same edge set on every platform.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Name of the random stream, recorded in run manifests.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/seed_from_u64 (rand_chacha 0.9)";

pub type GraphRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GraphRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent sub-seed for stream `index` (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Graph model with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "lowercase")]
pub enum Model {
    /// G(n, p).
    Er {
        n: usize,
        p: f64,
    },
    /// Ring lattice of even degree `k` with rewiring probability `p`.
    Ws {
        n: usize,
        k: usize,
        p: f64,
    },
    /// Preferential attachment with `m` edges per new node, grown from a star.
    Ba {
        n: usize,
        m: usize,
    },
    /// Boccaletti-Hwang-Latora growth from a clique of `n0` nodes.
    Bhl {
        n0: usize,
        m: usize,
        n: usize,
    },
    /// Hub plus `n` leaves.
    Star {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let check_p = |p: f64| -> Result<()> {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
            }
        };
        match *self {
            Model::Er { n, p } => {
                if n == 0 {
                    return bad("ER needs n >= 1".into());
                }
                check_p(p)
            }
            Model::Ws { n, k, p } => {
                if k == 0 || k % 2 != 0 || k >= n {
                    return bad(format!("WS needs an even k with 0 < k < n, got k={k}, n={n}"));
                }
                check_p(p)
            }
            Model::Ba { n, m } => {
                if m == 0 || m >= n {
                    return bad(format!("BA needs 1 <= m < n, got m={m}, n={n}"));
                }
                Ok(())
            }
            Model::Bhl { n0, m, n } => {
                if m == 0 || m > n0 || n0 > n {
                    return bad(format!("BHL needs 1 <= m <= n0 <= n, got n0={n0}, m={m}, n={n}"));
                }
                Ok(())
            }
            Model::Star { n } | Model::Complete { n } | Model::Path { n } | Model::Cycle { n } => {
                if n == 0 {
                    return bad("fixtures need n >= 1".into());
                }
                Ok(())
            }
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Model::Er { .. } | Model::Ws { .. } | Model::Ba { .. } | Model::Bhl { .. }
        )
    }

    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            Model::Er { n, p } => erdos_renyi(n, p, seed),
            Model::Ws { n, k, p } => watts_strogatz(n, k, p, seed),
            Model::Ba { n, m } => barabasi_albert(n, m, seed),
            Model::Bhl { n0, m, n } => bhl(n0, m, n, seed),
            Model::Star { n } => fixture(Fixture::Star, n),
            Model::Complete { n } => fixture(Fixture::Complete, n),
            Model::Path { n } => fixture(Fixture::Path, n),
            Model::Cycle { n } => fixture(Fixture::Cycle, n),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Model::Er { n, p } => write!(f, "er_n{n}_p{p}"),
            Model::Ws { n, k, p } => write!(f, "ws_n{n}_k{k}_p{p}"),
            Model::Ba { n, m } => write!(f, "ba_n{n}_m{m}"),
            Model::Bhl { n0, m, n } => write!(f, "bhl_n0{n0}_m{m}_n{n}"),
            Model::Star { n } => write!(f, "star_{n}"),
            Model::Complete { n } => write!(f, "complete_{n}"),
            Model::Path { n } => write!(f, "path_{n}"),
            Model::Cycle { n } => write!(f, "cycle_{n}"),
        }
    }
}

/// Serializable `{model, params, seed}` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub model: Model,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(model: Model, seed: u64) -> Self {
        GeneratorSpec { model, seed }
    }

    pub fn generate(&self) -> Result<Graph> {
        self.model.generate(self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Star,
    Complete,
    Path,
    Cycle,
}

/// Deterministic fixture graphs. `star(n)` has a hub (id 0) and `n` leaves;
/// the others have `n` nodes.
pub fn fixture(kind: Fixture, n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("fixtures need n >= 1".into()));
    }
    match kind {
        Fixture::Star => Graph::from_edges(n + 1, (1..=n).map(|leaf| (0, leaf))),
        Fixture::Complete => Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
        Fixture::Path => Graph::from_edges(n, (1..n).map(|v| (v - 1, v))),
        Fixture::Cycle => {
            let closing = if n >= 3 { Some((n - 1, 0)) } else { None };
            Graph::from_edges(n, (1..n).map(|v| (v - 1, v)).chain(closing))
        }
    }
}

fn adjacency_from_sets(sets: Vec<BTreeSet<usize>>) -> Graph {
    let n = sets.len();
    let adjacency = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    Graph::from_adjacency_unchecked((0..n).map(|i| i.to_string()).collect(), adjacency)
}

/// G(n, p): every pair independently with probability `p`.
///
/// Uses geometric skipping over the pair sequence, so the cost is linear in
/// the number of generated edges.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    Model::Er { n, p }.validate()?;
    let mut edges = Vec::new();
    if p >= 1.0 {
        return fixture(Fixture::Complete, n);
    }
    if p > 0.0 {
        let mut rng = rng_from_seed(seed);
        let log_q = (-p).ln_1p();
        // pairs (v, w) with w < v, enumerated row by row
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.random();
            let skip = ((-r).ln_1p() / log_q).floor();
            w = w
                .saturating_add(1)
                .saturating_add(if skip >= i64::MAX as f64 { i64::MAX } else { skip as i64 });
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Watts-Strogatz small world.
///
/// Starts from the ring lattice where node `u` links to `u+1..=u+k/2`. In a
/// single pass over the lattice offsets, each edge `(u, u+j)` is rewired with
/// probability `p` to `(u, w)` for a uniform `w` that is neither `u` nor an
/// existing neighbor of `u`.
pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    Model::Ws { n, k, p }.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut sets = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            sets[u].insert(v);
            sets[v].insert(u);
        }
    }
    if p > 0.0 {
        for j in 1..=k / 2 {
            for u in 0..n {
                let v = (u + j) % n;
                if !rng.random_bool(p) {
                    continue;
                }
                if sets[u].len() >= n - 1 {
                    continue;
                }
                let mut w = rng.random_range(0..n);
                while w == u || sets[u].contains(&w) {
                    w = rng.random_range(0..n);
                }
                sets[u].remove(&v);
                sets[v].remove(&u);
                sets[u].insert(w);
                sets[w].insert(u);
            }
        }
    }
    Ok(adjacency_from_sets(sets))
}

/// Barabasi-Albert preferential attachment seeded with a star on `m + 1`
/// nodes (hub 0).
///
/// Each new node draws `m` distinct targets with probability proportional
/// to current degree; duplicate draws are rejected and redrawn.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    Model::Ba { n, m }.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    // every node appears once per incident edge end
    let mut ends: Vec<usize> = Vec::with_capacity(2 * m * n);
    for leaf in 1..=m {
        adjacency[0].push(leaf);
        adjacency[leaf].push(0);
        ends.push(0);
        ends.push(leaf);
    }
    let mut chosen = vec![false; n];
    let mut targets = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = ends[rng.random_range(0..ends.len())];
            if !chosen[t] {
                chosen[t] = true;
                targets.push(t);
            }
        }
        for &t in &targets {
            chosen[t] = false;
            adjacency[v].push(t);
            adjacency[t].push(v);
            ends.push(t);
            ends.push(v);
        }
    }
    Ok(Graph::from_adjacency_unchecked(
        (0..n).map(|i| i.to_string()).collect(),
        adjacency,
    ))
}

/// Boccaletti-Hwang-Latora growing network.
///
/// The core is a complete graph on `n0` nodes. Every new node picks an
/// existing node uniformly at random and links to it and to `m - 1` of its
/// neighbors chosen uniformly without replacement. Degrees never drop below
/// `m`, so the neighborhood is always large enough.
pub fn bhl(n0: usize, m: usize, n: usize, seed: u64) -> Result<Graph> {
    Model::Bhl { n0, m, n }.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in 0..n0 {
        for v in (u + 1)..n0 {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    let mut picked = Vec::with_capacity(m);
    for v in n0..n {
        let anchor = rng.random_range(0..v);
        picked.clear();
        picked.push(anchor);
        // partial Fisher-Yates over a copy of the anchor's neighbor list
        let mut pool = adjacency[anchor].clone();
        for slot in 0..(m - 1) {
            let pick = rng.random_range(slot..pool.len());
            pool.swap(slot, pick);
            picked.push(pool[slot]);
        }
        for &t in &picked {
            adjacency[v].push(t);
            adjacency[t].push(v);
        }
    }
    Ok(Graph::from_adjacency_unchecked(
        (0..n).map(|i| i.to_string()).collect(),
        adjacency,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    fn assert_simple_symmetric(g: &Graph) {
        for u in 0..g.n() {
            let list = g.neighbors(u);
            assert!(list.windows(2).all(|w| w[0] < w[1]), "unsorted or duplicate at {u}");
            for &v in list {
                assert_ne!(u, v);
                assert!(g.neighbors(v).binary_search(&u).is_ok());
            }
        }
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn er_extremes() {
        let empty = erdos_renyi(5, 0.0, 1).unwrap();
        assert_eq!((empty.n(), empty.edge_count()), (5, 0));
        let full = erdos_renyi(5, 1.0, 1).unwrap();
        assert_eq!(full.edge_count(), 10);
    }

    #[test]
    fn er_edge_count_matches_binomial_mean() {
        let pairs = 1000.0 * 999.0 / 2.0;
        let p = 0.01;
        let reps = 100;
        let total: usize = (0..reps).map(|s| erdos_renyi(1000, p, s).unwrap().edge_count()).sum();
        let mean = total as f64 / reps as f64;
        let sigma_of_mean = (pairs * p * (1.0 - p) / reps as f64).sqrt();
        assert!((mean - pairs * p).abs() < 3.0 * sigma_of_mean, "mean {mean}");
    }

    #[test]
    fn er_pairs_are_uniform() {
        // every pair of a 6-node graph should show up about equally often
        let reps = 4000;
        let mut hits = vec![0usize; 36];
        for s in 0..reps {
            for (u, v) in erdos_renyi(6, 0.3, s).unwrap().edges() {
                hits[u * 6 + v] += 1;
            }
        }
        let sd = (reps as f64 * 0.3 * 0.7).sqrt();
        for u in 0..6 {
            for v in (u + 1)..6 {
                let h = hits[u * 6 + v] as f64;
                assert!((h - reps as f64 * 0.3).abs() < 4.0 * sd, "pair ({u},{v}) hit {h}");
            }
        }
    }

    #[test]
    fn ws_without_rewiring_is_the_lattice() {
        let ring = watts_strogatz(6, 2, 0.0, 9).unwrap();
        assert_eq!(ring, fixture(Fixture::Cycle, 6).unwrap());
        let lattice = watts_strogatz(6, 4, 0.0, 9).unwrap();
        assert!(lattice.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn ws_rewiring_preserves_edge_count() {
        let g = watts_strogatz(2000, 20, 0.3, 5).unwrap();
        assert_eq!(g.edge_count(), 2000 * 20 / 2);
        assert_simple_symmetric(&g);
    }

    #[test]
    fn ws_rejects_odd_or_large_k() {
        assert!(watts_strogatz(10, 3, 0.1, 0).is_err());
        assert!(watts_strogatz(10, 10, 0.1, 0).is_err());
        assert!(watts_strogatz(10, 0, 0.1, 0).is_err());
    }

    #[test]
    fn ba_from_star_only() {
        let g = barabasi_albert(6, 5, 3).unwrap();
        assert_eq!(g, fixture(Fixture::Star, 5).unwrap());
    }

    #[test]
    fn ba_edge_count_and_connectivity() {
        let g = barabasi_albert(100, 3, 11).unwrap();
        assert_eq!(g.edge_count(), 3 + (100 - 4) * 3);
        assert!(g.is_connected());
        assert_simple_symmetric(&g);
    }

    #[test]
    fn ba_rejects_m_at_least_n() {
        assert!(barabasi_albert(5, 5, 0).is_err());
        assert!(barabasi_albert(5, 0, 0).is_err());
    }

    #[test]
    fn bhl_core_only() {
        let g = bhl(5, 2, 5, 0).unwrap();
        assert_eq!(g, fixture(Fixture::Complete, 5).unwrap());
    }

    #[test]
    fn bhl_size_and_degrees() {
        let g = bhl(100, 20, 4000, 2).unwrap();
        assert_eq!(g.n(), 4000);
        assert_eq!(g.edge_count(), 100 * 99 / 2 + 3900 * 20);
        assert!(g.degrees().iter().all(|&d| d >= 20));
        assert!(g.is_connected());
        assert_simple_symmetric(&g);
    }

    #[test]
    fn bhl_rejects_bad_order() {
        assert!(bhl(5, 6, 10, 0).is_err());
        assert!(bhl(11, 2, 10, 0).is_err());
    }

    #[test]
    fn fixtures() {
        let s = fixture(Fixture::Star, 5).unwrap();
        assert_eq!((s.n(), s.edge_count(), s.degree(0)), (6, 5, 5));
        let c = fixture(Fixture::Cycle, 4).unwrap();
        assert!(c.degrees().iter().all(|&d| d == 2));
        assert_eq!(c.edge_count(), 4);
        assert_eq!(fixture(Fixture::Complete, 4).unwrap().edge_count(), 6);
        assert_eq!(fixture(Fixture::Path, 4).unwrap().edge_count(), 3);
        assert_eq!(fixture(Fixture::Cycle, 2).unwrap().edge_count(), 1);
        assert!(fixture(Fixture::Path, 0).is_err());
    }

    #[test]
    fn generators_are_reproducible() {
        let models = [
            Model::Er { n: 300, p: 0.05 },
            Model::Ws { n: 300, k: 6, p: 0.2 },
            Model::Ba { n: 300, m: 4 },
            Model::Bhl { n0: 10, m: 3, n: 300 },
        ];
        for model in models {
            let a = model.generate(77).unwrap();
            let b = model.generate(77).unwrap();
            let c = model.generate(78).unwrap();
            assert_eq!(edge_set(&a), edge_set(&b), "{model}");
            assert_ne!(edge_set(&a), edge_set(&c), "{model}");
            assert_simple_symmetric(&a);
        }
    }

    #[test]
    fn spec_json_shape() {
        let spec = GeneratorSpec::new(Model::Ba { n: 100, m: 3 }, 42);
        let json = serde_json::to_value(spec).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"model": "ba", "params": {"n": 100, "m": 3}, "seed": 42})
        );
        let back: GeneratorSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: BTreeSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
