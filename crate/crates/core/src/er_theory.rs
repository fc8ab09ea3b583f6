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

//! Closed-form expectations for G(n, p) and a Monte-Carlo harness to check
//! them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{boundary_edge_counts, from_boundary, CentralityKind};
use crate::error::{Error, Result};
use crate::generators::{derive_seed, erdos_renyi};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErExpectation {
    pub n: usize,
    pub p: f64,
    pub expected_boundary: f64,
    pub expected_normalized_ksi: f64,
}

impl ErExpectation {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        validate(n, p)?;
        Ok(ErExpectation {
            n,
            p,
            expected_boundary: expected_boundary_edges(n, p),
            expected_normalized_ksi: expected_normalized_ksi(n, p),
        })
    }
}

fn validate(n: usize, p: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `x^k` for `x` in `[0, 1]`, exact at the endpoints.
fn unit_pow(x: f64, k: usize) -> f64 {
    if k == 0 || x == 1.0 {
        1.0
    } else if x == 0.0 {
        0.0
    } else {
        (k as f64 * x.ln()).exp()
    }
}

/// `1 - (1 - p)^k` via `ln_1p`/`exp_m1`, which keeps precision for tiny `p`.
fn one_minus_complement_pow(p: f64, k: usize) -> f64 {
    if k == 0 || p == 0.0 {
        0.0
    } else if p == 1.0 {
        1.0
    } else {
        -(k as f64 * (-p).ln_1p()).exp_m1()
    }
}

/// Expected number of edges leaving a node's neighborhood:
/// `p (n-1) (1 + p (1-p) (n-2))`.
pub fn expected_boundary_edges(n: usize, p: f64) -> f64 {
    let n = n as f64;
    p * (n - 1.0) * (1.0 + p * (1.0 - p) * (n - 2.0))
}

/// Expected normalized ksi of any node (and of the graph average):
/// `p (1 - (1-p)^(n-1)) + (1 - p^n) / n`.
pub fn expected_normalized_ksi(n: usize, p: f64) -> f64 {
    p * one_minus_complement_pow(p, n - 1) + (1.0 - unit_pow(p, n)) / n as f64
}

/// Leading term `(1 + lambda (1 - e^-lambda)) / n` for `p = lambda / n`.
pub fn sparse_asymptotic(lambda: f64, n: usize) -> f64 {
    (1.0 - lambda * (-lambda).exp_m1()) / n as f64
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Estimate {
        let k = xs.len();
        let mean = xs.iter().sum::<f64>() / k as f64;
        let stderr = if k > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            stderr,
            samples: k,
        }
    }

    /// `|mean - target|` measured in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if self.stderr == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.stderr
        }
    }
}

/// Per-graph averages of the boundary count and of normalized ksi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErSimulation {
    pub boundary_edges: Estimate,
    pub normalized_ksi: Estimate,
}

/// Simulates `samples` independent G(n, p) graphs seeded from `seed`.
///
/// Each graph contributes its node-averaged boundary count and its average
/// normalized ksi; every node shares the same expectation, so these are
/// unbiased per-graph samples of both closed forms.
pub fn simulate(n: usize, p: f64, samples: usize, seed: u64) -> Result<ErSimulation> {
    validate(n, p)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let per_graph: Vec<(f64, f64)> = (0..samples as u64)
        .into_par_iter()
        .map(|s| -> Result<(f64, f64)> {
            let g = erdos_renyi(n, p, derive_seed(seed, s))?;
            let boundary = boundary_edge_counts(&g);
            let mean_boundary = boundary.iter().sum::<usize>() as f64 / n as f64;
            let xi_hat = from_boundary(&g, &boundary, CentralityKind::NormalizedKsi).average;
            Ok((mean_boundary, xi_hat))
        })
        .collect::<Result<_>>()?;
    let b: Vec<f64> = per_graph.iter().map(|x| x.0).collect();
    let x: Vec<f64> = per_graph.iter().map(|x| x.1).collect();
    Ok(ErSimulation {
        boundary_edges: Estimate::from_samples(&b),
        normalized_ksi: Estimate::from_samples(&x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::normalized_ksi;
    use crate::generators::{fixture, Fixture};

    #[test]
    fn boundary_extremes() {
        assert_eq!(expected_boundary_edges(17, 1.0), 16.0);
        assert_eq!(expected_boundary_edges(17, 0.0), 0.0);
        assert_eq!(expected_boundary_edges(10, 0.5), 13.5);
    }

    #[test]
    fn normalized_extremes() {
        let k2 = fixture(Fixture::Complete, 2).unwrap();
        assert_eq!(expected_normalized_ksi(2, 1.0), normalized_ksi(&k2, 0).unwrap());
        assert_eq!(expected_normalized_ksi(2, 1.0), 1.0);
        assert_eq!(expected_normalized_ksi(37, 0.0), 1.0 / 37.0);
    }

    #[test]
    fn normalized_at_100_03() {
        // 0.3 * (1 - 0.7^99) + (1 - 0.3^100) / 100
        let direct = 0.3 * (1.0 - 0.7f64.powi(99)) + (1.0 - 0.3f64.powi(100)) / 100.0;
        let v = expected_normalized_ksi(100, 0.3);
        assert!((v - direct).abs() < 1e-15);
        assert!((v - 0.30999).abs() < 1e-5);
    }

    #[test]
    fn tiny_p_keeps_precision() {
        // 1 - (1-p)^999 = 999 p - C(999,2) p^2 + ...
        let p = 1e-12;
        let exact = 999.0 * p - 999.0 * 998.0 / 2.0 * p * p;
        assert!((one_minus_complement_pow(p, 999) / exact - 1.0).abs() < 1e-12);
        assert_eq!(one_minus_complement_pow(1.0, 5), 1.0);
        assert_eq!(one_minus_complement_pow(0.3, 0), 0.0);
    }

    #[test]
    fn sparse_limit_values() {
        let expected = (2.0 - (-1.0f64).exp()) / 1000.0;
        assert!((sparse_asymptotic(1.0, 1000) - expected).abs() < 1e-15);
        assert!((sparse_asymptotic(1.0, 1000) - 0.0016321).abs() < 1e-7);
        assert!((sparse_asymptotic(1e-12, 50) - 1.0 / 50.0).abs() < 1e-15);
    }

    #[test]
    fn converges_to_p() {
        assert_eq!(expected_normalized_ksi(100, 1.0), 1.0);
        for p in [0.1, 0.5, 0.9] {
            let gaps: Vec<f64> = [100, 1000, 10_000]
                .iter()
                .map(|&n| (expected_normalized_ksi(n, p) - p).abs())
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "p={p}: {gaps:?}");
        }
    }

    #[test]
    fn boundary_monte_carlo_small() {
        let sim = simulate(10, 0.5, 10_000, 3).unwrap();
        assert!(sim.boundary_edges.z_score(13.5) < 3.0, "{:?}", sim.boundary_edges);
    }

    #[test]
    fn monte_carlo_grid() {
        for &n in &[50, 100] {
            for &p in &[0.1, 0.3, 0.5] {
                let sim = simulate(n, p, 400, 1000 + n as u64).unwrap();
                let e = ErExpectation::new(n, p).unwrap();
                assert!(
                    sim.normalized_ksi.z_score(e.expected_normalized_ksi) < 3.0,
                    "n={n} p={p} {sim:?}"
                );
                assert!(
                    sim.boundary_edges.z_score(e.expected_boundary) < 3.0,
                    "n={n} p={p} {sim:?}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ErExpectation::new(0, 0.5).is_err());
        assert!(ErExpectation::new(5, 1.5).is_err());
    }
}
