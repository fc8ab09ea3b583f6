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

//! Cheeger and algebraic-connectivity lower bounds on ksi values.
//!
//! Both graph constants are computed exactly: the Cheeger number by
//! enumerating every vertex subset, the algebraic connectivity by a dense
//! symmetric eigendecomposition of the Laplacian. The bounds checked are
//!
//! ```text
//! normalized_ksi(i) >= lambda2 / n                  every node
//! mean normalized_ksi >= lambda2 / n
//! ksi(i) >= h                                      when d_i <= n/2
//! normalized_ksi(i) >= h / (n - d_i)               when d_i <= n/2
//! normalized_ksi(i) >= h / d_i                     otherwise
//! ```
//!
//! The Cheeger comparisons are done on integer cross products.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{boundary_edge_counts, from_boundary, CentralityKind};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_EIGEN_LIMIT: usize = 2000;
pub const CHEEGER_LIMIT: usize = 22;

/// Relative slack on the floating point `lambda2 / n` comparisons.
pub const LAMBDA_TOLERANCE: f64 = 1e-9;

/// Second smallest Laplacian eigenvalue.
pub fn algebraic_connectivity(g: &Graph) -> Result<f64> {
    algebraic_connectivity_with_limit(g, DEFAULT_EIGEN_LIMIT)
}

pub fn algebraic_connectivity_with_limit(g: &Graph, limit: usize) -> Result<f64> {
    let n = g.n();
    if n > limit {
        return Err(Error::TooLarge {
            n,
            limit,
            what: "dense Laplacian eigensolve",
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "algebraic connectivity needs at least 2 nodes".into(),
        ));
    }
    let mut laplacian = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        laplacian[(i, i)] = g.degree(i) as f64;
    }
    for (u, v) in g.edges() {
        laplacian[(u, v)] = -1.0;
        laplacian[(v, u)] = -1.0;
    }
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(laplacian).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    // the spectrum is non-negative; clamp solver noise around zero
    Ok(eigenvalues[1].max(0.0))
}

/// `min |E(S, V\S)| / |S|` over non-empty `S` with `|S| <= n/2`, kept as the
/// minimizing cut and subset size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheegerNumber {
    pub cut: u64,
    pub size: u64,
}

impl CheegerNumber {
    pub fn value(&self) -> f64 {
        self.cut as f64 / self.size as f64
    }

    fn better_than(&self, other: &CheegerNumber) -> bool {
        let lhs = self.cut as u128 * other.size as u128;
        let rhs = other.cut as u128 * self.size as u128;
        lhs < rhs || (lhs == rhs && self.size < other.size)
    }
}

pub(crate) fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | (1 << w)))
        .collect()
}

/// Exhaustive Cheeger number, `n <= 22`.
pub fn cheeger_number(g: &Graph) -> Result<CheegerNumber> {
    let n = g.n();
    if n > CHEEGER_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: CHEEGER_LIMIT,
            what: "exhaustive Cheeger enumeration",
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter("Cheeger number needs at least 2 nodes".into()));
    }
    let adj = adjacency_masks(g);
    let half = (n / 2) as u32;
    let total: u64 = 1 << n;
    let chunk: u64 = 1 << 14;
    let chunks = total.div_ceil(chunk);

    let best_per_chunk: Vec<Option<CheegerNumber>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * chunk).max(1);
            let hi = ((c + 1) * chunk).min(total);
            let mut best: Option<CheegerNumber> = None;
            for mask in lo..hi {
                let mask = mask as u32;
                let size = mask.count_ones();
                if size > half {
                    continue;
                }
                let mut cut = 0;
                let mut rest = mask;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    cut += (adj[v] & !mask).count_ones();
                }
                let candidate = CheegerNumber {
                    cut: cut as u64,
                    size: size as u64,
                };
                if best.is_none_or(|b| candidate.better_than(&b)) {
                    best = Some(candidate);
                }
            }
            best
        })
        .collect();

    let mut best: Option<CheegerNumber> = None;
    for candidate in best_per_chunk.into_iter().flatten() {
        if best.is_none_or(|b| candidate.better_than(&b)) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("n >= 2 leaves at least one admissible subset"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeBounds {
    pub node: usize,
    pub label: String,
    pub degree: usize,
    pub boundary_edges: usize,
    pub ksi: f64,
    pub normalized_ksi: f64,
    /// `d_i <= n/2`, where the neighborhood itself is an admissible Cheeger set.
    pub cheeger_bound_applicable: bool,
    pub lambda_bound_satisfied: bool,
    /// `ksi(i) >= h`; vacuously true when not applicable.
    pub ksi_cheeger_satisfied: bool,
    pub normalized_cheeger_satisfied: bool,
    pub bounds_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m_edges: usize,
    pub connected: bool,
    pub lambda2: f64,
    pub cheeger: f64,
    pub cheeger_cut: u64,
    pub cheeger_set_size: u64,
    pub avg_normalized_ksi: f64,
    pub average_bound_satisfied: bool,
    pub violations: usize,
    pub nodes: Vec<NodeBounds>,
}

impl BoundsReport {
    pub fn all_satisfied(&self) -> bool {
        self.violations == 0
    }
}

fn at_least(value: f64, bound: f64) -> bool {
    value >= bound - LAMBDA_TOLERANCE * bound.abs().max(1.0)
}

/// Checks every node against both lower bounds.
pub fn verify_bounds(g: &Graph) -> Result<BoundsReport> {
    let n = g.n();
    let cheeger = cheeger_number(g)?;
    let lambda2 = algebraic_connectivity(g)?;
    let boundary = boundary_edge_counts(g);
    let ksi = from_boundary(g, &boundary, CentralityKind::Ksi);
    let nksi = from_boundary(g, &boundary, CentralityKind::NormalizedKsi);
    let lambda_bound = lambda2 / n as f64;
    let (h_cut, h_size) = (cheeger.cut as u128, cheeger.size as u128);

    let mut violations = 0;
    let nodes: Vec<NodeBounds> = (0..n)
        .map(|i| {
            let d = g.degree(i);
            let b = boundary[i] as u128;
            let applicable = 2 * d <= n;
            let lambda_ok = at_least(nksi.values[i], lambda_bound);
            let (ksi_ok, norm_ok) = if d == 0 {
                // ksi = 1 and normalized = 1/n by convention; only a
                // disconnected graph has isolated nodes, where h = 0
                (h_cut == 0, h_cut == 0)
            } else if applicable {
                // b/d >= cut/size, and b/(d(n-d)) >= cut/(size (n-d)) is the same inequality
                let ok = b * h_size >= h_cut * d as u128;
                (ok, ok)
            } else {
                // b/(d(n-d)) >= cut/(size d)  <=>  b size >= cut (n-d)
                (true, b * h_size >= h_cut * (n - d) as u128)
            };
            let ok = lambda_ok && ksi_ok && norm_ok;
            if !ok {
                violations += 1;
            }
            NodeBounds {
                node: i,
                label: g.label(i).to_string(),
                degree: d,
                boundary_edges: boundary[i],
                ksi: ksi.values[i],
                normalized_ksi: nksi.values[i],
                cheeger_bound_applicable: applicable,
                lambda_bound_satisfied: lambda_ok,
                ksi_cheeger_satisfied: ksi_ok,
                normalized_cheeger_satisfied: norm_ok,
                bounds_satisfied: ok,
            }
        })
        .collect();

    let average_bound_satisfied = at_least(nksi.average, lambda_bound);
    if !average_bound_satisfied {
        violations += 1;
    }
    Ok(BoundsReport {
        n,
        m_edges: g.edge_count(),
        connected: g.is_connected(),
        lambda2,
        cheeger: cheeger.value(),
        cheeger_cut: cheeger.cut,
        cheeger_set_size: cheeger.size,
        avg_normalized_ksi: nksi.average,
        average_bound_satisfied,
        violations,
        nodes,
    })
}
