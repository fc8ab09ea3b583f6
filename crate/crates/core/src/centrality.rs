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

//! Ksi-centrality and normalized ksi-centrality.
//!
//! For a node `i` with degree `d` and neighborhood boundary count `b` (edges
//! with exactly one end in the neighborhood of `i`):
//!
//! ```text
//! ksi(i)            = b / d            (1 when d = 0)
//! normalized_ksi(i) = b / (d (n - d))  (1/n when d = 0)
//! ```
//!
//! Both are kept as exact integer fractions next to their `f64` value. The
//! production path iterates neighbor lists, costing `O(sum_i sum_{j in N(i)} d_j)`,
//! the same order as per-node clustering coefficients. [`ksi_matrix`] is a
//! dense cross-check for small graphs.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph accepted by [`ksi_matrix`].
pub const DEFAULT_DENSE_LIMIT: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralityKind {
    Ksi,
    NormalizedKsi,
}

/// Exact non-negative fraction `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Cross-multiplied equality, no rounding.
    pub fn same_as(self, other: Fraction) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub kind: CentralityKind,
    pub values: Vec<f64>,
    pub fractions: Vec<Fraction>,
    /// Arithmetic mean of `values` over all nodes.
    pub average: f64,
}

impl CentralityVector {
    fn from_fractions(kind: CentralityKind, fractions: Vec<Fraction>) -> Self {
        let values: Vec<f64> = fractions.iter().map(|f| f.value()).collect();
        let average = if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        CentralityVector {
            kind,
            values,
            fractions,
            average,
        }
    }
}

fn ksi_fraction(boundary: usize, degree: usize) -> Fraction {
    if degree == 0 {
        Fraction { num: 1, den: 1 }
    } else {
        Fraction {
            num: boundary as u64,
            den: degree as u64,
        }
    }
}

fn normalized_fraction(boundary: usize, degree: usize, n: usize) -> Fraction {
    if degree == 0 {
        Fraction { num: 1, den: n as u64 }
    } else {
        Fraction {
            num: boundary as u64,
            den: (degree * (n - degree)) as u64,
        }
    }
}

pub fn ksi(g: &Graph, i: usize) -> Result<f64> {
    let b = g.boundary_edge_count(i)?;
    Ok(ksi_fraction(b, g.degree(i)).value())
}

pub fn normalized_ksi(g: &Graph, i: usize) -> Result<f64> {
    let b = g.boundary_edge_count(i)?;
    Ok(normalized_fraction(b, g.degree(i), g.n()).value())
}

/// Boundary edge counts for every node, computed in parallel.
///
/// The output order is node order regardless of the thread pool size.
pub fn boundary_edge_counts(g: &Graph) -> Vec<usize> {
    (0..g.n())
        .into_par_iter()
        .map_init(|| vec![false; g.n()], |marks, i| g.boundary_with_marks(i, marks))
        .collect()
}

pub fn centrality_all(g: &Graph, kind: CentralityKind) -> CentralityVector {
    let boundary = boundary_edge_counts(g);
    from_boundary(g, &boundary, kind)
}

pub(crate) fn from_boundary(g: &Graph, boundary: &[usize], kind: CentralityKind) -> CentralityVector {
    let n = g.n();
    let fractions = boundary
        .iter()
        .enumerate()
        .map(|(i, &b)| match kind {
            CentralityKind::Ksi => ksi_fraction(b, g.degree(i)),
            CentralityKind::NormalizedKsi => normalized_fraction(b, g.degree(i), n),
        })
        .collect();
    CentralityVector::from_fractions(kind, fractions)
}

/// Average normalized ksi coefficient of a graph.
pub fn average_normalized_ksi(g: &Graph) -> f64 {
    centrality_all(g, CentralityKind::NormalizedKsi).average
}

/// Dense-matrix ksi: `(A^2 (J - A))_ii / (A^2)_ii` with `J` the all-ones matrix.
///
/// Integer arithmetic throughout, so the fractions can be compared exactly
/// with [`centrality_all`]. Refuses graphs above `dense_limit` nodes.
pub fn ksi_matrix(g: &Graph, dense_limit: usize) -> Result<CentralityVector> {
    let n = g.n();
    if n > dense_limit {
        return Err(Error::TooLarge {
            n,
            limit: dense_limit,
            what: "dense ksi matrix (use centrality_all)",
        });
    }
    let mut a = DMatrix::<i64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1;
        a[(v, u)] = 1;
    }
    let complement = DMatrix::<i64>::from_element(n, n, 1) - &a;
    let a2 = &a * &a;
    let numerators = &a2 * &complement;
    let fractions = (0..n)
        .map(|i| {
            let den = a2[(i, i)];
            if den == 0 {
                Fraction { num: 1, den: 1 }
            } else {
                Fraction {
                    num: numerators[(i, i)] as u64,
                    den: den as u64,
                }
            }
        })
        .collect();
    Ok(CentralityVector::from_fractions(CentralityKind::Ksi, fractions))
}

/// One CSV row of the per-node export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub node_label: String,
    pub degree: usize,
    pub boundary_edges: usize,
    pub ksi: f64,
    pub normalized_ksi: f64,
}

/// Both centralities with the raw counts, plus the graph-level averages.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityTable {
    pub records: Vec<NodeRecord>,
    pub ksi: CentralityVector,
    pub normalized_ksi: CentralityVector,
}

impl CentralityTable {
    pub fn compute(g: &Graph) -> Self {
        let boundary = boundary_edge_counts(g);
        let ksi = from_boundary(g, &boundary, CentralityKind::Ksi);
        let normalized_ksi = from_boundary(g, &boundary, CentralityKind::NormalizedKsi);
        let records = (0..g.n())
            .map(|i| NodeRecord {
                node_label: g.label(i).to_string(),
                degree: g.degree(i),
                boundary_edges: boundary[i],
                ksi: ksi.values[i],
                normalized_ksi: normalized_ksi.values[i],
            })
            .collect();
        CentralityTable {
            records,
            ksi,
            normalized_ksi,
        }
    }

    pub fn summary(&self, g: &Graph) -> GraphSummary {
        GraphSummary {
            n: g.n(),
            m_edges: g.edge_count(),
            avg_ksi: self.ksi.average,
            avg_normalized_ksi: self.normalized_ksi.average,
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        for record in &self.records {
            writer.serialize(record).map_err(csv_error)?;
        }
        writer.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m_edges: usize,
    pub avg_ksi: f64,
    pub avg_normalized_ksi: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, Fixture};

    #[test]
    fn star_leaf_and_center() {
        let n = 7;
        let g = fixture(Fixture::Star, n).unwrap();
        assert_eq!(ksi(&g, 0).unwrap(), 1.0);
        for leaf in 1..=n {
            assert_eq!(ksi(&g, leaf).unwrap(), n as f64);
            assert_eq!(normalized_ksi(&g, leaf).unwrap(), 1.0);
        }
        assert_eq!(normalized_ksi(&g, 0).unwrap(), 1.0);
    }

    #[test]
    fn cycle4_values() {
        let g = fixture(Fixture::Cycle, 4).unwrap();
        let k = centrality_all(&g, CentralityKind::Ksi);
        let nk = centrality_all(&g, CentralityKind::NormalizedKsi);
        assert!(k.values.iter().all(|&v| v == 2.0));
        assert_eq!(k.average, 2.0);
        assert_eq!(nk.average, 1.0);
    }

    #[test]
    fn complete_graph_normalized_is_one() {
        let g = fixture(Fixture::Complete, 6).unwrap();
        let nk = centrality_all(&g, CentralityKind::NormalizedKsi);
        assert!(nk.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn isolated_node_conventions() {
        let g = Graph::from_edges(4, [(0, 1)]).unwrap();
        assert_eq!(ksi(&g, 3).unwrap(), 1.0);
        assert_eq!(normalized_ksi(&g, 3).unwrap(), 0.25);
    }

    #[test]
    fn matrix_path_on_star_and_empty() {
        let g = fixture(Fixture::Star, 5).unwrap();
        let dense = ksi_matrix(&g, DEFAULT_DENSE_LIMIT).unwrap();
        let sparse = centrality_all(&g, CentralityKind::Ksi);
        for (a, b) in dense.fractions.iter().zip(&sparse.fractions) {
            assert_eq!(a, b);
        }
        let empty = Graph::from_edges(3, []).unwrap();
        let dense = ksi_matrix(&empty, DEFAULT_DENSE_LIMIT).unwrap();
        assert_eq!(dense.values, vec![1.0; 3]);
    }

    #[test]
    fn matrix_path_respects_limit() {
        let g = fixture(Fixture::Path, 10).unwrap();
        assert!(matches!(
            ksi_matrix(&g, 9),
            Err(Error::TooLarge { n: 10, limit: 9, .. })
        ));
    }

    #[test]
    fn csv_columns() {
        let g = fixture(Fixture::Star, 2).unwrap();
        let mut buf = Vec::new();
        CentralityTable::compute(&g).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "node_label,degree,boundary_edges,ksi,normalized_ksi"
        );
        assert_eq!(lines.next().unwrap(), "0,2,2,1.0,1.0");
        assert_eq!(lines.next().unwrap(), "1,1,2,2.0,1.0");
    }
}
