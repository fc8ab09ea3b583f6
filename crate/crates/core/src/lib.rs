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

//! Ksi-centrality analysis of complex networks.
//!
//! The crate covers edge-list ingestion ([`graph`]), seeded generators for
//! Erdos-Renyi, Watts-Strogatz, Barabasi-Albert and Boccaletti-Hwang-Latora
//! graphs ([`generators`]), the centralities themselves ([`centrality`]),
//! closed-form Erdos-Renyi expectations ([`er_theory`]), exact spectral and
//! Cheeger lower bounds ([`spectral`]), distribution statistics
//! ([`stats`]) and the Barabasi-Albert `m` calibration ([`calibration`]).
//!
//! ```
//! use ksigraph_core::{centrality_all, fixture, CentralityKind, Fixture};
//!
//! let star = fixture(Fixture::Star, 4).unwrap();
//! let ksi = centrality_all(&star, CentralityKind::Ksi);
//! assert_eq!(ksi.values, vec![1.0, 4.0, 4.0, 4.0, 4.0]);
//! ```

pub mod calibration;
pub mod centrality;
pub mod er_theory;
pub mod error;
pub mod generators;
pub mod graph;
pub mod spectral;
pub mod stats;

pub use calibration::{build_curve, default_m_grid, sample_xi_hat, CalibrationCurve, Inversion};
pub use centrality::{
    centrality_all, ksi, ksi_matrix, normalized_ksi, CentralityKind, CentralityTable, CentralityVector, GraphSummary,
};
pub use er_theory::{expected_boundary_edges, expected_normalized_ksi, sparse_asymptotic, ErExpectation, Estimate};
pub use error::{Error, Result};
pub use generators::{fixture, Fixture, GeneratorSpec, Model};
pub use graph::{load_edge_list, Graph, IngestOptions, IngestReport};
pub use spectral::{algebraic_connectivity, cheeger_number, verify_bounds, BoundsReport};
pub use stats::{classify, skewness, weibull_mle, DistributionSummary, SummaryOptions, Verdict};
