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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph with {n} nodes exceeds the limit of {limit} for {what}")]
    TooLarge { n: usize, limit: usize, what: &'static str },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("target {target} outside the calibrated range [{low}, {high}]")]
    OutOfRange { target: f64, low: f64, high: f64 },

    #[error("calibration failure: {0}")]
    Calibration(String),
}

impl Error {
    /// True for errors caused by bad user input rather than by the
    /// numerical domain (range, convergence, degenerate data).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Io(_)
                | Error::Parse { .. }
                | Error::EmptyGraph
                | Error::NodeOutOfRange { .. }
                | Error::InvalidParameter(_)
        )
    }
}
