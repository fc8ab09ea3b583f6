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

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestOptions {
    /// Lines starting with any of these prefixes are skipped.
    pub comment_prefixes: Vec<String>,
    /// Silently drop `u u` lines. When false a self-loop is a parse error.
    pub drop_self_loops: bool,
    /// Keep only the largest connected component.
    pub take_lcc: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            comment_prefixes: vec!["#".to_string(), "%".to_string()],
            drop_self_loops: true,
            take_lcc: false,
        }
    }
}

/// Bookkeeping about what ingestion skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub lines: usize,
    pub comment_lines: usize,
    pub blank_lines: usize,
    pub edge_lines: usize,
    pub duplicate_edges: usize,
    pub self_loops: usize,
    /// Nodes removed by the largest-component restriction.
    pub nodes_outside_lcc: usize,
}

impl IngestReport {
    /// Edge lines that did not produce a new edge.
    pub fn dropped_lines(&self) -> usize {
        self.duplicate_edges + self.self_loops
    }
}

/// Reads a whitespace separated edge list.
///
/// The first two tokens of every non-comment line are endpoint labels; any
/// further tokens (weights, timestamps) are ignored. Labels get dense ids in
/// order of first appearance.
pub fn load_edge_list<R: BufRead>(reader: R, opts: &IngestOptions) -> Result<(Graph, IngestReport)> {
    let mut report = IngestReport::default();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut adjacency: Vec<Vec<usize>> = Vec::new();

    let mut intern = |label: &str, labels: &mut Vec<String>, adjacency: &mut Vec<Vec<usize>>| -> usize {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        ids.insert(label.to_string(), id);
        labels.push(label.to_string());
        adjacency.push(Vec::new());
        id
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        report.lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            report.blank_lines += 1;
            continue;
        }
        if opts
            .comment_prefixes
            .iter()
            .any(|p| !p.is_empty() && trimmed.starts_with(p.as_str()))
        {
            report.comment_lines += 1;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two endpoint labels, found {trimmed:?}"),
                })
            }
        };
        report.edge_lines += 1;
        if a == b {
            if opts.drop_self_loops {
                report.self_loops += 1;
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop on node {a:?}"),
            });
        }
        let u = intern(a, &mut labels, &mut adjacency);
        let v = intern(b, &mut labels, &mut adjacency);
        adjacency[u].push(v);
        adjacency[v].push(u);
    }

    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let graph = Graph::from_adjacency_unchecked(labels, adjacency);
    report.duplicate_edges = report.edge_lines - report.self_loops - graph.edge_count();

    if opts.take_lcc {
        let lcc = graph.largest_connected_component();
        report.nodes_outside_lcc = graph.n() - lcc.n();
        return Ok((lcc, report));
    }
    Ok((graph, report))
}

/// Writes one `label label` line per edge, lower id first.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    for (u, v) in graph.edges() {
        writeln!(out, "{} {}", graph.label(u), graph.label(v))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, opts: &IngestOptions) -> Result<(Graph, IngestReport)> {
        load_edge_list(text.as_bytes(), opts)
    }

    #[test]
    fn duplicates_collapse() {
        let (g, report) = load("a b\nb c\na b", &IngestOptions::default()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.duplicate_edges, 1);
        assert_eq!(g.labels(), &["a", "b", "c"]);
    }

    #[test]
    fn reverse_duplicates_collapse() {
        let (g, report) = load("a b\nb a\n", &IngestOptions::default()).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.dropped_lines(), 1);
    }

    #[test]
    fn comment_and_self_loop() {
        let (g, report) = load("# hdr\n1 2\n2 2", &IngestOptions::default()).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.comment_lines, 1);
        assert_eq!(report.self_loops, 1);
    }

    #[test]
    fn self_loop_is_an_error_when_not_dropped() {
        let opts = IngestOptions {
            drop_self_loops: false,
            ..Default::default()
        };
        let err = load("1 2\n2 2\n", &opts).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn take_lcc_keeps_the_path() {
        let opts = IngestOptions {
            take_lcc: true,
            ..Default::default()
        };
        let (g, report) = load("a b\nc d\nd e\n", &opts).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.labels(), &["c", "d", "e"]);
        assert_eq!(report.nodes_outside_lcc, 2);
    }

    #[test]
    fn crlf_percent_comments_and_extra_columns() {
        let (g, _) = load("% konect\r\n1 2 0.5 1700000\r\n2 3\r\n\r\n", &IngestOptions::default()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.labels(), &["1", "2", "3"]);
    }

    #[test]
    fn short_line_reports_line_number() {
        let err = load("1 2\n# c\n3\n", &IngestOptions::default()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            load("# only\n\n", &IngestOptions::default()),
            Err(Error::EmptyGraph)
        ));
        assert!(matches!(
            load("5 5\n", &IngestOptions::default()),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn loading_twice_is_identical() {
        let text = "x y\ny z\nz x\nq x\n";
        let a = load(text, &IngestOptions::default()).unwrap();
        let b = load(text, &IngestOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn write_then_load_preserves_edges() {
        let (g, _) = load("a b\nb c\nc a\nc d\n", &IngestOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let (h, _) = load_edge_list(buf.as_slice(), &IngestOptions::default()).unwrap();
        assert_eq!(g, h);
    }
}
