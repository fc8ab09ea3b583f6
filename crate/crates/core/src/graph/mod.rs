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

//! Immutable simple undirected graphs with dense node ids.

mod ingest;

pub use ingest::{load_edge_list, write_edge_list, IngestOptions, IngestReport};

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Simple undirected graph.
///
/// Node ids are dense (`0..n`). Each node keeps a sorted neighbor list and
/// the original string label it was read with. Instances are immutable once
/// built and can be shared freely between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<String>,
    m_edges: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes labelled `"0"..` from an edge iterator.
    ///
    /// Duplicate edges collapse and self-loops are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_labelled_edges(labels, edges)
    }

    /// Same as [`Graph::from_edges`] with caller supplied labels.
    pub fn from_labelled_edges<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_adjacency_unchecked(labels, adjacency))
    }

    /// Sorts and dedups raw (symmetric) neighbor lists.
    pub(crate) fn from_adjacency_unchecked(labels: Vec<String>, mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut twice_m = 0;
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        debug_assert_eq!(twice_m % 2, 0);
        Graph {
            adjacency,
            labels,
            m_edges: twice_m / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m_edges
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub(crate) fn check_node(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: i, n: self.n() })
        }
    }

    /// Number of edges with exactly one endpoint in the neighborhood of `i`.
    ///
    /// Node `i` itself lies outside its own neighborhood, so the `d_i` edges
    /// back to `i` are part of the count.
    pub fn boundary_edge_count(&self, i: usize) -> Result<usize> {
        self.check_node(i)?;
        let mut marks = vec![false; self.n()];
        Ok(self.boundary_with_marks(i, &mut marks))
    }

    /// Neighbor-iteration kernel. `marks` must be all-false on entry and is
    /// restored to all-false on exit.
    pub(crate) fn boundary_with_marks(&self, i: usize, marks: &mut [bool]) -> usize {
        let hood = &self.adjacency[i];
        for &j in hood {
            marks[j] = true;
        }
        let mut count = 0;
        for &j in hood {
            count += self.adjacency[j].iter().filter(|&&k| !marks[k]).count();
        }
        for &j in hood {
            marks[j] = false;
        }
        count
    }

    /// Component id per node; components are numbered in order of their
    /// smallest member.
    pub fn connected_components(&self) -> (usize, Vec<usize>) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let mut next = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        (next, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.connected_components().0 == 1
    }

    /// Induced subgraph on the largest connected component.
    ///
    /// Ties go to the component containing the smallest node id. Relative
    /// node order and labels are preserved.
    pub fn largest_connected_component(&self) -> Graph {
        let (count, comp) = self.connected_components();
        if count <= 1 {
            return self.clone();
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let mut best = 0;
        for c in 1..count {
            if sizes[c] > sizes[best] {
                best = c;
            }
        }
        let keep: Vec<bool> = comp.iter().map(|&c| c == best).collect();
        self.induced_subgraph(&keep)
    }

    /// Subgraph induced by the nodes with `keep[i] == true`.
    pub fn induced_subgraph(&self, keep: &[bool]) -> Graph {
        let mut new_id = vec![usize::MAX; self.n()];
        let mut labels = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            new_id[i] = labels.len();
            labels.push(self.labels[i].clone());
        }
        let adjacency = (0..self.n())
            .filter(|&i| keep[i])
            .map(|i| {
                self.adjacency[i]
                    .iter()
                    .filter(|&&j| keep[j])
                    .map(|&j| new_id[j])
                    .collect()
            })
            .collect();
        Graph::from_adjacency_unchecked(labels, adjacency)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn boundary_of_star_center_counts_every_spoke() {
        assert_eq!(star(5).boundary_edge_count(0).unwrap(), 5);
    }

    #[test]
    fn boundary_on_four_cycle() {
        let g = cycle(4);
        for i in 0..4 {
            assert_eq!(g.boundary_edge_count(i).unwrap(), 4);
        }
    }

    #[test]
    fn boundary_on_k4() {
        let g = complete(4);
        for i in 0..4 {
            assert_eq!(g.boundary_edge_count(i).unwrap(), 3);
        }
    }

    #[test]
    fn boundary_of_isolated_node_is_zero() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.boundary_edge_count(2).unwrap(), 0);
    }

    #[test]
    fn boundary_rejects_bad_node() {
        let g = cycle(4);
        assert!(matches!(
            g.boundary_edge_count(4),
            Err(Error::NodeOutOfRange { node: 4, n: 4 })
        ));
    }

    #[test]
    fn construction_collapses_duplicates_and_loops() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn lcc_of_connected_graph_is_identity() {
        let g = cycle(5);
        assert_eq!(g.largest_connected_component(), g);
    }

    #[test]
    fn lcc_picks_three_node_path() {
        let labels = ["a", "b", "c", "d", "e"].map(String::from).to_vec();
        let g = Graph::from_labelled_edges(labels, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let lcc = g.largest_connected_component();
        assert_eq!(lcc.n(), 3);
        assert_eq!(lcc.edge_count(), 2);
        assert_eq!(lcc.labels(), &["c", "d", "e"]);
        assert_eq!(lcc.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn lcc_of_isolated_nodes_is_first_singleton() {
        let g = Graph::from_edges(3, []).unwrap();
        let lcc = g.largest_connected_component();
        assert_eq!(lcc.n(), 1);
        assert_eq!(lcc.label(0), "0");
    }

    #[test]
    fn lcc_tie_goes_to_smallest_id() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1)]).unwrap();
        assert_eq!(g.largest_connected_component().labels(), &["0", "1"]);
    }
}
