// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Undirected simple graph with optional integer edge weights.
//!
//! Nodes carry arbitrary 64-bit identifiers but are stored densely: the
//! identifier table is sorted, so the dense index order matches identifier
//! order and every neighbor list is sorted both ways.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

pub type NodeId = u64;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<NodeId>,
    adj: Vec<Vec<usize>>,
    weights: Vec<Vec<u64>>,
    edge_count: usize,
}

/// Counters produced while collapsing raw edges into a simple graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct BuildReport {
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
}

/// Accumulates raw (possibly repeated) edges. Duplicates sum into weights,
/// self-loops are dropped but their endpoint is kept as a node.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<NodeId>,
    edges: HashMap<(NodeId, NodeId), u64>,
    report: BuildReport,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: NodeId) -> &mut Self {
        self.nodes.push(id);
        self
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> &mut Self {
        self.add_weighted_edge(u, v, 1)
    }

    /// Zero weights are treated as 1.
    pub fn add_weighted_edge(&mut self, u: NodeId, v: NodeId, weight: u64) -> &mut Self {
        self.nodes.push(u);
        self.nodes.push(v);
        if u == v {
            self.report.self_loops_dropped += 1;
            return self;
        }
        let key = (u.min(v), u.max(v));
        let w = weight.max(1);
        match self.edges.get_mut(&key) {
            Some(existing) => {
                *existing += w;
                self.report.duplicates_merged += 1;
            }
            None => {
                self.edges.insert(key, w);
            }
        }
        self
    }

    pub fn report(&self) -> BuildReport {
        self.report
    }

    pub fn build(self) -> Graph {
        self.build_with_report().0
    }

    pub fn build_with_report(mut self) -> (Graph, BuildReport) {
        self.nodes.sort_unstable();
        self.nodes.dedup();
        let ids = self.nodes;
        let n = ids.len();
        let mut edges: Vec<((NodeId, NodeId), u64)> = self.edges.into_iter().collect();
        edges.sort_unstable();

        let index = |id: NodeId| ids.binary_search(&id).expect("edge endpoint registered");
        let mut adj = vec![Vec::new(); n];
        let mut weights = vec![Vec::new(); n];
        for &((u, v), w) in &edges {
            let (iu, iv) = (index(u), index(v));
            adj[iu].push(iv);
            weights[iu].push(w);
            adj[iv].push(iu);
            weights[iv].push(w);
        }
        let graph = Graph {
            ids,
            adj,
            weights,
            edge_count: edges.len(),
        };
        (graph, self.report)
    }
}

impl Graph {
    /// Unit-weight graph from an edge slice.
    pub fn from_edges(edges: &[(NodeId, NodeId)]) -> Self {
        let mut b = GraphBuilder::new();
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        b.build()
    }

    /// Like [`Graph::from_edges`], with extra (possibly isolated) nodes.
    pub fn from_nodes_and_edges(nodes: &[NodeId], edges: &[(NodeId, NodeId)]) -> Self {
        let mut b = GraphBuilder::new();
        for &id in nodes {
            b.add_node(id);
        }
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        b.build()
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Sum of all edge weights; equals `edge_count` for unit-weight graphs.
    pub fn total_weight(&self) -> u64 {
        self.weights.iter().flatten().sum::<u64>() / 2
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.iter().flatten().any(|&w| w != 1)
    }

    /// Sorted node identifiers.
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn neighbor_weights(&self, index: usize) -> &[u64] {
        &self.weights[index]
    }

    pub fn neighbor_ids(&self, id: NodeId) -> Result<impl Iterator<Item = NodeId> + '_> {
        let i = self.index_of(id).ok_or(Error::NodeNotFound(id))?;
        Ok(self.adj[i].iter().map(|&j| self.ids[j]))
    }

    pub fn degree_at(&self, index: usize) -> usize {
        self.adj[index].len()
    }

    /// Unweighted degree of node `id`.
    pub fn degree(&self, id: NodeId) -> Result<usize> {
        self.index_of(id)
            .map(|i| self.adj[i].len())
            .ok_or(Error::NodeNotFound(id))
    }

    /// Weighted degree at a dense index.
    pub fn strength_at(&self, index: usize) -> u64 {
        self.weights[index].iter().sum()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.weight(u, v).is_some()
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u64> {
        let iu = self.index_of(u)?;
        let iv = self.index_of(v)?;
        let pos = self.adj[iu].binary_search(&iv).ok()?;
        Some(self.weights[iu][pos])
    }

    /// Each undirected edge once, as dense indices `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(u, nbrs)| {
            nbrs.iter()
                .zip(&self.weights[u])
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    /// Each undirected edge once, as identifiers `(u, v, w)` with `u < v`.
    pub fn edge_ids(&self) -> impl Iterator<Item = (NodeId, NodeId, u64)> + '_ {
        self.edges().map(|(u, v, w)| (self.ids[u], self.ids[v], w))
    }

    pub fn mean_degree(&self) -> f64 {
        if self.ids.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / self.ids.len() as f64
    }

    /// `2|E| / (n (n - 1))`, zero below two nodes.
    pub fn density(&self) -> f64 {
        let n = self.ids.len() as f64;
        if n < 2.0 {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / (n * (n - 1.0))
    }

    /// Connected components as sorted dense-index lists, largest first
    /// (ties by smallest member).
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.ids.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    /// Fraction of nodes in the largest connected component.
    pub fn largest_component_fraction(&self) -> f64 {
        if self.ids.is_empty() {
            return 0.0;
        }
        let largest = self.connected_components().first().map_or(0, Vec::len);
        largest as f64 / self.ids.len() as f64
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Subgraph induced by `ids` (unknown identifiers are ignored).
    pub fn induced_subgraph(&self, ids: &[NodeId]) -> Graph {
        let mut keep = vec![false; self.ids.len()];
        let mut b = GraphBuilder::new();
        for &id in ids {
            if let Some(i) = self.index_of(id) {
                keep[i] = true;
                b.add_node(id);
            }
        }
        for (u, v, w) in self.edges() {
            if keep[u] && keep[v] {
                b.add_weighted_edge(self.ids[u], self.ids[v], w);
            }
        }
        b.build()
    }
}
