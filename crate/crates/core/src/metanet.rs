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

//! Weighted community meta-network.
//!
//! Nodes are communities; an edge joins two communities when at least one
//! base edge crosses between them, weighted by the total base edge weight
//! crossing. Weight inside a community is kept per node in
//! `intra_edge_counts` rather than as a self-loop.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};
use crate::io::{load_edge_list, write_string, EdgeListDialect};
use crate::partition::CommunityStructure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaNetwork {
    /// Node identifiers are community identifiers; weights are `ω`.
    pub graph: Graph,
    pub community_sizes: BTreeMap<u32, u64>,
    pub intra_edge_counts: BTreeMap<u32, u64>,
    pub dropped_singletons: usize,
    /// Base weight on edges with an endpoint outside every retained community.
    pub unassigned_weight: u64,
    pub base_total_weight: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MetaNetworkOptions {
    /// Keep size-1 communities as meta-nodes.
    pub keep_singletons: bool,
}

/// Builds the meta-network, dropping singleton communities first.
pub fn build_meta_network(g: &Graph, cs: &CommunityStructure) -> Result<MetaNetwork> {
    build_meta_network_with(g, cs, MetaNetworkOptions::default())
}

pub fn build_meta_network_with(
    g: &Graph,
    cs: &CommunityStructure,
    opts: MetaNetworkOptions,
) -> Result<MetaNetwork> {
    cs.check_subset_of(g)?;
    let (cs, dropped) = if opts.keep_singletons {
        (cs.clone(), 0)
    } else {
        cs.without_singletons()
    };

    let mut owner: Vec<Option<u32>> = vec![None; g.node_count()];
    let mut community_sizes = BTreeMap::new();
    let mut intra_edge_counts = BTreeMap::new();
    for c in cs.communities() {
        community_sizes.insert(c.id, c.len() as u64);
        intra_edge_counts.insert(c.id, 0u64);
        for &m in &c.members {
            owner[g.index_of(m).expect("checked subset")] = Some(c.id);
        }
    }

    let mut omega: HashMap<(u32, u32), u64> = HashMap::new();
    let mut unassigned_weight = 0;
    for (u, v, w) in g.edges() {
        match (owner[u], owner[v]) {
            (Some(a), Some(b)) if a == b => *intra_edge_counts.get_mut(&a).unwrap() += w,
            (Some(a), Some(b)) => *omega.entry((a.min(b), a.max(b))).or_insert(0) += w,
            _ => unassigned_weight += w,
        }
    }

    let mut b = GraphBuilder::new();
    for &id in community_sizes.keys() {
        b.add_node(NodeId::from(id));
    }
    for (&(a, c), &w) in &omega {
        b.add_weighted_edge(NodeId::from(a), NodeId::from(c), w);
    }
    Ok(MetaNetwork {
        graph: b.build(),
        community_sizes,
        intra_edge_counts,
        dropped_singletons: dropped,
        unassigned_weight,
        base_total_weight: g.total_weight(),
    })
}

impl MetaNetwork {
    pub fn inter_weight(&self) -> u64 {
        self.graph.total_weight()
    }

    pub fn intra_weight(&self) -> u64 {
        self.intra_edge_counts.values().sum()
    }

    /// Weight on every meta-edge, in edge order.
    pub fn weights(&self) -> Vec<u64> {
        self.graph.edge_ids().map(|(_, _, w)| w).collect()
    }

    pub fn summary(&self) -> MetaSummary {
        let weights = self.weights();
        MetaSummary {
            nodes: self.graph.node_count(),
            edges: self.graph.edge_count(),
            min_weight: weights.iter().copied().min(),
            max_weight: weights.iter().copied().max(),
            avg_weight: if weights.is_empty() {
                None
            } else {
                Some(weights.iter().sum::<u64>() as f64 / weights.len() as f64)
            },
            dropped_singletons: self.dropped_singletons,
        }
    }
}

/// Weighted degree `s(u) = Σ ω` over meta-edges incident to `u`.
pub fn strength(mn: &MetaNetwork, community: u32) -> Result<u64> {
    mn.graph
        .index_of(NodeId::from(community))
        .map(|i| mn.graph.strength_at(i))
        .ok_or(Error::CommunityNotFound(community))
}

/// Size and weight statistics over meta-edges only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetaSummary {
    pub nodes: usize,
    pub edges: usize,
    pub min_weight: Option<u64>,
    pub max_weight: Option<u64>,
    pub avg_weight: Option<f64>,
    pub dropped_singletons: usize,
}

/// Sibling file holding the `id<TAB>size` node table.
pub fn node_table_path(edge_path: &Path) -> PathBuf {
    let mut s = edge_path.as_os_str().to_owned();
    s.push(".nodes");
    PathBuf::from(s)
}

/// Writes `u<TAB>v<TAB>ω` lines to `path` and the node table to
/// [`node_table_path`]. The edge file is readable by [`load_edge_list`].
pub fn export_meta_network(mn: &MetaNetwork, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (edges, nodes) = format_meta_network(mn);
    write_string(path, &edges)?;
    write_string(node_table_path(path), &nodes)
}

/// Weighted edge list (`u<TAB>v<TAB>w`) and node table (`id<TAB>size`).
pub fn format_meta_network(mn: &MetaNetwork) -> (String, String) {
    let mut edges = String::new();
    for (u, v, w) in mn.graph.edge_ids() {
        let _ = writeln!(edges, "{u}\t{v}\t{w}");
    }
    let mut nodes = String::new();
    for (id, size) in &mn.community_sizes {
        let _ = writeln!(nodes, "{id}\t{size}");
    }
    (edges, nodes)
}

/// Reloaded export: meta graph (isolated meta-nodes included) and sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportedMetaNetwork {
    pub graph: Graph,
    pub community_sizes: BTreeMap<u32, u64>,
}

pub fn load_meta_network(path: impl AsRef<Path>) -> Result<ExportedMetaNetwork> {
    let path = path.as_ref();
    let node_path = node_table_path(path);
    let table = fs::read_to_string(&node_path).map_err(|e| Error::io(&node_path, e))?;
    let mut community_sizes = BTreeMap::new();
    for (i, line) in table.lines().enumerate() {
        let bad = || Error::Parse {
            line: i + 1,
            message: format!("bad node table line `{line}`"),
        };
        let (id, size) = line.split_once('\t').ok_or_else(bad)?;
        community_sizes.insert(
            id.parse::<u32>().map_err(|_| bad())?,
            size.parse::<u64>().map_err(|_| bad())?,
        );
    }
    let mut b = GraphBuilder::new();
    for &id in community_sizes.keys() {
        b.add_node(NodeId::from(id));
    }
    match load_edge_list(path, EdgeListDialect::Whitespace) {
        Ok(loaded) => {
            for (u, v, w) in loaded.graph.edge_ids() {
                b.add_weighted_edge(u, v, w);
            }
        }
        Err(Error::EmptyGraph) => {}
        Err(e) => return Err(e),
    }
    Ok(ExportedMetaNetwork {
        graph: b.build(),
        community_sizes,
    })
}
