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

//! Synthetic host graphs with known structure.
//!
//! All generators draw from [`crate::seeded_rng`] (ChaCha8), so a spec and
//! seed reproduce the same edge list on every platform.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};
use crate::partition::CommunityStructure;
use crate::seeded_rng;

const MAX_NODES: u64 = u32::MAX as u64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedPartitionSpec {
    pub n_communities: usize,
    pub community_size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct PlantedPartition {
    pub graph: Graph,
    pub ground_truth: CommunityStructure,
    /// Set when `p_in <= p_out`: the planted groups are not denser inside.
    pub weak_structure: bool,
}

/// Nodes `0..k*s`; node `i` belongs to community `i / s`. Each pair is an
/// edge independently with `p_in` (same community) or `p_out`.
pub fn generate_planted_partition(spec: &PlantedPartitionSpec) -> Result<PlantedPartition> {
    for (name, p) in [("p_in", spec.p_in), ("p_out", spec.p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("{name} = {p} is not a probability")));
        }
    }
    if spec.n_communities == 0 || spec.community_size == 0 {
        return Err(Error::Config(
            "community count and size must be positive".into(),
        ));
    }
    let n = (spec.n_communities as u64)
        .checked_mul(spec.community_size as u64)
        .filter(|&n| n <= MAX_NODES)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "{} x {} nodes exceeds {MAX_NODES}",
                spec.n_communities, spec.community_size
            ))
        })?;
    let size = spec.community_size as u64;

    let mut rng = seeded_rng(spec.seed);
    let mut b = GraphBuilder::new();
    for u in 0..n {
        b.add_node(u);
    }
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / size == v / size {
                spec.p_in
            } else {
                spec.p_out
            };
            if rng.random::<f64>() < p {
                b.add_edge(u, v);
            }
        }
    }
    let groups = (0..spec.n_communities as u64)
        .map(|c| (c * size..(c + 1) * size).collect())
        .collect();
    Ok(PlantedPartition {
        graph: b.build(),
        ground_truth: CommunityStructure::from_groups(groups)?,
        weak_structure: spec.p_in <= spec.p_out,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleFreeSpec {
    pub n_nodes: usize,
    pub edges_per_new_node: usize,
    pub seed: u64,
}

/// Preferential attachment seeded with a clique on the first `m` nodes.
/// Every later node links to `m` distinct earlier nodes chosen with
/// probability proportional to degree, giving `C(m,2) + m(n-m)` edges.
pub fn generate_scale_free(spec: &ScaleFreeSpec) -> Result<Graph> {
    let n = spec.n_nodes;
    let m = spec.edges_per_new_node;
    if m == 0 || m >= n {
        return Err(Error::Config(format!(
            "edges_per_new_node must be in 1..{n}, got {m}"
        )));
    }
    if n as u64 > MAX_NODES {
        return Err(Error::Capacity(format!("{n} nodes exceeds {MAX_NODES}")));
    }
    let mut rng = seeded_rng(spec.seed);
    let mut b = GraphBuilder::new();
    // one entry per edge endpoint
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * m * n);
    b.add_node(0);
    for u in 0..m as NodeId {
        for v in u + 1..m as NodeId {
            b.add_edge(u, v);
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for new in m as NodeId..n as NodeId {
        targets.clear();
        while targets.len() < m {
            let t = if endpoints.is_empty() {
                rng.random_range(0..new)
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            b.add_edge(new, t);
            endpoints.push(new);
            endpoints.push(t);
        }
    }
    Ok(b.build())
}
