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

//! Crawler simulators over a known host graph.
//!
//! Both samplers return the nodes they actually visited, every neighbor
//! discovered from a visited node, and every host edge incident to a
//! visited node. Edges between two unvisited nodes are never observed.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};
use crate::seeded_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMethod {
    Bfs,
    Uniform,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub method: SampleMethod,
    pub graph: Graph,
    /// Sorted identifiers of visited nodes.
    pub visited: Vec<NodeId>,
    pub draws: u64,
    pub accepted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsSampleSpec {
    pub seed_node: NodeId,
    /// Number of nodes to visit; stands in for a crawl time budget.
    pub node_budget: usize,
    /// Shuffles the order in which each visited node's neighbors are queued.
    pub rng_seed: u64,
}

/// Picks a crawl start uniformly from the host's nodes.
pub fn random_node(host: &Graph, seed: u64) -> Option<NodeId> {
    if host.is_empty() {
        return None;
    }
    let mut rng = seeded_rng(seed);
    Some(host.id(rng.random_range(0..host.node_count())))
}

pub fn sample_bfs(host: &Graph, spec: &BfsSampleSpec) -> Result<Sample> {
    let start = host
        .index_of(spec.seed_node)
        .ok_or(Error::NodeNotFound(spec.seed_node))?;
    if spec.node_budget == 0 {
        return Err(Error::Config("node_budget must be at least 1".into()));
    }
    let mut rng = seeded_rng(spec.rng_seed);
    let mut discovered = vec![false; host.node_count()];
    let mut queue = VecDeque::from([start]);
    discovered[start] = true;
    let mut visited = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    while visited.len() < spec.node_budget {
        let Some(u) = queue.pop_front() else { break };
        visited.push(u);
        order.clear();
        order.extend_from_slice(host.neighbors(u));
        order.shuffle(&mut rng);
        for &v in &order {
            if !discovered[v] {
                discovered[v] = true;
                queue.push_back(v);
            }
        }
    }
    let n = visited.len() as u64;
    Ok(observed_sample(host, SampleMethod::Bfs, visited, n, n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Occupancy {
    /// Every host node is listable.
    AllHostNodes,
    /// A seeded random subset of this fraction of host nodes exists but
    /// cannot be listed (privacy-restricted profiles).
    Restricted { unlistable_fraction: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformSampleSpec {
    /// Draws fall in `[0, id_space_size)`.
    pub id_space_size: u64,
    pub occupancy: Occupancy,
    pub draw_count: u64,
    pub rng_seed: u64,
}

/// Raw outcome of the rejection loop, in draw order.
#[derive(Clone, Debug)]
pub struct UniformDraws {
    pub draws: u64,
    pub accepted: Vec<NodeId>,
}

impl UniformDraws {
    pub fn acceptance_rate(&self) -> f64 {
        if self.draws == 0 {
            return 0.0;
        }
        self.accepted.len() as f64 / self.draws as f64
    }
}

fn listable_mask(host: &Graph, spec: &UniformSampleSpec) -> Result<Vec<bool>> {
    if let Some(&max) = host.ids().last() {
        if max >= spec.id_space_size {
            return Err(Error::Inconsistent(format!(
                "host node {max} lies outside the id space [0, {})",
                spec.id_space_size
            )));
        }
    }
    let n = host.node_count();
    let mut mask = vec![true; n];
    if let Occupancy::Restricted {
        unlistable_fraction,
    } = spec.occupancy
    {
        if !(0.0..=1.0).contains(&unlistable_fraction) {
            return Err(Error::Config(format!(
                "unlistable_fraction {unlistable_fraction} is not a fraction"
            )));
        }
        let hidden = (unlistable_fraction * n as f64).round() as usize;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut seeded_rng(spec.rng_seed ^ 0x5bd1_e995_0000_0001));
        for &i in &order[..hidden] {
            mask[i] = false;
        }
    }
    Ok(mask)
}

/// Draws identifiers uniformly and keeps those that exist and are listable.
pub fn draw_uniform(host: &Graph, spec: &UniformSampleSpec) -> Result<UniformDraws> {
    if spec.id_space_size == 0 {
        return Err(Error::Config("id_space_size must be positive".into()));
    }
    let mask = listable_mask(host, spec)?;
    let mut rng = seeded_rng(spec.rng_seed);
    let mut accepted = Vec::new();
    for _ in 0..spec.draw_count {
        let id = rng.random_range(0..spec.id_space_size);
        if let Some(i) = host.index_of(id) {
            if mask[i] {
                accepted.push(id);
            }
        }
    }
    Ok(UniformDraws {
        draws: spec.draw_count,
        accepted,
    })
}

pub fn sample_uniform(host: &Graph, spec: &UniformSampleSpec) -> Result<Sample> {
    let draws = draw_uniform(host, spec)?;
    let mut visited: Vec<usize> = draws
        .accepted
        .iter()
        .map(|&id| host.index_of(id).expect("accepted ids exist"))
        .collect();
    visited.sort_unstable();
    visited.dedup();
    Ok(observed_sample(
        host,
        SampleMethod::Uniform,
        visited,
        draws.draws,
        draws.accepted.len() as u64,
    ))
}

fn observed_sample(
    host: &Graph,
    method: SampleMethod,
    visited: Vec<usize>,
    draws: u64,
    accepted: u64,
) -> Sample {
    let mut b = GraphBuilder::new();
    let mut is_visited = vec![false; host.node_count()];
    for &u in &visited {
        is_visited[u] = true;
    }
    for &u in &visited {
        b.add_node(host.id(u));
        for (&v, &w) in host.neighbors(u).iter().zip(host.neighbor_weights(u)) {
            // count each visited-visited edge once
            if !is_visited[v] || u < v {
                b.add_weighted_edge(host.id(u), host.id(v), w);
            }
        }
    }
    let mut visited: Vec<NodeId> = visited.into_iter().map(|u| host.id(u)).collect();
    visited.sort_unstable();
    Sample {
        method,
        graph: b.build(),
        visited,
        draws,
        accepted,
    }
}

/// Sample description in the layout of a crawl report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub method: SampleMethod,
    pub visited: usize,
    /// All nodes in the sample: visited plus discovered neighbors.
    pub discovered: usize,
    pub edges: usize,
    pub largest_component_fraction: f64,
    /// Mean degree of visited nodes (equal to their host degree).
    pub mean_degree_visited: f64,
    pub mean_degree: f64,
    pub density: f64,
    pub host_nodes: usize,
    pub host_edges: usize,
    pub draws: u64,
    pub acceptance_rate: f64,
}

pub fn sample_summary(sample: &Sample, host: &Graph) -> Result<SampleSummary> {
    if let Some(&missing) = sample.graph.ids().iter().find(|&&id| !host.contains(id)) {
        return Err(Error::Inconsistent(format!(
            "sample node {missing} is not in the host"
        )));
    }
    let g = &sample.graph;
    let visited_degree: usize = sample
        .visited
        .iter()
        .map(|&id| g.degree(id))
        .sum::<Result<usize>>()?;
    let mean_degree_visited = if sample.visited.is_empty() {
        0.0
    } else {
        visited_degree as f64 / sample.visited.len() as f64
    };
    Ok(SampleSummary {
        method: sample.method,
        visited: sample.visited.len(),
        discovered: g.node_count(),
        edges: g.edge_count(),
        largest_component_fraction: g.largest_component_fraction(),
        mean_degree_visited,
        mean_degree: g.mean_degree(),
        density: g.density(),
        host_nodes: host.node_count(),
        host_edges: host.edge_count(),
        draws: sample.draws,
        acceptance_rate: if sample.draws == 0 {
            0.0
        } else {
            sample.accepted as f64 / sample.draws as f64
        },
    })
}
