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

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{Graph, NodeId};

/// Local clustering coefficients. Nodes with degree below 2 have no
/// coefficient and are left out of `per_node` and of the average.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusteringReport {
    pub per_node: BTreeMap<NodeId, f64>,
    pub average: f64,
    /// Counts over ten equal-width value bins on `[0, 1]`.
    pub value_histogram: Vec<u64>,
    /// Mean coefficient per degree.
    pub by_degree: BTreeMap<usize, f64>,
}

/// Triangles through each node, by sorted-list intersection.
pub fn triangles_per_node(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    let mut tri = vec![0u64; n];
    for u in 0..n {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = g.neighbors(v);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = nu[i];
                        if w > v {
                            tri[u] += 1;
                            tri[v] += 1;
                            tri[w] += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    tri
}

pub fn clustering(g: &Graph) -> ClusteringReport {
    let tri = triangles_per_node(g);
    let mut per_node = BTreeMap::new();
    let mut value_histogram = vec![0u64; 10];
    let mut degree_sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (u, &t) in tri.iter().enumerate() {
        let k = g.degree_at(u);
        if k < 2 {
            continue;
        }
        let c = 2.0 * t as f64 / (k * (k - 1)) as f64;
        per_node.insert(g.id(u), c);
        value_histogram[((c * 10.0) as usize).min(9)] += 1;
        let e = degree_sums.entry(k).or_insert((0.0, 0));
        e.0 += c;
        e.1 += 1;
    }
    let average = if per_node.is_empty() {
        0.0
    } else {
        per_node.values().sum::<f64>() / per_node.len() as f64
    };
    ClusteringReport {
        per_node,
        average,
        value_histogram,
        by_degree: degree_sums
            .into_iter()
            .map(|(k, (s, c))| (k, s / c as f64))
            .collect(),
    }
}
