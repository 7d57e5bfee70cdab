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

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::partition::CommunityStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommunityTerms {
    pub id: u32,
    /// Edges with both endpoints inside the community.
    pub intra_edges: u64,
    /// Sum of member degrees.
    pub degree_sum: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularityScore {
    pub q: f64,
    pub per_community_terms: Vec<CommunityTerms>,
}

/// Newman modularity `Σ_s [l_s/|E| - (d_s/2|E|)^2]` over unweighted edges.
/// An edgeless graph scores 0.
pub fn modularity(g: &Graph, cs: &CommunityStructure) -> Result<ModularityScore> {
    let pos = cs.dense_positions(g)?;
    let mut terms: Vec<CommunityTerms> = cs
        .communities()
        .iter()
        .map(|c| CommunityTerms {
            id: c.id,
            intra_edges: 0,
            degree_sum: 0,
        })
        .collect();
    for (u, &p) in pos.iter().enumerate() {
        terms[p].degree_sum += g.degree_at(u) as u64;
    }
    for (u, v, _) in g.edges() {
        if pos[u] == pos[v] {
            terms[pos[u]].intra_edges += 1;
        }
    }
    let m = g.edge_count() as f64;
    let q = if m == 0.0 {
        0.0
    } else {
        terms
            .iter()
            .map(|t| {
                let frac = t.degree_sum as f64 / (2.0 * m);
                t.intra_edges as f64 / m - frac * frac
            })
            .sum()
    };
    Ok(ModularityScore {
        q,
        per_community_terms: terms,
    })
}

/// Modularity of arbitrary dense labels (any `usize` values).
pub(crate) fn modularity_of_labels(g: &Graph, labels: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let n = g.node_count();
    let mut remap = std::collections::HashMap::new();
    let compact: Vec<usize> = labels
        .iter()
        .map(|&l| {
            let next = remap.len();
            *remap.entry(l).or_insert(next)
        })
        .collect();
    let k = remap.len();
    let mut intra = vec![0u64; k];
    let mut deg = vec![0u64; k];
    for u in 0..n {
        deg[compact[u]] += g.degree_at(u) as u64;
    }
    for (u, v, _) in g.edges() {
        if compact[u] == compact[v] {
            intra[compact[u]] += 1;
        }
    }
    (0..k)
        .map(|c| {
            let frac = deg[c] as f64 / (2.0 * m);
            intra[c] as f64 / m - frac * frac
        })
        .sum()
}
