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

//! Community detection: asynchronous label propagation, local modularity
//! ascent, and the modularity evaluator they share.
//!
//! Both detectors work on unweighted adjacency. Output community
//! identifiers are assigned in order of each community's smallest member.

mod fnca;
mod lpa;
mod modularity;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use fnca::{detect_fnca, run_fnca, run_fnca_observed, FncaConfig, FncaEvent, FncaState};
pub use lpa::{detect_lpa, run_lpa, LpaConfig};
pub use modularity::{modularity, CommunityTerms, ModularityScore};

use crate::error::Result;
use crate::graph::Graph;
use crate::partition::CommunityStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Lpa,
    Fnca,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lpa => "lpa",
            Algorithm::Fnca => "fnca",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lpa" => Ok(Algorithm::Lpa),
            "fnca" => Ok(Algorithm::Fnca),
            other => Err(crate::Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Outcome of one detector run.
#[derive(Clone, Debug)]
pub struct DetectionRun {
    pub algorithm: Algorithm,
    pub structure: CommunityStructure,
    /// Sweeps performed.
    pub iterations: usize,
    /// True when a full sweep changed nothing before the iteration cap.
    pub converged: bool,
    /// Label changes over the whole run.
    pub moves: usize,
    /// Modularity of the labeling after each sweep.
    pub q_trajectory: Vec<f64>,
    /// Modularity of the returned structure.
    pub q: f64,
}

/// Splits every community into its connected components (within the
/// community's induced subgraph).
pub fn split_contiguous(g: &Graph, cs: &CommunityStructure) -> Result<CommunityStructure> {
    let labels = cs.dense_positions(g)?;
    Ok(CommunityStructure::from_dense_labels(
        g,
        &split_labels(g, &labels),
    ))
}

/// Relabels so that every label class is connected; labels become the
/// smallest dense index of each component.
pub(crate) fn split_labels(g: &Graph, labels: &[usize]) -> Vec<usize> {
    let n = g.node_count();
    let mut out = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if out[start] != usize::MAX {
            continue;
        }
        out[start] = start;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if out[v] == usize::MAX && labels[v] == labels[start] {
                    out[v] = start;
                    queue.push_back(v);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingletonFilter {
    pub structure: CommunityStructure,
    pub removed: usize,
}

/// Removes size-1 communities; surviving identifiers are unchanged.
pub fn drop_singletons(cs: &CommunityStructure) -> SingletonFilter {
    let (structure, removed) = cs.without_singletons();
    SingletonFilter { structure, removed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_community_unchanged() {
        let g = Graph::from_edges(&[(1, 2)]);
        let cs = CommunityStructure::whole(&g);
        assert_eq!(split_contiguous(&g, &cs).unwrap(), cs);
    }

    #[test]
    fn disconnected_member_split_off() {
        let g = Graph::from_nodes_and_edges(&[3], &[(1, 2)]);
        let cs = CommunityStructure::whole(&g);
        let split = split_contiguous(&g, &cs).unwrap();
        let groups: Vec<Vec<u64>> = split
            .communities()
            .iter()
            .map(|c| c.members.clone())
            .collect();
        assert_eq!(groups, vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn split_is_idempotent() {
        let g = Graph::from_edges(&[(0, 1), (2, 3), (4, 5), (1, 2)]);
        let cs = CommunityStructure::from_groups(vec![vec![0, 1, 4, 5], vec![2, 3]]).unwrap();
        let once = split_contiguous(&g, &cs).unwrap();
        assert_eq!(once.len(), 3);
        assert_eq!(split_contiguous(&g, &once).unwrap(), once);
    }

    #[test]
    fn singleton_filtering() {
        let all = CommunityStructure::from_groups(vec![vec![1], vec![2], vec![3]]).unwrap();
        let f = drop_singletons(&all);
        assert!(f.structure.is_empty());
        assert_eq!(f.removed, 3);

        let none = CommunityStructure::from_groups(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let f = drop_singletons(&none);
        assert_eq!(f.structure, none);
        assert_eq!(f.removed, 0);
    }

    #[test]
    fn algorithm_names_parse() {
        assert_eq!("LPA".parse::<Algorithm>().unwrap(), Algorithm::Lpa);
        assert_eq!("fnca".parse::<Algorithm>().unwrap(), Algorithm::Fnca);
        assert!("louvain".parse::<Algorithm>().is_err());
    }
}
