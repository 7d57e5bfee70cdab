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

//! Community structures: disjoint, non-empty, labeled groups of nodes.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Community {
    pub id: u32,
    /// Sorted ascending, no duplicates.
    pub members: Vec<NodeId>,
}

impl Community {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommunityStructure {
    communities: Vec<Community>,
    node_to_community: HashMap<NodeId, usize>,
}

impl CommunityStructure {
    /// Validates and indexes an explicit list of communities, keeping their
    /// order and identifiers. Member lists are sorted.
    pub fn new(mut communities: Vec<Community>) -> Result<Self> {
        let mut node_to_community = HashMap::new();
        let mut seen_ids = HashSet::new();
        for (idx, c) in communities.iter_mut().enumerate() {
            if c.members.is_empty() {
                return Err(Error::Inconsistent(format!("community {} is empty", c.id)));
            }
            if !seen_ids.insert(c.id) {
                return Err(Error::Inconsistent(format!(
                    "duplicate community id {}",
                    c.id
                )));
            }
            c.members.sort_unstable();
            for &m in &c.members {
                if node_to_community.insert(m, idx).is_some() {
                    return Err(Error::Inconsistent(format!(
                        "node {m} assigned more than once"
                    )));
                }
            }
        }
        Ok(Self {
            communities,
            node_to_community,
        })
    }

    /// Builds a structure from unlabeled groups. Identifiers are assigned in
    /// order of each group's smallest member, so the result is canonical.
    pub fn from_groups(groups: Vec<Vec<NodeId>>) -> Result<Self> {
        let mut groups: Vec<Vec<NodeId>> = groups
            .into_iter()
            .map(|mut g| {
                g.sort_unstable();
                g
            })
            .collect();
        if groups.iter().any(Vec::is_empty) {
            return Err(Error::Inconsistent("empty group".into()));
        }
        groups.sort_unstable_by_key(|g| g[0]);
        let communities = groups
            .into_iter()
            .enumerate()
            .map(|(i, members)| {
                let id = u32::try_from(i)
                    .map_err(|_| Error::Capacity("more than 2^32 communities".into()))?;
                Ok(Community { id, members })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(communities)
    }

    /// Groups nodes sharing a label; identifiers follow [`Self::from_groups`].
    pub fn from_labels<L, I>(assignment: I) -> Result<Self>
    where
        L: Ord,
        I: IntoIterator<Item = (NodeId, L)>,
    {
        let mut by_label: BTreeMap<L, Vec<NodeId>> = BTreeMap::new();
        for (node, label) in assignment {
            by_label.entry(label).or_default().push(node);
        }
        Self::from_groups(by_label.into_values().collect())
    }

    /// Labels indexed by dense node index of `g`.
    pub fn from_dense_labels(g: &Graph, labels: &[usize]) -> Self {
        debug_assert_eq!(labels.len(), g.node_count());
        Self::from_labels(labels.iter().enumerate().map(|(i, &l)| (g.id(i), l)))
            .expect("dense labels always form a partition")
    }

    /// Every node of `g` in its own community.
    pub fn singletons(g: &Graph) -> Self {
        Self::from_groups(g.ids().iter().map(|&id| vec![id]).collect())
            .expect("singletons form a partition")
    }

    /// All nodes of `g` in one community (empty structure for an empty graph).
    pub fn whole(g: &Graph) -> Self {
        if g.is_empty() {
            return Self::default();
        }
        Self::from_groups(vec![g.ids().to_vec()]).expect("one group is a partition")
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn communities(&self) -> &[Community] {
        &self.communities
    }

    pub fn into_communities(self) -> Vec<Community> {
        self.communities
    }

    /// Number of clustered nodes.
    pub fn node_count(&self) -> usize {
        self.node_to_community.len()
    }

    /// Position (not identifier) of the community holding `node`.
    pub fn position_of(&self, node: NodeId) -> Option<usize> {
        self.node_to_community.get(&node).copied()
    }

    pub fn community_of(&self, node: NodeId) -> Option<&Community> {
        self.position_of(node).map(|i| &self.communities[i])
    }

    pub fn get(&self, id: u32) -> Option<&Community> {
        self.communities.iter().find(|c| c.id == id)
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.communities.iter().map(|c| c.len() as u64).collect()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.node_to_community.contains_key(&node)
    }

    /// Errors unless the clustered node set equals the node set of `g`.
    pub fn check_partition_of(&self, g: &Graph) -> Result<()> {
        if self.node_count() != g.node_count() {
            return Err(Error::Inconsistent(format!(
                "structure covers {} nodes, graph has {}",
                self.node_count(),
                g.node_count()
            )));
        }
        self.check_subset_of(g)
    }

    /// Errors if any clustered node is absent from `g`.
    pub fn check_subset_of(&self, g: &Graph) -> Result<()> {
        for c in &self.communities {
            if let Some(&m) = c.members.iter().find(|&&m| !g.contains(m)) {
                return Err(Error::Inconsistent(format!(
                    "node {m} of community {} is not in the graph",
                    c.id
                )));
            }
        }
        Ok(())
    }

    /// Community position per dense node index of `g`; requires a partition.
    pub fn dense_positions(&self, g: &Graph) -> Result<Vec<usize>> {
        self.check_partition_of(g)?;
        Ok(g.ids()
            .iter()
            .map(|id| self.node_to_community[id])
            .collect())
    }

    /// Drops size-1 communities, keeping identifiers of the rest.
    pub fn without_singletons(&self) -> (Self, usize) {
        let kept: Vec<Community> = self
            .communities
            .iter()
            .filter(|c| c.len() > 1)
            .cloned()
            .collect();
        let removed = self.communities.len() - kept.len();
        (
            Self::new(kept).expect("subset of a valid structure"),
            removed,
        )
    }
}
