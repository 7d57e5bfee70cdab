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

use crate::error::Result;
use crate::graph::Graph;
use crate::partition::CommunityStructure;

/// Size thresholds reported for unusually large communities.
pub const OUTLIER_THRESHOLDS: [u64; 5] = [1_000, 5_000, 10_000, 50_000, 100_000];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutlierReport {
    /// `sqrt(|E| / 2)`: below this size modularity may not resolve communities.
    pub resolution_threshold: f64,
    /// Communities strictly larger than each threshold.
    pub counts_by_threshold: BTreeMap<u64, usize>,
    pub above_resolution: usize,
}

pub fn detect_outliers(cs: &CommunityStructure, g: &Graph) -> Result<OutlierReport> {
    cs.check_subset_of(g)?;
    Ok(outliers_from_sizes(&cs.sizes(), g.edge_count() as u64))
}

/// Count-only path: community sizes and the base edge count suffice.
pub fn outliers_from_sizes(sizes: &[u64], edge_count: u64) -> OutlierReport {
    let resolution_threshold = (edge_count as f64 / 2.0).sqrt();
    let counts_by_threshold = OUTLIER_THRESHOLDS
        .iter()
        .map(|&t| (t, sizes.iter().filter(|&&s| s > t).count()))
        .collect();
    OutlierReport {
        resolution_threshold,
        counts_by_threshold,
        above_resolution: sizes
            .iter()
            .filter(|&&s| s as f64 > resolution_threshold)
            .count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_communities_count_nothing() {
        let r = outliers_from_sizes(&[3, 50, 999, 1000], 10_000);
        assert!(r.counts_by_threshold.values().all(|&c| c == 0));
        assert_eq!(r.resolution_threshold, (5000f64).sqrt());
        assert_eq!(r.above_resolution, 2);
    }

    #[test]
    fn one_six_thousand_member_community() {
        let r = outliers_from_sizes(&[6_000, 10, 20], 1_000_000);
        let expected: BTreeMap<u64, usize> = [
            (1_000, 1),
            (5_000, 1),
            (10_000, 0),
            (50_000, 0),
            (100_000, 0),
        ]
        .into();
        assert_eq!(r.counts_by_threshold, expected);
    }

    #[test]
    fn through_a_graph() {
        let g = Graph::from_edges(&[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 8),
        ]);
        let cs = CommunityStructure::whole(&g);
        let r = detect_outliers(&cs, &g).unwrap();
        assert_eq!(r.resolution_threshold, 2.0);
        assert_eq!(r.above_resolution, 1);
    }
}
