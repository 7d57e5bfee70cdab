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

//! Distributions, fits, and structural statistics over graphs, community
//! structures, and meta-networks.

mod clustering;
mod distance;
mod distribution;
mod links;
mod outliers;
mod powerlaw;
mod zeta;

pub use clustering::{clustering, triangles_per_node, ClusteringReport};
pub use distance::{
    distance_histogram, effective_diameter, hop_plot, shortest_path_distribution,
    ComponentDistance, DistanceHistogram, DistanceOptions, HopPlot,
};
pub use distribution::SizeDistribution;
pub use links::{
    edge_density_map, link_fraction, CommunityLinks, DensityMap, LinkFractionSeries, LinkMode,
    LogBins,
};
pub use outliers::{detect_outliers, outliers_from_sizes, OutlierReport, OUTLIER_THRESHOLDS};
pub use powerlaw::{fit_power_law, PowerLawFit, PowerLawOptions, Regime};
pub use zeta::hurwitz_zeta;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metanet::MetaNetwork;
use crate::partition::CommunityStructure;

/// Empirical pmf of community sizes.
pub fn size_distribution(cs: &CommunityStructure) -> Result<SizeDistribution> {
    if cs.is_empty() {
        return Err(Error::UndefinedInput(
            "size distribution of an empty structure".into(),
        ));
    }
    Ok(SizeDistribution::from_values(cs.sizes()))
}

/// Empirical pmf of node degrees.
pub fn degree_distribution(g: &Graph) -> Result<SizeDistribution> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(SizeDistribution::from_values(
        (0..g.node_count()).map(|u| g.degree_at(u) as u64),
    ))
}

/// Pmfs of meta-edge weights and of community strengths.
pub fn weight_strength_distributions(
    mn: &MetaNetwork,
) -> Result<(SizeDistribution, SizeDistribution)> {
    if mn.graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if mn.graph.edge_count() == 0 {
        return Err(Error::UndefinedInput(
            "meta-network has no edges to weigh".into(),
        ));
    }
    let weights = SizeDistribution::from_values(mn.weights());
    let strengths =
        SizeDistribution::from_values((0..mn.graph.node_count()).map(|u| mn.graph.strength_at(u)));
    Ok((weights, strengths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metanet::build_meta_network;

    #[test]
    fn sizes_two_two_four() {
        let cs = CommunityStructure::from_groups(vec![vec![0, 1], vec![2, 3], vec![4, 5, 6, 7]])
            .unwrap();
        let d = size_distribution(&cs).unwrap();
        assert!((d.prob(2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.prob(4) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn star_degrees() {
        let g = Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let d = degree_distribution(&g).unwrap();
        assert!((d.prob(1) - 5.0 / 6.0).abs() < 1e-15);
        assert!((d.prob(5) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn two_communities_four_crossings() {
        let g = Graph::from_edges(&[(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let cs = CommunityStructure::from_groups(vec![vec![0, 1], vec![2, 3]]).unwrap();
        let mn = build_meta_network(&g, &cs).unwrap();
        let (w, s) = weight_strength_distributions(&mn).unwrap();
        assert_eq!(w.support(), &[4]);
        assert_eq!(s.support(), &[4]);
        assert_eq!(s.prob(4), 1.0);
    }
}
