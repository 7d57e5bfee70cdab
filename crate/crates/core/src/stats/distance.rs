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

//! Hop plots and shortest-path length distributions.
//!
//! Small graphs get exact all-pairs BFS. Larger ones run BFS from a seeded
//! random subset of sources and the result is flagged as sampled. Counts
//! are over ordered pairs of distinct nodes.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SizeDistribution;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeded_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceOptions {
    /// Graphs with at most this many nodes are measured exactly.
    pub exact_threshold: usize,
    pub sample_sources: usize,
    pub rng_seed: u64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            exact_threshold: 5_000,
            sample_sources: 500,
            rng_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentDistance {
    pub size: usize,
    /// Largest distance seen from the sources inside this component.
    pub diameter: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceHistogram {
    /// `counts[d]` ordered pairs at distance `d`; `counts[0]` is always 0.
    pub counts: Vec<u64>,
    pub reachable_pairs: u64,
    pub unreachable_pairs: u64,
    pub sources: usize,
    pub sampled: bool,
    /// Largest component first.
    pub components: Vec<ComponentDistance>,
}

fn bfs_counts(g: &Graph, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) -> Vec<u64> {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let mut counts = vec![0u64];
    while let Some(u) = queue.pop_front() {
        let d = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = d;
                if counts.len() <= d as usize {
                    counts.resize(d as usize + 1, 0);
                }
                counts[d as usize] += 1;
                queue.push_back(v);
            }
        }
    }
    counts
}

pub fn distance_histogram(g: &Graph, opts: &DistanceOptions) -> Result<DistanceHistogram> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::UndefinedInput("distances of an empty graph".into()));
    }
    let sampled = n > opts.exact_threshold && opts.sample_sources < n;
    let sources: Vec<usize> = if sampled {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut seeded_rng(opts.rng_seed));
        all.truncate(opts.sample_sources.max(1));
        all
    } else {
        (0..n).collect()
    };

    let comps = g.connected_components();
    let mut comp_of = vec![0usize; n];
    for (c, members) in comps.iter().enumerate() {
        for &u in members {
            comp_of[u] = c;
        }
    }

    let per_source: Vec<Vec<u64>> = sources
        .par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), &s| bfs_counts(g, s, dist, queue),
        )
        .collect();

    let mut counts = vec![0u64];
    let mut comp_diam = vec![0u32; comps.len()];
    for (&s, c) in sources.iter().zip(&per_source) {
        if counts.len() < c.len() {
            counts.resize(c.len(), 0);
        }
        for (d, &k) in c.iter().enumerate() {
            counts[d] += k;
        }
        let ecc = (c.len() - 1) as u32;
        let slot = &mut comp_diam[comp_of[s]];
        *slot = (*slot).max(ecc);
    }
    let reachable: u64 = counts.iter().sum();
    let total = sources.len() as u64 * (n as u64 - 1);
    Ok(DistanceHistogram {
        counts,
        reachable_pairs: reachable,
        unreachable_pairs: total - reachable,
        sources: sources.len(),
        sampled,
        components: comps
            .iter()
            .zip(comp_diam)
            .map(|(c, diameter)| ComponentDistance {
                size: c.len(),
                diameter,
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopPlot {
    /// `hop_counts[h]`: ordered pairs within distance `h`.
    pub hop_counts: Vec<u64>,
    /// `cdf[h]`: fraction of reachable pairs within distance `h`.
    pub cdf: Vec<f64>,
    pub effective_diameter: f64,
    /// `None` when some pair is unreachable.
    pub exact_diameter: Option<u32>,
    /// Largest finite distance observed.
    pub max_distance: u32,
    pub unreachable_fraction: f64,
    pub sampled: bool,
    pub sources: usize,
    pub components: Vec<ComponentDistance>,
}

impl HopPlot {
    /// `h<TAB>F(h)` plot data.
    pub fn to_plot_data(&self) -> String {
        self.cdf
            .iter()
            .enumerate()
            .skip(1)
            .map(|(h, f)| format!("{h}\t{f:.12e}\n"))
            .collect()
    }
}

/// Interpolated `q`-quantile of the distance distribution. Below the first
/// distance the result is clamped to 1, the smallest possible distance.
pub fn effective_diameter(cdf: &[f64], q: f64) -> f64 {
    let Some(h) = cdf.iter().position(|&f| f >= q) else {
        return (cdf.len().saturating_sub(1)) as f64;
    };
    if h <= 1 {
        return h as f64;
    }
    let (lo, hi) = (cdf[h - 1], cdf[h]);
    (h - 1) as f64 + (q - lo) / (hi - lo)
}

pub fn hop_plot(g: &Graph, opts: &DistanceOptions) -> Result<HopPlot> {
    let hist = distance_histogram(g, opts)?;
    let mut hop_counts = Vec::with_capacity(hist.counts.len());
    let mut acc = 0u64;
    for &c in &hist.counts {
        acc += c;
        hop_counts.push(acc);
    }
    let reachable = hist.reachable_pairs;
    let cdf: Vec<f64> = hop_counts
        .iter()
        .map(|&c| {
            if reachable == 0 {
                0.0
            } else {
                c as f64 / reachable as f64
            }
        })
        .collect();
    let max_distance = (hist.counts.len() - 1) as u32;
    let total = reachable + hist.unreachable_pairs;
    Ok(HopPlot {
        effective_diameter: if reachable == 0 {
            0.0
        } else {
            effective_diameter(&cdf, 0.9)
        },
        exact_diameter: (hist.unreachable_pairs == 0).then_some(max_distance),
        max_distance,
        unreachable_fraction: if total == 0 {
            0.0
        } else {
            hist.unreachable_pairs as f64 / total as f64
        },
        sampled: hist.sampled,
        sources: hist.sources,
        components: hist.components,
        hop_counts,
        cdf,
    })
}

/// Probability mass over finite pairwise distances.
pub fn shortest_path_distribution(g: &Graph, opts: &DistanceOptions) -> Result<SizeDistribution> {
    let hist = distance_histogram(g, opts)?;
    if hist.reachable_pairs == 0 {
        return Err(Error::UndefinedInput("no connected pairs".into()));
    }
    let counts = hist
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(d, &c)| (d as u64, c))
        .collect();
    Ok(SizeDistribution::from_counts(&counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> DistanceOptions {
        DistanceOptions {
            exact_threshold: usize::MAX,
            sample_sources: 0,
            rng_seed: 0,
        }
    }

    fn path(n: u64) -> Graph {
        Graph::from_edges(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    #[test]
    fn path_of_eleven() {
        let hp = hop_plot(&path(11), &exact()).unwrap();
        assert_eq!(hp.exact_diameter, Some(10));
        assert_eq!(*hp.hop_counts.last().unwrap(), 110);
        // pairs within 7 hops: 98 of 110, within 8: 104; 0.9 * 110 = 99
        assert!((hp.effective_diameter - (7.0 + 1.0 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn complete_graph() {
        let mut e = Vec::new();
        for u in 0..5u64 {
            for v in u + 1..5 {
                e.push((u, v));
            }
        }
        let hp = hop_plot(&Graph::from_edges(&e), &exact()).unwrap();
        assert_eq!(hp.exact_diameter, Some(1));
        assert_eq!(hp.effective_diameter, 1.0);
    }

    #[test]
    fn two_disjoint_edges() {
        let hp = hop_plot(&Graph::from_edges(&[(0, 1), (2, 3)]), &exact()).unwrap();
        assert!((hp.unreachable_fraction - 8.0 / 12.0).abs() < 1e-15);
        assert_eq!(hp.exact_diameter, None);
        assert_eq!(hp.components.len(), 2);
    }

    #[test]
    fn path_pmfs() {
        let d = shortest_path_distribution(&path(3), &exact()).unwrap();
        assert!((d.prob(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.prob(2) - 1.0 / 3.0).abs() < 1e-15);
        let k4 = Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(
            shortest_path_distribution(&k4, &exact()).unwrap().support(),
            &[1]
        );
    }

    #[test]
    fn sampled_mode_flags_and_uses_k_sources() {
        let g = path(50);
        let opts = DistanceOptions {
            exact_threshold: 10,
            sample_sources: 7,
            rng_seed: 1,
        };
        let hp = hop_plot(&g, &opts).unwrap();
        assert!(hp.sampled);
        assert_eq!(hp.sources, 7);
        assert_eq!(*hp.hop_counts.last().unwrap(), 7 * 49);
    }

    #[test]
    fn empty_graph_errors() {
        assert!(hop_plot(&Graph::default(), &exact()).is_err());
    }
}
