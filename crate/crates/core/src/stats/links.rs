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

//! How base edges spread over communities of different sizes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::CommunityStructure;

/// Geometric size bins `[start·base^k, start·base^(k+1))`; sizes below
/// `start` fall into the first bin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogBins {
    pub base: u64,
    pub start: u64,
}

impl Default for LogBins {
    fn default() -> Self {
        Self { base: 2, start: 2 }
    }
}

impl LogBins {
    pub fn bin_of(&self, size: u64) -> usize {
        let mut bin = 0;
        let mut upper = self.start.saturating_mul(self.base);
        while size >= upper {
            bin += 1;
            upper = upper.saturating_mul(self.base);
        }
        bin
    }

    pub fn bounds(&self, bin: usize) -> (u64, u64) {
        let lo = self
            .start
            .saturating_mul(self.base.saturating_pow(bin as u32));
        (lo, lo.saturating_mul(self.base))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMap {
    pub bins: LogBins,
    /// `grid[a][b]`: share of inter-community edge ends joining a community
    /// in size bin `a` to one in bin `b`. Symmetric, sums to 1.
    pub grid: Vec<Vec<f64>>,
    pub inter_edges: u64,
}

impl DensityMap {
    /// `bin_a<TAB>bin_b<TAB>lo_a<TAB>lo_b<TAB>mass` for every cell.
    pub fn to_plot_data(&self) -> String {
        let mut out = String::new();
        for (a, row) in self.grid.iter().enumerate() {
            for (b, &mass) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{a}\t{b}\t{}\t{}\t{mass:.12e}",
                    self.bins.bounds(a).0,
                    self.bins.bounds(b).0
                );
            }
        }
        out
    }
}

pub fn edge_density_map(g: &Graph, cs: &CommunityStructure, bins: LogBins) -> Result<DensityMap> {
    if bins.base < 2 || bins.start < 1 {
        return Err(Error::Config(
            "log bins need base >= 2 and start >= 1".into(),
        ));
    }
    let pos = cs.dense_positions(g)?;
    let sizes = cs.sizes();
    let max_bin = sizes.iter().map(|&s| bins.bin_of(s)).max().unwrap_or(0);
    let mut counts = vec![vec![0u64; max_bin + 1]; max_bin + 1];
    let mut inter = 0u64;
    for (u, v, _) in g.edges() {
        if pos[u] == pos[v] {
            continue;
        }
        let (a, b) = (bins.bin_of(sizes[pos[u]]), bins.bin_of(sizes[pos[v]]));
        counts[a][b] += 1;
        counts[b][a] += 1;
        inter += 1;
    }
    if inter == 0 {
        return Err(Error::EmptyMap);
    }
    let total = 2.0 * inter as f64;
    Ok(DensityMap {
        bins,
        grid: counts
            .into_iter()
            .map(|row| row.into_iter().map(|c| c as f64 / total).collect())
            .collect(),
        inter_edges: inter,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMode {
    /// Edges leaving the community.
    Inter,
    /// Edges inside the community.
    Intra,
    /// Every edge touching a member.
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommunityLinks {
    pub id: u32,
    pub size: u64,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkFractionSeries {
    pub mode: LinkMode,
    pub per_community: Vec<CommunityLinks>,
    /// `(size, mean fraction over communities of that size)`.
    pub by_size: Vec<(u64, f64)>,
}

impl LinkFractionSeries {
    pub fn to_plot_data(&self) -> String {
        self.by_size
            .iter()
            .map(|(s, f)| format!("{s}\t{f:.12e}\n"))
            .collect()
    }
}

/// Per community, its edges of the selected kind divided by `|E|`.
pub fn link_fraction(
    g: &Graph,
    cs: &CommunityStructure,
    mode: LinkMode,
) -> Result<LinkFractionSeries> {
    let pos = cs.dense_positions(g)?;
    let mut counts = vec![0u64; cs.len()];
    for (u, v, _) in g.edges() {
        let (a, b) = (pos[u], pos[v]);
        match (mode, a == b) {
            (LinkMode::Intra | LinkMode::All, true) => counts[a] += 1,
            (LinkMode::Inter | LinkMode::All, false) => {
                counts[a] += 1;
                counts[b] += 1;
            }
            _ => {}
        }
    }
    let m = g.edge_count() as f64;
    let per_community: Vec<CommunityLinks> = cs
        .communities()
        .iter()
        .zip(&counts)
        .map(|(c, &k)| CommunityLinks {
            id: c.id,
            size: c.len() as u64,
            fraction: if m == 0.0 { 0.0 } else { k as f64 / m },
        })
        .collect();
    let mut grouped: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for c in &per_community {
        let e = grouped.entry(c.size).or_insert((0.0, 0));
        e.0 += c.fraction;
        e.1 += 1;
    }
    Ok(LinkFractionSeries {
        mode,
        per_community,
        by_size: grouped
            .into_iter()
            .map(|(s, (sum, k))| (s, sum / k as f64))
            .collect(),
    })
}
