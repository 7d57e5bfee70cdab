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

//! Similarity between two community structures.
//!
//! Every community of the former structure is matched greedily against all
//! communities of the latter by binary Jaccard score; the comparison is
//! therefore directional. Size distributions are compared by KL divergence
//! in natural-log units.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::partition::{Community, CommunityStructure};
pub use crate::stats::SizeDistribution;

fn sorted(v: &[NodeId]) -> std::borrow::Cow<'_, [NodeId]> {
    if v.windows(2).all(|w| w[0] < w[1]) {
        std::borrow::Cow::Borrowed(v)
    } else {
        let mut owned = v.to_vec();
        owned.sort_unstable();
        owned.dedup();
        std::borrow::Cow::Owned(owned)
    }
}

fn shared_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// `M11 / (M01 + M10 + M11)` for two member sets.
pub fn binary_jaccard(v: &[NodeId], w: &[NodeId]) -> Result<f64> {
    let (v, w) = (sorted(v), sorted(w));
    if v.is_empty() && w.is_empty() {
        return Err(Error::UndefinedInput("Jaccard of two empty sets".into()));
    }
    let shared = shared_count(&v, &w);
    Ok(shared as f64 / (v.len() + w.len() - shared) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BestMatch {
    /// Position in the former structure.
    pub former: usize,
    pub former_id: u32,
    /// Position in the latter structure (lowest position among ties).
    pub latter: usize,
    pub latter_id: u32,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub per_community_best: Vec<BestMatch>,
    /// Mean best score over the former structure.
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation of best scores.
    pub std_dev: f64,
    /// Fraction of former communities with an identical match.
    pub identical_fraction: f64,
    pub n: usize,
}

pub fn match_structures(
    a: &CommunityStructure,
    b: &CommunityStructure,
) -> Result<SimilarityReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::UndefinedInput(
            "cannot compare an empty structure".into(),
        ));
    }
    let latter = b.communities();
    let best: Vec<BestMatch> = a
        .communities()
        .par_iter()
        .enumerate()
        .map(|(i, c)| best_match(i, c, b, latter))
        .collect();
    let scores: Vec<f64> = best.iter().map(|m| m.score).collect();
    let n = scores.len();
    let mean = scores.iter().sum::<f64>() / n as f64;
    let var = scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n as f64;
    let identical = scores.iter().filter(|&&s| s == 1.0).count();
    Ok(SimilarityReport {
        per_community_best: best,
        mean,
        median: median(&scores),
        std_dev: var.sqrt(),
        identical_fraction: identical as f64 / n as f64,
        n,
    })
}

fn best_match(i: usize, c: &Community, b: &CommunityStructure, latter: &[Community]) -> BestMatch {
    // overlap counts with every latter community that shares a member
    let mut overlap: BTreeMap<usize, usize> = BTreeMap::new();
    for &m in &c.members {
        if let Some(j) = b.position_of(m) {
            *overlap.entry(j).or_insert(0) += 1;
        }
    }
    let mut best = (0usize, 0.0f64);
    for (&j, &shared) in &overlap {
        let score = shared as f64 / (c.len() + latter[j].len() - shared) as f64;
        if score > best.1 {
            best = (j, score);
        }
    }
    BestMatch {
        former: i,
        former_id: c.id,
        latter: best.0,
        latter_id: latter[best.0].id,
        score: best.1,
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// `Σ_i P(i) ln(P(i)/Q(i))`. Errors if `q` has no mass where `p` does.
pub fn kl_divergence(p: &SizeDistribution, q: &SizeDistribution) -> Result<f64> {
    let mut total = 0.0;
    for (x, px) in p.iter() {
        let qx = q.prob(x);
        if qx <= 0.0 {
            return Err(Error::DivergenceUndefined(x));
        }
        total += px * (px / qx).ln();
    }
    Ok(total.max(0.0))
}

/// Size-distribution divergences in both directions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KlReport {
    pub log_base: &'static str,
    /// One pseudo-count added to every size in the union support.
    pub forward_smoothed: f64,
    pub backward_smoothed: f64,
    /// Both distributions restricted to their common support and
    /// renormalized; `None` when the supports are disjoint.
    pub forward_common: Option<f64>,
    pub backward_common: Option<f64>,
}

pub fn size_kl_report(a: &CommunityStructure, b: &CommunityStructure) -> Result<KlReport> {
    let hist = |cs: &CommunityStructure| {
        let mut h = BTreeMap::new();
        for s in cs.sizes() {
            *h.entry(s).or_insert(0u64) += 1;
        }
        h
    };
    let (ha, hb) = (hist(a), hist(b));
    if ha.is_empty() || hb.is_empty() {
        return Err(Error::UndefinedInput("empty structure".into()));
    }
    let union: BTreeSet<u64> = ha.keys().chain(hb.keys()).copied().collect();
    let smooth = |h: &BTreeMap<u64, u64>| {
        let counts: BTreeMap<u64, u64> = union
            .iter()
            .map(|&x| (x, h.get(&x).unwrap_or(&0) + 1))
            .collect();
        SizeDistribution::from_counts(&counts)
    };
    let (sa, sb) = (smooth(&ha), smooth(&hb));
    let common = |h: &BTreeMap<u64, u64>, other: &BTreeMap<u64, u64>| {
        let kept: BTreeMap<u64, u64> = h
            .iter()
            .filter(|(x, _)| other.contains_key(x))
            .map(|(&x, &c)| (x, c))
            .collect();
        SizeDistribution::from_counts(&kept)
    };
    let (ca, cb) = (common(&ha, &hb), common(&hb, &ha));
    let (forward_common, backward_common) = if ca.is_empty() {
        (None, None)
    } else {
        (
            Some(kl_divergence(&ca, &cb)?),
            Some(kl_divergence(&cb, &ca)?),
        )
    };
    Ok(KlReport {
        log_base: "e",
        forward_smoothed: kl_divergence(&sa, &sb)?,
        backward_smoothed: kl_divergence(&sb, &sa)?,
        forward_common,
        backward_common,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Heatmap {
    pub row_ids: Vec<u32>,
    pub col_ids: Vec<u32>,
    /// `cells[r][c]` is the Jaccard score of row community `r` and column `c`.
    pub cells: Vec<Vec<f64>>,
    pub truncated: bool,
}

impl Heatmap {
    /// Dense tab-separated grid, one row per line.
    pub fn to_grid(&self) -> String {
        let mut out = String::new();
        for row in &self.cells {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push('\t');
                }
                let _ = write!(out, "{v:.6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Full Jaccard matrix, or its `max_cells x max_cells` corner over the
/// largest communities of each side when either side is larger.
pub fn similarity_heatmap(
    a: &CommunityStructure,
    b: &CommunityStructure,
    max_cells: usize,
) -> Result<Heatmap> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::UndefinedInput(
            "cannot compare an empty structure".into(),
        ));
    }
    if max_cells == 0 {
        return Err(Error::Config("max_cells must be positive".into()));
    }
    let truncated = a.len() > max_cells || b.len() > max_cells;
    let pick = |cs: &CommunityStructure| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..cs.len()).collect();
        if truncated {
            let comms = cs.communities();
            idx.sort_by(|&x, &y| comms[y].len().cmp(&comms[x].len()).then(x.cmp(&y)));
            idx.truncate(max_cells);
        }
        idx
    };
    let (rows, cols) = (pick(a), pick(b));
    let (ca, cb) = (a.communities(), b.communities());
    // member -> column
    let col_of: HashMap<NodeId, usize> = cols
        .iter()
        .enumerate()
        .flat_map(|(k, &j)| cb[j].members.iter().map(move |&m| (m, k)))
        .collect();
    let cells = rows
        .par_iter()
        .map(|&i| {
            let mut shared = vec![0usize; cols.len()];
            for m in &ca[i].members {
                if let Some(&k) = col_of.get(m) {
                    shared[k] += 1;
                }
            }
            cols.iter()
                .zip(&shared)
                .map(|(&j, &s)| s as f64 / (ca[i].len() + cb[j].len() - s) as f64)
                .collect()
        })
        .collect();
    Ok(Heatmap {
        row_ids: rows.iter().map(|&i| ca[i].id).collect(),
        col_ids: cols.iter().map(|&j| cb[j].id).collect(),
        cells,
        truncated,
    })
}

/// Jaccard report plus size-distribution divergences.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub similarity: SimilarityReport,
    pub kl: KlReport,
}

pub fn compare_structures(
    a: &CommunityStructure,
    b: &CommunityStructure,
) -> Result<ComparisonReport> {
    Ok(ComparisonReport {
        similarity: match_structures(a, b)?,
        kl: size_kl_report(a, b)?,
    })
}
