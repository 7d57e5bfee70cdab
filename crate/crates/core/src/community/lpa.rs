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

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::modularity::modularity_of_labels;
use super::{split_labels, Algorithm, DetectionRun};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::CommunityStructure;
use crate::seeded_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpaConfig {
    pub max_iterations: usize,
    pub rng_seed: u64,
}

impl Default for LpaConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            rng_seed: 0,
        }
    }
}

pub fn detect_lpa(g: &Graph, cfg: &LpaConfig) -> Result<CommunityStructure> {
    run_lpa(g, cfg).map(|run| run.structure)
}

/// Asynchronous label propagation.
///
/// Every node starts with its own label. Each sweep visits nodes in a fresh
/// random order and each visited node draws uniformly among the most frequent
/// labels in its neighborhood. The run stops once every node holds one of its
/// neighborhood's most frequent labels, or at `max_iterations`. Label groups
/// are finally split into connected communities.
pub fn run_lpa(g: &Graph, cfg: &LpaConfig) -> Result<DetectionRun> {
    if cfg.max_iterations == 0 {
        return Err(Error::Config("max_iterations must be at least 1".into()));
    }
    let n = g.node_count();
    let mut rng = seeded_rng(cfg.rng_seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut counts = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut best: Vec<usize> = Vec::new();

    let mut iterations = 0;
    let mut converged = false;
    let mut moves = 0;
    let mut q_trajectory = Vec::new();

    while iterations < cfg.max_iterations {
        iterations += 1;
        order.shuffle(&mut rng);
        for &u in &order {
            if g.neighbors(u).is_empty() {
                continue;
            }
            let max = tally(g, u, &labels, &mut counts, &mut touched);
            best.clear();
            best.extend(touched.iter().copied().filter(|&l| counts[l] == max));
            // ties are resampled on every visit, the current label included
            let pick = if best.len() == 1 {
                best[0]
            } else {
                best[rng.random_range(0..best.len())]
            };
            if pick != labels[u] {
                labels[u] = pick;
                moves += 1;
            }
            clear(&mut counts, &mut touched);
        }
        q_trajectory.push(modularity_of_labels(g, &labels));
        if is_stable(g, &labels, &mut counts, &mut touched) {
            converged = true;
            break;
        }
    }

    let labels = split_labels(g, &labels);
    let q = modularity_of_labels(g, &labels);
    Ok(DetectionRun {
        algorithm: Algorithm::Lpa,
        structure: CommunityStructure::from_dense_labels(g, &labels),
        iterations,
        converged,
        moves,
        q_trajectory,
        q,
    })
}

/// Counts neighbor labels of `u` into `counts` and returns the top count.
fn tally(
    g: &Graph,
    u: usize,
    labels: &[usize],
    counts: &mut [usize],
    touched: &mut Vec<usize>,
) -> usize {
    for &v in g.neighbors(u) {
        let l = labels[v];
        if counts[l] == 0 {
            touched.push(l);
        }
        counts[l] += 1;
    }
    touched.iter().map(|&l| counts[l]).max().unwrap_or(0)
}

fn clear(counts: &mut [usize], touched: &mut Vec<usize>) {
    for &l in touched.iter() {
        counts[l] = 0;
    }
    touched.clear();
}

/// True when every node's label is among its most frequent neighbor labels.
fn is_stable(g: &Graph, labels: &[usize], counts: &mut [usize], touched: &mut Vec<usize>) -> bool {
    (0..g.node_count()).all(|u| {
        if g.neighbors(u).is_empty() {
            return true;
        }
        let max = tally(g, u, labels, counts, touched);
        let ok = counts[labels[u]] == max;
        clear(counts, touched);
        ok
    })
}
