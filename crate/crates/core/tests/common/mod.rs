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

//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's algorithms; only the plain graph container is
//! shared.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use mesograph::{seeded_rng, CommunityStructure, Graph, NodeId, Rng};
use rand::Rng as _;

/// Erdős–Rényi graph on ids `0..n`; every id is a node even when isolated.
pub fn random_graph(rng: &mut Rng, n: usize, p: f64) -> Graph {
    let nodes: Vec<NodeId> = (0..n as NodeId).collect();
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_nodes_and_edges(&nodes, &edges)
}

/// Labels in `0..k` for `n` dense positions.
pub fn random_labels(rng: &mut Rng, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k.max(1))).collect()
}

/// Groups node ids by label, in label order.
pub fn structure_of(g: &Graph, labels: &[usize]) -> CommunityStructure {
    let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(g.id(i));
    }
    CommunityStructure::from_groups(groups.into_values().collect()).unwrap()
}

/// Label per dense node position, read back from a structure.
pub fn labels_of(g: &Graph, cs: &CommunityStructure) -> Vec<usize> {
    let mut labels = vec![usize::MAX; g.node_count()];
    for (c, comm) in cs.communities().iter().enumerate() {
        for &m in &comm.members {
            labels[g.index_of(m).unwrap()] = c;
        }
    }
    labels
}

fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v, _) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// `1/2m Σ_ij (A_ij - k_i k_j / 2m) δ(c_i, c_j)` by the full double sum.
pub fn double_sum_modularity(g: &Graph, labels: &[usize]) -> f64 {
    let n = g.node_count();
    let a = adjacency(g);
    let k: Vec<f64> = (0..n)
        .map(|i| a[i].iter().filter(|&&x| x).count() as f64)
        .collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += f64::from(u8::from(a[i][j])) - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// `(2m)^2 Q` as an exact integer, so modularity changes can be compared
/// without rounding.
pub fn scaled_modularity(g: &Graph, labels: &[usize]) -> i128 {
    let mut intra: HashMap<usize, i128> = HashMap::new();
    let mut dsum: HashMap<usize, i128> = HashMap::new();
    let mut m = 0i128;
    for (u, v, _) in g.edges() {
        m += 1;
        *dsum.entry(labels[u]).or_default() += 1;
        *dsum.entry(labels[v]).or_default() += 1;
        if labels[u] == labels[v] {
            *intra.entry(labels[u]).or_default() += 1;
        }
    }
    let two_m = 2 * m;
    let l: i128 = intra.values().sum();
    two_m * 2 * l - dsum.values().map(|d| d * d).sum::<i128>()
}

/// Normalized mutual information, `I / sqrt(H_a H_b)`, from the confusion
/// matrix over nodes present in both structures.
pub fn nmi(a: &CommunityStructure, b: &CommunityStructure) -> f64 {
    let mut la = HashMap::new();
    for (i, c) in a.communities().iter().enumerate() {
        for &m in &c.members {
            la.insert(m, i);
        }
    }
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut n = 0.0;
    for (j, c) in b.communities().iter().enumerate() {
        for m in &c.members {
            if let Some(&i) = la.get(m) {
                *joint.entry((i, j)).or_default() += 1.0;
                n += 1.0;
            }
        }
    }
    let mut pa: HashMap<usize, f64> = HashMap::new();
    let mut pb: HashMap<usize, f64> = HashMap::new();
    for (&(i, j), &c) in &joint {
        *pa.entry(i).or_default() += c;
        *pb.entry(j).or_default() += c;
    }
    let h = |p: &HashMap<usize, f64>| -p.values().map(|&c| c / n * (c / n).ln()).sum::<f64>();
    let (ha, hb) = (h(&pa), h(&pb));
    let mut mi = 0.0;
    for (&(i, j), &c) in &joint {
        let pij = c / n;
        mi += pij * (pij / (pa[&i] / n * pb[&j] / n)).ln();
    }
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    if ha == 0.0 || hb == 0.0 {
        return 0.0;
    }
    mi / (ha * hb).sqrt()
}

/// All-pairs hop distances by Floyd–Warshall, indexed by dense position.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.node_count();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for (u, v, _) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|x| ik + kj < x) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Histogram of distances over ordered pairs `i != j`, plus unreachable count.
pub fn distance_counts(d: &[Vec<Option<u32>>]) -> (BTreeMap<u32, u64>, u64) {
    let mut hist = BTreeMap::new();
    let mut unreachable = 0;
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            match x {
                Some(h) => *hist.entry(*h).or_insert(0) += 1,
                None => unreachable += 1,
            }
        }
    }
    (hist, unreachable)
}

/// Local clustering by checking every neighbor pair; nodes of degree < 2
/// are omitted.
pub fn brute_clustering(g: &Graph) -> BTreeMap<NodeId, f64> {
    let n = g.node_count();
    let a = adjacency(g);
    let mut out = BTreeMap::new();
    for i in 0..n {
        let k = (0..n).filter(|&j| a[i][j]).count();
        if k < 2 {
            continue;
        }
        let mut closed = 0u64;
        for v in 0..n {
            for w in v + 1..n {
                if a[i][v] && a[i][w] && a[v][w] {
                    closed += 1;
                }
            }
        }
        out.insert(g.id(i), 2.0 * closed as f64 / (k * (k - 1)) as f64);
    }
    out
}

/// Connected components of the subgraph induced by `members`, by union-find.
pub fn induced_components(g: &Graph, members: &[NodeId]) -> BTreeSet<Vec<NodeId>> {
    let idx: HashMap<NodeId, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for (u, v, _) in g.edge_ids() {
        if let (Some(&a), Some(&b)) = (idx.get(&u), idx.get(&v)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (i, &m) in members.iter().enumerate() {
        groups.entry(find(&mut parent, i)).or_default().push(m);
    }
    groups
        .into_values()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect()
}

/// Is the graph connected, by plain BFS over ids.
pub fn bfs_connected(g: &Graph) -> bool {
    let ids = g.ids();
    if ids.is_empty() {
        return true;
    }
    let mut seen = BTreeSet::from([ids[0]]);
    let mut q = VecDeque::from([ids[0]]);
    while let Some(u) = q.pop_front() {
        for v in g.neighbor_ids(u).unwrap() {
            if seen.insert(v) {
                q.push_back(v);
            }
        }
    }
    seen.len() == ids.len()
}

/// Inverse-CDF draws from a discrete power law `P(x) ∝ x^-γ`, `x ≥ x_min`.
/// The first `TABLE` values are summed directly; beyond that the tail is
/// drawn from its continuous approximation `(x - 1/2)^(1-γ) / (γ - 1)`.
pub fn power_law_draws(gamma: f64, x_min: u64, n: usize, seed: u64) -> Vec<u64> {
    const TABLE: u64 = 100_000;
    let mut cdf = Vec::with_capacity(TABLE as usize);
    let mut acc = 0.0;
    for x in x_min..x_min + TABLE {
        acc += (x as f64).powf(-gamma);
        cdf.push(acc);
    }
    let edge = (x_min + TABLE) as f64 - 0.5;
    let tail = edge.powf(1.0 - gamma) / (gamma - 1.0);
    let total = acc + tail;
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            if u < acc {
                x_min + cdf.partition_point(|&c| c < u) as u64
            } else {
                let r = (u - acc) / tail;
                let x = edge * (1.0 - r).powf(-1.0 / (gamma - 1.0)) + 0.5;
                (x.floor() as u64).max(x_min + TABLE)
            }
        })
        .collect()
}

/// Power law truncated to `[1, hi]`.
pub fn truncated_power_law_draws(gamma: f64, hi: u64, n: usize, seed: u64) -> Vec<u64> {
    let weights: Vec<f64> = (1..=hi).map(|x| (x as f64).powf(-gamma)).collect();
    let total: f64 = weights.iter().sum();
    let mut cdf = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in weights {
        acc += w / total;
        cdf.push(acc);
    }
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            1 + cdf.partition_point(|&c| c < u).min(cdf.len() - 1) as u64
        })
        .collect()
}

/// Pearson chi-square statistic against a flat expectation.
pub fn chi_square_uniform(observed: &[u64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let e = total as f64 / observed.len() as f64;
    observed.iter().map(|&o| (o as f64 - e).powi(2) / e).sum()
}

/// Upper 1% point of chi-square with 99 degrees of freedom.
pub const CHI2_99_CRIT_001: f64 = 134.642;

/// Community TSV written from scratch: id, tab, comma-joined sorted members.
pub fn serialize_communities(groups: &[(u32, Vec<NodeId>)]) -> String {
    let mut out = String::new();
    for (id, members) in groups {
        let mut m = members.clone();
        m.sort_unstable();
        let joined: Vec<String> = m.iter().map(|x| x.to_string()).collect();
        out += &format!("{id}\t{}\n", joined.join(","));
    }
    out
}

/// Meta-edge weights from one pass over the base edges, keyed by the
/// unordered label pair, plus intra-edge counts per label.
pub fn classify_edges(
    g: &Graph,
    labels: &[usize],
) -> (BTreeMap<(usize, usize), u64>, BTreeMap<usize, u64>) {
    let mut inter = BTreeMap::new();
    let mut intra = BTreeMap::new();
    for (u, v, _) in g.edges() {
        let (a, b) = (labels[u], labels[v]);
        if a == b {
            *intra.entry(a).or_insert(0) += 1;
        } else {
            *inter.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    (inter, intra)
}

/// Two K5 cliques on ids 0..5 and 5..10 joined by the edge 4-5.
pub fn two_k5() -> Graph {
    let mut e = vec![];
    for base in [0u64, 5] {
        for u in 0..5 {
            for v in u + 1..5 {
                e.push((base + u, base + v));
            }
        }
    }
    e.push((4, 5));
    Graph::from_edges(&e)
}

/// Path on ids `0..n`.
pub fn path(n: u64) -> Graph {
    let e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(&e)
}

/// Linear-interpolated smallest `h` with `F(h) >= q`, where `F(h)` is the
/// fraction of reachable ordered pairs at distance `<= h`, and `F(0) = 0`.
pub fn interpolated_percentile(hist: &BTreeMap<u32, u64>, q: f64) -> f64 {
    let total: u64 = hist.values().sum();
    let max = *hist.keys().last().unwrap();
    let mut prev = 0.0;
    let mut cum = 0u64;
    for h in 1..=max {
        cum += hist.get(&h).copied().unwrap_or(0);
        let f = cum as f64 / total as f64;
        if f >= q {
            if h == 1 {
                return 1.0;
            }
            return (h - 1) as f64 + (q - prev) / (f - prev);
        }
        prev = f;
    }
    max as f64
}
