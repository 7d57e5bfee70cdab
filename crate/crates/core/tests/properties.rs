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

//! Property tests for the structural invariants of each module.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use mesograph::community::*;
use mesograph::compare::*;
use mesograph::io::*;
use mesograph::metanet::*;
use mesograph::sampling::*;
use mesograph::stats::*;
use mesograph::synth::*;
use mesograph::*;
use proptest::prelude::*;
use proptest::sample::Index;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n as NodeId, 0..n as NodeId), 0..=3 * n);
        edges.prop_map(move |e| {
            Graph::from_nodes_and_edges(&(0..n as NodeId).collect::<Vec<_>>(), &e)
        })
    })
}

fn graph_and_labels(max_n: usize, max_k: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_n).prop_flat_map(move |g| {
        let n = g.node_count();
        (Just(g), prop::collection::vec(0..max_k, n))
    })
}

fn well_formed(g: &Graph) -> Result<(), TestCaseError> {
    let mut degree_sum = 0;
    for u in 0..g.node_count() {
        let nb = g.neighbors(u);
        prop_assert!(
            nb.windows(2).all(|w| w[0] < w[1]),
            "unsorted or duplicate neighbors"
        );
        prop_assert!(!nb.contains(&u), "self-loop");
        for (&v, &w) in nb.iter().zip(g.neighbor_weights(u)) {
            prop_assert!(w >= 1);
            prop_assert!(g.neighbors(v).contains(&u), "asymmetric adjacency");
            prop_assert_eq!(g.weight(g.id(u), g.id(v)), Some(w));
        }
        degree_sum += nb.len();
    }
    prop_assert_eq!(degree_sum, 2 * g.edge_count());
    Ok(())
}

fn valid_partition(cs: &CommunityStructure, g: &Graph) -> Result<(), TestCaseError> {
    let mut seen = BTreeSet::new();
    for c in cs.communities() {
        prop_assert!(!c.members.is_empty());
        for &m in &c.members {
            prop_assert!(seen.insert(m), "node {} in two communities", m);
            prop_assert_eq!(cs.community_of(m).map(|x| x.id), Some(c.id));
        }
    }
    prop_assert_eq!(seen.into_iter().collect::<Vec<_>>(), g.ids().to_vec());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loaded_graphs_are_simple_and_symmetric(lines in prop::collection::vec((0u64..40, 0u64..40, 1u64..4), 1..120)) {
        let text: String = lines.iter().map(|(u, v, w)| format!("{u} {v} {w}\n")).collect();
        match parse_edge_list(text.as_bytes(), EdgeListDialect::Whitespace) {
            Ok(l) => {
                well_formed(&l.graph)?;
                let total: u64 = lines.iter().filter(|(u, v, _)| u != v).map(|t| t.2).sum();
                prop_assert_eq!(l.graph.total_weight(), total);
            }
            Err(Error::EmptyGraph) => prop_assert!(lines.is_empty()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn loading_ignores_line_order(lines in prop::collection::vec((0u64..30, 0u64..30), 1..80), shuffle in any::<u64>()) {
        let text = |ls: &[(u64, u64)]| ls.iter().map(|(u, v)| format!("{u}\t{v}\n")).collect::<String>();
        let mut perm = lines.clone();
        let mut rng = seeded_rng(shuffle);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let a = parse_edge_list(text(&lines).as_bytes(), EdgeListDialect::Whitespace).unwrap().graph;
        let b = parse_edge_list(text(&perm).as_bytes(), EdgeListDialect::Whitespace).unwrap().graph;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn community_files_round_trip((g, labels) in graph_and_labels(60, 10)) {
        let cs = structure_of(&g, &labels);
        let back = parse_community_structure(&format_community_structure(&cs)).unwrap();
        prop_assert_eq!(back, cs);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), n in 4usize..200, m in 1usize..4) {
        let spec = ScaleFreeSpec { n_nodes: n, edges_per_new_node: m.min(n - 1), seed };
        let a = format_edge_list(&generate_scale_free(&spec).unwrap());
        prop_assert_eq!(a, format_edge_list(&generate_scale_free(&spec).unwrap()));
        let pp = PlantedPartitionSpec { n_communities: 3, community_size: n / 4 + 1, p_in: 0.4, p_out: 0.02, seed };
        let (x, y) = (generate_planted_partition(&pp).unwrap(), generate_planted_partition(&pp).unwrap());
        prop_assert_eq!(format_edge_list(&x.graph), format_edge_list(&y.graph));
        valid_partition(&x.ground_truth, &x.graph)?;
    }

    #[test]
    fn bfs_samples_are_connected_host_subgraphs(g in graph(80), budget in 1usize..40, pick in any::<Index>()) {
        let seed_node = g.id(pick.index(g.node_count()));
        let s = sample_bfs(&g, &BfsSampleSpec { seed_node, node_budget: budget, rng_seed: 0 }).unwrap();
        prop_assert!(s.graph.contains(seed_node));
        prop_assert!(bfs_connected(&s.graph));
        for (u, v, w) in s.graph.edge_ids() {
            prop_assert_eq!(g.weight(u, v), Some(w));
        }
    }

    #[test]
    fn uniform_samples_stay_inside_the_host(g in graph(80), draws in 0u64..300, seed in any::<u64>()) {
        let spec = UniformSampleSpec { id_space_size: 200, occupancy: Occupancy::AllHostNodes, draw_count: draws, rng_seed: seed };
        let s = sample_uniform(&g, &spec).unwrap();
        for &id in s.graph.ids() {
            prop_assert!(g.contains(id));
        }
        prop_assert!(s.accepted <= draws);
    }

    #[test]
    fn fnca_identity_and_monotonicity(g in graph(40), seed in any::<u64>()) {
        let m = g.edge_count() as f64;
        let mut failures = Vec::new();
        run_fnca_observed(&g, &FncaConfig { max_iterations: 50, rng_seed: seed }, |ev| match ev {
            FncaEvent::Move { node, to, labels_before, .. } => {
                let mut after = labels_before.to_vec();
                after[node] = to;
                if scaled_modularity(&g, &after) < scaled_modularity(&g, labels_before) {
                    failures.push(format!("move of {node} lowered Q"));
                }
            }
            FncaEvent::SweepEnd { state, .. } => {
                let q = if m == 0.0 { 0.0 } else { scaled_modularity(&g, &state.labels) as f64 / (4.0 * m * m) };
                if (state.q_from_f() - q).abs() > 1e-9 {
                    failures.push(format!("identity off by {}", state.q_from_f() - q));
                }
            }
        }).unwrap();
        prop_assert!(failures.is_empty(), "{:?}", failures);
    }

    #[test]
    fn detectors_return_deterministic_partitions(g in graph(50), seed in any::<u64>()) {
        let l = detect_lpa(&g, &LpaConfig { max_iterations: 50, rng_seed: seed }).unwrap();
        let f = detect_fnca(&g, &FncaConfig { max_iterations: 50, rng_seed: seed }).unwrap();
        valid_partition(&l, &g)?;
        valid_partition(&f, &g)?;
        prop_assert_eq!(&l, &detect_lpa(&g, &LpaConfig { max_iterations: 50, rng_seed: seed }).unwrap());
        prop_assert_eq!(&f, &detect_fnca(&g, &FncaConfig { max_iterations: 50, rng_seed: seed }).unwrap());
    }

    #[test]
    fn converged_lpa_labels_are_neighborhood_maxima(g in graph(50), seed in any::<u64>()) {
        let run = run_lpa(&g, &LpaConfig { max_iterations: 50, rng_seed: seed }).unwrap();
        prop_assume!(run.converged);
        let labels = labels_of(&g, &run.structure);
        for u in 0..g.node_count() {
            let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
            for &v in g.neighbors(u) {
                *freq.entry(labels[v]).or_default() += 1;
            }
            if let Some(&top) = freq.values().max() {
                prop_assert_eq!(freq.get(&labels[u]).copied().unwrap_or(0), top, "node {} not at a maximum", u);
            }
        }
    }

    #[test]
    fn split_contiguous_refines_and_is_idempotent((g, labels) in graph_and_labels(50, 5)) {
        let cs = structure_of(&g, &labels);
        let split = split_contiguous(&g, &cs).unwrap();
        valid_partition(&split, &g)?;
        for c in split.communities() {
            prop_assert_eq!(induced_components(&g, &c.members).len(), 1);
            let parent = cs.community_of(c.members[0]).unwrap().id;
            prop_assert!(c.members.iter().all(|&m| cs.community_of(m).unwrap().id == parent));
        }
        prop_assert_eq!(split_contiguous(&g, &split).unwrap(), split);
    }

    #[test]
    fn meta_network_conserves_edges((g, labels) in graph_and_labels(60, 8)) {
        let cs = structure_of(&g, &labels);
        let mn = build_meta_network(&g, &cs).unwrap();
        well_formed(&mn.graph)?;
        prop_assert_eq!(mn.inter_weight() + mn.intra_weight() + mn.unassigned_weight, g.total_weight());
        prop_assert!(mn.community_sizes.values().all(|&s| s >= 2));
        let kept = build_meta_network_with(&g, &cs, MetaNetworkOptions { keep_singletons: true }).unwrap();
        prop_assert_eq!(kept.inter_weight() + kept.intra_weight(), g.total_weight());
        prop_assert_eq!(kept.unassigned_weight, 0);
    }

    #[test]
    fn meta_network_ignores_community_relabeling((g, labels) in graph_and_labels(60, 8), shift in 1usize..50) {
        let a = build_meta_network(&g, &structure_of(&g, &labels)).unwrap();
        // reversing label order changes which community gets which id
        let relabeled: Vec<usize> = labels.iter().map(|&l| 1000 - l * shift).collect();
        let b = build_meta_network(&g, &structure_of(&g, &relabeled)).unwrap();
        let canon = |mn: &MetaNetwork| {
            let mut e: Vec<(u64, u64, u64)> = mn.graph.edge_ids()
                .map(|(u, v, w)| {
                    let (su, sv) = (mn.community_sizes[&(u as u32)], mn.community_sizes[&(v as u32)]);
                    (su.min(sv), su.max(sv), w)
                })
                .collect();
            e.sort_unstable();
            let mut s: Vec<u64> = mn.community_sizes.values().copied().collect();
            s.sort_unstable();
            (e, s)
        };
        prop_assert_eq!(canon(&a), canon(&b));
    }

    #[test]
    fn jaccard_is_symmetric(v in prop::collection::btree_set(0u64..60, 0..30), w in prop::collection::btree_set(0u64..60, 0..30)) {
        let (v, w): (Vec<_>, Vec<_>) = (v.into_iter().collect(), w.into_iter().collect());
        match (binary_jaccard(&v, &w), binary_jaccard(&w, &v)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a, b);
                prop_assert!((0.0..=1.0).contains(&a));
            }
            (Err(_), Err(_)) => prop_assert!(v.is_empty() && w.is_empty()),
            _ => prop_assert!(false, "asymmetric error"),
        }
    }

    #[test]
    fn similarity_report_consistency((g, la) in graph_and_labels(60, 10), lb in prop::collection::vec(0usize..10, 60)) {
        let a = structure_of(&g, &la);
        let b = structure_of(&g, &lb[..g.node_count()]);
        let r = match_structures(&a, &b).unwrap();
        let mean = r.per_community_best.iter().map(|m| m.score).sum::<f64>() / r.n as f64;
        prop_assert!((r.mean - mean).abs() <= 1e-12);
        prop_assert_eq!(r.n, a.len());
        let ident = r.per_community_best.iter().filter(|m| m.score == 1.0).count() as f64 / r.n as f64;
        prop_assert_eq!(r.identical_fraction, ident);
        prop_assert_eq!(match_structures(&a, &a).unwrap().mean, 1.0);
    }

    #[test]
    fn kl_is_nonnegative_and_zero_on_identity(p in prop::collection::btree_map(1u64..30, 1u64..50, 1..15), q in prop::collection::btree_map(1u64..30, 1u64..50, 1..15)) {
        let union: BTreeSet<u64> = p.keys().chain(q.keys()).copied().collect();
        let smooth = |h: &BTreeMap<u64, u64>| {
            SizeDistribution::from_counts(&union.iter().map(|&x| (x, h.get(&x).unwrap_or(&0) + 1)).collect())
        };
        let (sp, sq) = (smooth(&p), smooth(&q));
        prop_assert!(kl_divergence(&sp, &sq).unwrap() >= 0.0);
        prop_assert_eq!(kl_divergence(&sp, &sp).unwrap(), 0.0);
    }

    #[test]
    fn pmfs_sum_to_one((g, labels) in graph_and_labels(60, 12)) {
        let cs = structure_of(&g, &labels);
        let mut pmfs = vec![size_distribution(&cs).unwrap(), degree_distribution(&g).unwrap()];
        if let Ok(d) = shortest_path_distribution(&g, &DistanceOptions::default()) {
            pmfs.push(d);
        }
        let mn = build_meta_network(&g, &cs).unwrap();
        if let Ok((w, s)) = weight_strength_distributions(&mn) {
            pmfs.push(w);
            pmfs.push(s);
        }
        for (i, d) in pmfs.iter().enumerate() {
            prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12, "pmf {} = {:?}", i, d);
            prop_assert!(d.probs().iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn clustering_matches_brute_force(g in graph(50)) {
        let r = clustering(&g);
        let want = brute_clustering(&g);
        prop_assert_eq!(&r.per_node, &want);
        if !want.is_empty() {
            prop_assert_eq!(r.average, want.values().sum::<f64>() / want.len() as f64);
        }
        prop_assert!(want.values().all(|c| (0.0..=1.0).contains(c)));
    }

    #[test]
    fn hop_plot_matches_apsp(g in graph(60)) {
        let hp = hop_plot(&g, &DistanceOptions::default()).unwrap();
        let (hist, unreachable) = distance_counts(&floyd_warshall(&g));
        let mut acc = 0;
        for h in 1..hp.hop_counts.len() {
            acc += hist.get(&(h as u32)).copied().unwrap_or(0);
            prop_assert_eq!(hp.hop_counts[h], acc);
        }
        prop_assert!(hp.cdf.windows(2).all(|w| w[0] <= w[1]));
        if acc > 0 {
            prop_assert!((hp.cdf.last().unwrap() - 1.0).abs() < 1e-15);
        }
        prop_assert!(hp.effective_diameter <= hp.max_distance as f64);
        prop_assert_eq!(hp.exact_diameter.is_some(), unreachable == 0);
    }

    #[test]
    fn density_map_is_symmetric((g, labels) in graph_and_labels(60, 10)) {
        let cs = structure_of(&g, &labels);
        if let Ok(map) = edge_density_map(&g, &cs, LogBins::default()) {
            for (a, row) in map.grid.iter().enumerate() {
                for (b, &x) in row.iter().enumerate() {
                    prop_assert_eq!(x, map.grid[b][a]);
                }
            }
            let total: f64 = map.grid.iter().flatten().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn outlier_counts_exceed_their_thresholds(sizes in prop::collection::vec(1u64..200_000, 0..40), edges in 0u64..1_000_000_000) {
        let r = outliers_from_sizes(&sizes, edges);
        for (&t, &c) in &r.counts_by_threshold {
            prop_assert_eq!(c, sizes.iter().filter(|&&s| s > t).count());
        }
        prop_assert_eq!(r.resolution_threshold, (edges as f64 / 2.0).sqrt());
    }
}

#[test]
fn accepted_ids_are_uniform_over_existing_ids() {
    // 100 existing ids spread over an id space of 1000
    let nodes: Vec<NodeId> = (0..100).map(|i| i * 10 + 3).collect();
    let host = Graph::from_nodes_and_edges(&nodes, &[]);
    let d = draw_uniform(
        &host,
        &UniformSampleSpec {
            id_space_size: 1_000,
            occupancy: Occupancy::AllHostNodes,
            draw_count: 100_000,
            rng_seed: 29,
        },
    )
    .unwrap();
    let mut counts: BTreeMap<NodeId, u64> = nodes.iter().map(|&n| (n, 0)).collect();
    for id in &d.accepted {
        *counts.get_mut(id).unwrap() += 1;
    }
    let chi2 = chi_square_uniform(&counts.values().copied().collect::<Vec<_>>());
    assert!(chi2 < CHI2_99_CRIT_001, "chi-square {chi2}");
}

#[test]
fn bfs_bias_on_small_budgets() {
    for seed in 0..5 {
        let host = generate_scale_free(&ScaleFreeSpec {
            n_nodes: 3_000,
            edges_per_new_node: 2,
            seed,
        })
        .unwrap();
        let host_mean = host.mean_degree();
        let s = sample_bfs(
            &host,
            &BfsSampleSpec {
                seed_node: random_node(&host, seed).unwrap(),
                node_budget: 250,
                rng_seed: seed,
            },
        )
        .unwrap();
        let summary = sample_summary(&s, &host).unwrap();
        assert!(summary.mean_degree_visited >= host_mean, "seed {seed}");
    }
}

#[test]
fn sampled_hop_plot_converges_to_exact() {
    let g = generate_scale_free(&ScaleFreeSpec {
        n_nodes: 1_500,
        edges_per_new_node: 2,
        seed: 30,
    })
    .unwrap();
    let exact = shortest_path_distribution(&g, &DistanceOptions::default()).unwrap();
    let sizes = [15, 60, 240, 960, 1_500];
    let errors: Vec<f64> = sizes
        .iter()
        .map(|&k| {
            (0..20)
                .map(|seed| {
                    let opts = DistanceOptions {
                        exact_threshold: 0,
                        sample_sources: k,
                        rng_seed: seed,
                    };
                    let est = shortest_path_distribution(&g, &opts).unwrap();
                    exact
                        .iter()
                        .map(|(x, p)| (est.prob(x) - p).abs())
                        .sum::<f64>()
                })
                .sum::<f64>()
                / 20.0
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert_eq!(*errors.last().unwrap(), 0.0);
}
