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

//! End-to-end driver: host graph, optional crawl, detection, meta-networks,
//! comparison and statistics, with every artifact checksummed.
//!
//! Artifacts depend only on the configuration, so two runs of the same
//! configuration write byte-identical files. Wall-clock timings go to
//! `timings.json`, which is deliberately left out of the manifest.

mod config;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use config::{
    DetectConfig, GenConfig, GenModel, PipelineConfig, SampleConfig, Stage, StatsConfig,
};
pub use report::{emit_report, Report, ReportFiles};

use crate::community::{run_fnca, run_lpa, Algorithm, DetectionRun, FncaConfig, LpaConfig};
use crate::compare::{compare_structures, similarity_heatmap, ComparisonReport};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{format_community_structure, format_edge_list, load_edge_list};
use crate::metanet::{
    build_meta_network_with, format_meta_network, node_table_path, MetaNetwork, MetaNetworkOptions,
    MetaSummary,
};
use crate::partition::CommunityStructure;
use crate::sampling::{
    random_node, sample_bfs, sample_summary, sample_uniform, BfsSampleSpec, Occupancy,
    SampleMethod, SampleSummary, UniformSampleSpec,
};
use crate::stats::{
    clustering, degree_distribution, detect_outliers, edge_density_map, fit_power_law, hop_plot,
    link_fraction, shortest_path_distribution, size_distribution, weight_strength_distributions,
    DistanceOptions, LinkMode, LogBins, OutlierReport, PowerLawFit, PowerLawOptions,
    SizeDistribution,
};
use crate::synth::{
    generate_planted_partition, generate_scale_free, PlantedPartitionSpec, ScaleFreeSpec,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Artifact {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphInfo {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub density: f64,
    pub largest_component_fraction: f64,
}

impl GraphInfo {
    fn of(g: &Graph) -> Self {
        Self {
            nodes: g.node_count(),
            edges: g.edge_count(),
            mean_degree: g.mean_degree(),
            density: g.density(),
            largest_component_fraction: g.largest_component_fraction(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionRecord {
    pub algorithm: Algorithm,
    pub communities: usize,
    pub singletons: usize,
    pub largest: u64,
    pub modularity: f64,
    pub iterations: usize,
    pub converged: bool,
    pub moves: usize,
    pub q_trajectory: Vec<f64>,
    pub community_file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetaRecord {
    pub algorithm: Algorithm,
    pub summary: MetaSummary,
    pub largest_component_fraction: f64,
    pub mean_degree: f64,
    pub density: f64,
    pub unassigned_weight: u64,
    pub edge_file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRecord {
    pub former: Algorithm,
    pub latter: Algorithm,
    pub report: ComparisonReport,
    pub heatmap_truncated: bool,
}

/// A power-law fit, or the reason none was attempted or it failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitOutcome {
    pub fit: Option<PowerLawFit>,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureStats {
    /// Summary of a graph: effective diameter, average clustering and fits.
    pub effective_diameter: f64,
    pub exact_diameter: Option<u32>,
    pub unreachable_fraction: f64,
    pub hop_sampled: bool,
    pub average_clustering: f64,
    pub degree_fit: FitOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmStats {
    pub algorithm: Algorithm,
    pub size_fit: FitOutcome,
    pub outliers: OutlierReport,
    /// `None` when no base edge crosses communities.
    pub inter_edges: Option<u64>,
    pub meta: Option<StructureStats>,
    pub meta_weight_fit: Option<FitOutcome>,
}

/// Everything a run produced, in memory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub version: &'static str,
    pub config: BTreeMap<&'static str, String>,
    pub seeds: BTreeMap<&'static str, u64>,
    pub stages: Vec<Stage>,
    pub host: GraphInfo,
    pub sample: Option<SampleSummary>,
    /// Graph the detectors and statistics ran on: the sample if one was drawn.
    pub analyzed: GraphInfo,
    pub detections: Vec<DetectionRecord>,
    pub metanets: Vec<MetaRecord>,
    pub comparison: Option<ComparisonRecord>,
    pub graph_stats: Option<StructureStats>,
    pub algorithm_stats: Vec<AlgorithmStats>,
    pub artifacts: Vec<Artifact>,
    /// Seconds per stage, plus `detect.<algo>` per detector.
    pub timings: BTreeMap<String, f64>,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a BTreeMap<&'static str, String>,
    seeds: &'a BTreeMap<&'static str, u64>,
    stages: &'a [Stage],
    artifacts: &'a [Artifact],
}

struct Writer {
    root: PathBuf,
    artifacts: Vec<Artifact>,
}

impl Writer {
    fn put(&mut self, rel: &str, contents: &[u8]) -> Result<String> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.artifacts.push(Artifact {
            path: rel.to_owned(),
            bytes: contents.len() as u64,
            sha256: hex::encode(Sha256::digest(contents)),
        });
        Ok(rel.to_owned())
    }

    fn text(&mut self, rel: &str, contents: &str) -> Result<String> {
        self.put(rel, contents.as_bytes())
    }

    fn json(&mut self, rel: &str, value: &impl Serialize) -> Result<String> {
        self.text(rel, &to_json(value))
    }
}

pub(crate) fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn fit_outcome(samples: &[u64], cfg: &StatsConfig, seed_offset: u64) -> FitOutcome {
    let opts = PowerLawOptions {
        two_regime: cfg.two_regime,
        split_hint: Some(cfg.split),
        bootstrap: cfg.bootstrap,
        seed: cfg.stats_seed(seed_offset),
        ..PowerLawOptions::default()
    };
    match fit_power_law(samples, &opts) {
        Ok(fit) => FitOutcome {
            fit: Some(fit),
            skipped: None,
        },
        Err(e) => FitOutcome {
            fit: None,
            skipped: Some(e.to_string()),
        },
    }
}

impl StatsConfig {
    fn stats_seed(&self, offset: u64) -> u64 {
        self.seed
            .wrapping_add(offset.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn distance(&self, offset: u64) -> DistanceOptions {
        DistanceOptions {
            exact_threshold: self.exact_threshold,
            sample_sources: self.sample_sources,
            rng_seed: self.stats_seed(offset),
        }
    }
}

fn pmf_file(w: &mut Writer, rel: &str, d: &SizeDistribution) -> Result<()> {
    w.text(rel, &d.to_plot_data()).map(drop)
}

/// Distances, clustering and degree statistics of one graph, with plot data
/// written under `prefix`.
fn structure_stats(
    w: &mut Writer,
    g: &Graph,
    prefix: &str,
    cfg: &StatsConfig,
    offset: u64,
) -> Result<StructureStats> {
    let degrees = degree_distribution(g)?;
    pmf_file(w, &format!("{prefix}.degree.tsv"), &degrees)?;

    let cl = clustering(g);
    let bins: String = cl
        .value_histogram
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let total = cl.per_node.len().max(1) as f64;
            format!(
                "{:.2}\t{:.12e}\n",
                (i as f64 + 0.5) / 10.0,
                c as f64 / total
            )
        })
        .collect();
    w.text(&format!("{prefix}.clustering.tsv"), &bins)?;

    let dist = cfg.distance(offset);
    let hop = hop_plot(g, &dist)?;
    w.text(&format!("{prefix}.hop.tsv"), &hop.to_plot_data())?;
    if hop.hop_counts.last().copied().unwrap_or(0) > 0 {
        pmf_file(
            w,
            &format!("{prefix}.paths.tsv"),
            &shortest_path_distribution(g, &dist)?,
        )?;
    }

    let degree_values: Vec<u64> = (0..g.node_count())
        .map(|u| g.degree_at(u) as u64)
        .filter(|&k| k > 0)
        .collect();
    Ok(StructureStats {
        effective_diameter: hop.effective_diameter,
        exact_diameter: hop.exact_diameter,
        unreachable_fraction: hop.unreachable_fraction,
        hop_sampled: hop.sampled,
        average_clustering: cl.average,
        degree_fit: fit_outcome(&degree_values, cfg, offset),
    })
}

fn detect(g: &Graph, algo: Algorithm, cfg: &DetectConfig) -> Result<DetectionRun> {
    match algo {
        Algorithm::Lpa => run_lpa(
            g,
            &LpaConfig {
                max_iterations: cfg.max_iterations,
                rng_seed: cfg.seed,
            },
        ),
        Algorithm::Fnca => run_fnca(
            g,
            &FncaConfig {
                max_iterations: cfg.max_iterations,
                rng_seed: cfg.seed,
            },
        ),
    }
}

fn stage<T>(st: Stage, f: impl FnOnce() -> Result<T>) -> Result<T> {
    f().map_err(Error::in_stage(st.name()))
}

/// Runs the selected stages in order and writes their artifacts plus
/// `manifest.json` and `timings.json` under the output directory.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let root = cfg.output_dir.clone();
    fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
    let mut w = Writer {
        root: root.clone(),
        artifacts: Vec::new(),
    };
    let mut timings = BTreeMap::new();
    let has = |s| cfg.stages.contains(&s);
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut BTreeMap<String, f64>| {
        timings.insert(name.to_owned(), clock.elapsed().as_secs_f64());
        clock = Instant::now();
    };

    // host
    let host = if has(Stage::Gen) {
        let host = stage(Stage::Gen, || {
            let g = &cfg.gen;
            let host = match g.model {
                GenModel::Planted => {
                    let pp = generate_planted_partition(&PlantedPartitionSpec {
                        n_communities: g.communities,
                        community_size: g.community_size,
                        p_in: g.p_in,
                        p_out: g.p_out,
                        seed: g.seed,
                    })?;
                    w.text(
                        "gen/truth.tsv",
                        &format_community_structure(&pp.ground_truth),
                    )?;
                    pp.graph
                }
                GenModel::ScaleFree => generate_scale_free(&ScaleFreeSpec {
                    n_nodes: g.nodes,
                    edges_per_new_node: g.edges_per_node,
                    seed: g.seed,
                })?,
            };
            w.text("gen/host.edges", &format_edge_list(&host))?;
            Ok(host)
        })?;
        lap("gen", &mut timings);
        host
    } else {
        let first = *cfg.stages.iter().next().expect("validated");
        let path = cfg.input.as_ref().expect("validated");
        stage(first, || {
            load_edge_list(path, cfg.input_format).map(|l| l.graph)
        })?
    };

    // sample
    let mut sample = None;
    let analyzed = if has(Stage::Sample) {
        let (summary, graph) = stage(Stage::Sample, || {
            let s = &cfg.sample;
            let sample = match s.method {
                SampleMethod::Bfs => {
                    let start = match s.start {
                        Some(id) => id,
                        None => random_node(&host, s.seed).ok_or(Error::EmptyGraph)?,
                    };
                    sample_bfs(
                        &host,
                        &BfsSampleSpec {
                            seed_node: start,
                            node_budget: s.budget,
                            rng_seed: s.seed,
                        },
                    )?
                }
                SampleMethod::Uniform => {
                    let max_id = host.ids().last().copied().ok_or(Error::EmptyGraph)?;
                    let id_space = s
                        .id_space
                        .unwrap_or(max_id.saturating_add(1).saturating_mul(8));
                    sample_uniform(
                        &host,
                        &UniformSampleSpec {
                            id_space_size: id_space,
                            occupancy: if s.unlistable_fraction > 0.0 {
                                Occupancy::Restricted {
                                    unlistable_fraction: s.unlistable_fraction,
                                }
                            } else {
                                Occupancy::AllHostNodes
                            },
                            draw_count: s.draws.unwrap_or(8 * s.budget as u64),
                            rng_seed: s.seed,
                        },
                    )?
                }
            };
            let summary = sample_summary(&sample, &host)?;
            w.text("sample/sample.edges", &format_edge_list(&sample.graph))?;
            w.json("sample/summary.json", &summary)?;
            Ok((summary, sample.graph))
        })?;
        lap("sample", &mut timings);
        sample = Some(summary);
        graph
    } else {
        host.clone()
    };

    // detect
    let mut detections = Vec::new();
    let mut structures: Vec<(Algorithm, CommunityStructure)> = Vec::new();
    if has(Stage::Detect) {
        stage(Stage::Detect, || {
            if analyzed.is_empty() {
                return Err(Error::EmptyGraph);
            }
            for &algo in &cfg.detect.algorithms {
                let t = Instant::now();
                let run = detect(&analyzed, algo, &cfg.detect)?;
                timings.insert(format!("detect.{}", algo.name()), t.elapsed().as_secs_f64());
                let file = w.text(
                    &format!("detect/{}.tsv", algo.name()),
                    &format_community_structure(&run.structure),
                )?;
                let sizes = run.structure.sizes();
                let record = DetectionRecord {
                    algorithm: algo,
                    communities: run.structure.len(),
                    singletons: sizes.iter().filter(|&&s| s == 1).count(),
                    largest: sizes.iter().copied().max().unwrap_or(0),
                    modularity: run.q,
                    iterations: run.iterations,
                    converged: run.converged,
                    moves: run.moves,
                    q_trajectory: run.q_trajectory,
                    community_file: file,
                };
                w.json(&format!("detect/{}.json", algo.name()), &record)?;
                detections.push(record);
                structures.push((algo, run.structure));
            }
            Ok(())
        })?;
        lap("detect", &mut timings);
    }

    // meta-networks
    let mut metanets = Vec::new();
    let mut meta_graphs: Vec<(Algorithm, MetaNetwork)> = Vec::new();
    if has(Stage::Metanet) {
        stage(Stage::Metanet, || {
            for (algo, cs) in &structures {
                let mn = build_meta_network_with(
                    &analyzed,
                    cs,
                    MetaNetworkOptions {
                        keep_singletons: cfg.keep_singletons,
                    },
                )?;
                let rel = format!("metanet/{}.edges", algo.name());
                let (edges, table) = format_meta_network(&mn);
                let edge_file = w.text(&rel, &edges)?;
                let nodes_rel = node_table_path(Path::new(&rel))
                    .to_string_lossy()
                    .replace('\\', "/");
                w.text(&nodes_rel, &table)?;
                let record = MetaRecord {
                    algorithm: *algo,
                    summary: mn.summary(),
                    largest_component_fraction: mn.graph.largest_component_fraction(),
                    mean_degree: mn.graph.mean_degree(),
                    density: mn.graph.density(),
                    unassigned_weight: mn.unassigned_weight,
                    edge_file,
                };
                w.json(&format!("metanet/{}.json", algo.name()), &record)?;
                metanets.push(record);
                meta_graphs.push((*algo, mn));
            }
            Ok(())
        })?;
        lap("metanet", &mut timings);
    }

    // comparison, former against latter with FNCA first when present
    let mut comparison = None;
    if has(Stage::Compare) {
        comparison = Some(stage(Stage::Compare, || {
            let mut pair: Vec<&(Algorithm, CommunityStructure)> =
                structures.iter().take(2).collect();
            pair.sort_by_key(|(a, _)| *a != Algorithm::Fnca);
            let ((former, a), (latter, b)) = (pair[0], pair[1]);
            let report = compare_structures(a, b)?;
            let heat = similarity_heatmap(a, b, cfg.heatmap_cells)?;
            let stem = format!("compare/{}_vs_{}", former.name(), latter.name());
            w.text(&format!("{stem}.heatmap.tsv"), &heat.to_grid())?;
            let record = ComparisonRecord {
                former: *former,
                latter: *latter,
                report,
                heatmap_truncated: heat.truncated,
            };
            w.json(&format!("{stem}.json"), &record)?;
            Ok(record)
        })?);
        lap("compare", &mut timings);
    }

    // statistics
    let mut graph_stats = None;
    let mut algorithm_stats = Vec::new();
    if has(Stage::Stats) {
        stage(Stage::Stats, || {
            let s = &cfg.stats;
            let gs = structure_stats(&mut w, &analyzed, "stats/graph", s, 0)?;
            w.json("stats/graph.json", &gs)?;
            graph_stats = Some(gs);
            for (i, (algo, cs)) in structures.iter().enumerate() {
                let name = algo.name();
                let offset = 1 + 2 * i as u64;
                pmf_file(
                    &mut w,
                    &format!("stats/{name}.sizes.tsv"),
                    &size_distribution(cs)?,
                )?;
                let size_fit = fit_outcome(&cs.sizes(), s, offset);
                let outliers = detect_outliers(cs, &analyzed)?;
                let inter_edges = match edge_density_map(&analyzed, cs, LogBins::default()) {
                    Ok(map) => {
                        w.text(&format!("stats/{name}.density.tsv"), &map.to_plot_data())?;
                        Some(map.inter_edges)
                    }
                    Err(Error::EmptyMap) => None,
                    Err(e) => return Err(e),
                };
                for mode in [LinkMode::Inter, LinkMode::Intra] {
                    let series = link_fraction(&analyzed, cs, mode)?;
                    let tag = if mode == LinkMode::Inter {
                        "inter"
                    } else {
                        "intra"
                    };
                    w.text(
                        &format!("stats/{name}.links.{tag}.tsv"),
                        &series.to_plot_data(),
                    )?;
                }
                let (meta, meta_weight_fit) = match meta_graphs.iter().find(|(a, _)| a == algo) {
                    Some((_, mn)) if mn.graph.edge_count() > 0 => {
                        let prefix = format!("stats/{name}.meta");
                        let ms = structure_stats(&mut w, &mn.graph, &prefix, s, offset + 1)?;
                        let (weights, strengths) = weight_strength_distributions(mn)?;
                        pmf_file(&mut w, &format!("{prefix}.weights.tsv"), &weights)?;
                        pmf_file(&mut w, &format!("{prefix}.strengths.tsv"), &strengths)?;
                        (Some(ms), Some(fit_outcome(&mn.weights(), s, offset + 1)))
                    }
                    _ => (None, None),
                };
                let record = AlgorithmStats {
                    algorithm: *algo,
                    size_fit,
                    outliers,
                    inter_edges,
                    meta,
                    meta_weight_fit,
                };
                w.json(&format!("stats/{name}.json"), &record)?;
                algorithm_stats.push(record);
            }
            Ok(())
        })?;
        lap("stats", &mut timings);
    }

    let mut record = RunRecord {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.to_pairs(),
        seeds: cfg.seeds(),
        stages: cfg.stages.iter().copied().collect(),
        host: GraphInfo::of(&host),
        sample,
        analyzed: GraphInfo::of(&analyzed),
        detections,
        metanets,
        comparison,
        graph_stats,
        algorithm_stats,
        artifacts: Vec::new(),
        timings,
        output_dir: root.clone(),
    };
    // the output location is not a parameter of the results
    record.config.remove("output_dir");
    w.artifacts.sort_by(|a, b| a.path.cmp(&b.path));
    record.artifacts = w.artifacts.clone();
    let manifest = Manifest {
        tool: "mesograph",
        version: record.version,
        config: &record.config,
        seeds: &record.seeds,
        stages: &record.stages,
        artifacts: &record.artifacts,
    };
    crate::io::write_string(root.join("manifest.json"), &to_json(&manifest))?;
    crate::io::write_string(root.join("timings.json"), &to_json(&record.timings))?;
    Ok(record)
}

/// Verifies every manifest entry against the file on disk; returns the
/// paths whose contents no longer match.
pub fn verify_manifest(output_dir: impl AsRef<Path>) -> Result<Vec<String>> {
    let dir = output_dir.as_ref();
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Inconsistent(format!("manifest: {e}")))?;
    let entries = value["artifacts"]
        .as_array()
        .ok_or_else(|| Error::Inconsistent("manifest has no artifact list".into()))?;
    let mut bad = Vec::new();
    for entry in entries {
        let rel = entry["path"].as_str().unwrap_or_default();
        let expected = entry["sha256"].as_str().unwrap_or_default();
        let actual = fs::read(dir.join(rel)).map(|b| hex::encode(Sha256::digest(&b)));
        if actual.as_deref().ok() != Some(expected) {
            bad.push(rel.to_owned());
        }
    }
    Ok(bad)
}
