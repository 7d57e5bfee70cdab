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

//! `mesograph` command-line front end.
//!
//! Exit codes: 0 success, 2 malformed arguments or input files,
//! 3 unmet preconditions (missing inputs, inconsistent stage selection),
//! 4 failure while a stage was running.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mesograph::community::{run_fnca, run_lpa, Algorithm, FncaConfig, LpaConfig};
use mesograph::compare::{compare_structures, similarity_heatmap};
use mesograph::io::{
    format_community_structure, format_edge_list, load_edge_list, read_community_structure,
    EdgeListDialect,
};
use mesograph::metanet::{
    build_meta_network_with, export_meta_network, load_meta_network, MetaNetworkOptions,
};
use mesograph::pipeline::{emit_report, run_pipeline, PipelineConfig};
use mesograph::sampling::{
    random_node, sample_bfs, sample_summary, sample_uniform, BfsSampleSpec, Occupancy,
    UniformSampleSpec,
};
use mesograph::stats::{
    clustering, degree_distribution, detect_outliers, edge_density_map, fit_power_law, hop_plot,
    link_fraction, shortest_path_distribution, size_distribution, DistanceOptions, LinkMode,
    LogBins, PowerLawOptions, SizeDistribution,
};
use mesograph::synth::{
    generate_planted_partition, generate_scale_free, PlantedPartitionSpec, ScaleFreeSpec,
};
use mesograph::{Error, Graph};

const OUT_ENV: &str = "MESOGRAPH_OUT";

#[derive(Parser)]
#[command(
    name = "mesograph",
    version,
    about = "Community structure of sampled social graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic host graph.
    Gen(GenArgs),
    /// Crawl a host graph by BFS or uniform rejection sampling.
    Sample(SampleArgs),
    /// Detect communities.
    Detect(DetectArgs),
    /// Build the weighted community meta-network.
    Metanet(MetanetArgs),
    /// Compare two community structures.
    Compare(CompareArgs),
    /// Compute statistics and plot data.
    Stats(StatsArgs),
    /// Run a configured multi-stage pipeline.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct OutDir {
    /// Output directory.
    #[arg(long, short, env = OUT_ENV, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct Input {
    /// Edge list: `u v [w]` per line.
    #[arg(long, short)]
    input: PathBuf,
    /// Read comma-separated fields instead of whitespace-separated ones.
    #[arg(long)]
    csv: bool,
}

impl Input {
    fn load(&self) -> Result<Graph> {
        let dialect = if self.csv {
            EdgeListDialect::Csv
        } else {
            EdgeListDialect::Whitespace
        };
        Ok(load_edge_list(&self.input, dialect)?.graph)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Planted,
    ScaleFree,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "planted")]
    model: Model,
    #[arg(long, default_value_t = 4)]
    communities: usize,
    #[arg(long, default_value_t = 50)]
    community_size: usize,
    #[arg(long, default_value_t = 0.3)]
    p_in: f64,
    #[arg(long, default_value_t = 0.005)]
    p_out: f64,
    /// Node count for the scale-free model.
    #[arg(long, default_value_t = 10_000)]
    nodes: usize,
    /// Edges added per new node in the scale-free model.
    #[arg(long, short = 'm', default_value_t = 3)]
    edges_per_node: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bfs,
    Uniform,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "bfs")]
    method: Method,
    /// Nodes to visit (BFS).
    #[arg(long, default_value_t = 500)]
    budget: usize,
    /// BFS start node; random when omitted.
    #[arg(long)]
    start: Option<u64>,
    /// Uniform id space size; defaults to 8 x (largest id + 1).
    #[arg(long)]
    id_space: Option<u64>,
    /// Fraction of host nodes hidden from uniform draws.
    #[arg(long, default_value_t = 0.0)]
    unlistable: f64,
    /// Uniform draws; defaults to 8 x budget.
    #[arg(long)]
    draws: Option<u64>,
    #[arg(long, default_value_t = 2)]
    seed: u64,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Lpa,
    Fnca,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Lpa => Algorithm::Lpa,
            Algo::Fnca => Algorithm::Fnca,
        }
    }
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "lpa")]
    algo: Algo,
    #[arg(long, default_value_t = 3)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct MetanetArgs {
    #[command(flatten)]
    input: Input,
    /// Community file.
    #[arg(long, short)]
    communities: PathBuf,
    #[arg(long)]
    keep_singletons: bool,
    /// File name of the exported edge list inside the output directory.
    #[arg(long, default_value = "metanet.edges")]
    name: String,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct CompareArgs {
    /// Former community file.
    former: PathBuf,
    /// Latter community file.
    latter: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    heatmap_cells: usize,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: Input,
    /// Community file for size, outlier, density and link statistics.
    #[arg(long, short)]
    communities: Option<PathBuf>,
    /// Exported meta-network for weight and strength distributions.
    #[arg(long)]
    metanet: Option<PathBuf>,
    #[arg(long, default_value_t = 5_000)]
    exact_threshold: usize,
    #[arg(long, default_value_t = 500)]
    sample_sources: usize,
    #[arg(long, default_value_t = 100)]
    bootstrap: usize,
    #[arg(long)]
    two_regime: bool,
    #[arg(long, default_value_t = 100)]
    split: u64,
    #[arg(long, default_value_t = 4)]
    seed: u64,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Args)]
struct PipelineArgs {
    /// Config file of `key = value` lines.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Extra `key=value` settings applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, short, env = OUT_ENV)]
    out: Option<PathBuf>,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum Class {
    Parse,
    Precondition,
    Stage,
}

fn classify(err: &anyhow::Error) -> Class {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::Config(_)) => Class::Parse,
        Some(Error::Precondition { .. } | Error::Io { .. } | Error::EmptyGraph) => {
            Class::Precondition
        }
        _ => Class::Stage,
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn gen(a: GenArgs) -> Result<()> {
    let dir = &a.out.out;
    let graph = match a.model {
        Model::Planted => {
            let pp = generate_planted_partition(&PlantedPartitionSpec {
                n_communities: a.communities,
                community_size: a.community_size,
                p_in: a.p_in,
                p_out: a.p_out,
                seed: a.seed,
            })?;
            if pp.weak_structure {
                eprintln!("warning: p_in <= p_out, planted groups are not denser inside");
            }
            write(
                dir,
                "truth.tsv",
                &format_community_structure(&pp.ground_truth),
            )?;
            pp.graph
        }
        Model::ScaleFree => generate_scale_free(&ScaleFreeSpec {
            n_nodes: a.nodes,
            edges_per_new_node: a.edges_per_node,
            seed: a.seed,
        })?,
    };
    let path = write(dir, "host.edges", &format_edge_list(&graph))?;
    println!(
        "{} nodes, {} edges -> {}",
        graph.node_count(),
        graph.edge_count(),
        path.display()
    );
    Ok(())
}

fn sample(a: SampleArgs) -> Result<()> {
    let host = a.input.load()?;
    let s = match a.method {
        Method::Bfs => {
            let start = match a.start {
                Some(id) => id,
                None => random_node(&host, a.seed).ok_or(Error::EmptyGraph)?,
            };
            sample_bfs(
                &host,
                &BfsSampleSpec {
                    seed_node: start,
                    node_budget: a.budget,
                    rng_seed: a.seed,
                },
            )?
        }
        Method::Uniform => {
            let max_id = host.ids().last().copied().ok_or(Error::EmptyGraph)?;
            sample_uniform(
                &host,
                &UniformSampleSpec {
                    id_space_size: a.id_space.unwrap_or((max_id + 1) * 8),
                    occupancy: if a.unlistable > 0.0 {
                        Occupancy::Restricted {
                            unlistable_fraction: a.unlistable,
                        }
                    } else {
                        Occupancy::AllHostNodes
                    },
                    draw_count: a.draws.unwrap_or(8 * a.budget as u64),
                    rng_seed: a.seed,
                },
            )?
        }
    };
    let summary = sample_summary(&s, &host)?;
    write(&a.out.out, "sample.edges", &format_edge_list(&s.graph))?;
    let json = pretty(&json!(summary));
    write(&a.out.out, "sample.json", &json)?;
    print!("{json}");
    Ok(())
}

fn detect(a: DetectArgs) -> Result<()> {
    let g = a.input.load()?;
    let algo = Algorithm::from(a.algo);
    let t = Instant::now();
    let run = match algo {
        Algorithm::Lpa => run_lpa(
            &g,
            &LpaConfig {
                max_iterations: a.max_iter,
                rng_seed: a.seed,
            },
        )?,
        Algorithm::Fnca => run_fnca(
            &g,
            &FncaConfig {
                max_iterations: a.max_iter,
                rng_seed: a.seed,
            },
        )?,
    };
    let secs = t.elapsed().as_secs_f64();
    write(
        &a.out.out,
        &format!("{}.tsv", algo.name()),
        &format_community_structure(&run.structure),
    )?;
    let record = json!({
        "algorithm": algo,
        "seed": a.seed,
        "max_iterations": a.max_iter,
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "communities": run.structure.len(),
        "modularity": run.q,
        "iterations": run.iterations,
        "converged": run.converged,
        "moves": run.moves,
        "q_trajectory": run.q_trajectory,
        "seconds": secs,
    });
    let json = pretty(&record);
    write(&a.out.out, &format!("{}.json", algo.name()), &json)?;
    print!("{json}");
    Ok(())
}

fn metanet(a: MetanetArgs) -> Result<()> {
    let g = a.input.load()?;
    let cs = read_community_structure(&a.communities)?;
    let mn = build_meta_network_with(
        &g,
        &cs,
        MetaNetworkOptions {
            keep_singletons: a.keep_singletons,
        },
    )?;
    fs::create_dir_all(&a.out.out)?;
    let path = a.out.out.join(&a.name);
    export_meta_network(&mn, &path)?;
    let json = pretty(&json!({
        "summary": mn.summary(),
        "largest_component_fraction": mn.graph.largest_component_fraction(),
        "mean_degree": mn.graph.mean_degree(),
        "density": mn.graph.density(),
        "inter_weight": mn.inter_weight(),
        "intra_weight": mn.intra_weight(),
        "unassigned_weight": mn.unassigned_weight,
    }));
    write(&a.out.out, &format!("{}.json", a.name), &json)?;
    print!("{json}");
    Ok(())
}

fn compare(a: CompareArgs) -> Result<()> {
    let former = read_community_structure(&a.former)?;
    let latter = read_community_structure(&a.latter)?;
    let report = compare_structures(&former, &latter)?;
    let heat = similarity_heatmap(&former, &latter, a.heatmap_cells)?;
    write(&a.out.out, "heatmap.tsv", &heat.to_grid())?;
    let json = pretty(&json!({ "report": report, "heatmap_truncated": heat.truncated }));
    write(&a.out.out, "compare.json", &json)?;
    print!("{json}");
    Ok(())
}

fn stats(a: StatsArgs) -> Result<()> {
    let g = a.input.load()?;
    let dir = &a.out.out;
    let opts = PowerLawOptions {
        two_regime: a.two_regime,
        split_hint: Some(a.split),
        bootstrap: a.bootstrap,
        seed: a.seed,
        ..PowerLawOptions::default()
    };
    let fit = |values: &[u64]| match fit_power_law(values, &opts) {
        Ok(f) => json!(f),
        Err(e) => json!({ "skipped": e.to_string() }),
    };
    let dist = DistanceOptions {
        exact_threshold: a.exact_threshold,
        sample_sources: a.sample_sources,
        rng_seed: a.seed,
    };

    let degrees = degree_distribution(&g)?;
    write(dir, "degree.tsv", &degrees.to_plot_data())?;
    let cl = clustering(&g);
    let total = cl.per_node.len().max(1) as f64;
    let cl_plot: String = cl
        .value_histogram
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            format!(
                "{:.2}\t{:.12e}\n",
                (i as f64 + 0.5) / 10.0,
                c as f64 / total
            )
        })
        .collect();
    write(dir, "clustering.tsv", &cl_plot)?;
    let hop = hop_plot(&g, &dist)?;
    write(dir, "hop.tsv", &hop.to_plot_data())?;
    if let Ok(paths) = shortest_path_distribution(&g, &dist) {
        write(dir, "paths.tsv", &paths.to_plot_data())?;
    }
    let degree_values: Vec<u64> = (0..g.node_count())
        .map(|u| g.degree_at(u) as u64)
        .filter(|&k| k > 0)
        .collect();
    let mut report = json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "average_clustering": cl.average,
        "effective_diameter": hop.effective_diameter,
        "exact_diameter": hop.exact_diameter,
        "unreachable_fraction": hop.unreachable_fraction,
        "hop_sampled": hop.sampled,
        "degree_fit": fit(&degree_values),
    });

    if let Some(path) = &a.communities {
        let cs = read_community_structure(path)?;
        write(dir, "sizes.tsv", &size_distribution(&cs)?.to_plot_data())?;
        report["size_fit"] = fit(&cs.sizes());
        report["outliers"] = json!(detect_outliers(&cs, &g)?);
        match edge_density_map(&g, &cs, LogBins::default()) {
            Ok(map) => {
                write(dir, "density.tsv", &map.to_plot_data())?;
            }
            Err(Error::EmptyMap) => report["density_map"] = json!("no inter-community edges"),
            Err(e) => return Err(e.into()),
        }
        write(
            dir,
            "links.inter.tsv",
            &link_fraction(&g, &cs, LinkMode::Inter)?.to_plot_data(),
        )?;
        write(
            dir,
            "links.intra.tsv",
            &link_fraction(&g, &cs, LinkMode::Intra)?.to_plot_data(),
        )?;
    }

    if let Some(path) = &a.metanet {
        let mn = load_meta_network(path)?;
        if mn.graph.edge_count() == 0 {
            report["weight_fit"] = json!({ "skipped": "meta-network has no edges to weigh" });
        } else {
            let weights: Vec<u64> = mn.graph.edges().map(|(_, _, w)| w).collect();
            let strengths = (0..mn.graph.node_count()).map(|u| mn.graph.strength_at(u));
            write(
                dir,
                "weights.tsv",
                &SizeDistribution::from_values(weights.iter().copied()).to_plot_data(),
            )?;
            write(
                dir,
                "strengths.tsv",
                &SizeDistribution::from_values(strengths).to_plot_data(),
            )?;
            report["weight_fit"] = fit(&weights);
        }
    }

    let json = pretty(&report);
    write(dir, "stats.json", &json)?;
    print!("{json}");
    Ok(())
}

fn pipeline(a: PipelineArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    for kv in &a.overrides {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("`{kv}` is not KEY=VALUE")))?;
        cfg.set(k.trim(), v.trim()).map_err(Error::Config)?;
    }
    if let Some(out) = a.out {
        cfg.output_dir = out;
    }
    let record = run_pipeline(&cfg)?;
    let files = emit_report(&record, &cfg.output_dir)?;
    print!("{}", files.report.to_text());
    println!(
        "{} artifacts written to {}",
        record.artifacts.len(),
        cfg.output_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Sample(a) => sample(a),
        Command::Detect(a) => detect(a),
        Command::Metanet(a) => metanet(a),
        Command::Compare(a) => compare(a),
        Command::Stats(a) => stats(a),
        Command::Pipeline(a) => pipeline(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(match classify(&e) {
                Class::Parse => 2,
                Class::Precondition => 3,
                Class::Stage => 4,
            })
        }
    }
}
