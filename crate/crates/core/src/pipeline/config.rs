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

//! Flat `key = value` run configuration with stage-prefixed keys.
//!
//! ```text
//! # host
//! gen.model = planted
//! gen.seed = 7
//! stages = gen, detect, metanet, stats
//! detect.algorithms = lpa, fnca
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::community::Algorithm;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::io::EdgeListDialect;
use crate::sampling::SampleMethod;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Gen,
    Sample,
    Detect,
    Metanet,
    Compare,
    Stats,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Gen,
        Stage::Sample,
        Stage::Detect,
        Stage::Metanet,
        Stage::Compare,
        Stage::Stats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Gen => "gen",
            Stage::Sample => "sample",
            Stage::Detect => "detect",
            Stage::Metanet => "metanet",
            Stage::Compare => "compare",
            Stage::Stats => "stats",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown stage `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenModel {
    Planted,
    ScaleFree,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenConfig {
    pub model: GenModel,
    pub seed: u64,
    pub communities: usize,
    pub community_size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub nodes: usize,
    pub edges_per_node: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleConfig {
    pub method: SampleMethod,
    pub seed: u64,
    pub budget: usize,
    /// BFS start; drawn from the host with `seed` when absent.
    pub start: Option<NodeId>,
    /// Uniform id space; defaults to eight times the largest host id + 1.
    pub id_space: Option<u64>,
    pub unlistable_fraction: f64,
    /// Uniform draws; defaults to eight times the budget.
    pub draws: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectConfig {
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub max_iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsConfig {
    pub seed: u64,
    pub exact_threshold: usize,
    pub sample_sources: usize,
    pub bootstrap: usize,
    pub two_regime: bool,
    pub split: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub output_dir: PathBuf,
    pub stages: BTreeSet<Stage>,
    pub input: Option<PathBuf>,
    pub input_format: EdgeListDialect,
    pub gen: GenConfig,
    pub sample: SampleConfig,
    pub detect: DetectConfig,
    pub keep_singletons: bool,
    pub heatmap_cells: usize,
    pub stats: StatsConfig,
    pub report_json: bool,
    pub report_text: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("mesograph-out"),
            stages: [
                Stage::Gen,
                Stage::Detect,
                Stage::Metanet,
                Stage::Compare,
                Stage::Stats,
            ]
            .into(),
            input: None,
            input_format: EdgeListDialect::Whitespace,
            gen: GenConfig {
                model: GenModel::Planted,
                seed: 1,
                communities: 4,
                community_size: 50,
                p_in: 0.3,
                p_out: 0.005,
                nodes: 10_000,
                edges_per_node: 3,
            },
            sample: SampleConfig {
                method: SampleMethod::Bfs,
                seed: 2,
                budget: 500,
                start: None,
                id_space: None,
                unlistable_fraction: 0.0,
                draws: None,
            },
            detect: DetectConfig {
                algorithms: vec![Algorithm::Lpa, Algorithm::Fnca],
                seed: 3,
                max_iterations: 50,
            },
            keep_singletons: false,
            heatmap_cells: 10_000,
            stats: StatsConfig {
                seed: 4,
                exact_threshold: 5_000,
                sample_sources: 500,
                bootstrap: 100,
                two_regime: false,
                split: 100,
            },
            report_json: true,
            report_text: true,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("`{value}` is not a valid value for `{key}`"))
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn opt<T: FromStr>(key: &str, value: &str) -> std::result::Result<Option<T>, String> {
    if value.is_empty() || value == "auto" {
        Ok(None)
    } else {
        parse(key, value).map(Some)
    }
}

impl PipelineConfig {
    /// Parses a config file body on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected `key = value`".into(),
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|message| Error::Parse {
                    line: i + 1,
                    message,
                })?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets one key. The error names the offending key or value.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "output_dir" => self.output_dir = PathBuf::from(value),
            "stages" => {
                self.stages = list(value)
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()?;
            }
            "input.edges" => self.input = (!value.is_empty()).then(|| PathBuf::from(value)),
            "input.format" => {
                self.input_format = match value {
                    "whitespace" => EdgeListDialect::Whitespace,
                    "csv" => EdgeListDialect::Csv,
                    _ => return Err(format!("unknown edge list format `{value}`")),
                }
            }
            "gen.model" => {
                self.gen.model = match value {
                    "planted" => GenModel::Planted,
                    "scale_free" => GenModel::ScaleFree,
                    _ => return Err(format!("unknown generator `{value}`")),
                }
            }
            "gen.seed" => self.gen.seed = parse(key, value)?,
            "gen.communities" => self.gen.communities = parse(key, value)?,
            "gen.community_size" => self.gen.community_size = parse(key, value)?,
            "gen.p_in" => self.gen.p_in = parse(key, value)?,
            "gen.p_out" => self.gen.p_out = parse(key, value)?,
            "gen.nodes" => self.gen.nodes = parse(key, value)?,
            "gen.edges_per_node" => self.gen.edges_per_node = parse(key, value)?,
            "sample.method" => {
                self.sample.method = match value {
                    "bfs" => SampleMethod::Bfs,
                    "uniform" => SampleMethod::Uniform,
                    _ => return Err(format!("unknown sampling method `{value}`")),
                }
            }
            "sample.seed" => self.sample.seed = parse(key, value)?,
            "sample.budget" => self.sample.budget = parse(key, value)?,
            "sample.start" => self.sample.start = opt(key, value)?,
            "sample.id_space" => self.sample.id_space = opt(key, value)?,
            "sample.unlistable_fraction" => self.sample.unlistable_fraction = parse(key, value)?,
            "sample.draws" => self.sample.draws = opt(key, value)?,
            "detect.algorithms" => {
                let algos: Vec<Algorithm> = list(value)
                    .map(|s| s.parse::<Algorithm>().map_err(|e| e.to_string()))
                    .collect::<std::result::Result<_, _>>()?;
                let mut seen = BTreeSet::new();
                self.detect.algorithms = algos
                    .into_iter()
                    .filter(|a| seen.insert(a.name()))
                    .collect();
            }
            "detect.seed" => self.detect.seed = parse(key, value)?,
            "detect.max_iter" => self.detect.max_iterations = parse(key, value)?,
            "metanet.keep_singletons" => self.keep_singletons = parse(key, value)?,
            "compare.heatmap_cells" => self.heatmap_cells = parse(key, value)?,
            "stats.seed" => self.stats.seed = parse(key, value)?,
            "stats.exact_threshold" => self.stats.exact_threshold = parse(key, value)?,
            "stats.sample_sources" => self.stats.sample_sources = parse(key, value)?,
            "stats.bootstrap" => self.stats.bootstrap = parse(key, value)?,
            "stats.two_regime" => self.stats.two_regime = parse(key, value)?,
            "stats.split" => self.stats.split = parse(key, value)?,
            "report.formats" => {
                self.report_json = false;
                self.report_text = false;
                for f in list(value) {
                    match f {
                        "json" => self.report_json = true,
                        "text" => self.report_text = true,
                        _ => return Err(format!("unknown report format `{f}`")),
                    }
                }
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Every setting as resolved `key -> value` text, seeds included.
    pub fn to_pairs(&self) -> BTreeMap<&'static str, String> {
        fn o<T: ToString>(v: &Option<T>) -> String {
            v.as_ref()
                .map_or_else(|| "auto".into(), ToString::to_string)
        }
        let join = |it: Vec<&str>| it.join(",");
        let mut formats = Vec::new();
        if self.report_json {
            formats.push("json");
        }
        if self.report_text {
            formats.push("text");
        }
        BTreeMap::from([
            ("output_dir", self.output_dir.display().to_string()),
            (
                "stages",
                join(self.stages.iter().map(|s| s.name()).collect()),
            ),
            (
                "input.edges",
                self.input
                    .as_ref()
                    .map_or_else(String::new, |p| p.display().to_string()),
            ),
            (
                "input.format",
                match self.input_format {
                    EdgeListDialect::Whitespace => "whitespace",
                    EdgeListDialect::Csv => "csv",
                }
                .into(),
            ),
            (
                "gen.model",
                match self.gen.model {
                    GenModel::Planted => "planted",
                    GenModel::ScaleFree => "scale_free",
                }
                .into(),
            ),
            ("gen.seed", self.gen.seed.to_string()),
            ("gen.communities", self.gen.communities.to_string()),
            ("gen.community_size", self.gen.community_size.to_string()),
            ("gen.p_in", self.gen.p_in.to_string()),
            ("gen.p_out", self.gen.p_out.to_string()),
            ("gen.nodes", self.gen.nodes.to_string()),
            ("gen.edges_per_node", self.gen.edges_per_node.to_string()),
            (
                "sample.method",
                match self.sample.method {
                    SampleMethod::Bfs => "bfs",
                    SampleMethod::Uniform => "uniform",
                }
                .into(),
            ),
            ("sample.seed", self.sample.seed.to_string()),
            ("sample.budget", self.sample.budget.to_string()),
            ("sample.start", o(&self.sample.start)),
            ("sample.id_space", o(&self.sample.id_space)),
            (
                "sample.unlistable_fraction",
                self.sample.unlistable_fraction.to_string(),
            ),
            ("sample.draws", o(&self.sample.draws)),
            (
                "detect.algorithms",
                join(self.detect.algorithms.iter().map(|a| a.name()).collect()),
            ),
            ("detect.seed", self.detect.seed.to_string()),
            ("detect.max_iter", self.detect.max_iterations.to_string()),
            ("metanet.keep_singletons", self.keep_singletons.to_string()),
            ("compare.heatmap_cells", self.heatmap_cells.to_string()),
            ("stats.seed", self.stats.seed.to_string()),
            (
                "stats.exact_threshold",
                self.stats.exact_threshold.to_string(),
            ),
            (
                "stats.sample_sources",
                self.stats.sample_sources.to_string(),
            ),
            ("stats.bootstrap", self.stats.bootstrap.to_string()),
            ("stats.two_regime", self.stats.two_regime.to_string()),
            ("stats.split", self.stats.split.to_string()),
            ("report.formats", formats.join(",")),
        ])
    }

    /// Seeds of every randomized stage, keyed by stage name.
    pub fn seeds(&self) -> BTreeMap<&'static str, u64> {
        BTreeMap::from([
            ("gen", self.gen.seed),
            ("sample", self.sample.seed),
            ("detect", self.detect.seed),
            ("stats", self.stats.seed),
        ])
    }

    /// Checks that every selected stage has its inputs.
    pub fn validate(&self) -> Result<()> {
        let pre = |stage: Stage, message: String| Error::Precondition {
            stage: stage.name().into(),
            message,
        };
        if self.stages.is_empty() {
            return Err(Error::Config("no stages selected".into()));
        }
        let has = |s| self.stages.contains(&s);
        if has(Stage::Gen) && self.input.is_some() {
            return Err(Error::Config(
                "`gen` and `input.edges` both provide the host graph".into(),
            ));
        }
        let first = *self.stages.iter().next().expect("nonempty");
        if !has(Stage::Gen) {
            match &self.input {
                None => {
                    return Err(pre(
                        first,
                        "no host graph: select `gen` or set `input.edges`".into(),
                    ))
                }
                Some(p) if !p.is_file() => {
                    return Err(pre(first, format!("input {} does not exist", p.display())))
                }
                _ => {}
            }
        }
        if (has(Stage::Metanet) || has(Stage::Compare)) && !has(Stage::Detect) {
            let st = if has(Stage::Metanet) {
                Stage::Metanet
            } else {
                Stage::Compare
            };
            return Err(pre(st, "needs the `detect` stage".into()));
        }
        if has(Stage::Detect) && self.detect.algorithms.is_empty() {
            return Err(Error::Config("detect.algorithms is empty".into()));
        }
        if has(Stage::Compare) && self.detect.algorithms.len() < 2 {
            return Err(pre(Stage::Compare, "needs two detection algorithms".into()));
        }
        Ok(())
    }
}
