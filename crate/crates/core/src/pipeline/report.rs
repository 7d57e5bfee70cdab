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

//! Tabular run reports in JSON and plain text.
//!
//! Five summary tables are assembled from a [`RunRecord`]: crawl features,
//! detection results, structure similarity, outlier counts and meta-network
//! features. The sixth layout, community membership, is the community TSV
//! written by the detection stage, and the report lists those files. A
//! table whose stage did not run is skipped with a notice.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{to_json, RunRecord};
use crate::community::Algorithm;
use crate::error::Result;
use crate::sampling::SampleMethod;
use crate::stats::OUTLIER_THRESHOLDS;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrawlTable {
    pub method: SampleMethod,
    pub visited: usize,
    pub discovered: usize,
    pub edges: usize,
    pub largest_component_fraction: f64,
    pub mean_degree_visited: f64,
    pub effective_diameter: Option<f64>,
    pub average_clustering: Option<f64>,
    pub density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionRow {
    pub algorithm: Algorithm,
    pub communities: usize,
    pub modularity: f64,
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetectionTable {
    pub nodes: usize,
    pub edges: usize,
    pub rows: Vec<DetectionRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityTable {
    pub former: Algorithm,
    pub latter: Algorithm,
    /// Fraction of former communities with an identical match.
    pub common: f64,
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub kl_forward: f64,
    pub kl_backward: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutlierRow {
    pub algorithm: Algorithm,
    /// Keyed by threshold, counting communities strictly above it.
    pub counts: BTreeMap<u64, usize>,
    pub resolution_threshold: f64,
    pub above_resolution: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetaRow {
    pub algorithm: Algorithm,
    pub nodes: usize,
    pub edges: usize,
    pub min_weight: Option<u64>,
    pub max_weight: Option<u64>,
    pub avg_weight: Option<f64>,
    pub largest_component_fraction: f64,
    pub mean_degree: f64,
    pub effective_diameter: Option<f64>,
    pub average_clustering: Option<f64>,
    pub density: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub crawl: Option<CrawlTable>,
    pub detection: Option<DetectionTable>,
    pub community_files: Vec<String>,
    pub similarity: Option<SimilarityTable>,
    pub outliers: Option<Vec<OutlierRow>>,
    pub meta_networks: Option<Vec<MetaRow>>,
    pub notices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportFiles {
    pub report: Report,
    pub json: Option<PathBuf>,
    pub text: Option<PathBuf>,
}

impl Report {
    pub fn from_record(rec: &RunRecord) -> Self {
        let mut r = Report::default();
        let mut skip = |what: &str, why: &str| r.notices.push(format!("{what} skipped: {why}"));

        let crawl = rec.sample.as_ref().map(|s| CrawlTable {
            method: s.method,
            visited: s.visited,
            discovered: s.discovered,
            edges: s.edges,
            largest_component_fraction: s.largest_component_fraction,
            mean_degree_visited: s.mean_degree_visited,
            effective_diameter: rec.graph_stats.as_ref().map(|g| g.effective_diameter),
            average_clustering: rec.graph_stats.as_ref().map(|g| g.average_clustering),
            density: s.density,
        });
        if crawl.is_none() {
            skip("crawl table", "no sample stage");
        }

        let detection = (!rec.detections.is_empty()).then(|| DetectionTable {
            nodes: rec.analyzed.nodes,
            edges: rec.analyzed.edges,
            rows: rec
                .detections
                .iter()
                .map(|d| DetectionRow {
                    algorithm: d.algorithm,
                    communities: d.communities,
                    modularity: d.modularity,
                    seconds: rec
                        .timings
                        .get(&format!("detect.{}", d.algorithm.name()))
                        .copied(),
                })
                .collect(),
        });
        if detection.is_none() {
            skip("detection table", "no detect stage");
        }

        let similarity = rec.comparison.as_ref().map(|c| SimilarityTable {
            former: c.former,
            latter: c.latter,
            common: c.report.similarity.identical_fraction,
            mean: c.report.similarity.mean,
            median: c.report.similarity.median,
            std_dev: c.report.similarity.std_dev,
            kl_forward: c.report.kl.forward_smoothed,
            kl_backward: c.report.kl.backward_smoothed,
        });
        if similarity.is_none() {
            skip("similarity table", "no compare stage");
        }

        let outliers = (!rec.algorithm_stats.is_empty()).then(|| {
            rec.algorithm_stats
                .iter()
                .map(|a| OutlierRow {
                    algorithm: a.algorithm,
                    counts: a.outliers.counts_by_threshold.clone(),
                    resolution_threshold: a.outliers.resolution_threshold,
                    above_resolution: a.outliers.above_resolution,
                })
                .collect()
        });
        if outliers.is_none() {
            skip("outlier table", "needs the detect and stats stages");
        }

        let meta_networks = (!rec.metanets.is_empty()).then(|| {
            rec.metanets
                .iter()
                .map(|m| {
                    let st = rec
                        .algorithm_stats
                        .iter()
                        .find(|a| a.algorithm == m.algorithm)
                        .and_then(|a| a.meta.as_ref());
                    MetaRow {
                        algorithm: m.algorithm,
                        nodes: m.summary.nodes,
                        edges: m.summary.edges,
                        min_weight: m.summary.min_weight,
                        max_weight: m.summary.max_weight,
                        avg_weight: m.summary.avg_weight,
                        largest_component_fraction: m.largest_component_fraction,
                        mean_degree: m.mean_degree,
                        effective_diameter: st.map(|s| s.effective_diameter),
                        average_clustering: st.map(|s| s.average_clustering),
                        density: m.density,
                    }
                })
                .collect()
        });
        if meta_networks.is_none() {
            skip("meta-network table", "no metanet stage");
        }

        r.crawl = crawl;
        r.detection = detection;
        r.community_files = rec
            .detections
            .iter()
            .map(|d| d.community_file.clone())
            .collect();
        r.similarity = similarity;
        r.outliers = outliers;
        r.meta_networks = meta_networks;
        r
    }

    pub fn to_text(&self) -> String {
        fn opt(v: Option<f64>, prec: usize) -> String {
            v.map_or_else(|| "-".into(), |x| format!("{x:.prec$}"))
        }
        fn pct(x: f64) -> String {
            format!("{:.2}%", 100.0 * x)
        }
        let mut out = String::new();
        let w = &mut out;

        if let Some(t) = &self.crawl {
            let _ = writeln!(w, "Sample ({:?})", t.method);
            for (k, v) in [
                ("visited nodes", t.visited.to_string()),
                ("discovered nodes", t.discovered.to_string()),
                ("edges", t.edges.to_string()),
                (
                    "largest connected component",
                    pct(t.largest_component_fraction),
                ),
                (
                    "avg. degree (visited)",
                    format!("{:.2}", t.mean_degree_visited),
                ),
                ("effective diameter", opt(t.effective_diameter, 2)),
                ("avg. clustering coefficient", opt(t.average_clustering, 4)),
                ("density", pct(t.density)),
            ] {
                let _ = writeln!(w, "  {k:<30}{v:>14}");
            }
            let _ = writeln!(w);
        }

        if let Some(t) = &self.detection {
            let _ = writeln!(w, "Detection ({} nodes, {} edges)", t.nodes, t.edges);
            let _ = writeln!(
                w,
                "  {:<10}{:>14}{:>12}{:>12}",
                "algorithm", "communities", "modularity", "time (s)"
            );
            for r in &t.rows {
                let _ = writeln!(
                    w,
                    "  {:<10}{:>14}{:>12.4}{:>12}",
                    r.algorithm.name(),
                    r.communities,
                    r.modularity,
                    opt(r.seconds, 3)
                );
            }
            let _ = writeln!(w);
        }

        if !self.community_files.is_empty() {
            let _ = writeln!(w, "Community files");
            for f in &self.community_files {
                let _ = writeln!(w, "  {f}");
            }
            let _ = writeln!(w);
        }

        if let Some(t) = &self.similarity {
            let _ = writeln!(w, "Similarity {} vs. {}", t.former.name(), t.latter.name());
            let _ = writeln!(
                w,
                "  {:>10}{:>10}{:>10}{:>10}",
                "common", "mean", "median", "std. d."
            );
            let _ = writeln!(
                w,
                "  {:>10}{:>10}{:>10}{:>10}",
                pct(t.common),
                pct(t.mean),
                pct(t.median),
                pct(t.std_dev)
            );
            let _ = writeln!(
                w,
                "  size KL divergence: forward {:.6}, backward {:.6}",
                t.kl_forward, t.kl_backward
            );
            let _ = writeln!(w);
        }

        if let Some(rows) = &self.outliers {
            let _ = writeln!(w, "Outlier communities");
            let _ = write!(w, "  {:<10}", "algorithm");
            for t in OUTLIER_THRESHOLDS {
                let _ = write!(w, "{:>9}", format!(">{}K", t / 1000));
            }
            let _ = writeln!(w, "{:>12}{:>12}", "sqrt(E/2)", "above");
            for r in rows {
                let _ = write!(w, "  {:<10}", r.algorithm.name());
                for t in OUTLIER_THRESHOLDS {
                    let _ = write!(w, "{:>9}", r.counts.get(&t).copied().unwrap_or(0));
                }
                let _ = writeln!(
                    w,
                    "{:>12.1}{:>12}",
                    r.resolution_threshold, r.above_resolution
                );
            }
            let _ = writeln!(w);
        }

        if let Some(rows) = &self.meta_networks {
            let _ = writeln!(w, "Meta-networks");
            let field = |label: &str, f: &dyn Fn(&MetaRow) -> String, w: &mut String| {
                let _ = write!(w, "  {label:<30}");
                for r in rows {
                    let _ = write!(w, "{:>18}", f(r));
                }
                let _ = writeln!(w);
            };
            field("", &|r| r.algorithm.name().to_owned(), w);
            field("nodes/edges", &|r| format!("{}/{}", r.nodes, r.edges), w);
            field(
                "min/max/avg weight",
                &|r| match (r.min_weight, r.max_weight, r.avg_weight) {
                    (Some(a), Some(b), Some(c)) => format!("{a}/{b}/{c:.2}"),
                    _ => "-".into(),
                },
                w,
            );
            field(
                "largest connected component",
                &|r| pct(r.largest_component_fraction),
                w,
            );
            field("avg. degree", &|r| format!("{:.2}", r.mean_degree), w);
            field("effective diameter", &|r| opt(r.effective_diameter, 2), w);
            field(
                "avg. clustering coefficient",
                &|r| opt(r.average_clustering, 4),
                w,
            );
            field("density", &|r| pct(r.density), w);
            let _ = writeln!(w);
        }

        for n in &self.notices {
            let _ = writeln!(w, "note: {n}");
        }
        out
    }
}

/// Writes `report.json` and/or `report.txt` into `dir` according to the
/// run's `report.formats` setting.
pub fn emit_report(rec: &RunRecord, dir: impl AsRef<Path>) -> Result<ReportFiles> {
    let dir = dir.as_ref();
    let report = Report::from_record(rec);
    let formats = rec
        .config
        .get("report.formats")
        .map_or("json,text", String::as_str);
    let mut files = ReportFiles {
        report,
        json: None,
        text: None,
    };
    for f in formats.split(',') {
        match f {
            "json" => {
                let p = dir.join("report.json");
                crate::io::write_string(&p, &to_json(&files.report))?;
                files.json = Some(p);
            }
            "text" => {
                let p = dir.join("report.txt");
                crate::io::write_string(&p, &files.report.to_text())?;
                files.text = Some(p);
            }
            _ => {}
        }
    }
    Ok(files)
}
