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

//! Edge-list and community-file readers and writers.
//!
//! Edge lists hold one edge per line as two node identifiers and an
//! optional positive weight. Blank lines and lines starting with `#` are
//! skipped. Community files hold one community per line:
//! `community_id<TAB>member,member,...` with members ascending.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BuildReport, Graph, GraphBuilder, NodeId};
use crate::partition::{Community, CommunityStructure};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeListDialect {
    /// Fields separated by any run of spaces or tabs.
    #[default]
    Whitespace,
    /// Fields separated by commas (surrounding spaces allowed).
    Csv,
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub report: BuildReport,
}

pub fn load_edge_list(path: impl AsRef<Path>, dialect: EdgeListDialect) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(BufReader::new(file), dialect).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_edge_list(reader: impl Read, dialect: EdgeListDialect) -> Result<LoadedGraph> {
    let mut builder = GraphBuilder::new();
    let reader = BufReader::new(reader);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match dialect {
            EdgeListDialect::Whitespace => trimmed.split_whitespace().collect(),
            EdgeListDialect::Csv => trimmed.split(',').map(str::trim).collect(),
        };
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 or 3 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid {what} `{s}`"),
            })
        };
        let u = parse(fields[0], "node id")?;
        let v = parse(fields[1], "node id")?;
        let w = match fields.get(2) {
            Some(s) => {
                let w = parse(s, "weight")?;
                if w == 0 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "weight must be at least 1".into(),
                    });
                }
                w
            }
            None => 1,
        };
        builder.add_weighted_edge(u, v, w);
    }
    let (graph, report) = builder.build_with_report();
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(LoadedGraph { graph, report })
}

/// Tab-separated `u v` lines (`u v w` when the weight differs from 1), `u < v`,
/// sorted. Isolated nodes are not representable and are omitted.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (u, v, w) in g.edge_ids() {
        if w == 1 {
            let _ = writeln!(out, "{u}\t{v}");
        } else {
            let _ = writeln!(out, "{u}\t{v}\t{w}");
        }
    }
    out
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_string(path, &format_edge_list(g))
}

pub fn format_community_structure(cs: &CommunityStructure) -> String {
    let mut out = String::new();
    for c in cs.communities() {
        let _ = write!(out, "{}\t", c.id);
        for (i, m) in c.members.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{m}");
        }
        out.push('\n');
    }
    out
}

pub fn write_community_structure(cs: &CommunityStructure, path: impl AsRef<Path>) -> Result<()> {
    write_string(path, &format_community_structure(cs))
}

pub fn parse_community_structure(text: &str) -> Result<CommunityStructure> {
    let mut communities = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, members) = line.split_once('\t').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "missing tab between community id and members".into(),
        })?;
        let id = id.trim().parse::<u32>().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid community id `{id}`"),
        })?;
        let members = members
            .trim()
            .split(',')
            .map(|m| {
                m.trim().parse::<NodeId>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid member `{m}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        communities.push(Community { id, members });
    }
    CommunityStructure::new(communities)
}

pub fn read_community_structure(path: impl AsRef<Path>) -> Result<CommunityStructure> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_community_structure(&text)
}

pub(crate) fn write_string(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
