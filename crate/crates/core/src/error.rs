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

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no nodes")]
    EmptyGraph,

    #[error("node {0} not found")]
    NodeNotFound(NodeId),

    #[error("community {0} not found")]
    CommunityNotFound(u32),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("KL divergence undefined: reference distribution has no mass at {0}")]
    DivergenceUndefined(u64),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("no inter-community edges to map")]
    EmptyMap,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stage `{stage}` cannot start: {message}")]
    Precondition { stage: String, message: String },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_stage(stage: &str) -> impl FnOnce(Error) -> Error + '_ {
        move |source| Error::Stage {
            stage: stage.to_owned(),
            source: Box::new(source),
        }
    }
}
