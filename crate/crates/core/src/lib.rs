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

//! Community-structure analysis of sampled social graphs.
//!
//! The crate covers the whole workflow: synthetic host graphs ([`synth`]),
//! BFS and uniform rejection crawlers over a host ([`sampling`]), label
//! propagation and local-modularity detection ([`community`]), the
//! weighted community meta-network ([`metanet`]), structure comparison
//! ([`compare`]), mesoscale statistics ([`stats`]) and a reproducible
//! end-to-end driver ([`pipeline`]).

pub mod anonymize;
pub mod community;
pub mod compare;
pub mod error;
pub mod graph;
pub mod io;
pub mod metanet;
pub mod partition;
pub mod pipeline;
pub mod sampling;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, NodeId};
pub use partition::{Community, CommunityStructure};

use rand::SeedableRng;

/// The generator behind every seeded operation. ChaCha8 output is fixed by
/// its reference definition, so seeded artifacts are portable.
pub type Rng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}
