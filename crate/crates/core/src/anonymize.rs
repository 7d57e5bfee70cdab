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

//! Keyed 48-bit identifier hashing.

use std::collections::HashSet;

use serde::Serialize;

use crate::graph::NodeId;

const MASK_48: u64 = (1 << 48) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AnonymizedId(u64);

impl AnonymizedId {
    pub fn value(self) -> u64 {
        self.0
    }
}

// splitmix64 finalizer
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keyed mix of `raw_id`, truncated to 48 bits. Not injective.
pub fn anonymize(raw_id: NodeId, key: u64) -> AnonymizedId {
    let keyed = mix64(key ^ 0x9e37_79b9_7f4a_7c15);
    AnonymizedId(mix64(raw_id.wrapping_add(keyed) ^ keyed.rotate_left(29)) & MASK_48)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnonymizedBatch {
    pub ids: Vec<AnonymizedId>,
    /// Distinct raw identifiers that landed on an already-used output.
    pub collisions: usize,
}

/// Anonymizes a batch; repeated raw identifiers are not counted as collisions.
pub fn anonymize_all(raw_ids: &[NodeId], key: u64) -> AnonymizedBatch {
    let mut seen_raw = HashSet::with_capacity(raw_ids.len());
    let mut seen_out = HashSet::with_capacity(raw_ids.len());
    let mut collisions = 0;
    let ids = raw_ids
        .iter()
        .map(|&raw| {
            let out = anonymize(raw, key);
            if seen_raw.insert(raw) && !seen_out.insert(out) {
                collisions += 1;
            }
            out
        })
        .collect();
    AnonymizedBatch { ids, collisions }
}

/// Expected number of colliding pairs among `n` uniform 48-bit values.
pub fn expected_collisions(n: u64) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0 / (1u64 << 48) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_keyed() {
        for x in [0u64, 1, 42, u64::MAX] {
            assert_eq!(anonymize(x, 7), anonymize(x, 7));
        }
        assert_ne!(anonymize(42, 7), anonymize(42, 8));
    }

    #[test]
    fn output_fits_48_bits_and_collisions_near_birthday_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw: Vec<u64> = (0..1_000_000).map(|_| rng.random()).collect();
        let batch = anonymize_all(&raw, 0xdead_beef);
        assert!(batch.ids.iter().all(|id| id.value() < 1 << 48));
        // Birthday bound for 10^6 draws over 2^48 is ~0.0018.
        assert!(expected_collisions(1_000_000) < 0.002);
        assert!(batch.collisions <= 2, "collisions = {}", batch.collisions);
    }

    #[test]
    fn repeated_raw_ids_are_not_collisions() {
        let batch = anonymize_all(&[5, 5, 5], 1);
        assert_eq!(batch.collisions, 0);
        assert_eq!(batch.ids[0], batch.ids[2]);
    }
}
