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

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Empirical probability mass function over non-negative integers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeDistribution {
    support: Vec<u64>,
    probs: Vec<f64>,
    /// Raw counts behind `probs`; empty when built from probabilities.
    counts: Vec<u64>,
}

impl SizeDistribution {
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let mut hist = BTreeMap::new();
        for v in values {
            *hist.entry(v).or_insert(0u64) += 1;
        }
        Self::from_counts(&hist)
    }

    pub fn from_counts(hist: &BTreeMap<u64, u64>) -> Self {
        let total: u64 = hist.values().sum();
        let (mut support, mut probs, mut counts) = (Vec::new(), Vec::new(), Vec::new());
        for (&x, &c) in hist {
            if c > 0 {
                support.push(x);
                counts.push(c);
                probs.push(c as f64 / total as f64);
            }
        }
        Self {
            support,
            probs,
            counts,
        }
    }

    /// Normalizes positive masses; zero masses are dropped.
    pub fn from_probs(pairs: &[(u64, f64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(x, p) in pairs {
            if p < 0.0 || !p.is_finite() {
                return Err(Error::UndefinedInput(format!("mass {p} at {x}")));
            }
            *map.entry(x).or_insert(0.0) += p;
        }
        let total: f64 = map.values().sum();
        if total <= 0.0 {
            return Err(Error::UndefinedInput("distribution has no mass".into()));
        }
        let (support, probs) = map
            .into_iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|(x, p)| (x, p / total))
            .unzip();
        Ok(Self {
            support,
            probs,
            counts: Vec::new(),
        })
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn counts(&self) -> Option<&[u64]> {
        (!self.counts.is_empty()).then_some(self.counts.as_slice())
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn prob(&self, x: u64) -> f64 {
        self.support
            .binary_search(&x)
            .map_or(0.0, |i| self.probs[i])
    }

    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probs)
            .map(|(&x, &p)| x as f64 * p)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.support.iter().copied().zip(self.probs.iter().copied())
    }

    /// Two-column `value<TAB>probability` plot data.
    pub fn to_plot_data(&self) -> String {
        let mut out = String::new();
        for (x, p) in self.iter() {
            let _ = writeln!(out, "{x}\t{p:.12e}");
        }
        out
    }
}
