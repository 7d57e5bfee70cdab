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

//! Discrete power-law fitting.
//!
//! Single-regime fits pick `x_min` by minimizing the Kolmogorov–Smirnov
//! distance between the empirical tail and its maximum-likelihood model,
//! then estimate a p-value with a semi-parametric bootstrap. Two-regime
//! fits split the data at a fixed boundary and fit a truncated power law
//! below it and an ordinary one above it.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::zeta::hurwitz_zeta;
use crate::error::{Error, Result};
use crate::seeded_rng;

const GAMMA_MAX: f64 = 12.0;
const GAMMA_MIN_TAIL: f64 = 1.0 + 1e-6;
const GAMMA_MIN_TRUNCATED: f64 = 1e-6;
const MIN_SINGLE: usize = 50;
const MIN_TWO_REGIME: usize = 100;
const MIN_PER_REGIME: usize = 10;
/// Explicit CDF table length used when drawing from a fitted model.
const SAMPLER_TABLE: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawOptions {
    pub two_regime: bool,
    /// Regime boundary; the upper regime starts here. Defaults to 100.
    pub split_hint: Option<u64>,
    /// Bootstrap resamples for the p-value; at least 100.
    pub bootstrap: usize,
    pub seed: u64,
    /// Number of smallest distinct values tried as `x_min`.
    pub max_xmin_candidates: usize,
    /// Minimum tail size for an `x_min` candidate.
    pub min_tail: usize,
}

impl Default for PowerLawOptions {
    fn default() -> Self {
        Self {
            two_regime: false,
            split_hint: None,
            bootstrap: 100,
            seed: 0,
            max_xmin_candidates: 100,
            min_tail: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub lo: u64,
    /// Inclusive upper bound; `None` for an unbounded tail.
    pub hi: Option<u64>,
    pub gamma: f64,
    pub n: usize,
    pub ks_statistic: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Exponent of the single-regime tail, or of the lower regime.
    pub gamma: f64,
    pub x_min: u64,
    /// Samples at or above `x_min`.
    pub n_tail: usize,
    pub n: usize,
    /// Empty for single-regime fits.
    pub regimes: Vec<Regime>,
    pub split: Option<u64>,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub bootstrap: usize,
}

pub fn fit_power_law(samples: &[u64], opts: &PowerLawOptions) -> Result<PowerLawFit> {
    if samples.contains(&0) {
        return Err(Error::UndefinedInput(
            "power-law samples must be positive".into(),
        ));
    }
    if opts.bootstrap < 100 {
        return Err(Error::Config(
            "at least 100 bootstrap resamples are required".into(),
        ));
    }
    let mut data = samples.to_vec();
    data.sort_unstable();
    if opts.two_regime {
        fit_two_regime(&data, opts)
    } else {
        fit_single(&data, opts)
    }
}

// ---- single regime -------------------------------------------------------

struct TailFit {
    x_min: u64,
    gamma: f64,
    n_tail: usize,
    ks: f64,
}

fn fit_single(data: &[u64], opts: &PowerLawOptions) -> Result<PowerLawFit> {
    if data.len() < MIN_SINGLE {
        return Err(Error::InsufficientData {
            needed: MIN_SINGLE,
            got: data.len(),
        });
    }
    let best = scan_xmin(data, opts)?;
    let n = data.len();
    let below: &[u64] = &data[..n - best.n_tail];
    let tail_prob = best.n_tail as f64 / n as f64;

    let exceed = (0..opts.bootstrap)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(opts.seed.wrapping_add(0x9e37_79b9 * (r as u64 + 1)));
            let sampler = TailSampler::new(best.gamma, best.x_min);
            let synthetic: Vec<u64> = (0..n)
                .map(|_| {
                    if below.is_empty() || rng.random::<f64>() < tail_prob {
                        sampler.draw(&mut rng)
                    } else {
                        below[rng.random_range(0..below.len())]
                    }
                })
                .collect();
            let mut synthetic = synthetic;
            synthetic.sort_unstable();
            match scan_xmin(&synthetic, opts) {
                Ok(fit) => fit.ks >= best.ks,
                Err(_) => true,
            }
        })
        .filter(|&x| x)
        .count();

    Ok(PowerLawFit {
        gamma: best.gamma,
        x_min: best.x_min,
        n_tail: best.n_tail,
        n,
        regimes: Vec::new(),
        split: None,
        ks_statistic: best.ks,
        p_value: exceed as f64 / opts.bootstrap as f64,
        bootstrap: opts.bootstrap,
    })
}

/// Sorted input. Tries the smallest distinct values as `x_min`.
fn scan_xmin(data: &[u64], opts: &PowerLawOptions) -> Result<TailFit> {
    let n = data.len();
    let mut best: Option<TailFit> = None;
    let mut start = 0;
    let mut tried = 0;
    while start < n && tried < opts.max_xmin_candidates.max(1) {
        let x_min = data[start];
        let tail = &data[start..];
        if tried > 0 && tail.len() < opts.min_tail {
            break;
        }
        if tail[0] == tail[tail.len() - 1] {
            break;
        }
        tried += 1;
        let gamma = mle_tail(tail, x_min);
        let ks = ks_tail(tail, gamma, x_min);
        if best.as_ref().is_none_or(|b| ks < b.ks) {
            best = Some(TailFit {
                x_min,
                gamma,
                n_tail: tail.len(),
                ks,
            });
        }
        start += tail.partition_point(|&x| x == x_min);
    }
    best.ok_or_else(|| Error::DegenerateFit("fewer than two distinct values in every tail".into()))
}

fn mle_tail(tail: &[u64], x_min: u64) -> f64 {
    let n = tail.len() as f64;
    let sum_log: f64 = tail.iter().map(|&x| (x as f64).ln()).sum();
    let a = x_min as f64;
    let nll = |g: f64| n * hurwitz_zeta(g, a).ln() + g * sum_log;
    golden_min(nll, GAMMA_MIN_TAIL, GAMMA_MAX)
}

/// Largest CDF gap over integers in the observed range. Sorted `tail`.
fn ks_tail(tail: &[u64], gamma: f64, x_min: u64) -> f64 {
    let n = tail.len() as f64;
    let norm = hurwitz_zeta(gamma, x_min as f64);
    let model_cdf = |x: u64| 1.0 - hurwitz_zeta(gamma, x as f64 + 1.0) / norm;
    ks_sorted(tail, n, model_cdf)
}

/// KS distance between the empirical CDF of sorted `values` and `model_cdf`,
/// checked at every distinct value and just before the next one.
fn ks_sorted(values: &[u64], n: f64, model_cdf: impl Fn(u64) -> f64) -> f64 {
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < values.len() {
        let x = values[i];
        let j = i + values[i..].partition_point(|&v| v == x);
        let emp = j as f64 / n;
        d = d.max((emp - model_cdf(x)).abs());
        if j < values.len() && values[j] > x + 1 {
            d = d.max((emp - model_cdf(values[j] - 1)).abs());
        }
        i = j;
    }
    d
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if hi - lo < 1e-10 {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

/// Inverse-CDF sampler for `P(x) ∝ x^{-γ}`, `x >= x_min`.
struct TailSampler {
    gamma: f64,
    x_min: u64,
    norm: f64,
    /// Cumulative probabilities for `x_min .. x_min + len`.
    cdf: Vec<f64>,
}

impl TailSampler {
    fn new(gamma: f64, x_min: u64) -> Self {
        let norm = hurwitz_zeta(gamma, x_min as f64);
        let mut cdf = Vec::with_capacity(SAMPLER_TABLE as usize);
        let mut acc = 0.0;
        for k in 0..SAMPLER_TABLE {
            acc += ((x_min + k) as f64).powf(-gamma) / norm;
            cdf.push(acc);
        }
        Self {
            gamma,
            x_min,
            norm,
            cdf,
        }
    }

    fn draw(&self, rng: &mut impl Rng) -> u64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c < u);
        if i < self.cdf.len() {
            return self.x_min + i as u64;
        }
        // Beyond the table: smallest x with survival(x + 1) <= 1 - u. Start
        // from the asymptotic inverse of zeta(g, x) ~ (x - 1/2)^(1-g) / (g - 1)
        // and correct against the exact survival function.
        let target = 1.0 - u;
        let survival = |x: u64| hurwitz_zeta(self.gamma, x as f64) / self.norm;
        let floor = self.x_min + SAMPLER_TABLE - 1;
        let guess = 0.5 + (target * self.norm * (self.gamma - 1.0)).powf(-1.0 / (self.gamma - 1.0));
        let mut x = if guess.is_finite() {
            (guess as u64).clamp(floor, u64::MAX / 4)
        } else {
            u64::MAX / 4
        };
        while x < u64::MAX / 4 && survival(x + 1) > target {
            x += 1;
        }
        while x > floor && survival(x) <= target {
            x -= 1;
        }
        x
    }
}

// ---- two regimes ---------------------------------------------------------

/// `P(x) ∝ x^{-γ}` on `lo ..= hi`.
struct Truncated {
    lo: u64,
    hi: u64,
}

impl Truncated {
    fn norm(&self, gamma: f64) -> f64 {
        (self.lo..=self.hi).map(|x| (x as f64).powf(-gamma)).sum()
    }

    fn fit(&self, values: &[u64]) -> f64 {
        let n = values.len() as f64;
        let sum_log: f64 = values.iter().map(|&x| (x as f64).ln()).sum();
        golden_min(
            |g| n * self.norm(g).ln() + g * sum_log,
            GAMMA_MIN_TRUNCATED,
            GAMMA_MAX,
        )
    }

    fn ks(&self, values: &[u64], gamma: f64) -> f64 {
        let norm = self.norm(gamma);
        let mut cdf = Vec::with_capacity((self.hi - self.lo + 1) as usize);
        let mut acc = 0.0;
        for x in self.lo..=self.hi {
            acc += (x as f64).powf(-gamma) / norm;
            cdf.push(acc);
        }
        let lo = self.lo;
        ks_sorted(values, values.len() as f64, |x| cdf[(x - lo) as usize])
    }

    fn sampler(&self, gamma: f64) -> Vec<f64> {
        let norm = self.norm(gamma);
        let mut acc = 0.0;
        (self.lo..=self.hi)
            .map(|x| {
                acc += (x as f64).powf(-gamma) / norm;
                acc
            })
            .collect()
    }
}

struct TwoRegimeFit {
    lower: Regime,
    upper: Regime,
}

fn fit_regimes(data: &[u64], split: u64) -> Result<TwoRegimeFit> {
    let cut = data.partition_point(|&x| x < split);
    let (low, high) = data.split_at(cut);
    for (part, name) in [(low, "lower"), (high, "upper")] {
        if part.len() < MIN_PER_REGIME {
            return Err(Error::InsufficientData {
                needed: MIN_PER_REGIME,
                got: part.len(),
            });
        }
        if part[0] == part[part.len() - 1] {
            return Err(Error::DegenerateFit(format!(
                "{name} regime holds a single value"
            )));
        }
    }
    let trunc = Truncated {
        lo: 1,
        hi: split - 1,
    };
    let g_low = trunc.fit(low);
    let g_high = mle_tail(high, split);
    Ok(TwoRegimeFit {
        lower: Regime {
            lo: 1,
            hi: Some(split - 1),
            gamma: g_low,
            n: low.len(),
            ks_statistic: trunc.ks(low, g_low),
        },
        upper: Regime {
            lo: split,
            hi: None,
            gamma: g_high,
            n: high.len(),
            ks_statistic: ks_tail(high, g_high, split),
        },
    })
}

fn fit_two_regime(data: &[u64], opts: &PowerLawOptions) -> Result<PowerLawFit> {
    if data.len() < MIN_TWO_REGIME {
        return Err(Error::InsufficientData {
            needed: MIN_TWO_REGIME,
            got: data.len(),
        });
    }
    let split = opts.split_hint.unwrap_or(100);
    if split < 3 {
        return Err(Error::Config(format!(
            "split {split} leaves no lower regime"
        )));
    }
    let fit = fit_regimes(data, split)?;
    let stat = fit.lower.ks_statistic.max(fit.upper.ks_statistic);
    let n = data.len();
    let low_prob = fit.lower.n as f64 / n as f64;
    let low_cdf = Truncated {
        lo: 1,
        hi: split - 1,
    }
    .sampler(fit.lower.gamma);

    let exceed = (0..opts.bootstrap)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeded_rng(opts.seed.wrapping_add(0x9e37_79b9 * (r as u64 + 1)));
            let upper = TailSampler::new(fit.upper.gamma, split);
            let mut synthetic: Vec<u64> = (0..n)
                .map(|_| {
                    if rng.random::<f64>() < low_prob {
                        let u: f64 = rng.random();
                        1 + low_cdf.partition_point(|&c| c < u).min(low_cdf.len() - 1) as u64
                    } else {
                        upper.draw(&mut rng)
                    }
                })
                .collect();
            synthetic.sort_unstable();
            match fit_regimes(&synthetic, split) {
                Ok(f) => f.lower.ks_statistic.max(f.upper.ks_statistic) >= stat,
                Err(_) => true,
            }
        })
        .filter(|&x| x)
        .count();

    Ok(PowerLawFit {
        gamma: fit.lower.gamma,
        x_min: 1,
        n_tail: n,
        n,
        regimes: vec![fit.lower, fit.upper],
        split: Some(split),
        ks_statistic: stat,
        p_value: exceed as f64 / opts.bootstrap as f64,
        bootstrap: opts.bootstrap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn too_few_samples() {
        let r = fit_power_law(&[1, 2, 3], &PowerLawOptions::default());
        assert!(matches!(
            r,
            Err(Error::InsufficientData { needed: 50, got: 3 })
        ));
        let two = PowerLawOptions {
            two_regime: true,
            ..Default::default()
        };
        let r = fit_power_law(&vec![1; 60], &two);
        assert!(matches!(
            r,
            Err(Error::InsufficientData { needed: 100, .. })
        ));
    }

    #[test]
    fn constant_samples_are_degenerate() {
        let r = fit_power_law(&vec![7; 500], &PowerLawOptions::default());
        assert!(matches!(r, Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn zero_sample_rejected() {
        let mut v = vec![1u64; 100];
        v[3] = 0;
        assert!(fit_power_law(&v, &PowerLawOptions::default()).is_err());
    }

    #[test]
    fn sampler_matches_model_mean_tail() {
        // P(X = 1) for γ = 2.5, x_min = 1 is 1/ζ(2.5)
        let s = TailSampler::new(2.5, 1);
        let mut rng = seeded_rng(3);
        let n = 200_000;
        let ones = (0..n).filter(|_| s.draw(&mut rng) == 1).count() as f64 / n as f64;
        let expected = 1.0 / hurwitz_zeta(2.5, 1.0);
        assert!((ones - expected).abs() < 0.005, "{ones} vs {expected}");
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let x = golden_min(|x| (x - 2.25).powi(2), 1.0, 12.0);
        assert!((x - 2.25).abs() < 1e-8);
    }
}
