//! Similarity distributions over randomly sampled sentence pairs.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bins: Vec<Bin>,
    pub samples: usize,
    /// The pair population was smaller than the sample, so pairs repeat.
    pub with_replacement: bool,
}

impl Histogram {
    /// Fixed-width bins spanning `[min, max]` of `values`. A constant sample
    /// gets bins of width `1 / bin_count` starting at that value.
    pub fn from_values(values: &[f64], bin_count: usize) -> Result<Self> {
        if bin_count == 0 {
            return Err(Error::NoBins);
        }
        if values.is_empty() {
            return Ok(Histogram { bins: Vec::new(), samples: 0, with_replacement: false });
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = if max > min { (max - min) / bin_count as f64 } else { 1.0 / bin_count as f64 };
        let mut bins: Vec<Bin> = (0..bin_count)
            .map(|i| Bin { lo: min + i as f64 * width, hi: min + (i + 1) as f64 * width, count: 0 })
            .collect();
        if max > min {
            bins[bin_count - 1].hi = max;
        }
        for &v in values {
            let idx = ((v - min) / width) as usize;
            bins[idx.min(bin_count - 1)].count += 1;
        }
        Ok(Histogram { bins, samples: values.len(), with_replacement: false })
    }

    /// Share of samples in bin `i`.
    pub fn mass(&self, i: usize) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        self.bins.get(i).map_or(0.0, |b| b.count as f64 / self.samples as f64)
    }
}

/// `sample_size` uniformly drawn `(simple, complex)` index pairs.
///
/// Draws without replacement while the `simple_count × complex_count`
/// population is large enough, and with replacement otherwise (flagged by
/// the returned bool).
pub fn sample_pair_indices(
    simple_count: usize,
    complex_count: usize,
    sample_size: usize,
    seed: u64,
) -> (Vec<(usize, usize)>, bool) {
    let population = simple_count.saturating_mul(complex_count);
    if population == 0 || sample_size == 0 {
        return (Vec::new(), false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let split = |k: usize| (k / complex_count, k % complex_count);
    if sample_size <= population {
        let picked = rand::seq::index::sample(&mut rng, population, sample_size);
        (picked.iter().map(split).collect(), false)
    } else {
        ((0..sample_size).map(|_| split(rng.random_range(0..population))).collect(), true)
    }
}
