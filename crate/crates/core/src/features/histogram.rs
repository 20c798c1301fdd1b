use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Binning {
    Linear,
    Logarithmic,
}

impl std::str::FromStr for Binning {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "linear" => Ok(Binning::Linear),
            "log" | "logarithmic" => Ok(Binning::Logarithmic),
            other => Err(format!("unknown binning `{other}` (expected linear|log)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram<T> {
    pub bin_edges: Vec<T>,
    pub counts: Vec<u64>,
    /// `count / (total * width)`; integrates to 1 over the covered range.
    pub density: Vec<T>,
    pub binning: Binning,
}

/// Bins `samples` between their minimum and maximum.
///
/// Logarithmic edges are geometric and need strictly positive samples.
/// When every sample is equal the range is widened to one unit (linear) or
/// a factor of two (logarithmic) around the value.
pub fn build_histogram<T: Scalar>(
    samples: &[T],
    binning: Binning,
    n_bins: usize,
) -> Result<Histogram<T>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if n_bins < 2 {
        return Err(Error::InvalidHistogram(format!("need at least 2 bins, got {n_bins}")));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidHistogram("non-finite sample".into()));
    }
    if binning == Binning::Logarithmic && samples.iter().any(|&x| x <= T::zero()) {
        return Err(Error::InvalidHistogram(
            "logarithmic bins need positive samples".into(),
        ));
    }
    let mut lo = samples.iter().copied().fold(T::infinity(), T::min);
    let mut hi = samples.iter().copied().fold(T::neg_infinity(), T::max);
    if lo == hi {
        match binning {
            Binning::Linear => {
                lo = lo - T::half();
                hi = hi + T::half();
            }
            Binning::Logarithmic => {
                lo = lo / T::SQRT_2();
                hi = hi * T::SQRT_2();
            }
        }
    }
    let mut h = Histogram::with_edges(edges(lo, hi, binning, n_bins), binning)?;
    for &x in samples {
        h.add(x);
    }
    h.refresh_density();
    Ok(h)
}

fn edges<T: Scalar>(lo: T, hi: T, binning: Binning, n_bins: usize) -> Vec<T> {
    let nb = T::of_usize(n_bins);
    let mut e: Vec<T> = (0..=n_bins)
        .map(|i| {
            let f = T::of_usize(i) / nb;
            match binning {
                Binning::Linear => lo + (hi - lo) * f,
                Binning::Logarithmic => lo * (hi / lo).powf(f),
            }
        })
        .collect();
    e[0] = lo;
    e[n_bins] = hi;
    e
}

impl<T: Scalar> Histogram<T> {
    /// Empty histogram over fixed edges; use it to bin several sample sets
    /// on a common grid.
    pub fn with_edges(bin_edges: Vec<T>, binning: Binning) -> Result<Self> {
        if bin_edges.len() < 3 || bin_edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidHistogram(
                "edges must be strictly increasing with at least 2 bins".into(),
            ));
        }
        let n = bin_edges.len() - 1;
        Ok(Self {
            bin_edges,
            counts: vec![0; n],
            density: vec![T::zero(); n],
            binning,
        })
    }

    /// Counts `x` if it lies within the edges (the last bin is closed).
    /// Call [`Histogram::refresh_density`] after adding.
    pub fn add(&mut self, x: T) -> bool {
        let n = self.counts.len();
        let (lo, hi) = (self.bin_edges[0], self.bin_edges[n]);
        if !(x >= lo && x <= hi) {
            return false;
        }
        let idx = self.bin_edges[1..n].partition_point(|&e| e <= x);
        self.counts[idx] += 1;
        true
    }

    pub fn refresh_density(&mut self) {
        let total: u64 = self.counts.iter().sum();
        if total == 0 {
            self.density.iter_mut().for_each(|d| *d = T::zero());
            return;
        }
        let total = T::of_usize(total as usize);
        for (i, d) in self.density.iter_mut().enumerate() {
            let width = self.bin_edges[i + 1] - self.bin_edges[i];
            *d = T::of_usize(self.counts[i] as usize) / (total * width);
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Arithmetic bin centres for linear bins, geometric for logarithmic.
    pub fn centers(&self) -> Vec<T> {
        self.bin_edges
            .windows(2)
            .map(|w| match self.binning {
                Binning::Linear => (w[0] + w[1]) * T::half(),
                Binning::Logarithmic => (w[0] * w[1]).sqrt(),
            })
            .collect()
    }

    /// Adds the counts of a histogram over identical edges.
    pub fn merge(&mut self, other: &Histogram<T>) -> Result<()> {
        if self.bin_edges != other.bin_edges || self.binning != other.binning {
            return Err(Error::InvalidHistogram("edges differ".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.refresh_density();
        Ok(())
    }
}
