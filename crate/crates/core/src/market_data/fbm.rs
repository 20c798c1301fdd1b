use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{ResampledSeries, SeriesId, SurrogateKind, SurrogateSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance below which a negative circulant eigenvalue is
/// treated as rounding noise and clamped to zero.
const EIGEN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgnMethod {
    DaviesHarte,
    Hosking,
}

#[derive(Clone)]
enum Plan {
    DaviesHarte {
        /// sqrt(eigenvalue / 2n) for every circulant frequency
        scale: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
    Hosking {
        /// autocovariance at lags 0..n
        gamma: Vec<f64>,
    },
}

/// Exact sampler of unit-variance fractional Gaussian noise.
///
/// The circulant embedding is tried first; if its spectrum has a truly
/// negative eigenvalue the Hosking recursion is used instead.
#[derive(Clone)]
pub struct FgnGenerator {
    n: usize,
    hurst: f64,
    plan: Plan,
}

impl std::fmt::Debug for FgnGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FgnGenerator")
            .field("n", &self.n)
            .field("hurst", &self.hurst)
            .field("method", &self.method())
            .finish()
    }
}

/// Autocovariance of unit fGn at lag `k`.
pub(crate) fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let k = k as f64;
    let h2 = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

impl FgnGenerator {
    pub fn new(n: usize, hurst: f64) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::InvalidHurst(hurst));
        }
        if n == 0 {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        let plan = davies_harte_plan(n, hurst).unwrap_or_else(|| hosking_plan(n, hurst));
        Ok(Self { n, hurst, plan })
    }

    /// Forces the Hosking recursion; O(n^2) time per sample.
    pub fn hosking(n: usize, hurst: f64) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::InvalidHurst(hurst));
        }
        Ok(Self {
            n,
            hurst,
            plan: hosking_plan(n, hurst),
        })
    }

    pub fn method(&self) -> FgnMethod {
        match self.plan {
            Plan::DaviesHarte { .. } => FgnMethod::DaviesHarte,
            Plan::Hosking { .. } => FgnMethod::Hosking,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.n;
        match &self.plan {
            Plan::DaviesHarte { scale, fft } => {
                let m = 2 * n;
                let mut w = vec![Complex::new(0.0, 0.0); m];
                w[0] = Complex::new(scale[0] * rng.sample::<f64, _>(StandardNormal), 0.0);
                for j in 1..n {
                    let a: f64 = rng.sample(StandardNormal);
                    let b: f64 = rng.sample(StandardNormal);
                    let s = scale[j] * std::f64::consts::FRAC_1_SQRT_2;
                    w[j] = Complex::new(s * a, s * b);
                    w[m - j] = w[j].conj();
                }
                w[n] = Complex::new(scale[n] * rng.sample::<f64, _>(StandardNormal), 0.0);
                fft.process(&mut w);
                w[..n].iter().map(|c| c.re).collect()
            }
            Plan::Hosking { gamma } => {
                // Durbin-Levinson: phi[j] multiplies x[k-1-j] when predicting x[k]
                let mut x = Vec::with_capacity(n);
                let mut phi: Vec<f64> = Vec::with_capacity(n);
                let mut next = Vec::with_capacity(n);
                let mut v = gamma[0];
                x.push(v.sqrt() * rng.sample::<f64, _>(StandardNormal));
                for k in 1..n {
                    let num = gamma[k]
                        - phi
                            .iter()
                            .enumerate()
                            .map(|(j, p)| p * gamma[k - 1 - j])
                            .sum::<f64>();
                    let kk = num / v;
                    next.clear();
                    next.extend((0..k - 1).map(|j| phi[j] - kk * phi[k - 2 - j]));
                    next.push(kk);
                    std::mem::swap(&mut phi, &mut next);
                    v *= 1.0 - kk * kk;
                    let mean: f64 = phi.iter().zip(x.iter().rev()).map(|(p, v)| p * v).sum();
                    x.push(mean + v.max(0.0).sqrt() * rng.sample::<f64, _>(StandardNormal));
                }
                x
            }
        }
    }
}

fn davies_harte_plan(n: usize, hurst: f64) -> Option<Plan> {
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let lag = if j <= n { j } else { m - j };
            Complex::new(fgn_autocovariance(hurst, lag), 0.0)
        })
        .collect();
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut row);
    let peak = row.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    let mut scale = Vec::with_capacity(n + 1);
    for c in &row[..=n] {
        let lambda = if c.re < 0.0 {
            if -c.re > EIGEN_TOLERANCE * peak {
                return None;
            }
            0.0
        } else {
            c.re
        };
        scale.push((lambda / m as f64).sqrt());
    }
    Some(Plan::DaviesHarte { scale, fft })
}

fn hosking_plan(n: usize, hurst: f64) -> Plan {
    Plan::Hosking {
        gamma: (0..=n).map(|k| fgn_autocovariance(hurst, k)).collect(),
    }
}

/// Cumulative sum of fractional Gaussian noise, starting at 0.
///
/// The output has `spec.length` prices built from `length - 1` unit-variance
/// fGn increments.
pub fn gen_fractional_walk<T: Scalar>(spec: &SurrogateSpec) -> Result<ResampledSeries<T>> {
    let hurst = match spec.kind {
        SurrogateKind::FractionalWalk { hurst } => hurst,
        _ => {
            return Err(Error::InvalidSurrogate(
                "gen_fractional_walk needs a FractionalWalk spec".into(),
            ))
        }
    };
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidHurst(hurst));
    }
    if spec.length < 64 {
        return Err(Error::TooShort {
            needed: 64,
            got: spec.length,
        });
    }
    let generator = FgnGenerator::new(spec.length - 1, hurst)?;
    let noise = generator.sample(&mut spec.rng());
    let mut prices = Vec::with_capacity(spec.length);
    let mut level = 0.0;
    prices.push(T::zero());
    for x in noise {
        level += x;
        prices.push(T::of(level));
    }
    Ok(ResampledSeries::from_prices(
        SeriesId::new("FBM", format!("s{}", spec.seed)),
        prices,
    ))
}
