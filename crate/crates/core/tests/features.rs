use bounce_lab::features::{build_histogram, extract_features, Binning, Pairing};
use bounce_lab::inference::powerlaw_fit;
use bounce_lab::level_engine::{analyze_series, classify_events, JumpPolicy};
use bounce_lab::market_data::{gen_sticky_level, shuffle_returns, StickyParams, SurrogateKind, SurrogateSpec};
use bounce_lab::{Feature, SeriesId, Series};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

fn sticky(bias: f64, seed: u64, len: usize) -> Series {
    let spec = SurrogateSpec::new(SurrogateKind::StickyLevel(StickyParams::new(1, bias)), seed, len);
    gen_sticky_level(&spec).unwrap()
}

fn features_of(series: Series) -> Vec<Feature> {
    let run = analyze_series(series, 1.0, JumpPolicy::default()).unwrap();
    extract_features(&run.series, &run.trials, Pairing::Consecutive).unwrap()
}

#[test]
fn random_walk_return_times_scale_with_minus_three_halves() {
    let mut times = Vec::new();
    let mut seed = 0;
    while times.len() < 100_000 {
        times.extend(features_of(sticky(0.5, seed, 30_600)).iter().map(|f| f.recurrence_time as f64));
        seed += 1;
    }
    let hist = build_histogram(&times, Binning::Logarithmic, 30).unwrap();
    // middle decade of the occupied range
    let (lo, hi) = (1.0f64, times.iter().copied().fold(1.0, f64::max));
    let centre = (lo * hi).sqrt();
    let fit = powerlaw_fit(&hist, Some((centre / 10f64.sqrt(), centre * 10f64.sqrt()))).unwrap();
    assert!((fit.exponent + 1.5).abs() < 0.3, "exponent {}", fit.exponent);
}

/// Fraction of `sample` above the 95th percentile of `reference`.
fn tail_beyond_q95(sample: &[f64], reference: &[f64]) -> (f64, f64) {
    let mut sorted = reference.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = sorted[(sorted.len() as f64 * 0.95) as usize];
    let frac = |v: &[f64]| v.iter().filter(|&&x| x > q).count() as f64 / v.len() as f64;
    (frac(sample), frac(reference))
}

#[test]
fn sticky_tails_are_thinner_than_shuffled() {
    let (mut tau, mut tau_shuf, mut dmax, mut dmax_shuf) = (vec![], vec![], vec![], vec![]);
    for seed in 0..20 {
        let s = sticky(0.8, seed, 5_000);
        let shuffled = shuffle_returns(&s, seed + 1_000).unwrap();
        for f in features_of(s) {
            tau.push(f.recurrence_time as f64);
            dmax.push(f.max_excursion);
        }
        for f in features_of(shuffled) {
            tau_shuf.push(f.recurrence_time as f64);
            dmax_shuf.push(f.max_excursion);
        }
    }
    let (a, b) = tail_beyond_q95(&tau, &tau_shuf);
    assert!(a < b, "recurrence tail {a} vs shuffled {b}");
    let (a, b) = tail_beyond_q95(&dmax, &dmax_shuf);
    assert!(a < b, "excursion tail {a} vs shuffled {b}");
}

#[test]
fn exponential_first_bin_mass() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let exp = Exp::new(1.0).unwrap();
    let samples: Vec<f64> = (0..10_000).map(|_| exp.sample(&mut rng)).collect();
    let hist = build_histogram(&samples, Binning::Linear, 20).unwrap();
    let (lo, hi) = (hist.bin_edges[0], hist.bin_edges[1]);
    let mass = (-lo).exp() - (-hi).exp();
    let expected = mass / (hi - lo);
    assert!((hist.density[0] - expected).abs() < 0.05 * expected, "{} vs {expected}", hist.density[0]);
    assert_eq!(hist, build_histogram(&samples, Binning::Linear, 20).unwrap());
}

fn walk() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2i32..=2, 3..150).prop_map(|steps| {
        steps
            .iter()
            .scan(100i32, |x, d| {
                *x += d;
                Some(f64::from(*x))
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn histogram_counts_every_sample(samples in prop::collection::vec(0.01f64..1e4, 1..400), bins in 2usize..40, log in any::<bool>()) {
        let binning = if log { Binning::Logarithmic } else { Binning::Linear };
        let h = build_histogram(&samples, binning, bins).unwrap();
        prop_assert_eq!(h.total(), samples.len() as u64);
        let integral: f64 = h.density.iter().zip(h.bin_edges.windows(2)).map(|(d, e)| d * (e[1] - e[0])).sum();
        prop_assert!((integral - 1.0).abs() < 1e-9);
    }

    #[test]
    fn one_feature_per_consecutive_pair(p in walk()) {
        let series = Series::from_prices(SeriesId::new("S", "d"), p);
        let trials = classify_events(&series, 1.0).unwrap();
        let features = extract_features(&series, &trials, Pairing::Consecutive).unwrap();
        let mut keys: Vec<_> = trials.iter().map(|t| t.level_key()).collect();
        keys.sort();
        let mut expected = 0;
        for group in keys.chunk_by(|a, b| a == b) {
            expected += group.len() - 1;
        }
        prop_assert_eq!(features.len(), expected);
        for f in &features {
            prop_assert!(f.recurrence_time >= 1);
            prop_assert!(f.max_excursion > 0.5, "excursion {} inside the stripe", f.max_excursion);
        }
    }
}
