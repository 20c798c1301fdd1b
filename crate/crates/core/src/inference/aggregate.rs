use serde::Serialize;

use super::BounceStats;
use crate::level_engine::{LevelKind, TrialRecord};
use crate::scalar::Scalar;

/// Bounce and trial counts per `b_prev` class for one level kind.
///
/// Counts from disjoint trial sets combine with [`TrialCounts::merge`] in
/// any order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialCounts {
    pub kind: LevelKind,
    pub max_b: u32,
    /// `bounces[i]` and `trials[i]` belong to `b_prev = i + 1`.
    pub bounces: Vec<u64>,
    pub trials: Vec<u64>,
    /// Trials on fresh levels (`b_prev = 0`), not part of the table.
    pub excluded_first: u64,
    /// Trials with `b_prev > max_b`.
    pub excluded_above: u64,
}

impl TrialCounts {
    pub fn new(kind: LevelKind, max_b: u32) -> Self {
        let max_b = max_b.max(1);
        Self {
            kind,
            max_b,
            bounces: vec![0; max_b as usize],
            trials: vec![0; max_b as usize],
            excluded_first: 0,
            excluded_above: 0,
        }
    }

    pub fn add<T>(&mut self, trial: &TrialRecord<T>) {
        if trial.kind != self.kind {
            return;
        }
        match trial.b_prev {
            0 => self.excluded_first += 1,
            b if b > self.max_b => self.excluded_above += 1,
            b => {
                let i = (b - 1) as usize;
                self.trials[i] += 1;
                if trial.is_bounce() {
                    self.bounces[i] += 1;
                }
            }
        }
    }

    pub fn extend<'a, T: 'a>(&mut self, trials: impl IntoIterator<Item = &'a TrialRecord<T>>) {
        for t in trials {
            self.add(t);
        }
    }

    pub fn merge(&mut self, other: &TrialCounts) {
        assert_eq!(self.kind, other.kind, "merging counts of different kinds");
        assert_eq!(self.max_b, other.max_b, "merging counts with different max_b");
        for i in 0..self.trials.len() {
            self.bounces[i] += other.bounces[i];
            self.trials[i] += other.trials[i];
        }
        self.excluded_first += other.excluded_first;
        self.excluded_above += other.excluded_above;
    }

    pub fn tabled(&self) -> u64 {
        self.trials.iter().sum()
    }

    pub fn stats<T: Scalar>(&self) -> Vec<BounceStats<T>> {
        self.bounces
            .iter()
            .zip(&self.trials)
            .enumerate()
            .map(|(i, (&n, &total))| {
                BounceStats::from_counts(i as u32 + 1, n, total).expect("n <= N by construction")
            })
            .collect()
    }
}

/// Per-class statistics plus the counts they came from.
#[derive(Debug, Clone)]
pub struct Aggregate<T> {
    pub stats: Vec<BounceStats<T>>,
    pub counts: TrialCounts,
}

/// Pools trials of one kind into `b_prev = 1..=max_b` classes.
pub fn aggregate_trials<T: Scalar>(
    trials: &[TrialRecord<T>],
    kind: LevelKind,
    max_b: u32,
) -> Aggregate<T> {
    let mut counts = TrialCounts::new(kind, max_b);
    counts.extend(trials);
    Aggregate {
        stats: counts.stats(),
        counts,
    }
}
