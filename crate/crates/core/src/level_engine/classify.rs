use super::{Level, LevelKind, LevelState, Outcome, StripeSide, TrialRecord};
use crate::error::{Error, Result};
use crate::market_data::ResampledSeries;
use crate::scalar::Scalar;

/// What happens when the price passes over a whole stripe between two
/// consecutive samples without a sample inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JumpPolicy {
    /// Break the level without recording a trial.
    #[default]
    BreakSilently,
    /// Record a cross trial with `enter_index == exit_index`.
    CountAsCross,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    /// The price has not left the stripe since the level was created.
    Unarmed,
    Outside(StripeSide),
    InTrial {
        entry: StripeSide,
        enter_index: usize,
        b_prev: u32,
    },
}

#[derive(Debug, Clone)]
struct Tracked<T> {
    level: Level<T>,
    phase: Phase,
}

/// A trial resolved by [`LevelTracker::push`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedTrial<T> {
    pub kind: LevelKind,
    pub level_value: T,
    pub level_created_at: usize,
    pub b_prev: u32,
    pub outcome: Outcome,
    pub enter_index: usize,
    pub exit_index: usize,
}

/// A level whose stripe currently holds the price during an open trial.
#[derive(Debug, Clone, Copy)]
pub struct OpenTrial<'a, T> {
    pub level: &'a Level<T>,
    /// Side the price came from; exiting there is a bounce.
    pub entry: StripeSide,
}

/// Incremental level lifecycle over a price path fed one sample at a time.
///
/// An extremum at index `k` is only known once the first different price
/// after it arrives; the level is spawned then and sees that sample as its
/// first observation.
#[derive(Debug, Clone)]
pub struct LevelTracker<T> {
    half_width: T,
    jump: JumpPolicy,
    next_index: usize,
    before_run: Option<T>,
    run: Option<(usize, T)>,
    active: Vec<Tracked<T>>,
    broken: Vec<Level<T>>,
}

impl<T: Scalar> LevelTracker<T> {
    pub fn new(delta: T) -> Self {
        Self::with_policy(delta, JumpPolicy::default())
    }

    pub fn with_policy(delta: T, jump: JumpPolicy) -> Self {
        Self {
            half_width: delta * T::half(),
            jump,
            next_index: 0,
            before_run: None,
            run: None,
            active: Vec::new(),
            broken: Vec::new(),
        }
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Index the next pushed sample will receive.
    pub fn next_index(&self) -> usize {
        self.next_index
    }

    pub fn active_levels(&self) -> impl Iterator<Item = &Level<T>> {
        self.active.iter().map(|t| &t.level)
    }

    /// Levels with an open trial, i.e. the price is in their stripe after
    /// having entered it from outside.
    pub fn open_trials(&self) -> impl Iterator<Item = OpenTrial<'_, T>> {
        self.active.iter().filter_map(|t| match t.phase {
            Phase::InTrial { entry, .. } => Some(OpenTrial {
                level: &t.level,
                entry,
            }),
            _ => None,
        })
    }

    /// Feeds the next sample and appends any trials it resolves to `closed`.
    pub fn push(&mut self, price: T, closed: &mut Vec<ClosedTrial<T>>) {
        let index = self.next_index;
        self.next_index += 1;

        let mut broke = false;
        for tracked in &mut self.active {
            step(tracked, price, index, self.jump, closed);
            broke |= tracked.level.state == LevelState::Broken;
        }
        if broke {
            let mut i = 0;
            while i < self.active.len() {
                if self.active[i].level.state == LevelState::Broken {
                    self.broken.push(self.active.remove(i).level);
                } else {
                    i += 1;
                }
            }
        }

        match self.run {
            Some((_, value)) if value == price => {}
            Some((start, value)) => {
                if let Some(prev) = self.before_run {
                    let kind = if value > prev && value > price {
                        Some(LevelKind::Resistance)
                    } else if value < prev && value < price {
                        Some(LevelKind::Support)
                    } else {
                        None
                    };
                    if let Some(kind) = kind {
                        let mut tracked = Tracked {
                            level: Level::new(value, kind, self.half_width, start),
                            phase: Phase::Unarmed,
                        };
                        step(&mut tracked, price, index, self.jump, closed);
                        self.active.push(tracked);
                    }
                }
                self.before_run = Some(value);
                self.run = Some((index, price));
            }
            None => self.run = Some((index, price)),
        }
    }

    /// Ends the path. Trials still open are discarded.
    pub fn finish(self) -> Vec<Level<T>> {
        let mut levels = self.broken;
        levels.extend(self.active.into_iter().map(|t| t.level));
        levels.sort_by_key(|l| (l.created_at, l.kind));
        levels
    }
}

fn step<T: Scalar>(
    tracked: &mut Tracked<T>,
    price: T,
    index: usize,
    jump: JumpPolicy,
    closed: &mut Vec<ClosedTrial<T>>,
) {
    let side = tracked.level.side_of(price);
    let level = &mut tracked.level;
    let close = |outcome, enter_index, b_prev| ClosedTrial {
        kind: level.kind,
        level_value: level.value,
        level_created_at: level.created_at,
        b_prev,
        outcome,
        enter_index,
        exit_index: index,
    };
    tracked.phase = match (tracked.phase, side) {
        (Phase::Unarmed, StripeSide::Inside) => Phase::Unarmed,
        (Phase::Unarmed, outside) => Phase::Outside(outside),
        (Phase::Outside(from), StripeSide::Inside) => Phase::InTrial {
            entry: from,
            enter_index: index,
            b_prev: level.bounces,
        },
        (Phase::Outside(from), now) if now == from => Phase::Outside(from),
        (Phase::Outside(_), far) => {
            if jump == JumpPolicy::CountAsCross {
                closed.push(close(Outcome::Cross, index, level.bounces));
            }
            level.state = LevelState::Broken;
            Phase::Outside(far)
        }
        (phase @ Phase::InTrial { .. }, StripeSide::Inside) => phase,
        (
            Phase::InTrial {
                entry,
                enter_index,
                b_prev,
            },
            now,
        ) => {
            if now == entry {
                closed.push(close(Outcome::Bounce, enter_index, b_prev));
                level.bounces += 1;
            } else {
                closed.push(close(Outcome::Cross, enter_index, b_prev));
                level.state = LevelState::Broken;
            }
            Phase::Outside(now)
        }
    };
}

/// Levels found on a series and the trials they produced.
#[derive(Debug, Clone)]
pub struct Classification<T> {
    pub levels: Vec<Level<T>>,
    pub trials: Vec<TrialRecord<T>>,
}

/// Runs the level state machine over `series` with stripe width `delta`.
///
/// Trials are ordered by `enter_index`, then by level creation index.
pub fn classify_events<T: Scalar>(
    series: &ResampledSeries<T>,
    delta: T,
) -> Result<Vec<TrialRecord<T>>> {
    Ok(classify_levels(series, delta)?.trials)
}

pub fn classify_levels<T: Scalar>(
    series: &ResampledSeries<T>,
    delta: T,
) -> Result<Classification<T>> {
    classify_with(series, delta, JumpPolicy::default())
}

pub fn classify_with<T: Scalar>(
    series: &ResampledSeries<T>,
    delta: T,
    jump: JumpPolicy,
) -> Result<Classification<T>> {
    if !(delta >= T::zero()) || !delta.is_finite() {
        return Err(Error::InvalidDelta(delta.as_f64()));
    }
    if series.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: series.len(),
        });
    }
    let mut tracker = LevelTracker::with_policy(delta, jump);
    let mut closed = Vec::new();
    for &p in &series.prices {
        tracker.push(p, &mut closed);
    }
    let levels = tracker.finish();
    closed.sort_by_key(|c| (c.enter_index, c.level_created_at, c.kind));
    let trials = closed
        .into_iter()
        .map(|c| TrialRecord {
            symbol: series.source.symbol.clone(),
            day_id: series.source.day.clone(),
            scale: series.scale,
            kind: c.kind,
            level_value: c.level_value,
            level_created_at: c.level_created_at,
            b_prev: c.b_prev,
            outcome: c.outcome,
            enter_index: c.enter_index,
            exit_index: c.exit_index,
        })
        .collect();
    Ok(Classification { levels, trials })
}
