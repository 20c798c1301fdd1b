//! Brute-force reference classifier.
//!
//! Written from the rules alone: every extremum is found by looking at its
//! plateau and both neighbours, and every level is then followed on its own
//! by a forward scan over the rest of the series.

#![allow(dead_code)]

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Resistance,
    Support,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Result_ {
    Bounce,
    Cross,
}

/// (enter, created, kind, level value, b_prev, outcome, exit)
pub type OracleTrial = (usize, usize, Kind, f64, u32, Result_, usize);

/// Extrema as (plateau start, plateau end, kind); plateaus touching either
/// end of the series are not extrema.
pub fn extrema(p: &[f64]) -> Vec<(usize, usize, Kind)> {
    let mut out = Vec::new();
    let mut a = 0;
    while a < p.len() {
        let mut b = a;
        while b + 1 < p.len() && p[b + 1] == p[a] {
            b += 1;
        }
        if a > 0 && b + 1 < p.len() {
            if p[a - 1] < p[a] && p[b + 1] < p[a] {
                out.push((a, b, Kind::Resistance));
            } else if p[a - 1] > p[a] && p[b + 1] > p[a] {
                out.push((a, b, Kind::Support));
            }
        }
        a = b + 1;
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Below,
    Inside,
    Above,
}

pub fn classify(p: &[f64], delta: f64, count_jumps: bool) -> Vec<OracleTrial> {
    let half = delta / 2.0;
    let side = |x: f64, v: f64| {
        if x < v - half {
            Side::Below
        } else if x > v + half {
            Side::Above
        } else {
            Side::Inside
        }
    };
    let mut trials = Vec::new();
    for (start, end, kind) in extrema(p) {
        let v = p[start];
        let mut bounces = 0u32;
        let mut last_outside: Option<Side> = None;
        let mut open: Option<(Side, usize)> = None;
        for i in end + 1..p.len() {
            let s = side(p[i], v);
            if let Some((entry, enter)) = open {
                if s == Side::Inside {
                    continue;
                }
                if s == entry {
                    trials.push((enter, start, kind, v, bounces, Result_::Bounce, i));
                    bounces += 1;
                    open = None;
                    last_outside = Some(s);
                    continue;
                }
                trials.push((enter, start, kind, v, bounces, Result_::Cross, i));
                break;
            }
            match (last_outside, s) {
                (None, Side::Inside) => {}
                (None, outside) => last_outside = Some(outside),
                (Some(from), Side::Inside) => open = Some((from, i)),
                (Some(from), now) if now == from => {}
                (Some(_), _) => {
                    if count_jumps {
                        trials.push((i, start, kind, v, bounces, Result_::Cross, i));
                    }
                    break;
                }
            }
        }
    }
    trials.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    trials
}
