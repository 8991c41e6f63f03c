//! Weighted norms, windowed suprema, the decay monitors, and finite-time
//! phase detection over simulation results.

use std::collections::VecDeque;

use crate::delay::RateFunction;
use crate::error::{Error, Result};
use crate::lambda::LambdaVec;

use super::integrate::SimResult;

/// The weighted infinity norm `max_{p,l} |y[p*8+l]| / lambda_p[l]`;
/// zero exactly when `y` is zero.
pub fn lambda_inf_norm(lambda: &LambdaVec, y: &[f64]) -> f64 {
    assert_eq!(y.len(), 8 * lambda.n(), "state length mismatch");
    let mut worst = 0.0f64;
    for p in 0..lambda.n() {
        for l in 0..8 {
            let v = (y[p * 8 + l] / lambda.entry(p, l)).abs();
            if v > worst {
                worst = v;
            }
        }
    }
    worst
}

/// Sliding maximum over a window whose left edge never moves backwards.
pub(crate) struct RunningWindowMax {
    times: Vec<f64>,
    values: Vec<f64>,
    deque: VecDeque<usize>,
    left: usize,
}

impl RunningWindowMax {
    pub fn new() -> Self {
        RunningWindowMax {
            times: Vec::new(),
            values: Vec::new(),
            deque: VecDeque::new(),
            left: 0,
        }
    }

    pub fn push(&mut self, t: f64, v: f64) {
        let idx = self.times.len();
        self.times.push(t);
        self.values.push(v);
        while let Some(&back) = self.deque.back() {
            if self.values[back] <= v {
                self.deque.pop_back();
            } else {
                break;
            }
        }
        self.deque.push_back(idx);
    }

    /// Maximum over entries with time in the window; `strict` excludes the
    /// left edge itself (open window).
    pub fn max_from(&mut self, window_start: f64, strict: bool) -> f64 {
        while self.left < self.times.len() {
            let t = self.times[self.left];
            let out = if strict {
                t <= window_start
            } else {
                t < window_start
            };
            if !out {
                break;
            }
            if self.deque.front() == Some(&self.left) {
                self.deque.pop_front();
            }
            self.left += 1;
        }
        self.deque
            .front()
            .map(|&i| self.values[i])
            .unwrap_or(f64::NEG_INFINITY)
    }
}

/// Weighted deviation norms of a run, recomputed with the given lambda:
/// `||w(t_i) - target||` in the lambda norm per grid point.
pub fn deviation_norms(result: &SimResult, lambda: &LambdaVec) -> Vec<f64> {
    let traj = &result.trajectory;
    let tgt = result.flat_target();
    (0..traj.len())
        .map(|i| {
            let s = traj.state_at(i);
            let dev: Vec<f64> = s.iter().zip(tgt.iter()).map(|(a, b)| a - b).collect();
            lambda_inf_norm(lambda, &dev)
        })
        .collect()
}

/// Pre-start norm samples covering the earliest window, oldest first.
/// Returns `(times, values)`; empty when no window reaches before `t_start`.
fn history_prefix(result: &SimResult, lambda: &LambdaVec) -> (Vec<f64>, Vec<f64>) {
    let traj = &result.trajectory;
    let t_start = traj.t_start();
    let earliest = result
        .window_start
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        .min(t_start);
    if earliest >= t_start {
        return (Vec::new(), Vec::new());
    }
    let h = result.step;
    let k = ((t_start - earliest) / h).ceil() as usize;
    let tgt = result.flat_target();
    let mut times = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for j in (1..=k).rev() {
        let t = t_start - j as f64 * h;
        let s = traj.initial_history().eval(t);
        let dev: Vec<f64> = s.iter().zip(tgt.iter()).map(|(a, b)| a - b).collect();
        times.push(t);
        values.push(lambda_inf_norm(lambda, &dev));
    }
    (times, values)
}

fn windowed_series(
    result: &SimResult,
    series: &[f64],
    prefix: (Vec<f64>, Vec<f64>),
    strict: bool,
) -> Vec<f64> {
    let times = result.trajectory.times();
    let mut win = RunningWindowMax::new();
    for (t, v) in prefix.0.iter().zip(prefix.1.iter()) {
        win.push(*t, *v);
    }
    let mut out = Vec::with_capacity(series.len());
    for (i, v) in series.iter().enumerate() {
        win.push(times[i], *v);
        // The right edge always belongs to the window, even when the
        // window is degenerate (zero delay at t = t_start).
        out.push(win.max_from(result.window_start[i], strict).max(*v));
    }
    out
}

/// Supremum of the weighted deviation norm over the closed window
/// `[t - tau(t), t]` at the grid point nearest `t`.
pub fn window_sup_norm(result: &SimResult, lambda: &LambdaVec, t: f64) -> Result<f64> {
    let times = result.trajectory.times();
    let (first, last) = match (times.first(), times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::HistoryOutOfRange { t, end: f64::NAN }),
    };
    if t < first || t > last {
        return Err(Error::HistoryOutOfRange { t, end: last });
    }
    let norms = deviation_norms(result, lambda);
    let sups = windowed_series(result, &norms, history_prefix(result, lambda), false);
    let idx = times
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (*a - t).abs().partial_cmp(&(*b - t).abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    Ok(sups[idx])
}

/// The decay monitor: per grid point, the supremum of `mu(s) ||Y(s)||`
/// over the open window `(t - tau(t), t]`. Non-increasing after some onset
/// when the mu-stability criterion holds.
pub fn monitor_p(result: &SimResult, lambda: &LambdaVec, rate: &RateFunction) -> Vec<f64> {
    let times = result.trajectory.times();
    let norms = deviation_norms(result, lambda);
    let weighted: Vec<f64> = norms
        .iter()
        .zip(times.iter())
        .map(|(n, t)| rate.mu(*t) * n)
        .collect();
    let (pt, pv) = history_prefix(result, lambda);
    let weighted_prefix: Vec<f64> = pv
        .iter()
        .zip(pt.iter())
        .map(|(n, t)| rate.mu(*t) * n)
        .collect();
    windowed_series(result, &weighted, (pt, weighted_prefix), true)
}

/// The phase-two monitor: windowed supremum (closed window) of
/// `||Y_hat(t)|| + theta * t`. Non-increasing on the second phase under
/// adequate constant gains; this only reports, never asserts.
pub fn monitor_phase2(result: &SimResult, lambda: &LambdaVec, theta: f64) -> Vec<f64> {
    assert!(theta > 0.0, "theta must be positive");
    let times = result.trajectory.times();
    let norms = deviation_norms(result, lambda);
    let shifted: Vec<f64> = norms
        .iter()
        .zip(times.iter())
        .map(|(n, t)| n + theta * t)
        .collect();
    let (pt, pv) = history_prefix(result, lambda);
    let shifted_prefix: Vec<f64> = pv
        .iter()
        .zip(pt.iter())
        .map(|(n, t)| n + theta * t)
        .collect();
    windowed_series(result, &shifted, (pt, shifted_prefix), false)
}

/// The two finite-time phase marks of a controlled run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTimes {
    /// First grid time at which the windowed sup of the weighted norm
    /// drops to 1 or below.
    pub t1: Option<f64>,
    /// First grid time from which the weighted norm stays within `tol`
    /// through the end of the run.
    pub t2: Option<f64>,
}

/// Detects the two phases: windowed sup reaching 1, then the norm reaching
/// (and holding) `tol`.
pub fn detect_phases(result: &SimResult, lambda: &LambdaVec, tol: f64) -> PhaseTimes {
    let times = result.trajectory.times();
    let norms = deviation_norms(result, lambda);
    let sups = windowed_series(result, &norms, history_prefix(result, lambda), false);

    let t1 = sups.iter().position(|s| *s <= 1.0).map(|i| times[i]);
    let t2 = match norms.iter().rposition(|n| *n > tol) {
        None => times.first().copied(),
        Some(i) if i + 1 < norms.len() => Some(times[i + 1]),
        Some(_) => None,
    };
    PhaseTimes { t1, t2 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_norm_examples() {
        let lam = LambdaVec::uniform(2, 0.2).unwrap();
        let mut y = vec![0.0; 16];
        y[5] = 0.1;
        assert_eq!(lambda_inf_norm(&lam, &y), 0.5);
        assert_eq!(lambda_inf_norm(&lam, &[0.0; 16]), 0.0);
        // all-ones weights give the plain infinity norm
        let ones = LambdaVec::ones(2);
        y[11] = -3.0;
        assert_eq!(lambda_inf_norm(&ones, &y), 3.0);
    }

    #[test]
    fn norm_scaling_in_lambda_and_state() {
        let lam = LambdaVec::uniform(1, 0.5).unwrap();
        let y = vec![1.0, -2.0, 0.0, 0.25, 0.0, 0.0, 0.0, 3.0];
        let base = lambda_inf_norm(&lam, &y);
        let doubled: Vec<f64> = y.iter().map(|x| 2.0 * x).collect();
        assert_eq!(lambda_inf_norm(&lam, &doubled), 2.0 * base);
        let lam10 = lam.scaled(10.0).unwrap();
        assert!((lambda_inf_norm(&lam10, &y) - base / 10.0).abs() < 1e-15);
    }

    #[test]
    fn running_window_max_tracks_sawtooth() {
        let mut win = RunningWindowMax::new();
        let values = [1.0, 3.0, 2.0, 5.0, 4.0, 1.0, 0.5];
        for (i, v) in values.iter().enumerate() {
            win.push(i as f64, *v);
        }
        assert_eq!(win.max_from(0.0, false), 5.0);
        assert_eq!(win.max_from(4.0, false), 4.0);
        // strict left edge drops the value exactly at the edge
        assert_eq!(win.max_from(4.0, true), 1.0);
        assert_eq!(win.max_from(6.0, false), 0.5);
    }
}
