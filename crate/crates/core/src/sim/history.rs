//! Dense trajectory storage with cubic Hermite interpolation, plus the
//! pre-start history function delayed lookups fall back to.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// State on `t <= t_start`.
#[derive(Clone)]
pub enum InitialHistory {
    /// Constant history equal to the given flat state.
    Constant(Vec<f64>),
    /// Arbitrary function of time returning the flat state.
    Closure(Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>),
}

impl InitialHistory {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        match self {
            InitialHistory::Constant(v) => v.clone(),
            InitialHistory::Closure(f) => f(t),
        }
    }

    fn eval_component(&self, t: f64, idx: usize) -> f64 {
        match self {
            InitialHistory::Constant(v) => v[idx],
            InitialHistory::Closure(f) => f(t)[idx],
        }
    }
}

impl fmt::Debug for InitialHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialHistory::Constant(_) => f.write_str("InitialHistory::Constant"),
            InitialHistory::Closure(_) => f.write_str("InitialHistory::Closure"),
        }
    }
}

/// A strictly increasing grid of times with states and derivatives, giving
/// cubic Hermite dense output, and an initial history covering
/// `t <= t_start`.
#[derive(Debug, Clone)]
pub struct HistoryTrajectory {
    t_start: f64,
    grid: Vec<f64>,
    states: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
    initial_history: InitialHistory,
    dim: usize,
}

fn hermite(t: f64, t0: f64, t1: f64, y0: f64, m0: f64, y1: f64, m1: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * m0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * m1
}

impl HistoryTrajectory {
    pub fn new(t_start: f64, dim: usize, initial_history: InitialHistory) -> Self {
        HistoryTrajectory {
            t_start,
            grid: Vec::new(),
            states: Vec::new(),
            derivs: Vec::new(),
            initial_history,
            dim,
        }
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.grid
    }

    pub fn state_at(&self, i: usize) -> &[f64] {
        &self.states[i]
    }

    pub fn deriv_at(&self, i: usize) -> &[f64] {
        &self.derivs[i]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn initial_history(&self) -> &InitialHistory {
        &self.initial_history
    }

    pub fn push(&mut self, t: f64, state: Vec<f64>, deriv: Vec<f64>) {
        debug_assert!(state.len() == self.dim && deriv.len() == self.dim);
        debug_assert!(self.grid.last().is_none_or(|last| t > *last));
        self.grid.push(t);
        self.states.push(state);
        self.derivs.push(deriv);
    }

    /// Index of the interval `[grid[i], grid[i+1]]` containing `t`
    /// (`t` within the grid range, grid has at least 2 points).
    fn bracket(&self, t: f64) -> usize {
        match self.grid.binary_search_by(|g| g.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.grid.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.grid.len() - 2),
        }
    }

    /// State at time `t`: initial history for `t <= t_start`, stored value
    /// at grid points, cubic Hermite inside grid intervals. Errors past the
    /// grid end.
    pub fn sample(&self, t: f64) -> Result<Vec<f64>> {
        let end = *self.grid.last().ok_or(Error::HistoryOutOfRange {
            t,
            end: self.t_start,
        })?;
        if t > end {
            return Err(Error::HistoryOutOfRange { t, end });
        }
        Ok((0..self.dim)
            .map(|c| self.sample_component_inner(t, c))
            .collect())
    }

    /// One component block of 8 written into `out`; permits extrapolation
    /// past the grid end from the last completed interval (linear from the
    /// first point when only one exists). Delayed stage lookups inside the
    /// step being integrated land here.
    pub(crate) fn sample_block_extrapolated(&self, t: f64, block: usize, out: &mut [f64; 8]) {
        for (l, slot) in out.iter_mut().enumerate() {
            *slot = self.sample_component_extrapolated(t, block * 8 + l);
        }
    }

    fn sample_component_inner(&self, t: f64, idx: usize) -> f64 {
        if t <= self.t_start {
            return self.initial_history.eval_component(t, idx);
        }
        if let Ok(i) = self.grid.binary_search_by(|g| g.partial_cmp(&t).unwrap()) {
            return self.states[i][idx];
        }
        let i = self.bracket(t);
        hermite(
            t,
            self.grid[i],
            self.grid[i + 1],
            self.states[i][idx],
            self.derivs[i][idx],
            self.states[i + 1][idx],
            self.derivs[i + 1][idx],
        )
    }

    fn sample_component_extrapolated(&self, t: f64, idx: usize) -> f64 {
        let end = *self
            .grid
            .last()
            .expect("trajectory has at least the start point");
        if t <= end {
            return self.sample_component_inner(t, idx);
        }
        if self.grid.len() >= 2 {
            let i = self.grid.len() - 2;
            hermite(
                t,
                self.grid[i],
                self.grid[i + 1],
                self.states[i][idx],
                self.derivs[i][idx],
                self.states[i + 1][idx],
                self.derivs[i + 1][idx],
            )
        } else {
            // Bootstrap for the very first step.
            self.states[0][idx] + (t - self.grid[0]) * self.derivs[0][idx]
        }
    }
}

/// State at time `t` of a stored trajectory (spec-facing free function).
pub fn sample_history(traj: &HistoryTrajectory, t: f64) -> Result<Vec<f64>> {
    traj.sample(t)
}
