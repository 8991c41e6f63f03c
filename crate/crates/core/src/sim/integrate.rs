//! Fixed-step classical Runge–Kutta integration of the (optionally
//! controlled) network as a delay differential equation, with cubic Hermite
//! dense output for delayed lookups and sliding-mode handling of the
//! discontinuous controller.
//!
//! Components under a dominated relay (`kappa_hat` larger than the
//! uncontrolled drift) are pinned exactly to the target once they cross or
//! approach it within one step's relay travel: the exact solution of the
//! sign controller reaches the target and stays, while plain stepping
//! would chatter at the step scale. Pinned components are released the
//! moment the drift exceeds the available gain.

use crate::delay::RateFunction;
use crate::error::{Error, Result};
use crate::lambda::LambdaVec;
use crate::network::{flatten_states, unflatten_states, NetworkSpec};
use crate::octonion::Octonion;

use super::controller::{adaptive_rates, sign_with_dead_band, AdaptiveBranch, ControllerConfig};
use super::history::{HistoryTrajectory, InitialHistory};
use super::monitors::{lambda_inf_norm, RunningWindowMax};

/// Which evaluation route drives the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RhsRoute {
    /// The decomposed real system (production route).
    Decomposed,
    /// Direct octonion-form evaluation; the independent cross-check route.
    OctonionForm,
}

/// Simulation window, step, history, and target.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub step: f64,
    pub initial_history: InitialHistory,
    /// Windowed sups at or below this count as zero for the adaptive laws.
    pub norm_zero_tol: f64,
    /// Reference point: dynamics are expressed about it, the controller
    /// steers to it, and norms measure the deviation from it.
    pub target: Option<Vec<Octonion>>,
    /// Optional relay dead band (zero force within it); 0 = exact sign.
    pub dead_band: f64,
}

impl SimConfig {
    /// Constant initial history equal to `initial`, default tolerances,
    /// no target.
    pub fn new(t_start: f64, t_end: f64, step: f64, initial: &[Octonion]) -> Self {
        SimConfig {
            t_start,
            t_end,
            step,
            initial_history: InitialHistory::Constant(flatten_states(initial)),
            norm_zero_tol: 1e-9,
            target: None,
            dead_band: 0.0,
        }
    }

    pub fn with_target(mut self, target: Vec<Octonion>) -> Self {
        self.target = Some(target);
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.t_end > self.t_start) || !(self.step > 0.0) {
            return Err(Error::InvalidConfig(
                "need t_end > t_start and a positive step".into(),
            ));
        }
        if !(self.norm_zero_tol > 0.0) {
            return Err(Error::InvalidConfig(
                "norm_zero_tol must be positive".into(),
            ));
        }
        if let Some(t) = &self.target {
            if t.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "target has {} neurons, network has {n}",
                    t.len()
                )));
            }
        }
        Ok(())
    }
}

/// Per-step adaptive gain records.
#[derive(Debug, Clone, Default)]
pub struct GainTrajectory {
    pub kappa: Vec<f64>,
    pub kappa_hat: Vec<f64>,
}

/// A completed (or divergence-truncated) run.
#[derive(Debug)]
pub struct SimResult {
    /// Actual network states on the grid (dense output capable).
    pub trajectory: HistoryTrajectory,
    /// Weighted deviation norm per grid point, with the lambda the run was
    /// given.
    pub norms: Vec<f64>,
    /// `t - tau(t)` per grid point (window left edges for sups).
    pub window_start: Vec<f64>,
    /// Gain curves when the controller is adaptive.
    pub gains: Option<GainTrajectory>,
    /// The reference point norms are measured against.
    pub target: Option<Vec<Octonion>>,
    /// Set when the state left the finite range; the trajectory is
    /// truncated at the last finite point.
    pub diverged_at: Option<f64>,
    /// Step size of the run.
    pub step: f64,
    n: usize,
}

impl SimResult {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn times(&self) -> &[f64] {
        self.trajectory.times()
    }

    /// Final recorded state as octonions.
    pub fn final_state(&self) -> Vec<Octonion> {
        unflatten_states(self.trajectory.state_at(self.trajectory.len() - 1))
    }

    /// The target as a flat vector (zeros when none was set).
    pub fn flat_target(&self) -> Vec<f64> {
        match &self.target {
            Some(t) => flatten_states(t),
            None => vec![0.0; 8 * self.n],
        }
    }
}

struct Stepper<'a> {
    net: &'a NetworkSpec,
    controller: &'a ControllerConfig,
    lambda: &'a LambdaVec,
    rate: &'a RateFunction,
    config: &'a SimConfig,
    route: RhsRoute,
    n: usize,
    dim: usize,
    tgt: Vec<f64>,
    latched: Vec<bool>,
    delayed: Vec<Vec<[f64; 8]>>,
}

impl<'a> Stepper<'a> {
    fn gather_delayed(&mut self, traj: &HistoryTrajectory, t: f64) {
        for p in 0..self.n {
            for q in 0..self.n {
                let s = t - self.net.delays().tau(p, q, t);
                traj.sample_block_extrapolated(s, q, &mut self.delayed[p][q]);
            }
        }
    }

    /// Uncontrolled field at `(t, w)` (latched components are part of `w`,
    /// already pinned; no zeroing applied).
    fn drift(&mut self, traj: &HistoryTrajectory, t: f64, w: &[f64], out: &mut [f64]) {
        self.gather_delayed(traj, t);
        match self.route {
            RhsRoute::Decomposed => self.net.rhs_real_into(w, &self.delayed, None, out),
            RhsRoute::OctonionForm => {
                let states = unflatten_states(w);
                let delayed: Vec<Vec<Octonion>> = self
                    .delayed
                    .iter()
                    .map(|row| row.iter().map(|c| Octonion::new(*c)).collect())
                    .collect();
                let vals = self
                    .net
                    .rhs_octonion(&states, &delayed, None)
                    .expect("dimensions fixed by construction");
                out.copy_from_slice(&flatten_states(&vals));
            }
        }
    }

    /// Full field: drift + controller force, zero at latched components.
    /// Gains are the stage values `(kappa, kappa_hat)` for the adaptive
    /// controller.
    #[allow(clippy::too_many_arguments)]
    fn field(
        &mut self,
        traj: &HistoryTrajectory,
        t: f64,
        w: &[f64],
        gains: (f64, f64),
        branch: AdaptiveBranch,
        out: &mut [f64],
        gain_out: &mut (f64, f64),
    ) {
        self.drift(traj, t, w, out);
        match self.controller {
            ControllerConfig::None => {
                *gain_out = (0.0, 0.0);
            }
            ControllerConfig::Fixed { kappa, kappa_hat } => {
                for p in 0..self.n {
                    for l in 0..8 {
                        let idx = p * 8 + l;
                        let dev = w[idx] - self.tgt[idx];
                        let s = sign_with_dead_band(dev, self.config.dead_band);
                        out[idx] -= s * (kappa[p][l] * dev.abs() + kappa_hat[p][l]);
                    }
                }
                *gain_out = (0.0, 0.0);
            }
            ControllerConfig::Adaptive { c1, c2, c3, .. } => {
                let (k, kh) = gains;
                let mut dev_vec = vec![0.0; self.dim];
                for idx in 0..self.dim {
                    let dev = w[idx] - self.tgt[idx];
                    dev_vec[idx] = dev;
                    let s = sign_with_dead_band(dev, self.config.dead_band);
                    out[idx] -= s * (k * dev.abs() + kh);
                }
                let cur = lambda_inf_norm(self.lambda, &dev_vec);
                *gain_out = adaptive_rates(branch, cur, self.rate.mu(t), *c1, *c2, *c3);
            }
        }
        for (idx, pinned) in self.latched.iter().enumerate() {
            if *pinned {
                out[idx] = 0.0;
            }
        }
    }

    /// Constant-gain floor available to hold a component at the target.
    fn hold_gain(&self, idx: usize, adaptive_kappa_hat: f64) -> f64 {
        match self.controller {
            ControllerConfig::None => 0.0,
            ControllerConfig::Fixed { kappa_hat, .. } => kappa_hat[idx / 8][idx % 8],
            ControllerConfig::Adaptive { .. } => adaptive_kappa_hat,
        }
    }
}

/// Integrates the network from `config.t_start` to `config.t_end`.
/// Delayed states come from the trajectory's dense output (initial history
/// before the start, Hermite extrapolation from the last completed interval
/// inside the running step). Norms, window edges, and adaptive gains are
/// recorded per grid point. Divergence truncates the run and marks
/// `diverged_at` so callers can still flush partial output.
pub fn integrate(
    net: &NetworkSpec,
    controller: &ControllerConfig,
    lambda: &LambdaVec,
    rate: &RateFunction,
    config: &SimConfig,
) -> Result<SimResult> {
    run(net, controller, lambda, rate, config, RhsRoute::Decomposed)
}

/// Same stepping, but every field evaluation goes through the direct
/// octonion-form route. Exists as the cross-check oracle for the
/// decomposed system; not the production path.
pub fn integrate_octonion_form(
    net: &NetworkSpec,
    controller: &ControllerConfig,
    lambda: &LambdaVec,
    rate: &RateFunction,
    config: &SimConfig,
) -> Result<SimResult> {
    run(
        net,
        controller,
        lambda,
        rate,
        config,
        RhsRoute::OctonionForm,
    )
}

fn run(
    net: &NetworkSpec,
    controller: &ControllerConfig,
    lambda: &LambdaVec,
    rate: &RateFunction,
    config: &SimConfig,
    route: RhsRoute,
) -> Result<SimResult> {
    let n = net.n();
    let dim = 8 * n;
    config.validate(n)?;
    controller.validate(n)?;
    if lambda.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "lambda is for {} neurons, network has {n}",
            lambda.n()
        )));
    }
    net.delays().validate(config.t_end, 256)?;

    let h = config.step;
    let steps = ((config.t_end - config.t_start) / h).round() as usize;
    let tgt = match &config.target {
        Some(t) => flatten_states(t),
        None => vec![0.0; dim],
    };

    let w0 = config.initial_history.eval(config.t_start);
    if w0.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "initial history returns {} values, expected {dim}",
            w0.len()
        )));
    }
    if w0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteState { t: config.t_start });
    }

    let mut stepper = Stepper {
        net,
        controller,
        lambda,
        rate,
        config,
        route,
        n,
        dim,
        tgt,
        latched: vec![false; dim],
        delayed: vec![vec![[0.0; 8]; n]; n],
    };

    let (mut kappa, mut kappa_hat, adaptive) = match controller {
        ControllerConfig::Adaptive {
            kappa0, kappa_hat0, ..
        } => (*kappa0, *kappa_hat0, true),
        _ => (0.0, 0.0, false),
    };

    let mut traj = HistoryTrajectory::new(config.t_start, dim, config.initial_history.clone());
    let dev_norm = |w: &[f64], tgt: &[f64]| {
        let dev: Vec<f64> = w.iter().zip(tgt.iter()).map(|(a, b)| a - b).collect();
        lambda_inf_norm(lambda, &dev)
    };

    // Seed the windowed sup with pre-start history norms whenever the first
    // window reaches below t_start.
    let mut window = RunningWindowMax::new();
    let first_edge = config.t_start - net.delays().bound(config.t_start);
    if first_edge < config.t_start {
        let k = ((config.t_start - first_edge) / h).ceil() as usize;
        for j in (1..=k).rev() {
            let t = config.t_start - j as f64 * h;
            let s = config.initial_history.eval(t);
            window.push(t, dev_norm(&s, &stepper.tgt));
        }
    }

    let norm0 = dev_norm(&w0, &stepper.tgt);
    window.push(config.t_start, norm0);

    let mut deriv0 = vec![0.0; dim];
    let mut gain_rate = (0.0, 0.0);
    // Trajectory must hold the start point before the field can look
    // delayed states up, so push with a placeholder derivative first.
    traj.push(config.t_start, w0.clone(), vec![0.0; dim]);
    let branch0 = AdaptiveBranch::select(window.max_from(first_edge, false), config.norm_zero_tol);
    stepper.field(
        &traj,
        config.t_start,
        &w0,
        (kappa, kappa_hat),
        branch0,
        &mut deriv0,
        &mut gain_rate,
    );
    traj = {
        let mut fresh = HistoryTrajectory::new(config.t_start, dim, config.initial_history.clone());
        fresh.push(config.t_start, w0.clone(), deriv0);
        fresh
    };

    let mut norms = vec![norm0];
    let mut window_start = vec![first_edge];
    let mut gains = adaptive.then(|| GainTrajectory {
        kappa: vec![kappa],
        kappa_hat: vec![kappa_hat],
    });
    let mut diverged_at = None;
    // Pinning realizes the exact-sign sliding solution; a dead band asks
    // for the chattering dynamics instead, so it turns the pinning off.
    let pinning = !controller.is_none() && config.dead_band == 0.0;

    let mut w = w0;
    let mut stage = vec![0.0; dim];
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut drift_buf = vec![0.0; dim];

    for step_idx in 0..steps {
        let t = config.t_start + step_idx as f64 * h;
        let t_next = config.t_start + (step_idx + 1) as f64 * h;

        let edge = t - net.delays().bound(t);
        let sup = window.max_from(edge, false);
        let branch = AdaptiveBranch::select(sup, config.norm_zero_tol);

        // Release pinned components whose drift now beats the gain.
        if pinning && stepper.latched.iter().any(|l| *l) {
            stepper.drift(&traj, t, &w, &mut drift_buf);
            for idx in 0..dim {
                if stepper.latched[idx] && drift_buf[idx].abs() >= stepper.hold_gain(idx, kappa_hat)
                {
                    stepper.latched[idx] = false;
                }
            }
        }

        // Classical 4th-order stages; adaptive gains ride along as extra
        // state with the branch frozen at the step start.
        let mut g1 = (0.0, 0.0);
        let mut g2 = (0.0, 0.0);
        let mut g3 = (0.0, 0.0);
        let mut g4 = (0.0, 0.0);
        stepper.field(&traj, t, &w, (kappa, kappa_hat), branch, &mut k1, &mut g1);
        for i in 0..dim {
            stage[i] = w[i] + 0.5 * h * k1[i];
        }
        let gs = (kappa + 0.5 * h * g1.0, kappa_hat + 0.5 * h * g1.1);
        stepper.field(&traj, t + 0.5 * h, &stage, gs, branch, &mut k2, &mut g2);
        for i in 0..dim {
            stage[i] = w[i] + 0.5 * h * k2[i];
        }
        let gs = (kappa + 0.5 * h * g2.0, kappa_hat + 0.5 * h * g2.1);
        stepper.field(&traj, t + 0.5 * h, &stage, gs, branch, &mut k3, &mut g3);
        for i in 0..dim {
            stage[i] = w[i] + h * k3[i];
        }
        let gs = (kappa + h * g3.0, kappa_hat + h * g3.1);
        stepper.field(&traj, t_next, &stage, gs, branch, &mut k4, &mut g4);

        let mut w_new = vec![0.0; dim];
        for i in 0..dim {
            w_new[i] = w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let kappa_new = kappa + h / 6.0 * (g1.0 + 2.0 * g2.0 + 2.0 * g3.0 + g4.0);
        let kappa_hat_new = kappa_hat + h / 6.0 * (g1.1 + 2.0 * g2.1 + 2.0 * g3.1 + g4.1);

        if w_new.iter().any(|x| !x.is_finite()) {
            diverged_at = Some(t_next);
            break;
        }

        // Capture: pin components the relay provably brings to the target
        // and holds there (dominated drift plus a crossing, or within one
        // step's relay travel).
        if pinning {
            stepper.drift(&traj, t_next, &w_new, &mut drift_buf);
            for idx in 0..dim {
                if stepper.latched[idx] {
                    continue;
                }
                let hold = stepper.hold_gain(idx, kappa_hat_new);
                let margin = hold - drift_buf[idx].abs();
                if margin <= 0.0 {
                    continue;
                }
                let dev_old = w[idx] - stepper.tgt[idx];
                let dev_new = w_new[idx] - stepper.tgt[idx];
                let prop = match controller {
                    ControllerConfig::Fixed { kappa, .. } => kappa[idx / 8][idx % 8],
                    ControllerConfig::Adaptive { .. } => kappa_new,
                    ControllerConfig::None => 0.0,
                };
                let travel = h * (hold + prop * dev_old.abs() + drift_buf[idx].abs());
                let crossed = dev_old * dev_new <= 0.0 && dev_new.abs() <= travel;
                if crossed || dev_new.abs() <= h * margin {
                    w_new[idx] = stepper.tgt[idx];
                    stepper.latched[idx] = true;
                }
            }
        }

        // Derivative at the accepted point, for dense output and reporting.
        let mut deriv_new = vec![0.0; dim];
        let mut g_end = (0.0, 0.0);
        stepper.field(
            &traj,
            t_next,
            &w_new,
            (kappa_new, kappa_hat_new),
            branch,
            &mut deriv_new,
            &mut g_end,
        );

        w = w_new;
        kappa = kappa_new;
        kappa_hat = kappa_hat_new;
        traj.push(t_next, w.clone(), deriv_new);
        let norm = dev_norm(&w, &stepper.tgt);
        norms.push(norm);
        window.push(t_next, norm);
        window_start.push(t_next - net.delays().bound(t_next));
        if let Some(g) = gains.as_mut() {
            g.kappa.push(kappa);
            g.kappa_hat.push(kappa_hat);
        }
    }

    Ok(SimResult {
        trajectory: traj,
        norms,
        window_start,
        gains,
        target: config.target.clone(),
        diverged_at,
        step: h,
        n,
    })
}
