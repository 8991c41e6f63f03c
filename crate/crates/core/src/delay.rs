//! Transmission-delay profiles and the stability-rate functions paired
//! with them.
//!
//! Each channel `(p, q)` carries its own delay `tau_pq(t) >= 0`, all
//! dominated by a bound `tau(t)` with `t - tau(t)` nondecreasing and
//! unbounded. The rate `mu(t)` is nondecreasing with `mu -> inf`,
//! `mu'(t)/mu(t) -> alpha` and `mu(t)/mu(t - tau(t)) -> 1 + beta`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type DelayFn = Arc<dyn Fn(usize, usize, f64) -> f64 + Send + Sync>;
type BoundFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Delay family tag and data.
#[derive(Clone)]
pub enum DelayKind {
    /// `tau_pq(t) = tau[p][q]`, constant.
    Constant(Vec<Vec<f64>>),
    /// `tau_pq(t) = omega[p][q] * t` with `0 <= omega < 1`, unbounded.
    Proportional(Vec<Vec<f64>>),
    /// Arbitrary per-channel delays with an explicit dominating bound.
    Custom { tau: DelayFn, bound: BoundFn },
}

/// The delay profile of an `n`-neuron network.
#[derive(Clone)]
pub struct DelayProfile {
    kind: DelayKind,
    n: usize,
}

impl fmt::Debug for DelayProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            DelayKind::Constant(_) => "constant",
            DelayKind::Proportional(_) => "proportional",
            DelayKind::Custom { .. } => "custom",
        };
        f.debug_struct("DelayProfile")
            .field("family", &tag)
            .field("n", &self.n)
            .finish()
    }
}

fn check_square(m: &[Vec<f64>], n: usize, what: &str) -> Result<()> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(format!("{what} must be {n}x{n}")));
    }
    Ok(())
}

impl DelayProfile {
    pub fn constant(tau: Vec<Vec<f64>>) -> Result<Self> {
        let n = tau.len();
        check_square(&tau, n, "constant delay matrix")?;
        if tau.iter().flatten().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidConfig("constant delays must be >= 0".into()));
        }
        Ok(DelayProfile {
            kind: DelayKind::Constant(tau),
            n,
        })
    }

    pub fn proportional(omega: Vec<Vec<f64>>) -> Result<Self> {
        let n = omega.len();
        check_square(&omega, n, "proportional delay matrix")?;
        if omega
            .iter()
            .flatten()
            .any(|x| !x.is_finite() || *x < 0.0 || *x >= 1.0)
        {
            return Err(Error::InvalidConfig(
                "proportional delay rates must satisfy 0 <= omega < 1".into(),
            ));
        }
        Ok(DelayProfile {
            kind: DelayKind::Proportional(omega),
            n,
        })
    }

    pub fn custom(n: usize, tau: DelayFn, bound: BoundFn) -> Self {
        DelayProfile {
            kind: DelayKind::Custom { tau, bound },
            n,
        }
    }

    /// No delay at all (`tau = 0`); used by the delay-free companion system.
    pub fn none(n: usize) -> Self {
        DelayProfile {
            kind: DelayKind::Constant(vec![vec![0.0; n]; n]),
            n,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &DelayKind {
        &self.kind
    }

    /// `tau_pq(t)`, 0-based `p`, `q`.
    pub fn tau(&self, p: usize, q: usize, t: f64) -> f64 {
        match &self.kind {
            DelayKind::Constant(m) => m[p][q],
            DelayKind::Proportional(m) => m[p][q] * t.max(0.0),
            DelayKind::Custom { tau, .. } => tau(p, q, t),
        }
    }

    /// The dominating bound `tau(t)`.
    pub fn bound(&self, t: f64) -> f64 {
        match &self.kind {
            DelayKind::Constant(m) => m.iter().flatten().copied().fold(0.0, f64::max),
            DelayKind::Proportional(m) => {
                m.iter().flatten().copied().fold(0.0, f64::max) * t.max(0.0)
            }
            DelayKind::Custom { bound, .. } => bound(t),
        }
    }

    /// Largest constant delay, if the family is constant.
    pub fn max_constant(&self) -> Option<f64> {
        match &self.kind {
            DelayKind::Constant(m) => Some(m.iter().flatten().copied().fold(0.0, f64::max)),
            _ => None,
        }
    }

    /// Largest proportional rate, if the family is proportional.
    pub fn max_omega(&self) -> Option<f64> {
        match &self.kind {
            DelayKind::Proportional(m) => Some(m.iter().flatten().copied().fold(0.0, f64::max)),
            _ => None,
        }
    }

    /// Numerical check that `tau_pq(t) >= 0`, `tau_pq(t) <= bound(t)`, and
    /// `t - bound(t)` is nondecreasing at grid points over `[0, horizon]`.
    pub fn validate(&self, horizon: f64, points: usize) -> Result<()> {
        let mut prev_lag = f64::NEG_INFINITY;
        for k in 0..=points {
            let t = horizon * k as f64 / points as f64;
            let b = self.bound(t);
            for p in 0..self.n {
                for q in 0..self.n {
                    let tau = self.tau(p, q, t);
                    if !(tau >= 0.0) {
                        return Err(Error::InvalidConfig(format!(
                            "tau[{p}][{q}]({t}) = {tau} is negative"
                        )));
                    }
                    if tau > b + 1e-12 {
                        return Err(Error::InvalidConfig(format!(
                            "tau[{p}][{q}]({t}) = {tau} exceeds the bound {b}"
                        )));
                    }
                }
            }
            let lag = t - b;
            if lag < prev_lag - 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "t - tau(t) decreases near t = {t}"
                )));
            }
            prev_lag = lag;
        }
        Ok(())
    }
}

/// Rate family tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateFamily {
    /// `mu(t) = exp(alpha t)`.
    Exponential,
    /// `mu(t) = t^gamma`.
    Power,
    /// User-supplied `mu` with explicit limits.
    Custom,
}

/// A stability rate `mu(t)` with its asymptotic parameters `alpha`, `beta`,
/// constructed against a delay profile so `beta` is exact for the family
/// pairing.
#[derive(Clone)]
pub struct RateFunction {
    family: RateFamily,
    mu: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    alpha: f64,
    beta: f64,
}

impl fmt::Debug for RateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RateFunction")
            .field("family", &self.family)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .finish()
    }
}

impl RateFunction {
    /// `mu(t) = e^{alpha t}` for bounded (constant-family) delays:
    /// `beta = e^{alpha tau} - 1`.
    pub fn exponential(alpha: f64, delays: &DelayProfile) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::NegativeRate { alpha, beta: 0.0 });
        }
        let tau = delays.max_constant().ok_or_else(|| {
            Error::IncompatibleRate(
                "exponential rate requires bounded (constant-family) delays".into(),
            )
        })?;
        Ok(RateFunction {
            family: RateFamily::Exponential,
            mu: Arc::new(move |t| (alpha * t).exp()),
            alpha,
            beta: (alpha * tau).exp() - 1.0,
        })
    }

    /// `mu(t) = t^gamma`. With proportional delays `omega`:
    /// `alpha = 0`, `beta = (1 - omega)^{-gamma} - 1`; with constant
    /// delays `beta = 0`.
    pub fn power(gamma: f64, delays: &DelayProfile) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::NegativeRate {
                alpha: gamma,
                beta: 0.0,
            });
        }
        let beta = if let Some(omega) = delays.max_omega() {
            (1.0 - omega).powf(-gamma) - 1.0
        } else if delays.max_constant().is_some() {
            0.0
        } else {
            return Err(Error::IncompatibleRate(
                "power rate requires constant- or proportional-family delays".into(),
            ));
        };
        Ok(RateFunction {
            family: RateFamily::Power,
            mu: Arc::new(move |t| t.max(0.0).powf(gamma)),
            alpha: 0.0,
            beta,
        })
    }

    /// Explicit `mu` with stated limits; the caller owes the nondecreasing
    /// and unbounded properties.
    pub fn custom(
        mu: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        if !(alpha >= 0.0 && beta >= 0.0) {
            return Err(Error::NegativeRate { alpha, beta });
        }
        Ok(RateFunction {
            family: RateFamily::Custom,
            mu,
            alpha,
            beta,
        })
    }

    pub fn family(&self) -> RateFamily {
        self.family
    }

    pub fn mu(&self, t: f64) -> f64 {
        (self.mu)(t)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Errors when this rate's family cannot certify the given delays
    /// (an exponential rate paired with unbounded delays).
    pub fn check_compatible(&self, delays: &DelayProfile) -> Result<()> {
        if self.family == RateFamily::Exponential && delays.max_constant().is_none() {
            return Err(Error::IncompatibleRate(
                "exponential rate paired with unbounded delays".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportional_lag_is_increasing() {
        let d = DelayProfile::proportional(vec![vec![0.2, 0.1], vec![0.2, 0.1]]).unwrap();
        d.validate(1e6, 1000).unwrap();
        assert_eq!(d.tau(0, 0, 10.0), 2.0);
        assert_eq!(d.tau(0, 1, 10.0), 1.0);
        assert_eq!(d.bound(10.0), 2.0);
    }

    #[test]
    fn exponential_beta_matches_limit_at_sampled_times() {
        let d = DelayProfile::constant(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let r = RateFunction::exponential(0.02, &d).unwrap();
        assert!((r.beta() - ((0.08f64).exp() - 1.0)).abs() < 1e-15);
        // mu(t)/mu(t - tau(t)) is exactly 1 + beta for every t here.
        for t in [10.0, 100.0, 1e4] {
            let ratio = r.mu(t) / r.mu(t - d.bound(t));
            assert!((ratio - (1.0 + r.beta())).abs() < 1e-9 * ratio);
        }
    }

    #[test]
    fn power_beta_matches_limit_at_sampled_times() {
        let d = DelayProfile::proportional(vec![vec![0.2, 0.1], vec![0.2, 0.1]]).unwrap();
        let r = RateFunction::power(1.0, &d).unwrap();
        assert!((r.beta() - 0.25).abs() < 1e-15);
        assert_eq!(r.alpha(), 0.0);
        for t in [1e2, 1e5] {
            let ratio = r.mu(t) / r.mu(t - d.bound(t));
            assert!((ratio - 1.25).abs() < 1e-12);
        }
        // alpha limit: mu'/mu = 1/t -> 0
        let t = 1e8;
        let fd = (r.mu(t + 1e-3) - r.mu(t - 1e-3)) / (2e-3 * r.mu(t));
        assert!(fd.abs() < 1e-7);
    }

    #[test]
    fn exponential_rejects_unbounded_delays() {
        let d = DelayProfile::proportional(vec![vec![0.2]]).unwrap();
        assert!(matches!(
            RateFunction::exponential(0.02, &d),
            Err(Error::IncompatibleRate(_))
        ));
    }

    #[test]
    fn invalid_families_rejected() {
        assert!(DelayProfile::proportional(vec![vec![1.0]]).is_err());
        assert!(DelayProfile::constant(vec![vec![-1.0]]).is_err());
        let d = DelayProfile::constant(vec![vec![1.0]]).unwrap();
        assert!(RateFunction::exponential(-0.1, &d).is_err());
    }
}
