//! The two-term state feedback controller and the adaptive gain laws.

pub use crate::builtin::sign;

/// Controller selection for a simulation run.
#[derive(Debug, Clone)]
pub enum ControllerConfig {
    /// Free-running network.
    None,
    /// Per-component constant gains
    /// `U_p^l = -sign(w_hat) (kappa[p][l] |w_hat| + kappa_hat[p][l])`.
    Fixed {
        kappa: Vec<[f64; 8]>,
        kappa_hat: Vec<[f64; 8]>,
    },
    /// Shared time-varying gains driven by the adaptive laws; both start
    /// at the given initial values.
    Adaptive {
        c1: f64,
        c2: f64,
        c3: f64,
        kappa0: f64,
        kappa_hat0: f64,
    },
}

impl ControllerConfig {
    pub fn is_none(&self) -> bool {
        matches!(self, ControllerConfig::None)
    }

    pub(crate) fn validate(&self, n: usize) -> crate::error::Result<()> {
        use crate::error::Error;
        match self {
            ControllerConfig::None => Ok(()),
            ControllerConfig::Fixed { kappa, kappa_hat } => {
                if kappa.len() != n || kappa_hat.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "fixed gains must have {n} rows"
                    )));
                }
                if kappa
                    .iter()
                    .chain(kappa_hat.iter())
                    .flatten()
                    .any(|g| !(*g > 0.0))
                {
                    return Err(Error::InvalidConfig(
                        "fixed gains must be strictly positive".into(),
                    ));
                }
                Ok(())
            }
            ControllerConfig::Adaptive { c1, c2, c3, .. } => {
                if !(c1 > &0.0 && c2 > &0.0 && c3 > &0.0) {
                    return Err(Error::InvalidConfig(
                        "adaptive coefficients must be strictly positive".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Sign with a dead band: zero inside `[-width, width]`.
pub fn sign_with_dead_band(x: f64, width: f64) -> f64 {
    if x.abs() <= width {
        0.0
    } else {
        sign(x)
    }
}

/// Control force on one neuron:
/// `U^l = -sign(w_hat^l) (kappa^l |w_hat^l| + kappa_hat^l)`, `sign(0) = 0`.
pub fn fixed_controller(kappa: &[f64; 8], kappa_hat: &[f64; 8], w_hat: &[f64; 8]) -> [f64; 8] {
    std::array::from_fn(|l| -sign(w_hat[l]) * (kappa[l] * w_hat[l].abs() + kappa_hat[l]))
}

/// Which branch of the adaptive laws is active, decided once per step from
/// the windowed supremum of the weighted norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdaptiveBranch {
    /// Windowed sup within `zero_tol` of zero: both gains freeze.
    Zero,
    /// Windowed sup <= 1.
    BelowOne,
    /// Windowed sup > 1.
    AboveOne,
}

impl AdaptiveBranch {
    pub fn select(sup_norm: f64, zero_tol: f64) -> Self {
        if sup_norm <= zero_tol {
            AdaptiveBranch::Zero
        } else if sup_norm <= 1.0 {
            AdaptiveBranch::BelowOne
        } else {
            AdaptiveBranch::AboveOne
        }
    }
}

/// Gain derivatives `(kappa_dot, kappa_hat_dot)` of the adaptive laws. The
/// zero branch freezes both; below one, `(c3 ||Y_hat||, c1)`; above one,
/// `(c2 mu(t) ||Y_hat||, 0)`. Neither derivative depends on the current
/// gain values.
pub fn adaptive_update(
    sup_norm: f64,
    cur_norm: f64,
    mu_t: f64,
    c1: f64,
    c2: f64,
    c3: f64,
    zero_tol: f64,
) -> (f64, f64) {
    adaptive_rates(
        AdaptiveBranch::select(sup_norm, zero_tol),
        cur_norm,
        mu_t,
        c1,
        c2,
        c3,
    )
}

pub(crate) fn adaptive_rates(
    branch: AdaptiveBranch,
    cur_norm: f64,
    mu_t: f64,
    c1: f64,
    c2: f64,
    c3: f64,
) -> (f64, f64) {
    match branch {
        AdaptiveBranch::Zero => (0.0, 0.0),
        AdaptiveBranch::BelowOne => (c3 * cur_norm, c1),
        AdaptiveBranch::AboveOne => (c2 * mu_t * cur_norm, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn controller_vanishes_at_the_target() {
        let u = fixed_controller(&[3.0; 8], &[1.0; 8], &[0.0; 8]);
        assert_eq!(u, [0.0; 8]);
    }

    #[test]
    fn controller_arithmetic_and_odd_symmetry() {
        let mut w = [0.0; 8];
        w[2] = 2.0;
        let u = fixed_controller(&[3.0; 8], &[1.0; 8], &w);
        assert_eq!(u[2], -7.0);
        let neg = fixed_controller(&[3.0; 8], &[1.0; 8], &w.map(|x| -x));
        for l in 0..8 {
            assert_eq!(neg[l], -u[l]);
        }
    }

    #[test]
    fn adaptive_branches() {
        // sup > 1: kappa grows with mu * norm, kappa_hat frozen
        assert_eq!(
            adaptive_update(2.0, 1.5, 10.0, 0.9, 0.9, 0.9, 1e-9),
            (13.5, 0.0)
        );
        // sup <= 1: kappa with c3, kappa_hat with c1
        assert_eq!(
            adaptive_update(0.5, 0.5, 10.0, 0.9, 0.9, 0.9, 1e-9),
            (0.45, 0.9)
        );
        // sup below the zero tolerance: frozen
        assert_eq!(
            adaptive_update(5e-10, 0.5, 10.0, 0.9, 0.9, 0.9, 1e-9),
            (0.0, 0.0)
        );
        // the zero branch takes priority over "below one"
        assert_eq!(AdaptiveBranch::select(0.0, 1e-9), AdaptiveBranch::Zero);
    }

    #[test]
    fn dead_band_sign() {
        assert_eq!(sign_with_dead_band(0.05, 0.1), 0.0);
        assert_eq!(sign_with_dead_band(-0.2, 0.1), -1.0);
        assert_eq!(sign_with_dead_band(0.2, 0.0), 1.0);
        assert_eq!(sign(0.0), 0.0);
    }
}
