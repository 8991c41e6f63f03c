//! Activation functions on the eight real coordinates of a neuron state,
//! together with the entrywise partial-derivative bound matrices the
//! stability criteria consume.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A map from the 8 coordinates of a state to 8 reals.
pub type ComponentMap = Arc<dyn Fn(&[f64; 8]) -> [f64; 8] + Send + Sync>;

/// One neuron's activation pair: `f` (undelayed), `g` (delayed), and the
/// nonnegative bound matrices on their partial derivatives —
/// `lambda_bound[l1][l2]` bounds `d f^l1 / d w^l2`, `delta_bound` the same
/// for `g`.
#[derive(Clone)]
pub struct ActivationSpec {
    f: ComponentMap,
    g: ComponentMap,
    lambda_bound: [[f64; 8]; 8],
    delta_bound: [[f64; 8]; 8],
}

impl fmt::Debug for ActivationSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("ActivationSpec").finish_non_exhaustive()
    }
}

impl ActivationSpec {
    pub fn new(
        f: ComponentMap,
        g: ComponentMap,
        lambda_bound: [[f64; 8]; 8],
        delta_bound: [[f64; 8]; 8],
    ) -> Result<Self> {
        for m in [&lambda_bound, &delta_bound] {
            if m.iter().flatten().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::InvalidConfig(
                    "derivative bound matrices must be finite and nonnegative".into(),
                ));
            }
        }
        Ok(ActivationSpec {
            f,
            g,
            lambda_bound,
            delta_bound,
        })
    }

    /// Both activations identically zero, zero bounds.
    pub fn zero() -> Self {
        let z: ComponentMap = Arc::new(|_: &[f64; 8]| [0.0; 8]);
        ActivationSpec {
            f: z.clone(),
            g: z,
            lambda_bound: [[0.0; 8]; 8],
            delta_bound: [[0.0; 8]; 8],
        }
    }

    /// `f^l(s) = gain * s^l` for both maps, bounds `|gain|` on the diagonal.
    pub fn linear(gain: f64) -> Self {
        let map: ComponentMap = Arc::new(move |s: &[f64; 8]| s.map(|x| gain * x));
        let mut bound = [[0.0; 8]; 8];
        for (l, row) in bound.iter_mut().enumerate() {
            row[l] = gain.abs();
        }
        ActivationSpec {
            f: map.clone(),
            g: map,
            lambda_bound: bound,
            delta_bound: bound,
        }
    }

    pub fn eval_f(&self, s: &[f64; 8]) -> [f64; 8] {
        (self.f)(s)
    }

    pub fn eval_g(&self, s: &[f64; 8]) -> [f64; 8] {
        (self.g)(s)
    }

    pub fn lambda_bound(&self) -> &[[f64; 8]; 8] {
        &self.lambda_bound
    }

    pub fn delta_bound(&self) -> &[[f64; 8]; 8] {
        &self.delta_bound
    }
}

/// Worst observed finite-difference excess over the stated bounds.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// Per-entry worst violation of `lambda_bound` (0 where respected).
    pub excess_f: [[f64; 8]; 8],
    /// Per-entry worst violation of `delta_bound`.
    pub excess_g: [[f64; 8]; 8],
    /// Largest violation across both maps.
    pub max_excess: f64,
    /// True when `max_excess <= tol`.
    pub within_tol: bool,
}

/// Samples central finite-difference partials of `f` and `g` at `samples`
/// random points in the box `[-half_width, half_width]^8` and compares each
/// against the bound matrices. Sampling is seeded and deterministic.
///
/// Partials must lie in `[-tol, bound + tol]`; the report carries the worst
/// excess per entry. Activations with jump discontinuities can only be
/// probed away from the jump; a sample landing within the difference step
/// of a jump would report a spurious excess, so callers pick seeds/steps
/// accordingly.
pub fn verify_derivative_bounds(
    act: &ActivationSpec,
    samples: usize,
    half_width: f64,
    tol: f64,
    seed: u64,
) -> Result<BoundsReport> {
    assert!(samples >= 1, "need at least one sample");
    let step = 1e-6 * half_width.max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut excess_f = [[0.0f64; 8]; 8];
    let mut excess_g = [[0.0f64; 8]; 8];

    for _ in 0..samples {
        let point: [f64; 8] = std::array::from_fn(|_| rng.random_range(-half_width..half_width));
        for l2 in 0..8 {
            let mut hi = point;
            let mut lo = point;
            hi[l2] += step;
            lo[l2] -= step;
            let (f_hi, f_lo) = (act.eval_f(&hi), act.eval_f(&lo));
            let (g_hi, g_lo) = (act.eval_g(&hi), act.eval_g(&lo));
            for l1 in 0..8 {
                for (hi_v, lo_v, bound, excess) in [
                    (
                        f_hi[l1],
                        f_lo[l1],
                        act.lambda_bound[l1][l2],
                        &mut excess_f[l1][l2],
                    ),
                    (
                        g_hi[l1],
                        g_lo[l1],
                        act.delta_bound[l1][l2],
                        &mut excess_g[l1][l2],
                    ),
                ] {
                    if !hi_v.is_finite() || !lo_v.is_finite() {
                        return Err(Error::NonFiniteActivation);
                    }
                    let partial = (hi_v - lo_v) / (2.0 * step);
                    let over = (partial - bound).max(-partial);
                    if over > *excess {
                        *excess = over;
                    }
                }
            }
        }
    }

    let max_excess = excess_f
        .iter()
        .chain(excess_g.iter())
        .flatten()
        .copied()
        .fold(0.0, f64::max);
    Ok(BoundsReport {
        excess_f,
        excess_g,
        max_excess,
        within_tol: max_excess <= tol,
    })
}
