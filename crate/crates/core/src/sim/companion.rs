//! The delay-free companion system sharing the network's equilibria:
//! integrating it from scattered initial states locates the equilibrium and
//! checks it is unique in practice.

use crate::criteria::check_unique_equilibrium;
use crate::error::{Error, Result};
use crate::lambda::LambdaVec;
use crate::network::{flatten_states, unflatten_states, NetworkSpec};
use crate::octonion::Octonion;

use super::monitors::lambda_inf_norm;

#[derive(Debug, Clone, Copy)]
pub struct CompanionConfig {
    pub t_end: f64,
    pub step: f64,
}

impl Default for CompanionConfig {
    fn default() -> Self {
        CompanionConfig {
            t_end: 5.0,
            step: 1e-3,
        }
    }
}

/// Outcome of the companion integration.
#[derive(Debug, Clone)]
pub struct CompanionOutcome {
    /// Final state of the first run — the located fixed point.
    pub point: Vec<Octonion>,
    /// Largest pairwise lambda-norm distance across the runs' endpoints.
    pub spread: f64,
    /// Largest component of the field at the located point (zero-delay
    /// states equal to the point itself).
    pub residual: f64,
    /// Whether the uniqueness criterion held for the given lambda; a false
    /// here means the located point is not certified.
    pub criterion_satisfied: bool,
}

/// Integrates `z' = -d z + A f(z) + B g(z) + I` (the delay-free companion)
/// from each initial state and reports the common limit, the spread across
/// runs, and the equilibrium residual.
pub fn companion_fixed_point(
    net: &NetworkSpec,
    inits: &[Vec<Octonion>],
    lambda: &LambdaVec,
    config: &CompanionConfig,
) -> Result<CompanionOutcome> {
    if inits.is_empty() {
        return Err(Error::InvalidConfig(
            "need at least one initial state".into(),
        ));
    }
    if !(config.t_end > 0.0 && config.step > 0.0) {
        return Err(Error::InvalidConfig(
            "companion horizon and step must be positive".into(),
        ));
    }
    let n = net.n();
    let dim = 8 * n;
    let steps = (config.t_end / config.step).round() as usize;
    let h = config.step;

    // z' with the delayed argument equal to the current state.
    let eval = |w: &[f64], out: &mut [f64]| {
        let blocks: Vec<[f64; 8]> = (0..n)
            .map(|q| std::array::from_fn(|l| w[q * 8 + l]))
            .collect();
        let delayed: Vec<Vec<[f64; 8]>> = vec![blocks; n];
        net.rhs_real_into(w, &delayed, None, out);
    };

    let mut endpoints: Vec<Vec<f64>> = Vec::with_capacity(inits.len());
    for init in inits {
        if init.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "initial state has {} neurons, expected {n}",
                init.len()
            )));
        }
        let mut w = flatten_states(init);
        let mut k1 = vec![0.0; dim];
        let mut k2 = vec![0.0; dim];
        let mut k3 = vec![0.0; dim];
        let mut k4 = vec![0.0; dim];
        let mut stage = vec![0.0; dim];
        for step_idx in 0..steps {
            eval(&w, &mut k1);
            for i in 0..dim {
                stage[i] = w[i] + 0.5 * h * k1[i];
            }
            eval(&stage, &mut k2);
            for i in 0..dim {
                stage[i] = w[i] + 0.5 * h * k2[i];
            }
            eval(&stage, &mut k3);
            for i in 0..dim {
                stage[i] = w[i] + h * k3[i];
            }
            eval(&stage, &mut k4);
            for i in 0..dim {
                w[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteState {
                    t: (step_idx + 1) as f64 * h,
                });
            }
        }
        endpoints.push(w);
    }

    let mut spread = 0.0f64;
    for i in 0..endpoints.len() {
        for j in i + 1..endpoints.len() {
            let diff: Vec<f64> = endpoints[i]
                .iter()
                .zip(endpoints[j].iter())
                .map(|(a, b)| a - b)
                .collect();
            spread = spread.max(lambda_inf_norm(lambda, &diff));
        }
    }

    let mut field = vec![0.0; dim];
    eval(&endpoints[0], &mut field);
    let residual = field.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));

    let criterion_satisfied = check_unique_equilibrium(net, lambda)?.satisfied;

    Ok(CompanionOutcome {
        point: unflatten_states(&endpoints[0]),
        spread,
        residual,
        criterion_satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::ActivationSpec;
    use crate::delay::DelayProfile;

    #[test]
    fn decoupled_fixed_point_is_input_over_decay() {
        let net = NetworkSpec::new(
            vec![2.0, 4.0],
            vec![vec![Octonion::ZERO; 2]; 2],
            vec![vec![Octonion::ZERO; 2]; 2],
            vec![Octonion::real(1.0), Octonion::real(2.0)],
            vec![ActivationSpec::zero(); 2],
            DelayProfile::none(2),
        )
        .unwrap();
        let inits = vec![
            vec![Octonion::ZERO; 2],
            vec![Octonion::real(5.0), Octonion::real(-5.0)],
        ];
        let out = companion_fixed_point(
            &net,
            &inits,
            &LambdaVec::ones(2),
            &CompanionConfig {
                t_end: 12.0,
                step: 1e-3,
            },
        )
        .unwrap();
        assert!((out.point[0].c[0] - 0.5).abs() < 1e-9);
        assert!((out.point[1].c[0] - 0.5).abs() < 1e-9);
        assert!(out.spread < 1e-8);
        assert!(out.residual < 1e-9);
        assert!(out.criterion_satisfied);
    }

    #[test]
    fn rejects_empty_inits() {
        let net = NetworkSpec::new(
            vec![1.0],
            vec![vec![Octonion::ZERO]],
            vec![vec![Octonion::ZERO]],
            vec![Octonion::ZERO],
            vec![ActivationSpec::zero()],
            DelayProfile::none(1),
        )
        .unwrap();
        assert!(
            companion_fixed_point(&net, &[], &LambdaVec::ones(1), &CompanionConfig::default())
                .is_err()
        );
    }
}
