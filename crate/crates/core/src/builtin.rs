//! The two built-in benchmark networks with their published constants:
//! weight vectors, activation families, derivative-bound matrices, lambda
//! weights, delay settings, rates, and control targets.

use std::sync::Arc;

use crate::activation::{ActivationSpec, ComponentMap};
use crate::delay::{DelayProfile, RateFunction};
use crate::lambda::LambdaVec;
use crate::network::{states_from_component_major, NetworkSpec};
use crate::octonion::Octonion;

fn oct(c: [f64; 8]) -> Octonion {
    Octonion::new(c)
}

/// Shared connection weights of both examples.
fn weights() -> (Vec<Vec<Octonion>>, Vec<Vec<Octonion>>) {
    let a = vec![
        vec![
            oct([-0.2, -0.3, -0.2, -0.3, -0.2, -0.3, -0.2, -0.3]),
            oct([0.3, -0.1, 0.3, -0.1, 0.3, -0.1, 0.3, -0.1]),
        ],
        vec![
            oct([0.4, -0.2, 0.4, -0.2, 0.4, -0.2, 0.4, -0.2]),
            oct([-0.1, 0.2, -0.1, 0.2, -0.1, 0.2, -0.1, 0.2]),
        ],
    ];
    let b = vec![
        vec![
            oct([-0.11, 0.12, -0.11, 0.12, -0.11, 0.12, -0.11, 0.12]),
            oct([0.12, 0.11, 0.12, 0.11, 0.12, 0.11, 0.12, 0.11]),
        ],
        vec![
            oct([0.13, -0.14, 0.13, 0.14, 0.13, -0.14, 0.13, 0.14]),
            oct([-0.13, 0.12, -0.13, 0.12, -0.13, 0.12, -0.13, 0.12]),
        ],
    ];
    (a, b)
}

/// Block-tiles `inner` (rows x cols) into an 8x8 matrix, the `ones(m,k) ⊗ X`
/// pattern the bound matrices are stated in.
fn tile_8x8(inner: &[&[f64]]) -> [[f64; 8]; 8] {
    let rows = inner.len();
    let cols = inner[0].len();
    assert!(8 % rows == 0 && 8 % cols == 0);
    std::array::from_fn(|i| std::array::from_fn(|j| inner[i % rows][j % cols]))
}

/// First example: two neurons, strong decay `d = 30`, coupled logistic
/// activations. Stable without control under both delay settings.
#[derive(Debug, Clone)]
pub struct ExampleOne {
    /// The network with constant delays `tau = (1, 2; 3, 4)`.
    pub constant_delay: NetworkSpec,
    /// The same network with proportional delays `(0.2t, 0.1t; 0.2t, 0.1t)`.
    pub proportional_delay: NetworkSpec,
    /// `0.2 * ones(16)`.
    pub lambda: LambdaVec,
    /// `mu(t) = e^{0.02 t}` paired with the constant delays.
    pub exponential_rate: RateFunction,
    /// `mu(t) = t` paired with the proportional delays.
    pub power_rate: RateFunction,
}

/// The two logistic aggregates both activation maps of example one are
/// composed from.
fn logistic_pair(s: &[f64; 8]) -> (f64, f64) {
    let u = s[0] + 2.0 * s[1] + s[2] + 2.0 * s[3] + s[4] + 2.0 * s[5] + s[6] + 2.0 * s[7];
    let v = 2.0 * s[0] + s[1] + 2.0 * s[2] + s[3] + 2.0 * s[4] + s[5] + 2.0 * s[6] + s[7];
    ((-u).exp(), (-v).exp())
}

pub fn builtin_example1() -> ExampleOne {
    let (a, b) = weights();
    let input = vec![
        oct([-3.0, 1.0, -3.0, 1.0, -3.0, 1.0, -3.0, 1.0]),
        oct([2.0, 4.0, 2.0, 4.0, 2.0, 4.0, 2.0, 4.0]),
    ];

    let f: ComponentMap = Arc::new(|s: &[f64; 8]| {
        let (l1, l2) = logistic_pair(s);
        let t1 = (1.0 - l1) / (1.0 + l1);
        let s2 = 1.0 / (1.0 + l2);
        let t2 = (1.0 - l2) / (1.0 + l2);
        let s1 = 1.0 / (1.0 + l1);
        [t1, s2, t2, s1, t1, s2, t2, s1]
    });
    let g: ComponentMap = Arc::new(|s: &[f64; 8]| {
        let (l1, l2) = logistic_pair(s);
        let t1 = (1.0 - l1) / (1.0 + l1);
        let s2 = 1.0 / (1.0 + l2);
        let t2 = (1.0 - l2) / (1.0 + l2);
        let s1 = 1.0 / (1.0 + l1);
        [s2, t1, s1, t2, s2, t1, s1, t2]
    });

    // ones(2,4) ⊗ (4x2 block): rows cycle with period 4, columns with period 2.
    let lambda_bound = tile_8x8(&[&[0.5, 1.0], &[0.5, 0.25], &[1.0, 0.5], &[0.25, 0.5]]);
    let delta_bound = tile_8x8(&[&[0.5, 0.25], &[0.5, 1.0], &[0.25, 0.5], &[1.0, 0.5]]);

    let act = ActivationSpec::new(f, g, lambda_bound, delta_bound).unwrap();

    let constant = DelayProfile::constant(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    let proportional = DelayProfile::proportional(vec![vec![0.2, 0.1], vec![0.2, 0.1]]).unwrap();

    let exponential_rate = RateFunction::exponential(0.02, &constant).unwrap();
    let power_rate = RateFunction::power(1.0, &proportional).unwrap();

    let constant_delay = NetworkSpec::new(
        vec![30.0, 30.0],
        a,
        b,
        input,
        vec![act.clone(), act],
        constant,
    )
    .unwrap();
    let proportional_delay = constant_delay.with_delays(proportional).unwrap();

    ExampleOne {
        constant_delay,
        proportional_delay,
        lambda: LambdaVec::uniform(2, 0.2).unwrap(),
        exponential_rate,
        power_rate,
    }
}

/// Second example: weak decay `d = (0.1, 0.2)`, tanh-plus-step activations,
/// proportional delays. Unstable without control; the control targets are
/// the origin and the point with component-major vectorization `(1, .., 16)`.
#[derive(Debug, Clone)]
pub struct ExampleTwo {
    pub network: NetworkSpec,
    /// `ones(4) ⊗ (0.3, 0.5, 0.5, 0.3)` in the interleaved ordering.
    pub lambda: LambdaVec,
    /// `mu(t) = t` (`alpha = 0`, `beta = 0.25`).
    pub rate: RateFunction,
    /// The origin target.
    pub target_zero: Vec<Octonion>,
    /// The target whose component-major vectorization is `(1, 2, .., 16)`.
    pub target_ramp: Vec<Octonion>,
}

fn tanh_step(even: (f64, f64), odd: (f64, f64)) -> ComponentMap {
    Arc::new(move |s: &[f64; 8]| {
        std::array::from_fn(|l| {
            let (a, b) = if l % 2 == 0 { even } else { odd };
            a * s[l].tanh() + b * sign(s[l])
        })
    })
}

/// Exact sign with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn builtin_example2() -> ExampleTwo {
    let (a, b) = weights();
    let input_row = oct([1.6, 1.5, 1.2, 0.2, 1.6, 1.5, 1.2, 0.2]);
    let input = vec![input_row, input_row];

    let f = tanh_step((0.5, 0.2), (0.4, -0.1));
    let g = tanh_step((0.35, 0.05), (0.55, -0.1));
    // ones(8,4) ⊗ (pair): every row is the pair tiled four times.
    let lambda_bound = tile_8x8(&[&[0.7, 0.3]]);
    let delta_bound = tile_8x8(&[&[0.4, 0.45]]);
    let act = ActivationSpec::new(f, g, lambda_bound, delta_bound).unwrap();

    let delays = DelayProfile::proportional(vec![vec![0.2, 0.1], vec![0.2, 0.1]]).unwrap();
    let rate = RateFunction::power(1.0, &delays).unwrap();

    let network =
        NetworkSpec::new(vec![0.1, 0.2], a, b, input, vec![act.clone(), act], delays).unwrap();

    // ones(4,1) ⊗ (0.3, 0.5, 0.5, 0.3)^T in the interleaved raw ordering.
    let mut raw = Vec::with_capacity(16);
    for _ in 0..4 {
        raw.extend_from_slice(&[0.3, 0.5, 0.5, 0.3]);
    }
    let lambda = LambdaVec::new(raw, 2).unwrap();

    let ramp: Vec<f64> = (1..=16).map(|x| x as f64).collect();
    ExampleTwo {
        network,
        lambda,
        rate,
        target_zero: vec![Octonion::ZERO; 2],
        target_ramp: states_from_component_major(&ramp, 2).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::verify_derivative_bounds;

    #[test]
    fn example1_constants() {
        let ex = builtin_example1();
        assert_eq!(ex.constant_delay.decay(), &[30.0, 30.0]);
        assert_eq!(
            ex.constant_delay.weight_a(0, 0).c,
            [-0.2, -0.3, -0.2, -0.3, -0.2, -0.3, -0.2, -0.3]
        );
        assert_eq!(
            ex.constant_delay.activation(0).lambda_bound()[0],
            [0.5, 1.0, 0.5, 1.0, 0.5, 1.0, 0.5, 1.0]
        );
        assert_eq!(
            ex.constant_delay.activation(0).delta_bound()[0],
            [0.5, 0.25, 0.5, 0.25, 0.5, 0.25, 0.5, 0.25]
        );
        assert_eq!(ex.lambda.block(0), [0.2; 8]);
        assert!((ex.exponential_rate.beta() - ((0.08f64).exp() - 1.0)).abs() < 1e-15);
        assert!((ex.power_rate.beta() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn example1_bounds_hold_under_sampling() {
        let ex = builtin_example1();
        let report =
            verify_derivative_bounds(ex.constant_delay.activation(0), 500, 3.0, 1e-4, 11).unwrap();
        assert!(report.within_tol, "max excess {}", report.max_excess);
    }

    #[test]
    fn example2_constants() {
        let ex = builtin_example2();
        assert_eq!(ex.network.decay(), &[0.1, 0.2]);
        for row in ex.network.activation(1).lambda_bound() {
            assert_eq!(*row, [0.7, 0.3, 0.7, 0.3, 0.7, 0.3, 0.7, 0.3]);
        }
        for row in ex.network.activation(0).delta_bound() {
            assert_eq!(*row, [0.4, 0.45, 0.4, 0.45, 0.4, 0.45, 0.4, 0.45]);
        }
        assert_eq!(ex.lambda.block(0), [0.3, 0.5, 0.3, 0.5, 0.3, 0.5, 0.3, 0.5]);
        assert_eq!(ex.lambda.block(1), [0.5, 0.3, 0.5, 0.3, 0.5, 0.3, 0.5, 0.3]);
        assert_eq!(ex.rate.alpha(), 0.0);
        assert!((ex.rate.beta() - 0.25).abs() < 1e-15);
        assert_eq!(
            ex.target_ramp.iter().map(|o| o.c[0]).collect::<Vec<_>>(),
            vec![1.0, 2.0]
        );
        assert_eq!(ex.target_ramp[0].c[7], 15.0);
        assert_eq!(ex.target_ramp[1].c[7], 16.0);
    }

    #[test]
    fn example2_activations_vanish_at_zero() {
        let ex = builtin_example2();
        assert_eq!(ex.network.activation(0).eval_f(&[0.0; 8]), [0.0; 8]);
        assert_eq!(ex.network.activation(0).eval_g(&[0.0; 8]), [0.0; 8]);
    }

    #[test]
    fn example2_effective_input_at_origin_is_the_external_input() {
        let ex = builtin_example2();
        let eff = ex.network.effective_input(&ex.target_zero).unwrap();
        assert_eq!(eff[0].c, [1.6, 1.5, 1.2, 0.2, 1.6, 1.5, 1.2, 0.2]);
        assert_eq!(eff[1].c, [1.6, 1.5, 1.2, 0.2, 1.6, 1.5, 1.2, 0.2]);
    }

    #[test]
    fn example2_sampled_partials_versus_stated_bounds() {
        // Even rows comply: tanh slope 0.5 <= stated 0.7 (f), 0.35 <= 0.4 (g).
        // Odd diagonals exceed the stated bounds (slope 0.4 vs 0.3 for f,
        // 0.55 vs 0.45 for g); the stated matrices are data, and the report
        // is how that gap surfaces.
        let ex = builtin_example2();
        let report =
            verify_derivative_bounds(ex.network.activation(0), 1000, 5.0, 1e-4, 13).unwrap();
        for l1 in (0..8).step_by(2) {
            for l2 in 0..8 {
                assert!(report.excess_f[l1][l2] <= 1e-4, "f even row {l1} col {l2}");
                assert!(report.excess_g[l1][l2] <= 1e-4, "g even row {l1} col {l2}");
            }
        }
        assert!(report.excess_f[1][1] > 0.05 && report.excess_f[1][1] <= 0.1 + 1e-4);
        assert!(report.excess_g[1][1] > 0.05 && report.excess_g[1][1] <= 0.1 + 1e-4);
    }
}
