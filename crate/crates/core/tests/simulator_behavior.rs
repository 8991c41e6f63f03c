//! Cross-module behavior: equilibria feeding the effective input, windowed
//! sups over real runs, monitors on degenerate and diverging cases, and
//! phase detection edge cases.

use ovnn_core::{
    builtin_example1, builtin_example2, companion_fixed_point, detect_phases, integrate, monitor_p,
    monitor_phase2, window_sup_norm, ActivationSpec, CompanionConfig, ControllerConfig,
    DelayProfile, LambdaVec, NetworkSpec, Octonion, RateFunction, SimConfig,
};

#[test]
fn effective_input_vanishes_at_the_equilibrium() {
    let ex = builtin_example1();
    let net = &ex.constant_delay;
    let inits = vec![vec![Octonion::ZERO; 2], vec![Octonion::ONE, -Octonion::ONE]];
    let outcome = companion_fixed_point(
        net,
        &inits,
        &ex.lambda,
        &CompanionConfig {
            t_end: 3.0,
            step: 1e-3,
        },
    )
    .unwrap();
    assert!(outcome.criterion_satisfied);
    let effective = net.effective_input(&outcome.point).unwrap();
    for e in &effective {
        for l in 0..8 {
            assert!(
                e.c[l].abs() < 1e-8,
                "effective input component {l} = {} at the equilibrium",
                e.c[l]
            );
        }
    }
}

fn decay_with_delay() -> NetworkSpec {
    NetworkSpec::new(
        vec![1.0],
        vec![vec![Octonion::ZERO]],
        vec![vec![Octonion::ZERO]],
        vec![Octonion::ZERO],
        vec![ActivationSpec::zero()],
        DelayProfile::constant(vec![vec![1.0]]).unwrap(),
    )
    .unwrap()
}

#[test]
fn window_sup_of_a_decreasing_norm_sits_at_the_window_start() {
    // pure decay: the norm is monotonically decreasing, so the closed-window
    // sup over [t - 1, t] equals the norm at t - 1 = e^{-(t-1)}
    let net = decay_with_delay();
    let rate = RateFunction::exponential(0.0, net.delays()).unwrap();
    let lam = LambdaVec::ones(1);
    let config = SimConfig::new(0.0, 4.0, 1e-3, &[Octonion::ONE]);
    let result = integrate(&net, &ControllerConfig::None, &lam, &rate, &config).unwrap();

    for t in [1.5, 2.0, 3.25] {
        let sup = window_sup_norm(&result, &lam, t).unwrap();
        let expected = (-(t - 1.0)).exp();
        assert!(
            (sup - expected).abs() < 1e-6,
            "sup at {t}: {sup} vs {expected}"
        );
    }
    // inside the first window the constant pre-start history dominates
    let sup = window_sup_norm(&result, &lam, 0.5).unwrap();
    assert!((sup - 1.0).abs() < 1e-9);
    assert!(window_sup_norm(&result, &lam, 10.0).is_err());
}

#[test]
fn monitors_on_a_trajectory_pinned_to_the_target() {
    // no dynamics at all: the state sits on the target, deviation is zero
    let net = NetworkSpec::new(
        vec![0.0],
        vec![vec![Octonion::ZERO]],
        vec![vec![Octonion::ZERO]],
        vec![Octonion::ZERO],
        vec![ActivationSpec::zero()],
        DelayProfile::constant(vec![vec![0.5]]).unwrap(),
    )
    .unwrap();
    let rate = RateFunction::exponential(0.01, net.delays()).unwrap();
    let lam = LambdaVec::ones(1);
    let target = vec![Octonion::real(2.0)];
    let config = SimConfig::new(0.0, 3.0, 1e-2, &target.clone()).with_target(target.clone());
    let result = integrate(&net, &ControllerConfig::None, &lam, &rate, &config).unwrap();

    // deviation identically zero: P == 0, P2 == theta * t, T1 = T2 = start
    let p = monitor_p(&result, &lam, &rate);
    assert!(p.iter().all(|v| *v == 0.0));
    let theta = 0.25;
    let p2 = monitor_phase2(&result, &lam, theta);
    for (t, v) in result.times().iter().zip(p2.iter()) {
        assert!((v - theta * t).abs() < 1e-12, "P2({t}) = {v}");
    }
    let phases = detect_phases(&result, &lam, 1e-6);
    assert_eq!(phases.t1, Some(0.0));
    assert_eq!(phases.t2, Some(0.0));
}

#[test]
fn uncontrolled_second_example_never_reaches_the_phases() {
    let ex = builtin_example2();
    let initial = vec![
        Octonion::new([2.0, -1.5, 1.0, -2.5, 0.5, 1.5, -1.0, 2.5]),
        Octonion::new([-2.0, 1.0, -0.5, 2.0, -1.5, 0.5, 2.5, -1.0]),
    ];
    let config = SimConfig::new(0.0, 15.0, 2e-3, &initial).with_target(ex.target_zero.clone());
    let result = integrate(
        &ex.network,
        &ControllerConfig::None,
        &ex.lambda,
        &ex.rate,
        &config,
    )
    .unwrap();
    assert!(result.diverged_at.is_none());

    let phases = detect_phases(&result, &ex.lambda, 1e-6);
    assert_eq!(phases.t1, None, "windowed sup dipped to 1 without control");
    assert_eq!(phases.t2, None);

    // the decay monitor grows: no mu-stability without control
    let p = monitor_p(&result, &ex.lambda, &ex.rate);
    assert!(p.last().unwrap() > &(10.0 * p[1].max(1e-9)));
    assert!(result.norms.last().unwrap() > &result.norms[0]);
}

#[test]
fn phase_ordering_holds_on_a_controlled_run() {
    let ex = builtin_example2();
    let gains =
        ovnn_core::gain_lower_bounds(&ex.network, &ex.lambda, &ex.rate, &ex.target_zero, 0.1)
            .unwrap();
    let controller = ControllerConfig::Fixed {
        kappa: gains.concrete_kappa(),
        kappa_hat: gains.concrete_kappa_hat(),
    };
    let initial = vec![
        Octonion::new([2.5, -2.0, 1.5, -1.0, 0.5, 2.0, -2.5, 1.0]),
        Octonion::new([-1.5, 2.5, -0.5, 1.0, -2.0, 0.5, 1.5, -2.5]),
    ];
    let config = SimConfig::new(0.0, 6.0, 1e-3, &initial).with_target(ex.target_zero.clone());
    let result = integrate(&ex.network, &controller, &ex.lambda, &ex.rate, &config).unwrap();
    let phases = detect_phases(&result, &ex.lambda, 1e-6);
    let (t1, t2) = (phases.t1.unwrap(), phases.t2.unwrap());
    assert!(t1 <= t2, "t1 = {t1}, t2 = {t2}");
}
