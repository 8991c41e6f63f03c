//! Octonion-valued neural networks with unbounded asynchronous delays:
//! exact octonion algebra, the decomposed real dynamics, stability
//! criteria with controller gain design, and a delay-differential
//! simulator with decay monitors and finite-time phase detection.
//!
//! The flow mirrors how the pieces are used together: build or load a
//! [`NetworkSpec`], evaluate [`criteria`] for a [`LambdaVec`] and a
//! [`RateFunction`], design gains when the criteria fail, then
//! [`sim::integrate`] and inspect norms, monitors, and phases.

// Indexed loops mirror the subscript-heavy formulas; `!(x >= 0.0)` guards
// reject NaN where `x < 0.0` would let it through.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod activation;
pub mod builtin;
pub mod criteria;
pub mod delay;
pub mod error;
pub mod lambda;
pub mod network;
pub mod octonion;
pub mod sim;

pub use activation::{verify_derivative_bounds, ActivationSpec, BoundsReport, ComponentMap};
pub use builtin::{builtin_example1, builtin_example2, sign, ExampleOne, ExampleTwo};
pub use criteria::{
    check_mu_stability, check_unique_equilibrium, check_unique_equilibrium_simplified,
    gain_lower_bounds, search_lambda, t_ell, t_ell_simplified, tbar_ell, CriterionReport,
    GainBounds,
};
pub use delay::{DelayKind, DelayProfile, RateFamily, RateFunction};
pub use error::{Error, Result};
pub use lambda::LambdaVec;
pub use network::{
    component_major_vector, flatten_states, states_from_component_major, unflatten_states,
    NetworkSpec,
};
pub use octonion::{abs_vec, mul_matrix, pos_part, MulMatrix, Octonion, MUL_MATRICES};
pub use sim::{
    adaptive_update, companion_fixed_point, detect_phases, deviation_norms, fixed_controller,
    integrate, integrate_octonion_form, lambda_inf_norm, monitor_p, monitor_phase2, sample_history,
    window_sup_norm, AdaptiveBranch, CompanionConfig, CompanionOutcome, ControllerConfig,
    GainTrajectory, HistoryTrajectory, InitialHistory, PhaseTimes, SimConfig, SimResult,
};
