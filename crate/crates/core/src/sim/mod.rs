//! Delay-differential simulation of the (controlled) network: dense-output
//! trajectory storage, the fixed-step integrator, controllers, monitors,
//! and the delay-free companion system.

mod companion;
mod controller;
mod history;
mod integrate;
mod monitors;

pub use companion::{companion_fixed_point, CompanionConfig, CompanionOutcome};
pub use controller::{
    adaptive_update, fixed_controller, sign_with_dead_band, AdaptiveBranch, ControllerConfig,
};
pub use history::{sample_history, HistoryTrajectory, InitialHistory};
pub use integrate::{integrate, integrate_octonion_form, GainTrajectory, SimConfig, SimResult};
pub use monitors::{
    detect_phases, deviation_norms, lambda_inf_norm, monitor_p, monitor_phase2, window_sup_norm,
    PhaseTimes,
};
