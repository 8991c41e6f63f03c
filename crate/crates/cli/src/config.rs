//! Experiment configuration: a TOML schema that builds the library's
//! networks, weight vectors, rates, controllers, and simulation settings.
//!
//! Octonions are written as 8-element arrays in `e0..e7` order; matrices
//! row-major. The lambda vector uses the interleaved component-major
//! ordering. Inline activations cover the componentwise families; the
//! coupled-logistic activations of the first benchmark exist via
//! `builtin = "example1"`.

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use ovnn_core::{
    builtin_example1, builtin_example2, ActivationSpec, ComponentMap, ControllerConfig,
    DelayProfile, InitialHistory, LambdaVec, NetworkSpec, Octonion, RateFunction, SimConfig,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub network: NetworkSection,
    pub lambda: Option<LambdaSection>,
    pub rate: Option<RateSection>,
    #[serde(default)]
    pub controller: ControllerSection,
    pub sim: Option<SimSection>,
    #[serde(default)]
    pub outputs: Vec<OutputSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub builtin: Option<String>,
    /// Delay setting for `builtin = "example1"`: "constant" (default) or
    /// "proportional".
    pub delay_variant: Option<String>,
    // inline definition:
    pub n: Option<usize>,
    pub decay: Option<Vec<f64>>,
    pub a: Option<Vec<Vec<[f64; 8]>>>,
    pub b: Option<Vec<Vec<[f64; 8]>>>,
    pub input: Option<Vec<[f64; 8]>>,
    pub delays: Option<DelaySection>,
    pub activations: Option<Vec<ActivationSection>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelaySection {
    pub family: String,
    pub tau: Option<Vec<Vec<f64>>>,
    pub omega: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivationSection {
    pub f: MapSection,
    pub g: MapSection,
    /// Required for families whose derivative bounds cannot be derived
    /// (tanh_sign); optional for zero/linear.
    pub lambda_bound: Option<Vec<Vec<f64>>>,
    pub delta_bound: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    pub family: String,
    pub gain: Option<f64>,
    /// `[even, odd]` tanh coefficients.
    pub tanh: Option<[f64; 2]>,
    /// `[even, odd]` step coefficients.
    pub sign: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSection {
    /// Explicit 8n entries, interleaved ordering.
    pub values: Option<Vec<f64>>,
    /// Search for a feasible vector instead.
    #[serde(default)]
    pub search: bool,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_budget() -> usize {
    200
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateSection {
    pub family: String,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    #[serde(default = "default_controller_family")]
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<[f64; 8]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_hat: Option<Vec<[f64; 8]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_hat0: Option<f64>,
    /// Headroom over the gain bounds for `family = "design"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

fn default_controller_family() -> String {
    "none".into()
}

impl Default for ControllerSection {
    fn default() -> Self {
        ControllerSection {
            family: default_controller_family(),
            kappa: None,
            kappa_hat: None,
            c1: None,
            c2: None,
            c3: None,
            kappa0: None,
            kappa_hat0: None,
            margin: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_zero_tol")]
    pub norm_zero_tol: f64,
    #[serde(default)]
    pub dead_band: f64,
    pub target: Option<Vec<[f64; 8]>>,
    pub initial: Option<Vec<[f64; 8]>>,
    pub initial_random: Option<RandomInit>,
    /// Tolerance for the second phase mark.
    #[serde(default = "default_phase_tol")]
    pub phase_tol: f64,
    /// Record the decay monitor column.
    #[serde(default)]
    pub monitor_p: bool,
    /// Record the phase-two monitor column with this theta.
    pub monitor_p2_theta: Option<f64>,
    /// Write every k-th grid point to the CSV.
    #[serde(default = "default_every")]
    pub every: usize,
}

fn default_step() -> f64 {
    1e-3
}

fn default_zero_tol() -> f64 {
    1e-9
}

fn default_phase_tol() -> f64 {
    1e-6
}

fn default_every() -> usize {
    1
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomInit {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub kind: String,
    pub path: String,
    pub columns: Option<Vec<String>>,
    #[serde(default)]
    pub logy: bool,
    pub title: Option<String>,
}

/// Everything a command needs, built from a parsed config.
pub struct Experiment {
    pub network: NetworkSpec,
    pub lambda_spec: LambdaSpec,
    pub rate: Option<RateFunction>,
    pub controller: ControllerSection,
    pub sim: Option<SimSection>,
    pub outputs: Vec<OutputSection>,
    /// Builtin lambda default when the config named a builtin.
    pub builtin_lambda: Option<LambdaVec>,
    /// Builtin name for reports, when one was used.
    pub network_label: Option<String>,
}

pub enum LambdaSpec {
    Explicit(LambdaVec),
    Search {
        budget: usize,
    },
    /// Fall back to the builtin's published vector.
    Default,
}

pub fn parse(text: &str) -> Result<ExperimentConfig> {
    toml::from_str(text).context("malformed experiment config")
}

fn oct(c: &[f64; 8]) -> Octonion {
    Octonion::new(*c)
}

fn bound_matrix(rows: &Option<Vec<Vec<f64>>>, what: &str) -> Result<Option<[[f64; 8]; 8]>> {
    match rows {
        None => Ok(None),
        Some(rows) => {
            if rows.len() != 8 || rows.iter().any(|r| r.len() != 8) {
                bail!("{what} must be an 8x8 matrix");
            }
            let mut m = [[0.0; 8]; 8];
            for (i, row) in rows.iter().enumerate() {
                m[i].copy_from_slice(row);
            }
            Ok(Some(m))
        }
    }
}

fn build_map(section: &MapSection) -> Result<(ComponentMap, Option<[[f64; 8]; 8]>)> {
    match section.family.as_str() {
        "zero" => {
            let map: ComponentMap = Arc::new(|_: &[f64; 8]| [0.0; 8]);
            Ok((map, Some([[0.0; 8]; 8])))
        }
        "linear" => {
            let gain = section.gain.context("linear activation needs `gain`")?;
            let map: ComponentMap = Arc::new(move |s: &[f64; 8]| s.map(|x| gain * x));
            let mut bound = [[0.0; 8]; 8];
            for (l, row) in bound.iter_mut().enumerate() {
                row[l] = gain.abs();
            }
            Ok((map, Some(bound)))
        }
        "tanh_sign" => {
            let tanh = section
                .tanh
                .context("tanh_sign activation needs `tanh = [even, odd]`")?;
            let sgn = section.sign.unwrap_or([0.0, 0.0]);
            let map: ComponentMap = Arc::new(move |s: &[f64; 8]| {
                std::array::from_fn(|l| {
                    let (a, b) = if l % 2 == 0 {
                        (tanh[0], sgn[0])
                    } else {
                        (tanh[1], sgn[1])
                    };
                    a * s[l].tanh() + b * ovnn_core::sign(s[l])
                })
            });
            Ok((map, None))
        }
        other => bail!("unknown activation family `{other}`"),
    }
}

fn build_activation(section: &ActivationSection) -> Result<ActivationSpec> {
    let (f, f_bound) = build_map(&section.f)?;
    let (g, g_bound) = build_map(&section.g)?;
    let lambda_bound = bound_matrix(&section.lambda_bound, "lambda_bound")?
        .or(f_bound)
        .context("this activation family needs an explicit `lambda_bound`")?;
    let delta_bound = bound_matrix(&section.delta_bound, "delta_bound")?
        .or(g_bound)
        .context("this activation family needs an explicit `delta_bound`")?;
    ActivationSpec::new(f, g, lambda_bound, delta_bound)
        .map_err(|e| anyhow::anyhow!("invalid activation: {e}"))
}

fn build_inline_network(net: &NetworkSection) -> Result<NetworkSpec> {
    let n = net.n.context("inline network needs `n`")?;
    let decay = net.decay.clone().context("inline network needs `decay`")?;
    let a = net.a.as_ref().context("inline network needs `a`")?;
    let b = net.b.as_ref().context("inline network needs `b`")?;
    let input = net.input.as_ref().context("inline network needs `input`")?;
    let delays = net
        .delays
        .as_ref()
        .context("inline network needs `[network.delays]`")?;
    let acts = net
        .activations
        .as_ref()
        .context("inline network needs `[[network.activations]]`")?;
    if acts.len() != n {
        bail!("need {n} activation entries, found {}", acts.len());
    }

    let to_oct_matrix = |m: &Vec<Vec<[f64; 8]>>, what: &str| -> Result<Vec<Vec<Octonion>>> {
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            bail!("weight matrix `{what}` must be {n}x{n}");
        }
        Ok(m.iter().map(|row| row.iter().map(oct).collect()).collect())
    };

    let profile = match delays.family.as_str() {
        "constant" => {
            DelayProfile::constant(delays.tau.clone().context("constant delays need `tau`")?)
        }
        "proportional" => DelayProfile::proportional(
            delays
                .omega
                .clone()
                .context("proportional delays need `omega`")?,
        ),
        other => bail!("unknown delay family `{other}`"),
    }
    .map_err(|e| anyhow::anyhow!("invalid delays: {e}"))?;

    let activations = acts
        .iter()
        .map(build_activation)
        .collect::<Result<Vec<_>>>()?;

    NetworkSpec::new(
        decay,
        to_oct_matrix(a, "a")?,
        to_oct_matrix(b, "b")?,
        input.iter().map(oct).collect(),
        activations,
        profile,
    )
    .map_err(|e| anyhow::anyhow!("invalid network: {e}"))
}

/// Builds the experiment objects out of a parsed config.
pub fn build(config: &ExperimentConfig) -> Result<Experiment> {
    let (network, builtin_lambda, builtin_rate) = match config.network.builtin.as_deref() {
        Some("example1") => {
            let ex = builtin_example1();
            let variant = config
                .network
                .delay_variant
                .as_deref()
                .unwrap_or("constant");
            let (net, rate) = match variant {
                "constant" => (ex.constant_delay, ex.exponential_rate),
                "proportional" => (ex.proportional_delay, ex.power_rate),
                other => bail!("unknown delay_variant `{other}` (constant | proportional)"),
            };
            (net, Some(ex.lambda), Some(rate))
        }
        Some("example2") => {
            let ex = builtin_example2();
            (ex.network, Some(ex.lambda), Some(ex.rate))
        }
        Some(other) => bail!("unknown builtin network `{other}` (example1 | example2)"),
        None => (build_inline_network(&config.network)?, None, None),
    };

    let lambda_spec = match &config.lambda {
        None => LambdaSpec::Default,
        Some(sec) => match (&sec.values, sec.search) {
            (Some(values), false) => LambdaSpec::Explicit(
                LambdaVec::new(values.clone(), network.n())
                    .map_err(|e| anyhow::anyhow!("invalid lambda: {e}"))?,
            ),
            (None, true) => LambdaSpec::Search { budget: sec.budget },
            (Some(_), true) => bail!("lambda: give `values` or `search`, not both"),
            (None, false) => bail!("lambda: give `values` or set `search = true`"),
        },
    };

    let rate = match &config.rate {
        Some(sec) => Some(match sec.family.as_str() {
            "exponential" => RateFunction::exponential(
                sec.alpha.context("exponential rate needs `alpha`")?,
                network.delays(),
            )
            .map_err(|e| anyhow::anyhow!("invalid rate: {e}"))?,
            "power" => RateFunction::power(
                sec.gamma.context("power rate needs `gamma`")?,
                network.delays(),
            )
            .map_err(|e| anyhow::anyhow!("invalid rate: {e}"))?,
            other => bail!("unknown rate family `{other}` (exponential | power)"),
        }),
        None => builtin_rate,
    };

    Ok(Experiment {
        network,
        lambda_spec,
        rate,
        controller: config.controller.clone(),
        sim: config.sim.as_ref().map(clone_sim),
        outputs: config.outputs.clone(),
        builtin_lambda,
        network_label: config.network.builtin.clone(),
    })
}

fn clone_sim(s: &SimSection) -> SimSection {
    SimSection {
        t_start: s.t_start,
        t_end: s.t_end,
        step: s.step,
        norm_zero_tol: s.norm_zero_tol,
        dead_band: s.dead_band,
        target: s.target.clone(),
        initial: s.initial.clone(),
        initial_random: s.initial_random,
        phase_tol: s.phase_tol,
        monitor_p: s.monitor_p,
        monitor_p2_theta: s.monitor_p2_theta,
        every: s.every,
    }
}

impl Experiment {
    /// Resolves the lambda vector: explicit, searched, or the builtin's.
    pub fn resolve_lambda(&self) -> Result<LambdaVec> {
        match &self.lambda_spec {
            LambdaSpec::Explicit(v) => Ok(v.clone()),
            LambdaSpec::Search { budget } => {
                let rate = self.rate.as_ref().context("lambda search needs a rate")?;
                ovnn_core::search_lambda(&self.network, rate, *budget)
                    .map_err(|e| anyhow::anyhow!("lambda search failed: {e}"))?
                    .context("no feasible lambda found within the budget")
            }
            LambdaSpec::Default => self
                .builtin_lambda
                .clone()
                .context("no lambda given and the network is not a builtin"),
        }
    }

    /// The target as octonions, if configured (builtin-independent).
    pub fn target(&self) -> Option<Vec<Octonion>> {
        self.sim
            .as_ref()
            .and_then(|s| s.target.as_ref())
            .map(|t| t.iter().map(oct).collect())
    }

    /// Initial states: explicit, or seeded-random in the configured box.
    pub fn initial_states(&self, seed: u64) -> Result<Vec<Octonion>> {
        use rand::{Rng, SeedableRng};
        let sim = self
            .sim
            .as_ref()
            .context("this command needs a [sim] section")?;
        if let Some(init) = &sim.initial {
            if init.len() != self.network.n() {
                bail!(
                    "initial state has {} neurons, network has {}",
                    init.len(),
                    self.network.n()
                );
            }
            return Ok(init.iter().map(oct).collect());
        }
        let spec = sim
            .initial_random
            .unwrap_or(RandomInit { lo: -1.0, hi: 1.0 });
        if !(spec.hi > spec.lo) {
            bail!("initial_random needs hi > lo");
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Ok((0..self.network.n())
            .map(|_| Octonion::new(std::array::from_fn(|_| rng.random_range(spec.lo..spec.hi))))
            .collect())
    }

    /// Builds the library controller, designing gains when asked.
    pub fn build_controller(&self, lambda: &LambdaVec) -> Result<ControllerConfig> {
        match self.controller.family.as_str() {
            "none" => Ok(ControllerConfig::None),
            "fixed" => {
                let kappa = self
                    .controller
                    .kappa
                    .clone()
                    .context("fixed controller needs `kappa`")?;
                let kappa_hat = self
                    .controller
                    .kappa_hat
                    .clone()
                    .context("fixed controller needs `kappa_hat`")?;
                Ok(ControllerConfig::Fixed { kappa, kappa_hat })
            }
            "adaptive" => Ok(ControllerConfig::Adaptive {
                c1: self
                    .controller
                    .c1
                    .context("adaptive controller needs `c1`")?,
                c2: self
                    .controller
                    .c2
                    .context("adaptive controller needs `c2`")?,
                c3: self
                    .controller
                    .c3
                    .context("adaptive controller needs `c3`")?,
                kappa0: self.controller.kappa0.unwrap_or(0.0),
                kappa_hat0: self.controller.kappa_hat0.unwrap_or(0.0),
            }),
            "design" => {
                let rate = self.rate.as_ref().context("gain design needs a rate")?;
                let target = self.target().context("gain design needs `sim.target`")?;
                let margin = self.controller.margin.unwrap_or(0.1);
                let bounds =
                    ovnn_core::gain_lower_bounds(&self.network, lambda, rate, &target, margin)
                        .map_err(|e| anyhow::anyhow!("gain design failed: {e}"))?;
                Ok(ControllerConfig::Fixed {
                    kappa: bounds.concrete_kappa(),
                    kappa_hat: bounds.concrete_kappa_hat(),
                })
            }
            other => bail!("unknown controller family `{other}`"),
        }
    }

    /// Builds the simulator configuration (with an optional step override).
    pub fn sim_config(&self, seed: u64, step_override: Option<f64>) -> Result<SimConfig> {
        let sim = self
            .sim
            .as_ref()
            .context("this command needs a [sim] section")?;
        let initial = self.initial_states(seed)?;
        let mut config = SimConfig::new(
            sim.t_start,
            sim.t_end,
            step_override.unwrap_or(sim.step),
            &initial,
        );
        config.norm_zero_tol = sim.norm_zero_tol;
        config.dead_band = sim.dead_band;
        config.target = self.target();
        config.initial_history = InitialHistory::Constant(ovnn_core::flatten_states(&initial));
        Ok(config)
    }
}
