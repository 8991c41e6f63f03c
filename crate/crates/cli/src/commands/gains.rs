//! `ovnn gains`: finite-time controller gain design for a target point.

use std::path::Path;

use anyhow::{Context, Result};

use ovnn_core::gain_lower_bounds;

use super::Outcome;
use crate::config::Experiment;
use crate::report::GainsFile;

pub fn cmd_gains(experiment: &Experiment, out_dir: &Path) -> Result<Outcome> {
    let lambda = experiment.resolve_lambda()?;
    let rate = experiment
        .rate
        .as_ref()
        .context("gain design needs a [rate]")?;
    let target = experiment
        .target()
        .context("gain design needs `sim.target` (the point to steer to)")?;
    let margin = experiment.controller.margin.unwrap_or(0.1);

    let bounds = gain_lower_bounds(&experiment.network, &lambda, rate, &target, margin)
        .map_err(|e| anyhow::anyhow!("gain design failed: {e}"))?;
    let file = GainsFile::new(&bounds);

    let path = experiment
        .outputs
        .iter()
        .find(|o| o.kind == "report")
        .map(|o| out_dir.join(&o.path))
        .unwrap_or_else(|| out_dir.join("gains.toml"));
    std::fs::create_dir_all(path.parent().unwrap_or(out_dir))?;
    std::fs::write(
        &path,
        toml::to_string_pretty(&file).context("serialize gains")?,
    )
    .with_context(|| format!("cannot write {}", path.display()))?;

    let kappa = file.controller.kappa.as_ref().unwrap();
    println!(
        "gains written to {} (margin {margin}); kappa[1][0] = {:.4}",
        path.display(),
        kappa[0][0]
    );
    Ok(Outcome::Satisfied)
}
