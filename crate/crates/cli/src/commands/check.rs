//! `ovnn check`: evaluate the equilibrium-uniqueness and mu-stability
//! criteria for the configured network.

use std::path::Path;

use anyhow::{Context, Result};

use ovnn_core::{check_mu_stability, check_unique_equilibrium};

use super::Outcome;
use crate::config::Experiment;
use crate::report::{CheckReport, CriterionOut, RateOut};

pub fn cmd_check(experiment: &Experiment, out_dir: &Path) -> Result<Outcome> {
    let lambda = experiment.resolve_lambda()?;

    let uniqueness = check_unique_equilibrium(&experiment.network, &lambda)
        .map_err(|e| anyhow::anyhow!("criterion evaluation failed: {e}"))?;
    let mut criteria = vec![CriterionOut::new("unique_equilibrium", &uniqueness)];
    let mut all_satisfied = uniqueness.satisfied;

    let rate_out = match &experiment.rate {
        Some(rate) => {
            let mu = check_mu_stability(&experiment.network, &lambda, rate)
                .map_err(|e| anyhow::anyhow!("criterion evaluation failed: {e}"))?;
            all_satisfied &= mu.satisfied;
            criteria.push(CriterionOut::new("mu_stability", &mu));
            Some(RateOut::new(rate))
        }
        None => None,
    };

    let report = CheckReport {
        network: experiment
            .network_label
            .clone()
            .unwrap_or_else(|| "inline".into()),
        lambda: lambda.raw().to_vec(),
        rate: rate_out,
        criteria,
    };

    let path = experiment
        .outputs
        .iter()
        .find(|o| o.kind == "report")
        .map(|o| out_dir.join(&o.path))
        .unwrap_or_else(|| out_dir.join("check_report.toml"));
    std::fs::create_dir_all(path.parent().unwrap_or(out_dir))?;
    std::fs::write(
        &path,
        toml::to_string_pretty(&report).context("serialize report")?,
    )
    .with_context(|| format!("cannot write {}", path.display()))?;

    for c in &report.criteria {
        println!(
            "{}: {} (worst value {:.4} at neuron {}, component {})",
            c.name,
            if c.satisfied {
                "satisfied"
            } else {
                "NOT satisfied"
            },
            c.worst.value,
            c.worst.p,
            c.worst.l
        );
    }
    println!("report written to {}", path.display());

    Ok(if all_satisfied {
        Outcome::Satisfied
    } else {
        Outcome::Unsatisfied
    })
}
