//! `ovnn simulate`: integrate the configured run and write trajectories,
//! charts, and a run report.

use std::path::Path;

use anyhow::{Context, Result};

use ovnn_core::{detect_phases, integrate, LambdaVec, RateFunction, SimResult};

use super::Outcome;
use crate::config::{Experiment, OutputSection};
use crate::output::{write_csv, CsvOptions};
use crate::report::RunReport;
use crate::svg;

pub fn cmd_simulate(
    experiment: &Experiment,
    out_dir: &Path,
    seed: u64,
    step_override: Option<f64>,
) -> Result<Outcome> {
    let lambda = experiment.resolve_lambda()?;
    let rate = experiment
        .rate
        .as_ref()
        .context("simulation needs a [rate]")?;
    let controller = experiment.build_controller(&lambda)?;
    let sim_config = experiment.sim_config(seed, step_override)?;
    let sim = experiment
        .sim
        .as_ref()
        .expect("sim_config checked the section");

    let result = integrate(&experiment.network, &controller, &lambda, rate, &sim_config)
        .map_err(|e| anyhow::anyhow!("integration failed: {e}"))?;

    let options = CsvOptions {
        every: sim.every,
        monitor_p: sim.monitor_p,
        monitor_p2_theta: sim.monitor_p2_theta,
    };
    write_outputs(
        &experiment.outputs,
        out_dir,
        &result,
        &lambda,
        rate,
        &options,
        sim.phase_tol,
    )?;

    if let Some(t) = result.diverged_at {
        eprintln!("state diverged at t = {t}; partial outputs written");
        let marker = out_dir.join("DIVERGED");
        std::fs::write(&marker, format!("diverged at t = {t}\n")).ok();
        return Ok(Outcome::NumericalFailure);
    }
    println!(
        "simulated {} steps; final norm {:.3e}",
        result.times().len() - 1,
        result.norms.last().unwrap()
    );
    Ok(Outcome::Satisfied)
}

pub fn write_outputs(
    outputs: &[OutputSection],
    out_dir: &Path,
    result: &SimResult,
    lambda: &LambdaVec,
    rate: &RateFunction,
    options: &CsvOptions,
    phase_tol: f64,
) -> Result<()> {
    let mut wrote_csv = false;
    for output in outputs {
        let path = out_dir.join(&output.path);
        match output.kind.as_str() {
            "csv" => {
                write_csv(&path, result, lambda, rate, options)?;
                wrote_csv = true;
            }
            "svg" => {
                let chart = render_chart(output, result, lambda, rate)?;
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).ok();
                }
                std::fs::write(&path, chart)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            "report" => {
                let phases = detect_phases(result, lambda, phase_tol);
                let report = RunReport {
                    t_end: *result.times().last().unwrap(),
                    final_norm: *result.norms.last().unwrap(),
                    t1: phases.t1,
                    t2: phases.t2,
                    diverged_at: result.diverged_at,
                    final_state: result.final_state().iter().map(|o| o.c.to_vec()).collect(),
                };
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).ok();
                }
                std::fs::write(&path, toml::to_string_pretty(&report)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            other => anyhow::bail!("unknown output kind `{other}` (csv | svg | report)"),
        }
    }
    if !wrote_csv && outputs.is_empty() {
        write_csv(
            &out_dir.join("trajectory.csv"),
            result,
            lambda,
            rate,
            options,
        )?;
    }
    Ok(())
}

fn render_chart(
    output: &OutputSection,
    result: &SimResult,
    lambda: &LambdaVec,
    rate: &RateFunction,
) -> Result<String> {
    let times = result.times();
    let columns = output
        .columns
        .clone()
        .unwrap_or_else(|| vec!["norm".to_string()]);
    let mut series_data: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for column in &columns {
        let values: Vec<f64> = match column.as_str() {
            "norm" => result.norms.clone(),
            "mu_norm" => ovnn_core::deviation_norms(result, lambda)
                .iter()
                .zip(times)
                .map(|(n, t)| rate.mu(*t) * n)
                .collect(),
            "P" => ovnn_core::monitor_p(result, lambda, rate),
            "kappa" => result
                .gains
                .as_ref()
                .context("no adaptive gains recorded")?
                .kappa
                .clone(),
            "kappa_hat" => result
                .gains
                .as_ref()
                .context("no adaptive gains recorded")?
                .kappa_hat
                .clone(),
            name => {
                // state column w{p}_{l}
                let rest = name.strip_prefix('w').context("unknown chart column")?;
                let (p, l) = rest
                    .split_once('_')
                    .context("state columns look like w1_0")?;
                let p: usize = p.parse()?;
                let l: usize = l.parse()?;
                anyhow::ensure!(p >= 1 && p <= result.n() && l < 8, "column out of range");
                (0..times.len())
                    .map(|i| result.trajectory.state_at(i)[(p - 1) * 8 + l])
                    .collect()
            }
        };
        series_data.push((column.clone(), times.iter().copied().zip(values).collect()));
    }
    let series: Vec<svg::Series> = series_data
        .iter()
        .map(|(label, points)| svg::Series { label, points })
        .collect();
    let title = output.title.clone().unwrap_or_else(|| "simulation".into());
    Ok(svg::line_chart(
        &title,
        "t",
        &columns.join(", "),
        &series,
        output.logy,
    ))
}
