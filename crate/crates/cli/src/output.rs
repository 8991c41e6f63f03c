//! CSV trajectory export with full-precision deterministic formatting.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

use ovnn_core::{monitor_p, monitor_phase2, LambdaVec, RateFunction, SimResult};

/// Full-precision float formatting (17 significant digits) so repeated
/// runs produce byte-identical files.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvOptions {
    /// Write every k-th grid point.
    pub every: usize,
    pub monitor_p: bool,
    pub monitor_p2_theta: Option<f64>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            every: 1,
            monitor_p: false,
            monitor_p2_theta: None,
        }
    }
}

/// Writes `t, w{p}_{l} ..., norm[, kappa, kappa_hat][, P][, P2]`.
pub fn write_csv(
    path: &Path,
    result: &SimResult,
    lambda: &LambdaVec,
    rate: &RateFunction,
    options: &CsvOptions,
) -> Result<()> {
    let n = result.n();
    let mut header = vec!["t".to_string()];
    for p in 0..n {
        for l in 0..8 {
            header.push(format!("w{}_{}", p + 1, l));
        }
    }
    header.push("norm".into());
    if result.gains.is_some() {
        header.push("kappa".into());
        header.push("kappa_hat".into());
    }
    let p_series = options.monitor_p.then(|| monitor_p(result, lambda, rate));
    if p_series.is_some() {
        header.push("P".into());
    }
    let p2_series = options
        .monitor_p2_theta
        .map(|theta| monitor_phase2(result, lambda, theta));
    if p2_series.is_some() {
        header.push("P2".into());
    }

    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).ok();
    }
    let file =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "{}", header.join(","))?;

    let times = result.times();
    let every = options.every.max(1);
    for i in (0..times.len()).step_by(every) {
        let mut row = Vec::with_capacity(header.len());
        row.push(fmt(times[i]));
        for v in result.trajectory.state_at(i) {
            row.push(fmt(*v));
        }
        row.push(fmt(result.norms[i]));
        if let Some(g) = &result.gains {
            row.push(fmt(g.kappa[i]));
            row.push(fmt(g.kappa_hat[i]));
        }
        if let Some(p) = &p_series {
            row.push(fmt(p[i]));
        }
        if let Some(p2) = &p2_series {
            row.push(fmt(p2[i]));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}
