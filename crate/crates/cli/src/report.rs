//! Serializable report shapes for criterion checks and gain tables.

use serde::Serialize;

use ovnn_core::{CriterionReport, GainBounds, RateFunction};

use crate::config::ControllerSection;

#[derive(Serialize)]
pub struct WorstOut {
    /// 1-based neuron index.
    pub p: usize,
    /// 0-based component index.
    pub l: usize,
    pub value: f64,
}

#[derive(Serialize)]
pub struct CriterionOut {
    pub name: String,
    pub satisfied: bool,
    pub margin: f64,
    pub worst: WorstOut,
    pub values: Vec<Vec<f64>>,
}

impl CriterionOut {
    pub fn new(name: &str, report: &CriterionReport) -> Self {
        CriterionOut {
            name: name.to_string(),
            satisfied: report.satisfied,
            margin: report.margin,
            worst: WorstOut {
                p: report.worst.0 + 1,
                l: report.worst.1,
                value: report.worst.2,
            },
            values: report.values.iter().map(|row| row.to_vec()).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct RateOut {
    pub family: String,
    pub alpha: f64,
    pub beta: f64,
}

impl RateOut {
    pub fn new(rate: &RateFunction) -> Self {
        RateOut {
            family: format!("{:?}", rate.family()).to_lowercase(),
            alpha: rate.alpha(),
            beta: rate.beta(),
        }
    }
}

#[derive(Serialize)]
pub struct CheckReport {
    pub network: String,
    pub lambda: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<RateOut>,
    pub criteria: Vec<CriterionOut>,
}

#[derive(Serialize)]
pub struct BoundsOut {
    pub margin: f64,
    pub kappa_min: Vec<Vec<f64>>,
    pub kappa_hat_min: Vec<Vec<f64>>,
}

/// The gains file: a `[controller]` table that parses straight back into a
/// config controller section, plus the raw bounds.
#[derive(Serialize)]
pub struct GainsFile {
    pub controller: ControllerSection,
    pub bounds: BoundsOut,
}

impl GainsFile {
    pub fn new(bounds: &GainBounds) -> Self {
        GainsFile {
            controller: ControllerSection {
                family: "fixed".into(),
                kappa: Some(bounds.concrete_kappa()),
                kappa_hat: Some(bounds.concrete_kappa_hat()),
                c1: None,
                c2: None,
                c3: None,
                kappa0: None,
                kappa_hat0: None,
                margin: None,
            },
            bounds: BoundsOut {
                margin: bounds.margin,
                kappa_min: bounds.kappa_min.iter().map(|r| r.to_vec()).collect(),
                kappa_hat_min: bounds.kappa_hat_min.iter().map(|r| r.to_vec()).collect(),
            },
        }
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub t_end: f64,
    pub final_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diverged_at: Option<f64>,
    pub final_state: Vec<Vec<f64>>,
}
