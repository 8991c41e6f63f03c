//! Criterion quantities for equilibrium uniqueness and mu-stability, the
//! controller gain lower bounds, and a heuristic feasibility search for the
//! lambda weight vector.
//!
//! Row contractions follow one convention throughout: `r = a~^T M^l` is a
//! row 8-vector, `{r}+ . col_l(B)` and `|r| B v` are scalar contractions
//! against a bound matrix `B` and a weight vector `v`.

use crate::delay::RateFunction;
use crate::error::{Error, Result};
use crate::lambda::LambdaVec;
use crate::network::NetworkSpec;

fn pos_dot_col(row: &[f64; 8], m: &[[f64; 8]; 8], col: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..8 {
        acc += row[i].max(0.0) * m[i][col];
    }
    acc
}

fn abs_row_matrix_vec(row: &[f64; 8], m: &[[f64; 8]; 8], v: &[f64; 8]) -> f64 {
    let mut acc = 0.0;
    for (j, vj) in v.iter().enumerate() {
        if *vj == 0.0 {
            continue;
        }
        let mut entry = 0.0;
        for i in 0..8 {
            entry += row[i].abs() * m[i][j];
        }
        acc += entry * vj;
    }
    acc
}

fn check_indices(net: &NetworkSpec, lambda: &LambdaVec, p: usize, l: usize) -> Result<()> {
    if lambda.n() != net.n() {
        return Err(Error::DimensionMismatch(format!(
            "lambda is for {} neurons, network has {}",
            lambda.n(),
            net.n()
        )));
    }
    if p >= net.n() || l >= 8 {
        return Err(Error::DimensionMismatch(format!(
            "criterion index ({p},{l}) out of range for n = {}",
            net.n()
        )));
    }
    Ok(())
}

/// The sign-aware equilibrium-uniqueness quantity for neuron `p`,
/// component `l`. All of them negative certifies a unique equilibrium.
pub fn t_ell(net: &NetworkSpec, lambda: &LambdaVec, p: usize, l: usize) -> Result<f64> {
    check_indices(net, lambda, p, l)?;
    let row_a = net.weight_a(p, p).row_contraction(l);
    let row_b = net.weight_b(p, p).row_contraction(l);
    let act_p = net.activation(p);
    let block = lambda.block(p);
    let masked = lambda.block_masked(p, l);

    let mut val = block[l]
        * (-net.decay()[p]
            + pos_dot_col(&row_a, act_p.lambda_bound(), l)
            + pos_dot_col(&row_b, act_p.delta_bound(), l));
    val += abs_row_matrix_vec(&row_a, act_p.lambda_bound(), &masked)
        + abs_row_matrix_vec(&row_b, act_p.delta_bound(), &masked);
    for q in 0..net.n() {
        if q == p {
            continue;
        }
        let act_q = net.activation(q);
        let block_q = lambda.block(q);
        val += abs_row_matrix_vec(
            &net.weight_a(p, q).row_contraction(l),
            act_q.lambda_bound(),
            &block_q,
        ) + abs_row_matrix_vec(
            &net.weight_b(p, q).row_contraction(l),
            act_q.delta_bound(),
            &block_q,
        );
    }
    Ok(val)
}

/// The sign-agnostic variant: `-d_p L_p[l] + sum_q [|a~^T M^l| Mlam(q) +
/// |b~^T M^l| Mdel(q)] L_q`. An independent sufficient test, neither weaker
/// nor stronger than [`t_ell`] in general.
pub fn t_ell_simplified(net: &NetworkSpec, lambda: &LambdaVec, p: usize, l: usize) -> Result<f64> {
    check_indices(net, lambda, p, l)?;
    let mut val = -net.decay()[p] * lambda.entry(p, l);
    for q in 0..net.n() {
        let act_q = net.activation(q);
        let block_q = lambda.block(q);
        val += abs_row_matrix_vec(
            &net.weight_a(p, q).row_contraction(l),
            act_q.lambda_bound(),
            &block_q,
        ) + abs_row_matrix_vec(
            &net.weight_b(p, q).row_contraction(l),
            act_q.delta_bound(),
            &block_q,
        );
    }
    Ok(val)
}

/// The mu-stability quantity with rate parameters `alpha`, `beta`:
///
/// `L_p[l] (-d_p + alpha + {a~_pp^T M^l}+ . col_l(Mlam_p))
///  + |a~_pp^T M^l| Mlam_p L_p^[l]
///  + sum_{q != p} |a~_pq^T M^l| Mlam_q L_q
///  + (1 + beta) sum_q |b~_pq^T M^l| Mdel_q L_q`.
pub fn tbar_ell(
    net: &NetworkSpec,
    lambda: &LambdaVec,
    p: usize,
    l: usize,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    check_indices(net, lambda, p, l)?;
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::NegativeRate { alpha, beta });
    }
    let row_a = net.weight_a(p, p).row_contraction(l);
    let act_p = net.activation(p);

    let mut val = lambda.entry(p, l)
        * (-net.decay()[p] + alpha + pos_dot_col(&row_a, act_p.lambda_bound(), l));
    val += abs_row_matrix_vec(&row_a, act_p.lambda_bound(), &lambda.block_masked(p, l));
    for q in 0..net.n() {
        let act_q = net.activation(q);
        let block_q = lambda.block(q);
        if q != p {
            val += abs_row_matrix_vec(
                &net.weight_a(p, q).row_contraction(l),
                act_q.lambda_bound(),
                &block_q,
            );
        }
        val += (1.0 + beta)
            * abs_row_matrix_vec(
                &net.weight_b(p, q).row_contraction(l),
                act_q.delta_bound(),
                &block_q,
            );
    }
    Ok(val)
}

/// Evaluation of one criterion over every `(p, l)` pair.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    /// `values[p][l]`, n rows of 8.
    pub values: Vec<[f64; 8]>,
    /// True when every value is strictly negative.
    pub satisfied: bool,
    /// `(p, l, value)` of the largest value.
    pub worst: (usize, usize, f64),
    /// Distance of the worst value from zero.
    pub margin: f64,
}

impl CriterionReport {
    fn from_values(values: Vec<[f64; 8]>) -> Self {
        let mut worst = (0, 0, f64::NEG_INFINITY);
        for (p, row) in values.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                if *v > worst.2 {
                    worst = (p, l, *v);
                }
            }
        }
        CriterionReport {
            satisfied: worst.2 < 0.0,
            margin: worst.2.abs(),
            worst,
            values,
        }
    }
}

fn report_over<F: FnMut(usize, usize) -> Result<f64>>(
    n: usize,
    mut eval: F,
) -> Result<CriterionReport> {
    let mut values = Vec::with_capacity(n);
    for p in 0..n {
        let mut row = [0.0; 8];
        for (l, slot) in row.iter_mut().enumerate() {
            *slot = eval(p, l)?;
        }
        values.push(row);
    }
    Ok(CriterionReport::from_values(values))
}

/// Existence and uniqueness of the equilibrium via the sign-aware test.
pub fn check_unique_equilibrium(net: &NetworkSpec, lambda: &LambdaVec) -> Result<CriterionReport> {
    report_over(net.n(), |p, l| t_ell(net, lambda, p, l))
}

/// Same certificate via the sign-agnostic variant.
pub fn check_unique_equilibrium_simplified(
    net: &NetworkSpec,
    lambda: &LambdaVec,
) -> Result<CriterionReport> {
    report_over(net.n(), |p, l| t_ell_simplified(net, lambda, p, l))
}

/// Global mu-stability test at the rate's `(alpha, beta)`.
pub fn check_mu_stability(
    net: &NetworkSpec,
    lambda: &LambdaVec,
    rate: &RateFunction,
) -> Result<CriterionReport> {
    rate.check_compatible(net.delays())?;
    report_over(net.n(), |p, l| {
        tbar_ell(net, lambda, p, l, rate.alpha(), rate.beta())
    })
}

/// Lower bounds for the two controller gain families, plus the headroom
/// added when emitting concrete gains.
#[derive(Debug, Clone)]
pub struct GainBounds {
    /// `max(0, tbar(p,l) / L_p[l])` — proportional-gain floor.
    pub kappa_min: Vec<[f64; 8]>,
    /// `sum_q |b~^T M^l| Mdel_q L_q + |I_hat_p^l|` — constant-gain floor.
    pub kappa_hat_min: Vec<[f64; 8]>,
    /// Headroom added by the concrete-gain accessors.
    pub margin: f64,
}

impl GainBounds {
    pub fn concrete_kappa(&self) -> Vec<[f64; 8]> {
        self.kappa_min
            .iter()
            .map(|row| row.map(|v| v + self.margin))
            .collect()
    }

    pub fn concrete_kappa_hat(&self) -> Vec<[f64; 8]> {
        self.kappa_hat_min
            .iter()
            .map(|row| row.map(|v| v + self.margin))
            .collect()
    }
}

/// Gain floors that make the state-feedback controller drive the network
/// to `z_hat` in finite time. `kappa_min` is clamped at zero (gains are
/// positive; a negative bound means no proportional gain is needed).
pub fn gain_lower_bounds(
    net: &NetworkSpec,
    lambda: &LambdaVec,
    rate: &RateFunction,
    z_hat: &[crate::octonion::Octonion],
    margin: f64,
) -> Result<GainBounds> {
    let effective = net.effective_input(z_hat)?;
    let n = net.n();
    let mut kappa_min = Vec::with_capacity(n);
    let mut kappa_hat_min = Vec::with_capacity(n);
    for p in 0..n {
        let mut krow = [0.0; 8];
        let mut hrow = [0.0; 8];
        for l in 0..8 {
            let tbar = tbar_ell(net, lambda, p, l, rate.alpha(), rate.beta())?;
            krow[l] = (tbar / lambda.entry(p, l)).max(0.0);
            let mut delayed = 0.0;
            for q in 0..n {
                delayed += abs_row_matrix_vec(
                    &net.weight_b(p, q).row_contraction(l),
                    net.activation(q).delta_bound(),
                    &lambda.block(q),
                );
            }
            hrow[l] = delayed + effective[p].c[l].abs();
        }
        kappa_min.push(krow);
        kappa_hat_min.push(hrow);
    }
    Ok(GainBounds {
        kappa_min,
        kappa_hat_min,
        margin,
    })
}

/// Multiplicative per-coordinate search for a feasible lambda vector,
/// starting from all ones. Returns `None` after the budget (or on an
/// impossible diagonal); failure does not certify infeasibility.
pub fn search_lambda(
    net: &NetworkSpec,
    rate: &RateFunction,
    budget: usize,
) -> Result<Option<LambdaVec>> {
    assert!(budget >= 1, "budget must be at least 1");
    let n = net.n();
    let (alpha, beta) = (rate.alpha(), rate.beta());
    let mut lambda = LambdaVec::ones(n);

    let satisfied = |lam: &LambdaVec| -> Result<bool> {
        for p in 0..n {
            for l in 0..8 {
                if tbar_ell(net, lam, p, l, alpha, beta)? >= 0.0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };

    for _ in 0..budget {
        if satisfied(&lambda)? {
            return Ok(Some(lambda));
        }
        let mut raw = lambda.raw().to_vec();
        let mut changed = false;
        for p in 0..n {
            for l in 0..8 {
                let value = tbar_ell(net, &lambda, p, l, alpha, beta)?;
                if value < 0.0 {
                    continue;
                }
                // Coefficient of this lambda entry inside its own
                // inequality: decay/alpha/self terms plus the delayed
                // self-row's l-th column.
                let row_a = net.weight_a(p, p).row_contraction(l);
                let row_b = net.weight_b(p, p).row_contraction(l);
                let act_p = net.activation(p);
                let coeff = -net.decay()[p]
                    + alpha
                    + pos_dot_col(&row_a, act_p.lambda_bound(), l)
                    + (1.0 + beta) * {
                        let mut col = 0.0;
                        for i in 0..8 {
                            col += row_b[i].abs() * act_p.delta_bound()[i][l];
                        }
                        col
                    };
                if coeff >= 0.0 {
                    // This coordinate can never dominate its couplings.
                    return Ok(None);
                }
                let entry = lambda.entry(p, l);
                let rest = value - coeff * entry;
                let required = rest / -coeff;
                if required > entry {
                    raw[l * n + p] = required * 1.05;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        if raw.iter().any(|x| *x > 1e12) {
            return Ok(None);
        }
        lambda = LambdaVec::new(raw, n)?;
    }
    Ok(if satisfied(&lambda)? {
        Some(lambda)
    } else {
        None
    })
}
