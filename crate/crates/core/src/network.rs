//! The delayed octonion-valued network
//! `w_p' = -d_p w_p + sum_q a_pq f_q(w_q) + sum_q b_pq g_q(w_q(t - tau_pq)) + I_p`
//! and its decomposition into `8n` coupled real equations.
//!
//! Flat state vectors use neuron-major layout: entry `p*8 + l` is component
//! `l` of neuron `p`. The interleaved component-major layout (used by the
//! lambda vector and published state vectorizations) is available through
//! [`component_major_vector`].

use crate::activation::ActivationSpec;
use crate::delay::DelayProfile;
use crate::error::{Error, Result};
use crate::octonion::Octonion;

#[derive(Debug, Clone)]
pub struct NetworkSpec {
    d: Vec<f64>,
    a: Vec<Vec<Octonion>>,
    b: Vec<Vec<Octonion>>,
    input: Vec<Octonion>,
    activations: Vec<ActivationSpec>,
    delays: DelayProfile,
}

impl NetworkSpec {
    pub fn new(
        d: Vec<f64>,
        a: Vec<Vec<Octonion>>,
        b: Vec<Vec<Octonion>>,
        input: Vec<Octonion>,
        activations: Vec<ActivationSpec>,
        delays: DelayProfile,
    ) -> Result<Self> {
        let n = d.len();
        // The model assumes d_p > 0; d_p = 0 is accepted so the integrator
        // can host raw delay-equation fixtures, and simply fails the
        // criteria.
        if d.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidConfig(
                "decay rates must be finite and >= 0".into(),
            ));
        }
        for (name, m) in [("a", &a), ("b", &b)] {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::DimensionMismatch(format!(
                    "weight matrix {name} must be {n}x{n}"
                )));
            }
            if m.iter().flatten().any(|w| !w.is_finite()) {
                return Err(Error::InvalidConfig("weights must be finite".into()));
            }
        }
        if input.len() != n || activations.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "inputs and activations must have length {n}"
            )));
        }
        if input.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidConfig("inputs must be finite".into()));
        }
        if delays.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "delay profile is for {} neurons, network has {n}",
                delays.n()
            )));
        }
        Ok(NetworkSpec {
            d,
            a,
            b,
            input,
            activations,
            delays,
        })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn decay(&self) -> &[f64] {
        &self.d
    }

    pub fn weight_a(&self, p: usize, q: usize) -> &Octonion {
        &self.a[p][q]
    }

    pub fn weight_b(&self, p: usize, q: usize) -> &Octonion {
        &self.b[p][q]
    }

    pub fn input(&self) -> &[Octonion] {
        &self.input
    }

    pub fn activation(&self, q: usize) -> &ActivationSpec {
        &self.activations[q]
    }

    pub fn delays(&self) -> &DelayProfile {
        &self.delays
    }

    /// A copy with the given delay profile.
    pub fn with_delays(&self, delays: DelayProfile) -> Result<Self> {
        NetworkSpec::new(
            self.d.clone(),
            self.a.clone(),
            self.b.clone(),
            self.input.clone(),
            self.activations.clone(),
            delays,
        )
    }

    /// Right side of the decomposed real system. `w` is the flat state
    /// (length `8n`), `w_delayed[p][q]` the state of neuron `q` sampled at
    /// `t - tau_pq(t)`, `u` an optional flat control vector. Component
    /// `(p, l)` of the result is
    /// `-d_p w_p^l + sum_q a~_pq^T M^l f~_q + sum_q b~_pq^T M^l g~_q(delayed) + I_p^l + u_p^l`.
    pub fn rhs_real(
        &self,
        w: &[f64],
        w_delayed: &[Vec<[f64; 8]>],
        u: Option<&[f64]>,
    ) -> Result<Vec<f64>> {
        let n = self.n();
        if w.len() != 8 * n {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, expected {}",
                w.len(),
                8 * n
            )));
        }
        if w_delayed.len() != n || w_delayed.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(
                "delayed states must be n x n".into(),
            ));
        }
        if let Some(u) = u {
            if u.len() != 8 * n {
                return Err(Error::DimensionMismatch(format!(
                    "control has length {}, expected {}",
                    u.len(),
                    8 * n
                )));
            }
        }
        let mut out = vec![0.0; 8 * n];
        self.rhs_real_into(w, w_delayed, u, &mut out);
        Ok(out)
    }

    /// Unchecked core of [`rhs_real`]; `out` must have length `8n`.
    pub(crate) fn rhs_real_into(
        &self,
        w: &[f64],
        w_delayed: &[Vec<[f64; 8]>],
        u: Option<&[f64]>,
        out: &mut [f64],
    ) {
        let n = self.n();
        let f_vals: Vec<[f64; 8]> = (0..n)
            .map(|q| {
                let wq: [f64; 8] = std::array::from_fn(|l| w[q * 8 + l]);
                self.activations[q].eval_f(&wq)
            })
            .collect();
        for p in 0..n {
            // g is evaluated per channel: each (p, q) pair sees its own lag.
            let g_vals: Vec<[f64; 8]> = (0..n)
                .map(|q| self.activations[q].eval_g(&w_delayed[p][q]))
                .collect();
            for l in 0..8 {
                let mut acc = -self.d[p] * w[p * 8 + l] + self.input[p].c[l];
                for q in 0..n {
                    let row_a = self.a[p][q].row_contraction(l);
                    let row_b = self.b[p][q].row_contraction(l);
                    let mut dot = 0.0;
                    for j in 0..8 {
                        dot += row_a[j] * f_vals[q][j] + row_b[j] * g_vals[q][j];
                    }
                    acc += dot;
                }
                if let Some(u) = u {
                    acc += u[p * 8 + l];
                }
                out[p * 8 + l] = acc;
            }
        }
    }

    /// Direct octonion-form evaluation of the same right side using table
    /// products; the independent cross-check route for [`rhs_real`].
    pub fn rhs_octonion(
        &self,
        w: &[Octonion],
        w_delayed: &[Vec<Octonion>],
        u: Option<&[Octonion]>,
    ) -> Result<Vec<Octonion>> {
        let n = self.n();
        if w.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "state has {} neurons, expected {n}",
                w.len()
            )));
        }
        if w_delayed.len() != n || w_delayed.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(
                "delayed states must be n x n".into(),
            ));
        }
        if let Some(u) = u {
            if u.len() != n {
                return Err(Error::DimensionMismatch(
                    "control must have n entries".into(),
                ));
            }
        }
        let f_vals: Vec<Octonion> = (0..n)
            .map(|q| Octonion::new(self.activations[q].eval_f(&w[q].c)))
            .collect();
        let mut out = Vec::with_capacity(n);
        for p in 0..n {
            let mut acc = w[p].scale(-self.d[p]) + self.input[p];
            for q in 0..n {
                let g_q = Octonion::new(self.activations[q].eval_g(&w_delayed[p][q].c));
                acc = acc + self.a[p][q].mul_matrix_form(&f_vals[q]) + self.b[p][q] * g_q;
            }
            if let Some(u) = u {
                acc = acc + u[p];
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// The effective input of the system shifted to the point `z_hat`:
    /// `I_p^l - d_p z_p^l + sum_q [a~^T M^l f~_q(z_q) + b~^T M^l g~_q(z_q)]`.
    /// Zero exactly when `z_hat` is an equilibrium.
    pub fn effective_input(&self, z_hat: &[Octonion]) -> Result<Vec<Octonion>> {
        let n = self.n();
        if z_hat.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "target has {} neurons, expected {n}",
                z_hat.len()
            )));
        }
        let mut out = Vec::with_capacity(n);
        for p in 0..n {
            let mut acc = self.input[p] + z_hat[p].scale(-self.d[p]);
            for q in 0..n {
                let f_q = Octonion::new(self.activations[q].eval_f(&z_hat[q].c));
                let g_q = Octonion::new(self.activations[q].eval_g(&z_hat[q].c));
                acc = acc + self.a[p][q] * f_q + self.b[p][q] * g_q;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Flat neuron-major vector of `n` octonion states.
pub fn flatten_states(states: &[Octonion]) -> Vec<f64> {
    let mut out = Vec::with_capacity(states.len() * 8);
    for s in states {
        out.extend_from_slice(&s.c);
    }
    out
}

/// Inverse of [`flatten_states`].
pub fn unflatten_states(flat: &[f64]) -> Vec<Octonion> {
    assert!(
        flat.len().is_multiple_of(8),
        "flat state length must be a multiple of 8"
    );
    flat.chunks_exact(8)
        .map(|c| Octonion::new(std::array::from_fn(|l| c[l])))
        .collect()
}

/// The interleaved component-major vectorization
/// `(w_1^0, .., w_n^0, w_1^1, .., w_n^1, ..)` used by the lambda weights
/// and by published state listings.
pub fn component_major_vector(states: &[Octonion]) -> Vec<f64> {
    let n = states.len();
    let mut out = vec![0.0; 8 * n];
    for (p, s) in states.iter().enumerate() {
        for l in 0..8 {
            out[l * n + p] = s.c[l];
        }
    }
    out
}

/// Inverse of [`component_major_vector`] for `n` neurons.
pub fn states_from_component_major(v: &[f64], n: usize) -> Result<Vec<Octonion>> {
    if v.len() != 8 * n {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {}, expected {}",
            v.len(),
            8 * n
        )));
    }
    Ok((0..n)
        .map(|p| Octonion::new(std::array::from_fn(|l| v[l * n + p])))
        .collect())
}
