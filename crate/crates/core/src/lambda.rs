//! The positive weight vector of the generalized infinity norm, stored in
//! the interleaved component-major order
//! `(xi_1..xi_n, phi_1..phi_n, ..., rho_1..rho_n)`: entry `l*n + p` weighs
//! component `l` of neuron `p`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaVec {
    raw: Vec<f64>,
    n: usize,
}

impl LambdaVec {
    /// `raw` has length `8n`, every entry strictly positive and finite.
    pub fn new(raw: Vec<f64>, n: usize) -> Result<Self> {
        if raw.len() != 8 * n {
            return Err(Error::DimensionMismatch(format!(
                "lambda vector has length {}, expected {}",
                raw.len(),
                8 * n
            )));
        }
        if raw.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::NonPositiveLambda);
        }
        Ok(LambdaVec { raw, n })
    }

    /// All entries equal to `value`.
    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; 8 * n], n)
    }

    pub fn ones(n: usize) -> Self {
        Self::uniform(n, 1.0).expect("ones is positive")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    /// Entry `l` of the block of neuron `p` (0-based).
    pub fn entry(&self, p: usize, l: usize) -> f64 {
        assert!(p < self.n && l < 8, "lambda index ({p},{l}) out of range");
        self.raw[l * self.n + p]
    }

    /// The per-neuron block `(xi_p, phi_p, eta_p, zeta_p, sigma_p, psi_p, nu_p, rho_p)`.
    pub fn block(&self, p: usize) -> [f64; 8] {
        std::array::from_fn(|l| self.entry(p, l))
    }

    /// The block of neuron `p` with entry `l` zeroed.
    pub fn block_masked(&self, p: usize, l: usize) -> [f64; 8] {
        let mut b = self.block(p);
        b[l] = 0.0;
        b
    }

    /// A copy with every entry multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.raw.iter().map(|x| x * factor).collect(), self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_blocks() {
        let lam = LambdaVec::uniform(2, 0.2).unwrap();
        assert_eq!(lam.block(0), [0.2; 8]);
        let masked = lam.block_masked(0, 0);
        assert_eq!(masked[0], 0.0);
        assert_eq!(&masked[1..], &[0.2; 7]);
    }

    #[test]
    fn interleaved_ordering() {
        // raw = (xi1, xi2, phi1, phi2, ...) for n = 2
        let mut raw = Vec::new();
        for l in 0..8 {
            raw.push(10.0 * l as f64 + 1.0); // neuron 1
            raw.push(10.0 * l as f64 + 2.0); // neuron 2
        }
        let lam = LambdaVec::new(raw, 2).unwrap();
        assert_eq!(lam.entry(0, 3), 31.0);
        assert_eq!(lam.entry(1, 3), 32.0);
        assert_eq!(
            lam.block(1),
            [2.0, 12.0, 22.0, 32.0, 42.0, 52.0, 62.0, 72.0]
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LambdaVec::new(vec![1.0; 15], 2).is_err());
        assert!(LambdaVec::new(vec![0.0; 16], 2).is_err());
        assert!(LambdaVec::new(vec![-1.0; 16], 2).is_err());
    }
}
