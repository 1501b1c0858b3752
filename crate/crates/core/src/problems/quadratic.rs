//! Diagonal quadratic bowl with optional per-step gradient noise.

use super::{check_batch, check_dim, Batch, Problem};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, standard_normal};

/// `f(theta) = 0.5 * sum_i diag_i * theta_i^2`, minimized at the origin
/// with value 0.
///
/// The gradient is `diag_i * theta_i`, optionally plus i.i.d. Gaussian
/// noise with standard deviation `noise_std`. Noise is keyed by
/// `(noise_seed, step)`: evaluating the same step twice returns the same
/// bits, and [`Problem::eval`] and [`Problem::full_loss`] are always
/// noiseless.
#[derive(Debug, Clone)]
pub struct Quadratic {
    diag: Vec<f64>,
    x0: Vec<f64>,
    noise_std: f64,
    noise_seed: u64,
}

impl Quadratic {
    /// Noiseless bowl with curvature `diag` (all entries must be positive,
    /// so the Hessian is SPD) starting from all-ones.
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Config("quadratic needs at least one diagonal entry".into()));
        }
        for (i, &a) in diag.iter().enumerate() {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::Config(format!(
                    "quadratic diagonal must be positive and finite; entry {i} is {a}"
                )));
            }
        }
        let x0 = vec![1.0; diag.len()];
        Ok(Self {
            diag,
            x0,
            noise_std: 0.0,
            noise_seed: 0,
        })
    }

    /// Replaces the starting point (length must match the diagonal).
    pub fn with_x0(mut self, x0: Vec<f64>) -> Result<Self> {
        crate::error::ensure_same_len("x0", self.diag.len(), x0.len())?;
        crate::error::ensure_finite("x0", &x0)?;
        self.x0 = x0;
        Ok(self)
    }

    /// Adds Gaussian gradient noise with the given standard deviation,
    /// keyed by `seed` and the step index.
    pub fn with_noise(mut self, noise_std: f64, seed: u64) -> Result<Self> {
        if !(noise_std.is_finite() && noise_std >= 0.0) {
            return Err(Error::InvalidHyper {
                name: "noise_std",
                value: noise_std,
                constraint: "noise_std >= 0",
            });
        }
        self.noise_std = noise_std;
        self.noise_seed = seed;
        Ok(self)
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }
}

impl Problem for Quadratic {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn f_star(&self) -> f64 {
        0.0
    }

    fn n_examples(&self) -> usize {
        1
    }

    fn eval(&self, params: &[f64], batch: Batch) -> Result<f64> {
        check_dim(self.dim(), params)?;
        check_batch(1, &batch)?;
        Ok(params
            .iter()
            .zip(&self.diag)
            .map(|(&x, &a)| 0.5 * a * x * x)
            .sum())
    }

    fn eval_grad(&self, params: &[f64], batch: Batch) -> Result<(f64, Vec<f64>)> {
        let loss = self.eval(params, batch)?;
        let mut grad: Vec<f64> = params
            .iter()
            .zip(&self.diag)
            .map(|(&x, &a)| a * x)
            .collect();
        if self.noise_std > 0.0 {
            let mut rng = rng_from_seed(derive_seed(self.noise_seed, batch.step));
            for g in &mut grad {
                *g += self.noise_std * standard_normal(&mut rng);
            }
        }
        Ok((loss, grad))
    }

    fn initial_params(&self, _seed: u64) -> Vec<f64> {
        self.x0.clone()
    }
}
