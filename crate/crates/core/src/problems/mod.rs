//! Desk-scale benchmark problems with analytic gradients.
//!
//! A [`Problem`] exposes a minibatch objective and its gradient as pure
//! functions of `(params, batch)`. Any randomness (gradient noise) is keyed
//! by the batch's step index, so re-evaluating the same arguments gives the
//! same bits back.

mod blobs;
mod fdiff;
mod minibatch;
mod mlp;
mod quadratic;
mod rosenbrock;

pub use blobs::{make_blobs, Dataset};
pub use fdiff::{finite_diff_grad, FD_H_DEFAULT};
pub use minibatch::{minibatch_schedule, steps_per_epoch};
pub use mlp::{softmax_xent, Activation, MlpArch, MlpProblem};
pub use quadratic::Quadratic;
pub use rosenbrock::Rosenbrock;

use crate::error::{Error, Result};

/// A minibatch: example indices plus the 1-based step counter that keys
/// any per-step randomness.
#[derive(Debug, Clone, Copy)]
pub struct Batch<'a> {
    pub indices: &'a [usize],
    pub step: u64,
}

impl<'a> Batch<'a> {
    pub fn new(indices: &'a [usize], step: u64) -> Self {
        Self { indices, step }
    }
}

/// An optimization problem over flat `f64` parameters.
///
/// Implementations are deterministic: equal `(params, batch)` arguments
/// produce bitwise-equal results.
pub trait Problem: Send + Sync {
    /// Number of parameters.
    fn dim(&self) -> usize;

    /// Known lower bound on the objective (0 for all problems here).
    fn f_star(&self) -> f64;

    /// Number of training examples (1 for analytic test functions).
    fn n_examples(&self) -> usize;

    /// Minibatch objective value. Never includes gradient noise.
    fn eval(&self, params: &[f64], batch: Batch) -> Result<f64>;

    /// Minibatch objective value and gradient in one pass.
    fn eval_grad(&self, params: &[f64], batch: Batch) -> Result<(f64, Vec<f64>)>;

    /// Objective over the full example set, without noise.
    fn full_loss(&self, params: &[f64]) -> Result<f64> {
        let all: Vec<usize> = (0..self.n_examples()).collect();
        self.eval(params, Batch::new(&all, 0))
    }

    /// Deterministic starting point. Problems with a conventional fixed
    /// start ignore `seed`; learned models use it for weight init.
    fn initial_params(&self, seed: u64) -> Vec<f64>;
}

pub(crate) fn check_batch(n: usize, batch: &Batch) -> Result<()> {
    if batch.indices.is_empty() {
        return Err(Error::Data("empty minibatch".into()));
    }
    for &i in batch.indices {
        if i >= n {
            return Err(Error::Data(format!(
                "batch index {i} out of range for {n} examples"
            )));
        }
    }
    Ok(())
}

pub(crate) fn check_dim(expected: usize, params: &[f64]) -> Result<()> {
    crate::error::ensure_same_len("params", expected, params.len())?;
    crate::error::ensure_finite("params", params)
}
