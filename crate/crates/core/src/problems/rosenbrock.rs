//! The two-dimensional Rosenbrock valley.

use super::{check_batch, check_dim, Batch, Problem};
use crate::error::Result;

/// `f(x, y) = (1 - x)^2 + 100 (y - x^2)^2`, minimized at `(1, 1)` with
/// value 0, started from the classic `(-1.2, 1.0)`.
///
/// Gradient:
///
/// ```text
/// df/dx = -2 (1 - x) - 400 x (y - x^2)
/// df/dy = 200 (y - x^2)
/// ```
#[derive(Debug, Clone, Default)]
pub struct Rosenbrock;

impl Rosenbrock {
    pub fn new() -> Self {
        Self
    }
}

impl Problem for Rosenbrock {
    fn dim(&self) -> usize {
        2
    }

    fn f_star(&self) -> f64 {
        0.0
    }

    fn n_examples(&self) -> usize {
        1
    }

    fn eval(&self, params: &[f64], batch: Batch) -> Result<f64> {
        check_dim(2, params)?;
        check_batch(1, &batch)?;
        let (x, y) = (params[0], params[1]);
        let a = 1.0 - x;
        let b = y - x * x;
        Ok(a * a + 100.0 * b * b)
    }

    fn eval_grad(&self, params: &[f64], batch: Batch) -> Result<(f64, Vec<f64>)> {
        let loss = self.eval(params, batch)?;
        let (x, y) = (params[0], params[1]);
        let b = y - x * x;
        let gx = -2.0 * (1.0 - x) - 400.0 * x * b;
        let gy = 200.0 * b;
        Ok((loss, vec![gx, gy]))
    }

    fn initial_params(&self, _seed: u64) -> Vec<f64> {
        vec![-1.2, 1.0]
    }
}
