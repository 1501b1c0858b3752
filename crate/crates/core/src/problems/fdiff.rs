//! Central finite difference gradients, for checking analytic ones.

use super::{Batch, Problem};
use crate::error::Result;

/// Default relative step size.
pub const FD_H_DEFAULT: f64 = 1e-5;

/// Central difference gradient of `problem.eval` at `params` over a fixed
/// batch.
///
/// Coordinate `i` is probed with step `h * (1 + |params_i|)`, so the step
/// stays proportionate for parameters far from zero. The same `batch`
/// (including its step index) is used for every probe, so stochastic
/// problems are differentiated at a frozen noise draw; note that
/// [`Problem::eval`] is noiseless by contract.
pub fn finite_diff_grad(
    problem: &dyn Problem,
    params: &[f64],
    batch: Batch,
    h: f64,
) -> Result<Vec<f64>> {
    let mut probe = params.to_vec();
    let mut grad = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let hi = h * (1.0 + params[i].abs());
        probe[i] = params[i] + hi;
        let f_plus = problem.eval(&probe, batch)?;
        probe[i] = params[i] - hi;
        let f_minus = problem.eval(&probe, batch)?;
        probe[i] = params[i];
        grad.push((f_plus - f_minus) / (2.0 * hi));
    }
    Ok(grad)
}
