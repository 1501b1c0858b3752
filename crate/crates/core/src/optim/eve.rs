//! Feedback-scaled Adam: the learning rate is divided by a smoothed,
//! clipped measure of relative objective change.
//!
//! Per step `t` with objective value `f_t` and known lower bound `f_star`:
//!
//! ```text
//! t = 1:  d_tilde_1 = 1
//! t > 1:  d_t       = |f_t - f_{t-1}| / (min(f_t, f_{t-1}) - f_star)
//!         d_hat_t   = clip(d_t, [1/c, c])
//!         d_tilde_t = beta3 * d_tilde_{t-1} + (1 - beta3) * d_hat_t
//! update: theta_t = theta_{t-1} - (alpha1 / d_tilde_t) * m_hat / (sqrt(v_hat) + eps)
//! ```
//!
//! The moment estimates `m_hat`, `v_hat` are plain Adam ones. `d_t` is
//! scale invariant: multiplying the objective by any positive constant
//! leaves it unchanged (exactly so, in floating point, for power-of-two
//! constants).

use super::adam::{adam_step, ema_update, AdamState, EveHyper};
use crate::error::{ensure_finite_scalar, Result};

/// Denominators at or below this floor are treated as degenerate.
pub const DENOM_FLOOR: f64 = 1e-12;

/// Adam moments plus the feedback coefficient trackers.
#[derive(Debug, Clone, PartialEq)]
pub struct EveState {
    pub adam: AdamState,
    /// Smoothed feedback coefficient `d_tilde`; 1 before any feedback.
    pub d_tilde: f64,
    /// Objective value from the previous step; meaningless until `started`.
    pub f_prev: f64,
    /// Whether at least one step has been taken.
    pub started: bool,
}

impl EveState {
    /// Fresh state for `dim` parameters; `d_tilde` starts at 1.
    pub fn new(dim: usize) -> Self {
        Self {
            adam: AdamState::new(dim),
            d_tilde: 1.0,
            f_prev: 0.0,
            started: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.adam.dim()
    }
}

/// Per-step feedback quantities, exposed for tracing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveCoeffs {
    /// Raw relative change `d_t` (1 on the first step by convention).
    pub d: f64,
    /// Clipped change `d_hat_t`.
    pub d_hat: f64,
    /// Smoothed coefficient `d_tilde_t` actually used in the update.
    pub d_tilde: f64,
    /// Effective learning rate `alpha1 / d_tilde_t`.
    pub alpha: f64,
}

/// Raw relative objective change `|f_t - f_prev| / (min(f_t, f_prev) - f_star)`.
///
/// Returns `+inf` when the denominator is at or below [`DENOM_FLOOR`]
/// (objective at or indistinguishably close to its lower bound); callers
/// clip the result into `[1/c, c]`, which maps the degenerate case to `c`.
pub fn eve_d(f_t: f64, f_prev: f64, f_star: f64) -> Result<f64> {
    ensure_finite_scalar("f_t", f_t)?;
    ensure_finite_scalar("f_prev", f_prev)?;
    ensure_finite_scalar("f_star", f_star)?;
    let denom = f_t.min(f_prev) - f_star;
    if denom <= DENOM_FLOOR {
        return Ok(f64::INFINITY);
    }
    Ok((f_t - f_prev).abs() / denom)
}

/// Clips `d` into `[1/c, c]`. `+inf` maps to `c`; NaN is rejected upstream.
pub fn clip_d(d: f64, c: f64) -> f64 {
    d.max(1.0 / c).min(c)
}

/// Full outcome of one feedback-scaled step.
#[derive(Debug, Clone, PartialEq)]
pub struct EveStepOutput {
    pub params: Vec<f64>,
    pub state: EveState,
    pub coeffs: EveCoeffs,
}

/// One feedback-scaled Adam step.
///
/// `f_t` is the minibatch objective value at the pre-step parameters (the
/// same point where `grad` was evaluated). With `force_d1` the coefficient
/// pipeline is pinned to `d = d_hat = d_tilde = 1`, which makes the update
/// bit-identical to plain Adam at `alpha1`.
pub fn eve_step_detailed(
    hyper: &EveHyper,
    state: &EveState,
    params: &[f64],
    grad: &[f64],
    f_t: f64,
    force_d1: bool,
) -> Result<EveStepOutput> {
    ensure_finite_scalar("f_t", f_t)?;
    let (d, d_hat, d_tilde) = if force_d1 || !state.started {
        // First step has no previous objective; coefficients report 1.
        (1.0, 1.0, 1.0)
    } else {
        let d = eve_d(f_t, state.f_prev, hyper.f_star)?;
        let d_hat = clip_d(d, hyper.c);
        // The average of values in [1/c, c] stays in [1/c, c] in exact
        // arithmetic; re-clip so boundary rounding cannot escape by an ulp.
        let d_tilde = clip_d(ema_update(state.d_tilde, d_hat, hyper.beta3), hyper.c);
        (d, d_hat, d_tilde)
    };
    let alpha = hyper.alpha1 / d_tilde;
    let (next_params, adam) = adam_step(hyper, &state.adam, params, grad, alpha)?;
    Ok(EveStepOutput {
        params: next_params,
        state: EveState {
            adam,
            d_tilde,
            f_prev: f_t,
            started: true,
        },
        coeffs: EveCoeffs {
            d,
            d_hat,
            d_tilde,
            alpha,
        },
    })
}

/// One feedback-scaled Adam step; see [`eve_step_detailed`].
pub fn eve_step(
    hyper: &EveHyper,
    state: &EveState,
    params: &[f64],
    grad: &[f64],
    f_t: f64,
) -> Result<(Vec<f64>, EveState)> {
    let out = eve_step_detailed(hyper, state, params, grad, f_t, false)?;
    Ok((out.params, out.state))
}

/// Convenience check used by tests and the harness: the invariant
/// `1/c <= d_tilde <= c` (with `d_tilde = 1` allowed before feedback).
pub fn d_tilde_in_bounds(d_tilde: f64, c: f64) -> bool {
    let lo = 1.0 / c;
    (lo..=c).contains(&d_tilde)
}
