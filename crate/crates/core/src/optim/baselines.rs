//! Baseline first-order optimizers: SGD with Nesterov momentum, Adagrad,
//! RMSprop, Adadelta, and Adamax.
//!
//! Each step function is pure and documents the exact recurrence it
//! implements, since several of these methods circulate in more than one
//! variant.

use crate::error::{ensure_finite, ensure_same_len, Error, Result};

/// Hyperparameters for the baseline optimizers, with the conventional
/// defaults from their source papers.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineHyper {
    /// Nesterov momentum coefficient.
    pub momentum: f64,
    /// RMSprop squared-gradient EMA decay.
    pub rmsprop_rho: f64,
    /// RMSprop denominator fuzz, added outside the square root.
    pub rmsprop_eps: f64,
    /// Adagrad denominator fuzz, added outside the square root.
    pub adagrad_eps: f64,
    /// Adadelta EMA decay for both accumulators.
    pub adadelta_rho: f64,
    /// Adadelta fuzz, added inside both square roots (Zeiler's placement).
    pub adadelta_eps: f64,
    /// Adamax first-moment decay.
    pub adamax_beta1: f64,
    /// Adamax infinity-norm decay.
    pub adamax_beta2: f64,
    /// Adamax denominator fuzz.
    pub adamax_eps: f64,
}

impl Default for BaselineHyper {
    fn default() -> Self {
        Self {
            momentum: 0.9,
            rmsprop_rho: 0.9,
            rmsprop_eps: 1e-8,
            adagrad_eps: 1e-8,
            adadelta_rho: 0.95,
            adadelta_eps: 1e-6,
            adamax_beta1: 0.9,
            adamax_beta2: 0.999,
            adamax_eps: 1e-8,
        }
    }
}

impl BaselineHyper {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 9] = [
            (
                "momentum",
                self.momentum,
                (0.0..1.0).contains(&self.momentum),
                "0 <= momentum < 1",
            ),
            (
                "rmsprop_rho",
                self.rmsprop_rho,
                (0.0..1.0).contains(&self.rmsprop_rho),
                "0 <= rho < 1",
            ),
            (
                "rmsprop_eps",
                self.rmsprop_eps,
                self.rmsprop_eps.is_finite() && self.rmsprop_eps > 0.0,
                "eps > 0",
            ),
            (
                "adagrad_eps",
                self.adagrad_eps,
                self.adagrad_eps.is_finite() && self.adagrad_eps > 0.0,
                "eps > 0",
            ),
            (
                "adadelta_rho",
                self.adadelta_rho,
                (0.0..1.0).contains(&self.adadelta_rho),
                "0 <= rho < 1",
            ),
            (
                "adadelta_eps",
                self.adadelta_eps,
                self.adadelta_eps.is_finite() && self.adadelta_eps > 0.0,
                "eps > 0",
            ),
            (
                "adamax_beta1",
                self.adamax_beta1,
                (0.0..1.0).contains(&self.adamax_beta1),
                "0 <= beta1 < 1",
            ),
            (
                "adamax_beta2",
                self.adamax_beta2,
                (0.0..1.0).contains(&self.adamax_beta2),
                "0 <= beta2 < 1",
            ),
            (
                "adamax_eps",
                self.adamax_eps,
                self.adamax_eps.is_finite() && self.adamax_eps > 0.0,
                "eps > 0",
            ),
        ];
        for (name, value, ok, constraint) in checks {
            if !ok {
                return Err(Error::InvalidHyper {
                    name,
                    value,
                    constraint,
                });
            }
        }
        Ok(())
    }
}

fn check_step_inputs(
    state_dim: usize,
    params: &[f64],
    grad: &[f64],
    alpha: f64,
) -> Result<()> {
    ensure_same_len("params vs state", state_dim, params.len())?;
    ensure_same_len("grad vs params", params.len(), grad.len())?;
    ensure_finite("grad", grad)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidHyper {
            name: "alpha_t",
            value: alpha,
            constraint: "alpha_t > 0",
        });
    }
    Ok(())
}

/// Velocity buffer for Nesterov momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct NesterovState {
    pub velocity: Vec<f64>,
}

impl NesterovState {
    pub fn new(dim: usize) -> Self {
        Self {
            velocity: vec![0.0; dim],
        }
    }
}

/// The parameter point where the gradient must be evaluated for
/// [`nesterov_step`]: the lookahead `theta + mu * v`.
pub fn nesterov_lookahead(state: &NesterovState, params: &[f64], mu: f64) -> Result<Vec<f64>> {
    ensure_same_len("params vs state", state.velocity.len(), params.len())?;
    Ok(params
        .iter()
        .zip(&state.velocity)
        .map(|(&p, &v)| p + mu * v)
        .collect())
}

/// SGD with Nesterov momentum (Sutskever et al., ICML 2013 formulation):
///
/// ```text
/// v_t     = mu * v_{t-1} - alpha_t * grad f(theta_{t-1} + mu * v_{t-1})
/// theta_t = theta_{t-1} + v_t
/// ```
///
/// `grad` must be evaluated at the lookahead point returned by
/// [`nesterov_lookahead`].
pub fn nesterov_step(
    state: &NesterovState,
    params: &[f64],
    grad: &[f64],
    mu: f64,
    alpha_t: f64,
) -> Result<(Vec<f64>, NesterovState)> {
    check_step_inputs(state.velocity.len(), params, grad, alpha_t)?;
    let mut velocity = Vec::with_capacity(params.len());
    let mut next = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let v = mu * state.velocity[i] - alpha_t * grad[i];
        next.push(params[i] + v);
        velocity.push(v);
    }
    Ok((next, NesterovState { velocity }))
}

/// Squared-gradient accumulator for Adagrad.
#[derive(Debug, Clone, PartialEq)]
pub struct AdagradState {
    pub accum: Vec<f64>,
}

impl AdagradState {
    pub fn new(dim: usize) -> Self {
        Self {
            accum: vec![0.0; dim],
        }
    }
}

/// Adagrad (Duchi et al., JMLR 2011):
///
/// ```text
/// acc_t   = acc_{t-1} + g_t^2
/// theta_t = theta_{t-1} - alpha_t * g_t / (sqrt(acc_t) + eps)
/// ```
///
/// The accumulator never decreases, so effective rates shrink monotonically.
pub fn adagrad_step(
    state: &AdagradState,
    params: &[f64],
    grad: &[f64],
    alpha_t: f64,
    eps: f64,
) -> Result<(Vec<f64>, AdagradState)> {
    check_step_inputs(state.accum.len(), params, grad, alpha_t)?;
    let mut accum = Vec::with_capacity(params.len());
    let mut next = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let g = grad[i];
        let a = state.accum[i] + g * g;
        next.push(params[i] - alpha_t * g / (a.sqrt() + eps));
        accum.push(a);
    }
    Ok((next, AdagradState { accum }))
}

/// Squared-gradient EMA for RMSprop.
#[derive(Debug, Clone, PartialEq)]
pub struct RmspropState {
    pub sq_avg: Vec<f64>,
}

impl RmspropState {
    pub fn new(dim: usize) -> Self {
        Self {
            sq_avg: vec![0.0; dim],
        }
    }
}

/// RMSprop (Tieleman & Hinton, lecture 6.5 of the Coursera course):
///
/// ```text
/// s_t     = rho * s_{t-1} + (1 - rho) * g_t^2
/// theta_t = theta_{t-1} - alpha_t * g_t / (sqrt(s_t) + eps)
/// ```
///
/// `eps` is added outside the square root.
pub fn rmsprop_step(
    state: &RmspropState,
    params: &[f64],
    grad: &[f64],
    alpha_t: f64,
    rho: f64,
    eps: f64,
) -> Result<(Vec<f64>, RmspropState)> {
    check_step_inputs(state.sq_avg.len(), params, grad, alpha_t)?;
    let mut sq_avg = Vec::with_capacity(params.len());
    let mut next = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let g = grad[i];
        let s = rho * state.sq_avg[i] + (1.0 - rho) * g * g;
        next.push(params[i] - alpha_t * g / (s.sqrt() + eps));
        sq_avg.push(s);
    }
    Ok((next, RmspropState { sq_avg }))
}

/// Paired accumulators for Adadelta.
#[derive(Debug, Clone, PartialEq)]
pub struct AdadeltaState {
    pub sq_grad_avg: Vec<f64>,
    pub sq_update_avg: Vec<f64>,
}

impl AdadeltaState {
    pub fn new(dim: usize) -> Self {
        Self {
            sq_grad_avg: vec![0.0; dim],
            sq_update_avg: vec![0.0; dim],
        }
    }
}

/// Adadelta (Zeiler, arXiv:1212.5701):
///
/// ```text
/// Eg_t    = rho * Eg_{t-1} + (1 - rho) * g_t^2
/// delta_t = - sqrt(Eu_{t-1} + eps) / sqrt(Eg_t + eps) * g_t
/// Eu_t    = rho * Eu_{t-1} + (1 - rho) * delta_t^2
/// theta_t = theta_{t-1} + alpha_t * delta_t
/// ```
///
/// `eps` is added inside both square roots, per the paper. `alpha_t` is a
/// plain multiplier on the self-scaled update; the method's prescribed
/// default is 1.
pub fn adadelta_step(
    state: &AdadeltaState,
    params: &[f64],
    grad: &[f64],
    alpha_t: f64,
    rho: f64,
    eps: f64,
) -> Result<(Vec<f64>, AdadeltaState)> {
    check_step_inputs(state.sq_grad_avg.len(), params, grad, alpha_t)?;
    let mut sq_grad_avg = Vec::with_capacity(params.len());
    let mut sq_update_avg = Vec::with_capacity(params.len());
    let mut next = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let g = grad[i];
        let eg = rho * state.sq_grad_avg[i] + (1.0 - rho) * g * g;
        let delta = -((state.sq_update_avg[i] + eps).sqrt() / (eg + eps).sqrt()) * g;
        let eu = rho * state.sq_update_avg[i] + (1.0 - rho) * delta * delta;
        next.push(params[i] + alpha_t * delta);
        sq_grad_avg.push(eg);
        sq_update_avg.push(eu);
    }
    Ok((
        next,
        AdadeltaState {
            sq_grad_avg,
            sq_update_avg,
        },
    ))
}

/// First moment and infinity-norm buffers for Adamax.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamaxState {
    pub t: u64,
    pub m: Vec<f64>,
    pub u: Vec<f64>,
}

impl AdamaxState {
    pub fn new(dim: usize) -> Self {
        Self {
            t: 0,
            m: vec![0.0; dim],
            u: vec![0.0; dim],
        }
    }
}

/// Adamax (Kingma & Ba, ICLR 2015, section 7):
///
/// ```text
/// m_t     = beta1 * m_{t-1} + (1 - beta1) * g_t
/// u_t     = max(beta2 * u_{t-1}, |g_t|)
/// theta_t = theta_{t-1} - (alpha_t / (1 - beta1^t)) * m_t / (u_t + eps)
/// ```
///
/// `eps` keeps the all-zero-gradient start a fixed point; the paper omits
/// it because `u_t` is positive once any gradient is nonzero.
pub fn adamax_step(
    state: &AdamaxState,
    params: &[f64],
    grad: &[f64],
    alpha_t: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
) -> Result<(Vec<f64>, AdamaxState)> {
    check_step_inputs(state.m.len(), params, grad, alpha_t)?;
    let t = state.t + 1;
    let scale = alpha_t / (1.0 - super::adam::pow_u64(beta1, t));
    let mut m = Vec::with_capacity(params.len());
    let mut u = Vec::with_capacity(params.len());
    let mut next = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let g = grad[i];
        let mi = beta1 * state.m[i] + (1.0 - beta1) * g;
        let ui = (beta2 * state.u[i]).max(g.abs());
        next.push(params[i] - scale * mi / (ui + eps));
        m.push(mi);
        u.push(ui);
    }
    Ok((next, AdamaxState { t, m, u }))
}
