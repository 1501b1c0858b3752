//! Adam moment estimation and update step.
//!
//! Reference recurrences (Kingma & Ba, "Adam: A Method for Stochastic
//! Optimization", ICLR 2015), evaluated per coordinate with step index `t`
//! starting at 1:
//!
//! ```text
//! m_t = beta1 * m_{t-1} + (1 - beta1) * g_t
//! v_t = beta2 * v_{t-1} + (1 - beta2) * g_t^2
//! m_hat = m_t / (1 - beta1^t)
//! v_hat = v_t / (1 - beta2^t)
//! theta_t = theta_{t-1} - alpha_t * m_hat / (sqrt(v_hat) + eps)
//! ```
//!
//! `eps` sits outside the square root. All functions are pure: states are
//! taken by reference and new states are returned.

use crate::error::{ensure_finite, ensure_finite_scalar, ensure_same_len, Error, Result};

/// Hyperparameters for Adam and its feedback-scaled variant.
///
/// `beta3`, `c`, and `f_star` only affect the feedback coefficient pipeline
/// in [`crate::optim::eve`]; plain Adam ignores them.
#[derive(Debug, Clone, PartialEq)]
pub struct EveHyper {
    /// Base learning rate `alpha1`.
    pub alpha1: f64,
    /// First-moment EMA decay.
    pub beta1: f64,
    /// Second-moment EMA decay.
    pub beta2: f64,
    /// Feedback coefficient EMA decay.
    pub beta3: f64,
    /// Clipping constant; the smoothed coefficient stays in `[1/c, c]`.
    pub c: f64,
    /// Denominator fuzz added outside the square root.
    pub eps: f64,
    /// Known lower bound on the objective (0 for non-negative losses).
    pub f_star: f64,
}

impl Default for EveHyper {
    fn default() -> Self {
        Self {
            alpha1: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            beta3: 0.999,
            c: 10.0,
            eps: 1e-8,
            f_star: 0.0,
        }
    }
}

impl EveHyper {
    pub fn with_alpha1(mut self, alpha1: f64) -> Self {
        self.alpha1 = alpha1;
        self
    }

    pub fn with_beta1(mut self, beta1: f64) -> Self {
        self.beta1 = beta1;
        self
    }

    pub fn with_beta2(mut self, beta2: f64) -> Self {
        self.beta2 = beta2;
        self
    }

    pub fn with_beta3(mut self, beta3: f64) -> Self {
        self.beta3 = beta3;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = f_star;
        self
    }

    /// Checks every field against its documented range.
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 7] = [
            (
                "alpha1",
                self.alpha1,
                self.alpha1.is_finite() && self.alpha1 > 0.0,
                "alpha1 > 0",
            ),
            (
                "beta1",
                self.beta1,
                (0.0..1.0).contains(&self.beta1),
                "0 <= beta1 < 1",
            ),
            (
                "beta2",
                self.beta2,
                (0.0..1.0).contains(&self.beta2),
                "0 <= beta2 < 1",
            ),
            (
                "beta3",
                self.beta3,
                (0.0..1.0).contains(&self.beta3),
                "0 <= beta3 < 1",
            ),
            ("c", self.c, self.c.is_finite() && self.c > 1.0, "c > 1"),
            (
                "eps",
                self.eps,
                self.eps.is_finite() && self.eps >= 0.0,
                "eps >= 0",
            ),
            ("f_star", self.f_star, self.f_star.is_finite(), "finite"),
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

/// Adam moment buffers plus the number of completed steps.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    /// Completed steps; bias correction for the next step uses `t + 1`.
    pub t: u64,
    /// First-moment EMA.
    pub m: Vec<f64>,
    /// Second-moment EMA.
    pub v: Vec<f64>,
}

impl AdamState {
    /// Fresh state with zero moments for `dim` parameters.
    pub fn new(dim: usize) -> Self {
        Self {
            t: 0,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }
}

/// One exponential moving average update: `beta * prev + (1 - beta) * x`.
pub fn ema_update(prev: f64, x: f64, beta: f64) -> f64 {
    beta * prev + (1.0 - beta) * x
}

/// Elementwise EMA update over parameter buffers.
pub fn ema_update_vec(prev: &[f64], x: &[f64], beta: f64) -> Result<Vec<f64>> {
    ensure_same_len("ema buffers", prev.len(), x.len())?;
    Ok(prev
        .iter()
        .zip(x)
        .map(|(&p, &xi)| ema_update(p, xi, beta))
        .collect())
}

/// Initialization bias correction `x / (1 - beta^t)`; requires `t >= 1`.
pub fn bias_correct(x: f64, beta: f64, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::InvalidHyper {
            name: "t",
            value: 0.0,
            constraint: "t >= 1 for bias correction",
        });
    }
    ensure_finite_scalar("bias correction input", x)?;
    let denom = 1.0 - pow_u64(beta, t);
    Ok(x / denom)
}

/// Elementwise bias correction.
pub fn bias_correct_vec(x: &[f64], beta: f64, t: u64) -> Result<Vec<f64>> {
    if t == 0 {
        return Err(Error::InvalidHyper {
            name: "t",
            value: 0.0,
            constraint: "t >= 1 for bias correction",
        });
    }
    let denom = 1.0 - pow_u64(beta, t);
    Ok(x.iter().map(|&xi| xi / denom).collect())
}

/// `beta^t` by binary exponentiation, exact for t = 0 and 1 and
/// reproducible across platforms (no libm powf involved).
pub(crate) fn pow_u64(beta: f64, t: u64) -> f64 {
    let mut result = 1.0;
    let mut base = beta;
    let mut e = t;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}

/// One Adam step at learning rate `alpha_t`.
///
/// Returns the updated parameters and the advanced state; inputs are not
/// modified. Fails on shape mismatches, non-finite gradients, or a
/// non-positive `alpha_t`.
pub fn adam_step(
    hyper: &EveHyper,
    state: &AdamState,
    params: &[f64],
    grad: &[f64],
    alpha_t: f64,
) -> Result<(Vec<f64>, AdamState)> {
    ensure_same_len("params vs state", state.dim(), params.len())?;
    ensure_same_len("grad vs params", params.len(), grad.len())?;
    ensure_finite("grad", grad)?;
    if !(alpha_t.is_finite() && alpha_t > 0.0) {
        return Err(Error::InvalidHyper {
            name: "alpha_t",
            value: alpha_t,
            constraint: "alpha_t > 0",
        });
    }

    let t = state.t + 1;
    let bc1 = 1.0 - pow_u64(hyper.beta1, t);
    let bc2 = 1.0 - pow_u64(hyper.beta2, t);
    let mut m = Vec::with_capacity(params.len());
    let mut v = Vec::with_capacity(params.len());
    let mut next = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let g = grad[i];
        let mi = ema_update(state.m[i], g, hyper.beta1);
        let vi = ema_update(state.v[i], g * g, hyper.beta2);
        let m_hat = mi / bc1;
        let v_hat = vi / bc2;
        next.push(params[i] - alpha_t * m_hat / (v_hat.sqrt() + hyper.eps));
        m.push(mi);
        v.push(vi);
    }
    Ok((next, AdamState { t, m, v }))
}
