//! Learning rate decay schedules and the decay strength solver.
//!
//! All schedules map a 1-based step index `t` to a rate:
//!
//! ```text
//! constant:    alpha_t = alpha1
//! exp:         alpha_t = alpha1 * exp(-gamma * t)
//! inv-t:       alpha_t = alpha1 / (1 + gamma * t)
//! inv-sqrt-t:  alpha_t = alpha1 / sqrt(1 + gamma * t)
//! ```
//!
//! [`gamma_for_final_ratio`] inverts each family at the final step: given a
//! target ratio `k`, it returns the `gamma` for which the rate of the last
//! of `total_steps` steps is `alpha1 / k`.

use crate::error::{Error, Result};

/// Decay families. String forms are used in config files and cell ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecayKind {
    Constant,
    Exponential,
    InvT,
    InvSqrtT,
}

impl DecayKind {
    /// The three non-constant families, in sweep order.
    pub const DECAYING: [DecayKind; 3] =
        [DecayKind::Exponential, DecayKind::InvT, DecayKind::InvSqrtT];

    pub fn name(self) -> &'static str {
        match self {
            DecayKind::Constant => "constant",
            DecayKind::Exponential => "exp",
            DecayKind::InvT => "inv-t",
            DecayKind::InvSqrtT => "inv-sqrt-t",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "constant" => Ok(DecayKind::Constant),
            "exp" => Ok(DecayKind::Exponential),
            "inv-t" => Ok(DecayKind::InvT),
            "inv-sqrt-t" => Ok(DecayKind::InvSqrtT),
            other => Err(Error::Config(format!(
                "unknown decay kind {other:?}; expected constant, exp, inv-t, or inv-sqrt-t"
            ))),
        }
    }
}

/// A fully specified schedule: family, strength, and base rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPolicy {
    pub kind: DecayKind,
    /// Decay strength; 0 makes every family constant.
    pub gamma: f64,
    /// Base learning rate `alpha1`, returned at `t = 0`.
    pub alpha1: f64,
}

impl DecayPolicy {
    pub fn new(kind: DecayKind, gamma: f64, alpha1: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidHyper {
                name: "gamma",
                value: gamma,
                constraint: "gamma >= 0",
            });
        }
        if !(alpha1.is_finite() && alpha1 > 0.0) {
            return Err(Error::InvalidHyper {
                name: "alpha1",
                value: alpha1,
                constraint: "alpha1 > 0",
            });
        }
        Ok(Self {
            kind,
            gamma,
            alpha1,
        })
    }

    pub fn constant(alpha1: f64) -> Result<Self> {
        Self::new(DecayKind::Constant, 0.0, alpha1)
    }
}

/// Learning rate at step `t` (1-based during training; `t = 0` gives
/// `alpha1` for every family).
pub fn schedule_alpha(policy: &DecayPolicy, t: u64) -> f64 {
    let t = t as f64;
    match policy.kind {
        DecayKind::Constant => policy.alpha1,
        DecayKind::Exponential => policy.alpha1 * (-policy.gamma * t).exp(),
        DecayKind::InvT => policy.alpha1 / (1.0 + policy.gamma * t),
        DecayKind::InvSqrtT => policy.alpha1 / (1.0 + policy.gamma * t).sqrt(),
    }
}

/// Solves for the `gamma` that makes step `total_steps` run at `alpha1 / k`.
///
/// Closed forms, with `T = total_steps`:
///
/// ```text
/// exp:         gamma = ln(k) / T
/// inv-t:       gamma = (k - 1) / T
/// inv-sqrt-t:  gamma = (k^2 - 1) / T
/// ```
///
/// `constant` only admits `k = 1` (gamma 0); `k >= 1` and `T >= 1` are
/// required for every family.
pub fn gamma_for_final_ratio(kind: DecayKind, k: f64, total_steps: u64) -> Result<f64> {
    if !(k.is_finite() && k >= 1.0) {
        return Err(Error::InvalidHyper {
            name: "k",
            value: k,
            constraint: "k >= 1",
        });
    }
    if total_steps == 0 {
        return Err(Error::Config(
            "decay ratio solver requires total_steps >= 1".into(),
        ));
    }
    let t = total_steps as f64;
    match kind {
        DecayKind::Constant => {
            if k == 1.0 {
                Ok(0.0)
            } else {
                Err(Error::Config(format!(
                    "constant schedule cannot reach final ratio k = {k}"
                )))
            }
        }
        DecayKind::Exponential => Ok(k.ln() / t),
        DecayKind::InvT => Ok((k - 1.0) / t),
        DecayKind::InvSqrtT => Ok((k * k - 1.0) / t),
    }
}

/// Final-ratio grid used by decay sweeps, strongest decay first.
pub const K_GRID: [f64; 8] = [1e4, 5e3, 1e3, 5e2, 1e2, 5e1, 1e1, 5e0];
