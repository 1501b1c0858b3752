//! Optimizers as pure step functions, plus a small dispatch layer that
//! lets the harness drive any of them through one interface.

pub mod adam;
pub mod baselines;
pub mod eve;

pub use adam::{adam_step, bias_correct, bias_correct_vec, ema_update, ema_update_vec, AdamState, EveHyper};
pub use baselines::{
    adadelta_step, adagrad_step, adamax_step, nesterov_lookahead, nesterov_step, rmsprop_step,
    AdadeltaState, AdagradState, AdamaxState, BaselineHyper, NesterovState, RmspropState,
};
pub use eve::{
    clip_d, d_tilde_in_bounds, eve_d, eve_step, eve_step_detailed, EveCoeffs, EveState,
    EveStepOutput, DENOM_FLOOR,
};

use crate::error::{Error, Result};

/// The seven optimizers the harness can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptimizerKind {
    Eve,
    Adam,
    Adamax,
    Rmsprop,
    Adagrad,
    Adadelta,
    SgdNesterov,
}

impl OptimizerKind {
    /// All kinds, in the order sweeps enumerate them.
    pub const ALL: [OptimizerKind; 7] = [
        OptimizerKind::Eve,
        OptimizerKind::Adam,
        OptimizerKind::Adamax,
        OptimizerKind::Rmsprop,
        OptimizerKind::Adagrad,
        OptimizerKind::Adadelta,
        OptimizerKind::SgdNesterov,
    ];

    /// Stable string name used in configs, trace files, and cell ids.
    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::Eve => "eve",
            OptimizerKind::Adam => "adam",
            OptimizerKind::Adamax => "adamax",
            OptimizerKind::Rmsprop => "rmsprop",
            OptimizerKind::Adagrad => "adagrad",
            OptimizerKind::Adadelta => "adadelta",
            OptimizerKind::SgdNesterov => "sgd-nesterov",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown optimizer {name:?}; expected one of {}",
                    Self::ALL.map(|k| k.name()).join(", ")
                ))
            })
    }

    /// Conventional default learning rate used when a config omits `alpha`.
    pub fn default_alpha(self) -> f64 {
        match self {
            OptimizerKind::Eve | OptimizerKind::Adam | OptimizerKind::Rmsprop => 1e-3,
            OptimizerKind::Adamax => 2e-3,
            OptimizerKind::Adagrad | OptimizerKind::SgdNesterov => 1e-2,
            OptimizerKind::Adadelta => 1.0,
        }
    }

    /// Source-paper default rate that learning rate sweeps add on top of
    /// the shared grid, for the methods whose prescribed defaults fall
    /// outside it.
    pub fn prescribed_extra_alpha(self) -> Option<f64> {
        match self {
            OptimizerKind::Adagrad => Some(1e-2),
            OptimizerKind::Adamax => Some(2e-3),
            OptimizerKind::Adadelta => Some(1.0),
            _ => None,
        }
    }
}

/// Per-optimizer state, dispatched by kind.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerState {
    Eve(EveState),
    Adam(AdamState),
    Adamax(AdamaxState),
    Rmsprop(RmspropState),
    Adagrad(AdagradState),
    Adadelta(AdadeltaState),
    SgdNesterov(NesterovState),
}

impl OptimizerState {
    pub fn new(kind: OptimizerKind, dim: usize) -> Self {
        match kind {
            OptimizerKind::Eve => OptimizerState::Eve(EveState::new(dim)),
            OptimizerKind::Adam => OptimizerState::Adam(AdamState::new(dim)),
            OptimizerKind::Adamax => OptimizerState::Adamax(AdamaxState::new(dim)),
            OptimizerKind::Rmsprop => OptimizerState::Rmsprop(RmspropState::new(dim)),
            OptimizerKind::Adagrad => OptimizerState::Adagrad(AdagradState::new(dim)),
            OptimizerKind::Adadelta => OptimizerState::Adadelta(AdadeltaState::new(dim)),
            OptimizerKind::SgdNesterov => OptimizerState::SgdNesterov(NesterovState::new(dim)),
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        match self {
            OptimizerState::Eve(_) => OptimizerKind::Eve,
            OptimizerState::Adam(_) => OptimizerKind::Adam,
            OptimizerState::Adamax(_) => OptimizerKind::Adamax,
            OptimizerState::Rmsprop(_) => OptimizerKind::Rmsprop,
            OptimizerState::Adagrad(_) => OptimizerKind::Adagrad,
            OptimizerState::Adadelta(_) => OptimizerKind::Adadelta,
            OptimizerState::SgdNesterov(_) => OptimizerKind::SgdNesterov,
        }
    }
}

/// Result of one dispatched step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub params: Vec<f64>,
    pub state: OptimizerState,
    /// Feedback coefficients; present only for the Eve optimizer.
    pub coeffs: Option<EveCoeffs>,
    /// Learning rate actually applied this step.
    pub alpha_used: f64,
}

/// Where the gradient (and objective) must be evaluated for this state:
/// the Nesterov lookahead point, or the current parameters otherwise.
pub fn grad_eval_point(
    state: &OptimizerState,
    params: &[f64],
    baseline: &BaselineHyper,
) -> Result<Vec<f64>> {
    match state {
        OptimizerState::SgdNesterov(s) => nesterov_lookahead(s, params, baseline.momentum),
        _ => Ok(params.to_vec()),
    }
}

/// One optimizer step, dispatched on the state variant.
///
/// `f_t` is the objective value at the gradient evaluation point; only Eve
/// consumes it. `alpha_t` is the (possibly decayed) learning rate for this
/// step; Eve ignores it and derives its rate from `hyper.alpha1` and the
/// feedback coefficient, so callers must keep Eve on a constant schedule.
#[allow(clippy::too_many_arguments)]
pub fn optimizer_step(
    state: &OptimizerState,
    params: &[f64],
    grad: &[f64],
    f_t: f64,
    alpha_t: f64,
    hyper: &EveHyper,
    baseline: &BaselineHyper,
    force_d1: bool,
) -> Result<StepOutcome> {
    match state {
        OptimizerState::Eve(s) => {
            let out = eve_step_detailed(hyper, s, params, grad, f_t, force_d1)?;
            Ok(StepOutcome {
                params: out.params,
                state: OptimizerState::Eve(out.state),
                alpha_used: out.coeffs.alpha,
                coeffs: Some(out.coeffs),
            })
        }
        OptimizerState::Adam(s) => {
            let (p, s2) = adam_step(hyper, s, params, grad, alpha_t)?;
            Ok(StepOutcome {
                params: p,
                state: OptimizerState::Adam(s2),
                coeffs: None,
                alpha_used: alpha_t,
            })
        }
        OptimizerState::Adamax(s) => {
            let (p, s2) = adamax_step(
                s,
                params,
                grad,
                alpha_t,
                baseline.adamax_beta1,
                baseline.adamax_beta2,
                baseline.adamax_eps,
            )?;
            Ok(StepOutcome {
                params: p,
                state: OptimizerState::Adamax(s2),
                coeffs: None,
                alpha_used: alpha_t,
            })
        }
        OptimizerState::Rmsprop(s) => {
            let (p, s2) = rmsprop_step(
                s,
                params,
                grad,
                alpha_t,
                baseline.rmsprop_rho,
                baseline.rmsprop_eps,
            )?;
            Ok(StepOutcome {
                params: p,
                state: OptimizerState::Rmsprop(s2),
                coeffs: None,
                alpha_used: alpha_t,
            })
        }
        OptimizerState::Adagrad(s) => {
            let (p, s2) = adagrad_step(s, params, grad, alpha_t, baseline.adagrad_eps)?;
            Ok(StepOutcome {
                params: p,
                state: OptimizerState::Adagrad(s2),
                coeffs: None,
                alpha_used: alpha_t,
            })
        }
        OptimizerState::Adadelta(s) => {
            let (p, s2) = adadelta_step(
                s,
                params,
                grad,
                alpha_t,
                baseline.adadelta_rho,
                baseline.adadelta_eps,
            )?;
            Ok(StepOutcome {
                params: p,
                state: OptimizerState::Adadelta(s2),
                coeffs: None,
                alpha_used: alpha_t,
            })
        }
        OptimizerState::SgdNesterov(s) => {
            let (p, s2) = nesterov_step(s, params, grad, baseline.momentum, alpha_t)?;
            Ok(StepOutcome {
                params: p,
                state: OptimizerState::SgdNesterov(s2),
                coeffs: None,
                alpha_used: alpha_t,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in OptimizerKind::ALL {
            assert_eq!(OptimizerKind::from_name(kind.name()).unwrap(), kind);
        }
        assert!(OptimizerKind::from_name("sgd").is_err());
        assert!(OptimizerKind::from_name("Eve").is_err());
    }

    #[test]
    fn state_kind_round_trips() {
        for kind in OptimizerKind::ALL {
            assert_eq!(OptimizerState::new(kind, 3).kind(), kind);
        }
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        let hyper = EveHyper::default();
        let baseline = BaselineHyper::default();
        let params = vec![0.4, -0.2];
        let grad = vec![0.3, 0.9];

        let st = OptimizerState::new(OptimizerKind::Adam, 2);
        let out = optimizer_step(&st, &params, &grad, 1.0, 1e-3, &hyper, &baseline, false).unwrap();
        let (p, _) = adam_step(&hyper, &AdamState::new(2), &params, &grad, 1e-3).unwrap();
        assert_eq!(out.params, p);
        assert!(out.coeffs.is_none());

        let st = OptimizerState::new(OptimizerKind::Eve, 2);
        let out = optimizer_step(&st, &params, &grad, 1.0, 1e-3, &hyper, &baseline, false).unwrap();
        assert!(out.coeffs.is_some());
        assert_eq!(out.alpha_used, hyper.alpha1);
    }

    #[test]
    fn grad_eval_point_is_lookahead_only_for_nesterov() {
        let baseline = BaselineHyper::default();
        let params = vec![1.0];
        let mut nest = NesterovState::new(1);
        nest.velocity[0] = -0.5;
        let st = OptimizerState::SgdNesterov(nest);
        assert_eq!(
            grad_eval_point(&st, &params, &baseline).unwrap(),
            vec![1.0 + 0.9 * (-0.5)]
        );
        let st = OptimizerState::new(OptimizerKind::Adam, 1);
        assert_eq!(grad_eval_point(&st, &params, &baseline).unwrap(), params);
    }

    #[test]
    fn prescribed_extras_cover_the_three_special_methods() {
        assert_eq!(
            OptimizerKind::Adagrad.prescribed_extra_alpha(),
            Some(1e-2)
        );
        assert_eq!(OptimizerKind::Adamax.prescribed_extra_alpha(), Some(2e-3));
        assert_eq!(OptimizerKind::Adadelta.prescribed_extra_alpha(), Some(1.0));
        assert_eq!(OptimizerKind::Eve.prescribed_extra_alpha(), None);
        assert_eq!(OptimizerKind::Adam.prescribed_extra_alpha(), None);
    }
}
