//! Reproducible training runs and parameter sweeps.
//!
//! [`run`] executes one configuration end to end and returns a [`Trace`].
//! Identical configs produce identical traces (`wall_ms` aside): data,
//! initialization, shuffling, and gradient noise are all keyed by
//! sub-seeds derived from the config's master seed.

mod config;
mod parallel;
mod sweep;
mod trace;

pub use config::{ProblemSpec, RunConfig, SweepExtras};
pub use parallel::parallel_map;
pub use sweep::{
    decay_sweep, grid_search, hyper_grid, lr_grid_for, Sweep, SweepCell, HYPER_BETA3_GRID,
    HYPER_C_GRID, LR_GRID,
};
pub use trace::{
    format_float, read_records, read_records_file, record_to_csv_row, strip_volatile, RunStatus,
    RunSummary, StepRecord, Trace, TRACE_HEADER,
};

use crate::error::{ensure_finite, ensure_finite_scalar, Result};
use crate::optim::{grad_eval_point, optimizer_step, OptimizerState};
use crate::problems::{minibatch_schedule, steps_per_epoch, Batch, Problem};
use crate::rng::{derive_seed, TAG_BATCH, TAG_INIT};
use crate::schedules::{schedule_alpha, DecayPolicy};

fn l2_norm(xs: &[f64]) -> f64 {
    xs.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

#[cfg(not(target_arch = "wasm32"))]
fn now() -> Option<std::time::Instant> {
    Some(std::time::Instant::now())
}

#[cfg(target_arch = "wasm32")]
fn now() -> Option<std::time::Instant> {
    None
}

fn elapsed_ms(start: Option<std::time::Instant>) -> f64 {
    match start {
        Some(s) => s.elapsed().as_secs_f64() * 1e3,
        None => 0.0,
    }
}

/// Outcome of one training step, before it is recorded.
struct StepData {
    params: Vec<f64>,
    state: OptimizerState,
    record: StepRecord,
}

fn train_step(
    problem: &dyn Problem,
    config: &RunConfig,
    policy: &DecayPolicy,
    state: &OptimizerState,
    params: &[f64],
    batch: Batch,
    t: u64,
    epoch: u32,
) -> Result<StepData> {
    let eval_point = grad_eval_point(state, params, &config.baseline)?;
    let (f_t, grad) = problem.eval_grad(&eval_point, batch)?;
    ensure_finite_scalar("minibatch objective", f_t)?;
    let alpha_t = schedule_alpha(policy, t);
    let out = optimizer_step(
        state,
        params,
        &grad,
        f_t,
        alpha_t,
        &config.hyper,
        &config.baseline,
        config.force_d1,
    )?;
    ensure_finite("updated params", &out.params)?;
    let record = StepRecord {
        t,
        epoch,
        f_t,
        d: out.coeffs.map(|c| c.d),
        d_hat: out.coeffs.map(|c| c.d_hat),
        d_tilde: out.coeffs.map(|c| c.d_tilde),
        alpha: out.alpha_used,
        grad_norm: l2_norm(&grad),
        wall_ms: 0.0,
    };
    Ok(StepData {
        params: out.params,
        state: out.state,
        record,
    })
}

/// Runs one configuration to completion (or abort).
///
/// Returns `Err` only for invalid configurations; numerical blow-ups
/// during training end the run early with [`RunStatus::Aborted`] and the
/// partial records are kept. No record is written for the failed step.
pub fn run(config: &RunConfig) -> Result<Trace> {
    let problem = config.validated_problem()?;
    let n = problem.n_examples();
    let spe = steps_per_epoch(n, config.batch_size) as u64;
    let total = config.epochs as u64 * spe;
    let batches = minibatch_schedule(
        derive_seed(config.seed, TAG_BATCH),
        n,
        config.batch_size,
        config.epochs,
    )?;
    let policy = DecayPolicy::new(config.decay, config.decay_gamma, config.hyper.alpha1)?;

    let mut params = problem.initial_params(derive_seed(config.seed, TAG_INIT));
    let mut state = OptimizerState::new(config.optimizer, problem.dim());
    let mut records: Vec<StepRecord> = Vec::with_capacity(total as usize);
    let mut status = RunStatus::Completed;

    for t in 1..=total {
        let start = now();
        let epoch = ((t - 1) / spe) as u32;
        let batch = Batch::new(&batches[(t - 1) as usize], t);
        match train_step(
            problem.as_ref(),
            config,
            &policy,
            &state,
            &params,
            batch,
            t,
            epoch,
        ) {
            Ok(mut step) => {
                step.record.wall_ms = elapsed_ms(start);
                params = step.params;
                state = step.state;
                records.push(step.record);
            }
            Err(err) => {
                status = RunStatus::Aborted {
                    step: t,
                    reason: err.to_string(),
                };
                break;
            }
        }
    }

    let final_full_loss = problem.full_loss(&params).unwrap_or(f64::NAN);
    let best_f_t = if records.is_empty() {
        f64::NAN
    } else {
        records.iter().map(|r| r.f_t).fold(f64::INFINITY, f64::min)
    };
    Ok(Trace {
        config: config.clone(),
        summary: RunSummary {
            status,
            steps: records.len() as u64,
            final_full_loss,
            best_f_t,
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::OptimizerKind;
    use crate::problems::Activation;
    use crate::schedules::DecayKind;

    fn quadratic_config(optimizer: OptimizerKind, epochs: u32) -> RunConfig {
        let mut c = RunConfig::new(
            ProblemSpec::Quadratic {
                diag: vec![1.0, 100.0],
                x0: None,
                noise_std: 0.0,
            },
            optimizer,
        );
        c.epochs = epochs;
        c
    }

    fn blobs_config(optimizer: OptimizerKind) -> RunConfig {
        let mut c = RunConfig::new(
            ProblemSpec::Blobs {
                n: 64,
                d: 8,
                classes: 4,
                separation: 6.0,
                hidden: vec![8],
                activation: Activation::Tanh,
            },
            optimizer,
        );
        c.epochs = 5;
        c.batch_size = 16;
        c
    }

    #[test]
    fn run_produces_expected_step_count_and_epochs() {
        let trace = run(&blobs_config(OptimizerKind::Adam)).unwrap();
        // 5 epochs x ceil(64/16) = 20 steps.
        assert_eq!(trace.records.len(), 20);
        assert!(trace.summary.status.is_completed());
        assert_eq!(trace.summary.steps, 20);
        assert_eq!(trace.records[0].t, 1);
        assert_eq!(trace.records[0].epoch, 0);
        assert_eq!(trace.records[19].t, 20);
        assert_eq!(trace.records[19].epoch, 4);
        assert!(trace.summary.final_full_loss.is_finite());
        assert!(trace.summary.best_f_t <= trace.records[0].f_t);
    }

    #[test]
    fn identical_configs_give_identical_traces() {
        let config = blobs_config(OptimizerKind::Eve);
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.f_t.to_bits(), rb.f_t.to_bits());
            assert_eq!(ra.alpha.to_bits(), rb.alpha.to_bits());
            assert_eq!(ra.grad_norm.to_bits(), rb.grad_norm.to_bits());
            assert_eq!(ra.d_tilde, rb.d_tilde);
        }
        assert_eq!(
            a.summary.final_full_loss.to_bits(),
            b.summary.final_full_loss.to_bits()
        );
        // A different seed changes the trace.
        let mut other = config.clone();
        other.seed = 43;
        let c = run(&other).unwrap();
        assert_ne!(
            a.summary.final_full_loss.to_bits(),
            c.summary.final_full_loss.to_bits()
        );
    }

    #[test]
    fn eve_records_coefficients_and_adam_does_not() {
        let eve = run(&quadratic_config(OptimizerKind::Eve, 10)).unwrap();
        for (i, r) in eve.records.iter().enumerate() {
            assert!(r.d.is_some() && r.d_hat.is_some() && r.d_tilde.is_some());
            if i == 0 {
                assert_eq!(r.d_tilde, Some(1.0));
                assert_eq!(r.alpha, eve.config.hyper.alpha1);
            }
            let dt = r.d_tilde.unwrap();
            assert!((0.1..=10.0).contains(&dt));
        }
        let adam = run(&quadratic_config(OptimizerKind::Adam, 10)).unwrap();
        for r in &adam.records {
            assert!(r.d.is_none() && r.d_hat.is_none() && r.d_tilde.is_none());
            assert_eq!(r.alpha, adam.config.hyper.alpha1);
        }
    }

    #[test]
    fn every_optimizer_completes_and_reduces_quadratic_loss() {
        for kind in OptimizerKind::ALL {
            let mut config = quadratic_config(kind, 300);
            config.hyper.alpha1 = match kind {
                OptimizerKind::Adadelta => 1.0,
                OptimizerKind::SgdNesterov => 1e-3,
                _ => 1e-2,
            };
            let trace = run(&config).unwrap();
            assert!(
                trace.summary.status.is_completed(),
                "{} aborted",
                kind.name()
            );
            let first = trace.records[0].f_t;
            let last = trace.summary.final_full_loss;
            assert!(
                last < first,
                "{}: loss did not decrease ({first} -> {last})",
                kind.name()
            );
        }
    }

    #[test]
    fn decayed_adam_follows_the_schedule() {
        let mut config = quadratic_config(OptimizerKind::Adam, 100);
        config.decay = DecayKind::InvT;
        config.decay_gamma = crate::schedules::gamma_for_final_ratio(DecayKind::InvT, 10.0, 100)
            .unwrap();
        let trace = run(&config).unwrap();
        let policy = DecayPolicy::new(config.decay, config.decay_gamma, config.hyper.alpha1)
            .unwrap();
        for r in &trace.records {
            assert_eq!(r.alpha, schedule_alpha(&policy, r.t));
        }
        let last = trace.records.last().unwrap();
        let want = config.hyper.alpha1 / 10.0;
        assert!(((last.alpha - want) / want).abs() < 1e-12);
    }

    #[test]
    fn divergent_run_aborts_with_partial_records() {
        let mut config = RunConfig::new(ProblemSpec::Rosenbrock, OptimizerKind::SgdNesterov);
        config.hyper.alpha1 = 1e6;
        config.epochs = 50;
        let trace = run(&config).unwrap();
        match &trace.summary.status {
            RunStatus::Aborted { step, reason } => {
                assert!(*step <= 50);
                assert!(!reason.is_empty());
                // The failed step is not recorded.
                assert_eq!(trace.records.len() as u64, step - 1);
            }
            RunStatus::Completed => panic!("expected an abort"),
        }
    }

    #[test]
    fn invalid_config_is_an_error_not_an_abort() {
        let mut config = quadratic_config(OptimizerKind::Adam, 10);
        config.batch_size = 2; // quadratic has one example
        assert!(run(&config).is_err());
    }

    #[test]
    fn force_d1_run_matches_adam_run_bitwise() {
        let mut eve = blobs_config(OptimizerKind::Eve);
        eve.force_d1 = true;
        let mut adam = eve.clone();
        adam.optimizer = OptimizerKind::Adam;
        adam.force_d1 = false;
        let te = run(&eve).unwrap();
        let ta = run(&adam).unwrap();
        assert_eq!(te.records.len(), ta.records.len());
        for (re, ra) in te.records.iter().zip(&ta.records) {
            assert_eq!(re.f_t.to_bits(), ra.f_t.to_bits());
            assert_eq!(re.grad_norm.to_bits(), ra.grad_norm.to_bits());
            assert_eq!(re.alpha.to_bits(), ra.alpha.to_bits());
        }
        assert_eq!(
            te.summary.final_full_loss.to_bits(),
            ta.summary.final_full_loss.to_bits()
        );
    }
}
