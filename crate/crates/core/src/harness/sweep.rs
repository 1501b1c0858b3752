//! Learning rate sweeps, decay sweeps, and feedback hyperparameter grids.
//!
//! Every sweep expands a base config into cells, runs them (in parallel,
//! see [`super::parallel_map`]), and ranks completed cells by final full
//! training loss, breaking ties toward the smaller learning rate and then
//! the cell id. Aborted cells rank after all completed ones.

use super::config::RunConfig;
use super::parallel::parallel_map;
use super::trace::{format_float, RunStatus, Trace};
use super::run;
use crate::error::{Error, Result};
use crate::optim::OptimizerKind;
use crate::schedules::{gamma_for_final_ratio, DecayKind};

/// Shared learning rate grid searched for every optimizer.
pub const LR_GRID: [f64; 11] = [
    1e-6, 5e-6, 1e-5, 5e-5, 1e-4, 5e-4, 1e-3, 5e-3, 1e-2, 5e-2, 1e-1,
];

/// Default smoothing grid for the feedback coefficient.
pub const HYPER_BETA3_GRID: [f64; 5] = [0.0, 0.9, 0.99, 0.999, 0.9999];

/// Default clipping grid for the feedback coefficient.
pub const HYPER_C_GRID: [f64; 5] = [1.5, 2.0, 5.0, 10.0, 20.0];

/// The learning rates searched for one optimizer: the shared grid plus
/// the method's prescribed default where that falls outside it, sorted
/// ascending with duplicates removed.
pub fn lr_grid_for(kind: OptimizerKind) -> Vec<f64> {
    let mut grid = LR_GRID.to_vec();
    if let Some(extra) = kind.prescribed_extra_alpha() {
        if !grid.contains(&extra) {
            grid.push(extra);
        }
    }
    grid.sort_by(f64::total_cmp);
    grid
}

/// One executed sweep cell.
#[derive(Debug, Clone)]
pub struct SweepCell {
    /// Stable id, also used as the trace file stem.
    pub id: String,
    pub trace: Trace,
}

/// All cells of a sweep, in execution (enumeration) order.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub cells: Vec<SweepCell>,
}

impl Sweep {
    /// Cell indices from best to worst: completed cells ordered by final
    /// full loss, then smaller base rate, then id; aborted cells follow,
    /// ordered the same way.
    pub fn ranked_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.cells.len()).collect();
        idx.sort_by(|&a, &b| {
            let (ca, cb) = (&self.cells[a], &self.cells[b]);
            let aborted = |c: &SweepCell| !c.trace.summary.status.is_completed();
            aborted(ca)
                .cmp(&aborted(cb))
                .then_with(|| {
                    ca.trace
                        .summary
                        .final_full_loss
                        .total_cmp(&cb.trace.summary.final_full_loss)
                })
                .then_with(|| {
                    ca.trace
                        .config
                        .hyper
                        .alpha1
                        .total_cmp(&cb.trace.config.hyper.alpha1)
                })
                .then_with(|| ca.id.cmp(&cb.id))
        });
        idx
    }

    pub fn any_aborted(&self) -> bool {
        self.cells
            .iter()
            .any(|c| !c.trace.summary.status.is_completed())
    }

    /// Ranking table as CSV. Losses keep full precision so the ordering
    /// can be reproduced from the file alone.
    pub fn ranking_csv(&self) -> String {
        let mut out = String::from(
            "rank,id,optimizer,alpha,decay,decay_gamma,beta3,c,status,steps,final_full_loss,best_f_t\n",
        );
        for (rank, &i) in self.ranked_indices().iter().enumerate() {
            let cell = &self.cells[i];
            let cfg = &cell.trace.config;
            let summary = &cell.trace.summary;
            let status = match &summary.status {
                RunStatus::Completed => "completed".to_string(),
                RunStatus::Aborted { step, .. } => format!("aborted@{step}"),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                rank + 1,
                cell.id,
                cfg.optimizer.name(),
                cfg.hyper.alpha1,
                cfg.decay.name(),
                cfg.decay_gamma,
                cfg.hyper.beta3,
                cfg.hyper.c,
                status,
                summary.steps,
                format_float(summary.final_full_loss),
                format_float(summary.best_f_t),
            ));
        }
        out
    }
}

fn run_cells(configs: Vec<(String, RunConfig)>) -> Result<Sweep> {
    let results = parallel_map(&configs, |(id, config)| (id.clone(), run(config)));
    let mut cells = Vec::with_capacity(results.len());
    for (id, result) in results {
        cells.push(SweepCell { id, trace: result? });
    }
    Ok(Sweep { cells })
}

/// Learning rate grid search across optimizers.
///
/// Each cell trains `base`'s problem with one `(optimizer, rate)` pair on
/// a constant schedule; everything else (seed, epochs, batch size, data)
/// is shared, so cells differ only in the optimizer setting. With no
/// override, every optimizer in `optimizers` is searched over
/// [`lr_grid_for`]; `lrs` replaces the grid exactly when given.
pub fn grid_search(
    base: &RunConfig,
    optimizers: &[OptimizerKind],
    lrs: Option<&[f64]>,
) -> Result<Sweep> {
    if optimizers.is_empty() {
        return Err(Error::Config("grid search needs at least one optimizer".into()));
    }
    base.validate()?;
    let mut configs = Vec::new();
    for &kind in optimizers {
        let grid: Vec<f64> = match lrs {
            Some(list) => list.to_vec(),
            None => lr_grid_for(kind),
        };
        if grid.is_empty() {
            return Err(Error::Config("grid search needs at least one rate".into()));
        }
        for &lr in &grid {
            let mut config = base.clone();
            config.optimizer = kind;
            config.hyper.alpha1 = lr;
            config.decay = DecayKind::Constant;
            config.decay_gamma = 0.0;
            config.force_d1 = false;
            config.validate()?;
            configs.push((format!("{}_lr{}", kind.name(), lr), config));
        }
    }
    run_cells(configs)
}

/// Decay schedule sweep for Adam.
///
/// `base` must use the adam optimizer (the decay protocol is defined
/// against it); its `alpha` is kept fixed while the sweep varies the decay
/// family and final ratio `k`. For each `(kind, k)`, the decay strength is
/// solved so the last step runs at `alpha / k`. A `constant_k1` reference
/// cell (no decay) is always included first.
pub fn decay_sweep(base: &RunConfig, kinds: &[DecayKind], ks: &[f64]) -> Result<Sweep> {
    if base.optimizer != OptimizerKind::Adam {
        return Err(Error::Config(
            "decay sweeps are defined for the adam optimizer".into(),
        ));
    }
    if kinds.is_empty() || ks.is_empty() {
        return Err(Error::Config(
            "decay sweep needs at least one kind and one k".into(),
        ));
    }
    let total_steps = base.total_steps()?;
    let mut reference = base.clone();
    reference.decay = DecayKind::Constant;
    reference.decay_gamma = 0.0;
    let mut configs = vec![("constant_k1".to_string(), reference)];
    for &kind in kinds {
        if kind == DecayKind::Constant {
            return Err(Error::Config(
                "decay sweep kinds must be decaying families (exp, inv-t, inv-sqrt-t)".into(),
            ));
        }
        for &k in ks {
            let mut config = base.clone();
            config.decay = kind;
            config.decay_gamma = gamma_for_final_ratio(kind, k, total_steps)?;
            config.validate()?;
            configs.push((format!("{}_k{}", kind.name(), k), config));
        }
    }
    run_cells(configs)
}

/// Feedback hyperparameter grid for the eve optimizer.
///
/// `base` must use eve. Cells cover the cross product of smoothing values
/// `beta3s` and clipping constants `cs`; an `adam_ref` cell with the same
/// base rate is included first for reference.
pub fn hyper_grid(base: &RunConfig, beta3s: &[f64], cs: &[f64]) -> Result<Sweep> {
    if base.optimizer != OptimizerKind::Eve {
        return Err(Error::Config(
            "hyperparameter grids are defined for the eve optimizer".into(),
        ));
    }
    if beta3s.is_empty() || cs.is_empty() {
        return Err(Error::Config(
            "hyper grid needs at least one beta3 and one c".into(),
        ));
    }
    let mut reference = base.clone();
    reference.optimizer = OptimizerKind::Adam;
    reference.force_d1 = false;
    reference.validate()?;
    let mut configs = vec![("adam_ref".to_string(), reference)];
    for &beta3 in beta3s {
        for &c in cs {
            let mut config = base.clone();
            config.hyper.beta3 = beta3;
            config.hyper.c = c;
            config.validate()?;
            configs.push((format!("eve_beta3_{beta3}_c_{c}"), config));
        }
    }
    run_cells(configs)
}
