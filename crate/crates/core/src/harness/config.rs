//! Run configuration: a flat key-value file format that round-trips
//! exactly, plus validation and problem construction.
//!
//! A config file is UTF-8 text, one `key = value` pair per line. Blank
//! lines and lines starting with `#` are ignored. Unknown and duplicate
//! keys are errors. [`RunConfig::to_kv_string`] writes keys in a fixed
//! canonical order with round-trip-exact float formatting, so
//! `parse(serialize(c)) == c` and `serialize(parse(s))` is stable.

use crate::error::{Error, Result};
use crate::optim::{BaselineHyper, EveHyper, OptimizerKind};
use crate::problems::{
    make_blobs, Activation, MlpArch, MlpProblem, Problem, Quadratic, Rosenbrock,
};
use crate::rng::{derive_seed, TAG_NOISE};
use crate::schedules::{DecayKind, DecayPolicy};
use std::collections::HashMap;
use std::path::Path;

/// Which benchmark problem a run trains on.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// Diagonal quadratic bowl; optional fixed start and gradient noise.
    Quadratic {
        diag: Vec<f64>,
        x0: Option<Vec<f64>>,
        noise_std: f64,
    },
    /// 2-D Rosenbrock valley from `(-1.2, 1.0)`.
    Rosenbrock,
    /// Gaussian blobs classified by an MLP (logistic regression when
    /// `hidden` is empty).
    Blobs {
        n: usize,
        d: usize,
        classes: usize,
        separation: f64,
        hidden: Vec<usize>,
        activation: Activation,
    },
}

impl ProblemSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::Quadratic { .. } => "quadratic",
            ProblemSpec::Rosenbrock => "rosenbrock",
            ProblemSpec::Blobs { .. } => "blobs",
        }
    }

    /// Instantiates the problem. Dataset generation and gradient noise are
    /// keyed by sub-seeds derived from `seed`, so one master seed pins the
    /// whole run.
    pub fn build(&self, seed: u64) -> Result<Box<dyn Problem>> {
        match self {
            ProblemSpec::Quadratic {
                diag,
                x0,
                noise_std,
            } => {
                let mut q = Quadratic::new(diag.clone())?;
                if let Some(x0) = x0 {
                    q = q.with_x0(x0.clone())?;
                }
                q = q.with_noise(*noise_std, derive_seed(seed, TAG_NOISE))?;
                Ok(Box::new(q))
            }
            ProblemSpec::Rosenbrock => Ok(Box::new(Rosenbrock::new())),
            ProblemSpec::Blobs {
                n,
                d,
                classes,
                separation,
                hidden,
                activation,
            } => {
                let data = make_blobs(seed, *n, *d, *classes, *separation)?;
                let arch = MlpArch::new(*d, hidden.clone(), *classes, *activation)?;
                Ok(Box::new(MlpProblem::new(arch, data)?))
            }
        }
    }
}

/// Everything needed to reproduce one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub optimizer: OptimizerKind,
    /// Optimizer hyperparameters; `hyper.alpha1` is the base rate for
    /// every optimizer, not just the feedback-scaled one.
    pub hyper: EveHyper,
    pub baseline: BaselineHyper,
    pub decay: DecayKind,
    pub decay_gamma: f64,
    pub epochs: u32,
    pub batch_size: usize,
    pub seed: u64,
    /// Pins the feedback coefficient to 1 so the run matches plain Adam.
    pub force_d1: bool,
}

/// Optional grid overrides that may accompany a config file; ignored by
/// single runs, consumed by sweep commands.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepExtras {
    pub lrs: Option<Vec<f64>>,
    pub optimizers: Option<Vec<OptimizerKind>>,
    pub decay_kinds: Option<Vec<DecayKind>>,
    pub decay_ks: Option<Vec<f64>>,
    pub beta3s: Option<Vec<f64>>,
    pub cs: Option<Vec<f64>>,
}

impl SweepExtras {
    pub fn is_empty(&self) -> bool {
        *self == SweepExtras::default()
    }
}

impl RunConfig {
    /// A config with conventional defaults for the given problem and
    /// optimizer: the optimizer's default rate, constant schedule,
    /// 10 epochs, seed 42, and a batch size fitting the problem.
    pub fn new(problem: ProblemSpec, optimizer: OptimizerKind) -> Self {
        let batch_size = match &problem {
            ProblemSpec::Blobs { n, .. } => 32.min(*n),
            _ => 1,
        };
        Self {
            problem,
            optimizer,
            hyper: EveHyper::default().with_alpha1(optimizer.default_alpha()),
            baseline: BaselineHyper::default(),
            decay: DecayKind::Constant,
            decay_gamma: 0.0,
            epochs: 10,
            batch_size,
            seed: 42,
            force_d1: false,
        }
    }

    /// Validates and builds the problem in one pass (construction checks
    /// the problem-side constraints).
    pub(crate) fn validated_problem(&self) -> Result<Box<dyn Problem>> {
        self.hyper.validate()?;
        self.baseline.validate()?;
        DecayPolicy::new(self.decay, self.decay_gamma, self.hyper.alpha1)?;
        if self.optimizer == OptimizerKind::Eve && self.decay != DecayKind::Constant {
            return Err(Error::Config(
                "the eve optimizer adapts its own rate; decay must be constant".into(),
            ));
        }
        if self.force_d1 && self.optimizer != OptimizerKind::Eve {
            return Err(Error::Config(
                "force_d1 only applies to the eve optimizer".into(),
            ));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        let problem = self.problem.build(self.seed)?;
        if self.batch_size == 0 || self.batch_size > problem.n_examples() {
            return Err(Error::Config(format!(
                "batch_size must be in 1..={}, got {}",
                problem.n_examples(),
                self.batch_size
            )));
        }
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        self.validated_problem().map(|_| ())
    }

    pub fn build_problem(&self) -> Result<Box<dyn Problem>> {
        self.problem.build(self.seed)
    }

    /// Total optimizer steps: `epochs * ceil(n / batch_size)`.
    pub fn total_steps(&self) -> Result<u64> {
        let problem = self.validated_problem()?;
        let spe = crate::problems::steps_per_epoch(problem.n_examples(), self.batch_size);
        Ok(self.epochs as u64 * spe as u64)
    }

    /// Canonical key-value serialization; see the module docs.
    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("problem", self.problem.name().into());
        match &self.problem {
            ProblemSpec::Quadratic {
                diag,
                x0,
                noise_std,
            } => {
                kv("quadratic.diag", join_f64(diag));
                if let Some(x0) = x0 {
                    kv("quadratic.x0", join_f64(x0));
                }
                kv("quadratic.noise_std", format!("{noise_std}"));
            }
            ProblemSpec::Rosenbrock => {}
            ProblemSpec::Blobs {
                n,
                d,
                classes,
                separation,
                hidden,
                activation,
            } => {
                kv("blobs.n", format!("{n}"));
                kv("blobs.d", format!("{d}"));
                kv("blobs.classes", format!("{classes}"));
                kv("blobs.separation", format!("{separation}"));
                if !hidden.is_empty() {
                    kv(
                        "mlp.hidden",
                        hidden
                            .iter()
                            .map(|h| h.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                }
                kv("mlp.activation", activation.name().into());
            }
        }
        kv("optimizer", self.optimizer.name().into());
        kv("alpha", format!("{}", self.hyper.alpha1));
        kv("beta1", format!("{}", self.hyper.beta1));
        kv("beta2", format!("{}", self.hyper.beta2));
        kv("beta3", format!("{}", self.hyper.beta3));
        kv("c", format!("{}", self.hyper.c));
        kv("eps", format!("{}", self.hyper.eps));
        kv("f_star", format!("{}", self.hyper.f_star));
        kv("momentum", format!("{}", self.baseline.momentum));
        kv("rmsprop.rho", format!("{}", self.baseline.rmsprop_rho));
        kv("rmsprop.eps", format!("{}", self.baseline.rmsprop_eps));
        kv("adagrad.eps", format!("{}", self.baseline.adagrad_eps));
        kv("adadelta.rho", format!("{}", self.baseline.adadelta_rho));
        kv("adadelta.eps", format!("{}", self.baseline.adadelta_eps));
        kv("adamax.beta1", format!("{}", self.baseline.adamax_beta1));
        kv("adamax.beta2", format!("{}", self.baseline.adamax_beta2));
        kv("adamax.eps", format!("{}", self.baseline.adamax_eps));
        kv("decay", self.decay.name().into());
        kv("decay.gamma", format!("{}", self.decay_gamma));
        kv("epochs", format!("{}", self.epochs));
        kv("batch_size", format!("{}", self.batch_size));
        kv("seed", format!("{}", self.seed));
        kv("force_d1", format!("{}", self.force_d1));
        out
    }

    /// Parses a config, rejecting sweep override keys.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let (config, extras) = Self::parse_with_extras(text)?;
        if !extras.is_empty() {
            return Err(Error::Config(
                "sweep override keys are not valid in a single-run config".into(),
            ));
        }
        Ok(config)
    }

    /// Parses a config along with optional sweep override keys
    /// (`sweep.lrs`, `sweep.optimizers`, `decay.kinds`, `decay.ks`,
    /// `hyper.beta3s`, `hyper.cs`).
    pub fn parse_with_extras(text: &str) -> Result<(Self, SweepExtras)> {
        let mut map: HashMap<String, String> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if map.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!("duplicate key {key:?}")));
            }
        }

        let problem_name = take_required(&mut map, "problem")?;
        let problem = match problem_name.as_str() {
            "quadratic" => ProblemSpec::Quadratic {
                diag: parse_f64_list("quadratic.diag", &take_required(&mut map, "quadratic.diag")?)?,
                x0: match map.remove("quadratic.x0") {
                    Some(v) => Some(parse_f64_list("quadratic.x0", &v)?),
                    None => None,
                },
                noise_std: take_f64_or(&mut map, "quadratic.noise_std", 0.0)?,
            },
            "rosenbrock" => ProblemSpec::Rosenbrock,
            "blobs" => ProblemSpec::Blobs {
                n: take_usize(&mut map, "blobs.n")?,
                d: take_usize(&mut map, "blobs.d")?,
                classes: take_usize(&mut map, "blobs.classes")?,
                separation: take_f64_or(&mut map, "blobs.separation", 6.0)?,
                hidden: match map.remove("mlp.hidden") {
                    Some(v) => parse_usize_list("mlp.hidden", &v)?,
                    None => Vec::new(),
                },
                activation: match map.remove("mlp.activation") {
                    Some(v) => Activation::from_name(&v)?,
                    None => Activation::Tanh,
                },
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown problem {other:?}; expected quadratic, rosenbrock, or blobs"
                )))
            }
        };

        let optimizer = OptimizerKind::from_name(&take_required(&mut map, "optimizer")?)?;
        let mut config = RunConfig::new(problem, optimizer);

        if let Some(v) = map.remove("alpha") {
            config.hyper.alpha1 = parse_f64("alpha", &v)?;
        }
        if let Some(v) = map.remove("beta1") {
            config.hyper.beta1 = parse_f64("beta1", &v)?;
        }
        if let Some(v) = map.remove("beta2") {
            config.hyper.beta2 = parse_f64("beta2", &v)?;
        }
        if let Some(v) = map.remove("beta3") {
            config.hyper.beta3 = parse_f64("beta3", &v)?;
        }
        if let Some(v) = map.remove("c") {
            config.hyper.c = parse_f64("c", &v)?;
        }
        if let Some(v) = map.remove("eps") {
            config.hyper.eps = parse_f64("eps", &v)?;
        }
        if let Some(v) = map.remove("f_star") {
            config.hyper.f_star = parse_f64("f_star", &v)?;
        }
        if let Some(v) = map.remove("momentum") {
            config.baseline.momentum = parse_f64("momentum", &v)?;
        }
        if let Some(v) = map.remove("rmsprop.rho") {
            config.baseline.rmsprop_rho = parse_f64("rmsprop.rho", &v)?;
        }
        if let Some(v) = map.remove("rmsprop.eps") {
            config.baseline.rmsprop_eps = parse_f64("rmsprop.eps", &v)?;
        }
        if let Some(v) = map.remove("adagrad.eps") {
            config.baseline.adagrad_eps = parse_f64("adagrad.eps", &v)?;
        }
        if let Some(v) = map.remove("adadelta.rho") {
            config.baseline.adadelta_rho = parse_f64("adadelta.rho", &v)?;
        }
        if let Some(v) = map.remove("adadelta.eps") {
            config.baseline.adadelta_eps = parse_f64("adadelta.eps", &v)?;
        }
        if let Some(v) = map.remove("adamax.beta1") {
            config.baseline.adamax_beta1 = parse_f64("adamax.beta1", &v)?;
        }
        if let Some(v) = map.remove("adamax.beta2") {
            config.baseline.adamax_beta2 = parse_f64("adamax.beta2", &v)?;
        }
        if let Some(v) = map.remove("adamax.eps") {
            config.baseline.adamax_eps = parse_f64("adamax.eps", &v)?;
        }
        if let Some(v) = map.remove("decay") {
            config.decay = DecayKind::from_name(&v)?;
        }
        if let Some(v) = map.remove("decay.gamma") {
            config.decay_gamma = parse_f64("decay.gamma", &v)?;
        }
        if let Some(v) = map.remove("epochs") {
            config.epochs = parse_u32("epochs", &v)?;
        }
        if let Some(v) = map.remove("batch_size") {
            config.batch_size = parse_usize_val("batch_size", &v)?;
        }
        if let Some(v) = map.remove("seed") {
            config.seed = parse_u64("seed", &v)?;
        }
        if let Some(v) = map.remove("force_d1") {
            config.force_d1 = parse_bool("force_d1", &v)?;
        }

        let extras = SweepExtras {
            lrs: take_f64_list_opt(&mut map, "sweep.lrs")?,
            optimizers: match map.remove("sweep.optimizers") {
                Some(v) => Some(
                    split_list(&v)
                        .iter()
                        .map(|s| OptimizerKind::from_name(s))
                        .collect::<Result<Vec<_>>>()?,
                ),
                None => None,
            },
            decay_kinds: match map.remove("decay.kinds") {
                Some(v) => Some(
                    split_list(&v)
                        .iter()
                        .map(|s| DecayKind::from_name(s))
                        .collect::<Result<Vec<_>>>()?,
                ),
                None => None,
            },
            decay_ks: take_f64_list_opt(&mut map, "decay.ks")?,
            beta3s: take_f64_list_opt(&mut map, "hyper.beta3s")?,
            cs: take_f64_list_opt(&mut map, "hyper.cs")?,
        };

        if let Some(key) = map.keys().next() {
            return Err(Error::Config(format!("unknown key {key:?}")));
        }
        Ok((config, extras))
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_kv_string())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::from_kv_str(&std::fs::read_to_string(path)?)
    }
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect()
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|e| Error::Config(format!("key {key:?}: bad float {s:?}: {e}")))
}

fn parse_f64_list(key: &str, s: &str) -> Result<Vec<f64>> {
    let parts = split_list(s);
    if parts.is_empty() {
        return Err(Error::Config(format!("key {key:?}: empty list")));
    }
    parts.iter().map(|p| parse_f64(key, p)).collect()
}

fn parse_usize_list(key: &str, s: &str) -> Result<Vec<usize>> {
    split_list(s)
        .iter()
        .map(|p| parse_usize_val(key, p))
        .collect()
}

fn parse_u64(key: &str, s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|e| Error::Config(format!("key {key:?}: bad integer {s:?}: {e}")))
}

fn parse_u32(key: &str, s: &str) -> Result<u32> {
    s.parse::<u32>()
        .map_err(|e| Error::Config(format!("key {key:?}: bad integer {s:?}: {e}")))
}

fn parse_usize_val(key: &str, s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|e| Error::Config(format!("key {key:?}: bad integer {s:?}: {e}")))
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::Config(format!(
            "key {key:?}: expected true or false, got {other:?}"
        ))),
    }
}

fn take_required(map: &mut HashMap<String, String>, key: &str) -> Result<String> {
    map.remove(key)
        .ok_or_else(|| Error::Config(format!("missing required key {key:?}")))
}

fn take_f64_or(map: &mut HashMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match map.remove(key) {
        Some(v) => parse_f64(key, &v),
        None => Ok(default),
    }
}

fn take_usize(map: &mut HashMap<String, String>, key: &str) -> Result<usize> {
    parse_usize_val(key, &take_required(map, key)?)
}

fn take_f64_list_opt(map: &mut HashMap<String, String>, key: &str) -> Result<Option<Vec<f64>>> {
    match map.remove(key) {
        Some(v) => Ok(Some(parse_f64_list(key, &v)?)),
        None => Ok(None),
    }
}
