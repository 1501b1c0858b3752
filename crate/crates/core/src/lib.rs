//! Stochastic gradient optimization with feedback-driven learning rate
//! adaptation.
//!
//! The core algorithm tracks relative changes in the objective value and
//! scales a base Adam update by a smoothed, clipped feedback coefficient.
//! Around it this crate provides:
//!
//! - [`optim`]: the adaptive optimizer, plain Adam, and five classic
//!   baselines (Adamax, RMSprop, Adagrad, Adadelta, SGD with Nesterov
//!   momentum), all as pure step functions over `f64` slices.
//! - [`schedules`]: learning rate decay policies (constant, exponential,
//!   1/t, 1/sqrt(t)) and a solver for the decay strength that reaches a
//!   target final ratio.
//! - [`problems`]: small deterministic benchmark problems (quadratic bowls,
//!   Rosenbrock, Gaussian blob classification with logistic regression or an
//!   MLP) plus a finite difference gradient checker.
//! - [`harness`]: reproducible single runs, learning rate sweeps, decay
//!   sweeps, and coefficient hyperparameter grids, with CSV trace output.
//! - [`plot`]: dependency-free SVG line charts of training curves.
//!
//! Everything is seeded explicitly and runs produce byte-identical traces
//! for identical configurations.

pub mod error;
pub mod harness;
pub mod optim;
pub mod plot;
pub mod problems;
pub mod rng;
pub mod schedules;

pub use error::{Error, Result};
