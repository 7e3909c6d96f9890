//! Simulator-informed dynamics model learning with trainable KKL observers.
//!
//! The toolkit trains hybrid models in which a black-box simulator trajectory
//! drives the latent states of a learned model through a Kazantzis–Kravaris/
//! Luenberger (KKL) observer, with a recurrent residuum covering whatever the
//! simulator cannot explain. It ships the benchmark systems, the baseline
//! model families, zero-phase filtering utilities, and an experiment runner.
//!
//! Modules:
//!
//! - [`autodiff`] — dense reverse-mode tape, Adam, LR schedules
//! - [`systems`] — benchmark dataset generators and CSV ingestion
//! - [`observer`] — the trainable KKL observer (contraction dynamics, `T*`, heads)
//! - [`residuum`] — GRU cell, warmup protocol, damped observation head,
//!   contraction certificate
//! - [`filters`] — order-1 Butterworth design, zero-phase `filtfilt`, resampling
//! - [`models`] — the model families composed from the pieces above
//! - [`training`] — subtrajectory batching, the composite loss, the optimizer loop
//! - [`eval`] — RMSE metrics, forgetting diagnostics, buffering ablation

pub mod autodiff;
pub mod filters;
pub mod systems;
pub mod error;

pub use error::{Error, Result};
