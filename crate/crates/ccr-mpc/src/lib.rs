//! Data-driven model predictive control for building temperature regulation.
//!
//! The crate combines three ingredients:
//!
//! 1. **Time-series forecasting** of exogenous weather states, either with
//!    gradient-boosted trees over calendar features ([`mpc::CalendarGbtForecaster`])
//!    or with per-state LSTM networks ([`lstm`]).
//! 2. **A forward surrogate** mapping weather states plus control signals to
//!    room temperature. The flagship surrogate is the cluster-classify-regress
//!    model ([`ccr`]): k-means on joint input/output pairs, a classifier that
//!    recovers the cluster label from inputs alone, and one regressor per
//!    label. Plain polynomial, k-NN, MLP, boosted-tree and random-forest
//!    surrogates are available as baselines ([`models`], [`trees`]).
//! 3. **Per-step inverse optimization** of the control signals against a
//!    setpoint schedule, with Nelder-Mead simplex search or an iterative
//!    ensemble smoother ([`optimize`]), run open-loop (batch) or closed-loop
//!    (sequential with sensor feedback and forecaster relearning) by the
//!    controller in [`mpc`].
//!
//! A synthetic resistor-capacitor thermal plant ([`mpc::RcPlant`]) stands in
//! for a real building so every piece can be exercised end to end.
//!
//! Each major capability has a runnable example under `examples/`; start with
//! `ccr_heaviside` for the surrogate and `mpc_closed_loop` for the controller.
//! The `ccr-mpc` binary exposes the same pipeline as subcommands
//! (`gen-data`, `train-forecaster`, `train-forward`, `eval`, `mpc-run`,
//! `report`).

pub mod ccr;
pub mod cli;
pub mod dataio;
mod error;
pub mod forward;
pub mod lstm;
pub mod models;
pub mod mpc;
pub mod optimize;
pub mod trees;

pub use error::{Error, Result};
