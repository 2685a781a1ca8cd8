//! Levelized cost metrics for photovoltaic systems with grid-scale storage.
//!
//! The crate is organized bottom-up:
//!
//! * [`finance`]: present value, annuity factor and the discounting /
//!   annuitizing LCOE ratios every other metric is built on.
//! * [`components`]: PV array and storage specifications, the shipped cost
//!   presets and the yearly cost/energy schedule builders.
//! * [`dispatch`]: time-series types, the direct/surplus/curtailed energy
//!   split, synthetic irradiance and load generators and CSV ingestion.
//! * [`metrics`]: LCOE of stored energy, LCOD, LCOS variants and system LCOE.
//! * [`scenarios`]: Case 1-3 evaluation, marginal LCOE, rate sweeps and
//!   multi-year case studies.
//! * [`config`] and [`report`]: scenario files and report serialization used
//!   by the command-line front end; [`run`] turns loaded scenarios into
//!   report records.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod components;
pub mod config;
pub mod dispatch;
pub mod error;
pub mod finance;
pub mod metrics;
pub mod report;
pub mod run;
pub mod scenarios;

pub use error::{Error, Result};
