//! Checkpoint schedules for the discrete adjoint of multistage time
//! integrators.
//!
//! - [`revolve`]: classical binomial checkpointing (solutions only).
//! - [`modified`]: the same with checkpoints shifted one step to include stages.
//! - [`cams`]: optimal schedules mixing solution and stage checkpoints.
//! - [`oracle`]: exhaustive search used to certify the tables.
//! - [`executor`]: validating replay and consultant-style drivers.
//! - [`adjoint`]: an explicit RK integrator and its adjoint as a real engine.
//!
//! Memory is counted in units of one solution vector. The solution and stages
//! of the step just computed are working memory and never count.

pub mod adjoint;
pub mod cams;
pub mod error;
pub mod executor;
mod grid;
pub mod modified;
pub mod oracle;
mod plan;
pub mod revolve;
pub mod schedule;
pub mod units;

pub use cams::{cams_schedule, CamsTables, Variant};
pub use error::{Error, Result};
pub use executor::{consultant_run, execute, CountingEngine, ExecutionMetrics, Policy};
pub use modified::{crossover, modified_cost, modified_schedule, select_strategy};
pub use revolve::{repetition_number, revolve_cost, revolve_dp_cost, revolve_schedule};
pub use schedule::{Action, Schedule};
pub use units::{unit_cost, CheckpointRecord, CheckpointType, SchemeInfo};
