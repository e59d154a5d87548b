//! Scenario runner, parameter sweeps and verification suites built on
//! `liftoff-core`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod output;
pub mod run;
pub mod scenario;
pub mod sweep;
pub mod verify;

pub use run::{run, simulate, RunError, RunOptions, RunReport};
pub use scenario::{parse_scenario, InitialSpec, ProfileSpec, Scenario, ScenarioError};
pub use sweep::{sweep, SweepParam, SweepResult, SweepRow};
pub use verify::{run_suite, verify, CheckResult, Criterion, Suite, SuiteReport};
