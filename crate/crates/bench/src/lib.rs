//! Experiment plumbing for the dancing-walk orientation algorithms and the
//! cuckoo table: workload generators, trial runners, scaling sweeps and
//! verification, shared by the `dwalk` binary and the acceptance suite.

pub mod cuckoo_run;
pub mod orient_run;
pub mod output;
pub mod scaling;
pub mod verify;
pub mod workload;

pub use cuckoo_run::{generate_script, run_cuckoo, CuckooParams, CuckooRunRecord, ScriptKind};
pub use orient_run::{run_orient, run_trial, RunRecord};
pub use output::{write_rows, Format, Row};
pub use scaling::{scaling_report, ScalingRow};
pub use workload::{generate_workload, WorkloadKind, WorkloadSpec};
