//! Independent checkers used by the property tests, the acceptance suite and
//! the `verify` subcommand. Nothing here reuses the component bookkeeping of
//! `dwalk-core`; every check recomputes from plain data.

pub mod epsilon;
pub mod orientation;
pub mod recurrence;
pub mod replay;
pub mod viability;

pub use epsilon::{check_epsilon_viability, EpsilonReport, WindowVerdict};
pub use orientation::{check_orientation, OrientationLimits, OrientationReport, Violation};
pub use recurrence::RankRecurrence;
pub use replay::{
    instrumented_counters, replay_observed, replay_with_oracle, Divergence, InstrumentedCounters,
    InstrumentedTable, ReferenceMap, ReplaySummary,
};
pub use viability::{check_viability, ViabilityVerdict};
