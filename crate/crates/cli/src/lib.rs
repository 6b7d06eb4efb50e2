//! Scenario files, event logs, oracle checks, SVG snapshots and statistics
//! for the `kvd` command-line tool.

pub mod check;
pub mod eventlog;
pub mod scenario_file;
pub mod snapshot;
pub mod stats;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Invalid input or a failed comparison.
    pub const FAILURE: i32 = 1;
    /// Engine or internal error.
    pub const INTERNAL: i32 = 2;
}
