//! Scenario files, end-to-end studies and CSV output. Double precision only.

pub mod output;
pub mod scenario;
pub mod silent_check;
pub mod study;

pub use scenario::{load_scenario, parse_scenario, reference_scenario, ScenarioFile};
pub use silent_check::{run_silent_check, SilentRow};
pub use study::{
    clean_reconstruction, emit_moment_table, measure, pipeline, run_clean_study, run_montecarlo, CleanRow, MomentRow,
    MonteCarlo, RunRecord, RunSuccess, Summary,
};
