//! Seeded experiment harness: configuration, scenario construction,
//! per-algorithm evaluation and CSV emission.

mod config;
mod oracle;
mod scenario;
mod sweep;

pub use config::{Algorithm, ExperimentConfig, SourcePolicy, Sweep};
pub use oracle::{oracle_check, OracleBounds, OracleCheck, OracleReport};
pub use scenario::{
    build_scenario, evaluate, run_algorithm, AlgorithmRow, Artifact, RowStatus, Scenario,
};
pub use sweep::{
    render_csv, run_cells, run_single, run_sweep, CellResult, ScenarioDump, CSV_HEADER,
};
