//! Experiment harness: configuration, SER sweeps, convergence traces and
//! compression-ratio tables, all rendered as CSV.

pub mod config;
pub mod report;
pub mod sweep;
pub mod tables;

pub use config::{Pipeline, SimConfig};
pub use sweep::{
    build_scenario, generate_grid, run_sweep, ser_csv, trace_convergence, trace_csv, transport, wilson_interval,
    write_ser_csv, SerRecord,
};
pub use tables::{reproduce_tables, tables_csv, TableRow};
