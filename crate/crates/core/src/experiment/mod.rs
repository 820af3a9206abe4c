//! Experiments driven by configuration files: the λ sweep, the linear regulator, the
//! existence-condition checker with its discrete Gronwall constants, and a self test.

mod condition;
mod config;
mod gronwall;
mod regulator;
mod selftest;
mod sweep;

pub use condition::{check_condition, ConditionInputs, ConditionReport};
pub use config::{parse_config, ConfigFile, SweepConfig};
pub use gronwall::{chained_constants, discrete_gronwall_bound, gronwall_recursion};
pub use regulator::{run_regulator, RegulatorReport, RegulatorRun};
pub use selftest::{run_selftest, SelfCheck};
pub use sweep::{emit_csv, emit_plotdata, parse_csv, run_lambda_sweep, table_csv, SweepRow, SweepTable, CSV_HEADER};
