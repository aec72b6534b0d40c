//! Configuration and sweep machinery behind the `nemslab` binary, exposed as
//! a library so integration tests can drive runs without spawning processes.

pub mod config;
pub mod runner;

pub use config::{
    apply_flags, dump_presets, parse_config, parse_grid_flag, resolve, ConfigError, FlagOverrides,
    Mode, RawConfig, SweepConfig, PRESET_NAMES,
};
pub use runner::{
    columns_for, constant_set_hash, gnuplot_script, grid_points, render_csv, run, Cell, RunError,
    SweepResult,
};
