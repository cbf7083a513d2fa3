//! Configuration, orchestration and file output for the `blochkit` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;
pub mod svg;

pub use config::{parse_config, ConfigError, Mode, RunConfig};
pub use run::{run, RunError, RunOutputs};
pub use svg::{render_svg, SvgError, SvgStyle};
