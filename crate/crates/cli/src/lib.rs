//! Command-line front end for the `tritangle` library.

pub mod config;
pub mod error;
pub mod run;
pub mod spec;

pub use config::{load_config, parse_args, parse_config_str, Command, RunConfig};
pub use error::CliError;
pub use run::{run, Outcome};
pub use spec::{ChannelSpec, StateSpec};
