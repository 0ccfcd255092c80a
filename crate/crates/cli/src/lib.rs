//! Library side of the `latcut` command-line tool.

pub mod commands;
pub mod instance;
pub mod svg;

pub use commands::{run_command, Command, CommandError, Options, Report};
pub use instance::{parse_instance, Instance, InstanceError};
