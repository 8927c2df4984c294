//! Scenario files, report formats and the `pdm` command-line front end for
//! [`pdm_core`].

pub mod config;
pub mod error;
pub mod json;
pub mod literal;
pub mod output;
pub mod run;
pub mod verify;

pub use config::{Kind, RawScenario, Scenario, Suite};
pub use error::{CliError, CliResult};
pub use run::{run_scenario, RunSummary};
pub use verify::{run_suite, Fault, VerifyReport};
