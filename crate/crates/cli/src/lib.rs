//! File formats, seeded generators, a threaded exact solver and the
//! verification suites behind the `regret-sched` command.

pub mod bench;
pub mod error;
pub mod formats;
pub mod random;
pub mod solver;
pub mod verify;

pub use error::CliError;
