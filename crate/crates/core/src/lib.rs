//! Interval minmax regret scheduling on parallel identical machines with
//! the total completion time criterion.
//!
//! Every job has a processing time known only up to an interval
//! `[lo, hi]`. A schedule's maximum regret is the largest gap, over all
//! scenarios inside the interval box, between its flow time and the optimal
//! flow time of that scenario. This crate evaluates maximum regret exactly
//! through an assignment problem, solves small instances to robust
//! optimality, implements the structural transforms that make balanced and
//! machine-aligned schedules sufficient, solves the equal-midpoint single
//! machine case in closed form, and builds the 3-PARTITION → 4-PP →
//! scheduling hardness reductions together with brute-force deciders.
//!
//! The crate is `no_std` and only needs `alloc`; all arithmetic is exact
//! integer arithmetic.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assignment;
pub mod deterministic;
pub mod error;
pub mod exact;
pub mod heuristics;
pub mod model;
pub mod reductions;
pub mod regret;
pub mod single_machine;
pub mod structure;

pub use error::{Error, Result};
pub use model::{
    flow_time, load_vector, multipliers, Instance, JobInterval, MultiplierProfile, RegretReport,
    Scenario, Schedule, Time,
};
