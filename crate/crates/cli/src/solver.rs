//! Wall-clock and thread-pool wrappers around the exact search.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use regret_sched_core::exact::{
    branches, combine, explore_branch, solve_exact_with_clock, Clock, ExactOutcome, SearchConfig,
};
use regret_sched_core::{Instance, Result};

pub struct InstantClock(Instant);

impl InstantClock {
    pub fn start() -> Self {
        InstantClock(Instant::now())
    }
}

impl Clock for InstantClock {
    fn elapsed(&self) -> Duration {
        self.0.elapsed()
    }
}

/// Exact search with a real clock. Without a node cap the branches run on
/// the current rayon pool and are combined in branch order; with one, the
/// sequential solver runs.
pub fn solve_exact_timed(instance: &Instance, cfg: &SearchConfig) -> Result<ExactOutcome> {
    let clock = InstantClock::start();
    if cfg.node_cap != u64::MAX || rayon::current_num_threads() == 1 {
        return solve_exact_with_clock(instance, cfg, &clock);
    }
    let stop = AtomicBool::new(false);
    let results = branches(instance, cfg)?
        .par_iter()
        .map(|branch| {
            let mut keep_going = |visited: u64| {
                if visited.is_multiple_of(256) && clock.elapsed() >= cfg.time_cap {
                    stop.store(true, Ordering::Relaxed);
                }
                !stop.load(Ordering::Relaxed)
            };
            explore_branch(instance, branch, &mut keep_going, &mut |_, _| {})
        })
        .collect::<Result<Vec<_>>>()?;
    combine(instance, results)
}
