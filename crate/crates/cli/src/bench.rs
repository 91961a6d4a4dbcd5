//! Exact solver vs. heuristics on random instances.

use std::time::Instant;

use serde::Serialize;

use regret_sched_core::exact::SearchConfig;
use regret_sched_core::heuristics::{local_search, midpoint_heuristic};
use regret_sched_core::Time;

use crate::error::CliError;
use crate::random;
use crate::solver::solve_exact_timed;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub trial: usize,
    pub z_star: Time,
    pub midpoint: Time,
    pub local_search: Time,
    pub profiles: u64,
    pub exact_ms: f64,
    pub heuristics_ms: f64,
}

pub const CSV_HEADER: &str =
    "n,m,trial,z_star,midpoint,local_search,profiles,exact_ms,heuristics_ms";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3},{:.3}",
            self.n,
            self.m,
            self.trial,
            self.z_star,
            self.midpoint,
            self.local_search,
            self.profiles,
            self.exact_ms,
            self.heuristics_ms
        )
    }
}

pub struct BenchSpec {
    pub n_min: usize,
    pub n_max: usize,
    pub machines: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_width: Time,
    pub max_lo: Time,
}

pub fn run_bench(spec: &BenchSpec, mut emit: impl FnMut(&BenchRow)) -> Result<(), CliError> {
    if spec.n_min == 0 || spec.n_min > spec.n_max || spec.machines == 0 || spec.trials == 0 {
        return Err(CliError::Usage(
            "need 1 <= n-min <= n-max, machines >= 1, trials >= 1".into(),
        ));
    }
    let mut rng = random::rng(spec.seed);
    for n in spec.n_min..=spec.n_max {
        for trial in 0..spec.trials {
            let inst =
                random::random_instance(&mut rng, n, spec.machines, spec.max_width, spec.max_lo);
            let t = Instant::now();
            let exact = solve_exact_timed(&inst, &SearchConfig::default())?;
            let exact_ms = t.elapsed().as_secs_f64() * 1e3;
            let t = Instant::now();
            let (start, mid) = midpoint_heuristic(&inst)?;
            let (_, ls) = local_search(&inst, &start, spec.seed)?;
            let heuristics_ms = t.elapsed().as_secs_f64() * 1e3;
            emit(&BenchRow {
                n,
                m: spec.machines,
                trial,
                z_star: exact.report.max_regret,
                midpoint: mid.max_regret,
                local_search: ls.max_regret,
                profiles: exact.profiles_visited,
                exact_ms,
                heuristics_ms,
            });
        }
    }
    Ok(())
}
