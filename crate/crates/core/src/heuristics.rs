//! Inexact solvers, each certified afterwards by the exact regret
//! evaluator.

use alloc::vec::Vec;

use crate::deterministic::spt_schedule;
use crate::error::Result;
use crate::model::{
    multiplier_counts, multipliers, Instance, RegretReport, Scenario, Schedule, Time,
};
use crate::regret::{max_regret, RegretEvaluator};

/// SPT on the midpoint scenario. Durations are `lo + hi` (twice the
/// midpoint) so they stay integral; SPT only needs the order.
pub fn midpoint_heuristic(instance: &Instance) -> Result<(Schedule, RegretReport)> {
    let doubled = Scenario::new(instance.jobs().iter().map(|iv| iv.lo + iv.hi).collect())?;
    let schedule = spt_schedule(&doubled, instance.machines());
    let report = max_regret(instance, &schedule)?;
    Ok((schedule, report))
}

fn is_valid_profile(mult: &[usize], machines: usize) -> bool {
    match multiplier_counts(mult) {
        Some(c) => c.first().is_none_or(|&c1| c1 <= machines) && c.windows(2).all(|w| w[0] >= w[1]),
        None => false,
    }
}

/// Descent over multiplier profiles. Each round scans relocations (job
/// `i` to multiplier `k`, ascending `k`) and then swaps (jobs `i < j` with
/// different multipliers), taking the first strict improvement. Jobs are
/// scanned starting at `seed % n` and wrapping around; `seed = 0` scans in
/// ascending index order. Stops at a local minimum.
///
/// If no move improves on `start`, `start` itself is returned.
pub fn local_search(
    instance: &Instance,
    start: &Schedule,
    seed: u64,
) -> Result<(Schedule, RegretReport)> {
    start.check_against(instance)?;
    let n = instance.job_count();
    let m = instance.machines();
    let mut eval = RegretEvaluator::new(instance)?;
    let mut mult = multipliers(start).into_vec();
    let mut current = eval.value(&mult);
    let offset = (seed % n as u64) as usize;
    let order: Vec<usize> = (0..n).map(|r| (r + offset) % n).collect();
    let mut moved = false;

    'rounds: loop {
        for &i in &order {
            let original = mult[i];
            for k in 1..=n {
                if k == original {
                    continue;
                }
                mult[i] = k;
                if is_valid_profile(&mult, m) {
                    let v = eval.value(&mult);
                    if v < current {
                        current = v;
                        moved = true;
                        continue 'rounds;
                    }
                }
            }
            mult[i] = original;
        }
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[a + 1..] {
                if mult[i] == mult[j] {
                    continue;
                }
                mult.swap(i, j);
                let v = eval.value(&mult);
                if v < current {
                    current = v;
                    moved = true;
                    continue 'rounds;
                }
                mult.swap(i, j);
            }
        }
        break;
    }

    let schedule = if moved {
        Schedule::from_multipliers(m, &mult)?
    } else {
        start.clone()
    };
    let report = max_regret(instance, &schedule)?;
    debug_assert_eq!(report.max_regret, current);
    Ok((schedule, report))
}

/// Score of every neighbor of `start` in scan order, for inspection.
pub fn neighborhood_values(instance: &Instance, start: &Schedule) -> Result<Vec<Time>> {
    start.check_against(instance)?;
    let n = instance.job_count();
    let mut eval = RegretEvaluator::new(instance)?;
    let base = multipliers(start).into_vec();
    let mut out = Vec::new();
    for i in 0..n {
        for k in 1..=n {
            let mut mult = base.clone();
            if k == mult[i] {
                continue;
            }
            mult[i] = k;
            if is_valid_profile(&mult, instance.machines()) {
                out.push(eval.value(&mult));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if base[i] != base[j] {
                let mut mult = base.clone();
                mult.swap(i, j);
                out.push(eval.value(&mult));
            }
        }
    }
    Ok(out)
}
