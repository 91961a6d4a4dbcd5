//! Exhaustive robust-optimal search for small instances.
//!
//! Maximum regret depends only on the job → multiplier map, not on which
//! machine a job runs on, so the search enumerates multiplier profiles:
//! for each load vector `n_1 >= n_2 >= ... ` (at most `m` parts), multiplier
//! `k` has capacity `c_k = #{j : n_j >= k}`, and every assignment of jobs
//! to multipliers respecting the capacities is evaluated once.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::error::{Error, Result};
use crate::model::{multipliers, Instance, MultiplierProfile, RegretReport, Schedule, Time};
use crate::regret::{max_regret, RegretEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Only the balanced load vector; requires `m | n`.
    pub balanced_only: bool,
    /// Maximum number of profiles evaluated.
    pub node_cap: u64,
    /// Wall-clock budget, measured by the caller's [`Clock`].
    pub time_cap: Duration,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            balanced_only: false,
            node_cap: u64::MAX,
            time_cap: Duration::MAX,
        }
    }
}

impl SearchConfig {
    pub fn balanced() -> Self {
        Self {
            balanced_only: true,
            ..Self::default()
        }
    }

    fn validate(&self, instance: &Instance) -> Result<()> {
        if self.node_cap == 0 {
            return Err(Error::InvalidConfig("node cap must be positive"));
        }
        if self.time_cap.is_zero() {
            return Err(Error::InvalidConfig("time cap must be positive"));
        }
        if self.balanced_only && !instance.jobs_divisible_by_machines() {
            return Err(Error::NotDivisible {
                jobs: instance.job_count(),
                machines: instance.machines(),
            });
        }
        Ok(())
    }
}

/// Elapsed time since the search started. The core crate has no clock of
/// its own; [`NoClock`] disables the time cap.
pub trait Clock {
    fn elapsed(&self) -> Duration;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub schedule: Schedule,
    pub report: RegretReport,
    pub profile: MultiplierProfile,
    /// False when a cap stopped the search; the result is then an incumbent.
    pub optimal: bool,
    pub profiles_visited: u64,
}

/// Independent slice of the search space: one load vector with the
/// multiplier of job 0 fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub loads: Vec<usize>,
    pub first: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BranchResult {
    pub best: Option<(Time, Vec<usize>)>,
    pub visited: u64,
    pub complete: bool,
}

/// Nonincreasing partitions of `n` into at most `m` positive parts, in
/// lexicographically decreasing order.
pub fn load_vectors(n: usize, m: usize, balanced_only: bool) -> Vec<Vec<usize>> {
    if balanced_only {
        return if m > 0 && n.is_multiple_of(m) {
            vec![vec![n / m; m]]
        } else {
            Vec::new()
        };
    }
    fn rec(
        rest: usize,
        cap: usize,
        parts_left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for part in (1..=cap.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, m, &mut Vec::new(), &mut out);
    out
}

/// `c_k = #{j : n_j >= k}` for `k = 1..=max load`.
pub fn capacities(loads: &[usize]) -> Vec<usize> {
    let top = loads.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|k| loads.iter().filter(|&&l| l >= k).count())
        .collect()
}

/// Number of multiplier profiles [`solve_exact`] visits:
/// `sum over load vectors of n! / prod_k c_k!`.
pub fn count_search_space(instance: &Instance, cfg: &SearchConfig) -> Result<u64> {
    cfg.validate(instance)?;
    let n = instance.job_count();
    let mut total: u128 = 0;
    for loads in load_vectors(n, instance.machines(), cfg.balanced_only) {
        let caps = capacities(&loads);
        // multinomial as a product of binomials, each exact
        let mut ways: u128 = 1;
        let mut left = n as u128;
        for &c in &caps {
            ways = ways
                .checked_mul(binomial(left, c as u128).ok_or(Error::Overflow)?)
                .ok_or(Error::Overflow)?;
            left -= c as u128;
        }
        total = total.checked_add(ways).ok_or(Error::Overflow)?;
    }
    u64::try_from(total).map_err(|_| Error::Overflow)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// All branches of the search, in the order the sequential solver visits
/// them.
pub fn branches(instance: &Instance, cfg: &SearchConfig) -> Result<Vec<Branch>> {
    cfg.validate(instance)?;
    let mut out = Vec::new();
    for loads in load_vectors(instance.job_count(), instance.machines(), cfg.balanced_only) {
        let depth = loads[0];
        for first in 1..=depth {
            out.push(Branch {
                loads: loads.clone(),
                first,
            });
        }
    }
    Ok(out)
}

/// Enumerates one branch in lexicographic profile order. `keep_going` is
/// asked before every evaluation with the number of profiles visited so
/// far in this branch; `visit` sees every evaluated profile.
pub fn explore_branch(
    instance: &Instance,
    branch: &Branch,
    keep_going: &mut dyn FnMut(u64) -> bool,
    visit: &mut dyn FnMut(&[usize], Time),
) -> Result<BranchResult> {
    let mut eval = RegretEvaluator::new(instance)?;
    let n = instance.job_count();
    let mut remaining = capacities(&branch.loads);
    let mut mult = vec![0usize; n];
    if branch.first == 0 || branch.first > remaining.len() {
        return Err(Error::IndexOutOfRange {
            index: branch.first,
            limit: remaining.len(),
        });
    }
    remaining[branch.first - 1] -= 1;
    mult[0] = branch.first;

    struct Walk<'e, 'i, 'c> {
        eval: &'e mut RegretEvaluator<'i>,
        remaining: Vec<usize>,
        mult: Vec<usize>,
        result: BranchResult,
        keep_going: &'c mut dyn FnMut(u64) -> bool,
        visit: &'c mut dyn FnMut(&[usize], Time),
    }

    impl Walk<'_, '_, '_> {
        // returns false once stopped
        fn go(&mut self, job: usize) -> bool {
            if job == self.mult.len() {
                if !(self.keep_going)(self.result.visited) {
                    self.result.complete = false;
                    return false;
                }
                let value = self.eval.value(&self.mult);
                self.result.visited += 1;
                (self.visit)(&self.mult, value);
                let better = match &self.result.best {
                    None => true,
                    Some((v, _)) => value < *v,
                };
                if better {
                    self.result.best = Some((value, self.mult.clone()));
                }
                return true;
            }
            for k in 0..self.remaining.len() {
                if self.remaining[k] == 0 {
                    continue;
                }
                self.remaining[k] -= 1;
                self.mult[job] = k + 1;
                let cont = self.go(job + 1);
                self.remaining[k] += 1;
                if !cont {
                    return false;
                }
            }
            true
        }
    }

    let mut walk = Walk {
        eval: &mut eval,
        remaining,
        mult,
        result: BranchResult {
            complete: true,
            ..BranchResult::default()
        },
        keep_going,
        visit,
    };
    walk.go(1);
    Ok(walk.result)
}

/// Visits every profile of the search space with its maximum regret.
pub fn enumerate_profiles(
    instance: &Instance,
    cfg: &SearchConfig,
    visit: &mut dyn FnMut(&[usize], Time),
) -> Result<()> {
    for branch in branches(instance, cfg)? {
        explore_branch(instance, &branch, &mut |_| true, visit)?;
    }
    Ok(())
}

/// Folds branch results into the final answer: smallest value, ties to
/// the lexicographically smallest profile.
pub fn combine(
    instance: &Instance,
    results: impl IntoIterator<Item = BranchResult>,
) -> Result<ExactOutcome> {
    let mut best: Option<(Time, Vec<usize>)> = None;
    let mut visited = 0u64;
    let mut complete = true;
    for r in results {
        visited += r.visited;
        complete &= r.complete;
        if let Some(cand) = r.best {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    let (value, profile) = best.ok_or(Error::BudgetExhausted)?;
    let schedule = Schedule::from_multipliers(instance.machines(), &profile)?;
    debug_assert_eq!(multipliers(&schedule).as_slice(), &profile[..]);
    let report = max_regret(instance, &schedule)?;
    if report.max_regret != value {
        return Err(Error::Internal("profile value changed on materialization"));
    }
    Ok(ExactOutcome {
        profile: multipliers(&schedule),
        schedule,
        report,
        optimal: complete,
        profiles_visited: visited,
    })
}

/// Minimizes maximum regret over all schedules (or all balanced ones).
pub fn solve_exact(instance: &Instance, cfg: &SearchConfig) -> Result<ExactOutcome> {
    solve_exact_with_clock(instance, cfg, &NoClock)
}

pub fn solve_exact_with_clock(
    instance: &Instance,
    cfg: &SearchConfig,
    clock: &dyn Clock,
) -> Result<ExactOutcome> {
    let mut results = Vec::new();
    let mut spent = 0u64;
    let mut stopped = false;
    for branch in branches(instance, cfg)? {
        if stopped {
            results.push(BranchResult::default());
            continue;
        }
        let base = spent;
        let mut keep_going = |local: u64| {
            let total = base + local;
            total < cfg.node_cap && (!total.is_multiple_of(256) || clock.elapsed() < cfg.time_cap)
        };
        let r = explore_branch(instance, &branch, &mut keep_going, &mut |_, _| {})?;
        spent += r.visited;
        stopped = !r.complete;
        results.push(r);
    }
    combine(instance, results)
}
