//! Maximum regret of a fixed schedule.
//!
//! For a schedule with multipliers `mult`, the maximum regret is
//! `sum_i mult(i) * hi_i - A*`, where `A*` is a minimum-cost assignment of
//! the jobs to (machine, position) slots with cost
//! `cost(i, k) = k * lo_i + (hi_i - lo_i) * min(mult(i), k)`. On identical
//! machines the cost does not depend on the machine, so slots are positions
//! `k = 1..n`, each offered `min(m, n)` times.

use alloc::vec;
use alloc::vec::Vec;

use crate::assignment::AssignmentSolver;
use crate::deterministic::{optimal_flow_time_of, spt_schedule};
use crate::error::{Error, Result};
use crate::model::{flow_time_with, multipliers, Instance, RegretReport, Scenario, Schedule, Time};

/// Default cap on `n` for the extreme-scenario enumeration oracle.
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// Slot costs of one schedule: `cost(i, k)` for jobs `i` and positions
/// `k = 1..=n` counted from the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotCostMatrix {
    n: usize,
    costs: Vec<Time>,
}

impl SlotCostMatrix {
    pub fn new(instance: &Instance, mult: &[usize]) -> Self {
        let n = instance.job_count();
        let mut costs = Vec::with_capacity(n * n);
        for (iv, &m_i) in instance.jobs().iter().zip(mult) {
            for k in 1..=n {
                costs.push(slot_cost(iv.lo, iv.hi, m_i, k));
            }
        }
        Self { n, costs }
    }

    /// `k` is 1-based.
    pub fn cost(&self, job: usize, k: usize) -> Time {
        self.costs[job * self.n + (k - 1)]
    }

    pub fn job_count(&self) -> usize {
        self.n
    }
}

#[inline]
fn slot_cost(lo: Time, hi: Time, mult: usize, k: usize) -> Time {
    k as Time * lo + (hi - lo) * mult.min(k) as Time
}

/// Evaluates many multiplier profiles of one instance, reusing buffers.
#[derive(Debug, Clone)]
pub struct RegretEvaluator<'a> {
    instance: &'a Instance,
    copies: usize,
    solver: AssignmentSolver,
    assignment: Vec<usize>,
}

impl<'a> RegretEvaluator<'a> {
    /// Fails on negative lower bounds, which the slot-cost model does not
    /// cover.
    pub fn new(instance: &'a Instance) -> Result<Self> {
        if let Some((job, iv)) = instance.jobs().iter().enumerate().find(|(_, iv)| iv.lo < 0) {
            return Err(Error::NegativeBound { job, lo: iv.lo });
        }
        Ok(Self {
            instance,
            copies: instance.machines().min(instance.job_count()),
            solver: AssignmentSolver::new(),
            assignment: Vec::new(),
        })
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    /// Maximum regret of any schedule with this job → multiplier map.
    pub fn value(&mut self, mult: &[usize]) -> Time {
        self.solve(mult).0
    }

    /// Returns the maximum regret and, per job, the position (multiplier)
    /// it takes in a worst-case alternative. Positions are contiguous:
    /// the number of jobs at position `k` is nonincreasing in `k`.
    pub fn solve(&mut self, mult: &[usize]) -> (Time, Vec<usize>) {
        let jobs = self.instance.jobs();
        let n = jobs.len();
        debug_assert_eq!(mult.len(), n);
        let copies = self.copies;
        let upper: Time = jobs
            .iter()
            .zip(mult)
            .map(|(iv, &k)| k as Time * iv.hi)
            .sum();
        let best = self.solver.solve(
            n,
            n * copies,
            |i, c| {
                let iv = jobs[i];
                slot_cost(iv.lo, iv.hi, mult[i], c / copies + 1)
            },
            &mut self.assignment,
        );
        let mut position: Vec<usize> = self.assignment.iter().map(|&c| c / copies + 1).collect();
        make_contiguous(&mut position, n);
        debug_assert_eq!(
            position
                .iter()
                .enumerate()
                .map(|(i, &k)| slot_cost(jobs[i].lo, jobs[i].hi, mult[i], k))
                .sum::<Time>(),
            best
        );
        (upper - best, position)
    }
}

/// Moves jobs to lower positions until the per-position counts are
/// nonincreasing. Slot costs are nondecreasing in the position when
/// `lo >= 0`, so the assignment cost cannot grow.
fn make_contiguous(position: &mut [usize], n: usize) {
    let mut counts = vec![0usize; n + 2];
    for &k in position.iter() {
        counts[k] += 1;
    }
    let mut k = 1;
    while k < n {
        if counts[k] < counts[k + 1] {
            let job = position
                .iter()
                .position(|&p| p == k + 1)
                .expect("count is positive");
            position[job] = k;
            counts[k] += 1;
            counts[k + 1] -= 1;
            k = k.saturating_sub(1).max(1);
        } else {
            k += 1;
        }
    }
}

/// Maximum regret of `schedule` with a certificate: the worst-case
/// scenario and a worst-case alternative that is optimal for it.
pub fn max_regret(instance: &Instance, schedule: &Schedule) -> Result<RegretReport> {
    schedule.check_against(instance)?;
    let mult = multipliers(schedule);
    let mut eval = RegretEvaluator::new(instance)?;
    let (value, position) = eval.solve(mult.as_slice());
    let alternative = Schedule::from_multipliers(instance.machines(), &position)?;
    let scenario = scenario_from_multipliers(instance, mult.as_slice(), &position);
    let check = regret_with(mult.as_slice(), &position, scenario.durations());
    if check != value {
        return Err(Error::Internal(
            "assignment value disagrees with its certificate",
        ));
    }
    Ok(RegretReport {
        max_regret: value,
        worst_scenario: scenario,
        worst_alternative: alternative,
    })
}

/// Worst case of `schedule` against a fixed alternative: job `i` at `hi`
/// when `mult_s(i) - mult_alt(i) >= 0`, at `lo` otherwise.
pub fn worst_case_scenario(
    instance: &Instance,
    schedule: &Schedule,
    alternative: &Schedule,
) -> Scenario {
    let ms = multipliers(schedule);
    let ma = multipliers(alternative);
    scenario_from_multipliers(instance, ms.as_slice(), ma.as_slice())
}

fn scenario_from_multipliers(instance: &Instance, ms: &[usize], ma: &[usize]) -> Scenario {
    let durations = instance
        .jobs()
        .iter()
        .zip(ms.iter().zip(ma))
        .map(|(iv, (&a, &b))| if a >= b { iv.hi } else { iv.lo })
        .collect();
    Scenario::from_trusted(durations)
}

/// `max_S F(schedule, S) - F(alternative, S)`, attained at
/// [`worst_case_scenario`].
pub fn regret_against(instance: &Instance, schedule: &Schedule, alternative: &Schedule) -> Time {
    let ms = multipliers(schedule);
    let ma = multipliers(alternative);
    let scenario = scenario_from_multipliers(instance, ms.as_slice(), ma.as_slice());
    regret_with(ms.as_slice(), ma.as_slice(), scenario.durations())
}

fn regret_with(ms: &[usize], ma: &[usize], p: &[Time]) -> Time {
    ms.iter()
        .zip(ma)
        .zip(p)
        .map(|((&a, &b), &x)| (a as Time - b as Time) * x)
        .sum()
}

/// Reference evaluator: enumerates all `2^n` extreme scenarios. Ties go to
/// the lexicographically smallest duration vector; the alternative is the
/// SPT schedule of the argmax scenario.
pub fn oracle_max_regret(
    instance: &Instance,
    schedule: &Schedule,
    cap: usize,
) -> Result<RegretReport> {
    schedule.check_against(instance)?;
    let n = instance.job_count();
    if n > cap.min(62) {
        return Err(Error::CapExceeded { n, cap });
    }
    let mult = multipliers(schedule);
    let m = instance.machines();
    let mut best: Option<(Time, Vec<Time>)> = None;
    let mut p = vec![0 as Time; n];
    let mut scratch = vec![0 as Time; n];
    for mask in 0u64..(1u64 << n) {
        for (i, iv) in instance.jobs().iter().enumerate() {
            p[i] = if mask >> i & 1 == 1 { iv.hi } else { iv.lo };
        }
        scratch.copy_from_slice(&p);
        let regret = flow_time_with(mult.as_slice(), &p) - optimal_flow_time_of(&mut scratch, m);
        let better = match &best {
            None => true,
            Some((v, q)) => regret > *v || (regret == *v && p < *q),
        };
        if better {
            best = Some((regret, p.clone()));
        }
    }
    let (value, durations) = best.expect("at least one scenario");
    let scenario = Scenario::from_trusted(durations);
    let alternative = spt_schedule(&scenario, m);
    Ok(RegretReport {
        max_regret: value,
        worst_scenario: scenario,
        worst_alternative: alternative,
    })
}
