//! Instances, scenarios, schedules and the flow-time objective.
//!
//! Job indices are 0-based. A [`Schedule`] stores every machine's jobs in
//! processing order (first-to-run first); the "k-th to the last" multiplier
//! of a job is derived from it by [`multipliers`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Processing times are integral time units.
pub type Time = i64;

/// Upper bound on `n * sum(hi)` for a valid instance. Every flow time,
/// slot cost and assignment potential derived from the instance stays well
/// inside `i64` under this bound.
pub const INSTANCE_MAGNITUDE_LIMIT: i64 = 1 << 58;

/// Upper bound on `n * sum(durations)` for a scenario. Twice the instance
/// limit so doubled midpoint scenarios still fit.
pub const SCENARIO_MAGNITUDE_LIMIT: i64 = 1 << 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JobInterval {
    pub lo: Time,
    pub hi: Time,
}

impl JobInterval {
    pub const fn new(lo: Time, hi: Time) -> Self {
        Self { lo, hi }
    }

    pub const fn width(&self) -> Time {
        self.hi - self.lo
    }
}

impl From<(Time, Time)> for JobInterval {
    fn from((lo, hi): (Time, Time)) -> Self {
        Self { lo, hi }
    }
}

/// Machine count plus one processing-time interval per job.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    machines: usize,
    jobs: Vec<JobInterval>,
}

impl Instance {
    /// Validates and builds an instance. Reports the first violated
    /// invariant: per-job bounds in index order, then the machine count,
    /// then the job count, then the magnitude limit.
    pub fn new(machines: usize, jobs: Vec<JobInterval>) -> Result<Self> {
        for (job, iv) in jobs.iter().enumerate() {
            if iv.lo < 0 {
                return Err(Error::NegativeBound { job, lo: iv.lo });
            }
            if iv.lo > iv.hi {
                return Err(Error::InvertedBounds {
                    job,
                    lo: iv.lo,
                    hi: iv.hi,
                });
            }
        }
        if machines < 1 {
            return Err(Error::NoMachines);
        }
        if jobs.is_empty() {
            return Err(Error::NoJobs);
        }
        let total = jobs
            .iter()
            .try_fold(0i64, |acc, iv| acc.checked_add(iv.hi))
            .ok_or(Error::Overflow)?;
        let scaled = i64::try_from(jobs.len())
            .ok()
            .and_then(|n| n.checked_mul(total))
            .ok_or(Error::Overflow)?;
        if scaled > INSTANCE_MAGNITUDE_LIMIT {
            return Err(Error::Overflow);
        }
        Ok(Self { machines, jobs })
    }

    /// Shorthand for tests and examples: `Instance::from_pairs(2, &[(0, 2), (1, 3)])`.
    pub fn from_pairs(machines: usize, pairs: &[(Time, Time)]) -> Result<Self> {
        Self::new(
            machines,
            pairs.iter().copied().map(JobInterval::from).collect(),
        )
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> &[JobInterval] {
        &self.jobs
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    pub fn job(&self, i: usize) -> JobInterval {
        self.jobs[i]
    }

    /// Whether `m` divides `n`, i.e. balanced schedules exist.
    pub fn jobs_divisible_by_machines(&self) -> bool {
        self.jobs.len().is_multiple_of(self.machines)
    }

    /// The scenario with every job at its lower bound.
    pub fn lower_scenario(&self) -> Scenario {
        Scenario {
            durations: self.jobs.iter().map(|iv| iv.lo).collect(),
        }
    }

    /// The scenario with every job at its upper bound.
    pub fn upper_scenario(&self) -> Scenario {
        Scenario {
            durations: self.jobs.iter().map(|iv| iv.hi).collect(),
        }
    }
}

/// One concrete processing-time vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scenario {
    durations: Vec<Time>,
}

impl Scenario {
    pub fn new(durations: Vec<Time>) -> Result<Self> {
        let mut total = 0i64;
        for (job, &value) in durations.iter().enumerate() {
            if value < 0 {
                return Err(Error::NegativeDuration { job, value });
            }
            total = total.checked_add(value).ok_or(Error::Overflow)?;
        }
        let scaled = i64::try_from(durations.len())
            .ok()
            .and_then(|n| n.checked_mul(total))
            .ok_or(Error::Overflow)?;
        if scaled > SCENARIO_MAGNITUDE_LIMIT {
            return Err(Error::Overflow);
        }
        Ok(Self { durations })
    }

    /// Builds a scenario and checks it lies inside the instance's box.
    pub fn within(instance: &Instance, durations: Vec<Time>) -> Result<Self> {
        if durations.len() != instance.job_count() {
            return Err(Error::LengthMismatch {
                expected: instance.job_count(),
                found: durations.len(),
            });
        }
        for (job, (&value, iv)) in durations.iter().zip(instance.jobs()).enumerate() {
            if value < iv.lo || value > iv.hi {
                return Err(Error::OutOfInterval {
                    job,
                    value,
                    lo: iv.lo,
                    hi: iv.hi,
                });
            }
        }
        // Inside the box implies the magnitude bound.
        Ok(Self { durations })
    }

    pub(crate) fn from_trusted(durations: Vec<Time>) -> Self {
        Self { durations }
    }

    pub fn durations(&self) -> &[Time] {
        &self.durations
    }

    pub fn len(&self) -> usize {
        self.durations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.durations.is_empty()
    }

    pub fn into_durations(self) -> Vec<Time> {
        self.durations
    }
}

/// Per-machine job sequences in processing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    machines: Vec<Vec<usize>>,
}

impl Schedule {
    /// Builds a schedule whose sequences partition `0..n`, where `n` is the
    /// total number of entries.
    pub fn new(machines: Vec<Vec<usize>>) -> Result<Self> {
        if machines.is_empty() {
            return Err(Error::NoMachines);
        }
        let n: usize = machines.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for &job in machines.iter().flatten() {
            if job >= n {
                return Err(Error::JobOutOfRange { job, n });
            }
            if core::mem::replace(&mut seen[job], true) {
                return Err(Error::DuplicateJob(job));
            }
        }
        Ok(Self { machines })
    }

    /// Checks that the schedule fits `instance`: same machine and job counts.
    pub fn check_against(&self, instance: &Instance) -> Result<()> {
        if self.machines.len() != instance.machines() {
            return Err(Error::MachineCountMismatch {
                expected: instance.machines(),
                found: self.machines.len(),
            });
        }
        let n = self.job_count();
        if n != instance.job_count() {
            return Err(if n < instance.job_count() {
                Error::MissingJob(n)
            } else {
                Error::JobOutOfRange {
                    job: instance.job_count(),
                    n: instance.job_count(),
                }
            });
        }
        Ok(())
    }

    /// Rebuilds a schedule from a job → multiplier map.
    ///
    /// With `c_k` jobs carrying multiplier `k`, the counts must be
    /// nonincreasing in `k` and `c_1 <= machines`. The `c_k` jobs of
    /// multiplier `k` (ascending job index) go to machines `0..c_k`, so
    /// machine 0 holds the most jobs.
    pub fn from_multipliers(machines: usize, mult: &[usize]) -> Result<Self> {
        if machines < 1 {
            return Err(Error::NoMachines);
        }
        let n = mult.len();
        let counts = multiplier_counts(mult).ok_or(Error::Internal("multiplier out of range"))?;
        if counts.first().copied().unwrap_or(0) > machines {
            return Err(Error::Internal("more jobs per position than machines"));
        }
        if counts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Internal("multiplier profile is not contiguous"));
        }
        let loads: Vec<usize> = (0..machines)
            .map(|j| counts.iter().take_while(|&&c| c > j).count())
            .collect();
        let mut rows: Vec<Vec<usize>> = loads.iter().map(|&l| vec![usize::MAX; l]).collect();
        let mut next_machine = vec![0usize; counts.len() + 1];
        for (job, &k) in mult.iter().enumerate() {
            let j = next_machine[k];
            next_machine[k] += 1;
            rows[j][loads[j] - k] = job;
        }
        debug_assert!(rows.iter().flatten().all(|&j| j < n));
        Ok(Self { machines: rows })
    }

    pub fn machines(&self) -> &[Vec<usize>] {
        &self.machines
    }

    pub fn machine_count(&self) -> usize {
        self.machines.len()
    }

    pub fn job_count(&self) -> usize {
        self.machines.iter().map(Vec::len).sum()
    }

    pub fn into_machines(self) -> Vec<Vec<usize>> {
        self.machines
    }

    /// True when every machine holds the same number of jobs.
    pub fn is_balanced(&self) -> bool {
        let first = self.machines[0].len();
        self.machines.iter().all(|m| m.len() == first)
    }
}

/// Job → multiplier map: a job at 0-based position `idx` on a machine
/// holding `L` jobs has multiplier `L - idx`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplierProfile(Vec<usize>);

impl MultiplierProfile {
    pub fn get(&self, job: usize) -> usize {
        self.0[job]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Maximum regret of a schedule together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegretReport {
    pub max_regret: Time,
    pub worst_scenario: Scenario,
    pub worst_alternative: Schedule,
}

pub fn multipliers(schedule: &Schedule) -> MultiplierProfile {
    let mut mult = vec![0usize; schedule.job_count()];
    for row in &schedule.machines {
        let len = row.len();
        for (idx, &job) in row.iter().enumerate() {
            mult[job] = len - idx;
        }
    }
    MultiplierProfile(mult)
}

/// `counts[k - 1]` is the number of jobs with multiplier `k`. `None` if a
/// multiplier is zero or exceeds the job count.
pub(crate) fn multiplier_counts(mult: &[usize]) -> Option<Vec<usize>> {
    let n = mult.len();
    let top = mult.iter().copied().max().unwrap_or(0);
    if top > n || mult.contains(&0) {
        return None;
    }
    let mut counts = vec![0usize; top];
    for &k in mult {
        counts[k - 1] += 1;
    }
    Some(counts)
}

/// Total flow time `sum_i mult(i) * p_i`, i.e. the sum of completion times.
///
/// # Panics
/// If the scenario and schedule disagree on the number of jobs.
pub fn flow_time(schedule: &Schedule, scenario: &Scenario) -> Time {
    assert_eq!(
        schedule.job_count(),
        scenario.len(),
        "schedule/scenario size mismatch"
    );
    flow_time_with(multipliers(schedule).as_slice(), scenario.durations())
}

pub(crate) fn flow_time_with(mult: &[usize], durations: &[Time]) -> Time {
    mult.iter()
        .zip(durations)
        .map(|(&k, &p)| k as Time * p)
        .sum()
}

/// Machine loads (job counts) sorted nonincreasing.
pub fn load_vector(schedule: &Schedule) -> Vec<usize> {
    let mut loads: Vec<usize> = schedule.machines.iter().map(Vec::len).collect();
    loads.sort_unstable_by(|a, b| b.cmp(a));
    loads
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sched(rows: &[&[usize]]) -> Schedule {
        Schedule::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn simulated_completion_sum(s: &Schedule, p: &[Time]) -> Time {
        s.machines()
            .iter()
            .map(|row| {
                let mut clock = 0;
                let mut sum = 0;
                for &j in row {
                    clock += p[j];
                    sum += clock;
                }
                sum
            })
            .sum()
    }

    fn grid_pi() -> Schedule {
        // column-major 1..16, shifted to 0-based
        Schedule::new(
            (0..4)
                .map(|r| (0..4).map(|c| 4 * c + r).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn validate_instance_examples() {
        assert!(Instance::from_pairs(1, &[(0, 2)]).is_ok());
        assert_eq!(
            Instance::from_pairs(1, &[(3, 2)]),
            Err(Error::InvertedBounds {
                job: 0,
                lo: 3,
                hi: 2
            })
        );
        assert_eq!(Instance::from_pairs(0, &[(0, 2)]), Err(Error::NoMachines));
        assert_eq!(Instance::from_pairs(1, &[]), Err(Error::NoJobs));
        assert_eq!(
            Instance::from_pairs(1, &[(-1, 2)]),
            Err(Error::NegativeBound { job: 0, lo: -1 })
        );
        assert_eq!(
            Instance::from_pairs(1, &[(0, i64::MAX)]),
            Err(Error::Overflow)
        );
    }

    #[test]
    fn scenario_must_lie_in_box() {
        let inst = Instance::from_pairs(1, &[(1, 3), (0, 4)]).unwrap();
        assert!(Scenario::within(&inst, vec![3, 0]).is_ok());
        assert!(matches!(
            Scenario::within(&inst, vec![0, 0]),
            Err(Error::OutOfInterval { job: 0, .. })
        ));
        assert!(matches!(
            Scenario::within(&inst, vec![1]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn schedule_must_partition_jobs() {
        assert_eq!(Schedule::new(vec![vec![0, 0]]), Err(Error::DuplicateJob(0)));
        assert_eq!(
            Schedule::new(vec![vec![0, 2]]),
            Err(Error::JobOutOfRange { job: 2, n: 2 })
        );
        let inst = Instance::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(sched(&[&[0, 1]]).check_against(&inst).is_err());
        assert!(sched(&[&[0, 1], &[]]).check_against(&inst).is_ok());
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(multipliers(&sched(&[&[0, 1], &[2]])).as_slice(), &[2, 1, 1]);
        let single = Schedule::new(vec![vec![0]]).unwrap();
        assert_eq!(multipliers(&single).as_slice(), &[1]);

        let pi = grid_pi();
        let mult = multipliers(&pi);
        for row in pi.machines() {
            for (c, &job) in row.iter().enumerate() {
                assert_eq!(mult.get(job), 4 - c);
            }
        }
    }

    #[test]
    fn flow_time_examples() {
        let p = Scenario::new(vec![3, 1, 2]).unwrap();
        assert_eq!(flow_time(&sched(&[&[0, 1], &[2]]), &p), 9);
        assert_eq!(flow_time(&sched(&[&[1, 0], &[2]]), &p), 7);
        assert_eq!(
            simulated_completion_sum(&sched(&[&[1, 0], &[2]]), p.durations()),
            7
        );
        let zero = Scenario::new(vec![0, 0, 0]).unwrap();
        assert_eq!(flow_time(&sched(&[&[1, 0], &[2]]), &zero), 0);
    }

    #[test]
    fn load_vector_examples() {
        let s = sched(&[&[0, 1], &[2]]);
        assert_eq!(load_vector(&s), vec![2, 1]);
        assert!(!s.is_balanced());
        let s = sched(&[&[0, 1], &[2, 3]]);
        assert_eq!(load_vector(&s), vec![2, 2]);
        assert!(s.is_balanced());
        assert_eq!(load_vector(&grid_pi()), vec![4, 4, 4, 4]);
    }

    #[test]
    fn from_multipliers_rejects_gaps() {
        assert!(Schedule::from_multipliers(1, &[1, 3]).is_err());
        assert!(Schedule::from_multipliers(1, &[1, 1]).is_err());
        let s = Schedule::from_multipliers(2, &[2, 1, 1]).unwrap();
        assert_eq!(s.machines(), &[vec![0, 1], vec![2]]);
    }

    fn arb_schedule() -> impl Strategy<Value = (Schedule, Vec<Time>)> {
        (1usize..5, 1usize..9).prop_flat_map(|(m, n)| {
            (
                proptest::collection::vec(0..m, n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(0i64..50, n),
            )
                .prop_map(move |(assign, order, p)| {
                    let mut rows = vec![Vec::new(); m];
                    for &job in &order {
                        rows[assign[job]].push(job);
                    }
                    (Schedule::new(rows).unwrap(), p)
                })
        })
    }

    proptest! {
        #[test]
        fn flow_time_matches_simulation((s, p) in arb_schedule()) {
            let sc = Scenario::new(p.clone()).unwrap();
            prop_assert_eq!(flow_time(&s, &sc), simulated_completion_sum(&s, &p));
        }

        #[test]
        fn multipliers_fill_every_slot((s, _p) in arb_schedule()) {
            let mult = multipliers(&s);
            let slots: usize = s.machines().iter().map(|r| r.len() * (r.len() + 1) / 2).sum();
            prop_assert_eq!(mult.as_slice().iter().sum::<usize>(), slots);
            for row in s.machines() {
                let mut ks: Vec<usize> = row.iter().map(|&j| mult.get(j)).collect();
                ks.sort_unstable();
                prop_assert_eq!(ks, (1..=row.len()).collect::<Vec<_>>());
            }
        }

        #[test]
        fn from_multipliers_preserves_profile((s, _p) in arb_schedule()) {
            let mult = multipliers(&s);
            let rebuilt = Schedule::from_multipliers(s.machine_count(), mult.as_slice()).unwrap();
            prop_assert_eq!(multipliers(&rebuilt), mult);
        }
    }
}
