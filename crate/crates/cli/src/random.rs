//! Seeded generation of instances and schedules.
//!
//! All randomness comes from SplitMix64 seeded with the user's 64-bit
//! seed, sampled through `rand` 0.8's integer `gen_range` and
//! `SliceRandom::shuffle`. Both are platform independent, so a seed names
//! the same instance everywhere.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_xoshiro::SplitMix64;

use regret_sched_core::single_machine::EqualMidpointInstance;
use regret_sched_core::{Instance, JobInterval, Scenario, Schedule, Time};

pub type Rng = SplitMix64;

pub fn rng(seed: u64) -> Rng {
    SplitMix64::seed_from_u64(seed)
}

/// `n` jobs, `lo` uniform in `[0, max_lo]`, width uniform in
/// `[0, max_width]`, drawn job by job (`lo` first).
pub fn random_instance(
    rng: &mut Rng,
    n: usize,
    m: usize,
    max_width: Time,
    max_lo: Time,
) -> Instance {
    let jobs = (0..n)
        .map(|_| {
            let lo = rng.gen_range(0..=max_lo);
            let w = rng.gen_range(0..=max_width);
            JobInterval::new(lo, lo + w)
        })
        .collect();
    Instance::new(m, jobs).expect("generated bounds are valid")
}

/// Fresh generator per call.
///
/// ```
/// let a = regret_sched::random::gen_random_instance(42, 5, 2, 10, 10);
/// assert_eq!(a, regret_sched::random::gen_random_instance(42, 5, 2, 10, 10));
/// ```
pub fn gen_random_instance(
    seed: u64,
    n: usize,
    m: usize,
    max_width: Time,
    max_lo: Time,
) -> Instance {
    random_instance(&mut rng(seed), n, m, max_width, max_lo)
}

/// Uniform random job order, each job sent to a uniform machine. Machines
/// may end up empty.
pub fn random_schedule(rng: &mut Rng, n: usize, m: usize) -> Schedule {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut rows = vec![Vec::new(); m];
    for job in order {
        rows[rng.gen_range(0..m)].push(job);
    }
    Schedule::new(rows).expect("every job placed once")
}

/// Random permutation cut into `m` rows of `n / m` jobs.
pub fn random_balanced_schedule(rng: &mut Rng, n: usize, m: usize) -> Schedule {
    assert!(m > 0 && n.is_multiple_of(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Schedule::new(order.chunks(n / m).map(<[usize]>::to_vec).collect()).expect("permutation")
}

pub fn random_scenario(rng: &mut Rng, n: usize, max: Time) -> Scenario {
    Scenario::new((0..n).map(|_| rng.gen_range(0..=max)).collect()).expect("nonnegative")
}

/// Midpoint `c` uniform in `[max_half, max_half + 20]` so that every lower
/// bound stays nonnegative; half-widths uniform in `[0, max_half]`.
pub fn random_equal_midpoint(rng: &mut Rng, n: usize, max_half: Time) -> EqualMidpointInstance {
    let c = rng.gen_range(max_half..=max_half + 20);
    let p = (0..n).map(|_| rng.gen_range(0..=max_half)).collect();
    EqualMidpointInstance::new(c, p).expect("half-widths nonnegative")
}

pub fn range(rng: &mut Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

pub fn range_time(rng: &mut Rng, lo: Time, hi: Time) -> Time {
    rng.gen_range(lo..=hi)
}
