//! Single machine, all intervals centred on the same midpoint `c`:
//! `[c - p_i, c + p_i]`.
//!
//! With `n = 2k` jobs the optimal maximum regret is `k * sum(p)`. With
//! `n = 2k + 1` it is `k * sum(p) + max(P1, P2)`, where `(P1, P2)` is the
//! most balanced split of the `2k` narrowest jobs into two `k`-subsets. An
//! optimal schedule is *uniform*: wider intervals sit closer to the middle.
//!
//! Bounds may be negative here; shifting every bound by the same constant
//! leaves single-machine regret unchanged, and evaluation goes through an
//! instance shifted to `min lo = 0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Instance, JobInterval, Schedule, Time};
use crate::regret::max_regret;

/// Largest subset-sum table the balanced partition DP will build.
pub const PARTITION_SUM_LIMIT: i64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualMidpointInstance {
    midpoint: Time,
    half_widths: Vec<Time>,
}

impl EqualMidpointInstance {
    pub fn new(midpoint: Time, half_widths: Vec<Time>) -> Result<Self> {
        if half_widths.is_empty() {
            return Err(Error::NoJobs);
        }
        if let Some(&w) = half_widths.iter().find(|&&w| w < 0) {
            return Err(Error::NegativeValue(w));
        }
        let top = half_widths.iter().copied().max().unwrap_or(0);
        midpoint
            .checked_add(top)
            .and_then(|_| midpoint.checked_sub(top))
            .ok_or(Error::Overflow)?;
        Ok(Self {
            midpoint,
            half_widths,
        })
    }

    pub fn midpoint(&self) -> Time {
        self.midpoint
    }

    pub fn half_widths(&self) -> &[Time] {
        &self.half_widths
    }

    pub fn job_count(&self) -> usize {
        self.half_widths.len()
    }

    /// `[c - p_i, c + p_i]` for every job; bounds may be negative.
    pub fn intervals(&self) -> Vec<(Time, Time)> {
        self.half_widths
            .iter()
            .map(|&p| (self.midpoint - p, self.midpoint + p))
            .collect()
    }

    /// Adds `delta` to every bound.
    pub fn shift(&self, delta: Time) -> Result<Self> {
        let midpoint = self.midpoint.checked_add(delta).ok_or(Error::Overflow)?;
        Self::new(midpoint, self.half_widths.clone())
    }

    /// The instance shifted so that the smallest lower bound is zero.
    pub fn normalized_instance(&self) -> Result<Instance> {
        let c = self.half_widths.iter().copied().max().unwrap_or(0);
        let jobs = self
            .half_widths
            .iter()
            .map(|&p| JobInterval::new(c - p, c + p))
            .collect();
        Instance::new(1, jobs)
    }
}

/// Recognizes a single-machine instance whose intervals share an integral
/// midpoint.
pub fn detect_equal_midpoints(instance: &Instance) -> Result<EqualMidpointInstance> {
    if instance.machines() != 1 {
        return Err(Error::NotSingleMachine(instance.machines()));
    }
    let jobs = instance.jobs();
    let twice = jobs[0].lo + jobs[0].hi;
    if let Some(job) = jobs.iter().position(|iv| iv.lo + iv.hi != twice) {
        return Err(Error::UnequalMidpoints { job });
    }
    if twice % 2 != 0 {
        return Err(Error::HalfIntegralMidpoint { job: 0 });
    }
    let c = twice / 2;
    EqualMidpointInstance::new(c, jobs.iter().map(|iv| iv.hi - c).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedPartitionResult {
    /// Indices into the input; `sum_a <= sum_b`.
    pub subset_a: Vec<usize>,
    pub subset_b: Vec<usize>,
    pub sum_a: Time,
    pub sum_b: Time,
}

impl BalancedPartitionResult {
    pub fn gap(&self) -> Time {
        self.sum_b - self.sum_a
    }

    pub fn larger_sum(&self) -> Time {
        self.sum_b
    }
}

/// Splits `2k` nonnegative values into two `k`-subsets with the smallest
/// sum difference, by a reachability table over (items seen, items chosen,
/// sum). Among optimal splits, `subset_a` prefers low indices.
pub fn balanced_partition(values: &[Time]) -> Result<BalancedPartitionResult> {
    if !values.len().is_multiple_of(2) {
        return Err(Error::OddCount(values.len()));
    }
    if let Some(&v) = values.iter().find(|&&v| v < 0) {
        return Err(Error::NegativeValue(v));
    }
    let total = values
        .iter()
        .try_fold(0i64, |acc, &v| acc.checked_add(v))
        .ok_or(Error::Overflow)?;
    if total > PARTITION_SUM_LIMIT {
        return Err(Error::Overflow);
    }
    let n = values.len();
    let k = n / 2;
    let sums = total as usize + 1;
    let words = sums.div_ceil(64);
    // reach[(i * (k + 1) + c) * words ..]: sums reachable with c of the first i items
    let idx = |i: usize, c: usize| (i * (k + 1) + c) * words;
    let mut reach = vec![0u64; (n + 1) * (k + 1) * words];
    reach[idx(0, 0)] = 1;
    for (i, &value) in values.iter().enumerate() {
        let v = value as usize;
        for c in 0..=k.min(i) {
            let (src, dst) = (idx(i, c), idx(i + 1, c));
            for w in 0..words {
                reach[dst + w] |= reach[src + w];
            }
            if c < k {
                let dst = idx(i + 1, c + 1);
                shift_or(&mut reach, src, dst, words, v);
            }
        }
    }
    let has = |reach: &[u64], i: usize, c: usize, s: usize| {
        reach[idx(i, c) + s / 64] >> (s % 64) & 1 == 1
    };

    let half = total as usize / 2;
    let target = (0..=half)
        .rev()
        .find(|&s| has(&reach, n, k, s))
        .ok_or(Error::Internal("no k-subset reachable"))?;

    let mut chosen = vec![false; n];
    let (mut c, mut s) = (k, target);
    for i in (1..=n).rev() {
        if has(&reach, i - 1, c, s) {
            continue;
        }
        let v = values[i - 1] as usize;
        chosen[i - 1] = true;
        c -= 1;
        s -= v;
    }
    debug_assert!(c == 0 && s == 0);
    let subset_a: Vec<usize> = (0..n).filter(|&i| chosen[i]).collect();
    let subset_b: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
    let sum_a = target as Time;
    Ok(BalancedPartitionResult {
        subset_a,
        subset_b,
        sum_a,
        sum_b: total - sum_a,
    })
}

fn shift_or(reach: &mut [u64], src: usize, dst: usize, words: usize, by: usize) {
    let (wshift, bshift) = (by / 64, by % 64);
    for w in (0..words).rev() {
        if w < wshift {
            break;
        }
        let from = w - wshift;
        let mut bits = reach[src + from] << bshift;
        if bshift > 0 && from > 0 {
            bits |= reach[src + from - 1] >> (64 - bshift);
        }
        reach[dst + w] |= bits;
    }
    // bits past the last valid sum are never queried
}

/// Jobs sorted by (half-width, index).
fn by_width(inst: &EqualMidpointInstance) -> Vec<usize> {
    let p = inst.half_widths();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| (p[i], i));
    order
}

/// A uniform single-machine order.
///
/// Odd `n = 2k + 1`: the widest job in the middle, the balanced partition
/// of the others split around it, each side with width increasing toward
/// the middle. Even `n`: jobs sorted by width alternate sides, so both
/// halves grow toward the middle.
pub fn uniform_schedule(inst: &EqualMidpointInstance) -> Result<Schedule> {
    let order = by_width(inst);
    let n = order.len();
    let p = inst.half_widths();
    let sequence = if n % 2 == 1 {
        let (rest, widest) = order.split_at(n - 1);
        let rest_widths: Vec<Time> = rest.iter().map(|&i| p[i]).collect();
        let split = balanced_partition(&rest_widths)?;
        // rest is width-sorted, so mapping back keeps each side sorted
        let left: Vec<usize> = split.subset_a.iter().map(|&r| rest[r]).collect();
        let right: Vec<usize> = split.subset_b.iter().rev().map(|&r| rest[r]).collect();
        let mut seq = left;
        seq.push(widest[0]);
        seq.extend(right);
        seq
    } else {
        let left = order.iter().step_by(2).copied();
        let right: Vec<usize> = order.iter().skip(1).step_by(2).copied().collect();
        left.chain(right.into_iter().rev()).collect()
    };
    Schedule::new(vec![sequence])
}

/// Closed-form optimal maximum regret.
pub fn optimal_value(inst: &EqualMidpointInstance) -> Result<Time> {
    let p = inst.half_widths();
    let n = p.len();
    let k = (n / 2) as Time;
    let total = p
        .iter()
        .try_fold(0i64, |a, &x| a.checked_add(x))
        .ok_or(Error::Overflow)?;
    let base = k.checked_mul(total).ok_or(Error::Overflow)?;
    if n.is_multiple_of(2) {
        return Ok(base);
    }
    let order = by_width(inst);
    let narrow: Vec<Time> = order[..n - 1].iter().map(|&i| p[i]).collect();
    let split = balanced_partition(&narrow)?;
    base.checked_add(split.larger_sum()).ok_or(Error::Overflow)
}

/// Optimal robust single-machine schedule and its value. The schedule's
/// maximum regret is evaluated and must equal the closed-form value.
pub fn optimal_single_machine(inst: &EqualMidpointInstance) -> Result<(Schedule, Time)> {
    let value = optimal_value(inst)?;
    let schedule = uniform_schedule(inst)?;
    let evaluated = max_regret(&inst.normalized_instance()?, &schedule)?.max_regret;
    if evaluated != value {
        return Err(Error::Internal(
            "uniform schedule misses the closed-form optimum",
        ));
    }
    Ok((schedule, value))
}
