//! Property suites behind `regret-sched verify`.
//!
//! Every suite draws its cases sequentially from one seeded generator and
//! checks them on the rayon pool; results are collected in case order, so
//! reports do not depend on the worker count.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use regret_sched_core::deterministic::optimal_flow_time;
use regret_sched_core::exact::{enumerate_profiles, solve_exact, SearchConfig};
use regret_sched_core::heuristics::{local_search, midpoint_heuristic};
use regret_sched_core::reductions::{
    decide_3partition, decide_4pp, gen_4pp_from_3partition, validate_triplets, verify_theorem2,
    FourPPInstance, PartitionInstance,
};
use regret_sched_core::regret::{max_regret, oracle_max_regret, DEFAULT_ORACLE_CAP};
use regret_sched_core::single_machine::{balanced_partition, optimal_value, uniform_schedule};
use regret_sched_core::structure::{canonicalize, column_swap};
use regret_sched_core::{flow_time, Instance, Schedule, Time};

use crate::error::CliError;
use crate::formats::{FourPPFile, InstanceFile, PartitionFile, ReportFile, ScheduleFile};
use crate::random::{self, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Lemma1,
    Lemma2,
    Lemma3,
    SingleMachine,
    Theorem1,
    Theorem2,
    Heuristics,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Oracle,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::SingleMachine,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Heuristics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::SingleMachine => "single-machine",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Heuristics => "heuristics",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Oracle | Suite::Heuristics => 500,
            Suite::Lemma1 => 100,
            Suite::Lemma2 => 1000,
            Suite::Lemma3 | Suite::SingleMachine => 200,
            Suite::Theorem1 => 50,
            Suite::Theorem2 => 3,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: usize,
    pub passed: usize,
    pub counterexamples: Vec<Value>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.passed == self.trials
    }

    /// JSON-lines: one line per counterexample, then a summary line.
    pub fn json_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .counterexamples
            .iter()
            .map(|c| json!({"suite": self.suite, "counterexample": c}).to_string())
            .collect();
        out.push(
            json!({
                "suite": self.suite,
                "status": if self.pass() { "PASS" } else { "FAIL" },
                "trials": self.trials,
                "passed": self.passed,
            })
            .to_string(),
        );
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} {}/{}",
            self.suite,
            if self.pass() { "PASS" } else { "FAIL" },
            self.passed,
            self.trials
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub trials: Option<usize>,
    pub seed: u64,
    /// theorem2 only: check this instance instead of the built-in ones.
    pub four_pp: Option<FourPPInstance>,
    /// theorem2 only: also sweep every 8-value instance over 1..=4.
    pub exhaustive: bool,
}

type Check = Result<Option<Value>, CliError>;

fn run_cases<C: Sync>(
    suite: Suite,
    cases: Vec<C>,
    check: impl Fn(&C) -> Check + Sync + Send,
) -> Result<SuiteReport, CliError> {
    let outcomes: Vec<Option<Value>> = cases.par_iter().map(check).collect::<Result<_, _>>()?;
    let trials = outcomes.len();
    let counterexamples: Vec<Value> = outcomes.into_iter().flatten().collect();
    Ok(SuiteReport {
        suite: suite.name(),
        trials,
        passed: trials - counterexamples.len(),
        counterexamples,
    })
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport, CliError> {
    let trials = opts.trials.unwrap_or(suite.default_trials());
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let mut rng = random::rng(opts.seed);
    match suite {
        Suite::Oracle => run_cases(suite, oracle_cases(&mut rng, trials), check_oracle),
        Suite::Heuristics => run_cases(suite, oracle_cases(&mut rng, trials), check_heuristics),
        Suite::Lemma1 => {
            let cases = (0..trials)
                .map(|_| {
                    let n = if random::range(&mut rng, 0, 1) == 0 {
                        4
                    } else {
                        6
                    };
                    positive_instance(&mut rng, n, 2)
                })
                .collect();
            run_cases(suite, cases, check_lemma1)
        }
        Suite::Lemma2 => run_cases(suite, lemma2_cases(&mut rng, trials), check_lemma2),
        Suite::Lemma3 => run_cases(suite, lemma3_cases(&mut rng, trials), check_lemma3),
        Suite::SingleMachine => {
            let cases = (0..trials)
                .map(|_| {
                    let n = random::range(&mut rng, 2, 7);
                    random::random_equal_midpoint(&mut rng, n, 10)
                        .half_widths()
                        .to_vec()
                })
                .collect();
            run_cases(suite, cases, |p: &Vec<Time>| check_single_machine(p))
        }
        Suite::Theorem1 => {
            let mut cases = all_single_triplet_instances(20);
            cases.extend((0..trials).map(|_| random_two_triplet_instance(&mut rng, 20)));
            run_cases(suite, cases, check_theorem1)
        }
        Suite::Theorem2 => {
            let cases = match &opts.four_pp {
                Some(inst) => vec![inst.clone()],
                None => {
                    let mut cases = builtin_theorem2_instances();
                    if opts.exhaustive {
                        cases.extend(small_four_pp_instances(4));
                    }
                    cases
                }
            };
            run_cases(suite, cases, check_theorem2)
        }
    }
}

/// `n ≤ 7`, `m ∈ {1, 2, 3}`, `lo, width ∈ [0, 20]`, plus a random schedule.
pub fn oracle_cases(rng: &mut Rng, trials: usize) -> Vec<(Instance, Schedule)> {
    (0..trials)
        .map(|_| {
            let n = random::range(rng, 1, 7);
            let m = random::range(rng, 1, 3);
            let inst = random::random_instance(rng, n, m, 20, 20);
            let s = random::random_schedule(rng, n, m);
            (inst, s)
        })
        .collect()
}

/// Like [`random::random_instance`] with every bound raised by one, so
/// lower bounds lie in `[1, 21]`.
pub fn positive_instance(rng: &mut Rng, n: usize, m: usize) -> Instance {
    let inst = random::random_instance(rng, n, m, 20, 20);
    let jobs: Vec<(Time, Time)> = inst
        .jobs()
        .iter()
        .map(|iv| (iv.lo + 1, iv.hi + 1))
        .collect();
    Instance::from_pairs(m, &jobs).expect("shifted bounds are valid")
}

fn check_oracle((inst, s): &(Instance, Schedule)) -> Check {
    let fast = max_regret(inst, s)?;
    let slow = oracle_max_regret(inst, s, DEFAULT_ORACLE_CAP)?;
    let ws = &fast.worst_scenario;
    let alt = &fast.worst_alternative;
    let certified = fast.max_regret == flow_time(s, ws) - flow_time(alt, ws)
        && flow_time(alt, ws) == optimal_flow_time(ws, inst.machines())
        && inst
            .jobs()
            .iter()
            .zip(ws.durations())
            .all(|(iv, &d)| iv.lo <= d && d <= iv.hi);
    if fast.max_regret == slow.max_regret && certified {
        return Ok(None);
    }
    Ok(Some(json!({
        "instance": InstanceFile::from(inst),
        "schedule": ScheduleFile::from(s),
        "max_regret": ReportFile::from(&fast),
        "oracle": ReportFile::from(&slow),
        "certificate_valid": certified,
    })))
}

fn check_heuristics((inst, s): &(Instance, Schedule)) -> Check {
    let z = solve_exact(inst, &SearchConfig::default())?
        .report
        .max_regret;
    let (mid_schedule, mid) = midpoint_heuristic(inst)?;
    let (_, from_mid) = local_search(inst, &mid_schedule, 0)?;
    let start = max_regret(inst, s)?.max_regret;
    let (_, from_random) = local_search(inst, s, 1)?;
    let ok = mid.max_regret <= 2 * z
        && from_mid.max_regret <= mid.max_regret
        && from_random.max_regret <= start
        && from_mid.max_regret >= z
        && from_random.max_regret >= z;
    if ok {
        return Ok(None);
    }
    Ok(Some(json!({
        "instance": InstanceFile::from(inst),
        "schedule": ScheduleFile::from(s),
        "optimum": z,
        "midpoint": mid.max_regret,
        "local_search_from_midpoint": from_mid.max_regret,
        "random_start": start,
        "local_search_from_random": from_random.max_regret,
    })))
}

/// Balanced iff `m` jobs carry multiplier 1 and the largest multiplier is
/// `n / m`.
pub fn profile_is_balanced(profile: &[usize], machines: usize) -> bool {
    let n = profile.len();
    n.is_multiple_of(machines)
        && profile.iter().filter(|&&k| k == 1).count() == machines
        && profile.iter().copied().max() == Some(n / machines)
}

fn check_lemma1(inst: &Instance) -> Check {
    let m = inst.machines();
    let mut best = Time::MAX;
    let mut best_balanced = Time::MAX;
    let mut unbalanced_optimum: Option<Vec<usize>> = None;
    enumerate_profiles(inst, &SearchConfig::default(), &mut |profile, value| {
        let balanced = profile_is_balanced(profile, m);
        if balanced {
            best_balanced = best_balanced.min(value);
        }
        if value < best {
            best = value;
            unbalanced_optimum = None;
        }
        if value == best && !balanced && unbalanced_optimum.is_none() {
            unbalanced_optimum = Some(profile.to_vec());
        }
    })?;
    match unbalanced_optimum {
        None => Ok(None),
        Some(profile) => {
            let s = Schedule::from_multipliers(m, &profile)?;
            Ok(Some(json!({
                "instance": InstanceFile::from(inst),
                "schedule": ScheduleFile::from(&s),
                "optimum": best,
                "balanced_optimum": best_balanced,
            })))
        }
    }
}

pub struct SwapCase {
    pub instance: Instance,
    pub schedule: Schedule,
    pub column: usize,
    pub a: usize,
    pub b: usize,
}

fn lemma2_cases(rng: &mut Rng, trials: usize) -> Vec<SwapCase> {
    (0..trials)
        .map(|_| {
            let m = random::range(rng, 2, 3);
            let n0 = random::range(rng, 1, 3);
            let n = m * n0;
            let instance = random::random_instance(rng, n, m, 20, 20);
            let schedule = random::random_balanced_schedule(rng, n, m);
            let column = random::range(rng, 0, n0 - 1);
            let a = random::range(rng, 0, m - 1);
            let b = (a + random::range(rng, 1, m - 1)) % m;
            SwapCase {
                instance,
                schedule,
                column,
                a,
                b,
            }
        })
        .collect()
}

fn check_lemma2(c: &SwapCase) -> Check {
    let swapped = column_swap(&c.schedule, c.column, c.a, c.b)?;
    let before = max_regret(&c.instance, &c.schedule)?.max_regret;
    let after = max_regret(&c.instance, &swapped)?.max_regret;
    if before == after {
        return Ok(None);
    }
    Ok(Some(json!({
        "instance": InstanceFile::from(&c.instance),
        "schedule": ScheduleFile::from(&c.schedule),
        "swapped": ScheduleFile::from(&swapped),
        "column": c.column,
        "machines": [c.a, c.b],
        "before": before,
        "after": after,
    })))
}

/// 16 jobs on 4 machines, `pi` filled column by column and
/// `sigma` row by row (0-based job indices).
pub fn transposed_grid_pair() -> (Schedule, Schedule) {
    let pi = (0..4)
        .map(|r| (0..4).map(|c| 4 * c + r).collect())
        .collect();
    let sigma = (0..4)
        .map(|r| (0..4).map(|c| 4 * r + c).collect())
        .collect();
    (Schedule::new(pi).unwrap(), Schedule::new(sigma).unwrap())
}

pub struct PairCase {
    pub instance: Instance,
    pub pi: Schedule,
    pub sigma: Schedule,
}

fn lemma3_cases(rng: &mut Rng, trials: usize) -> Vec<PairCase> {
    let (pi, sigma) = transposed_grid_pair();
    let mut cases = vec![PairCase {
        instance: random::random_instance(rng, 16, 4, 20, 20),
        pi,
        sigma,
    }];
    cases.extend((1..trials).map(|_| {
        let m = random::range(rng, 1, 4);
        let n0 = random::range(rng, 1, 4);
        let n = m * n0;
        PairCase {
            instance: random::random_instance(rng, n, m, 20, 20),
            pi: random::random_balanced_schedule(rng, n, m),
            sigma: random::random_balanced_schedule(rng, n, m),
        }
    }));
    cases
}

fn columns(s: &Schedule) -> Vec<BTreeSet<usize>> {
    let width = s.machines().iter().map(Vec::len).max().unwrap_or(0);
    (0..width)
        .map(|c| {
            s.machines()
                .iter()
                .filter_map(|row| row.get(c).copied())
                .collect()
        })
        .collect()
}

/// Checks the canonical pair: columns preserved on both sides, machine
/// `j` holding the same jobs in both, and the regret of `pi` unchanged.
pub fn canonical_pair_holds(
    instance: &Instance,
    pi: &Schedule,
    sigma: &Schedule,
    pi2: &Schedule,
    sigma2: &Schedule,
) -> Result<bool, CliError> {
    let same_rows =
        pi2.machine_count() == sigma2.machine_count()
            && pi2.machines().iter().zip(sigma2.machines()).all(|(a, b)| {
                a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
            });
    let regret_kept = max_regret(instance, pi)?.max_regret == max_regret(instance, pi2)?.max_regret;
    Ok(
        columns(pi) == columns(pi2)
            && columns(sigma) == columns(sigma2)
            && same_rows
            && regret_kept,
    )
}

fn check_lemma3(c: &PairCase) -> Check {
    let (pi2, sigma2) = canonicalize(&c.pi, &c.sigma)?;
    if canonical_pair_holds(&c.instance, &c.pi, &c.sigma, &pi2, &sigma2)? {
        return Ok(None);
    }
    Ok(Some(json!({
        "instance": InstanceFile::from(&c.instance),
        "pi": ScheduleFile::from(&c.pi),
        "sigma": ScheduleFile::from(&c.sigma),
        "pi_out": ScheduleFile::from(&pi2),
        "sigma_out": ScheduleFile::from(&sigma2),
    })))
}

/// Smallest gap over every split of `values` into two halves.
pub fn exhaustive_partition_gap(values: &[Time]) -> Time {
    let n = values.len();
    let total: Time = values.iter().sum();
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == n / 2)
        .map(|mask| {
            let a: Time = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| values[i])
                .sum();
            (total - 2 * a).abs()
        })
        .min()
        .unwrap_or(0)
}

fn check_single_machine(half_widths: &[Time]) -> Check {
    let c = half_widths.iter().copied().max().unwrap_or(0);
    let emi =
        regret_sched_core::single_machine::EqualMidpointInstance::new(c, half_widths.to_vec())?;
    let inst = emi.normalized_instance()?;
    let z = solve_exact(&inst, &SearchConfig::default())?
        .report
        .max_regret;
    let formula = optimal_value(&emi)?;
    let uniform = max_regret(&inst, &uniform_schedule(&emi)?)?.max_regret;
    let mut partition_ok = true;
    let mut gaps = None;
    if half_widths.len() % 2 == 1 {
        let mut sorted = half_widths.to_vec();
        sorted.sort_unstable();
        let narrow = &sorted[..sorted.len() - 1];
        let split = balanced_partition(narrow)?;
        let k = narrow.len() / 2;
        let mut used: Vec<usize> = split
            .subset_a
            .iter()
            .chain(&split.subset_b)
            .copied()
            .collect();
        used.sort_unstable();
        let exhaustive = exhaustive_partition_gap(narrow);
        partition_ok = split.subset_a.len() == k
            && split.subset_b.len() == k
            && used == (0..2 * k).collect::<Vec<_>>()
            && split.sum_a == split.subset_a.iter().map(|&i| narrow[i]).sum::<Time>()
            && split.sum_b == split.subset_b.iter().map(|&i| narrow[i]).sum::<Time>()
            && split.gap() == exhaustive;
        gaps = Some((split.gap(), exhaustive));
    }
    if z == formula && uniform == formula && partition_ok {
        return Ok(None);
    }
    Ok(Some(json!({
        "instance": InstanceFile::from(&inst),
        "optimum": z,
        "formula": formula,
        "uniform": uniform,
        "partition_gap": gaps.map(|g| g.0),
        "exhaustive_gap": gaps.map(|g| g.1),
    })))
}

/// Every 3-PARTITION instance with one triplet and `B ≤ max_b`, values
/// nondecreasing.
pub fn all_single_triplet_instances(max_b: Time) -> Vec<PartitionInstance> {
    let mut out = Vec::new();
    for b in 1..=max_b {
        for x in 1..b {
            for y in x..b {
                let z = b - x - y;
                if z < y {
                    continue;
                }
                if let Ok(inst) = PartitionInstance::new(1, b, vec![x, y, z]) {
                    out.push(inst);
                }
            }
        }
    }
    out
}

/// Two triplets with values in `[1, max_value]`: `B` is drawn first, then
/// five admissible values; the sixth is forced by the total and the draw
/// is repeated until it is admissible too.
pub fn random_two_triplet_instance(rng: &mut Rng, max_value: Time) -> PartitionInstance {
    loop {
        let b = random::range_time(rng, 5, 2 * max_value);
        let lo = b / 4 + 1;
        let hi = ((b - 1) / 2).min(max_value);
        if lo > hi {
            continue;
        }
        let mut values: Vec<Time> = (0..5).map(|_| random::range_time(rng, lo, hi)).collect();
        let last = 2 * b - values.iter().sum::<Time>();
        if last < lo || last > hi {
            continue;
        }
        values.push(last);
        return PartitionInstance::new(2, b, values).expect("drawn within bounds");
    }
}

fn check_theorem1(inst: &PartitionInstance) -> Check {
    let three = decide_3partition(inst)?;
    let generated = gen_4pp_from_3partition(inst)?;
    let four = decide_4pp(&generated)?;
    let witnesses_ok = three.as_ref().is_none_or(|t| validate_triplets(inst, t))
        && four.as_ref().is_none_or(|w| w.validate(&generated))
        && generated.values().len() == 8 * inst.m();
    if three.is_some() == four.is_some() && witnesses_ok {
        return Ok(None);
    }
    Ok(Some(json!({
        "partition": PartitionFile::from(inst),
        "four_pp": FourPPFile::from(&generated),
        "three_partition": three.is_some(),
        "four_pp_answer": four.is_some(),
    })))
}

pub fn builtin_theorem2_instances() -> Vec<FourPPInstance> {
    [[1, 1, 1, 1, 2, 2, 2, 2], [2; 8], [1, 1, 1, 1, 1, 1, 1, 3]]
        .into_iter()
        .map(|v| FourPPInstance::new(v.to_vec()).expect("valid"))
        .collect()
}

/// Every nondecreasing 8-value instance over `1..=max_value`.
pub fn small_four_pp_instances(max_value: Time) -> Vec<FourPPInstance> {
    fn rec(start: Time, max: Time, cur: &mut Vec<Time>, out: &mut Vec<FourPPInstance>) {
        if cur.len() == 8 {
            out.push(FourPPInstance::new(cur.clone()).expect("valid"));
            return;
        }
        for v in start..=max {
            cur.push(v);
            rec(v, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, max_value, &mut Vec::new(), &mut out);
    out
}

fn check_theorem2(inst: &FourPPInstance) -> Check {
    let report = verify_theorem2(inst)?;
    if report.pass {
        return Ok(None);
    }
    Ok(Some(json!({
        "four_pp": FourPPFile::from(inst),
        "answer": report.witness.is_some(),
        "z_star": report.z_star,
        "threshold": report.threshold,
        "threshold_integral": report.threshold_integral,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("lemma4".parse::<Suite>().is_err());
    }

    #[test]
    fn small_four_pp_count() {
        // multisets of size 8 from 4 values: C(11, 8)
        assert_eq!(small_four_pp_instances(4).len(), 165);
    }

    #[test]
    fn single_triplet_enumeration_is_valid() {
        let all = all_single_triplet_instances(20);
        assert!(!all.is_empty());
        assert!(all.iter().any(|p| p.values() == [3, 3, 4]));
        assert!(all.iter().all(|p| p.target() <= 20));
    }

    #[test]
    fn balanced_profile_predicate() {
        assert!(profile_is_balanced(&[1, 2, 2, 1], 2));
        assert!(!profile_is_balanced(&[1, 2, 3, 1], 2));
        assert!(!profile_is_balanced(&[1, 2, 3], 2));
    }
}
