//! Hardness reductions and brute-force deciders.
//!
//! * 3-PARTITION → 4-PP: the `3m` values, one value `5^(j+1) B` and four
//!   copies of `(5^(j+1) + 1) B / 4` for each `j = 1..=m`.
//! * 4-PP → scheduling: with `B` larger than the four largest values
//!   combined, one job `[B - a, B + a]` per value plus `m'/2` jobs `[0, 2B]`
//!   on `m'/2` machines. The 4-PP instance is a yes-instance iff the robust
//!   optimum equals `4mB + 9C/2`, `C` the sum of all values.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::{count_search_space, solve_exact, SearchConfig};
use crate::model::{Instance, JobInterval, Time};

/// Values beyond this count do not fit the deciders' 64-bit masks.
pub const DECIDER_VALUE_LIMIT: usize = 64;

/// Largest exact search [`verify_theorem2`] will start.
pub const THRESHOLD_PROFILE_CAP: u64 = 20_000_000;

/// `3m` values with `B/4 < a < B/2` and total `mB`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    m: usize,
    b: Time,
    values: Vec<Time>,
}

impl PartitionInstance {
    pub fn new(m: usize, b: Time, values: Vec<Time>) -> Result<Self> {
        if m == 0 || b <= 0 {
            return Err(Error::NonPositive);
        }
        if values.len() != 3 * m {
            return Err(Error::TripletCount {
                m,
                found: values.len(),
            });
        }
        if values.iter().any(|&a| a <= 0) {
            return Err(Error::NonPositive);
        }
        let sum = values
            .iter()
            .try_fold(0i64, |s, &a| s.checked_add(a))
            .ok_or(Error::Overflow)?;
        let expected = (m as Time).checked_mul(b).ok_or(Error::Overflow)?;
        if sum != expected {
            return Err(Error::PartitionSum { sum, expected });
        }
        for &a in &values {
            // B/4 < a < B/2
            if 4 * a <= b || 2 * a >= b {
                return Err(Error::PartitionBound { value: a, b });
            }
        }
        Ok(Self { m, b, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn target(&self) -> Time {
        self.b
    }

    pub fn values(&self) -> &[Time] {
        &self.values
    }
}

/// `4m'` positive values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourPPInstance {
    values: Vec<Time>,
}

impl FourPPInstance {
    pub fn new(values: Vec<Time>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(4) {
            return Err(Error::NotQuadruple(values.len()));
        }
        if values.iter().any(|&a| a <= 0) {
            return Err(Error::NonPositive);
        }
        values
            .iter()
            .try_fold(0i64, |s, &a| s.checked_add(a))
            .ok_or(Error::Overflow)?;
        Ok(Self { values })
    }

    pub fn values(&self) -> &[Time] {
        &self.values
    }

    pub fn m_prime(&self) -> usize {
        self.values.len() / 4
    }

    pub fn total(&self) -> Time {
        self.values.iter().sum()
    }
}

/// Quadruplets (value indices) and a fixed-point-free involution pairing
/// quadruplets of equal sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingWitness {
    pub quadruplets: Vec<[usize; 4]>,
    pub pairing: Vec<usize>,
}

impl PairingWitness {
    /// Recomputes everything from scratch against `inst`.
    pub fn validate(&self, inst: &FourPPInstance) -> bool {
        let v = inst.values();
        let q = self.quadruplets.len();
        if q * 4 != v.len() || self.pairing.len() != q {
            return false;
        }
        let mut seen = vec![false; v.len()];
        for &i in self.quadruplets.iter().flatten() {
            if i >= v.len() || core::mem::replace(&mut seen[i], true) {
                return false;
            }
        }
        let sum = |a: &[usize; 4]| a.iter().map(|&i| v[i]).sum::<Time>();
        (0..q).all(|i| {
            let f = self.pairing[i];
            f < q
                && f != i
                && self.pairing[f] == i
                && sum(&self.quadruplets[i]) == sum(&self.quadruplets[f])
        })
    }
}

/// Checks a 3-PARTITION witness: disjoint triplets covering every value,
/// each summing to `B`.
pub fn validate_triplets(inst: &PartitionInstance, triplets: &[[usize; 3]]) -> bool {
    let v = inst.values();
    if triplets.len() != inst.m() {
        return false;
    }
    let mut seen = vec![false; v.len()];
    for &i in triplets.iter().flatten() {
        if i >= v.len() || core::mem::replace(&mut seen[i], true) {
            return false;
        }
    }
    triplets
        .iter()
        .all(|t| t.iter().map(|&i| v[i]).sum::<Time>() == inst.target())
}

/// Indices sorted by (value, index).
fn sorted_indices(values: &[Time]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by_key(|&i| (values[i], i));
    idx
}

/// Exhaustive 3-PARTITION decider. Values are sorted; each step groups the
/// smallest unused value with a pair of later unused values, skipping pairs
/// that repeat values already tried. Failed states are memoized by mask.
pub fn decide_3partition(inst: &PartitionInstance) -> Result<Option<Vec<[usize; 3]>>> {
    let n = inst.values().len();
    if n > DECIDER_VALUE_LIMIT {
        return Err(Error::CapExceeded {
            n,
            cap: DECIDER_VALUE_LIMIT,
        });
    }
    let order = sorted_indices(inst.values());
    let vals: Vec<Time> = order.iter().map(|&i| inst.values()[i]).collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    fn go(
        mask: u64,
        full: u64,
        vals: &[Time],
        b: Time,
        failed: &mut BTreeSet<u64>,
        out: &mut Vec<[usize; 3]>,
    ) -> bool {
        if mask == full {
            return true;
        }
        if failed.contains(&mask) {
            return false;
        }
        let n = vals.len();
        let first = (0..n).find(|&i| mask >> i & 1 == 0).expect("mask not full");
        let mut tried = BTreeSet::new();
        for j in first + 1..n {
            if mask >> j & 1 == 1 {
                continue;
            }
            for k in j + 1..n {
                if mask >> k & 1 == 1 || vals[first] + vals[j] + vals[k] != b {
                    continue;
                }
                if !tried.insert((vals[j], vals[k])) {
                    continue;
                }
                out.push([first, j, k]);
                if go(
                    mask | 1 << first | 1 << j | 1 << k,
                    full,
                    vals,
                    b,
                    failed,
                    out,
                ) {
                    return true;
                }
                out.pop();
            }
        }
        failed.insert(mask);
        false
    }

    let mut out = Vec::new();
    if go(
        0,
        full,
        &vals,
        inst.target(),
        &mut BTreeSet::new(),
        &mut out,
    ) {
        Ok(Some(out.into_iter().map(|t| t.map(|s| order[s])).collect()))
    } else {
        Ok(None)
    }
}

/// Exhaustive 4-PP decider. Quadruplets are formed in canonical order (the
/// smallest unused value plus three later ones, duplicate value triples
/// skipped). A quadruplet whose sum matches an open one closes it;
/// otherwise it opens a new sum. The answer is yes iff nothing stays open.
/// Odd `m'` is rejected immediately.
pub fn decide_4pp(inst: &FourPPInstance) -> Result<Option<PairingWitness>> {
    let n = inst.values().len();
    if n > DECIDER_VALUE_LIMIT {
        return Err(Error::CapExceeded {
            n,
            cap: DECIDER_VALUE_LIMIT,
        });
    }
    if inst.m_prime() % 2 == 1 {
        return Ok(None);
    }
    let order = sorted_indices(inst.values());
    let vals: Vec<Time> = order.iter().map(|&i| inst.values()[i]).collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    struct Search<'a> {
        vals: &'a [Time],
        full: u64,
        failed: BTreeSet<(u64, Vec<Time>)>,
        chosen: Vec<([usize; 4], Time)>,
    }

    impl Search<'_> {
        fn go(&mut self, mask: u64, open: &mut Vec<Time>) -> bool {
            if mask == self.full {
                return open.is_empty();
            }
            let left = (self.full & !mask).count_ones() as usize / 4;
            if open.len() > left {
                return false;
            }
            let key = (mask, open.clone());
            if self.failed.contains(&key) {
                return false;
            }
            let n = self.vals.len();
            let first = (0..n).find(|&i| mask >> i & 1 == 0).expect("mask not full");
            let free: Vec<usize> = (first + 1..n).filter(|&i| mask >> i & 1 == 0).collect();
            let mut tried = BTreeSet::new();
            for a in 0..free.len() {
                for b in a + 1..free.len() {
                    for c in b + 1..free.len() {
                        let (i, j, k) = (free[a], free[b], free[c]);
                        if !tried.insert((self.vals[i], self.vals[j], self.vals[k])) {
                            continue;
                        }
                        let s = self.vals[first] + self.vals[i] + self.vals[j] + self.vals[k];
                        let pos = open.binary_search(&s);
                        match pos {
                            Ok(p) => {
                                open.remove(p);
                            }
                            Err(p) => open.insert(p, s),
                        }
                        self.chosen.push(([first, i, j, k], s));
                        let next = mask | 1 << first | 1 << i | 1 << j | 1 << k;
                        if self.go(next, open) {
                            return true;
                        }
                        self.chosen.pop();
                        match pos {
                            Ok(p) => open.insert(p, s),
                            Err(p) => {
                                open.remove(p);
                            }
                        }
                    }
                }
            }
            self.failed.insert(key);
            false
        }
    }

    let mut search = Search {
        vals: &vals,
        full,
        failed: BTreeSet::new(),
        chosen: Vec::new(),
    };
    if !search.go(0, &mut Vec::new()) {
        return Ok(None);
    }
    let quadruplets: Vec<[usize; 4]> = search
        .chosen
        .iter()
        .map(|(q, _)| q.map(|s| order[s]))
        .collect();
    let sums: Vec<Time> = search.chosen.iter().map(|&(_, s)| s).collect();
    let mut pairing = vec![usize::MAX; sums.len()];
    for i in 0..sums.len() {
        if pairing[i] != usize::MAX {
            continue;
        }
        let j = (i + 1..sums.len())
            .find(|&j| pairing[j] == usize::MAX && sums[j] == sums[i])
            .ok_or(Error::Internal("unpaired quadruplet"))?;
        pairing[i] = j;
        pairing[j] = i;
    }
    let witness = PairingWitness {
        quadruplets,
        pairing,
    };
    debug_assert!(witness.validate(inst));
    Ok(Some(witness))
}

/// 3-PARTITION → 4-PP. Odd `B` is doubled first (with all values) so that
/// `(5^(j+1) + 1) B / 4` is integral; the answer is unchanged.
///
/// Output order: the (possibly doubled) values, then `5^(j+1) B` for
/// `j = 1..=m`, then four copies of `(5^(j+1) + 1) B / 4` for each `j`.
pub fn gen_4pp_from_3partition(inst: &PartitionInstance) -> Result<FourPPInstance> {
    let scale = if inst.target() % 2 == 1 { 2 } else { 1 };
    let b = inst.target().checked_mul(scale).ok_or(Error::Overflow)?;
    let m = inst.m();
    let mut values: Vec<Time> = inst.values().iter().map(|&a| a * scale).collect();
    let powers: Vec<Time> = (1..=m)
        .map(|j| {
            let exp = u32::try_from(j + 1).map_err(|_| Error::Overflow)?;
            5i64.checked_pow(exp).ok_or(Error::Overflow)
        })
        .collect::<Result<_>>()?;
    for &p in &powers {
        values.push(p.checked_mul(b).ok_or(Error::Overflow)?);
    }
    for &p in &powers {
        let num = (p + 1).checked_mul(b).ok_or(Error::Overflow)?;
        debug_assert_eq!(num % 4, 0);
        values.extend(core::iter::repeat_n(num / 4, 4));
    }
    FourPPInstance::new(values)
}

/// Scheduling instance built from a 4-PP instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulingReduction {
    pub instance: Instance,
    /// `B`: one more than the sum of the four largest values.
    pub big_b: Time,
    /// `floor(4mB + 9C/2)`.
    pub threshold: Time,
    /// False when `C` is odd: the threshold is not an integer and cannot be
    /// reached, so the 4-PP instance is a no-instance.
    pub threshold_integral: bool,
}

/// 4-PP → scheduling. Jobs `0..4m'` are `[B - a_i, B + a_i]` in input
/// order, followed by `m'/2` jobs `[0, 2B]`.
pub fn gen_sched_from_4pp(inst: &FourPPInstance) -> Result<SchedulingReduction> {
    let mp = inst.m_prime();
    if mp % 2 == 1 {
        return Err(Error::OddQuadrupletCount(mp));
    }
    let m = mp / 2;
    let mut sorted = inst.values().to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let big_b = sorted[..4]
        .iter()
        .try_fold(1i64, |s, &a| s.checked_add(a))
        .ok_or(Error::Overflow)?;
    let two_b = big_b.checked_mul(2).ok_or(Error::Overflow)?;
    let mut jobs: Vec<JobInterval> = inst
        .values()
        .iter()
        .map(|&a| JobInterval::new(big_b - a, big_b + a))
        .collect();
    jobs.extend(core::iter::repeat_n(JobInterval::new(0, two_b), m));
    let instance = Instance::new(m, jobs)?;

    let c = inst.total();
    let four_mb = (4 * m as Time).checked_mul(big_b).ok_or(Error::Overflow)?;
    let nine_c = c.checked_mul(9).ok_or(Error::Overflow)?;
    let threshold = four_mb.checked_add(nine_c / 2).ok_or(Error::Overflow)?;
    Ok(SchedulingReduction {
        instance,
        big_b,
        threshold,
        threshold_integral: c % 2 == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub witness: Option<PairingWitness>,
    pub z_star: Time,
    pub threshold: Time,
    pub threshold_integral: bool,
    pub pass: bool,
}

/// Decides the 4-PP instance, solves the generated scheduling instance
/// exactly, and checks `yes ⇔ Z* = threshold` and `no ⇔ Z* > threshold`.
pub fn verify_theorem2(inst: &FourPPInstance) -> Result<ThresholdReport> {
    let generated = gen_sched_from_4pp(inst)?;
    let cfg = SearchConfig::default();
    let profiles = count_search_space(&generated.instance, &cfg)?;
    if profiles > THRESHOLD_PROFILE_CAP {
        return Err(Error::CapExceeded {
            n: generated.instance.job_count(),
            cap: THRESHOLD_PROFILE_CAP as usize,
        });
    }
    let witness = decide_4pp(inst)?;
    let z_star = solve_exact(&generated.instance, &cfg)?.report.max_regret;
    let pass = match &witness {
        Some(w) => {
            w.validate(inst) && generated.threshold_integral && z_star == generated.threshold
        }
        None => z_star > generated.threshold,
    };
    Ok(ThresholdReport {
        witness,
        z_star,
        threshold: generated.threshold,
        threshold_integral: generated.threshold_integral,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_machine::{detect_equal_midpoints, optimal_value};
    use proptest::prelude::*;

    fn pi(m: usize, b: Time, v: &[Time]) -> PartitionInstance {
        PartitionInstance::new(m, b, v.to_vec()).unwrap()
    }

    fn fpp(v: &[Time]) -> FourPPInstance {
        FourPPInstance::new(v.to_vec()).unwrap()
    }

    /// Every assignment of values to quadruplet labels, then every pairing.
    fn brute_4pp(values: &[Time]) -> bool {
        let q = values.len() / 4;
        if q % 2 == 1 {
            return false;
        }
        let n = values.len();
        let mut labels = vec![0usize; n];
        fn rec(
            i: usize,
            labels: &mut Vec<usize>,
            counts: &mut Vec<usize>,
            values: &[Time],
        ) -> bool {
            if i == labels.len() {
                let mut sums = vec![0; counts.len()];
                for (j, &l) in labels.iter().enumerate() {
                    sums[l] += values[j];
                }
                sums.sort_unstable();
                return sums.chunks(2).all(|c| c[0] == c[1]);
            }
            for l in 0..counts.len() {
                if counts[l] < 4 {
                    counts[l] += 1;
                    labels[i] = l;
                    if rec(i + 1, labels, counts, values) {
                        return true;
                    }
                    counts[l] -= 1;
                }
            }
            false
        }
        rec(0, &mut labels, &mut vec![0; q], values)
    }

    #[test]
    fn partition_instance_validation() {
        assert_eq!(
            PartitionInstance::new(1, 10, vec![3, 3, 3]),
            Err(Error::PartitionSum {
                sum: 9,
                expected: 10
            })
        );
        assert_eq!(
            PartitionInstance::new(1, 12, vec![3, 4, 5]),
            Err(Error::PartitionBound { value: 3, b: 12 })
        );
        assert_eq!(
            PartitionInstance::new(1, 10, vec![3, 7]),
            Err(Error::TripletCount { m: 1, found: 2 })
        );
        assert_eq!(
            FourPPInstance::new(vec![1, 2, 3]),
            Err(Error::NotQuadruple(3))
        );
    }

    #[test]
    fn decide_3partition_examples() {
        let w = decide_3partition(&pi(1, 10, &[3, 3, 4])).unwrap().unwrap();
        assert!(validate_triplets(&pi(1, 10, &[3, 3, 4]), &w));
        assert_eq!(
            decide_3partition(&pi(2, 16, &[5, 5, 5, 5, 5, 7])).unwrap(),
            None
        );
        let inst = pi(2, 15, &[4, 5, 6, 4, 5, 6]);
        let w = decide_3partition(&inst).unwrap().unwrap();
        assert!(validate_triplets(&inst, &w));
    }

    #[test]
    fn decide_4pp_examples() {
        let inst = fpp(&[1, 1, 1, 1, 2, 2, 2, 2]);
        let w = decide_4pp(&inst).unwrap().unwrap();
        assert!(w.validate(&inst));
        assert_eq!(decide_4pp(&fpp(&[1, 1, 1, 1, 1, 1, 1, 3])).unwrap(), None);
        assert_eq!(decide_4pp(&fpp(&[2, 2, 2, 2])).unwrap(), None);
    }

    #[test]
    fn witness_validation_catches_tampering() {
        let inst = fpp(&[1, 1, 1, 1, 2, 2, 2, 2]);
        let mut w = decide_4pp(&inst).unwrap().unwrap();
        w.pairing = vec![0, 1];
        assert!(!w.validate(&inst));
        let bad = PairingWitness {
            quadruplets: vec![[0, 1, 2, 3], [4, 5, 6, 7]],
            pairing: vec![1, 0],
        };
        assert!(!bad.validate(&inst));
    }

    #[test]
    fn gen_4pp_examples() {
        let out = gen_4pp_from_3partition(&pi(1, 10, &[3, 3, 4])).unwrap();
        assert_eq!(out.values(), &[3, 3, 4, 250, 65, 65, 65, 65]);
        assert!(decide_4pp(&out).unwrap().is_some());

        let out = gen_4pp_from_3partition(&pi(2, 16, &[5, 5, 5, 5, 5, 7])).unwrap();
        assert_eq!(
            out.values(),
            &[5, 5, 5, 5, 5, 7, 400, 2000, 104, 104, 104, 104, 504, 504, 504, 504]
        );
        assert_eq!(decide_4pp(&out).unwrap(), None);

        // odd B is doubled first
        let out = gen_4pp_from_3partition(&pi(1, 7, &[2, 2, 3])).unwrap();
        assert_eq!(out.values(), &[4, 4, 6, 350, 91, 91, 91, 91]);
        assert!(decide_4pp(&out).unwrap().is_some());
    }

    #[test]
    fn gen_4pp_overflow() {
        let m = 30;
        let inst = PartitionInstance::new(m, 10, [3, 3, 4].repeat(m)).unwrap();
        assert_eq!(gen_4pp_from_3partition(&inst), Err(Error::Overflow));
    }

    #[test]
    fn gen_sched_examples() {
        let g = gen_sched_from_4pp(&fpp(&[1, 1, 1, 1, 2, 2, 2, 2])).unwrap();
        assert_eq!((g.big_b, g.threshold, g.threshold_integral), (9, 90, true));
        assert_eq!(g.instance.machines(), 1);
        assert_eq!(g.instance.job_count(), 9);
        assert_eq!(g.instance.job(0), JobInterval::new(8, 10));
        assert_eq!(g.instance.job(8), JobInterval::new(0, 18));
        // single machine, equal midpoints: closed form agrees with the threshold
        let e = detect_equal_midpoints(&g.instance).unwrap();
        assert_eq!(optimal_value(&e).unwrap(), 90);

        let g = gen_sched_from_4pp(&fpp(&[1, 1, 1, 1, 1, 1, 1, 3])).unwrap();
        assert_eq!((g.big_b, g.threshold, g.threshold_integral), (7, 73, true));

        assert_eq!(
            gen_sched_from_4pp(&fpp(&[1, 1, 1, 1])),
            Err(Error::OddQuadrupletCount(1))
        );
        let g = gen_sched_from_4pp(&fpp(&[1, 1, 1, 1, 1, 1, 1, 2])).unwrap();
        assert!(!g.threshold_integral);
    }

    #[test]
    fn threshold_examples() {
        for (v, z, yes) in [
            ([1, 1, 1, 1, 2, 2, 2, 2], 90, true),
            ([2; 8], 108, true),
            ([1, 1, 1, 1, 1, 1, 1, 3], 74, false),
        ] {
            let r = verify_theorem2(&fpp(&v)).unwrap();
            assert_eq!(r.z_star, z);
            assert_eq!(r.witness.is_some(), yes);
            assert!(r.pass);
        }
    }

    #[test]
    fn threshold_check_refuses_two_machine_instances() {
        let inst = fpp(&[1; 16]);
        assert!(matches!(
            verify_theorem2(&inst),
            Err(Error::CapExceeded { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn decide_4pp_matches_label_enumeration(v in proptest::collection::vec(1i64..6, 8)) {
            let inst = fpp(&v);
            let fast = decide_4pp(&inst).unwrap();
            prop_assert_eq!(fast.is_some(), brute_4pp(&v));
            if let Some(w) = fast {
                prop_assert!(w.validate(&inst));
            }
        }

        #[test]
        fn generated_4pp_has_8m_positive_values(m in 1usize..4, seed in any::<u64>()) {
            // a yes-instance built from triplets (5, 6, 7) summing to 18, permuted
            let mut v: Vec<Time> = [5, 6, 7].repeat(m);
            let len = v.len();
            v.rotate_left(seed as usize % len);
            let out = gen_4pp_from_3partition(&pi(m, 18, &v)).unwrap();
            prop_assert_eq!(out.values().len(), 8 * m);
            prop_assert!(out.values().iter().all(|&a| a > 0));
        }
    }
}
