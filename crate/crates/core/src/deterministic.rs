//! Deterministic `P||sum C_i`: shortest processing time first, each job to
//! the currently least loaded machine.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{flow_time, Scenario, Schedule, Time};

/// SPT schedule for a fixed scenario on `machines` machines.
///
/// Ties: equal durations by ascending job index, equally loaded machines by
/// lowest machine index.
///
/// # Panics
/// If `machines == 0`.
pub fn spt_schedule(scenario: &Scenario, machines: usize) -> Schedule {
    assert!(machines >= 1, "need at least one machine");
    let p = scenario.durations();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| (p[i], i));

    let mut rows = vec![Vec::new(); machines];
    let mut load = vec![0 as Time; machines];
    for job in order {
        let target = (0..machines)
            .min_by_key(|&j| (load[j], j))
            .expect("machines >= 1");
        rows[target].push(job);
        load[target] += p[job];
    }
    Schedule::new(rows).expect("SPT assigns every job exactly once")
}

/// `F*(S)`: the optimal total flow time for the scenario.
pub fn optimal_flow_time(scenario: &Scenario, machines: usize) -> Time {
    flow_time(&spt_schedule(scenario, machines), scenario)
}

/// `F*(S)` straight from the durations without materializing a schedule:
/// sorted descending, the `r`-th job (0-based) gets multiplier `r / m + 1`.
pub(crate) fn optimal_flow_time_of(durations: &mut [Time], machines: usize) -> Time {
    durations.sort_unstable_by(|a, b| b.cmp(a));
    durations
        .iter()
        .enumerate()
        .map(|(r, &p)| (r / machines + 1) as Time * p)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::multipliers;
    use proptest::prelude::*;

    fn sc(p: &[Time]) -> Scenario {
        Scenario::new(p.to_vec()).unwrap()
    }

    /// Every assignment of jobs to machines, every order on each machine.
    fn brute_force_optimum(p: &[Time], m: usize) -> Time {
        fn rec(job: usize, p: &[Time], rows: &mut Vec<Vec<usize>>, best: &mut Time) {
            if job == p.len() {
                // order on a machine: best is SPT, but enumerate permutations anyway
                let mut total = 0;
                for row in rows.iter() {
                    total += best_order(row, p);
                }
                *best = (*best).min(total);
                return;
            }
            for j in 0..rows.len() {
                rows[j].push(job);
                rec(job + 1, p, rows, best);
                rows[j].pop();
            }
        }
        fn best_order(row: &[usize], p: &[Time]) -> Time {
            let mut perm = row.to_vec();
            let mut best = Time::MAX;
            permute(&mut perm, 0, p, &mut best);
            if row.is_empty() {
                0
            } else {
                best
            }
        }
        fn permute(v: &mut Vec<usize>, k: usize, p: &[Time], best: &mut Time) {
            if k == v.len() {
                let mut clock = 0;
                let mut sum = 0;
                for &j in v.iter() {
                    clock += p[j];
                    sum += clock;
                }
                *best = (*best).min(sum);
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                permute(v, k + 1, p, best);
                v.swap(k, i);
            }
        }
        let mut best = Time::MAX;
        rec(0, p, &mut vec![Vec::new(); m], &mut best);
        best
    }

    #[test]
    fn spt_examples() {
        let s = spt_schedule(&sc(&[3, 1, 2]), 2);
        assert_eq!(s.machines(), &[vec![1, 0], vec![2]]);
        assert_eq!(optimal_flow_time(&sc(&[3, 1, 2]), 2), 7);
        assert_eq!(brute_force_optimum(&[3, 1, 2], 2), 7);

        let s = spt_schedule(&sc(&[1, 2, 3]), 1);
        assert_eq!(s.machines(), &[vec![0, 1, 2]]);
        assert_eq!(optimal_flow_time(&sc(&[1, 2, 3]), 1), 10);
        assert_eq!(brute_force_optimum(&[1, 2, 3], 1), 10);

        let s = spt_schedule(&sc(&[5]), 3);
        assert_eq!(s.machines(), &[vec![0], vec![], vec![]]);
        assert_eq!(optimal_flow_time(&sc(&[5]), 3), 5);
    }

    #[test]
    fn optimal_flow_time_examples() {
        for m in 1..4 {
            assert_eq!(optimal_flow_time(&sc(&[0, 0, 0]), m), 0);
        }
        assert_eq!(optimal_flow_time(&sc(&[2, 2]), 1), 6);
    }

    proptest! {
        #[test]
        fn spt_is_optimal(p in proptest::collection::vec(0i64..30, 1..7), m in 1usize..4) {
            let s = sc(&p);
            let value = optimal_flow_time(&s, m);
            prop_assert_eq!(value, brute_force_optimum(&p, m));
            let mut buf = p.clone();
            prop_assert_eq!(optimal_flow_time_of(&mut buf, m), value);
        }

        #[test]
        fn ties_do_not_change_the_value(p in proptest::collection::vec(0i64..4, 1..8), m in 1usize..4) {
            // relabel jobs in reverse: a different tie order among equal durations
            let rev: Vec<Time> = p.iter().rev().copied().collect();
            prop_assert_eq!(optimal_flow_time(&sc(&p), m), optimal_flow_time(&sc(&rev), m));
            let s = spt_schedule(&sc(&p), m);
            prop_assert_eq!(multipliers(&s).len(), p.len());
        }
    }
}
