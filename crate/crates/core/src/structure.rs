//! Structural transforms on schedules: rebalancing displacements, column
//! swaps, and machine alignment of a schedule with an alternative.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::Schedule;

/// Repeatedly moves the first job of the longest machine to the front of
/// the shortest machine until every machine holds `n / m` jobs. Ties pick
/// the lowest machine index.
///
/// Each displacement keeps all other multipliers and strictly lowers the
/// moved job's multiplier (loads differ by at least 2 while unbalanced), so
/// the flow time never increases under any nonnegative scenario.
pub fn rebalance(schedule: &Schedule) -> Result<Schedule> {
    rebalance_steps(schedule).map(|steps| steps.last().cloned().unwrap_or_else(|| schedule.clone()))
}

/// Every intermediate schedule of [`rebalance`], excluding the input.
pub fn rebalance_steps(schedule: &Schedule) -> Result<Vec<Schedule>> {
    let m = schedule.machine_count();
    let n = schedule.job_count();
    if !n.is_multiple_of(m) {
        return Err(Error::NotDivisible {
            jobs: n,
            machines: m,
        });
    }
    let mut rows = schedule.machines().to_vec();
    let mut steps = Vec::new();
    loop {
        let longest = argmax_len(&rows);
        let shortest = argmin_len(&rows);
        if rows[longest].len() == rows[shortest].len() {
            break;
        }
        let job = rows[longest].remove(0);
        rows[shortest].insert(0, job);
        steps.push(Schedule::new(rows.clone())?);
    }
    Ok(steps)
}

fn argmax_len(rows: &[Vec<usize>]) -> usize {
    (0..rows.len())
        .min_by_key(|&j| (core::cmp::Reverse(rows[j].len()), j))
        .unwrap()
}

fn argmin_len(rows: &[Vec<usize>]) -> usize {
    (0..rows.len()).min_by_key(|&j| (rows[j].len(), j)).unwrap()
}

/// Exchanges the jobs in 0-based `column` of machines `a` and `b`.
/// The schedule must be balanced (an `m × n0` matrix).
pub fn column_swap(schedule: &Schedule, column: usize, a: usize, b: usize) -> Result<Schedule> {
    if !schedule.is_balanced() {
        return Err(Error::Unbalanced);
    }
    let m = schedule.machine_count();
    let width = schedule.machines()[0].len();
    for machine in [a, b] {
        if machine >= m {
            return Err(Error::IndexOutOfRange {
                index: machine,
                limit: m,
            });
        }
    }
    if column >= width {
        return Err(Error::IndexOutOfRange {
            index: column,
            limit: width,
        });
    }
    let mut rows = schedule.machines().to_vec();
    let tmp = rows[a][column];
    rows[a][column] = rows[b][column];
    rows[b][column] = tmp;
    Schedule::new(rows)
}

/// `n0 × n0` grid: cell `(x, y)` holds the jobs at column `x` in `pi` and
/// column `y` in `sigma`, in ascending job order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictMatrix {
    width: usize,
    cells: Vec<Vec<usize>>,
}

impl ConflictMatrix {
    pub fn new(pi: &Schedule, sigma: &Schedule) -> Result<Self> {
        check_pair(pi, sigma)?;
        let width = pi.machines()[0].len();
        let n = pi.job_count();
        let mut col_pi = vec![0usize; n];
        let mut col_sigma = vec![0usize; n];
        for row in pi.machines() {
            for (x, &job) in row.iter().enumerate() {
                col_pi[job] = x;
            }
        }
        for row in sigma.machines() {
            for (y, &job) in row.iter().enumerate() {
                col_sigma[job] = y;
            }
        }
        let mut cells = vec![Vec::new(); width * width];
        for job in 0..n {
            cells[col_pi[job] * width + col_sigma[job]].push(job);
        }
        Ok(Self { width, cells })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cell(&self, x: usize, y: usize) -> &[usize] {
        &self.cells[x * self.width + y]
    }

    pub fn row_total(&self, x: usize) -> usize {
        (0..self.width).map(|y| self.cell(x, y).len()).sum()
    }

    pub fn column_total(&self, y: usize) -> usize {
        (0..self.width).map(|x| self.cell(x, y).len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    /// One job per row and per column: for each row `x`, the matched column
    /// `y` and the lowest-index job taken from cell `(x, y)`.
    fn extract_transversal(&mut self) -> Option<Vec<(usize, usize, usize)>> {
        let w = self.width;
        let adj: Vec<Vec<usize>> = (0..w)
            .map(|x| (0..w).filter(|&y| !self.cell(x, y).is_empty()).collect())
            .collect();
        let matched = perfect_matching(&adj, w)?;
        Some(
            matched
                .into_iter()
                .enumerate()
                .map(|(x, y)| {
                    let job = self.cells[x * w + y].remove(0);
                    (x, y, job)
                })
                .collect(),
        )
    }
}

fn check_pair(pi: &Schedule, sigma: &Schedule) -> Result<()> {
    if !pi.is_balanced() || !sigma.is_balanced() {
        return Err(Error::Unbalanced);
    }
    if pi.machine_count() != sigma.machine_count() {
        return Err(Error::MachineCountMismatch {
            expected: pi.machine_count(),
            found: sigma.machine_count(),
        });
    }
    if pi.job_count() != sigma.job_count() {
        return Err(Error::LengthMismatch {
            expected: pi.job_count(),
            found: sigma.job_count(),
        });
    }
    Ok(())
}

/// Kuhn's augmenting-path matching of left vertices `0..adj.len()` into
/// right vertices `0..right`. Returns the partner of every left vertex, or
/// `None` if some left vertex stays unmatched.
pub fn perfect_matching(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(
        v: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &to in &adj[v] {
            if seen[to] {
                continue;
            }
            seen[to] = true;
            if owner[to].is_none_or(|u| augment(u, adj, seen, owner)) {
                owner[to] = Some(v);
                return true;
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for v in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(v, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut partner = vec![usize::MAX; adj.len()];
    for (y, o) in owner.iter().enumerate() {
        if let Some(x) = o {
            partner[*x] = y;
        }
    }
    Some(partner)
}

/// Aligns `pi` and `sigma` so that every machine holds the same job set in
/// both, using within-column permutations only.
///
/// Each round extracts a transversal of the conflict matrix (one job per
/// row and column), which exists because every row and column holds the
/// same number of jobs. Round `j` becomes machine `j` of both outputs.
pub fn canonicalize(pi: &Schedule, sigma: &Schedule) -> Result<(Schedule, Schedule)> {
    let mut matrix = ConflictMatrix::new(pi, sigma)?;
    let m = pi.machine_count();
    let w = matrix.width();
    let mut rows_pi = vec![vec![usize::MAX; w]; m];
    let mut rows_sigma = vec![vec![usize::MAX; w]; m];
    for color in 0..m {
        let picked = matrix
            .extract_transversal()
            .ok_or(Error::Internal("conflict matrix has no transversal"))?;
        for (x, y, job) in picked {
            rows_pi[color][x] = job;
            rows_sigma[color][y] = job;
        }
    }
    if !matrix.is_empty() {
        return Err(Error::Internal("conflict matrix not exhausted"));
    }
    Ok((Schedule::new(rows_pi)?, Schedule::new(rows_sigma)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{flow_time, load_vector, Instance, Scenario};
    use crate::regret::max_regret;
    use alloc::collections::BTreeSet;
    use proptest::prelude::*;

    fn sched(rows: &[&[usize]]) -> Schedule {
        Schedule::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn grid_pair() -> (Schedule, Schedule) {
        let pi = Schedule::new(
            (0..4)
                .map(|r| (0..4).map(|c| 4 * c + r).collect())
                .collect(),
        )
        .unwrap();
        let sigma = Schedule::new(
            (0..4)
                .map(|r| (0..4).map(|c| 4 * r + c).collect())
                .collect(),
        )
        .unwrap();
        (pi, sigma)
    }

    fn column_sets(s: &Schedule) -> Vec<BTreeSet<usize>> {
        let w = s.machines()[0].len();
        (0..w)
            .map(|c| s.machines().iter().map(|r| r[c]).collect())
            .collect()
    }

    fn check_alignment(pi: &Schedule, sigma: &Schedule, a: &Schedule, b: &Schedule) {
        assert_eq!(column_sets(pi), column_sets(a));
        assert_eq!(column_sets(sigma), column_sets(b));
        for (ra, rb) in a.machines().iter().zip(b.machines()) {
            let sa: BTreeSet<_> = ra.iter().collect();
            let sb: BTreeSet<_> = rb.iter().collect();
            assert_eq!(sa, sb);
        }
    }

    #[test]
    fn rebalance_examples() {
        let s = sched(&[&[0, 1, 2], &[3]]);
        assert_eq!(rebalance(&s).unwrap(), sched(&[&[1, 2], &[0, 3]]));
        assert_eq!(rebalance_steps(&s).unwrap().len(), 1);

        let b = sched(&[&[0, 1], &[2, 3]]);
        assert_eq!(rebalance(&b).unwrap(), b);

        let s = sched(&[&[0, 1, 2, 3], &[4, 5]]);
        let ones = Scenario::new(vec![1; 6]).unwrap();
        assert_eq!(flow_time(&s, &ones), 13);
        let r = rebalance(&s).unwrap();
        assert_eq!(load_vector(&r), vec![3, 3]);
        assert_eq!(flow_time(&r, &ones), 12);

        assert_eq!(
            rebalance(&sched(&[&[0, 1, 2], &[]])),
            Err(Error::NotDivisible {
                jobs: 3,
                machines: 2
            })
        );
    }

    #[test]
    fn column_swap_examples() {
        let (pi, _) = grid_pair();
        let swapped = column_swap(&pi, 0, 0, 1).unwrap();
        assert_eq!(swapped.machines()[0][0], 1);
        assert_eq!(swapped.machines()[1][0], 0);
        let inst =
            Instance::from_pairs(4, &(0..16).map(|i| (i % 5, 3 + 2 * i)).collect::<Vec<_>>())
                .unwrap();
        assert_eq!(
            max_regret(&inst, &pi).unwrap().max_regret,
            max_regret(&inst, &swapped).unwrap().max_regret
        );
        assert_eq!(column_swap(&pi, 2, 3, 3).unwrap(), pi);
        assert!(matches!(
            column_swap(&pi, 4, 0, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            column_swap(&pi, 0, 0, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert_eq!(
            column_swap(&sched(&[&[0, 1], &[2]]), 0, 0, 1),
            Err(Error::Unbalanced)
        );
    }

    #[test]
    fn conflict_matrix_rows_and_columns_hold_m_jobs() {
        let (pi, sigma) = grid_pair();
        let cm = ConflictMatrix::new(&pi, &sigma).unwrap();
        for i in 0..4 {
            assert_eq!(cm.row_total(i), 4);
            assert_eq!(cm.column_total(i), 4);
        }
        // job 5 (0-based) sits in column 1 of pi and column 1 of sigma
        assert_eq!(cm.cell(1, 1), &[5]);
    }

    #[test]
    fn canonicalize_transposed_grid() {
        let (pi, sigma) = grid_pair();
        let (a, b) = canonicalize(&pi, &sigma).unwrap();
        check_alignment(&pi, &sigma, &a, &b);
    }

    #[test]
    fn canonicalize_identity_and_single_machine() {
        let (pi, _) = grid_pair();
        let (a, b) = canonicalize(&pi, &pi).unwrap();
        check_alignment(&pi, &pi, &a, &b);
        assert_eq!(a, b);

        let p = sched(&[&[2, 0, 1]]);
        let s = sched(&[&[1, 2, 0]]);
        assert_eq!(canonicalize(&p, &s).unwrap(), (p, s));
    }

    #[test]
    fn canonicalize_rejects_unbalanced() {
        let p = sched(&[&[0, 1], &[2]]);
        assert_eq!(canonicalize(&p, &p), Err(Error::Unbalanced));
    }

    fn arb_balanced_pair() -> impl Strategy<Value = (Schedule, Schedule)> {
        (1usize..5, 1usize..5).prop_flat_map(|(m, w)| {
            let ids: Vec<usize> = (0..m * w).collect();
            (Just(ids.clone()).prop_shuffle(), Just(ids).prop_shuffle()).prop_map(move |(a, b)| {
                let to = |v: Vec<usize>| {
                    Schedule::new(v.chunks(w).map(<[usize]>::to_vec).collect()).unwrap()
                };
                (to(a), to(b))
            })
        })
    }

    proptest! {
        #[test]
        fn canonicalize_aligns_random_pairs((pi, sigma) in arb_balanced_pair()) {
            let (a, b) = canonicalize(&pi, &sigma).unwrap();
            check_alignment(&pi, &sigma, &a, &b);
        }

        #[test]
        fn rebalance_never_increases_flow_time(
            loads in proptest::collection::vec(0usize..6, 2..4),
            p in proptest::collection::vec(1i64..20, 24),
        ) {
            let m = loads.len();
            let n: usize = loads.iter().sum();
            prop_assume!(n > 0 && n.is_multiple_of(m));
            let mut next = 0;
            let rows: Vec<Vec<usize>> = loads.iter().map(|&l| { let r = (next..next + l).collect(); next += l; r }).collect();
            let s = Schedule::new(rows).unwrap();
            let sc = Scenario::new(p[..n].to_vec()).unwrap();
            let mut prev = flow_time(&s, &sc);
            for step in rebalance_steps(&s).unwrap() {
                let f = flow_time(&step, &sc);
                prop_assert!(f < prev);
                prev = f;
            }
            prop_assert!(rebalance(&s).unwrap().is_balanced());
        }
    }
}
