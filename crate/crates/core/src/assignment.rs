//! Minimum-cost rectangular assignment by shortest augmenting paths with
//! row/column potentials (the Hungarian method, O(rows^2 * cols)).

use alloc::vec::Vec;

use crate::model::Time;

const INF: Time = Time::MAX / 4;

/// Reusable scratch space so repeated solves do not reallocate.
#[derive(Debug, Default, Clone)]
pub struct AssignmentSolver {
    u: Vec<Time>,
    v: Vec<Time>,
    owner: Vec<usize>,
    way: Vec<usize>,
    min_to: Vec<Time>,
    used: Vec<bool>,
}

impl AssignmentSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns every row to a distinct column minimizing total cost.
    /// `cost(r, c)` must be finite and `rows <= cols`.
    ///
    /// Returns the optimal cost and, per row, the chosen column. Rows are
    /// inserted in ascending order and columns scanned in ascending order,
    /// so the result is deterministic.
    pub fn solve<F>(
        &mut self,
        rows: usize,
        cols: usize,
        cost: F,
        assignment: &mut Vec<usize>,
    ) -> Time
    where
        F: Fn(usize, usize) -> Time,
    {
        assert!(rows <= cols, "assignment needs rows <= cols");
        // 1-based internally; column 0 is the virtual source.
        self.u.clear();
        self.u.resize(rows + 1, 0);
        self.v.clear();
        self.v.resize(cols + 1, 0);
        self.owner.clear();
        self.owner.resize(cols + 1, 0);
        self.way.clear();
        self.way.resize(cols + 1, 0);
        self.min_to.resize(cols + 1, INF);
        self.used.resize(cols + 1, false);

        for row in 1..=rows {
            self.owner[0] = row;
            let mut col0 = 0usize;
            self.min_to.iter_mut().for_each(|x| *x = INF);
            self.used.iter_mut().for_each(|x| *x = false);
            loop {
                self.used[col0] = true;
                let r0 = self.owner[col0];
                let mut delta = INF;
                let mut col1 = 0usize;
                for c in 1..=cols {
                    if self.used[c] {
                        continue;
                    }
                    let reduced = cost(r0 - 1, c - 1) - self.u[r0] - self.v[c];
                    if reduced < self.min_to[c] {
                        self.min_to[c] = reduced;
                        self.way[c] = col0;
                    }
                    if self.min_to[c] < delta {
                        delta = self.min_to[c];
                        col1 = c;
                    }
                }
                for c in 0..=cols {
                    if self.used[c] {
                        self.u[self.owner[c]] += delta;
                        self.v[c] -= delta;
                    } else {
                        self.min_to[c] -= delta;
                    }
                }
                col0 = col1;
                if self.owner[col0] == 0 {
                    break;
                }
            }
            loop {
                let prev = self.way[col0];
                self.owner[col0] = self.owner[prev];
                col0 = prev;
                if col0 == 0 {
                    break;
                }
            }
        }

        assignment.clear();
        assignment.resize(rows, usize::MAX);
        for c in 1..=cols {
            if self.owner[c] != 0 {
                assignment[self.owner[c] - 1] = c - 1;
            }
        }
        assignment
            .iter()
            .enumerate()
            .map(|(r, &c)| cost(r, c))
            .sum()
    }
}

/// One-shot convenience wrapper around [`AssignmentSolver`].
pub fn min_cost_assignment<F>(rows: usize, cols: usize, cost: F) -> (Time, Vec<usize>)
where
    F: Fn(usize, usize) -> Time,
{
    let mut out = Vec::new();
    let value = AssignmentSolver::new().solve(rows, cols, cost, &mut out);
    (value, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    /// Brute-force reference: tries every injective row → column map.
    fn brute_force_assignment(cost: &[Vec<Time>]) -> Time {
        fn rec(r: usize, cost: &[Vec<Time>], used: &mut Vec<bool>, acc: Time, best: &mut Time) {
            if r == cost.len() {
                *best = (*best).min(acc);
                return;
            }
            for c in 0..used.len() {
                if !used[c] {
                    used[c] = true;
                    rec(r + 1, cost, used, acc + cost[r][c], best);
                    used[c] = false;
                }
            }
        }
        let cols = cost.first().map_or(0, Vec::len);
        let mut best = Time::MAX;
        rec(0, cost, &mut vec![false; cols], 0, &mut best);
        best
    }

    #[test]
    fn square_example() {
        let cost = [[4, 1, 3], [2, 0, 5], [3, 2, 2]];
        let (value, asg) = min_cost_assignment(3, 3, |r, c| cost[r][c]);
        assert_eq!(value, 5);
        assert_eq!(asg, vec![1, 0, 2]);
    }

    #[test]
    fn rectangular_picks_cheapest_columns() {
        let cost = [[7, 1, 9, 1], [1, 8, 8, 9]];
        let (value, asg) = min_cost_assignment(2, 4, |r, c| cost[r][c]);
        assert_eq!(value, 2);
        assert_eq!(asg[1], 0);
        assert!(asg[0] == 1 || asg[0] == 3);
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            rows in 1usize..5,
            extra in 0usize..3,
            seed in proptest::collection::vec(0i64..40, 32),
        ) {
            let cols = rows + extra;
            let cost: Vec<Vec<Time>> = (0..rows)
                .map(|r| (0..cols).map(|c| seed[(r * cols + c) % seed.len()] * (1 + (r as i64 ^ c as i64) % 3)).collect())
                .collect();
            let (value, asg) = min_cost_assignment(rows, cols, |r, c| cost[r][c]);
            prop_assert_eq!(value, brute_force_assignment(&cost));
            let mut seen = vec![false; cols];
            for &c in &asg {
                prop_assert!(!seen[c]);
                seen[c] = true;
            }
        }
    }
}
