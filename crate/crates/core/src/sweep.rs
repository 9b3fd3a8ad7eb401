//! Lattice sweeps over the (open or closed) dilated standard simplex.
//!
//! The composition space is partitioned by the value of the first coordinate and the parts are
//! summed with rayon. Every sum is over integers, so the result does not depend on how the
//! partition is scheduled.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Number of units of work the caller is willing to spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorkBudget(pub u128);

impl WorkBudget {
    pub const DEFAULT: WorkBudget = WorkBudget(100_000_000);
    pub const UNLIMITED: WorkBudget = WorkBudget(u128::MAX);

    pub fn check(self, required: u128) -> Result<()> {
        if required > self.0 {
            Err(Error::BudgetExceeded {
                required,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for WorkBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of lattice points of `tΔ°`, i.e. compositions of `t` into `m` positive parts.
pub fn open_point_count(t: u64, m: usize) -> u128 {
    if m == 0 || t < m as u64 {
        return 0;
    }
    binomial(t - 1, m as u64 - 1)
}

/// Number of lattice points of the closed `tΔ`, i.e. weak compositions of `t` into `m` parts.
pub fn closed_point_count(t: u64, m: usize) -> u128 {
    if m == 0 {
        return 0;
    }
    binomial(t + m as u64 - 1, m as u64 - 1)
}

/// Sums `weight(z)` over all integer `z` with `z_i ≥ min_part` and `Σ z_i = t`.
///
/// `min_part` is 1 for the open simplex and 0 for the closed one.
pub fn par_sum<F>(t: i64, m: usize, min_part: i64, weight: F) -> i64
where
    F: Fn(&[i64]) -> i64 + Sync,
{
    if m == 0 {
        return 0;
    }
    let rest_min = min_part * (m as i64 - 1);
    let hi = t - rest_min;
    if hi < min_part {
        return 0;
    }
    if m == 1 {
        return weight(&[t]);
    }
    (min_part..=hi)
        .into_par_iter()
        .map(|first| {
            let mut buf = vec![0i64; m];
            buf[0] = first;
            let mut acc = 0i64;
            fill(&mut buf, 1, t - first, min_part, &weight, &mut acc);
            acc
        })
        .sum()
}

fn fill<F>(buf: &mut [i64], pos: usize, remaining: i64, min_part: i64, weight: &F, acc: &mut i64)
where
    F: Fn(&[i64]) -> i64,
{
    let m = buf.len();
    if pos == m - 1 {
        buf[pos] = remaining;
        *acc += weight(buf);
        return;
    }
    let rest_min = min_part * (m - pos - 1) as i64;
    let mut v = min_part;
    while v <= remaining - rest_min {
        buf[pos] = v;
        fill(buf, pos + 1, remaining - v, min_part, weight, acc);
        v += 1;
    }
}

/// Calls `visit` on every composition of `t` into `m` parts `≥ min_part`, sequentially, in
/// lexicographic order.
pub fn for_each<F>(t: i64, m: usize, min_part: i64, mut visit: F)
where
    F: FnMut(&[i64]),
{
    if m == 0 || t < min_part * m as i64 {
        return;
    }
    let mut buf = vec![0i64; m];
    fn rec<F: FnMut(&[i64])>(buf: &mut [i64], pos: usize, remaining: i64, min_part: i64, visit: &mut F) {
        let m = buf.len();
        if pos == m - 1 {
            buf[pos] = remaining;
            visit(buf);
            return;
        }
        let rest_min = min_part * (m - pos - 1) as i64;
        let mut v = min_part;
        while v <= remaining - rest_min {
            buf[pos] = v;
            rec(buf, pos + 1, remaining - v, min_part, visit);
            v += 1;
        }
    }
    rec(&mut buf, 0, t, min_part, &mut visit);
}
