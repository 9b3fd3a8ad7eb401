use std::collections::HashMap;

use serde::Serialize;

use crate::arrangements::Interval;
use crate::error::{Error, Result};

/// A multiset of gap indices, stored as multiplicities `(a_1, …, a_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiVec(pub Vec<i64>);

impl MultiVec {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.iter().any(|&x| x < 0) {
            return Err(Error::InvalidGaps(format!("negative multiplicity in {entries:?}")));
        }
        Ok(Self(entries))
    }

    pub fn zero(m: usize) -> Self {
        Self(vec![0; m])
    }

    /// The consecutive vector `e_[j,k]`.
    pub fn consecutive(m: usize, iv: Interval) -> Self {
        Self(iv.indicator(m))
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn support_disjoint(&self, other: &MultiVec) -> bool {
        self.0.iter().zip(&other.0).all(|(&x, &y)| x == 0 || y == 0)
    }

    pub fn climb(&self) -> i64 {
        climb(&self.0)
    }
}

/// `Σ_j max(a_j − a_{j−1}, 0)` with `a_0 = 0`.
pub fn climb(a: &[i64]) -> i64 {
    let mut prev = 0;
    let mut total = 0;
    for &x in a {
        total += (x - prev).max(0);
        prev = x;
    }
    total
}

/// Componentwise minimum `c` and the reduced pair `(u − c, v − c)`, which have disjoint supports.
pub fn reduce_pair(u: &[i64], v: &[i64]) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
    let c: Vec<i64> = u.iter().zip(v).map(|(&x, &y)| x.min(y)).collect();
    let a = u.iter().zip(&c).map(|(x, y)| x - y).collect();
    let b = v.iter().zip(&c).map(|(x, y)| x - y).collect();
    (a, b, c)
}

/// Upper limit on the number of sub-multisets visited by the exhaustive decomposition search.
pub const DECOMPOSITION_STATE_LIMIT: u128 = 2_000_000;

/// Minimum number of consecutive vectors (any interval of `[m]`) summing to `a`, by exhaustive
/// memoized search, together with one optimal decomposition.
pub fn min_consecutive_decomposition(a: &MultiVec) -> Result<(usize, Vec<Interval>)> {
    let states: u128 = a.0.iter().map(|&x| x as u128 + 1).product();
    if states > DECOMPOSITION_STATE_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "{states} states exceed {DECOMPOSITION_STATE_LIMIT}"
        )));
    }
    let m = a.m();
    let intervals: Vec<Interval> = (1..=m)
        .flat_map(|j| (j..=m).map(move |k| Interval::new(j, k)))
        .collect();
    let mut memo: HashMap<Vec<i64>, (usize, Option<usize>)> = HashMap::new();
    fn best(
        a: &[i64],
        intervals: &[Interval],
        memo: &mut HashMap<Vec<i64>, (usize, Option<usize>)>,
    ) -> usize {
        if a.iter().all(|&x| x == 0) {
            return 0;
        }
        if let Some(&(n, _)) = memo.get(a) {
            return n;
        }
        let mut out = (usize::MAX, None);
        for (i, iv) in intervals.iter().enumerate() {
            if (iv.start..=iv.end).all(|p| a[p - 1] > 0) {
                let mut rest = a.to_vec();
                for p in iv.start..=iv.end {
                    rest[p - 1] -= 1;
                }
                let n = 1 + best(&rest, intervals, memo);
                if n < out.0 {
                    out = (n, Some(i));
                }
            }
        }
        memo.insert(a.to_vec(), out);
        out.0
    }
    let n = best(&a.0, &intervals, &mut memo);
    let mut witness = Vec::with_capacity(n);
    let mut cur = a.0.clone();
    while let Some(&(_, Some(i))) = memo.get(&cur) {
        let iv = intervals[i];
        for p in iv.start..=iv.end {
            cur[p - 1] -= 1;
        }
        witness.push(iv);
    }
    Ok((n, witness))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClimbInequalityReport {
    pub samples: usize,
    pub skipped_overlapping: usize,
    pub violations: Vec<[MultiVec; 3]>,
}

impl ClimbInequalityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `climb(a + c) + climb(b + c) ≥ climb(a) + climb(b)` on triples whose first two
/// members have disjoint supports; other triples are skipped and counted.
pub fn climb_inequality_check<I>(samples: I) -> ClimbInequalityReport
where
    I: IntoIterator<Item = [MultiVec; 3]>,
{
    let mut report = ClimbInequalityReport {
        samples: 0,
        skipped_overlapping: 0,
        violations: Vec::new(),
    };
    for [a, b, c] in samples {
        if !a.support_disjoint(&b) {
            report.skipped_overlapping += 1;
            continue;
        }
        report.samples += 1;
        let ac: Vec<i64> = a.0.iter().zip(&c.0).map(|(x, y)| x + y).collect();
        let bc: Vec<i64> = b.0.iter().zip(&c.0).map(|(x, y)| x + y).collect();
        if climb(&ac) + climb(&bc) < a.climb() + b.climb() {
            report.violations.push([a, b, c]);
        }
    }
    report
}

/// All vectors in `{0, …, max_entry}^m` in lexicographic order.
pub fn all_vectors(m: usize, max_entry: i64) -> Vec<MultiVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max_entry).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiVec).collect()
}

/// Every triple `(a, b, c)` over `{0, …, max_entry}^m` with `supp a ∩ supp b = ∅`.
pub fn exhaustive_disjoint_triples(m: usize, max_entry: i64) -> Vec<[MultiVec; 3]> {
    let all = all_vectors(m, max_entry);
    let mut out = Vec::new();
    for a in &all {
        for b in all.iter().filter(|b| a.support_disjoint(b)) {
            for c in &all {
                out.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    out
}
