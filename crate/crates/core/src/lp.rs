//! Exact linear programming.
//!
//! Problems have the shape `maximize c·x` subject to `A x ≤ b`, `x ≥ 0`, with integer data and
//! `b ≥ 0`, so the slack basis is feasible from the start and no phase one is needed. The
//! tableau is kept fraction-free (integer pivoting with a running determinant): every entry is a
//! minor of the input matrix, and each pivot divides exactly by the previous pivot. Bland's rule
//! picks both entering and leaving variables, which rules out cycling on the heavily degenerate
//! feasibility problems used by region enumeration.
//!
//! Arithmetic first runs in checked `i128`; on overflow the same pivots are replayed in `BigInt`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<i64>,
    /// Rows `(a, b)` meaning `a · x ≤ b`.
    pub constraints: Vec<(Vec<i64>, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, solution: Vec<Q> },
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize, objective: Vec<i64>) -> Self {
        assert_eq!(objective.len(), num_vars);
        Self {
            num_vars,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add_le(&mut self, row: Vec<i64>, rhs: i64) {
        assert_eq!(row.len(), self.num_vars);
        self.constraints.push((row, rhs));
    }

    pub fn maximize(&self) -> Result<LpOutcome> {
        if let Some((_, b)) = self.constraints.iter().find(|(_, b)| *b < 0) {
            return Err(Error::Unsupported(format!(
                "negative right-hand side {b}: origin must be feasible"
            )));
        }
        match solve::<i128>(self) {
            Some(out) => Ok(out),
            None => solve::<BigInt>(self).ok_or(Error::Overflow("big-integer simplex")),
        }
    }
}

trait Scalar: Clone + Ord + Sized {
    fn from_i64(v: i64) -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn sign(&self) -> i8;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn solve<T: Scalar>(lp: &LinearProgram) -> Option<LpOutcome> {
    let n = lp.num_vars;
    let k = lp.constraints.len();
    let width = n + k + 1;
    let rhs = n + k;
    let zero = T::from_i64(0);

    let mut m: Vec<Vec<T>> = Vec::with_capacity(k + 1);
    for (i, (row, b)) in lp.constraints.iter().enumerate() {
        let mut r = vec![zero.clone(); width];
        for (j, &c) in row.iter().enumerate() {
            r[j] = T::from_i64(c);
        }
        r[n + i] = T::from_i64(1);
        r[rhs] = T::from_i64(*b);
        m.push(r);
    }
    let mut obj = vec![zero.clone(); width];
    for (j, &c) in lp.objective.iter().enumerate() {
        obj[j] = T::from_i64(-c);
    }
    m.push(obj);
    let obj_row = k;
    let mut basis: Vec<usize> = (n..n + k).collect();
    let mut det = T::from_i64(1);

    while let Some(s) = (0..n + k).find(|&j| m[obj_row][j].sign() < 0) {
        let mut leave: Option<usize> = None;
        for i in 0..k {
            if m[i][s].sign() <= 0 {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(r) => {
                    // rhs_i / a_is  vs  rhs_r / a_rs, both denominators positive
                    let lhs = m[i][rhs].mul(&m[r][s])?;
                    let rhs_v = m[r][rhs].mul(&m[i][s])?;
                    match lhs.cmp(&rhs_v) {
                        std::cmp::Ordering::Less => Some(i),
                        std::cmp::Ordering::Equal if basis[i] < basis[r] => Some(i),
                        _ => Some(r),
                    }
                }
            };
        }
        let Some(r) = leave else {
            return Some(LpOutcome::Unbounded);
        };
        let p = m[r][s].clone();
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[s].clone();
            for j in 0..width {
                let a = row[j].mul(&p)?;
                let b = f.mul(&pivot_row[j])?;
                row[j] = a.sub(&b)?.div_exact(&det);
            }
        }
        det = p;
        basis[r] = s;
    }

    let den = det.to_big();
    let mut solution = vec![Q::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            solution[b] = Q::new(m[i][rhs].to_big(), den.clone());
        }
    }
    let value = Q::new(m[obj_row][rhs].to_big(), den);
    Some(LpOutcome::Optimal { value, solution })
}

/// Decides strict feasibility of the homogeneous system `rows_i · z > 0` for all `i`,
/// `z_j > 0` for all `j`, plus `eq_i · z = 0`. Returns a point with `Σ z = 1` if feasible.
///
/// Solved as `max s` with `rows·z ≥ s`, `z ≥ s`, `eq·z = 0`, `Σ z ≤ 1`; the system is
/// homogeneous, so strict feasibility holds iff the optimum is positive.
pub fn strictly_feasible_point(m: usize, rows: &[Vec<i64>], eqs: &[Vec<i64>]) -> Result<Option<Vec<Q>>> {
    let nv = m + 1;
    let s = m;
    let mut objective = vec![0; nv];
    objective[s] = 1;
    let mut lp = LinearProgram::new(nv, objective);
    for row in rows {
        let mut r: Vec<i64> = row.iter().map(|c| -c).collect();
        r.push(1);
        lp.add_le(r, 0);
    }
    for j in 0..m {
        let mut r = vec![0; nv];
        r[j] = -1;
        r[s] = 1;
        lp.add_le(r, 0);
    }
    for eq in eqs {
        let mut r = eq.clone();
        r.push(0);
        lp.add_le(r.clone(), 0);
        lp.add_le(r.iter().map(|c| -c).collect(), 0);
    }
    let mut sum = vec![1; nv];
    sum[s] = 0;
    lp.add_le(sum, 1);

    match lp.maximize()? {
        LpOutcome::Optimal { value, solution } if value.is_positive() => {
            let z = &solution[..m];
            let total: Q = z.iter().cloned().sum();
            Ok(Some(z.iter().map(|x| x / &total).collect()))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        LpOutcome::Unbounded => Err(Error::Unsupported("unbounded feasibility program".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn small_lp_optimum() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let mut lp = LinearProgram::new(2, vec![3, 2]);
        lp.add_le(vec![1, 1], 4);
        lp.add_le(vec![1, 3], 6);
        lp.add_le(vec![1, 0], 3);
        let LpOutcome::Optimal { value, solution } = lp.maximize().unwrap() else {
            panic!()
        };
        assert_eq!(value, q(11));
        assert_eq!(solution, vec![q(3), q(1)]);
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 2x + y ≤ 2, x + 2y ≤ 2 → (2/3, 2/3)
        let mut lp = LinearProgram::new(2, vec![1, 1]);
        lp.add_le(vec![2, 1], 2);
        lp.add_le(vec![1, 2], 2);
        let LpOutcome::Optimal { value, solution } = lp.maximize().unwrap() else {
            panic!()
        };
        assert_eq!(value, Q::new(4.into(), 3.into()));
        assert_eq!(solution[0], Q::new(2.into(), 3.into()));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(2, vec![1, 0]);
        lp.add_le(vec![-1, 1], 1);
        assert_eq!(lp.maximize().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn bigint_fallback_matches() {
        let mut lp = LinearProgram::new(2, vec![1, 1]);
        lp.add_le(vec![2, 1], 2);
        lp.add_le(vec![1, 2], 2);
        assert_eq!(solve::<i128>(&lp), solve::<BigInt>(&lp));
    }

    #[test]
    fn strict_feasibility() {
        // z1 < z2 in the open 2-simplex: feasible
        let p = strictly_feasible_point(2, &[vec![-1, 1]], &[]).unwrap().unwrap();
        assert!(p[0] < p[1] && p[0] > Q::zero());
        // z1 < z2 and z2 < z1: infeasible
        assert!(strictly_feasible_point(2, &[vec![-1, 1], vec![1, -1]], &[])
            .unwrap()
            .is_none());
        // z1 = z2 line meets the open simplex
        assert!(strictly_feasible_point(2, &[], &[vec![1, -1]]).unwrap().is_some());
        // z1 = 0 does not
        assert!(strictly_feasible_point(2, &[], &[vec![1, 0]]).unwrap().is_none());
    }
}
