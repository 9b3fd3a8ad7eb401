//! Exact rational linear algebra over `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_q_row(row: &[i64]) -> Vec<Q> {
    row.iter().map(|&c| q(c)).collect()
}

/// Reduced row-echelon form. Zero rows are dropped; returns the rows and their pivot columns.
pub fn rref(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for j in c..ncols {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).0.len()
}

/// Scales a rational row to a primitive integer row (gcd 1) whose first nonzero entry is positive.
/// Returns `None` for the zero row.
pub fn primitive_row(row: &[Q]) -> Option<Vec<i64>> {
    let den = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.iter()
        .map(|x| {
            let v = x / &g;
            let v = if lead_neg { -v } else { v };
            v.to_i64()
        })
        .collect()
}

/// Primitive integer normalization of an integer covector (gcd 1, first nonzero entry positive).
pub fn primitive_int(row: &[i64]) -> Option<Vec<i64>> {
    let g = row.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return None;
    }
    let sign = if row.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 {
        -1
    } else {
        1
    };
    Some(row.iter().map(|&x| sign * x / g).collect())
}

/// Canonical key of a linear subspace given by the equations `rows · z = 0`:
/// RREF with each row scaled to a primitive integer row.
pub fn canonical_rows(rows: &[Vec<Q>]) -> Result<Vec<Vec<i64>>> {
    let (r, _) = rref(rows);
    r.iter()
        .map(|row| primitive_row(row).ok_or(Error::Overflow("canonical row")))
        .collect()
}

/// Unique solution of `a · x = b`, if the system has full column rank and is consistent.
pub fn solve_unique(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first()?.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&n) || pivots.len() != n {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

pub fn dot_q(a: &[i64], z: &[Q]) -> Q {
    a.iter()
        .zip(z)
        .filter(|(c, _)| **c != 0)
        .fold(Q::zero(), |acc, (&c, x)| acc + x * q(c))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a positive rational vector to the primitive integer vector on the same ray.
pub fn integer_ray(z: &[Q]) -> Vec<BigInt> {
    let den = lcm_of_denominators(z);
    let ints: Vec<BigInt> = z.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Option<Q> {
    s.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_drops_dependent_rows() {
        let rows = vec![to_q_row(&[1, 2, 3]), to_q_row(&[2, 4, 6]), to_q_row(&[0, 1, 1])];
        let (r, piv) = rref(&rows);
        assert_eq!(r.len(), 2);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r[0], to_q_row(&[1, 0, 1]));
    }

    #[test]
    fn primitive_row_normalizes_sign_and_scale() {
        let row = vec![Q::new(BigInt::from(-2), BigInt::from(3)), q(0), Q::new(BigInt::from(4), BigInt::from(3))];
        assert_eq!(primitive_row(&row), Some(vec![1, 0, -2]));
        assert_eq!(primitive_row(&[q(0), q(0)]), None);
        assert_eq!(primitive_int(&[0, -4, 6]), Some(vec![0, 2, -3]));
    }

    #[test]
    fn solve_unique_rejects_underdetermined() {
        let a = vec![to_q_row(&[1, -2]), to_q_row(&[1, 1])];
        let x = solve_unique(&a, &[q(0), q(1)]).unwrap();
        assert_eq!(x, vec![Q::new(2.into(), 3.into()), Q::new(1.into(), 3.into())]);
        assert!(solve_unique(&a[..1], &[q(0)]).is_none());
    }
}
