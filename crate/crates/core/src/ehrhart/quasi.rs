use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, Q};

/// A quasipolynomial of degree `degree` and period `period`, possibly with only some
/// constituents known. Coefficients are stored highest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quasipolynomial {
    pub degree: usize,
    pub period: u64,
    pub constituents: BTreeMap<u64, Vec<Q>>,
}

impl Quasipolynomial {
    pub fn new(degree: usize, period: u64) -> Self {
        assert!(period >= 1);
        Self {
            degree,
            period,
            constituents: BTreeMap::new(),
        }
    }

    pub fn residue(&self, t: i64) -> u64 {
        t.rem_euclid(self.period as i64) as u64
    }

    pub fn constituent(&self, residue: u64) -> Option<&[Q]> {
        self.constituents.get(&residue).map(Vec::as_slice)
    }

    pub fn eval(&self, t: i64) -> Result<Q> {
        let r = self.residue(t);
        let coeffs = self.constituents.get(&r).ok_or(Error::MissingConstituent {
            residue: r,
            period: self.period,
        })?;
        Ok(eval_poly(coeffs, t))
    }

    /// Whether every known constituent has leading coefficient `1/(m−1)!` in degree `m − 1`.
    pub fn has_simplex_leading_term(&self, m: usize) -> bool {
        let expected = Q::new(BigInt::one(), factorial(m.saturating_sub(1)));
        self.degree + 1 == m
            && self
                .constituents
                .values()
                .all(|c| c.len() == self.degree + 1 && c[0] == expected)
    }
}

impl Serialize for Quasipolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let constituents: BTreeMap<u64, Vec<String>> = self
            .constituents
            .iter()
            .map(|(r, c)| (*r, c.iter().map(linalg::fmt_q).collect()))
            .collect();
        let mut st = s.serialize_struct("Quasipolynomial", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("period", &self.period)?;
        st.serialize_field("constituents", &constituents)?;
        st.end()
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Horner evaluation; `coeffs` highest degree first.
pub fn eval_poly(coeffs: &[Q], t: i64) -> Q {
    let t = Q::from_integer(t.into());
    coeffs.iter().fold(Q::zero(), |acc, c| acc * &t + c)
}

/// Exact interpolation of `samples` by a polynomial of degree at most `degree`.
///
/// The first `degree + 1` samples determine the polynomial; any further samples must agree with
/// it exactly, otherwise the samples were not drawn from one polynomial constituent (typically a
/// wrong period hypothesis) and `InconsistentSamples` is returned.
pub fn fit_constituent(samples: &[(i64, BigInt)], degree: usize) -> Result<Vec<Q>> {
    if samples.len() < degree + 1 {
        return Err(Error::SingularSystem(format!(
            "{} samples cannot determine degree {degree}",
            samples.len()
        )));
    }
    let mut ts: Vec<i64> = samples.iter().map(|s| s.0).collect();
    ts.sort_unstable();
    if let Some(w) = ts.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::SingularSystem(format!("duplicate sample t = {}", w[0])));
    }
    let (head, tail) = samples.split_at(degree + 1);
    let rows: Vec<Vec<Q>> = head
        .iter()
        .map(|(t, _)| {
            let t = Q::from_integer((*t).into());
            let mut row = vec![Q::one(); degree + 1];
            for k in (0..degree).rev() {
                row[k] = &row[k + 1] * &t;
            }
            row
        })
        .collect();
    let rhs: Vec<Q> = head.iter().map(|(_, c)| Q::from_integer(c.clone())).collect();
    let coeffs = linalg::solve_unique(&rows, &rhs)
        .ok_or_else(|| Error::SingularSystem("Vandermonde system is singular".into()))?;
    for (t, c) in tail {
        let predicted = eval_poly(&coeffs, *t);
        let actual = Q::from_integer(c.clone());
        if predicted != actual {
            return Err(Error::InconsistentSamples {
                degree,
                t: t.to_string(),
                expected: linalg::fmt_q(&predicted),
                actual: actual.to_string(),
            });
        }
    }
    Ok(coeffs)
}

/// Sample dilations `t ≡ residue (mod period)`, `t ≥ min_t`, in increasing order.
pub fn residue_samples(residue: u64, period: u64, min_t: u64, count: usize) -> Vec<u64> {
    let first = if residue >= min_t {
        residue
    } else {
        let k = (min_t - residue).div_ceil(period);
        residue + k * period
    };
    (0..count as u64).map(|k| first + k * period).collect()
}

/// Fits the constituents for `residues` from `count(t)`, using `degree + 2` samples per
/// residue (one more than needed, as a consistency check) with `t ≥ min_t`.
pub fn fit_quasipolynomial<F>(degree: usize, period: u64, residues: &[u64], min_t: u64, mut count: F) -> Result<Quasipolynomial>
where
    F: FnMut(u64) -> Result<BigInt>,
{
    let mut qp = Quasipolynomial::new(degree, period);
    for &r in residues {
        if r >= period {
            return Err(Error::Unsupported(format!("residue {r} not below period {period}")));
        }
        let ts = residue_samples(r, period, min_t, degree + 2);
        let samples = ts
            .iter()
            .map(|&t| Ok((i64::try_from(t).map_err(|_| Error::Overflow("sample t"))?, count(t)?)))
            .collect::<Result<Vec<_>>>()?;
        qp.constituents.insert(r, fit_constituent(&samples, degree)?);
    }
    Ok(qp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn s(pairs: &[(i64, i64)]) -> Vec<(i64, BigInt)> {
        pairs.iter().map(|&(t, c)| (t, BigInt::from(c))).collect()
    }

    #[test]
    fn b3_residue_zero_constituent() {
        // The reported counts at multiples of 2520, from ½t² − 55/6 t + 80.
        let samples = s(&[(2520, 3_152_180), (5040, 12_654_680), (7560, 28_507_580)]);
        let c = fit_constituent(&samples, 2).unwrap();
        assert_eq!(c, vec![Q::new(1.into(), 2.into()), Q::new((-55).into(), 6.into()), q(80)]);
    }

    #[test]
    fn constant_and_linear() {
        assert_eq!(fit_constituent(&s(&[(3, 1), (9, 1)]), 0).unwrap(), vec![q(1)]);
        // Golomb m = 2: t − 1 on odd t, t − 2 on even t
        assert_eq!(fit_constituent(&s(&[(3, 2), (5, 4), (7, 6)]), 1).unwrap(), vec![q(1), q(-1)]);
        assert_eq!(fit_constituent(&s(&[(4, 2), (6, 4), (8, 6)]), 1).unwrap(), vec![q(1), q(-2)]);
    }

    #[test]
    fn inconsistent_and_singular() {
        let err = fit_constituent(&s(&[(3, 2), (4, 2), (5, 4)]), 1).unwrap_err();
        assert!(matches!(err, Error::InconsistentSamples { .. }));
        let err = fit_constituent(&s(&[(3, 2), (3, 2)]), 1).unwrap_err();
        assert!(matches!(err, Error::SingularSystem(_)));
        assert!(fit_constituent(&s(&[(3, 2)]), 1).is_err());
    }

    #[test]
    fn residues_and_eval() {
        assert_eq!(residue_samples(0, 12, 1, 3), vec![12, 24, 36]);
        assert_eq!(residue_samples(5, 12, 1, 2), vec![5, 17]);
        let mut qp = Quasipolynomial::new(1, 2);
        qp.constituents.insert(1, vec![q(1), q(-1)]);
        assert_eq!(qp.eval(-3).unwrap(), q(-4));
        assert!(qp.eval(4).is_err());
        assert_eq!(
            serde_json::to_string(&qp).unwrap(),
            r#"{"degree":1,"period":2,"constituents":{"1":["1","-1"]}}"#
        );
    }
}
