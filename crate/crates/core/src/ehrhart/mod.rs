//! Lattice-point counts of inside-out simplices, with and without multiplicity.
//!
//! All geometry lives in the affine lattice `{z ∈ ℤ^m : Σ z = t}`, whose ambient dimension is
//! `m − 1`; codimensions and the reciprocity sign `(−1)^{m−1}` are measured there.

mod poset;
mod quasi;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use poset::{ElementSet, Flat, IntersectionPoset, DEFAULT_FLAT_LIMIT};
pub use quasi::{eval_poly, factorial, fit_constituent, fit_quasipolynomial, residue_samples, Quasipolynomial};

use crate::arrangements::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{self, q, to_q_row, Q};
use crate::rulers::FamilySpec;
use crate::sweep::{self, WorkBudget};

fn element_rows_checked(a: &Arrangement, t: u64) -> Result<Vec<Vec<Vec<i64>>>> {
    // |c · z| ≤ max|c| · t must stay far from i64::MAX
    let bound = (a.max_abs_coeff() as i128) * (t as i128);
    if bound > (i64::MAX / 4) as i128 {
        return Err(Error::Overflow("lattice sweep dot products"));
    }
    Ok(a.element_rows())
}

fn row_count(rows: &[Vec<Vec<i64>>]) -> u128 {
    rows.iter().map(|e| e.len() as u128).sum::<u128>().max(1)
}

fn on_element(e: &[Vec<i64>], z: &[i64]) -> bool {
    e.iter()
        .all(|r| r.iter().zip(z).map(|(c, x)| c * x).sum::<i64>() == 0)
}

/// Number of lattice points of `tΔ°` lying on no element of `a`.
pub fn open_ehrhart(a: &Arrangement, t: u64, budget: WorkBudget) -> Result<u64> {
    let rows = element_rows_checked(a, t)?;
    let points = sweep::open_point_count(t, a.m);
    budget.check(points.saturating_mul(row_count(&rows)))?;
    if points == 0 {
        return Ok(0);
    }
    let t = i64::try_from(t).map_err(|_| Error::Overflow("dilation"))?;
    let n = sweep::par_sum(t, a.m, 1, |z| i64::from(!rows.iter().any(|e| on_element(e, z))));
    Ok(n as u64)
}

/// Sum of multiplicities over the lattice points of the closed simplex `tΔ`.
///
/// Multiplicities come from the intersection poset, counting only flats that meet the open
/// simplex. At `t = 0` the single point `0` lies on every flat, and the value is the number of
/// closed regions for a hyperplane arrangement.
pub fn closed_ehrhart(a: &Arrangement, poset: &IntersectionPoset, t: u64, budget: WorkBudget) -> Result<i64> {
    let rows = element_rows_checked(a, t)?;
    let points = sweep::closed_point_count(t, a.m);
    budget.check(points.saturating_mul(row_count(&rows)))?;
    let t = i64::try_from(t).map_err(|_| Error::Overflow("dilation"))?;
    Ok(sweep::par_sum(t, a.m, 0, |z| {
        if rows.iter().any(|e| on_element(e, z)) {
            poset.multiplicity_for(&poset.elements_containing(z), true)
        } else {
            1
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub family: FamilySpec,
    pub t: u64,
    pub open_count: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closed_count_with_multiplicity: Option<i64>,
    pub arrangement_hash: String,
}

pub fn count_report(a: &Arrangement, poset: Option<&IntersectionPoset>, t: u64, budget: WorkBudget) -> Result<CountReport> {
    let open_count = open_ehrhart(a, t, budget)?;
    let closed = poset.map(|p| closed_ehrhart(a, p, t, budget)).transpose()?;
    Ok(CountReport {
        family: a.family,
        t,
        open_count,
        closed_count_with_multiplicity: closed,
        arrangement_hash: a.hash(),
    })
}

/// Fits the open-count constituents for the given residues; degree `m − 1`.
pub fn fit_open(a: &Arrangement, period: u64, residues: &[u64], budget: WorkBudget) -> Result<Quasipolynomial> {
    fit_quasipolynomial(a.m - 1, period, residues, 1, |t| Ok(BigInt::from(open_ehrhart(a, t, budget)?)))
}

/// Fits the closed-count (with multiplicity) constituents for the given residues.
pub fn fit_closed(a: &Arrangement, poset: &IntersectionPoset, period: u64, residues: &[u64], budget: WorkBudget) -> Result<Quasipolynomial> {
    fit_quasipolynomial(a.m - 1, period, residues, 0, |t| Ok(BigInt::from(closed_ehrhart(a, poset, t, budget)?)))
}

/// Residues `r` together with `−r mod p`, sorted and deduplicated.
pub fn paired_residues(period: u64, residues: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut set = BTreeSet::new();
    for r in residues {
        let r = r % period;
        set.insert(r);
        set.insert((period - r) % period);
    }
    set.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReciprocityCheck {
    pub t: u64,
    /// `(−1)^{m−1}` times the open quasipolynomial evaluated at `−t`.
    pub signed_open_at_minus_t: String,
    pub closed_count: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReciprocityReport {
    pub family: FamilySpec,
    pub period: u64,
    pub checks: Vec<ReciprocityCheck>,
    pub first_failure: Option<u64>,
}

impl ReciprocityReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Compares `(−1)^{m−1} E°(−t)`, evaluated through the fitted open constituents (residue
/// `−t mod p`), with the closed count with multiplicity at `t`.
pub fn reciprocity_check(
    a: &Arrangement,
    poset: &IntersectionPoset,
    open: &Quasipolynomial,
    t_list: &[u64],
    budget: WorkBudget,
) -> Result<ReciprocityReport> {
    let sign = if (a.m - 1).is_multiple_of(2) { q(1) } else { q(-1) };
    let mut checks = Vec::with_capacity(t_list.len());
    let mut first_failure = None;
    for &t in t_list {
        let ti = i64::try_from(t).map_err(|_| Error::Overflow("t"))?;
        let lhs = &sign * open.eval(-ti)?;
        let closed = closed_ehrhart(a, poset, t, budget)?;
        let holds = lhs == q(closed);
        if !holds && first_failure.is_none() {
            first_failure = Some(t);
        }
        checks.push(ReciprocityCheck {
            t,
            signed_open_at_minus_t: linalg::fmt_q(&lhs),
            closed_count: closed,
            holds,
        });
    }
    Ok(ReciprocityReport {
        family: a.family,
        period: open.period,
        checks,
        first_failure,
    })
}

/// The lcm of the denominators of all vertices of the subdivision of the simplex by the flats:
/// every point of the closed simplex cut out by a flat together with enough facets `z_i = 0`.
pub fn period_bound(poset: &IntersectionPoset) -> Result<u64> {
    let m = poset.m;
    let ones = vec![q(1); m];
    let mut lcm = BigInt::one();
    for flat in &poset.flats {
        let need = m - 1 - flat.codim;
        let base: Vec<Vec<Q>> = flat.rows.iter().map(|r| to_q_row(r)).collect();
        let mut facets = Vec::new();
        for_each_subset(m, need, 0, &mut facets, &mut |facets| {
            let mut sys = base.clone();
            for &i in facets {
                let mut e = vec![q(0); m];
                e[i] = q(1);
                sys.push(e);
            }
            sys.push(ones.clone());
            let mut rhs = vec![q(0); sys.len()];
            *rhs.last_mut().unwrap() = q(1);
            if let Some(x) = linalg::solve_unique(&sys, &rhs) {
                if x.iter().all(|v| *v >= q(0)) {
                    lcm = lcm.lcm(&linalg::lcm_of_denominators(&x));
                }
            }
        });
    }
    lcm.to_u64().ok_or(Error::Overflow("period bound"))
}

fn for_each_subset(n: usize, size: usize, start: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    for i in start..n {
        chosen.push(i);
        for_each_subset(n, size, i + 1, chosen, visit);
        chosen.pop();
    }
}

/// Distinct pairwise intersection points of the lines of an arrangement in the 2-simplex,
/// split into those in the open simplex and those on its boundary.
pub fn intersection_census_2d(a: &Arrangement) -> Result<(usize, usize)> {
    if a.m != 3 {
        return Err(Error::Unsupported(format!("2D census needs m = 3, got m = {}", a.m)));
    }
    let forms = a.hyperplanes().ok_or(Error::NotHyperplaneArrangement)?;
    let mut interior = BTreeSet::new();
    let mut boundary = BTreeSet::new();
    for (i, f) in forms.iter().enumerate() {
        for g in &forms[i + 1..] {
            let sys = vec![to_q_row(f.coeffs()), to_q_row(g.coeffs()), vec![q(1); 3]];
            let Some(x) = linalg::solve_unique(&sys, &[q(0), q(0), q(1)]) else {
                continue;
            };
            if x.iter().all(|v| *v > q(0)) {
                interior.insert(x);
            } else if x.iter().all(|v| *v >= q(0)) {
                boundary.insert(x);
            }
        }
    }
    Ok((interior.len(), boundary.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::{b2g_subspaces, bh_hyperplanes, golomb_hyperplanes, LinearForm};
    use crate::rulers::FamilySpec;

    #[test]
    fn golomb_m2_counts() {
        let a = golomb_hyperplanes(2);
        let p = IntersectionPoset::build(&a).unwrap();
        for t in 1..30u64 {
            let even = u64::from(t % 2 == 0);
            assert_eq!(open_ehrhart(&a, t, WorkBudget::DEFAULT).unwrap(), t - 1 - even);
            assert_eq!(closed_ehrhart(&a, &p, t, WorkBudget::DEFAULT).unwrap() as u64, t + 1 + even);
        }
        // (0,4),(1,3),(2,2),(3,1),(4,0) with (2,2) counted twice
        assert_eq!(closed_ehrhart(&a, &p, 4, WorkBudget::DEFAULT).unwrap(), 6);
    }

    #[test]
    fn t_equal_m_single_point() {
        let a = golomb_hyperplanes(3);
        // (1,1,1) lies on z1 = z2
        assert_eq!(open_ehrhart(&a, 3, WorkBudget::DEFAULT).unwrap(), 0);
        let b = b2g_subspaces(4, 2).unwrap();
        // (1,1,1,1) lies on z1 = z4, z2 = z3
        assert_eq!(open_ehrhart(&b, 4, WorkBudget::DEFAULT).unwrap(), 0);
        let empty = Arrangement::from_hyperplanes(FamilySpec::golomb(1), Vec::<LinearForm>::new());
        assert_eq!(open_ehrhart(&empty, 1, WorkBudget::DEFAULT).unwrap(), 1);
    }

    #[test]
    fn closed_at_zero_counts_regions() {
        let single = Arrangement::from_hyperplanes(FamilySpec::golomb(3), [LinearForm::new(&[1, -1, 0]).unwrap()]);
        let p = IntersectionPoset::build(&single).unwrap();
        assert_eq!(closed_ehrhart(&single, &p, 0, WorkBudget::DEFAULT).unwrap(), 2);
    }

    #[test]
    fn period_bounds() {
        let p = IntersectionPoset::build(&golomb_hyperplanes(2)).unwrap();
        assert_eq!(period_bound(&p).unwrap(), 2);
        let line = Arrangement::from_hyperplanes(FamilySpec::golomb(2), [LinearForm::new(&[2, -1]).unwrap()]);
        assert_eq!(period_bound(&IntersectionPoset::build(&line).unwrap()).unwrap(), 3);
        let b = b2g_subspaces(4, 2).unwrap();
        assert_eq!(period_bound(&IntersectionPoset::build(&b).unwrap()).unwrap(), 2);
    }

    #[test]
    fn census_small_cases() {
        let empty = Arrangement::from_hyperplanes(FamilySpec::golomb(3), Vec::<LinearForm>::new());
        assert_eq!(intersection_census_2d(&empty).unwrap(), (0, 0));
        assert!(intersection_census_2d(&golomb_hyperplanes(4)).is_err());
        // Independent Cramer's-rule census for Golomb m = 3.
        let a = golomb_hyperplanes(3);
        let forms = a.hyperplanes().unwrap();
        let mut inside = BTreeSet::new();
        let mut edge = BTreeSet::new();
        for i in 0..forms.len() {
            for j in 0..forms.len() {
                if i == j {
                    continue;
                }
                // Cramer's rule on [f; g; 1 1 1]
                let (f, g) = (forms[i].coeffs(), forms[j].coeffs());
                let det3 = |a: [i64; 3], b: [i64; 3], c: [i64; 3]| {
                    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
                };
                let fa = [f[0], f[1], f[2]];
                let ga = [g[0], g[1], g[2]];
                let d = det3(fa, ga, [1, 1, 1]);
                if d == 0 {
                    continue;
                }
                let x: Vec<Q> = (0..3)
                    .map(|k| {
                        let mut ma = fa;
                        let mut mb = ga;
                        let mut mc = [1, 1, 1];
                        ma[k] = 0;
                        mb[k] = 0;
                        mc[k] = 1;
                        Q::new(det3(ma, mb, mc).into(), d.into())
                    })
                    .collect();
                if x.iter().all(|v| *v > q(0)) {
                    inside.insert(x);
                } else if x.iter().all(|v| *v >= q(0)) {
                    edge.insert(x);
                }
            }
        }
        assert_eq!(intersection_census_2d(&a).unwrap(), (inside.len(), edge.len()));
    }

    #[test]
    fn bh33_census_and_period() {
        let a = bh_hyperplanes(3, 3);
        assert_eq!(intersection_census_2d(&a).unwrap(), (37, 12));
        let p = IntersectionPoset::build(&a).unwrap();
        assert_eq!(period_bound(&p).unwrap() % 2520, 0);
    }

    #[test]
    fn reciprocity_golomb_m2() {
        let a = golomb_hyperplanes(2);
        let p = IntersectionPoset::build(&a).unwrap();
        let qp = fit_open(&a, 2, &[0, 1], WorkBudget::DEFAULT).unwrap();
        let ts: Vec<u64> = (1..=20).collect();
        let rep = reciprocity_check(&a, &p, &qp, &ts, WorkBudget::DEFAULT).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn paired() {
        assert_eq!(paired_residues(12, [1, 5]), vec![1, 5, 7, 11]);
        assert_eq!(paired_residues(2, [0]), vec![0]);
    }
}
