//! Regions of the open simplex cut by a hyperplane arrangement.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::arrangements::{Arrangement, LinearForm};
use crate::error::{Error, Result};
use crate::linalg::{self, dot_q, q, Q};
use crate::lp;
use crate::sweep;

/// Sign of each hyperplane form at a point, in arrangement order; `true` is `+`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<bool>);

impl SignVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rows `±c` oriented so that the point satisfies `row · z > 0`.
    pub fn oriented_rows(&self, forms: &[LinearForm]) -> Vec<Vec<i64>> {
        forms
            .iter()
            .zip(&self.0)
            .map(|(f, &plus)| f.coeffs().iter().map(|&c| if plus { c } else { -c }).collect())
            .collect()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0
            .iter()
            .try_for_each(|&p| f.write_char(if p { '+' } else { '-' }))
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub signs: SignVector,
    /// Interior point with `Σ z = 1`.
    pub representative: Vec<Q>,
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rep: Vec<String> = self.representative.iter().map(linalg::fmt_q).collect();
        let mut st = s.serialize_struct("Region", 2)?;
        st.serialize_field("signs", &self.signs)?;
        st.serialize_field("representative", &rep)?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionLimits {
    pub max_ambient_dim: usize,
    pub max_hyperplanes: usize,
}

impl RegionLimits {
    pub const DEFAULT: RegionLimits = RegionLimits {
        max_ambient_dim: 4,
        max_hyperplanes: 25,
    };

    pub fn check(&self, a: &Arrangement) -> Result<()> {
        if a.m.saturating_sub(1) > self.max_ambient_dim {
            return Err(Error::GuardExceeded(format!(
                "ambient dimension {} exceeds {}",
                a.m - 1,
                self.max_ambient_dim
            )));
        }
        if a.len() > self.max_hyperplanes {
            return Err(Error::GuardExceeded(format!(
                "{} hyperplanes exceed {}",
                a.len(),
                self.max_hyperplanes
            )));
        }
        Ok(())
    }
}

impl Default for RegionLimits {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// All regions of the open simplex minus `a`, sorted by sign vector.
///
/// Depth-first sign extension over the hyperplanes in order. A region's representative already
/// decides one side of the next hyperplane; the other side (both, if the point lies on it) is
/// settled by exact strict-feasibility LP. Sibling subtrees run in parallel.
pub fn enumerate_regions(a: &Arrangement, limits: RegionLimits) -> Result<Vec<Region>> {
    limits.check(a)?;
    let forms = a.hyperplanes().ok_or(Error::NotHyperplaneArrangement)?;
    if a.m == 0 {
        return Err(Error::InvalidFamily("m must be at least 1".into()));
    }
    let start = vec![Q::new(1.into(), (a.m as i64).into()); a.m];
    let mut out = extend(a.m, &forms, Vec::new(), start)?;
    out.sort_by(|x, y| x.signs.cmp(&y.signs));
    Ok(out)
}

fn extend(m: usize, forms: &[LinearForm], prefix: Vec<bool>, rep: Vec<Q>) -> Result<Vec<Region>> {
    let k = prefix.len();
    if k == forms.len() {
        return Ok(vec![Region {
            signs: SignVector(prefix),
            representative: rep,
        }]);
    }
    let value = dot_q(forms[k].coeffs(), &rep);
    let side = |plus: bool| -> Result<Option<Vec<Q>>> {
        if value != q(0) && (value > q(0)) == plus {
            return Ok(Some(rep.clone()));
        }
        let mut signs = prefix.clone();
        signs.push(plus);
        let rows = SignVector(signs).oriented_rows(&forms[..=k]);
        lp::strictly_feasible_point(m, &rows, &[])
    };
    let (plus, minus) = rayon::join(|| side(true), || side(false));
    let child = |plus: bool, point: Option<Vec<Q>>| -> Result<Vec<Region>> {
        match point {
            Some(p) => {
                let mut signs = prefix.clone();
                signs.push(plus);
                extend(m, forms, signs, p)
            }
            None => Ok(Vec::new()),
        }
    };
    let (plus, minus) = (plus?, minus?);
    let (a, b) = rayon::join(|| child(true, plus), || child(false, minus));
    let mut a = a?;
    a.extend(b?);
    Ok(a)
}

pub fn region_count(a: &Arrangement, limits: RegionLimits) -> Result<usize> {
    enumerate_regions(a, limits).map(|r| r.len())
}

/// Sign vector of a rational point; fails if it lies on a hyperplane.
pub fn sign_vector_of(z: &[Q], a: &Arrangement) -> Result<SignVector> {
    if z.len() != a.m {
        return Err(Error::DimensionMismatch {
            expected: a.m,
            actual: z.len(),
        });
    }
    let forms = a.hyperplanes().ok_or(Error::NotHyperplaneArrangement)?;
    forms
        .iter()
        .enumerate()
        .map(|(index, f)| {
            let v = dot_q(f.coeffs(), z);
            if v == q(0) {
                Err(Error::PointOnHyperplane { index })
            } else {
                Ok(v > q(0))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(SignVector)
}

/// Combinatorial type of an integer gap vector.
pub fn combinatorial_type_of(gaps: &[i64], a: &Arrangement) -> Result<SignVector> {
    sign_vector_of(&linalg::to_q_row(gaps), a)
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionCensus {
    pub arrangement_hash: String,
    pub count: usize,
    pub regions: Vec<Region>,
}

pub fn region_census(a: &Arrangement, limits: RegionLimits) -> Result<RegionCensus> {
    let regions = enumerate_regions(a, limits)?;
    Ok(RegionCensus {
        arrangement_hash: a.hash(),
        count: regions.len(),
        regions,
    })
}

/// Smallest `t ≤ t_max` such that the lattice points of `tΔ°` off the arrangement meet every
/// region, or `None` if no such `t` exists in range.
pub fn realization_threshold(a: &Arrangement, region_count: usize, t_max: u64) -> Result<Option<u64>> {
    let forms = a.hyperplanes().ok_or(Error::NotHyperplaneArrangement)?;
    for t in a.m as u64..=t_max {
        let t = i64::try_from(t).map_err(|_| Error::Overflow("t"))?;
        let mut seen = BTreeSet::new();
        sweep::for_each(t, a.m, 1, |z| {
            let signs: Option<Vec<bool>> = forms
                .iter()
                .map(|f| match f.eval(z) {
                    0 => None,
                    v => Some(v > 0),
                })
                .collect();
            if let Some(s) = signs {
                seen.insert(s);
            }
        });
        if seen.len() >= region_count {
            return Ok(Some(t as u64));
        }
    }
    Ok(None)
}

/// SVG drawing of a line arrangement in the 2-simplex with the region count as a caption.
pub fn render_svg(a: &Arrangement, region_count: usize) -> Result<String> {
    if a.m != 3 {
        return Err(Error::Unsupported(format!("SVG output needs m = 3, got m = {}", a.m)));
    }
    let forms = a.hyperplanes().ok_or(Error::NotHyperplaneArrangement)?;
    const W: f64 = 600.0;
    const PAD: f64 = 30.0;
    let h = W * 3f64.sqrt() / 2.0;
    let corners = [(PAD, PAD + h), (PAD + W, PAD + h), (PAD + W / 2.0, PAD)];
    let project = |z: &[Q]| -> (f64, f64) {
        let w: Vec<f64> = z.iter().map(|v| num_traits::ToPrimitive::to_f64(v).unwrap_or(0.0)).collect();
        (
            w[0] * corners[0].0 + w[1] * corners[1].0 + w[2] * corners[2].0,
            w[0] * corners[0].1 + w[1] * corners[1].1 + w[2] * corners[2].1,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        W + 2.0 * PAD,
        h + 2.0 * PAD + 40.0,
        W + 2.0 * PAD,
        h + 2.0 * PAD + 40.0
    );
    let _ = writeln!(
        svg,
        r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="none" stroke="black" stroke-width="2"/>"#,
        corners[0].0, corners[0].1, corners[1].0, corners[1].1, corners[2].0, corners[2].1
    );
    for f in &forms {
        let mut ends: BTreeSet<Vec<Q>> = BTreeSet::new();
        for i in 0..3 {
            let mut e = vec![0i64; 3];
            e[i] = 1;
            let sys = vec![linalg::to_q_row(f.coeffs()), linalg::to_q_row(&e), vec![q(1); 3]];
            if let Some(x) = linalg::solve_unique(&sys, &[q(0), q(0), q(1)]) {
                if x.iter().all(|v| *v >= q(0)) {
                    ends.insert(x);
                }
            }
        }
        let ends: Vec<_> = ends.into_iter().collect();
        if ends.len() >= 2 {
            let (x1, y1) = project(&ends[0]);
            let (x2, y2) = project(&ends[ends.len() - 1]);
            let _ = writeln!(
                svg,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="steelblue" stroke-width="1"/>"#
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="18" text-anchor="middle">{} lines, {} regions</text>"#,
        PAD + W / 2.0,
        PAD + h + 32.0,
        forms.len(),
        region_count
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
