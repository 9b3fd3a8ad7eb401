//! Hyperplane and subspace arrangements in gap coordinates.
//!
//! Every element is a linear subspace of `ℝ^m` written as integer equations `c · z = 0`.
//! Hyperplanes are stored as primitive covectors with a positive leading entry; codimension-`g`
//! flats as the RREF of their defining system with each row scaled to a primitive integer row.
//! Different generating data routinely produce the same element, so every generator
//! canonicalizes and deduplicates, and element lists are sorted so that output is byte-stable.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{self, to_q_row};
use crate::rulers::{FamilyKind, FamilySpec};

/// The consecutive index set `{start, …, end}` ⊆ `[m]` (1-based, inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        assert!(1 <= start && start <= end, "empty interval [{start},{end}]");
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn is_disjoint(&self, other: &Interval) -> bool {
        self.end < other.start || other.end < self.start
    }

    pub fn indicator(&self, m: usize) -> Vec<i64> {
        (1..=m)
            .map(|i| i64::from(self.start <= i && i <= self.end))
            .collect()
    }
}

/// All nonempty proper consecutive subsets of `[m]`, ordered by length and then by start.
pub fn consecutive_intervals(m: usize) -> Vec<Interval> {
    let mut out = Vec::new();
    for len in 1..m {
        for start in 1..=m + 1 - len {
            out.push(Interval::new(start, start + len - 1));
        }
    }
    out
}

/// A hyperplane `c · z = 0` with `c` primitive and its first nonzero entry positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    coeffs: Vec<i64>,
}

impl LinearForm {
    /// Canonicalizes `coeffs`; `None` for the zero covector.
    pub fn new(coeffs: &[i64]) -> Option<Self> {
        linalg::primitive_int(coeffs).map(|coeffs| Self { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval(&self, z: &[i64]) -> i64 {
        self.coeffs.iter().zip(z).map(|(c, x)| c * x).sum()
    }

    /// Whether the hyperplane meets the open positive orthant, i.e. has entries of both signs.
    pub fn meets_open_orthant(&self) -> bool {
        self.coeffs.iter().any(|&c| c > 0) && self.coeffs.iter().any(|&c| c < 0)
    }

    /// The image under `z ↦ (z_m, …, z_1)`, canonicalized. The second component is `-1` when
    /// canonicalization flipped the sign.
    pub fn reversed(&self) -> (LinearForm, i64) {
        let rev: Vec<i64> = self.coeffs.iter().rev().copied().collect();
        let form = LinearForm::new(&rev).expect("nonzero");
        let sign = if form.coeffs == rev { 1 } else { -1 };
        (form, sign)
    }
}

/// A linear subspace given by a canonical system of equations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlatChain {
    rows: Vec<Vec<i64>>,
}

impl FlatChain {
    /// Canonical form of the subspace cut out by `forms`; `None` if all forms vanish.
    pub fn from_forms(forms: &[Vec<i64>]) -> Result<Option<Self>> {
        let q: Vec<_> = forms.iter().map(|f| to_q_row(f)).collect();
        let rows = linalg::canonical_rows(&q)?;
        Ok((!rows.is_empty()).then_some(Self { rows }))
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn codim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().zip(z).map(|(c, x)| c * x).sum::<i64>() == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elements {
    Hyperplanes(Vec<LinearForm>),
    Flats(Vec<FlatChain>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub family: FamilySpec,
    pub m: usize,
    pub elements: Elements,
}

impl Arrangement {
    pub fn from_hyperplanes(family: FamilySpec, forms: impl IntoIterator<Item = LinearForm>) -> Self {
        let set: BTreeSet<LinearForm> = forms.into_iter().collect();
        Self {
            family,
            m: family.m,
            elements: Elements::Hyperplanes(set.into_iter().collect()),
        }
    }

    pub fn from_flats(family: FamilySpec, flats: impl IntoIterator<Item = FlatChain>) -> Self {
        let set: BTreeSet<FlatChain> = flats.into_iter().collect();
        Self {
            family,
            m: family.m,
            elements: Elements::Flats(set.into_iter().collect()),
        }
    }

    pub fn len(&self) -> usize {
        match &self.elements {
            Elements::Hyperplanes(h) => h.len(),
            Elements::Flats(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Defining equations of each element.
    pub fn element_rows(&self) -> Vec<Vec<Vec<i64>>> {
        match &self.elements {
            Elements::Hyperplanes(h) => h.iter().map(|f| vec![f.coeffs.clone()]).collect(),
            Elements::Flats(f) => f.iter().map(|c| c.rows.clone()).collect(),
        }
    }

    /// The elements as hyperplanes, when every element has codimension one.
    pub fn hyperplanes(&self) -> Option<Vec<LinearForm>> {
        match &self.elements {
            Elements::Hyperplanes(h) => Some(h.clone()),
            Elements::Flats(f) => f
                .iter()
                .map(|c| (c.codim() == 1).then(|| LinearForm::new(&c.rows[0]).unwrap()))
                .collect::<Option<BTreeSet<_>>>()
                .map(|s| s.into_iter().collect()),
        }
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.element_rows()
            .iter()
            .flatten()
            .flatten()
            .map(|c| c.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ArrangementDoc::from(self)).expect("arrangement serializes")
    }

    /// Hex SHA-256 of the canonical JSON document.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementsDoc {
    Hyperplanes(Vec<Vec<i64>>),
    Flats(Vec<Vec<Vec<i64>>>),
}

/// Serialized arrangement: `{family, m, params, elements}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementDoc {
    pub family: String,
    pub m: usize,
    pub params: ArrangementParams,
    pub elements: ElementsDoc,
}

impl From<&Arrangement> for ArrangementDoc {
    fn from(a: &Arrangement) -> Self {
        let params = match a.family.kind {
            FamilyKind::Golomb => ArrangementParams { h: None, g: None },
            FamilyKind::Bh { h } => ArrangementParams { h: Some(h), g: None },
            FamilyKind::B2g { g } | FamilyKind::B2MinusG { g } => ArrangementParams { h: None, g: Some(g) },
        };
        let elements = match &a.elements {
            Elements::Hyperplanes(h) => ElementsDoc::Hyperplanes(h.iter().map(|f| f.coeffs.clone()).collect()),
            Elements::Flats(f) => ElementsDoc::Flats(f.iter().map(|c| c.rows.clone()).collect()),
        };
        ArrangementDoc {
            family: a.family.kind.name().to_string(),
            m: a.m,
            params,
            elements,
        }
    }
}

impl TryFrom<ArrangementDoc> for Arrangement {
    type Error = Error;

    fn try_from(doc: ArrangementDoc) -> Result<Self> {
        let family = FamilySpec::from_parts(&doc.family, doc.m, doc.params.h, doc.params.g)?;
        let check_len = |v: &[i64]| {
            if v.len() == doc.m {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: doc.m,
                    actual: v.len(),
                })
            }
        };
        Ok(match doc.elements {
            ElementsDoc::Hyperplanes(h) => {
                let mut forms = Vec::new();
                for c in &h {
                    check_len(c)?;
                    forms.push(LinearForm::new(c).ok_or_else(|| Error::InvalidFamily("zero covector".into()))?);
                }
                Arrangement::from_hyperplanes(family, forms)
            }
            ElementsDoc::Flats(f) => {
                let mut flats = Vec::new();
                for rows in &f {
                    for r in rows {
                        check_len(r)?;
                    }
                    flats.push(FlatChain::from_forms(rows)?.ok_or_else(|| Error::InvalidFamily("degenerate flat".into()))?);
                }
                Arrangement::from_flats(family, flats)
            }
        })
    }
}

/// Hyperplanes `Σ_U z = Σ_V z` over unordered pairs of disjoint proper intervals.
pub fn golomb_hyperplanes(m: usize) -> Arrangement {
    let ivs = consecutive_intervals(m);
    let mut forms = Vec::new();
    for (i, u) in ivs.iter().enumerate() {
        for v in &ivs[i + 1..] {
            if u.is_disjoint(v) {
                let c: Vec<i64> = u.indicator(m).iter().zip(v.indicator(m)).map(|(a, b)| a - b).collect();
                forms.extend(LinearForm::new(&c));
            }
        }
    }
    Arrangement::from_hyperplanes(FamilySpec::golomb(m), forms)
}

/// Hyperplanes `Σ_{k ≤ l} Σ_{U_k} z = Σ_{k > l} Σ_{U_k} z` for every multiset of at most `h`
/// proper intervals and every split into two sides. Covectors whose nonzero entries share one
/// sign never vanish on the open simplex and are dropped, as is the zero covector.
pub fn bh_hyperplanes(m: usize, h: usize) -> Arrangement {
    let ivs: Vec<Vec<i64>> = consecutive_intervals(m).iter().map(|u| u.indicator(m)).collect();
    let mut forms = BTreeSet::new();
    let mut chosen = Vec::with_capacity(h);
    for size in 1..=h {
        multisets(ivs.len(), size, 0, &mut chosen, &mut |picked| {
            // Global sign flips give the same hyperplane, so the last block stays on the left.
            for mask in 0u32..(1 << (size - 1)) {
                let mut c = vec![0i64; m];
                for (k, &iv) in picked.iter().enumerate() {
                    let sign = if k + 1 < size && mask >> k & 1 == 1 { -1 } else { 1 };
                    for (ci, &e) in c.iter_mut().zip(&ivs[iv]) {
                        *ci += sign * e;
                    }
                }
                if let Some(f) = LinearForm::new(&c) {
                    if f.meets_open_orthant() {
                        forms.insert(f);
                    }
                }
            }
        });
    }
    Arrangement::from_hyperplanes(FamilySpec::bh(m, h), forms)
}

fn multisets(n: usize, size: usize, start: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    for i in start..n {
        chosen.push(i);
        multisets(n, size, i, chosen, visit);
        chosen.pop();
    }
}

fn combinations(n: usize, size: usize, start: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    for i in start..n {
        chosen.push(i);
        combinations(n, size, i + 1, chosen, visit);
        chosen.pop();
    }
}

fn prefix(j: usize, m: usize) -> Vec<i64> {
    (1..=m).map(|i| i64::from(i <= j)).collect()
}

/// Flats `x_{l_0} + x_{r_0} = … = x_{l_g} + x_{r_g}` in gap coordinates, for index tuples with
/// `0 ≤ l_0 < … < l_g ≤ r_g < … < r_0 ≤ m`.
pub fn b2g_subspaces(m: usize, g: usize) -> Result<Arrangement> {
    let mut flats = BTreeSet::new();
    let mut ls = Vec::new();
    let mut err = None;
    combinations(m + 1, g + 1, 0, &mut ls, &mut |ls| {
        let mut rs = Vec::new();
        combinations(m + 1, g + 1, 0, &mut rs, &mut |rs_inc| {
            // rs_inc is increasing; r_k = rs_inc[g - k] is decreasing in k
            let r = |k: usize| rs_inc[g - k];
            if ls[g] > r(g) {
                return;
            }
            let base: Vec<i64> = prefix(ls[0], m).iter().zip(prefix(r(0), m)).map(|(a, b)| a + b).collect();
            let forms: Vec<Vec<i64>> = (1..=g)
                .map(|k| {
                    prefix(ls[k], m)
                        .iter()
                        .zip(prefix(r(k), m))
                        .zip(&base)
                        .map(|((a, b), c)| a + b - c)
                        .collect()
                })
                .collect();
            match FlatChain::from_forms(&forms) {
                Ok(Some(f)) => {
                    flats.insert(f);
                }
                Ok(None) => {}
                Err(e) => err = Some(e),
            }
        });
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Arrangement::from_flats(FamilySpec::b2g(m, g), flats))
}

/// Flats `Σ_{U_0} z = … = Σ_{U_g} z` for sets of `g + 1` consecutive subsets of `[m]`, no one
/// contained in another.
pub fn b2_minus_g_subspaces(m: usize, g: usize) -> Result<Arrangement> {
    let mut ivs = consecutive_intervals(m);
    if m >= 1 {
        ivs.push(Interval::new(1, m));
    }
    let mut flats = BTreeSet::new();
    let mut err = None;
    let mut chosen = Vec::new();
    combinations(ivs.len(), g + 1, 0, &mut chosen, &mut |pick| {
        let sets: Vec<&Interval> = pick.iter().map(|&i| &ivs[i]).collect();
        let incomparable = sets
            .iter()
            .enumerate()
            .all(|(i, a)| sets[i + 1..].iter().all(|b| !a.contains(b) && !b.contains(a)));
        if !incomparable {
            return;
        }
        let base = sets[0].indicator(m);
        let forms: Vec<Vec<i64>> = sets[1..]
            .iter()
            .map(|u| u.indicator(m).iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        match FlatChain::from_forms(&forms) {
            Ok(Some(f)) => {
                flats.insert(f);
            }
            Ok(None) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Arrangement::from_flats(FamilySpec::b2_minus_g(m, g), flats))
}

pub fn arrangement_for(family: &FamilySpec) -> Result<Arrangement> {
    family.validate()?;
    let m = family.m;
    match family.kind {
        FamilyKind::Golomb => Ok(golomb_hyperplanes(m)),
        FamilyKind::Bh { h } => Ok(bh_hyperplanes(m, h)),
        FamilyKind::B2g { g } => b2g_subspaces(m, g),
        FamilyKind::B2MinusG { g } => b2_minus_g_subspaces(m, g),
    }
}
