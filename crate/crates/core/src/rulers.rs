//! Rulers, gap vectors, ruler families, and definition-level membership.
//!
//! Membership here is decided straight from the definitions (comparing sums and differences of
//! markings) and never consults an arrangement, so the brute-force counter is an independent
//! oracle for the lattice-point counts in [`crate::ehrhart`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::{self, WorkBudget};

/// Markings `0 = x_0 < x_1 < … < x_m = t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ruler {
    markings: Vec<i64>,
}

impl Ruler {
    pub fn new(markings: Vec<i64>) -> Result<Self> {
        if markings.len() < 2 {
            return Err(Error::InvalidRuler("need at least two markings".into()));
        }
        if markings[0] != 0 {
            return Err(Error::InvalidRuler(format!(
                "first marking must be 0, got {}",
                markings[0]
            )));
        }
        if let Some(w) = markings.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRuler(format!(
                "markings must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { markings })
    }

    pub fn markings(&self) -> &[i64] {
        &self.markings
    }

    /// Number of gaps; the ruler has `m + 1` markings.
    pub fn m(&self) -> usize {
        self.markings.len() - 1
    }

    pub fn length(&self) -> i64 {
        *self.markings.last().unwrap()
    }

    pub fn gaps(&self) -> GapVector {
        GapVector {
            gaps: self.markings.windows(2).map(|w| w[1] - w[0]).collect(),
        }
    }

    /// The mirror image `(t − x_m, …, t − x_0)`.
    pub fn reversed(&self) -> Ruler {
        let t = self.length();
        Ruler {
            markings: self.markings.iter().rev().map(|x| t - x).collect(),
        }
    }
}

/// Positive consecutive differences `z_i = x_i − x_{i−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapVector {
    gaps: Vec<i64>,
}

impl GapVector {
    pub fn new(gaps: Vec<i64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidGaps("empty gap vector".into()));
        }
        if let Some(g) = gaps.iter().find(|&&g| g <= 0) {
            return Err(Error::InvalidGaps(format!("gap {g} is not positive")));
        }
        Ok(Self { gaps })
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    pub fn m(&self) -> usize {
        self.gaps.len()
    }

    pub fn dilation(&self) -> i64 {
        self.gaps.iter().sum()
    }

    pub fn markings(&self) -> Ruler {
        let mut markings = Vec::with_capacity(self.gaps.len() + 1);
        markings.push(0);
        let mut x = 0;
        for g in &self.gaps {
            x += g;
            markings.push(x);
        }
        Ruler { markings }
    }
}

pub fn gaps_from_markings(markings: &[i64]) -> Result<GapVector> {
    Ok(Ruler::new(markings.to_vec())?.gaps())
}

pub fn markings_from_gaps(gaps: &[i64]) -> Result<Ruler> {
    Ok(GapVector::new(gaps.to_vec())?.markings())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// All pairwise differences distinct.
    Golomb,
    /// No two distinct `h`-multisets of markings share a sum.
    Bh { h: usize },
    /// Every sum `x_i + x_j` (`i ≤ j`) has at most `g` representations.
    B2g { g: usize },
    /// Every positive difference `x_r − x_l` has at most `g` representations.
    B2MinusG { g: usize },
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Golomb => "golomb",
            FamilyKind::Bh { .. } => "bh",
            FamilyKind::B2g { .. } => "b2g",
            FamilyKind::B2MinusG { .. } => "b2minusg",
        }
    }
}

/// A ruler family together with the number of gaps `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub m: usize,
}

impl FamilySpec {
    pub fn golomb(m: usize) -> Self {
        Self {
            kind: FamilyKind::Golomb,
            m,
        }
    }

    pub fn bh(m: usize, h: usize) -> Self {
        Self {
            kind: FamilyKind::Bh { h },
            m,
        }
    }

    pub fn b2g(m: usize, g: usize) -> Self {
        Self {
            kind: FamilyKind::B2g { g },
            m,
        }
    }

    pub fn b2_minus_g(m: usize, g: usize) -> Self {
        Self {
            kind: FamilyKind::B2MinusG { g },
            m,
        }
    }

    /// Builds a family from its command-line name and parameters.
    pub fn from_parts(name: &str, m: usize, h: Option<usize>, g: Option<usize>) -> Result<Self> {
        let kind = match name.parse::<FamilyName>()? {
            FamilyName::Golomb => FamilyKind::Golomb,
            FamilyName::Bh => FamilyKind::Bh {
                h: h.ok_or_else(|| Error::InvalidFamily("bh requires h".into()))?,
            },
            FamilyName::B2g => FamilyKind::B2g {
                g: g.ok_or_else(|| Error::InvalidFamily("b2g requires g".into()))?,
            },
            FamilyName::B2MinusG => FamilyKind::B2MinusG {
                g: g.ok_or_else(|| Error::InvalidFamily("b2minusg requires g".into()))?,
            },
        };
        let spec = Self { kind, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidFamily("m must be at least 1".into()));
        }
        match self.kind {
            FamilyKind::Bh { h } if h < 2 => Err(Error::InvalidFamily(format!("h = {h} < 2"))),
            FamilyKind::B2g { g } | FamilyKind::B2MinusG { g } if g < 1 => {
                Err(Error::InvalidFamily(format!("g = {g} < 1")))
            }
            _ => Ok(()),
        }
    }

    /// Comparisons made per ruler by [`is_member`]; the unit of brute-force work.
    fn oracle_cost(&self) -> u128 {
        let n = self.m as u64 + 1;
        match self.kind {
            FamilyKind::Golomb | FamilyKind::B2MinusG { .. } | FamilyKind::B2g { .. } => {
                sweep::binomial(n + 1, 2)
            }
            FamilyKind::Bh { h } => sweep::binomial(n + h as u64 - 1, h as u64),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Golomb => write!(f, "golomb(m={})", self.m),
            FamilyKind::Bh { h } => write!(f, "bh(m={}, h={h})", self.m),
            FamilyKind::B2g { g } => write!(f, "b2g(m={}, g={g})", self.m),
            FamilyKind::B2MinusG { g } => write!(f, "b2minusg(m={}, g={g})", self.m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyName {
    Golomb,
    Bh,
    B2g,
    B2MinusG,
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "golomb" => Ok(FamilyName::Golomb),
            "bh" => Ok(FamilyName::Bh),
            "b2g" => Ok(FamilyName::B2g),
            "b2minusg" | "b2-minus-g" | "b2mg" => Ok(FamilyName::B2MinusG),
            other => Err(Error::InvalidFamily(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    family: String,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    g: Option<usize>,
}

impl From<FamilySpec> for FamilyRepr {
    fn from(f: FamilySpec) -> Self {
        let (h, g) = match f.kind {
            FamilyKind::Golomb => (None, None),
            FamilyKind::Bh { h } => (Some(h), None),
            FamilyKind::B2g { g } | FamilyKind::B2MinusG { g } => (None, Some(g)),
        };
        FamilyRepr {
            family: f.kind.name().to_string(),
            m: f.m,
            h,
            g,
        }
    }
}

impl TryFrom<FamilyRepr> for FamilySpec {
    type Error = Error;

    fn try_from(r: FamilyRepr) -> Result<Self> {
        FamilySpec::from_parts(&r.family, r.m, r.h, r.g)
    }
}

/// Decides whether `ruler` belongs to `family`, directly from the definition.
pub fn is_member(ruler: &Ruler, family: &FamilySpec) -> Result<bool> {
    family.validate()?;
    if ruler.m() != family.m {
        return Err(Error::DimensionMismatch {
            expected: family.m,
            actual: ruler.m(),
        });
    }
    let x = ruler.markings();
    Ok(match family.kind {
        FamilyKind::Golomb => differences_within(x, 1),
        FamilyKind::B2MinusG { g } => differences_within(x, g),
        FamilyKind::B2g { g } => {
            let mut reps: HashMap<i64, usize> = HashMap::new();
            for i in 0..x.len() {
                for j in i..x.len() {
                    let c = reps.entry(x[i] + x[j]).or_default();
                    *c += 1;
                    if *c > g {
                        return Ok(false);
                    }
                }
            }
            true
        }
        FamilyKind::Bh { h } => distinct_multiset_sums(x, h),
    })
}

fn differences_within(x: &[i64], g: usize) -> bool {
    let mut reps: HashMap<i64, usize> = HashMap::new();
    for l in 0..x.len() {
        for r in l + 1..x.len() {
            let c = reps.entry(x[r] - x[l]).or_default();
            *c += 1;
            if *c > g {
                return false;
            }
        }
    }
    true
}

/// True iff all size-`h` multisets of entries of `x` (by index, repetition allowed) have
/// pairwise distinct sums.
fn distinct_multiset_sums(x: &[i64], h: usize) -> bool {
    fn rec(x: &[i64], start: usize, left: usize, acc: i64, seen: &mut HashSet<i64>) -> bool {
        if left == 0 {
            return seen.insert(acc);
        }
        (start..x.len()).all(|i| rec(x, i, left - 1, acc + x[i], seen))
    }
    let mut seen = HashSet::new();
    rec(x, 0, h, 0, &mut seen)
}

/// Counts members of `family` of length `t` by testing every composition of `t` into `m`
/// positive parts.
pub fn count_family_bruteforce(family: &FamilySpec, t: u64, budget: WorkBudget) -> Result<u64> {
    family.validate()?;
    let m = family.m;
    let points = sweep::open_point_count(t, m);
    budget.check(points.saturating_mul(family.oracle_cost()))?;
    if points == 0 {
        return Ok(0);
    }
    let t = i64::try_from(t).map_err(|_| Error::Overflow("dilation"))?;
    let count = sweep::par_sum(t, m, 1, |z| {
        let ruler = GapVector { gaps: z.to_vec() }.markings();
        i64::from(is_member(&ruler, family).unwrap_or(false))
    });
    Ok(count as u64)
}
