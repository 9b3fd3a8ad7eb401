//! Intersection semilattice of an arrangement restricted to the affine hyperplane `Σ z = 1`.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::arrangements::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{self, dot_q, q, to_q_row, Q};
use crate::lp;

/// Fixed-width set of arrangement element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A nonempty flat: a linear subspace `rows · z = 0` meeting `Σ z = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct Flat {
    /// Canonical RREF equations; empty for the ambient space.
    pub rows: Vec<Vec<i64>>,
    /// Codimension inside the `(m − 1)`-dimensional affine ambient.
    pub codim: usize,
    /// `μ(0̂, u)`.
    pub mobius: i64,
    /// Whether the flat meets the open simplex.
    pub meets_open: bool,
    #[serde(skip)]
    pub elements: ElementSet,
}

#[derive(Debug, Clone)]
pub struct IntersectionPoset {
    pub m: usize,
    /// `flats[0]` is the ambient space `0̂`; flats are sorted by codimension.
    pub flats: Vec<Flat>,
    element_rows: Vec<Vec<Vec<i64>>>,
}

/// Upper limit on the number of flats before construction gives up.
pub const DEFAULT_FLAT_LIMIT: usize = 200_000;

impl IntersectionPoset {
    pub fn build(a: &Arrangement) -> Result<Self> {
        Self::build_with_limit(a, DEFAULT_FLAT_LIMIT)
    }

    pub fn build_with_limit(a: &Arrangement, limit: usize) -> Result<Self> {
        let m = a.m;
        let element_rows = a.element_rows();
        let n = element_rows.len();
        let ones = vec![q(1); m];

        let mut index: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
        let mut systems: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
        index.insert(Vec::new(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(fi) = queue.pop_front() {
            for e in &element_rows {
                let mut stacked: Vec<Vec<Q>> = systems[fi].iter().map(|r| to_q_row(r)).collect();
                stacked.extend(e.iter().map(|r| to_q_row(r)));
                let rows = linalg::canonical_rows(&stacked)?;
                if rows.len() == systems[fi].len() || index.contains_key(&rows) {
                    continue;
                }
                // Empty in the affine ambient when Σ z is forced to vanish.
                let mut with_ones: Vec<Vec<Q>> = rows.iter().map(|r| to_q_row(r)).collect();
                with_ones.push(ones.clone());
                if linalg::rank(&with_ones) == rows.len() {
                    continue;
                }
                if systems.len() >= limit {
                    return Err(Error::GuardExceeded(format!("more than {limit} flats")));
                }
                index.insert(rows.clone(), systems.len());
                queue.push_back(systems.len());
                systems.push(rows);
            }
        }

        let mut flats: Vec<Flat> = systems
            .into_iter()
            .map(|rows| {
                let mut elements = ElementSet::with_capacity(n);
                let base: Vec<Vec<Q>> = rows.iter().map(|r| to_q_row(r)).collect();
                for (i, e) in element_rows.iter().enumerate() {
                    let mut s = base.clone();
                    s.extend(e.iter().map(|r| to_q_row(r)));
                    if linalg::rank(&s) == rows.len() {
                        elements.insert(i);
                    }
                }
                let meets_open = rows.is_empty() || lp::strictly_feasible_point(m, &[], &rows)?.is_some();
                Ok(Flat {
                    codim: rows.len(),
                    rows,
                    mobius: 0,
                    meets_open,
                    elements,
                })
            })
            .collect::<Result<_>>()?;
        flats.sort_by(|a, b| (a.codim, &a.rows).cmp(&(b.codim, &b.rows)));

        // μ(0̂,0̂) = 1 and Σ_{v ≤ u} μ(0̂,v) = 0 otherwise; v ≤ u iff elements(v) ⊊ elements(u).
        flats[0].mobius = 1;
        for u in 1..flats.len() {
            let s: i64 = (0..u)
                .filter(|&v| flats[v].codim < flats[u].codim && flats[v].elements.is_subset(&flats[u].elements))
                .map(|v| flats[v].mobius)
                .sum();
            flats[u].mobius = -s;
        }
        Ok(Self { m, flats, element_rows })
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn num_elements(&self) -> usize {
        self.element_rows.len()
    }

    /// Whether flat `v` lies below `u` (contains it).
    pub fn le(&self, v: usize, u: usize) -> bool {
        self.flats[v].elements.is_subset(&self.flats[u].elements) && self.flats[v].codim <= self.flats[u].codim
    }

    /// Arrangement elements containing the integer point `z`.
    pub fn elements_containing(&self, z: &[i64]) -> ElementSet {
        let mut s = ElementSet::with_capacity(self.element_rows.len());
        for (i, e) in self.element_rows.iter().enumerate() {
            if e.iter().all(|r| r.iter().zip(z).map(|(c, x)| c * x).sum::<i64>() == 0) {
                s.insert(i);
            }
        }
        s
    }

    /// `Σ μ(0̂,u)(−1)^codim(u)` over flats `u` whose element set is contained in `on`.
    /// With `interior_flats_only`, flats missing the open simplex are skipped.
    pub fn multiplicity_for(&self, on: &ElementSet, interior_flats_only: bool) -> i64 {
        self.flats
            .iter()
            .filter(|f| f.elements.is_subset(on) && (!interior_flats_only || f.meets_open))
            .map(|f| if f.codim % 2 == 0 { f.mobius } else { -f.mobius })
            .sum()
    }

    /// Multiplicity of a rational point. Points outside the closed simplex `{z ≥ 0, Σ z = 1}`
    /// have multiplicity zero.
    ///
    /// With `interior_flats_only` the sum runs over flats through `z` that meet the open
    /// simplex, which equals the number of closed regions containing `z` for hyperplane
    /// arrangements, including on the boundary. Without it, every flat through `z` counts.
    pub fn multiplicity(&self, z: &[Q], interior_flats_only: bool) -> Result<i64> {
        if z.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: z.len(),
            });
        }
        let total: Q = z.iter().cloned().sum();
        if z.iter().any(|x| *x < Q::from_integer(0.into())) || total != q(1) {
            return Ok(0);
        }
        let mut on = ElementSet::with_capacity(self.element_rows.len());
        for (i, e) in self.element_rows.iter().enumerate() {
            if e.iter().all(|r| dot_q(r, z) == q(0)) {
                on.insert(i);
            }
        }
        Ok(self.multiplicity_for(&on, interior_flats_only))
    }
}
