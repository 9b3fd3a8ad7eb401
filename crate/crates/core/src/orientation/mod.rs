//! Climb, the Golomb graph and `Γ_{m,h}`, and the map from regions to orientations.

mod climb;
mod graph;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

pub use climb::{
    all_vectors, climb, climb_inequality_check, exhaustive_disjoint_triples, min_consecutive_decomposition, reduce_pair,
    ClimbInequalityReport, MultiVec, DECOMPOSITION_STATE_LIMIT,
};
pub use graph::{
    build_gamma_mh, coherence_checks, golomb_graph, is_acyclic, is_coherent, phi, CoherenceCheck, Edge, GraphKind,
    MixedGraph, Orientation, OrientationDoc, OrientedEdge, DEFAULT_VERTEX_GUARD,
};

use crate::arrangements::{arrangement_for, golomb_hyperplanes};
use crate::error::{Error, Result};
use crate::lp;
use crate::regions::{enumerate_regions, RegionLimits};
use crate::rulers::{FamilyKind, FamilySpec};

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    pub family: FamilySpec,
    pub regions: usize,
    pub distinct_orientations: usize,
    pub all_coherent: bool,
    pub all_acyclic: bool,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.all_coherent && self.all_acyclic && self.distinct_orientations == self.regions
    }
}

/// The graph on which `φ` acts for a Golomb or `B_h` family.
pub fn graph_for(family: &FamilySpec) -> Result<MixedGraph> {
    match family.kind {
        FamilyKind::Golomb => golomb_graph(family.m),
        FamilyKind::Bh { h } => build_gamma_mh(family.m, h, DEFAULT_VERTEX_GUARD),
        _ => Err(Error::Unsupported(format!("no orientation graph for family {}", family.kind.name()))),
    }
}

/// Applies `φ` to a representative of every region and checks the images are pairwise
/// distinct, coherent and acyclic.
pub fn injectivity_check(family: &FamilySpec, limits: RegionLimits) -> Result<InjectivityReport> {
    let g = graph_for(family)?;
    let a = arrangement_for(family)?;
    let regions = enumerate_regions(&a, limits)?;
    let images = regions
        .par_iter()
        .map(|r| {
            let o = phi(&r.representative, &g)?;
            let ok = (is_coherent(&o, &g), is_acyclic(&o, &g));
            Ok((o, ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let distinct: HashSet<&Orientation> = images.iter().map(|(o, _)| o).collect();
    Ok(InjectivityReport {
        family: *family,
        regions: regions.len(),
        distinct_orientations: distinct.len(),
        all_coherent: images.iter().all(|(_, ok)| ok.0),
        all_acyclic: images.iter().all(|(_, ok)| ok.1),
    })
}

/// The linear order on proper consecutive subsets of `[5]` whose closure is coherent and acyclic
/// yet is not the image of any region.
pub const M5_ORDER: &str = "3 5 1 4 2 34 23 12 45 123 345 234 2345 1234";

/// Strict inequalities `row · z > 0` forced by the edges `34 → 23`, `12 → 45`, `5 → 1`.
pub const M5_CERTIFICATE: [[i64; 5]; 3] = [[0, 1, 0, -1, 0], [-1, -1, 0, 1, 1], [1, 0, 0, 0, -1]];

#[derive(Debug, Clone, Serialize)]
pub struct SameSizeCheck {
    pub pair: [String; 2],
    pub reduced: [String; 2],
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfeasibilityCertificate {
    pub covectors: Vec<Vec<i64>>,
    pub sum: Vec<i64>,
    pub lp_infeasible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub order: Vec<String>,
    pub coherent: bool,
    pub acyclic: bool,
    /// Coherence requirements between overlapping subsets of equal size.
    pub same_size_checks: Vec<SameSizeCheck>,
    pub certificate: InfeasibilityCertificate,
    pub regions_checked: usize,
    pub preimage_found: bool,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.coherent
            && self.acyclic
            && self.certificate.lp_infeasible
            && self.certificate.sum.iter().all(|&x| x == 0)
            && self.regions_checked > 0
            && !self.preimage_found
    }
}

/// Builds the orientation of the Golomb graph for `m = 5` given by [`M5_ORDER`], checks it is
/// coherent and acyclic, certifies that the three forced inequalities are infeasible, and
/// sweeps every region of the `m = 5` Golomb arrangement for a preimage.
pub fn counterexample_m5(limits: RegionLimits) -> Result<CounterexampleReport> {
    let g = golomb_graph(5)?;
    let order = M5_ORDER
        .split_whitespace()
        .map(|l| g.vertex_by_label(l).ok_or_else(|| Error::InvalidGaps(format!("unknown subset {l}"))))
        .collect::<Result<Vec<_>>>()?;
    let o = Orientation::from_linear_order(&g, &order)?;
    let checks = coherence_checks(&o, &g);
    let size = |v: usize| g.vertices[v].iter().sum::<i64>();
    let same_size_checks = checks
        .iter()
        .filter(|c| !g.edges[g.edge_between(c.u, c.v).unwrap()].directed && size(c.u) == size(c.v))
        .filter(|c| c.a.iter().sum::<i64>() < size(c.u))
        .map(|c| {
            let (from, to) = if c.u_to_v { (c.u, c.v) } else { (c.v, c.u) };
            let (a, b) = (g.vertex(&c.a).unwrap(), g.vertex(&c.b).unwrap());
            let (ra, rb) = if o.points(&g, a, b) == Some(true) { (a, b) } else { (b, a) };
            SameSizeCheck {
                pair: [g.label(from), g.label(to)],
                reduced: [g.label(ra), g.label(rb)],
                holds: c.holds,
            }
        })
        .collect();

    let covectors: Vec<Vec<i64>> = M5_CERTIFICATE.iter().map(|r| r.to_vec()).collect();
    let sum = (0..5).map(|j| covectors.iter().map(|r| r[j]).sum()).collect();
    let lp_infeasible = lp::strictly_feasible_point(5, &covectors, &[])?.is_none();

    let a = golomb_hyperplanes(5);
    let regions = enumerate_regions(&a, limits)?;
    let preimage_found = regions
        .par_iter()
        .map(|r| phi(&r.representative, &g).map(|p| p == o))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .any(|hit| hit);

    Ok(CounterexampleReport {
        order: order.iter().map(|&v| g.label(v)).collect(),
        coherent: is_coherent(&o, &g),
        acyclic: is_acyclic(&o, &g),
        same_size_checks,
        certificate: InfeasibilityCertificate {
            covectors,
            sum,
            lp_infeasible,
        },
        regions_checked: regions.len(),
        preimage_found,
    })
}

/// Region limits large enough for the `m = 5` Golomb arrangement.
pub const M5_LIMITS: RegionLimits = RegionLimits {
    max_ambient_dim: 4,
    max_hyperplanes: 35,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golomb_m3_injective() {
        let r = injectivity_check(&FamilySpec::golomb(3), RegionLimits::DEFAULT).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn unsupported_families() {
        assert!(graph_for(&FamilySpec::b2g(4, 2)).is_err());
    }
}
