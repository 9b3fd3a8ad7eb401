use std::collections::HashMap;

use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::arrangements::consecutive_intervals;
use crate::error::{Error, Result};
use crate::linalg::{dot_q, Q};

use super::climb::{all_vectors, climb, reduce_pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// Proper consecutive subsets of `[m]`.
    Golomb,
    /// Multisets of climb at most `h`.
    Bh { h: usize },
}

/// An edge between vertex indices. A directed edge must be oriented `u → v`; undirected edges
/// are stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub directed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedGraph {
    pub kind: GraphKind,
    pub m: usize,
    pub vertices: Vec<Vec<i64>>,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    index: HashMap<Vec<i64>, usize>,
    #[serde(skip)]
    edge_index: HashMap<(usize, usize), usize>,
}

impl MixedGraph {
    fn new(kind: GraphKind, m: usize, vertices: Vec<Vec<i64>>, edges: Vec<Edge>) -> Self {
        let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let edge_index = edges
            .iter()
            .enumerate()
            .flat_map(|(i, e)| [((e.u, e.v), i), ((e.v, e.u), i)])
            .collect();
        Self {
            kind,
            m,
            vertices,
            edges,
            index,
            edge_index,
        }
    }

    pub fn vertex(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u, v)).copied()
    }

    /// Compact label: the member indices, repeated by multiplicity (`"34"`, `"112"`).
    pub fn label(&self, vertex: usize) -> String {
        let mut s = String::new();
        for (i, &k) in self.vertices[vertex].iter().enumerate() {
            for _ in 0..k {
                s.push_str(&(i + 1).to_string());
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    /// Looks up a vertex by its label; inverse of [`MixedGraph::label`] for `m ≤ 9`.
    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        let mut coords = vec![0; self.m];
        if label != "0" {
            for ch in label.chars() {
                let d = ch.to_digit(10)? as usize;
                if d == 0 || d > self.m {
                    return None;
                }
                coords[d - 1] += 1;
            }
        }
        self.vertex(&coords)
    }
}

/// The Golomb graph on proper consecutive subsets of `[m]`: complete, with containment pairs
/// directed from the smaller set to the larger.
pub fn golomb_graph(m: usize) -> Result<MixedGraph> {
    if m < 2 {
        return Err(Error::InvalidFamily(format!("Golomb graph needs m >= 2, got {m}")));
    }
    let vertices: Vec<Vec<i64>> = consecutive_intervals(m).iter().map(|iv| iv.indicator(m)).collect();
    let mut edges = Vec::new();
    for u in 0..vertices.len() {
        for v in u + 1..vertices.len() {
            let le = |a: &[i64], b: &[i64]| a.iter().zip(b).all(|(x, y)| x <= y);
            if le(&vertices[u], &vertices[v]) {
                edges.push(Edge { u, v, directed: true });
            } else if le(&vertices[v], &vertices[u]) {
                edges.push(Edge { u: v, v: u, directed: true });
            } else {
                edges.push(Edge { u, v, directed: false });
            }
        }
    }
    Ok(MixedGraph::new(GraphKind::Golomb, m, vertices, edges))
}

/// Upper limit on the number of candidate vertices `(h + 1)^m`.
pub const DEFAULT_VERTEX_GUARD: u128 = 20_000;

/// `Γ_{m,h}`: vertices are the vectors of climb at most `h` (all entries are then at most `h`);
/// `uv` is an edge iff the reduced pair `(u − c, v − c)`, `c = min(u, v)`, has total climb at
/// most `h`. All edges are undirected; orientations of comparable pairs are forced by coherence.
pub fn build_gamma_mh(m: usize, h: usize, vertex_guard: u128) -> Result<MixedGraph> {
    if m < 2 || h < 2 {
        return Err(Error::InvalidFamily(format!("Γ_(m,h) needs m >= 2 and h >= 2, got m = {m}, h = {h}")));
    }
    let candidates = (h as u128 + 1).checked_pow(m as u32).unwrap_or(u128::MAX);
    if candidates > vertex_guard {
        return Err(Error::GuardExceeded(format!("{candidates} candidate vertices exceed {vertex_guard}")));
    }
    let h = h as i64;
    let vertices: Vec<Vec<i64>> = all_vectors(m, h)
        .into_iter()
        .map(|v| v.0)
        .filter(|v| climb(v) <= h)
        .collect();
    let mut edges = Vec::new();
    for u in 0..vertices.len() {
        for v in u + 1..vertices.len() {
            let (a, b, _) = reduce_pair(&vertices[u], &vertices[v]);
            if climb(&a) + climb(&b) <= h {
                edges.push(Edge { u, v, directed: false });
            }
        }
    }
    Ok(MixedGraph::new(GraphKind::Bh { h: h as usize }, m, vertices, edges))
}

/// Direction of each edge: `true` means `edges[i].u → edges[i].v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub forward: Vec<bool>,
}

impl Orientation {
    /// Orients every edge from the earlier to the later vertex of `order`, which must list every
    /// vertex exactly once.
    pub fn from_linear_order(g: &MixedGraph, order: &[usize]) -> Result<Self> {
        let mut pos = vec![usize::MAX; g.vertices.len()];
        for (i, &v) in order.iter().enumerate() {
            if v >= pos.len() || pos[v] != usize::MAX {
                return Err(Error::InvalidGaps(format!("vertex {v} repeated or out of range")));
            }
            pos[v] = i;
        }
        if order.len() != g.vertices.len() {
            return Err(Error::InvalidGaps(format!(
                "order lists {} of {} vertices",
                order.len(),
                g.vertices.len()
            )));
        }
        Ok(Self {
            forward: g.edges.iter().map(|e| pos[e.u] < pos[e.v]).collect(),
        })
    }

    /// Whether the edge between `x` and `y` is oriented `x → y`.
    pub fn points(&self, g: &MixedGraph, x: usize, y: usize) -> Option<bool> {
        let i = g.edge_between(x, y)?;
        Some(self.forward[i] == (g.edges[i].u == x))
    }

    pub fn arcs<'a>(&'a self, g: &'a MixedGraph) -> impl Iterator<Item = (usize, usize)> + 'a {
        g.edges
            .iter()
            .zip(&self.forward)
            .map(|(e, &f)| if f { (e.u, e.v) } else { (e.v, e.u) })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrientedEdge {
    pub from: usize,
    pub to: usize,
    pub directed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrientationDoc {
    pub vertices: Vec<Vec<i64>>,
    pub edges: Vec<OrientedEdge>,
}

impl OrientationDoc {
    pub fn new(g: &MixedGraph, o: &Orientation) -> Self {
        Self {
            vertices: g.vertices.clone(),
            edges: o
                .arcs(g)
                .zip(&g.edges)
                .map(|((from, to), e)| OrientedEdge {
                    from,
                    to,
                    directed: e.directed,
                })
                .collect(),
        }
    }
}

/// `u → v` iff `u · z < v · z`.
pub fn phi(z: &[Q], g: &MixedGraph) -> Result<Orientation> {
    if z.len() != g.m {
        return Err(Error::DimensionMismatch {
            expected: g.m,
            actual: z.len(),
        });
    }
    let values: Vec<Q> = g.vertices.iter().map(|v| dot_q(v, z)).collect();
    let forward = g
        .edges
        .iter()
        .map(|e| {
            let (x, y) = (&values[e.u], &values[e.v]);
            if x == y {
                Err(Error::TieOnEdge { u: e.u, v: e.v })
            } else {
                Ok(x < y)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Orientation { forward })
}

/// One coherence requirement: edge `uv` must agree with the reduced edge `ab`, where
/// `a = u − c`, `b = v − c`, `c = min(u, v)`. An empty `a` (or `b`) means `u ≤ v` and the edge
/// must point `u → v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoherenceCheck {
    pub u: usize,
    pub v: usize,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub u_to_v: bool,
    /// Direction `a → b` required by the reduced pair.
    pub required: Option<bool>,
    pub holds: bool,
}

/// Every coherence requirement of `o`, one per edge. For directed edges the requirement is the
/// edge's own direction; for undirected edges it comes from the reduced pair.
pub fn coherence_checks(o: &Orientation, g: &MixedGraph) -> Vec<CoherenceCheck> {
    g.edges
        .iter()
        .zip(&o.forward)
        .map(|(e, &f)| {
            let (a, b, c) = reduce_pair(&g.vertices[e.u], &g.vertices[e.v]);
            let zero = |x: &[i64]| x.iter().all(|&y| y == 0);
            let required = if e.directed || zero(&a) {
                Some(true)
            } else if zero(&b) {
                Some(false)
            } else if zero(&c) {
                None
            } else {
                match (g.vertex(&a), g.vertex(&b)) {
                    (Some(ia), Some(ib)) => o.points(g, ia, ib),
                    _ => None,
                }
            };
            CoherenceCheck {
                u: e.u,
                v: e.v,
                holds: required.is_none_or(|r| r == f),
                a,
                b,
                u_to_v: f,
                required,
            }
        })
        .collect()
}

pub fn is_coherent(o: &Orientation, g: &MixedGraph) -> bool {
    o.forward.len() == g.edges.len() && coherence_checks(o, g).iter().all(|c| c.holds)
}

pub fn is_acyclic(o: &Orientation, g: &MixedGraph) -> bool {
    let mut d = DiGraph::<(), ()>::with_capacity(g.vertices.len(), g.edges.len());
    let nodes: Vec<_> = (0..g.vertices.len()).map(|_| d.add_node(())).collect();
    for (x, y) in o.arcs(g) {
        d.add_edge(nodes[x], nodes[y], ());
    }
    !petgraph::algo::is_cyclic_directed(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn golomb_graph_shape() {
        let g = golomb_graph(3).unwrap();
        // 1, 2, 3, 12, 23
        assert_eq!(g.vertices.len(), 5);
        assert_eq!(g.edges.len(), 10);
        assert_eq!(g.edges.iter().filter(|e| e.directed).count(), 4);
        let one = g.vertex_by_label("1").unwrap();
        let onetwo = g.vertex_by_label("12").unwrap();
        let e = g.edges[g.edge_between(one, onetwo).unwrap()];
        assert!(e.directed && e.u == one);
        assert_eq!(g.label(onetwo), "12");
    }

    #[test]
    fn gamma_small() {
        let g = build_gamma_mh(2, 2, DEFAULT_VERTEX_GUARD).unwrap();
        assert_eq!(g.vertices.len(), 9);
        let g = build_gamma_mh(3, 3, DEFAULT_VERTEX_GUARD).unwrap();
        let x = g.vertex(&[2, 0, 0]).unwrap();
        let y = g.vertex(&[0, 2, 1]).unwrap();
        assert!(g.edge_between(x, y).is_none());
        let zero = g.vertex(&[0, 0, 0]).unwrap();
        for v in 0..g.vertices.len() {
            if v != zero {
                assert!(g.edge_between(zero, v).is_some());
            }
        }
        for (i, e) in g.edges.iter().enumerate() {
            assert_eq!(g.edge_between(e.v, e.u), Some(i));
        }
        assert!(build_gamma_mh(8, 4, DEFAULT_VERTEX_GUARD).is_err());
    }

    #[test]
    fn phi_basic_and_tie() {
        // (2,0)·z = (0,1)·z at z = (1,2), and (2,0)(0,1) is an edge once h = 3
        let g3 = build_gamma_mh(2, 3, DEFAULT_VERTEX_GUARD).unwrap();
        assert!(matches!(phi(&[q(1), q(2)], &g3), Err(Error::TieOnEdge { .. })));
        let g = build_gamma_mh(2, 2, DEFAULT_VERTEX_GUARD).unwrap();
        let e1 = g.vertex(&[1, 0]).unwrap();
        let e2 = g.vertex(&[0, 1]).unwrap();
        let z = [Q::new(2.into(), 5.into()), Q::new(3.into(), 5.into())];
        let o = phi(&z, &g).unwrap();
        assert_eq!(o.points(&g, e1, e2), Some(true));
        assert!(is_coherent(&o, &g));
        assert!(is_acyclic(&o, &g));
    }

    #[test]
    fn reversed_zero_edge_is_incoherent() {
        let g = build_gamma_mh(2, 2, DEFAULT_VERTEX_GUARD).unwrap();
        let z = [Q::new(2.into(), 5.into()), Q::new(3.into(), 5.into())];
        let mut o = phi(&z, &g).unwrap();
        let zero = g.vertex(&[0, 0]).unwrap();
        let i = g.edges.iter().position(|e| e.u == zero || e.v == zero).unwrap();
        o.forward[i] = !o.forward[i];
        assert!(!is_coherent(&o, &g));
    }

    #[test]
    fn injected_cycle_detected() {
        let g = golomb_graph(3).unwrap();
        let order: Vec<usize> = (0..g.vertices.len()).collect();
        let mut o = Orientation::from_linear_order(&g, &order).unwrap();
        assert!(is_acyclic(&o, &g));
        // 1 → 2 → 3 → 1
        let [a, b, c] = ["1", "2", "3"].map(|l| g.vertex_by_label(l).unwrap());
        for (x, y) in [(a, b), (b, c), (c, a)] {
            let i = g.edge_between(x, y).unwrap();
            o.forward[i] = g.edges[i].u == x;
        }
        assert!(!is_acyclic(&o, &g));
    }

    #[test]
    fn order_validation() {
        let g = golomb_graph(3).unwrap();
        assert!(Orientation::from_linear_order(&g, &[0, 1, 2]).is_err());
        assert!(Orientation::from_linear_order(&g, &[0, 0, 1, 2, 3]).is_err());
    }
}
