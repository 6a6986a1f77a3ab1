//! Finite unit-length models of metric graphs.
//!
//! A [`ModelGraph`] is the loopless combinatorial multigraph obtained by
//! rescaling every length by a common integer and cutting each edge into unit
//! segments. Chip-firing on the model computes linear equivalence and rank for
//! divisors supported on model vertices.

use std::collections::{HashMap, VecDeque};
use std::ops::{Add, Index, Neg, Sub};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{MetricDivisor, MetricGraph, PointLocation, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelGraph {
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<(usize, i64)>>,
    degree: Vec<i64>,
    backmap: Vec<PointLocation>,
    forward: HashMap<PointLocation, usize>,
    scale: i64,
}

impl ModelGraph {
    /// Builds a model directly from unit edges on vertices `0..n`. The
    /// backmap sends model vertex `i` to metric vertex `i`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let backmap = (0..n).map(PointLocation::Vertex).collect();
        Self::assemble(edges.to_vec(), backmap, 1)
    }

    fn assemble(edges: Vec<(usize, usize)>, backmap: Vec<PointLocation>, scale: i64) -> Result<Self> {
        let n = backmap.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut mult: Vec<HashMap<usize, i64>> = vec![HashMap::new(); n];
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::UnknownVertex(a.max(b).to_string()));
            }
            if a == b {
                return Err(Error::Precondition(format!("model edge at vertex {a} is a loop")));
            }
            *mult[a].entry(b).or_insert(0) += 1;
            *mult[b].entry(a).or_insert(0) += 1;
        }
        let neighbors: Vec<Vec<(usize, i64)>> = mult
            .into_iter()
            .map(|m| {
                let mut v: Vec<_> = m.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let degree = neighbors
            .iter()
            .map(|nb| nb.iter().map(|&(_, m)| m).sum())
            .collect();
        let forward = backmap
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let model = ModelGraph {
            edges,
            neighbors,
            degree,
            backmap,
            forward,
            scale,
        };
        if !model.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(model)
    }

    fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(Option::is_some)
    }

    /// BFS distances in unit edges from `q`.
    pub fn distances_from(&self, q: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[q] = Some(0);
        let mut queue = VecDeque::from([q]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &(w, _) in &self.neighbors[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn vertex_count(&self) -> usize {
        self.backmap.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Distinct neighbours of `v` with edge multiplicities, sorted.
    pub fn neighbors(&self, v: usize) -> &[(usize, i64)] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.degree[v]
    }

    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count()
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Base point used whenever none is given explicitly.
    pub fn default_base(&self) -> usize {
        0
    }

    pub fn backmap(&self, v: usize) -> &PointLocation {
        &self.backmap[v]
    }

    pub fn vertex_at(&self, p: &PointLocation) -> Option<usize> {
        self.forward.get(p).copied()
    }

    /// `L * script` for the graph Laplacian `L = Deg - Adj`.
    pub fn apply_laplacian(&self, script: &[i64]) -> Vec<i64> {
        (0..self.vertex_count())
            .map(|v| {
                let out: i64 = self.neighbors[v].iter().map(|&(w, m)| m * script[w]).sum();
                self.degree[v] * script[v] - out
            })
            .collect()
    }

    /// Pushes a metric divisor whose support lies on model vertices.
    pub fn push(&self, d: &MetricDivisor) -> Result<ModelDivisor> {
        let mut coeffs = vec![0; self.vertex_count()];
        for (p, c) in d.iter() {
            let v = self.vertex_at(p).ok_or_else(|| {
                Error::Precondition(format!("point {p:?} is not a vertex of the model"))
            })?;
            coeffs[v] += c;
        }
        Ok(ModelDivisor(coeffs))
    }

    pub fn lift(&self, d: &ModelDivisor) -> MetricDivisor {
        MetricDivisor::from_chips(
            d.iter()
                .enumerate()
                .map(|(v, &c)| (self.backmap[v].clone(), c)),
        )
    }

    pub fn check(&self, d: &ModelDivisor) -> Result<()> {
        if d.len() != self.vertex_count() {
            return Err(Error::ModelMismatch {
                expected: self.vertex_count(),
                found: d.len(),
            });
        }
        Ok(())
    }
}

/// Dense integer divisor on the vertices of a model graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ModelDivisor(pub Vec<i64>);

impl ModelDivisor {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Self::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i64> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }
}

impl Index<usize> for ModelDivisor {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

impl Add for &ModelDivisor {
    type Output = ModelDivisor;
    fn add(self, rhs: &ModelDivisor) -> ModelDivisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different models");
        ModelDivisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ModelDivisor {
    type Output = ModelDivisor;
    fn sub(self, rhs: &ModelDivisor) -> ModelDivisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different models");
        ModelDivisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ModelDivisor {
    type Output = ModelDivisor;
    fn neg(self) -> ModelDivisor {
        self.scaled(-1)
    }
}

/// Degree, support and effectiveness of a divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorSummary<P> {
    pub degree: i64,
    pub support: Vec<P>,
    pub effective: bool,
}

pub fn inspect_model_divisor(d: &ModelDivisor) -> DivisorSummary<usize> {
    DivisorSummary {
        degree: d.degree(),
        support: d.support(),
        effective: d.is_effective(),
    }
}

pub fn inspect_metric_divisor(d: &MetricDivisor) -> DivisorSummary<PointLocation> {
    DivisorSummary {
        degree: d.degree(),
        support: d.support().into_iter().collect(),
        effective: d.is_effective(),
    }
}

fn lcm_checked(a: i64, b: i64) -> Result<i64> {
    (a / a.gcd(&b))
        .checked_mul(b)
        .ok_or(Error::Overflow("computing the model scale"))
}

/// Length multiplier that makes every length, every divisor offset and
/// every `1/resolution` point integral, doubled when a loop would otherwise
/// become a single unit segment.
pub fn model_scale(graph: &MetricGraph, divisors: &[MetricDivisor], resolution: u32) -> Result<i64> {
    if resolution == 0 {
        return Err(Error::Precondition("resolution must be at least 1".into()));
    }
    let mut scale = i64::from(resolution);
    for e in graph.edges() {
        scale = lcm_checked(scale, *e.length.denom())?;
    }
    for d in divisors {
        for (p, _) in d.iter() {
            if !graph.contains_point(p) {
                return Err(Error::Precondition(format!("point {p:?} is not on the graph")));
            }
            if let PointLocation::Edge { offset, .. } = p {
                scale = lcm_checked(scale, *offset.denom())?;
            }
        }
    }
    let short_loop = graph
        .edges()
        .iter()
        .any(|e| e.is_loop() && e.length * Rational::from(scale) == Rational::from(1));
    if short_loop {
        scale = scale.checked_mul(2).ok_or(Error::Overflow("doubling the model scale"))?;
    }
    Ok(scale)
}

/// Rescales and subdivides `graph` into a unit-length loopless model and
/// pushes each divisor onto it.
///
/// Model vertices `0..|V|` are the original vertices in declaration order;
/// subdivision vertices follow edge by edge, ordered by offset.
pub fn normalize_to_model(
    graph: &MetricGraph,
    divisors: &[MetricDivisor],
    resolution: u32,
) -> Result<(ModelGraph, Vec<ModelDivisor>)> {
    let scale = model_scale(graph, divisors, resolution)?;
    let mut backmap: Vec<PointLocation> =
        (0..graph.vertex_count()).map(PointLocation::Vertex).collect();
    let mut edges = Vec::new();
    for (id, e) in graph.edges().iter().enumerate() {
        let scaled = e.length * Rational::from(scale);
        debug_assert!(scaled.is_integer());
        let segments = scaled.to_integer();
        let mut prev = e.a;
        for k in 1..segments {
            let w = backmap.len();
            backmap.push(PointLocation::Edge {
                edge: id,
                offset: Rational::new(k, scale),
            });
            edges.push((prev, w));
            prev = w;
        }
        edges.push((prev, e.b));
    }
    let model = ModelGraph::assemble(edges, backmap, scale)?;
    let pushed = divisors
        .iter()
        .map(|d| model.push(d))
        .collect::<Result<Vec<_>>>()?;
    Ok((model, pushed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn theta(lengths: [Rational; 3]) -> MetricGraph {
        let mut b = MetricGraph::builder();
        b.vertex("u").unwrap();
        b.vertex("v").unwrap();
        for (i, l) in lengths.into_iter().enumerate() {
            b.edge(format!("e{}", i + 1), "u", "v", l).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn theta_mixed_lengths_scale_six() {
        let g = theta([r(1, 2), r(1, 3), r(1, 1)]);
        let (m, _) = normalize_to_model(&g, &[], 1).unwrap();
        assert_eq!(m.scale(), 6);
        // 3 + 2 + 6 unit segments
        assert_eq!(m.edge_count(), 11);
        assert_eq!(m.vertex_count(), 2 + 2 + 1 + 5);
        assert_eq!(m.genus(), g.genus());
    }

    #[test]
    fn unit_loop_doubles_scale() {
        let mut b = MetricGraph::builder();
        b.vertex("c").unwrap();
        b.edge("l", "c", "c", r(1, 1)).unwrap();
        let g = b.build().unwrap();
        let (m, _) = normalize_to_model(&g, &[], 1).unwrap();
        assert_eq!(m.scale(), 2);
        assert_eq!(m.vertex_count(), 2);
        assert_eq!(m.neighbors(0), &[(1, 2)]);
        assert_eq!(m.genus(), 1);
    }

    #[test]
    fn midpoint_divisor_becomes_vertex() {
        let g = theta([r(1, 1), r(1, 1), r(1, 1)]);
        let mid = g.edge_point("e1", r(1, 2)).unwrap();
        let d = MetricDivisor::from_chips([(mid.clone(), 1)]);
        let (m, ds) = normalize_to_model(&g, &[d.clone()], 1).unwrap();
        assert_eq!(m.scale(), 2);
        let v = m.vertex_at(&mid).unwrap();
        assert_eq!(ds[0][v], 1);
        assert_eq!(ds[0].degree(), 1);
        assert_eq!(m.lift(&ds[0]), d);
    }

    #[test]
    fn resolution_refines_by_lcm() {
        let g = theta([r(1, 2), r(1, 1), r(1, 1)]);
        assert_eq!(model_scale(&g, &[], 1).unwrap(), 2);
        assert_eq!(model_scale(&g, &[], 2).unwrap(), 2);
        assert_eq!(model_scale(&g, &[], 3).unwrap(), 6);
        assert!(model_scale(&g, &[], 0).is_err());
    }

    #[test]
    fn model_rejects_loops_and_disconnection() {
        assert!(ModelGraph::from_edges(2, &[(0, 0), (0, 1)]).is_err());
        assert_eq!(
            ModelGraph::from_edges(3, &[(0, 1)]),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn laplacian_kills_constants() {
        let m = ModelGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        assert_eq!(m.apply_laplacian(&[5, 5, 5]), vec![0, 0, 0]);
        assert_eq!(m.apply_laplacian(&[0, 0, 1]), vec![-1, -1, 2]);
    }

    #[test]
    fn push_rejects_off_model_points() {
        let g = theta([r(1, 1), r(1, 1), r(1, 1)]);
        let (m, _) = normalize_to_model(&g, &[], 1).unwrap();
        let mid = g.edge_point("e1", r(1, 2)).unwrap();
        assert!(m.push(&MetricDivisor::from_chips([(mid, 1)])).is_err());
    }

    #[test]
    fn inspect_model_examples() {
        let d = ModelDivisor(vec![2, -1]);
        assert_eq!(
            inspect_model_divisor(&d),
            DivisorSummary { degree: 1, support: vec![0, 1], effective: false }
        );
        let z = ModelDivisor::zero(4);
        assert_eq!(
            inspect_model_divisor(&z),
            DivisorSummary { degree: 0, support: vec![], effective: true }
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normalization_preserves_genus_and_degree(
                lens in prop::collection::vec((1i64..5, 1i64..5), 3),
                loop_len in (1i64..4, 1i64..4),
                resolution in 1u32..4,
                coeff in -3i64..4,
                num in 1i64..8,
            ) {
                let mut b = MetricGraph::builder();
                b.vertex("u").unwrap();
                b.vertex("v").unwrap();
                for (i, (n, d)) in lens.iter().enumerate() {
                    b.edge(format!("e{i}"), "u", "v", r(*n, *d)).unwrap();
                }
                b.edge("l", "u", "u", r(loop_len.0, loop_len.1)).unwrap();
                let g = b.build().unwrap();
                let len0 = g.edges()[0].length;
                let offset = len0 * r(num, 9);
                let mut d = MetricDivisor::zero();
                if offset < len0 {
                    d.add_chips(g.edge_point_by_id(0, offset).unwrap(), coeff);
                }
                d.add_chips(PointLocation::Vertex(1), 1);
                let (m, ds) = normalize_to_model(&g, &[d.clone()], resolution).unwrap();
                prop_assert_eq!(m.genus(), g.genus());
                prop_assert_eq!(ds[0].degree(), d.degree());
                prop_assert_eq!(m.lift(&ds[0]), d);
                prop_assert_eq!(m.scale() % i64::from(resolution), 0);
            }
        }
    }
}
