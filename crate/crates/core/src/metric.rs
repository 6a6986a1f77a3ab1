//! Compact metric graphs with exact rational edge lengths, and divisors on
//! their points.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact rational used for lengths and edge offsets.
pub type Rational = Ratio<i64>;

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub a: usize,
    pub b: usize,
    pub length: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

/// A finite connected multigraph with a positive rational length on every
/// edge. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.vertex_index.contains_key(&name) {
            return Err(Error::Duplicate(name));
        }
        let idx = self.vertices.len();
        self.vertex_index.insert(name.clone(), idx);
        self.vertices.push(name);
        Ok(idx)
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.vertex_index.contains_key(name)
    }

    pub fn has_edge(&self, name: &str) -> bool {
        self.edge_index.contains_key(name)
    }

    pub fn edge(
        &mut self,
        name: impl Into<String>,
        a: &str,
        b: &str,
        length: Rational,
    ) -> Result<usize> {
        let name = name.into();
        if self.edge_index.contains_key(&name) {
            return Err(Error::Duplicate(name));
        }
        if !length.is_positive() {
            return Err(Error::NonPositiveLength(name));
        }
        let a = *self
            .vertex_index
            .get(a)
            .ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
        let b = *self
            .vertex_index
            .get(b)
            .ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
        let idx = self.edges.len();
        self.edge_index.insert(name.clone(), idx);
        self.edges.push(Edge { name, a, b, length });
        Ok(idx)
    }

    pub fn build(self) -> Result<MetricGraph> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let graph = MetricGraph {
            vertices: self.vertices,
            edges: self.edges,
            vertex_index: self.vertex_index,
            edge_index: self.edge_index,
        };
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }
}

impl MetricGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edge_index.get(name).copied()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Number of edge ends at `v`; a loop contributes two.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.a == v) + usize::from(e.b == v))
            .sum()
    }

    /// `K = sum (val(p) - 2) p`. Interior edge points have valence 2 and
    /// never appear.
    pub fn canonical_divisor(&self) -> MetricDivisor {
        let mut k = MetricDivisor::zero();
        for v in 0..self.vertices.len() {
            k.add_chips(PointLocation::Vertex(v), self.valence(v) as i64 - 2);
        }
        k
    }

    pub fn vertex_point(&self, name: &str) -> Result<PointLocation> {
        self.vertex_id(name)
            .map(PointLocation::Vertex)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// The point at distance `offset` from the first stored endpoint of
    /// `edge`. Offsets `0` and `length` resolve to the endpoint vertices.
    pub fn edge_point(&self, edge: &str, offset: Rational) -> Result<PointLocation> {
        let id = self
            .edge_id(edge)
            .ok_or_else(|| Error::UnknownEdge(edge.to_string()))?;
        self.edge_point_by_id(id, offset)
    }

    pub fn edge_point_by_id(&self, id: usize, offset: Rational) -> Result<PointLocation> {
        let e = &self.edges[id];
        if offset.is_negative() || offset > e.length {
            return Err(Error::OffsetOutOfRange {
                edge: e.name.clone(),
                offset: format_rational(&offset),
                length: format_rational(&e.length),
            });
        }
        Ok(if offset.is_zero() {
            PointLocation::Vertex(e.a)
        } else if offset == e.length {
            PointLocation::Vertex(e.b)
        } else {
            PointLocation::Edge { edge: id, offset }
        })
    }

    pub fn contains_point(&self, p: &PointLocation) -> bool {
        match p {
            PointLocation::Vertex(v) => *v < self.vertices.len(),
            PointLocation::Edge { edge, offset } => self
                .edges
                .get(*edge)
                .is_some_and(|e| offset.is_positive() && *offset < e.length),
        }
    }

    pub fn point_name(&self, p: &PointLocation) -> String {
        match p {
            PointLocation::Vertex(v) => self.vertices[*v].clone(),
            PointLocation::Edge { edge, offset } => {
                format!("{}@{}", self.edges[*edge].name, format_rational(offset))
            }
        }
    }

    /// Divisor entries keyed by printable point names, in point order.
    pub fn divisor_entries(&self, d: &MetricDivisor) -> Vec<ChipEntry> {
        d.iter()
            .map(|(p, c)| ChipEntry {
                point: self.point_name(p),
                coeff: c,
            })
            .collect()
    }

    pub fn display_divisor<'a>(&'a self, d: &'a MetricDivisor) -> DivisorDisplay<'a> {
        DivisorDisplay { graph: self, divisor: d }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChipEntry {
    pub point: String,
    pub coeff: i64,
}

pub struct DivisorDisplay<'a> {
    graph: &'a MetricGraph,
    divisor: &'a MetricDivisor,
}

impl fmt::Display for DivisorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisor.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.divisor.iter().enumerate() {
            let name = self.graph.point_name(p);
            match (i, c) {
                (0, 1) => write!(f, "{name}")?,
                (0, -1) => write!(f, "-{name}")?,
                (0, c) => write!(f, "{c}*{name}")?,
                (_, 1) => write!(f, " + {name}")?,
                (_, -1) => write!(f, " - {name}")?,
                (_, c) if c < 0 => write!(f, " - {}*{name}", -c)?,
                (_, c) => write!(f, " + {c}*{name}")?,
            }
        }
        Ok(())
    }
}

/// A point of a metric graph: a vertex, or a strictly interior point of an
/// edge measured from the edge's first endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointLocation {
    Vertex(usize),
    Edge { edge: usize, offset: Rational },
}

/// Finitely supported integer combination of points. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MetricDivisor {
    entries: BTreeMap<PointLocation, i64>,
}

impl MetricDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_chips(chips: impl IntoIterator<Item = (PointLocation, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, c) in chips {
            d.add_chips(p, c);
        }
        d
    }

    pub fn add_chips(&mut self, p: PointLocation, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.entries.entry(p).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.entries.retain(|_, c| *c != 0);
        }
    }

    pub fn coefficient(&self, p: &PointLocation) -> i64 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PointLocation, i64)> + '_ {
        self.entries.iter().map(|(p, c)| (p, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn support(&self) -> BTreeSet<PointLocation> {
        self.entries.keys().cloned().collect()
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|&c| c >= 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_chips(self.entries.iter().map(|(p, c)| (p.clone(), c * k)))
    }
}

impl Add for &MetricDivisor {
    type Output = MetricDivisor;
    fn add(self, rhs: &MetricDivisor) -> MetricDivisor {
        let mut out = self.clone();
        for (p, c) in rhs.iter() {
            out.add_chips(p.clone(), c);
        }
        out
    }
}

impl Sub for &MetricDivisor {
    type Output = MetricDivisor;
    fn sub(self, rhs: &MetricDivisor) -> MetricDivisor {
        self + &(-rhs)
    }
}

impl Neg for &MetricDivisor {
    type Output = MetricDivisor;
    fn neg(self) -> MetricDivisor {
        self.scaled(-1)
    }
}
