//! A metric graph bundled with its unit model at a chosen resolution, the
//! pushed canonical divisor, and a rank engine.

use std::sync::Arc;

use crate::error::Result;
use crate::metric::{MetricDivisor, MetricGraph};
use crate::model::{normalize_to_model, ModelDivisor, ModelGraph};
use crate::rank::{is_special, RankEngine, RankResult};
use crate::reduction::{is_equivalent, reduce, Equivalence, ReducedForm};

#[derive(Debug)]
pub struct Curve {
    graph: MetricGraph,
    resolution: u32,
    model: Arc<ModelGraph>,
    canonical: ModelDivisor,
    engine: RankEngine,
}

impl Curve {
    pub fn new(graph: MetricGraph, resolution: u32) -> Result<Self> {
        Ok(Self::with_divisors(graph, &[], resolution)?.0)
    }

    /// Builds the curve on a model fine enough to carry `divisors`, and
    /// returns them pushed onto it.
    pub fn with_divisors(
        graph: MetricGraph,
        divisors: &[MetricDivisor],
        resolution: u32,
    ) -> Result<(Self, Vec<ModelDivisor>)> {
        let k = graph.canonical_divisor();
        let mut all = Vec::with_capacity(divisors.len() + 1);
        all.push(k);
        all.extend_from_slice(divisors);
        let (model, mut pushed) = normalize_to_model(&graph, &all, resolution)?;
        let canonical = pushed.remove(0);
        let model = Arc::new(model);
        let engine = RankEngine::new(Arc::clone(&model));
        Ok((
            Self {
                graph,
                resolution,
                model,
                canonical,
                engine,
            },
            pushed,
        ))
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn model(&self) -> &ModelGraph {
        &self.model
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn genus(&self) -> usize {
        self.graph.genus()
    }

    pub fn base(&self) -> usize {
        self.engine.base()
    }

    pub fn vertex_count(&self) -> usize {
        self.model.vertex_count()
    }

    pub fn canonical(&self) -> &ModelDivisor {
        &self.canonical
    }

    pub fn engine(&self) -> &RankEngine {
        &self.engine
    }

    pub fn push(&self, d: &MetricDivisor) -> Result<ModelDivisor> {
        self.model.push(d)
    }

    pub fn rank(&self, d: &ModelDivisor) -> Result<RankResult> {
        self.engine.rank(d)
    }

    pub fn rank_value(&self, d: &ModelDivisor) -> Result<i64> {
        self.engine.rank_value(d)
    }

    pub fn is_special(&self, d: &ModelDivisor) -> Result<bool> {
        is_special(&self.engine, &self.canonical, d)
    }

    pub fn reduce(&self, d: &ModelDivisor) -> Result<ReducedForm> {
        reduce(&self.model, d, self.base())
    }

    pub fn equivalent(&self, d: &ModelDivisor, e: &ModelDivisor) -> Result<Equivalence> {
        is_equivalent(&self.model, d, e)
    }

    /// Human-readable form of a model divisor in metric coordinates.
    pub fn describe(&self, d: &ModelDivisor) -> String {
        let lifted = self.model.lift(d);
        self.graph.display_divisor(&lifted).to_string()
    }
}
