//! Baker–Norine rank of divisor classes on a model graph.
//!
//! [`RankEngine::rank`] uses the recursion
//! `r(D) = -1` if `D` is unwinnable, else `1 + min_v r(D - v)`, memoized on
//! q-reduced forms. [`rank_oracle`] enumerates adversary divisors directly
//! and shares nothing with the recursion beyond the reduction routine.

use std::sync::Arc;

use dashmap::DashMap;
use serde::Serialize;

use crate::enumerate::{multiset_divisor, Multisets};
use crate::error::{Error, Result};
use crate::model::{ModelDivisor, ModelGraph};
use crate::reduction::{reduce, reduced_divisor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    Recursive,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub rank: i64,
    /// Effective divisor `E` of degree `rank + 1` with `|D - E|` empty.
    /// Absent when `D` itself is unwinnable.
    pub obstruction: Option<ModelDivisor>,
    pub method: RankMethod,
}

#[derive(Debug, Clone)]
struct ClassRank {
    rank: i64,
    obstruction: ModelDivisor,
}

/// Memoized rank computation on one model. The memo is keyed by q-reduced
/// divisors and may be shared across threads.
#[derive(Debug)]
pub struct RankEngine {
    model: Arc<ModelGraph>,
    base: usize,
    memo: DashMap<Vec<i64>, ClassRank>,
}

impl RankEngine {
    pub fn new(model: Arc<ModelGraph>) -> Self {
        let base = model.default_base();
        Self {
            model,
            base,
            memo: DashMap::new(),
        }
    }

    pub fn model(&self) -> &ModelGraph {
        &self.model
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Number of memoized winnable classes.
    pub fn cached_classes(&self) -> usize {
        self.memo.len()
    }

    pub fn rank(&self, d: &ModelDivisor) -> Result<RankResult> {
        self.model.check(d)?;
        let n = self.model.vertex_count();
        if d.degree() < 0 {
            return Ok(RankResult {
                rank: -1,
                obstruction: None,
                method: RankMethod::Recursive,
            });
        }
        let key = reduced_divisor(&self.model, d.0.clone(), self.base);
        let class = self.class_rank(key, n);
        Ok(RankResult {
            rank: class.rank,
            obstruction: (class.rank >= 0).then_some(class.obstruction),
            method: RankMethod::Recursive,
        })
    }

    /// Shorthand for `rank(d)?.rank`.
    pub fn rank_value(&self, d: &ModelDivisor) -> Result<i64> {
        Ok(self.rank(d)?.rank)
    }

    fn class_rank(&self, key: Vec<i64>, n: usize) -> ClassRank {
        let q = self.base;
        if key[q] < 0 {
            return ClassRank {
                rank: -1,
                obstruction: ModelDivisor::zero(n),
            };
        }
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut best: Option<(ClassRank, usize)> = None;
        for v in 0..n {
            let mut child = key.clone();
            child[v] -= 1;
            let child = if v == q {
                // removing a chip at q keeps a q-reduced divisor reduced
                child
            } else {
                reduced_divisor(&self.model, child, q)
            };
            let sub = self.class_rank(child, n);
            if best.as_ref().is_none_or(|(b, _)| sub.rank < b.rank) {
                best = Some((sub, v));
            }
            if best.as_ref().is_some_and(|(b, _)| b.rank == -1) {
                break;
            }
        }
        let (sub, v) = best.expect("model has at least one vertex");
        let mut obstruction = sub.obstruction;
        obstruction.0[v] += 1;
        let class = ClassRank {
            rank: sub.rank + 1,
            obstruction,
        };
        self.memo.entry(key).or_insert(class).clone()
    }
}

/// Rank by literal enumeration: for `r = 1, 2, ...` test every effective
/// `E` of degree `r` on model vertices, in lexicographic order of the sorted
/// vertex index vector. `budget` caps the number of adversaries examined.
pub fn rank_oracle(model: &ModelGraph, d: &ModelDivisor, budget: u64) -> Result<RankResult> {
    model.check(d)?;
    let q = model.default_base();
    let n = model.vertex_count();
    if !reduce(model, d, q)?.is_winnable() {
        return Ok(RankResult {
            rank: -1,
            obstruction: None,
            method: RankMethod::BruteForce,
        });
    }
    let mut examined = 0u64;
    for r in 1.. {
        for points in Multisets::new(n, r) {
            examined += 1;
            if examined > budget {
                return Err(Error::Budget(budget));
            }
            let e = multiset_divisor(n, &points);
            if !reduce(model, &(d - &e), q)?.is_winnable() {
                return Ok(RankResult {
                    rank: r as i64 - 1,
                    obstruction: Some(e),
                    method: RankMethod::BruteForce,
                });
            }
        }
    }
    unreachable!("an adversary of degree deg(D) + 1 always wins")
}

/// Effective `d` is special when `K - d` is winnable.
pub fn is_special(engine: &RankEngine, canonical: &ModelDivisor, d: &ModelDivisor) -> Result<bool> {
    if !d.is_effective() {
        return Err(Error::Precondition(
            "special divisors are defined for effective divisors only".into(),
        ));
    }
    Ok(engine.rank(&(canonical - d))?.rank >= 0)
}
