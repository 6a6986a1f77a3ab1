//! Executable checks of Riemann–Roch, Clifford's inequality, and the
//! hyperelliptic equality cases on concrete curves.
//!
//! Every check works on a [`Curve`], i.e. on the unit model of a metric graph
//! at a fixed resolution. Statements quantified over all divisors are checked
//! over divisors supported on model vertices; a negative hyperellipticity
//! verdict only means no g²₁ was found at that resolution.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::Curve;
use crate::enumerate::{multiset_count, multiset_divisor, sample_multiset, Multisets};
use crate::error::{Error, Result};
use crate::fixtures::{generate_fixture, Family, FixtureSpec};
use crate::metric::ChipEntry;
use crate::model::ModelDivisor;
use crate::rank::RankResult;
use crate::reduction::ReducedForm;

/// Degrees whose effective-divisor population is at most this large are
/// scanned exhaustively; larger ones are sampled.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

fn require_genus(curve: &Curve, min: usize, max: usize, what: &str) -> Result<()> {
    let g = curve.genus();
    if g < min || g > max {
        return Err(Error::Scope {
            genus: g,
            reason: what.to_string(),
        });
    }
    Ok(())
}

fn require_effective(d: &ModelDivisor, what: &str) -> Result<()> {
    if !d.is_effective() {
        return Err(Error::Precondition(format!("{what} must be effective")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiemannRochCheck {
    pub degree: i64,
    pub genus: usize,
    pub rank: i64,
    pub residual_rank: i64,
    pub holds: bool,
}

/// Evaluates `r(D) - r(K - D) = deg D - g + 1`.
pub fn check_riemann_roch(curve: &Curve, d: &ModelDivisor) -> Result<RiemannRochCheck> {
    let rank = curve.rank_value(d)?;
    let residual_rank = curve.rank_value(&(curve.canonical() - d))?;
    let g = curve.genus() as i64;
    Ok(RiemannRochCheck {
        degree: d.degree(),
        genus: curve.genus(),
        rank,
        residual_rank,
        holds: rank - residual_rank == d.degree() - g + 1,
    })
}

/// `r(D) + r(E) <= r(D + E)` for effective `D`, `E`.
pub fn check_subadditivity(curve: &Curve, d: &ModelDivisor, e: &ModelDivisor) -> Result<bool> {
    require_effective(d, "D")?;
    require_effective(e, "E")?;
    Ok(curve.rank_value(d)? + curve.rank_value(e)? <= curve.rank_value(&(d + e))?)
}

/// For effective `D` of degree `2g - 2` with `r(D) >= g - 1`: `D ~ K` and
/// `r(D) = g - 1`. Divisors outside the hypothesis pass vacuously.
pub fn check_prop_degree_2g2(curve: &Curve, d: &ModelDivisor) -> Result<bool> {
    require_genus(curve, 2, usize::MAX, "needs genus at least 2")?;
    require_effective(d, "D")?;
    let g = curve.genus() as i64;
    if d.degree() != 2 * g - 2 {
        return Ok(true);
    }
    let rank = curve.rank_value(d)?;
    if rank < g - 1 {
        return Ok(true);
    }
    Ok(rank == g - 1 && curve.equivalent(d, curve.canonical())?.equivalent)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropScan {
    pub examined: u64,
    /// Classes of degree `2g - 2` with rank at least `g - 1`.
    pub qualifying: Vec<ModelDivisor>,
    pub holds: bool,
}

/// Runs [`check_prop_degree_2g2`] on every effective divisor of degree
/// `2g - 2` on the model.
pub fn scan_prop_degree_2g2(curve: &Curve, budget: u64) -> Result<PropScan> {
    require_genus(curve, 2, usize::MAX, "needs genus at least 2")?;
    let n = curve.vertex_count();
    let degree = 2 * curve.genus() - 2;
    if multiset_count(n, degree) > u128::from(budget) {
        return Err(Error::Budget(budget));
    }
    let divisors: Vec<ModelDivisor> = Multisets::new(n, degree)
        .map(|p| multiset_divisor(n, &p))
        .collect();
    let g = curve.genus() as i64;
    let results = divisors
        .par_iter()
        .map(|d| -> Result<_> {
            let qualifies = curve.rank_value(d)? >= g - 1;
            Ok((qualifies, check_prop_degree_2g2(curve, d)?, curve.reduce(d)?.divisor))
        })
        .collect::<Result<Vec<_>>>()?;
    let qualifying: BTreeSet<ModelDivisor> = results
        .iter()
        .filter(|r| r.0)
        .map(|r| r.2.clone())
        .collect();
    Ok(PropScan {
        examined: divisors.len() as u64,
        qualifying: qualifying.into_iter().collect(),
        holds: results.iter().all(|r| r.1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct G12Certificate {
    pub resolution: u32,
    pub representative: ModelDivisor,
    pub all_found: Vec<ModelDivisor>,
    /// Reduced forms of the classes among `all_found`.
    pub classes: Vec<ModelDivisor>,
    pub unique_class: bool,
}

/// Scans every effective degree-2 divisor on the curve's model for rank 1.
pub fn find_g12(curve: &Curve) -> Result<Option<G12Certificate>> {
    require_genus(curve, 2, usize::MAX, "a g2^1 search needs genus at least 2")?;
    let n = curve.vertex_count();
    let candidates: Vec<ModelDivisor> = Multisets::new(n, 2)
        .map(|p| multiset_divisor(n, &p))
        .collect();
    let hits = candidates
        .par_iter()
        .map(|d| -> Result<Option<(ModelDivisor, ModelDivisor)>> {
            if curve.rank_value(d)? == 1 {
                Ok(Some((d.clone(), curve.reduce(d)?.divisor)))
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let hits: Vec<(ModelDivisor, ModelDivisor)> = hits.into_iter().flatten().collect();
    let Some((representative, _)) = hits.first().cloned() else {
        return Ok(None);
    };
    let classes: BTreeSet<ModelDivisor> = hits.iter().map(|h| h.1.clone()).collect();
    Ok(Some(G12Certificate {
        resolution: curve.resolution(),
        representative,
        all_found: hits.into_iter().map(|h| h.0).collect(),
        unique_class: classes.len() == 1,
        classes: classes.into_iter().collect(),
    }))
}

/// `K ~ (g - 1) G` for the g²₁ representative `G`.
pub fn check_canonical_decomposition(curve: &Curve, g12: Option<&G12Certificate>) -> Result<bool> {
    let g12 = g12.ok_or_else(|| {
        Error::Precondition("canonical decomposition needs a g2^1".into())
    })?;
    let multiple = g12.representative.scaled(curve.genus() as i64 - 1);
    Ok(curve.equivalent(curve.canonical(), &multiple)?.equivalent)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanConfig {
    /// Highest degree scanned; `2g - 2` when absent.
    pub degree_cap: Option<usize>,
    /// Samples drawn for a degree too large to enumerate.
    pub sample_budget: u64,
    pub seed: u64,
    /// Hard cap on the total number of divisors examined.
    pub max_examined: Option<u64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            degree_cap: None,
            sample_budget: 10_000,
            seed: 0,
            max_examined: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCoverage {
    pub degree: usize,
    /// Number of effective divisors of this degree on the model, saturating.
    pub population: u64,
    pub examined: u64,
    pub exhaustive: bool,
    /// The global examination budget ran out inside this degree.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliffordRecord {
    /// Reduced form of the class.
    pub class: ModelDivisor,
    /// First scanned effective divisor in the class.
    pub representative: ModelDivisor,
    pub degree: i64,
    pub rank: i64,
    pub residual_rank: i64,
    pub special: bool,
    pub equality: bool,
    pub multiple_of_g12: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperellipticCheck {
    /// Every equality case of degree `2r` is equivalent to `r G`.
    pub equality_cases_are_multiples: bool,
    /// `r(r G) = r` for `0 <= r <= g - 1` within the scanned degrees.
    pub multiples_attain_equality: bool,
    /// The equality classes are exactly the classes of `r G`.
    pub equality_classes_match: bool,
    pub canonical_decomposition: bool,
}

impl HyperellipticCheck {
    pub fn holds(&self) -> bool {
        self.equality_cases_are_multiples
            && self.multiples_attain_equality
            && self.equality_classes_match
            && self.canonical_decomposition
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliffordScan {
    pub genus: usize,
    pub resolution: u32,
    pub base: usize,
    pub coverage: Vec<DegreeCoverage>,
    pub records: Vec<CliffordRecord>,
    /// Special classes with `r(D) > deg D / 2`.
    pub violations: Vec<ModelDivisor>,
    /// Classes where `r(D) - r(K - D) != deg D - g + 1`.
    pub riemann_roch_failures: Vec<ModelDivisor>,
    pub g12: Option<G12Certificate>,
    pub hyperelliptic: Option<HyperellipticCheck>,
    pub complete: bool,
}

impl CliffordScan {
    pub fn equality_classes(&self) -> Vec<&CliffordRecord> {
        self.records.iter().filter(|r| r.equality).collect()
    }

    /// Equality cases with `0 < deg D < 2g - 2`.
    pub fn interior_equality(&self) -> Vec<&CliffordRecord> {
        let top = 2 * self.genus as i64 - 2;
        self.records
            .iter()
            .filter(|r| r.equality && r.degree > 0 && r.degree < top)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.riemann_roch_failures.is_empty()
            && self.hyperelliptic.as_ref().is_none_or(HyperellipticCheck::holds)
    }
}

fn degree_seed(seed: u64, degree: usize) -> u64 {
    seed ^ (degree as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Scans effective divisors of degree `0..=2g-2` (or the cap), checks the
/// Clifford inequality on every special class and, when a g²₁ exists on the
/// model, that the equality classes are exactly its multiples.
///
/// Genus 0 and 1 are accepted; there the hyperelliptic part is skipped.
pub fn clifford_scan(curve: &Curve, config: &ScanConfig) -> Result<CliffordScan> {
    let n = curve.vertex_count();
    let g = curve.genus();
    let top = (2 * g).saturating_sub(2);
    let max_degree = if g == 0 {
        None
    } else {
        Some(config.degree_cap.map_or(top, |c| c.min(top)))
    };

    let mut remaining = config.max_examined;
    let mut coverage = Vec::new();
    let mut scanned: Vec<ModelDivisor> = Vec::new();
    // genus 0 has no degrees to scan
    let degrees = match max_degree {
        Some(m) => 0..=m,
        None => 1..=0,
    };
    for degree in degrees {
        let population = multiset_count(n, degree);
        let exhaustive = population <= EXHAUSTIVE_LIMIT;
        let wanted = if exhaustive { population as u64 } else { config.sample_budget };
        let allowed = remaining.map_or(wanted, |r| r.min(wanted));
        let divisors: Vec<ModelDivisor> = if exhaustive {
            Multisets::new(n, degree)
                .take(allowed as usize)
                .map(|p| multiset_divisor(n, &p))
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(degree_seed(config.seed, degree));
            (0..allowed)
                .map(|_| multiset_divisor(n, &sample_multiset(&mut rng, n, degree)))
                .collect()
        };
        if let Some(r) = remaining.as_mut() {
            *r -= allowed;
        }
        coverage.push(DegreeCoverage {
            degree,
            population: u64::try_from(population).unwrap_or(u64::MAX),
            examined: allowed,
            exhaustive,
            truncated: allowed < wanted,
        });
        scanned.extend(divisors);
    }

    // one record per class, keeping the first representative scanned
    let keys = scanned
        .par_iter()
        .map(|d| curve.reduce(d).map(|r| r.divisor))
        .collect::<Result<Vec<_>>>()?;
    let mut classes: BTreeMap<ModelDivisor, ModelDivisor> = BTreeMap::new();
    for (d, key) in scanned.into_iter().zip(keys) {
        classes.entry(key).or_insert(d);
    }
    let g12 = if g >= 2 { find_g12(curve)? } else { None };
    let g12_classes: Option<Vec<ModelDivisor>> = g12
        .as_ref()
        .map(|cert| {
            (0..g as i64)
                .map(|r| curve.reduce(&cert.representative.scaled(r)).map(|x| x.divisor))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;

    let mut records = classes
        .into_par_iter()
        .map(|(class, representative)| -> Result<CliffordRecord> {
            let degree = class.degree();
            let rank = curve.rank_value(&class)?;
            let residual_rank = curve.rank_value(&(curve.canonical() - &class))?;
            let special = residual_rank >= 0;
            let equality = special && 2 * rank == degree;
            let multiple_of_g12 = match (&g12_classes, equality) {
                (Some(multiples), true) if degree % 2 == 0 => {
                    Some(multiples.get(degree as usize / 2) == Some(&class))
                }
                (Some(_), true) => Some(false),
                _ => None,
            };
            Ok(CliffordRecord {
                class,
                representative,
                degree,
                rank,
                residual_rank,
                special,
                equality,
                multiple_of_g12,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| (a.degree, &a.class).cmp(&(b.degree, &b.class)));

    let violations = records
        .iter()
        .filter(|r| r.special && 2 * r.rank > r.degree)
        .map(|r| r.class.clone())
        .collect();
    let riemann_roch_failures = records
        .iter()
        .filter(|r| r.rank - r.residual_rank != r.degree - g as i64 + 1)
        .map(|r| r.class.clone())
        .collect();

    let hyperelliptic = match (&g12, &g12_classes) {
        (Some(cert), Some(multiples)) => {
            let max_degree = max_degree.unwrap_or(0) as i64;
            let in_range: Vec<(i64, &ModelDivisor)> = multiples
                .iter()
                .enumerate()
                .map(|(r, c)| (r as i64, c))
                .filter(|(r, _)| 2 * r <= max_degree)
                .collect();
            let mut multiples_attain_equality = true;
            for (r, _) in &in_range {
                let d = cert.representative.scaled(*r);
                multiples_attain_equality &=
                    curve.rank_value(&d)? == *r && curve.is_special(&d)?;
            }
            let found: BTreeSet<&ModelDivisor> =
                records.iter().filter(|r| r.equality).map(|r| &r.class).collect();
            let expected: BTreeSet<&ModelDivisor> = in_range.iter().map(|(_, c)| *c).collect();
            Some(HyperellipticCheck {
                equality_cases_are_multiples: records
                    .iter()
                    .all(|r| r.multiple_of_g12 != Some(false)),
                multiples_attain_equality,
                equality_classes_match: found == expected,
                canonical_decomposition: check_canonical_decomposition(curve, Some(cert))?,
            })
        }
        _ => None,
    };

    let complete = coverage.iter().all(|c| !c.truncated);
    Ok(CliffordScan {
        genus: g,
        resolution: curve.resolution(),
        base: curve.base(),
        coverage,
        records,
        violations,
        riemann_roch_failures,
        g12,
        hyperelliptic,
        complete,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowGenusCheck {
    pub genus: usize,
    pub interior_cases: Vec<ModelDivisor>,
    pub g12_found: bool,
    /// Genus 2: `K` itself has degree 2 and rank 1.
    pub canonical_is_g12: Option<bool>,
    /// Genus 4, degree 4 cases: `deg(K - D) = 2` and `r(K - D) = 1`.
    pub residual_checks: bool,
    pub holds: bool,
}

/// For genus 2..=4: an equality case with `0 < deg D < 2g - 2` forces a g²₁.
pub fn check_low_genus_implication(curve: &Curve, scan: &CliffordScan) -> Result<LowGenusCheck> {
    require_genus(curve, 2, 4, "the low-genus implication covers genus 2 to 4")?;
    let g = curve.genus() as i64;
    let interior: Vec<&CliffordRecord> = scan.interior_equality();
    let g12_found = scan.g12.is_some();
    let canonical_is_g12 = if g == 2 {
        let k = curve.canonical();
        Some(k.degree() == 2 && curve.rank_value(k)? == 1)
    } else {
        None
    };
    let mut residual_checks = true;
    for record in &interior {
        if g == 4 && record.degree == 4 {
            let residual = curve.canonical() - &record.class;
            residual_checks &= residual.degree() == 2 && curve.rank_value(&residual)? == 1;
        }
    }
    let holds = (interior.is_empty() || g12_found)
        && canonical_is_g12.unwrap_or(true)
        && residual_checks;
    Ok(LowGenusCheck {
        genus: curve.genus(),
        interior_cases: interior.iter().map(|r| r.class.clone()).collect(),
        g12_found,
        canonical_is_g12,
        residual_checks,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuntConfig {
    pub generators: Vec<FixtureSpec>,
    /// Resolution of the equality scan.
    pub resolution: u32,
    /// Resolution of the g²₁ filter.
    pub g12_resolution: u32,
    pub degree_cap: Option<usize>,
    pub sample_budget: u64,
    /// Total divisors examined across all graphs.
    pub budget: u64,
    pub seed: u64,
}

impl HuntConfig {
    /// Random multigraphs of genus 6 on six vertices, seeded from `seed`.
    pub fn default_generators(seed: u64, count: usize) -> Vec<FixtureSpec> {
        (0..count as u64)
            .map(|i| {
                FixtureSpec::unit(Family::Random {
                    vertices: 6,
                    edges: 11,
                    seed: seed.wrapping_add(i),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub divisor: Vec<ChipEntry>,
    pub reduced: ReducedForm,
    pub degree: i64,
    pub rank: RankResult,
    /// Rank data for `K - D`, certifying speciality.
    pub residual: RankResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HuntEntry {
    pub fixture: String,
    pub genus: usize,
    pub g12_resolution: u32,
    /// A g²₁ was found at `g12_resolution`; such graphs are not candidates.
    pub hyperelliptic: bool,
    pub g12: Option<G12Certificate>,
    pub coverage: Vec<DegreeCoverage>,
    pub equality_classes: usize,
    pub clifford_violations: usize,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HuntReport {
    pub entries: Vec<HuntEntry>,
    pub examined: u64,
    pub complete: bool,
}

impl HuntReport {
    pub fn candidate_count(&self) -> usize {
        self.entries.iter().map(|e| e.candidates.len()).sum()
    }
}

/// Looks for genus >= 5 graphs without a g²₁ (at the filter resolution)
/// that nevertheless carry an interior Clifford equality case. Anything
/// found is reported as a candidate with certificates; nothing here proves
/// non-hyperellipticity at every resolution.
pub fn counterexample_search(config: &HuntConfig) -> Result<HuntReport> {
    let mut entries = Vec::new();
    let mut remaining = config.budget;
    let mut complete = true;
    for (i, spec) in config.generators.iter().enumerate() {
        if remaining == 0 {
            complete = false;
            break;
        }
        let graph = generate_fixture(spec)?;
        if graph.genus() < 5 {
            return Err(Error::Scope {
                genus: graph.genus(),
                reason: format!("hunt generator `{spec}` must have genus at least 5"),
            });
        }
        let filter = Curve::new(graph.clone(), config.g12_resolution)?;
        let g12 = find_g12(&filter)?;
        let mut entry = HuntEntry {
            fixture: spec.to_string(),
            genus: graph.genus(),
            g12_resolution: config.g12_resolution,
            hyperelliptic: g12.is_some(),
            g12,
            coverage: Vec::new(),
            equality_classes: 0,
            clifford_violations: 0,
            candidates: Vec::new(),
        };
        if entry.hyperelliptic {
            entries.push(entry);
            continue;
        }
        let curve = Curve::new(graph, config.resolution)?;
        let scan = clifford_scan(
            &curve,
            &ScanConfig {
                degree_cap: config.degree_cap,
                sample_budget: config.sample_budget,
                seed: config.seed.wrapping_add(i as u64),
                max_examined: Some(remaining),
            },
        )?;
        let examined: u64 = scan.coverage.iter().map(|c| c.examined).sum();
        remaining -= examined;
        complete &= scan.complete;
        entry.coverage = scan.coverage.clone();
        entry.equality_classes = scan.equality_classes().len();
        entry.clifford_violations = scan.violations.len();
        for record in scan.interior_equality() {
            entry.candidates.push(Candidate {
                divisor: curve.graph().divisor_entries(&curve.model().lift(&record.representative)),
                reduced: curve.reduce(&record.representative)?,
                degree: record.degree,
                rank: curve.rank(&record.class)?,
                residual: curve.rank(&(curve.canonical() - &record.class))?,
            });
        }
        entries.push(entry);
    }
    Ok(HuntReport {
        entries,
        examined: config.budget - remaining,
        complete,
    })
}
