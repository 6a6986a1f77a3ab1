//! Chip-firing on model graphs: Dhar burning, q-reduced divisors, linear
//! equivalence with firing-script certificates, and piecewise-linear
//! witnesses for principal divisors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelDivisor, ModelGraph};

/// Net number of times each model vertex fires. Applying a script `s`
/// sends `D` to `D - L s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FiringScript(pub Vec<i64>);

impl FiringScript {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Shifts the script so its smallest entry is zero. Constant scripts
    /// act trivially, so this does not change the action.
    pub fn normalized(mut self) -> Self {
        if let Some(&min) = self.0.iter().min() {
            self.0.iter_mut().for_each(|s| *s -= min);
        }
        self
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// `D - L s`.
    pub fn apply(&self, model: &ModelGraph, d: &ModelDivisor) -> ModelDivisor {
        let ls = model.apply_laplacian(&self.0);
        ModelDivisor(d.iter().zip(ls).map(|(a, b)| a - b).collect())
    }
}

/// The q-reduced representative of a divisor class together with the
/// script that takes the input to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedForm {
    pub base: usize,
    pub divisor: ModelDivisor,
    pub script: FiringScript,
}

impl ReducedForm {
    /// A class is winnable (equivalent to an effective divisor) iff its
    /// reduced form is nonnegative at the base point.
    pub fn is_winnable(&self) -> bool {
        self.divisor[self.base] >= 0
    }
}

fn check_base(model: &ModelGraph, q: usize) -> Result<()> {
    if q >= model.vertex_count() {
        return Err(Error::UnknownVertex(q.to_string()));
    }
    Ok(())
}

/// Runs the burning process from `q`. Returns a mask of unburnt vertices,
/// i.e. the largest subset of `V \ {q}` that can fire simultaneously without
/// any member going negative.
fn burn(model: &ModelGraph, d: &[i64], q: usize) -> Vec<bool> {
    let n = model.vertex_count();
    let mut burnt = vec![false; n];
    let mut hits = vec![0i64; n];
    let mut stack = vec![q];
    burnt[q] = true;
    while let Some(u) = stack.pop() {
        for &(w, m) in model.neighbors(u) {
            if burnt[w] {
                continue;
            }
            hits[w] += m;
            if hits[w] > d[w] {
                burnt[w] = true;
                stack.push(w);
            }
        }
    }
    burnt.into_iter().map(|b| !b).collect()
}

/// Vertices of `V \ {q}` left unburnt by Dhar's algorithm. Empty iff `d`
/// is q-reduced.
pub fn dhar_unburnt(model: &ModelGraph, d: &ModelDivisor, q: usize) -> Result<Vec<usize>> {
    model.check(d)?;
    check_base(model, q)?;
    if let Some(v) = (0..d.len()).find(|&v| v != q && d[v] < 0) {
        return Err(Error::Precondition(format!(
            "divisor is negative at vertex {v}, away from the base point"
        )));
    }
    let unburnt = burn(model, d.as_slice(), q);
    Ok((0..unburnt.len()).filter(|&v| unburnt[v]).collect())
}

fn fire_set(model: &ModelGraph, d: &mut [i64], script: &mut [i64], in_set: &[bool], times: i64) {
    for v in 0..d.len() {
        if !in_set[v] {
            continue;
        }
        script[v] += times;
        for &(w, m) in model.neighbors(v) {
            if !in_set[w] {
                d[v] -= m * times;
                d[w] += m * times;
            }
        }
    }
}

/// Reduces `d` in place to its q-reduced form, accumulating the firing
/// script in `script`.
pub(crate) fn reduce_in_place(model: &ModelGraph, d: &mut [i64], script: &mut [i64], q: usize) {
    let dist: Vec<usize> = model
        .distances_from(q)
        .into_iter()
        .map(|x| x.expect("model graphs are connected"))
        .collect();
    let max_dist = dist.iter().copied().max().unwrap_or(0);

    // Make everything off q nonnegative, outermost BFS layer first. The
    // vertices closer than layer k fire together; that feeds every layer-k
    // vertex and leaves the layers beyond k untouched.
    for k in (1..=max_dist).rev() {
        let mut times = 0;
        for v in 0..d.len() {
            if dist[v] != k || d[v] >= 0 {
                continue;
            }
            let inward: i64 = model
                .neighbors(v)
                .iter()
                .filter(|&&(w, _)| dist[w] + 1 == k)
                .map(|&(_, m)| m)
                .sum();
            times = times.max((-d[v] + inward - 1) / inward);
        }
        if times > 0 {
            let inner: Vec<bool> = dist.iter().map(|&x| x < k).collect();
            fire_set(model, d, script, &inner, times);
        }
    }

    loop {
        let unburnt = burn(model, d, q);
        let mut times = i64::MAX;
        for v in 0..d.len() {
            if !unburnt[v] {
                continue;
            }
            let out: i64 = model
                .neighbors(v)
                .iter()
                .filter(|&&(w, _)| !unburnt[w])
                .map(|&(_, m)| m)
                .sum();
            if out > 0 {
                times = times.min(d[v] / out);
            }
        }
        if times == i64::MAX {
            // no unburnt vertex (a nonempty unburnt set always has an edge out)
            break;
        }
        debug_assert!(times >= 1);
        fire_set(model, d, script, &unburnt, times);
    }
}

/// The q-reduced divisor linearly equivalent to `d`, with certificate.
pub fn reduce(model: &ModelGraph, d: &ModelDivisor, q: usize) -> Result<ReducedForm> {
    model.check(d)?;
    check_base(model, q)?;
    let mut coeffs = d.0.clone();
    let mut script = vec![0; coeffs.len()];
    reduce_in_place(model, &mut coeffs, &mut script, q);
    Ok(ReducedForm {
        base: q,
        divisor: ModelDivisor(coeffs),
        script: FiringScript(script).normalized(),
    })
}

/// Reduced divisor only, skipping the script bookkeeping.
pub(crate) fn reduced_divisor(model: &ModelGraph, mut d: Vec<i64>, q: usize) -> Vec<i64> {
    let mut script = vec![0; d.len()];
    reduce_in_place(model, &mut d, &mut script, q);
    d
}

pub fn is_winnable(model: &ModelGraph, d: &ModelDivisor) -> Result<bool> {
    Ok(reduce(model, d, model.default_base())?.is_winnable())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    pub base: usize,
    /// Script `s` with `e = d - L s` when the divisors are equivalent.
    pub certificate: Option<FiringScript>,
}

pub fn is_equivalent(model: &ModelGraph, d: &ModelDivisor, e: &ModelDivisor) -> Result<Equivalence> {
    is_equivalent_at(model, d, e, model.default_base())
}

pub fn is_equivalent_at(
    model: &ModelGraph,
    d: &ModelDivisor,
    e: &ModelDivisor,
    q: usize,
) -> Result<Equivalence> {
    let rd = reduce(model, d, q)?;
    let re = reduce(model, e, q)?;
    let equivalent = rd.divisor == re.divisor;
    let certificate = equivalent.then(|| {
        FiringScript(rd.script.0.iter().zip(&re.script.0).map(|(a, b)| a - b).collect())
            .normalized()
    });
    Ok(Equivalence {
        equivalent,
        base: q,
        certificate,
    })
}

/// Continuous piecewise-linear function on the model, stored by its values
/// at model vertices and linear with integer slope on each unit edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PLFunction(pub Vec<i64>);

impl PLFunction {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    /// Slope along every model edge `(a, b)`, oriented from `a` to `b`.
    pub fn slopes(&self, model: &ModelGraph) -> Vec<i64> {
        model.edges().iter().map(|&(a, b)| self.0[b] - self.0[a]).collect()
    }

    /// Sum of outgoing slopes at `v`.
    pub fn order_at(&self, model: &ModelGraph, v: usize) -> i64 {
        model
            .neighbors(v)
            .iter()
            .map(|&(w, m)| m * (self.0[w] - self.0[v]))
            .sum()
    }
}

/// The rational function whose divisor is `-L s`, so that it witnesses
/// `D ~ D - L s`.
pub fn script_to_witness(script: &FiringScript, model: &ModelGraph) -> PLFunction {
    debug_assert_eq!(script.0.len(), model.vertex_count());
    PLFunction(script.0.clone())
}

/// Principal divisor `(f)`: the order of `f` at every model vertex.
/// Interior points of unit edges have order zero.
pub fn divisor_of(f: &PLFunction, model: &ModelGraph) -> ModelDivisor {
    ModelDivisor((0..model.vertex_count()).map(|v| f.order_at(model, v)).collect())
}
