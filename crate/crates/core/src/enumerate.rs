//! Effective divisors of a fixed degree as multisets of model vertices.

use rand::seq::index;
use rand::Rng;

use crate::model::ModelDivisor;

/// Number of multisets of size `r` drawn from `n` items, saturating.
pub fn multiset_count(n: usize, r: usize) -> u128 {
    if n == 0 {
        return u128::from(r == 0);
    }
    // C(n + r - 1, r), built incrementally so every partial is an integer
    let mut acc: u128 = 1;
    for i in 1..=r as u128 {
        let num = (n as u128 - 1) + i;
        acc = match acc.checked_mul(num) {
            Some(x) => x / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// Nondecreasing index vectors of length `r` over `0..n`, in lexicographic
/// order.
#[derive(Debug, Clone)]
pub struct Multisets {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Multisets {
    pub fn new(n: usize, r: usize) -> Self {
        let next = (n > 0 || r == 0).then(|| vec![0; r]);
        Self { n, next }
    }
}

impl Iterator for Multisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            if succ[i] + 1 < self.n {
                let v = succ[i] + 1;
                succ[i..].iter_mut().for_each(|x| *x = v);
                self.next = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

pub fn multiset_divisor(n: usize, points: &[usize]) -> ModelDivisor {
    let mut d = ModelDivisor::zero(n);
    for &p in points {
        d.0[p] += 1;
    }
    d
}

/// Uniformly random multiset of size `r` over `0..n`, via stars and bars.
pub fn sample_multiset<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> Vec<usize> {
    assert!(n > 0 || r == 0);
    if r == 0 {
        return Vec::new();
    }
    let mut bars = index::sample(rng, n + r - 1, r).into_vec();
    bars.sort_unstable();
    bars.into_iter().enumerate().map(|(i, b)| b - i).collect()
}
