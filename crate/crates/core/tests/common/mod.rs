#![allow(dead_code)]

use num_rational::Ratio;
use num_traits::{One, Zero};
use tropdiv::enumerate::{multiset_divisor, Multisets};
use tropdiv::fixtures::{generate_fixture, FixtureSpec};
use tropdiv::{Curve, ModelDivisor, ModelGraph};

pub const FIXTURES: &[&str] = &[
    "theta", "dumbbell", "flower:3", "flower:4", "flower:5", "banana:3", "banana:4", "banana:5",
    "banana:6", "complete:4", "complete:5", "cycle:4", "path:3",
];

pub fn spec(s: &str) -> FixtureSpec {
    s.parse().unwrap()
}

pub fn curve(s: &str, resolution: u32) -> Curve {
    Curve::new(generate_fixture(&spec(s)).unwrap(), resolution).unwrap()
}

type Q = Ratio<i128>;

/// Principal-divisor test by solving the reduced Laplacian system over the
/// rationals. Independent of chip-firing.
pub struct Lattice {
    n: usize,
    q: usize,
    inverse: Vec<Vec<Q>>,
}

impl Lattice {
    pub fn new(model: &ModelGraph, q: usize) -> Self {
        let n = model.vertex_count();
        let idx: Vec<usize> = (0..n).filter(|&v| v != q).collect();
        let m = idx.len();
        let mut a = vec![vec![Q::zero(); 2 * m]; m];
        for (i, &v) in idx.iter().enumerate() {
            let mut col = vec![0i64; n];
            col[v] = 1;
            let lv = model.apply_laplacian(&col);
            for (j, &w) in idx.iter().enumerate() {
                a[j][i] = Q::from(lv[w] as i128);
            }
            a[i][m + i] = Q::one();
        }
        for c in 0..m {
            let p = (c..m).find(|&r| !a[r][c].is_zero()).expect("reduced laplacian is invertible");
            a.swap(c, p);
            let pivot = a[c][c];
            a[c].iter_mut().for_each(|x| *x /= pivot);
            for r in 0..m {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c];
                    let row = a[c].clone();
                    a[r].iter_mut().zip(row).for_each(|(x, y)| *x -= f * y);
                }
            }
        }
        let inverse = a.into_iter().map(|row| row[m..].to_vec()).collect();
        Self { n, q, inverse }
    }

    /// Whether `d` is the Laplacian image of an integer vector.
    pub fn is_principal(&self, d: &[i64]) -> bool {
        if d.iter().sum::<i64>() != 0 {
            return false;
        }
        let rhs: Vec<Q> = (0..self.n)
            .filter(|&v| v != self.q)
            .map(|v| Q::from(d[v] as i128))
            .collect();
        self.inverse.iter().all(|row| {
            row.iter()
                .zip(&rhs)
                .fold(Q::zero(), |acc, (a, b)| acc + a * b)
                .is_integer()
        })
    }

    /// Whether some effective divisor differs from `d` by a principal one.
    pub fn is_winnable(&self, d: &ModelDivisor) -> bool {
        if d.degree() < 0 {
            return false;
        }
        Multisets::new(self.n, d.degree() as usize).any(|pts| {
            let e = multiset_divisor(self.n, &pts);
            self.is_principal((d - &e).as_slice())
        })
    }
}

/// All divisors with coefficients in `lo..=hi` and degree in `degrees`.
pub fn box_divisors(n: usize, lo: i64, hi: i64, degrees: std::ops::RangeInclusive<i64>) -> Vec<ModelDivisor> {
    let mut out = Vec::new();
    let mut cur = vec![lo; n];
    loop {
        if degrees.contains(&cur.iter().sum()) {
            out.push(ModelDivisor(cur.clone()));
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if cur[i] < hi {
                cur[i] += 1;
                break;
            }
            cur[i] = lo;
            i += 1;
        }
    }
}
