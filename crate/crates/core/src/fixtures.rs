//! Named graph families used as fixtures and as generators for the search
//! harness.
//!
//! Textual form: `family[:params][+rational:SEED:MAXDEN]`, e.g. `theta`,
//! `flower:3`, `complete:5`, `random:6,11,42`, `banana:4+rational:7:5`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{MetricGraph, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Theta,
    Banana(usize),
    Flower(usize),
    Dumbbell,
    Cycle(usize),
    Complete(usize),
    Path(usize),
    Random { vertices: usize, edges: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Lengths {
    #[default]
    Unit,
    /// Seeded rationals `p/q` with `1 <= q <= max_den` and `1 <= p <= 2 q`.
    Rational { seed: u64, max_den: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixtureSpec {
    pub family: Family,
    pub lengths: Lengths,
}

impl FixtureSpec {
    pub fn unit(family: Family) -> Self {
        Self {
            family,
            lengths: Lengths::Unit,
        }
    }

    pub fn genus(&self) -> usize {
        match self.family {
            Family::Theta | Family::Dumbbell => 2,
            Family::Banana(n) => n - 1,
            Family::Flower(k) => k,
            Family::Cycle(_) => 1,
            Family::Complete(n) => (n - 1) * n.saturating_sub(2) / 2,
            Family::Path(_) => 0,
            Family::Random { vertices, edges, .. } => edges + 1 - vertices,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Fixture(msg));
        match self.family {
            Family::Banana(n) if n < 2 => bad(format!("banana({n}) needs at least 2 edges")),
            Family::Flower(0) => bad("flower(0) has no petals".into()),
            Family::Cycle(0) => bad("cycle(0) has no vertices".into()),
            Family::Complete(0) => bad("complete(0) has no vertices".into()),
            Family::Path(0) => bad("path(0) has no vertices".into()),
            Family::Random { vertices: 0, .. } => bad("random graph needs a vertex".into()),
            Family::Random { vertices, edges, .. } if edges + 1 < vertices => bad(format!(
                "random graph with {vertices} vertices needs at least {} edges",
                vertices - 1
            )),
            _ => match self.lengths {
                Lengths::Rational { max_den, .. } if max_den < 1 => {
                    bad("length denominator bound must be positive".into())
                }
                _ => Ok(()),
            },
        }
    }
}

impl fmt::Display for FixtureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Theta => write!(f, "theta")?,
            Family::Banana(n) => write!(f, "banana:{n}")?,
            Family::Flower(k) => write!(f, "flower:{k}")?,
            Family::Dumbbell => write!(f, "dumbbell")?,
            Family::Cycle(n) => write!(f, "cycle:{n}")?,
            Family::Complete(n) => write!(f, "complete:{n}")?,
            Family::Path(n) => write!(f, "path:{n}")?,
            Family::Random { vertices, edges, seed } => {
                write!(f, "random:{vertices},{edges},{seed}")?
            }
        }
        if let Lengths::Rational { seed, max_den } = self.lengths {
            write!(f, "+rational:{seed}:{max_den}")?;
        }
        Ok(())
    }
}

impl FromStr for FixtureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Fixture(format!("cannot parse fixture `{s}`"));
        let (family_part, length_part) = match s.split_once('+') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let (name, params) = match family_part.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (family_part, None),
        };
        let nums: Vec<u64> = match params {
            Some(p) => p
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let one = || match nums.as_slice() {
            [n] => Ok(*n as usize),
            _ => Err(bad()),
        };
        let none = || if nums.is_empty() { Ok(()) } else { Err(bad()) };
        let family = match name.trim() {
            "theta" => none().map(|_| Family::Theta)?,
            "dumbbell" => none().map(|_| Family::Dumbbell)?,
            "banana" => Family::Banana(one()?),
            "flower" => Family::Flower(one()?),
            "cycle" => Family::Cycle(one()?),
            "complete" => Family::Complete(one()?),
            "path" => Family::Path(one()?),
            "random" => match nums.as_slice() {
                [v, e, seed] => Family::Random {
                    vertices: *v as usize,
                    edges: *e as usize,
                    seed: *seed,
                },
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        };
        let lengths = match length_part {
            None => Lengths::Unit,
            Some("unit") => Lengths::Unit,
            Some(l) => {
                let parts: Vec<&str> = l.split(':').collect();
                match parts.as_slice() {
                    ["rational", seed, den] => Lengths::Rational {
                        seed: seed.parse().map_err(|_| bad())?,
                        max_den: den.parse().map_err(|_| bad())?,
                    },
                    _ => return Err(bad()),
                }
            }
        };
        let spec = FixtureSpec { family, lengths };
        spec.validate()?;
        Ok(spec)
    }
}

/// Builds the metric graph described by `spec`.
pub fn generate_fixture(spec: &FixtureSpec) -> Result<MetricGraph> {
    spec.validate()?;
    let vertices: Vec<String>;
    let mut edges: Vec<(String, usize, usize)> = Vec::new();
    match spec.family {
        Family::Theta => return generate_fixture(&FixtureSpec { family: Family::Banana(3), ..*spec }),
        Family::Banana(n) => {
            vertices = vec!["u".into(), "v".into()];
            edges = (1..=n).map(|i| (format!("e{i}"), 0, 1)).collect();
        }
        Family::Flower(k) => {
            vertices = vec!["c".into()];
            edges = (1..=k).map(|i| (format!("p{i}"), 0, 0)).collect();
        }
        Family::Dumbbell => {
            vertices = vec!["a".into(), "b".into()];
            edges = vec![("la".into(), 0, 0), ("ab".into(), 0, 1), ("lb".into(), 1, 1)];
        }
        Family::Cycle(n) => {
            vertices = (0..n).map(|i| format!("v{i}")).collect();
            edges = (0..n).map(|i| (format!("e{i}"), i, (i + 1) % n)).collect();
        }
        Family::Complete(n) => {
            vertices = (0..n).map(|i| format!("v{i}")).collect();
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((format!("e{i}_{j}"), i, j));
                }
            }
        }
        Family::Path(n) => {
            vertices = (0..n).map(|i| format!("v{i}")).collect();
            edges = (1..n).map(|i| (format!("e{i}"), i - 1, i)).collect();
        }
        Family::Random { vertices: nv, edges: ne, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            vertices = (0..nv).map(|i| format!("v{i}")).collect();
            for i in 1..nv {
                let j = rng.gen_range(0..i);
                edges.push((format!("e{}", edges.len()), j, i));
            }
            while edges.len() < ne {
                let a = rng.gen_range(0..nv);
                let b = rng.gen_range(0..nv);
                if a != b || nv == 1 {
                    edges.push((format!("e{}", edges.len()), a.min(b), a.max(b)));
                }
            }
        }
    }

    let mut length_rng = match spec.lengths {
        Lengths::Unit => None,
        Lengths::Rational { seed, max_den } => Some((ChaCha8Rng::seed_from_u64(seed), max_den)),
    };
    let mut b = MetricGraph::builder();
    for v in &vertices {
        b.vertex(v.as_str())?;
    }
    for (name, x, y) in edges {
        let length = match length_rng.as_mut() {
            None => Rational::from(1),
            Some((rng, max_den)) => {
                let den = rng.gen_range(1..=*max_den);
                Rational::new(rng.gen_range(1..=2 * den), den)
            }
        };
        b.edge(name, &vertices[x], &vertices[y], length)?;
    }
    b.build()
}
