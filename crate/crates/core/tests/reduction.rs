mod common;

use common::{curve, Lattice};
use proptest::prelude::*;
use tropdiv::enumerate::Multisets;
use tropdiv::reduction::{dhar_unburnt, is_equivalent, reduce};
use tropdiv::ModelDivisor;

// A reduced divisor is effective off q and every nonempty set avoiding q
// has a vertex with fewer chips than edges leaving the set.
fn is_reduced_by_definition(c: &tropdiv::Curve, d: &ModelDivisor) -> bool {
    let m = c.model();
    let n = m.vertex_count();
    let q = c.base();
    if (0..n).any(|v| v != q && d[v] < 0) {
        return false;
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    (1u32..1 << others.len()).all(|mask| {
        let set: Vec<usize> = others
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        set.iter().any(|&v| {
            let out: i64 = m
                .neighbors(v)
                .iter()
                .filter(|(w, _)| !set.contains(w))
                .map(|(_, k)| k)
                .sum();
            d[v] < out
        })
    })
}

#[test]
fn reduced_forms_satisfy_the_definition() {
    for f in ["theta", "dumbbell", "flower:3", "complete:4", "cycle:4", "path:3", "banana:5"] {
        let c = curve(f, 1);
        let n = c.vertex_count();
        for deg in 0..=4 {
            for pts in Multisets::new(n, deg) {
                let mut d = tropdiv::enumerate::multiset_divisor(n, &pts);
                d.0[c.base()] -= 2;
                let r = reduce(c.model(), &d, c.base()).unwrap();
                assert!(is_reduced_by_definition(&c, &r.divisor), "{f}: {:?}", r.divisor);
                assert!(dhar_unburnt(c.model(), &r.divisor, c.base()).unwrap().is_empty());
            }
        }
    }
}

#[test]
fn winnability_matches_lattice_oracle() {
    for f in ["theta", "dumbbell", "flower:4", "complete:4", "cycle:4"] {
        let c = curve(f, 1);
        let lattice = Lattice::new(c.model(), c.base());
        for d in common::box_divisors(c.vertex_count(), -2, 2, 0..=3) {
            let r = reduce(c.model(), &d, c.base()).unwrap();
            assert_eq!(r.is_winnable(), lattice.is_winnable(&d), "{f}: {d:?}");
        }
    }
}

#[test]
fn equivalence_matches_lattice_oracle() {
    let c = curve("complete:4", 1);
    let lattice = Lattice::new(c.model(), c.base());
    let all = common::box_divisors(4, -1, 2, 1..=1);
    for d in &all {
        for e in &all {
            let eq = is_equivalent(c.model(), d, e).unwrap();
            assert_eq!(eq.equivalent, lattice.is_principal((d - e).as_slice()));
        }
    }
}

proptest! {
    #[test]
    fn reduction_on_subdivided_theta(coeffs in prop::collection::vec(-3i64..4, 8)) {
        let c = curve("theta", 3);
        let n = c.vertex_count();
        let mut v = coeffs;
        v.resize(n, 0);
        let d = ModelDivisor(v);
        let r = reduce(c.model(), &d, c.base()).unwrap();
        prop_assert!(is_reduced_by_definition(&c, &r.divisor));
        prop_assert_eq!(r.script.apply(c.model(), &d), r.divisor.clone());
        prop_assert_eq!(r.divisor.degree(), d.degree());
    }
}
