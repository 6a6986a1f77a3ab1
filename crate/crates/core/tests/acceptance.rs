//! End-to-end acceptance gate. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{box_divisors, curve, Lattice, FIXTURES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tropdiv::enumerate::{multiset_divisor, sample_multiset};
use tropdiv::harness::{run_command, Command, RunConfig};
use tropdiv::reduction::{divisor_of, is_equivalent, reduce, script_to_witness, FiringScript};
use tropdiv::verifiers::{
    check_low_genus_implication, check_riemann_roch, clifford_scan, counterexample_search,
    find_g12, HuntConfig, ScanConfig,
};
use tropdiv::{rank_oracle, Curve, ModelDivisor};

type Check = std::result::Result<String, String>;

const ORACLE_BUDGET: u64 = 50_000_000;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exhaustive() -> ScanConfig {
    ScanConfig {
        degree_cap: None,
        sample_budget: 0,
        seed: 0,
        max_examined: None,
    }
}

/// Fixtures small enough for the exhaustive box at resolution 1.
fn box_fixtures() -> Vec<(&'static str, Curve)> {
    FIXTURES
        .iter()
        .map(|&f| (f, curve(f, 1)))
        .filter(|(_, c)| c.vertex_count() <= 8)
        .collect()
}

fn box_for(c: &Curve) -> Vec<ModelDivisor> {
    let g = c.genus() as i64;
    box_divisors(c.vertex_count(), -2, 3, -1..=2 * g - 1)
}

fn canonical_degree() -> Check {
    for f in FIXTURES {
        let c = curve(f, 1);
        let k = c.graph().canonical_divisor();
        let g = c.genus() as i64;
        ensure(k.degree() == 2 * g - 2, || format!("{f}: deg K = {}", k.degree()))?;
        ensure(c.canonical().degree() == 2 * g - 2, || format!("{f}: model K"))?;
    }
    Ok(format!("{} fixtures", FIXTURES.len()))
}

fn canonical_rank() -> Check {
    let cases = [
        ("theta", 2),
        ("dumbbell", 2),
        ("flower:3", 3),
        ("complete:4", 3),
        ("banana:4", 3),
        ("complete:5", 6),
    ];
    for (f, g) in cases {
        let c = curve(f, 1);
        ensure(c.genus() == g, || format!("{f}: genus {}", c.genus()))?;
        let r = c.rank_value(c.canonical()).map_err(|e| e.to_string())?;
        ensure(r == g as i64 - 1, || format!("{f}: rank K = {r}"))?;
    }
    Ok(format!("{} fixtures", cases.len()))
}

fn riemann_roch() -> Check {
    let mut total = 0;
    for (f, c) in box_fixtures() {
        let divisors = box_for(&c);
        total += divisors.len();
        let bad = divisors
            .par_iter()
            .find_any(|d| !check_riemann_roch(&c, d).map(|r| r.holds).unwrap_or(false));
        if let Some(d) = bad {
            return Err(format!("{f}: {}", c.describe(d)));
        }
    }
    Ok(format!("{total} divisors"))
}

fn oracle_equivalence() -> Check {
    let mut total = 0;
    for (f, c) in box_fixtures() {
        let divisors = box_for(&c);
        total += divisors.len();
        let bad = divisors.par_iter().find_any(|d| {
            let fast = c.rank_value(d).unwrap();
            rank_oracle(c.model(), d, ORACLE_BUDGET).map(|o| o.rank) != Ok(fast)
        });
        if let Some(d) = bad {
            return Err(format!("{f}: {}", c.describe(d)));
        }
    }
    Ok(format!("{total} divisors"))
}

fn clifford_inequality() -> Check {
    let mut classes = 0;
    for f in FIXTURES {
        let c = curve(f, 1);
        let scan = clifford_scan(&c, &exhaustive()).map_err(|e| e.to_string())?;
        ensure(scan.complete && scan.coverage.iter().all(|d| d.exhaustive), || {
            format!("{f}: scan not exhaustive")
        })?;
        ensure(scan.violations.is_empty(), || format!("{f}: {} violations", scan.violations.len()))?;
        for r in scan.records.iter().filter(|r| r.special) {
            ensure(2 * r.rank <= r.degree, || format!("{f}: {}", c.describe(&r.class)))?;
        }
        classes += scan.records.len();
    }
    Ok(format!("{classes} classes"))
}

fn hyperelliptic_classification() -> Check {
    for f in ["theta", "dumbbell", "flower:3", "banana:4"] {
        let c = curve(f, 1);
        let g = c.genus() as i64;
        let scan = clifford_scan(&c, &exhaustive()).map_err(|e| e.to_string())?;
        let g12 = scan.g12.as_ref().ok_or_else(|| format!("{f}: no g2^1"))?;
        let h = scan.hyperelliptic.as_ref().ok_or_else(|| format!("{f}: no check"))?;
        ensure(h.holds(), || format!("{f}: {h:?}"))?;
        let mut expected: Vec<ModelDivisor> = (0..g)
            .map(|r| reduce(c.model(), &g12.representative.scaled(r), c.base()).unwrap().divisor)
            .collect();
        expected.sort();
        let mut found: Vec<ModelDivisor> =
            scan.equality_classes().iter().map(|r| r.class.clone()).collect();
        found.sort();
        ensure(found == expected, || format!("{f}: equality classes differ"))?;
        let k_multiple = g12.representative.scaled(g - 1);
        let eq = is_equivalent(c.model(), c.canonical(), &k_multiple).unwrap();
        ensure(eq.equivalent, || format!("{f}: K not (g-1) g2^1"))?;
    }
    Ok("4 fixtures".into())
}

fn g12_uniqueness() -> Check {
    let mut found = 0;
    for f in FIXTURES {
        for res in [1, 2] {
            let c = curve(f, res);
            if c.genus() < 2 {
                continue;
            }
            let Some(cert) = find_g12(&c).map_err(|e| e.to_string())? else {
                continue;
            };
            ensure(cert.unique_class, || format!("{f}@{res}: several classes"))?;
            let first = &cert.all_found[0];
            for d in &cert.all_found {
                let eq = is_equivalent(c.model(), first, d).unwrap();
                ensure(eq.equivalent, || format!("{f}@{res}: {}", c.describe(d)))?;
                ensure(c.rank_value(d).unwrap() == 1 && d.degree() == 2, || format!("{f}@{res}"))?;
            }
            found += cert.all_found.len();
        }
    }
    Ok(format!("{found} degree-2 rank-1 divisors"))
}

fn non_hyperelliptic_control() -> Check {
    for res in [1, 2, 4] {
        let c = curve("complete:4", res);
        let cert = find_g12(&c).map_err(|e| e.to_string())?;
        ensure(cert.is_none(), || format!("g2^1 at resolution {res}"))?;
    }
    let scan = clifford_scan(&curve("complete:4", 1), &exhaustive()).map_err(|e| e.to_string())?;
    ensure(scan.interior_equality().is_empty(), || "interior equality on K4".into())?;
    Ok("K4 at resolutions 1, 2, 4".into())
}

fn low_genus() -> Check {
    let mut n = 0;
    for f in FIXTURES.iter().copied().chain(["theta+rational:5:3", "banana:4+rational:2:4"]) {
        let c = curve(f, 1);
        if !(2..=4).contains(&c.genus()) {
            continue;
        }
        let scan = clifford_scan(&c, &exhaustive()).map_err(|e| e.to_string())?;
        ensure(scan.complete, || format!("{f}: scan incomplete"))?;
        let check = check_low_genus_implication(&c, &scan).map_err(|e| e.to_string())?;
        ensure(check.holds, || format!("{f}: {check:?}"))?;
        n += 1;
    }
    Ok(format!("{n} fixtures"))
}

fn reduction_properties() -> Check {
    let mut checked = 0;
    for (i, f) in FIXTURES.iter().enumerate() {
        let c = curve(f, 1);
        let m = c.model();
        let n = m.vertex_count();
        let q = c.base();
        let lattice = Lattice::new(m, q);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        for _ in 0..500 {
            let degree = rng.gen_range(-2..=2 * c.genus() as i64 + 1);
            let neg = rng.gen_range(0..=3) + (-degree).max(0) as usize;
            let pos = (degree + neg as i64) as usize;
            let d = &multiset_divisor(n, &sample_multiset(&mut rng, n, pos))
                - &multiset_divisor(n, &sample_multiset(&mut rng, n, neg));
            let r = reduce(m, &d, q).unwrap();
            ensure(r.script.apply(m, &d) == r.divisor, || format!("{f}: certificate"))?;
            let again = reduce(m, &r.divisor, q).unwrap();
            ensure(again.divisor == r.divisor && again.script.as_slice().iter().all(|&s| s == 0), || {
                format!("{f}: not idempotent on {}", c.describe(&d))
            })?;
            let sigma = FiringScript((0..n).map(|_| rng.gen_range(-3..=3)).collect());
            let moved = sigma.apply(m, &d);
            ensure(reduce(m, &moved, q).unwrap().divisor == r.divisor, || {
                format!("{f}: script dependence on {}", c.describe(&d))
            })?;
            ensure(r.is_winnable() == (r.divisor[q] >= 0), || format!("{f}: winnable flag"))?;
            ensure(r.is_winnable() == lattice.is_winnable(&d), || {
                format!("{f}: winnability of {}", c.describe(&d))
            })?;
            let lsigma = ModelDivisor(m.apply_laplacian(sigma.as_slice()));
            ensure(divisor_of(&script_to_witness(&sigma, m), m) == -&lsigma, || {
                format!("{f}: witness divisor")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} divisors"))
}

fn resolution_invariance() -> Check {
    let mut total = 0;
    for (f, c) in box_fixtures() {
        let fine = Curve::new(c.graph().clone(), 2).map_err(|e| e.to_string())?;
        let divisors = box_for(&c);
        total += divisors.len();
        let bad = divisors.par_iter().find_any(|d| {
            let pushed = fine.push(&c.model().lift(d)).unwrap();
            c.rank_value(d).unwrap() != fine.rank_value(&pushed).unwrap()
        });
        if let Some(d) = bad {
            return Err(format!("{f}: {}", c.describe(d)));
        }
    }
    Ok(format!("{total} divisors"))
}

fn determinism() -> Check {
    let runs: Vec<RunConfig> = [
        (Command::RrCheck, "complete:4"),
        (Command::CliffordScan, "flower:4"),
        (Command::G12, "dumbbell"),
        (Command::LowGenusCheck, "banana:5"),
        (Command::Hunt, "complete:5"),
        (Command::Hunt, "banana:6"),
    ]
    .into_iter()
    .map(|(cmd, f)| {
        let mut cfg = RunConfig::new(cmd).fixture(f).unwrap();
        cfg.seed = 11;
        cfg
    })
    .collect();
    for cfg in &runs {
        let mut reports = Vec::new();
        for jobs in [1, 8, 1, 8] {
            let cfg = RunConfig { jobs: Some(jobs), ..cfg.clone() };
            let out = run_command(&cfg);
            ensure(out.status.code() == 0, || format!("{} exit {}", cfg.command, out.status.code()))?;
            reports.push(out.deterministic_report());
        }
        ensure(reports.windows(2).all(|w| w[0] == w[1]), || format!("{} differs", cfg.command))?;
    }

    let hunt = |seed| HuntConfig {
        generators: HuntConfig::default_generators(seed, 2)
            .into_iter()
            .chain(["banana:6".parse().unwrap()])
            .collect(),
        resolution: 1,
        g12_resolution: 2,
        degree_cap: None,
        sample_budget: 500,
        budget: 200_000,
        seed,
    };
    let a = counterexample_search(&hunt(5)).map_err(|e| e.to_string())?;
    let b = counterexample_search(&hunt(5)).map_err(|e| e.to_string())?;
    ensure(a == b, || "hunt report differs".into())?;
    let banana = a.entries.iter().find(|e| e.fixture == "banana:6").ok_or("banana:6 missing")?;
    ensure(banana.hyperelliptic && banana.candidates.is_empty(), || "banana:6 not excluded".into())?;
    for entry in &a.entries {
        for cand in &entry.candidates {
            let spec: tropdiv::fixtures::FixtureSpec = entry.fixture.parse().unwrap();
            let c = Curve::new(tropdiv::fixtures::generate_fixture(&spec).unwrap(), 1).unwrap();
            let d = &cand.reduced.divisor;
            let r = c.rank_value(d).unwrap();
            ensure(2 * r == d.degree() && r == cand.rank.rank, || format!("{}: bad certificate", entry.fixture))?;
        }
    }
    Ok(format!("{} commands at 1 and 8 threads, {} hunt candidates", runs.len(), a.candidate_count()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("canonical degree", canonical_degree),
        ("canonical rank", canonical_rank),
        ("riemann-roch identity", riemann_roch),
        ("oracle equivalence", oracle_equivalence),
        ("clifford inequality", clifford_inequality),
        ("hyperelliptic equality classes", hyperelliptic_classification),
        ("g2^1 uniqueness", g12_uniqueness),
        ("non-hyperelliptic control", non_hyperelliptic_control),
        ("low-genus implication", low_genus),
        ("reduction properties", reduction_properties),
        ("resolution invariance", resolution_invariance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
