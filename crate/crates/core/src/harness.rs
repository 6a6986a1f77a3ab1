//! Command dispatch and JSON/text reporting for the `tropdiv` CLI.
//!
//! Every report embeds the configuration it was produced from. Timing and
//! thread count live under `runtime`, the only part of a report that may
//! differ between runs with the same configuration.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::Curve;
use crate::enumerate::{multiset_divisor, sample_multiset};
use crate::error::{Error, Result};
use crate::fixtures::{generate_fixture, FixtureSpec};
use crate::metric::{MetricDivisor, MetricGraph};
use crate::model::ModelDivisor;
use crate::parse::{parse_divisor, parse_graph};
use crate::rank::rank_oracle;
use crate::reduction::{divisor_of, script_to_witness};
use crate::verifiers::{
    check_canonical_decomposition, check_low_genus_implication, check_riemann_roch, clifford_scan,
    counterexample_search, find_g12, CliffordScan, HuntConfig, ScanConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Genus,
    Canonical,
    Reduce,
    Rank,
    Equiv,
    RrCheck,
    CliffordScan,
    G12,
    LowGenusCheck,
    Hunt,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Genus,
        Command::Canonical,
        Command::Reduce,
        Command::Rank,
        Command::Equiv,
        Command::RrCheck,
        Command::CliffordScan,
        Command::G12,
        Command::LowGenusCheck,
        Command::Hunt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Genus => "genus",
            Command::Canonical => "canonical",
            Command::Reduce => "reduce",
            Command::Rank => "rank",
            Command::Equiv => "equiv",
            Command::RrCheck => "rr-check",
            Command::CliffordScan => "clifford-scan",
            Command::G12 => "g12",
            Command::LowGenusCheck => "low-genus-check",
            Command::Hunt => "hunt",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub graph: Option<PathBuf>,
    pub fixtures: Vec<FixtureSpec>,
    /// `K`, a divisor file path, or inline `chip ...` lines separated by `;`.
    pub divisors: Vec<String>,
    pub resolution: Option<u32>,
    pub degree_cap: Option<usize>,
    pub budget: Option<u64>,
    pub seed: u64,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            graph: None,
            fixtures: Vec::new(),
            divisors: Vec::new(),
            resolution: None,
            degree_cap: None,
            budget: None,
            seed: 0,
            format: OutputFormat::Json,
            jobs: None,
        }
    }

    pub fn fixture(mut self, spec: &str) -> Result<Self> {
        self.fixtures.push(spec.parse()?);
        Ok(self)
    }

    fn echo(&self) -> Value {
        json!({
            "command": self.command,
            "graph": self.graph.as_ref().map(|p| p.display().to_string()),
            "fixtures": self.fixtures.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "divisors": self.divisors,
            "resolution": self.resolution,
            "degree_cap": self.degree_cap,
            "budget": self.budget,
            "seed": self.seed,
            "format": self.format,
        })
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// An identity check failed, which indicates an implementation bug.
    AssertionFailed,
    Usage,
    BudgetExceeded,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::AssertionFailed => 1,
            Status::Usage => 2,
            Status::BudgetExceeded => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
    pub summary: String,
}

impl Outcome {
    /// Report with the `runtime` section removed, for reproducibility checks.
    pub fn deterministic_report(&self) -> Value {
        let mut r = self.report.clone();
        if let Some(map) = r.as_object_mut() {
            map.remove("runtime");
        }
        r
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                serde_json::to_string_pretty(&self.report).expect("reports are valid JSON") + "\n"
            }
            OutputFormat::Text => self.summary.clone(),
        }
    }
}

struct Body {
    passed: bool,
    status: Option<Status>,
    fields: Vec<(&'static str, Value)>,
    summary: String,
}

impl Body {
    fn new(passed: bool) -> Self {
        Self {
            passed,
            status: None,
            fields: Vec::new(),
            summary: String::new(),
        }
    }

    fn field(mut self, key: &'static str, value: impl Serialize) -> Self {
        self.fields.push((key, serde_json::to_value(value).expect("serializable")));
        self
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.summary.push_str(text.as_ref());
        self.summary.push('\n');
    }
}

pub fn run_command(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.unwrap_or(0))
        .build()
        .expect("thread pool");
    let result = pool.install(|| dispatch(config));
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let runtime = json!({ "elapsed_ms": elapsed_ms, "jobs": pool.current_num_threads() });
    match result {
        Ok(body) => {
            let status = body
                .status
                .unwrap_or(if body.passed { Status::Pass } else { Status::AssertionFailed });
            let mut report = serde_json::Map::new();
            report.insert("config".into(), config.echo());
            report.insert("runtime".into(), runtime);
            report.insert("passed".into(), Value::Bool(body.passed));
            report.insert("status".into(), serde_json::to_value(status).unwrap());
            for (k, v) in body.fields {
                report.insert(k.into(), v);
            }
            let mut summary = format!("{}: {}\n", config.command, if body.passed { "PASS" } else { "FAIL" });
            summary.push_str(&body.summary);
            Outcome {
                status,
                report: Value::Object(report),
                summary,
            }
        }
        Err(err) => {
            let status = match err {
                Error::Budget(_) => Status::BudgetExceeded,
                _ => Status::Usage,
            };
            Outcome {
                status,
                report: json!({
                    "config": config.echo(),
                    "runtime": runtime,
                    "passed": false,
                    "status": status,
                    "error": err.to_string(),
                }),
                summary: format!("{}: error: {err}\n", config.command),
            }
        }
    }
}

fn load_graph(config: &RunConfig) -> Result<(MetricGraph, String)> {
    match (&config.graph, config.fixtures.as_slice()) {
        (Some(path), []) => {
            let text = read(path)?;
            Ok((parse_graph(&text)?, path.display().to_string()))
        }
        (None, [spec]) => Ok((generate_fixture(spec)?, spec.to_string())),
        (None, []) => Err(Error::Precondition("one of --graph or --fixture is required".into())),
        _ => Err(Error::Precondition(
            "give exactly one graph: either --graph or a single --fixture".into(),
        )),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

fn load_divisor(spec: &str, graph: &MetricGraph) -> Result<MetricDivisor> {
    let spec = spec.trim();
    if spec == "K" {
        return Ok(graph.canonical_divisor());
    }
    let path = Path::new(spec);
    if path.is_file() {
        return parse_divisor(&read(path)?, graph);
    }
    if spec.starts_with("chip") {
        return parse_divisor(&spec.replace(';', "\n"), graph);
    }
    Err(Error::Precondition(format!(
        "divisor `{spec}` is neither `K`, a readable file, nor inline `chip ...` text"
    )))
}

fn graph_info(graph: &MetricGraph, source: &str) -> Value {
    json!({
        "source": source,
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "genus": graph.genus(),
    })
}

fn model_info(curve: &Curve) -> Value {
    json!({
        "resolution": curve.resolution(),
        "scale": curve.model().scale(),
        "vertices": curve.vertex_count(),
        "edges": curve.model().edge_count(),
        "base": curve.base(),
        "base_point": curve.graph().point_name(curve.model().backmap(curve.base())),
    })
}

fn dispatch(config: &RunConfig) -> Result<Body> {
    if config.command == Command::Hunt {
        return hunt(config);
    }
    let (graph, source) = load_graph(config)?;
    let divisors = config
        .divisors
        .iter()
        .map(|d| load_divisor(d, &graph))
        .collect::<Result<Vec<_>>>()?;
    let default_resolution = if config.command == Command::G12 { 2 } else { 1 };
    let resolution = config.resolution.unwrap_or(default_resolution);
    let info = graph_info(&graph, &source);
    let (curve, pushed) = Curve::with_divisors(graph, &divisors, resolution)?;
    let mut body = match config.command {
        Command::Genus => genus(&curve),
        Command::Canonical => canonical(&curve),
        Command::Reduce => reduce_cmd(&curve, &pushed),
        Command::Rank => rank_cmd(&curve, &pushed, config.budget),
        Command::Equiv => equiv(&curve, &pushed),
        Command::RrCheck => rr_check(&curve, &pushed, config),
        Command::CliffordScan => clifford(&curve, config),
        Command::G12 => g12(&curve),
        Command::LowGenusCheck => low_genus(&curve, config),
        Command::Hunt => unreachable!(),
    }?;
    body.summary = format!(
        "graph {source}: genus {}, model {} vertices at resolution {resolution}\n{}",
        curve.genus(),
        curve.vertex_count(),
        body.summary
    );
    Ok(body.field("graph", info).field("model", model_info(&curve)))
}

fn divisor_json(curve: &Curve, d: &ModelDivisor) -> Value {
    json!({
        "text": curve.describe(d),
        "entries": curve.graph().divisor_entries(&curve.model().lift(d)),
        "model": d,
    })
}

fn genus(curve: &Curve) -> Result<Body> {
    let g = curve.genus();
    let mut body = Body::new(curve.model().genus() == g)
        .field("genus", g)
        .field("model_genus", curve.model().genus());
    body.line(format!("genus {g}"));
    Ok(body)
}

fn canonical(curve: &Curve) -> Result<Body> {
    let k = curve.graph().canonical_divisor();
    let g = curve.genus() as i64;
    let mut body = Body::new(k.degree() == 2 * g - 2)
        .field("canonical", divisor_json(curve, curve.canonical()))
        .field("degree", k.degree())
        .field("expected_degree", 2 * g - 2);
    body.line(format!("K = {}", curve.graph().display_divisor(&k)));
    body.line(format!("deg K = {}", k.degree()));
    Ok(body)
}

fn require_divisors(pushed: &[ModelDivisor], count: Option<usize>) -> Result<()> {
    match count {
        Some(n) if pushed.len() != n => Err(Error::Precondition(format!(
            "this command takes exactly {n} --divisor arguments"
        ))),
        None if pushed.is_empty() => {
            Err(Error::Precondition("at least one --divisor is required".into()))
        }
        _ => Ok(()),
    }
}

fn reduce_cmd(curve: &Curve, pushed: &[ModelDivisor]) -> Result<Body> {
    require_divisors(pushed, None)?;
    let mut items = Vec::new();
    let mut passed = true;
    let mut lines = Vec::new();
    for d in pushed {
        let r = curve.reduce(d)?;
        passed &= r.script.apply(curve.model(), d) == r.divisor;
        lines.push(format!("{}  ->  {}", curve.describe(d), curve.describe(&r.divisor)));
        items.push(json!({
            "divisor": divisor_json(curve, d),
            "reduced": divisor_json(curve, &r.divisor),
            "winnable": r.is_winnable(),
            "certificate": r,
        }));
    }
    let mut body = Body::new(passed).field("results", items);
    lines.iter().for_each(|l| body.line(l));
    Ok(body)
}

fn rank_cmd(curve: &Curve, pushed: &[ModelDivisor], oracle_budget: Option<u64>) -> Result<Body> {
    require_divisors(pushed, None)?;
    let mut items = Vec::new();
    let mut passed = true;
    let mut lines = Vec::new();
    for d in pushed {
        let r = curve.rank(d)?;
        let oracle = match oracle_budget {
            Some(b) => Some(rank_oracle(curve.model(), d, b)?),
            None => None,
        };
        if let Some(o) = &oracle {
            passed &= o.rank == r.rank;
        }
        lines.push(format!("rank({}) = {}", curve.describe(d), r.rank));
        items.push(json!({
            "divisor": divisor_json(curve, d),
            "rank": r.rank,
            "obstruction": r.obstruction.as_ref().map(|e| divisor_json(curve, e)),
            "method": r.method,
            "resolution": curve.resolution(),
            "oracle": oracle,
        }));
    }
    let mut body = Body::new(passed).field("results", items);
    lines.iter().for_each(|l| body.line(l));
    Ok(body)
}

fn equiv(curve: &Curve, pushed: &[ModelDivisor]) -> Result<Body> {
    require_divisors(pushed, Some(2))?;
    let (d, e) = (&pushed[0], &pushed[1]);
    let eq = curve.equivalent(d, e)?;
    let witness = eq
        .certificate
        .as_ref()
        .map(|s| script_to_witness(s, curve.model()));
    let witness_ok = witness
        .as_ref()
        .is_none_or(|f| divisor_of(f, curve.model()) == e - d);
    let mut body = Body::new(witness_ok)
        .field("equivalent", eq.equivalent)
        .field("base", eq.base)
        .field("certificate", &eq.certificate)
        .field("witness", &witness)
        .field("divisors", [divisor_json(curve, d), divisor_json(curve, e)]);
    body.line(format!(
        "{} {} {}",
        curve.describe(d),
        if eq.equivalent { "~" } else { "!~" },
        curve.describe(e)
    ));
    Ok(body)
}

fn random_divisor(rng: &mut ChaCha8Rng, n: usize, degree: i64) -> ModelDivisor {
    let negative = (-degree).max(0) as usize + rng.gen_range(0..=2);
    let positive = (degree + negative as i64) as usize;
    let plus = multiset_divisor(n, &sample_multiset(rng, n, positive));
    let minus = multiset_divisor(n, &sample_multiset(rng, n, negative));
    &plus - &minus
}

fn rr_check(curve: &Curve, pushed: &[ModelDivisor], config: &RunConfig) -> Result<Body> {
    let n = curve.vertex_count();
    let g = curve.genus() as i64;
    let divisors: Vec<ModelDivisor> = if pushed.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        (0..config.budget.unwrap_or(50))
            .map(|_| {
                let degree = rng.gen_range(-2..=2 * g);
                random_divisor(&mut rng, n, degree)
            })
            .collect()
    } else {
        pushed.to_vec()
    };
    let mut checks = Vec::new();
    for d in &divisors {
        checks.push((d, check_riemann_roch(curve, d)?));
    }
    let failures = checks.iter().filter(|(_, c)| !c.holds).count();
    let mut body = Body::new(failures == 0)
        .field("checked", checks.len())
        .field("failures", failures)
        .field(
            "results",
            checks
                .iter()
                .map(|(d, c)| json!({ "divisor": d, "check": c }))
                .collect::<Vec<_>>(),
        );
    body.line(format!("{} divisors checked, {failures} failures", checks.len()));
    Ok(body)
}

fn scan_config(config: &RunConfig) -> ScanConfig {
    ScanConfig {
        degree_cap: config.degree_cap,
        sample_budget: config.budget.unwrap_or(10_000),
        seed: config.seed,
        max_examined: None,
    }
}

fn scan_fields(curve: &Curve, scan: &CliffordScan, body: Body) -> Body {
    let equality: Vec<Value> = scan
        .equality_classes()
        .iter()
        .map(|r| divisor_json(curve, &r.class))
        .collect();
    let mut body = body
        .field("scan", scan)
        .field("equality_classes", &equality);
    body.line(format!("{} classes scanned", scan.records.len()));
    body.line(format!(
        "equality classes: {{{}}}",
        scan.equality_classes()
            .iter()
            .map(|r| curve.describe(&r.class))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    body.line(format!("clifford violations: {}", scan.violations.len()));
    match (&scan.g12, &scan.hyperelliptic) {
        (Some(g12), Some(h)) => body.line(format!(
            "g2^1 = |{}|, equality classes are its multiples: {}",
            curve.describe(&g12.representative),
            h.holds()
        )),
        _ => body.line(format!("no g2^1 at resolution {}", scan.resolution)),
    }
    body
}

fn clifford(curve: &Curve, config: &RunConfig) -> Result<Body> {
    let scan = clifford_scan(curve, &scan_config(config))?;
    let mut body = scan_fields(curve, &scan, Body::new(scan.passed()));
    if !scan.complete {
        body.status = Some(Status::BudgetExceeded);
    }
    Ok(body)
}

fn g12(curve: &Curve) -> Result<Body> {
    let cert = find_g12(curve)?;
    let decomposition = match &cert {
        Some(c) => Some(check_canonical_decomposition(curve, Some(c))?),
        None => None,
    };
    let passed = cert.as_ref().is_none_or(|c| c.unique_class) && decomposition != Some(false);
    let verdict = match &cert {
        Some(_) => "hyperelliptic".to_string(),
        None => format!("no g2^1 found at resolution {}", curve.resolution()),
    };
    let mut body = Body::new(passed)
        .field("verdict", &verdict)
        .field("certificate", &cert)
        .field("canonical_decomposition", decomposition)
        .field(
            "representative",
            cert.as_ref().map(|c| divisor_json(curve, &c.representative)),
        );
    body.line(&verdict);
    if let Some(c) = &cert {
        body.line(format!(
            "g2^1 = |{}|; {} degree-2 rank-1 divisors found, unique class: {}",
            curve.describe(&c.representative),
            c.all_found.len(),
            c.unique_class
        ));
    }
    Ok(body)
}

fn low_genus(curve: &Curve, config: &RunConfig) -> Result<Body> {
    let scan = clifford_scan(curve, &scan_config(config))?;
    let check = check_low_genus_implication(curve, &scan)?;
    let mut body = scan_fields(curve, &scan, Body::new(scan.passed() && check.holds))
        .field("low_genus", &check);
    body.line(format!(
        "interior equality cases: {}; g2^1 found: {}; implication holds: {}",
        check.interior_cases.len(),
        check.g12_found,
        check.holds
    ));
    Ok(body)
}

fn hunt(config: &RunConfig) -> Result<Body> {
    if config.graph.is_some() {
        return Err(Error::Precondition("hunt takes --fixture generators, not --graph".into()));
    }
    let generators = if config.fixtures.is_empty() {
        HuntConfig::default_generators(config.seed, 4)
    } else {
        config.fixtures.clone()
    };
    let hunt = HuntConfig {
        generators,
        resolution: config.resolution.unwrap_or(1),
        g12_resolution: 2,
        degree_cap: config.degree_cap,
        sample_budget: 1_000,
        budget: config.budget.unwrap_or(100_000),
        seed: config.seed,
    };
    let report = counterexample_search(&hunt)?;
    let violations: usize = report.entries.iter().map(|e| e.clifford_violations).sum();
    let mut body = Body::new(violations == 0)
        .field("generators", hunt.generators.iter().map(ToString::to_string).collect::<Vec<_>>())
        .field("g12_resolution", hunt.g12_resolution)
        .field("scan_resolution", hunt.resolution)
        .field("candidates", report.candidate_count())
        .field("hunt", &report);
    if !report.complete {
        body.status = Some(Status::BudgetExceeded);
    }
    for e in &report.entries {
        let mut line = String::new();
        let _ = write!(line, "{} (genus {}): ", e.fixture, e.genus);
        if e.hyperelliptic {
            let _ = write!(line, "hyperelliptic at resolution {}, skipped", e.g12_resolution);
        } else {
            let _ = write!(line, "{} candidate(s)", e.candidates.len());
        }
        body.line(line);
    }
    body.line(format!(
        "{} divisors examined, complete: {}",
        report.examined, report.complete
    ));
    Ok(body)
}
