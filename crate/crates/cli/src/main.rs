use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tropdiv::fixtures::FixtureSpec;
use tropdiv::harness::{run_command, Command, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "tropdiv", version, about = "Divisor theory on metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// First Betti number of the graph
    Genus(Common),
    /// Canonical divisor
    Canonical(Common),
    /// Reduced form of each divisor relative to the base vertex
    Reduce(Common),
    /// Rank of each divisor
    Rank(Common),
    /// Linear equivalence of two divisors
    Equiv(Common),
    /// Riemann-Roch check on given or random divisors
    RrCheck(Common),
    /// Clifford bound scan over effective classes
    CliffordScan(Common),
    /// Search for a degree-2 rank-1 divisor
    G12(Common),
    /// Equality cases imply hyperellipticity in genus 2 to 4
    LowGenusCheck(Common),
    /// Search for non-hyperelliptic equality cases in genus 5 and up
    Hunt(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Graph file
    #[arg(long)]
    graph: Option<PathBuf>,
    /// `K`, a divisor file, or inline `chip 1 at u;chip 1 at v`
    #[arg(long = "divisor")]
    divisors: Vec<String>,
    /// Named fixture, e.g. `theta`, `flower:3`, `random:6,11,42`
    #[arg(long = "fixture", value_parser = parse_fixture)]
    fixtures: Vec<FixtureSpec>,
    /// Subdivide so that points at multiples of 1/N are vertices
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    resolution: Option<u32>,
    #[arg(long)]
    degree_cap: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_fixture(s: &str) -> Result<FixtureSpec, String> {
    s.parse().map_err(|e: tropdiv::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (command, common) = match cli.command {
        Cmd::Genus(c) => (Command::Genus, c),
        Cmd::Canonical(c) => (Command::Canonical, c),
        Cmd::Reduce(c) => (Command::Reduce, c),
        Cmd::Rank(c) => (Command::Rank, c),
        Cmd::Equiv(c) => (Command::Equiv, c),
        Cmd::RrCheck(c) => (Command::RrCheck, c),
        Cmd::CliffordScan(c) => (Command::CliffordScan, c),
        Cmd::G12(c) => (Command::G12, c),
        Cmd::LowGenusCheck(c) => (Command::LowGenusCheck, c),
        Cmd::Hunt(c) => (Command::Hunt, c),
    };
    let format = match common.format {
        Format::Json => OutputFormat::Json,
        Format::Text => OutputFormat::Text,
    };
    let config = RunConfig {
        command,
        graph: common.graph,
        fixtures: common.fixtures,
        divisors: common.divisors,
        resolution: common.resolution,
        degree_cap: common.degree_cap,
        budget: common.budget,
        seed: common.seed,
        format,
        jobs: common.jobs,
    };
    let outcome = run_command(&config);
    print!("{}", outcome.render(format));
    if outcome.status.code() != 0 && format == OutputFormat::Json {
        if let Some(err) = outcome.report.get("error").and_then(|e| e.as_str()) {
            eprintln!("error: {err}");
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
