//! `tubealg` command-line front end.
//!
//! Exit codes: 0 success; 1 a check failed (invalid category, no modular
//! match, failed round trip); 2 bad input (missing file, parse error,
//! unknown fixture, bad flag); 3 numerical failure during the computation.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tubealg::category::{json, FusionCategory};
use tubealg::error::Error;
use tubealg::fixtures;
use tubealg::par;
use tubealg::report::{
    compare_payload, condense_payload, defects_payload, gauge_payload, modular_payload, spectrum_payload,
    validate_payload, Payload, Provenance, TheoryReport, SNAP_DENOMINATOR,
};

#[derive(Parser, Debug)]
#[command(name = "tubealg", version, about = "Anyons, defects, gauging and condensation from tube algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Md,
    Json,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Category JSON files.
    files: Vec<String>,
    /// Built-in fixture (repeatable); see `tubealg fixtures`.
    #[arg(long = "fixture")]
    fixtures: Vec<String>,
    /// Random seed (decimal or 0x-prefixed hex).
    #[arg(long, env = "TUBEALG_SEED", default_value = "0xC0FFEE", value_parser = parse_seed)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, default_value_t = tubealg::DEFAULT_TOL)]
    tol: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Grading sector (name or index) for `spectrum`.
    #[arg(long)]
    sector: Option<String>,
    /// Largest denominator q when rendering phases as e^{iπ p/q}.
    #[arg(long, default_value_t = SNAP_DENOMINATOR)]
    snap_denominator: u32,
    /// Force the sequential code path.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the category axioms (pentagon, unitarity, gauge, grading).
    Validate(Common),
    /// Decompose the tube algebra into irreducible central idempotents.
    Spectrum(Common),
    /// Modular data of the emergent anyon theory.
    Modular(Common),
    /// Defects, symmetry action, fractionalization and G-crossed data.
    Defects(Common),
    /// Gauge the grading group and compare with the direct double.
    Gauge(Common),
    /// Break the grading symmetry to the trivial sector.
    Condense(Common),
    /// Compare the doubles of two inputs up to relabeling.
    Compare(Common),
    /// List the built-in fixtures.
    Fixtures,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

enum Failure {
    Check(String),
    Input(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Malformed(_)
            | Error::Parse(_)
            | Error::SchemaVersionMismatch(_)
            | Error::UnknownName(_)
            | Error::UnknownFixture(_)
            | Error::Unsupported(_)
            | Error::InvalidCocycle(_)
            | Error::NotNormal(_)
            | Error::Io(_) => Failure::Input(e.to_string()),
            Error::InvalidCategory(_) => Failure::Check(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn load_inputs(c: &Common) -> Result<Vec<(String, FusionCategory)>, Failure> {
    let mut out = Vec::new();
    for name in &c.fixtures {
        out.push((name.clone(), fixtures::fixture(name)?));
    }
    for path in &c.files {
        out.push((path.clone(), json::load(path)?));
    }
    if out.is_empty() {
        return Err(Failure::Input("no input: give a category file or --fixture NAME".into()));
    }
    Ok(out)
}

fn single(c: &Common) -> Result<(String, FusionCategory), Failure> {
    let mut v = load_inputs(c)?;
    if v.len() != 1 {
        return Err(Failure::Input(format!("expected exactly one input, got {}", v.len())));
    }
    Ok(v.remove(0))
}

fn sector_index(cat: &FusionCategory, s: &str) -> Result<usize, Failure> {
    let g = cat.grading().ok_or_else(|| Failure::Input("--sector needs a graded category".into()))?;
    g.group
        .index_of(s)
        .or_else(|| s.parse().ok().filter(|&i: &usize| i < g.group.order()))
        .ok_or_else(|| Failure::Input(format!("unknown sector `{s}`")))
}

fn run(cmd: &str, c: &Common) -> Result<(TheoryReport, bool), Failure> {
    if c.sequential {
        par::set_parallel(false);
    }
    let (sources, payload) = if cmd == "compare" {
        let v = load_inputs(c)?;
        if v.len() != 2 {
            return Err(Failure::Input(format!("compare needs two inputs, got {}", v.len())));
        }
        let p = compare_payload(&v[0].1, &v[1].1, c.seed, c.tol)?;
        (vec![v[0].0.clone(), v[1].0.clone()], Payload::Compare(p))
    } else {
        let (name, cat) = single(c)?;
        let payload = match cmd {
            "validate" => Payload::Validate(validate_payload(&cat, 1e-9)),
            "spectrum" => {
                let sector = c.sector.as_deref().map(|s| sector_index(&cat, s)).transpose()?;
                Payload::Spectrum(spectrum_payload(&cat, sector, c.seed, c.tol)?)
            }
            "modular" => Payload::Modular(modular_payload(&cat, c.seed, c.tol)?),
            "defects" => Payload::Defects(defects_payload(&cat, c.seed, c.tol)?),
            "gauge" => Payload::Gauge(gauge_payload(&cat, c.seed, c.tol)?),
            "condense" => Payload::Condense(condense_payload(&cat, c.seed, c.tol)?),
            _ => unreachable!("subcommands are fixed"),
        };
        (vec![name], payload)
    };
    let ok = match &payload {
        Payload::Validate(v) => v.valid,
        Payload::Compare(p) => p.matched,
        Payload::Gauge(g) => g.morita_match,
        Payload::Condense(p) => p.roundtrip,
        _ => true,
    };
    let report = TheoryReport {
        provenance: Provenance::new(cmd, sources, c.seed, c.tol, c.snap_denominator),
        payload,
    };
    Ok((report, ok))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, common) = match &cli.command {
        Command::Validate(c) => ("validate", c),
        Command::Spectrum(c) => ("spectrum", c),
        Command::Modular(c) => ("modular", c),
        Command::Defects(c) => ("defects", c),
        Command::Gauge(c) => ("gauge", c),
        Command::Condense(c) => ("condense", c),
        Command::Compare(c) => ("compare", c),
        Command::Fixtures => {
            for f in fixtures::registry() {
                println!("{:<18} {}", f.name, f.description);
            }
            println!("{:<18} Vec_G^alpha, ungraded (e.g. vec_g_omega:S3:sign)", "vec_g_omega:G:a");
            println!("{:<18} Vec_G^alpha graded by G (e.g. spt:Z2xZ2:II)", "spt:G:a");
            return ExitCode::SUCCESS;
        }
    };
    match run(name, common) {
        Ok((report, ok)) => {
            match common.format {
                Format::Md => print!("{}", report.to_markdown()),
                Format::Json => println!("{}", report.to_json()),
            }
            if let Payload::Validate(v) = &report.payload {
                if !v.valid {
                    eprintln!("{}", serde_json::to_string(&v.violations).expect("violations serialize"));
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
