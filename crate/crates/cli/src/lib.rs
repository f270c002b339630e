//! Command-line front end: piece tables, truncated complexes with flow
//! checks, and the verification suite.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use cocenter_core::pieces::EnhancedNewtonPoint;
use cocenter_core::{AffineSystem, BigRational};

pub mod commands;
pub mod verify;

#[derive(Parser, Debug, Clone)]
#[command(name = "cocenter", version, about = "Bédard pieces, truncated complexes and checks for affine Weyl groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for all sampling; recorded in the report header.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Write the report to this file as well as stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Table of classes and their pieces u/J.
    Pieces(PiecesArgs),
    /// Facets and order of a truncated complex, with optional flow checks.
    Bcomplex(BcomplexArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PiecesArgs {
    /// Root datum, e.g. A1, A1:ad, C2, G2.
    #[arg(long = "type")]
    pub ty: String,
    /// Node subset, e.g. "s1" or "s0,s1"; empty for the empty set.
    #[arg(long = "J", default_value = "")]
    pub j: String,
    #[arg(long, default_value_t = 2)]
    pub max_len: usize,
}

#[derive(Args, Debug, Clone)]
pub struct BcomplexArgs {
    #[arg(long = "type")]
    pub ty: String,
    /// Dominant Newton point, comma-separated rationals in lattice coordinates.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub nu: String,
    /// Index of the Ω-component.
    #[arg(long, default_value_t = 0)]
    pub omega: usize,
    /// Length bound of the truncation.
    #[arg(long = "L", default_value_t = 2)]
    pub l: usize,
    /// Flow samples per facet for each length cut; 0 skips the flow check.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long)]
    pub essential_only: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Directory holding chi.txt and c.txt; defaults to the shipped tables.
    #[arg(long, env = "COCENTER_TABLES")]
    pub tables: Option<PathBuf>,
    /// Run only these checks (comma-separated names).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Flow samples per facet.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
}

/// Output of a command: the deterministic report, console-only lines
/// (timings), and whether every check passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub report: String,
    pub console: String,
    pub ok: bool,
}

pub fn parse_system(spec: &str) -> Result<AffineSystem> {
    AffineSystem::parse(spec).map_err(|e| anyhow::anyhow!("{spec}: {e}"))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().with_context(|| format!("bad rational '{s}'"))?;
    let d: BigInt = d.trim().parse().with_context(|| format!("bad rational '{s}'"))?;
    if d == BigInt::from(0) {
        bail!("zero denominator in '{s}'");
    }
    Ok(BigRational::new(n, d))
}

/// `--nu` and `--omega` as an enhanced Newton point. A lone `0` stands for
/// the zero vector in any rank.
pub fn parse_newton(sys: &AffineSystem, nu: &str, omega: usize) -> Result<EnhancedNewtonPoint> {
    let mut v: Vec<BigRational> = nu.split(',').map(parse_rational).collect::<Result<_>>()?;
    if v.len() == 1 && v[0] == BigRational::from_integer(0.into()) {
        v = vec![v[0].clone(); sys.rank()];
    }
    if v.len() != sys.rank() {
        bail!("--nu has {} coordinates, the lattice has rank {}", v.len(), sys.rank());
    }
    let om = sys.omega_group().get(omega).with_context(|| format!("--omega {omega} out of range (|Ω| = {})", sys.omega_group().len()))?;
    let (dom, _) = sys.datum().dominant_representative(&v);
    if dom != v {
        bail!("--nu must be dominant");
    }
    Ok(EnhancedNewtonPoint { nu: v, omega: om.clone() })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut out = match &cli.command {
        Command::Pieces(a) => commands::cmd_pieces(a)?,
        Command::Bcomplex(a) => commands::cmd_bcomplex(a, cli.seed)?,
        Command::Verify(a) => verify::cmd_verify(a, cli.seed, true)?,
    };
    let header = format!("# cocenter {} seed={}\n", command_line(&cli.command), cli.seed);
    out.report = header + &out.report;
    Ok(out)
}

fn command_line(c: &Command) -> String {
    match c {
        Command::Pieces(a) => format!("pieces type={} J={{{}}} max-len={}", a.ty, a.j, a.max_len),
        Command::Bcomplex(a) => format!(
            "bcomplex type={} nu={} omega={} L={} samples={}{}",
            a.ty,
            a.nu,
            a.omega,
            a.l,
            a.samples,
            if a.essential_only { " essential-only" } else { "" }
        ),
        Command::Verify(a) => {
            let only = if a.only.is_empty() { "all".to_string() } else { a.only.join(",") };
            format!("verify only={only} samples={}", a.samples)
        }
    }
}
