use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::fiberlab::ChartFamily;
use crate::nullcones::Family;
use crate::pointcount::{ChainFamily, Space, DEFAULT_BUDGET};
use crate::polycore::FieldSpec;

fn as_text<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn opt_as_text<T: std::fmt::Display, S: Serializer>(
    v: &Option<T>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nullcone",
    version,
    about = "Verification harness for determinantal nullcone ideals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format. CSV is available for `grid` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the record to this path instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Shape {
    #[arg(long)]
    #[serde(serialize_with = "as_text")]
    pub family: Family,
    #[arg(short, long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(short, long)]
    pub t: usize,
    #[arg(short, long)]
    pub n: usize,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Emit the generators of the nullcone ideal.
    Construct {
        #[command(flatten)]
        #[serde(flatten)]
        shape: Shape,
        #[arg(long, default_value = "p=32003")]
        #[serde(serialize_with = "as_text")]
        field: FieldSpec,
    },
    /// Compare the Gröbner height with the closed formula.
    Height {
        #[command(flatten)]
        #[serde(flatten)]
        shape: Shape,
        #[arg(long, default_value = "p=32003")]
        #[serde(serialize_with = "as_text")]
        field: FieldSpec,
        /// Use the variety-of-complexes ideal 𝔭ᵢⱼ (generic family), as `i,j`.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        vc: Option<String>,
    },
    /// Sample and verify an arithmetic-rank certificate.
    AraCertify {
        #[command(flatten)]
        #[serde(flatten)]
        shape: Shape,
        #[arg(long, default_value = "p=32003")]
        #[serde(serialize_with = "as_text")]
        field: FieldSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of candidates; defaults to the arithmetic-rank formula.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
        #[arg(long, default_value_t = 20)]
        retries: usize,
        #[arg(long, default_value_t = 101)]
        min_prime: u64,
    },
    /// Run one of the ideal identities or local checks.
    CheckIdentities {
        #[arg(long, value_enum)]
        check: IdentityCheck,
        #[arg(short, long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        #[arg(short, long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        t: Option<usize>,
        #[arg(short, long)]
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        #[arg(long, default_value = "rational")]
        #[serde(serialize_with = "as_text")]
        field: FieldSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        retries: usize,
    },
    /// Point counts over 𝔽_q for strata and bundle chains.
    Count {
        #[arg(long, required_unless_present = "chain")]
        #[serde(
            serialize_with = "opt_as_text",
            skip_serializing_if = "Option::is_none"
        )]
        space: Option<Space>,
        /// Check the bundle chain of a family (alt, gen, sym) instead.
        #[arg(long, conflicts_with_all = ["space", "primes"])]
        #[serde(
            serialize_with = "opt_as_text",
            skip_serializing_if = "Option::is_none"
        )]
        chain: Option<ChainFamily>,
        #[arg(short, long, default_value_t = 0)]
        m: usize,
        #[arg(short, long, default_value_t = 0)]
        t: usize,
        #[arg(short, long, default_value_t = 0)]
        n: usize,
        #[arg(short, long, default_value_t = 0)]
        k: usize,
        #[arg(short, long, default_value_t = 3)]
        q: u64,
        /// Fit a polynomial in q to counts at these primes.
        #[arg(long, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Option::is_none")]
        primes: Option<Vec<u64>>,
        #[arg(long, requires = "primes")]
        #[serde(skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Run the seeded fiber-bundle property suites.
    FiberCheck {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Restrict the chart suite to one family.
        #[arg(long)]
        #[serde(
            serialize_with = "opt_as_text",
            skip_serializing_if = "Option::is_none"
        )]
        family: Option<ChartFamily>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value = "p=101")]
        #[serde(serialize_with = "as_text")]
        field: FieldSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run a named acceptance grid.
    Grid {
        #[arg(value_enum)]
        name: GridName,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityCheck {
    Intersection,
    IntersectPij,
    Decomposition,
    LocalizationPfaffian,
    LocalizationGeneric,
    LocalizationSymmetric,
    Char2,
    DetIdentity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Charts,
    Symplectic,
    AltSqrt,
    Unitary,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridName {
    Heights,
    Certificates,
    Char2,
    Identities,
    Localization,
    Fiber,
    Counts,
}
