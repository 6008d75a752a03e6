use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Batch analyses of length spectra of matrix groups.
#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "lenspec", version, about)]
pub struct RunConfig {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Group definition file.
    #[arg(long, global = true, conflicts_with = "preset")]
    pub group: Option<PathBuf>,
    /// Built-in group (see `lenspec examples`).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Maximal word length; each command has its own default.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Precision ceiling in bits for certified comparisons.
    #[arg(long, global = true, default_value_t = 512)]
    pub precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "verb", rename_all = "lowercase")]
pub enum Command {
    /// Lengths of primitive closed geodesics (CSV by default).
    Spectrum {
        /// Keep `w` and its inverse as separate classes.
        #[arg(long)]
        oriented: bool,
    },
    /// Certified gaps between neighbouring lengths.
    Gaps,
    /// Separation fit, Milnor constants and the certified gap bound.
    Fit,
    /// Length-equalizing perturbation schedule on the third generator.
    Smallgap {
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// `exp`, `exp:ALPHA`, `exp2` or `table:t=F;...`.
        #[arg(long, default_value = "exp:1")]
        function: String,
        #[arg(long, default_value_t = 6)]
        start_n: u32,
        #[arg(long, default_value_t = 2)]
        n_step: u32,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
    },
    /// Polynomial bound checks.
    Diophantine {
        #[command(subcommand)]
        check: Check,
    },
    /// Lists presets, or prints the group text of `--preset`.
    Examples,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "check", rename_all = "lowercase")]
pub enum Check {
    /// Quadratic-exponential gap bound on seeded genus-g tuples.
    Quadexp {
        #[arg(long, default_value_t = 2)]
        genus: u32,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 20)]
        tuples: usize,
    },
    /// Distance of words from the identity on seeded Schottky tuples, or on
    /// the given group.
    Identity {
        #[arg(long, default_value_t = 2)]
        generators: usize,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 20)]
        tuples: usize,
    },
    /// Sup of a polynomial on the cube against the extremal lower bound.
    Chebyshev {
        #[arg(long)]
        poly: String,
    },
    /// Sublevel-set measure on the cube against the Remez-type bound.
    Remez {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Overrides the default constant `(4 n vol)^D`.
        #[arg(long)]
        c_b: Option<f64>,
    },
    /// Convergence of `Σ M_N ε_N^{1/D_N}`.
    Summability {
        /// `closing` (genus series), `identity`, or `custom`.
        #[arg(long, default_value = "closing")]
        series: String,
        /// Genus for `closing`, generator count for `identity`.
        #[arg(long, default_value_t = 2)]
        index: u32,
        /// Exact rational, e.g. `1/10`.
        #[arg(long, default_value = "1/10")]
        eta: String,
        /// `exp:BASE:c0,c1,...` or `pow:P` (custom series).
        #[arg(long)]
        epsilon: Option<String>,
        /// `poly:c0,c1,...` (custom series).
        #[arg(long)]
        degree: Option<String>,
        /// Same syntax as `--epsilon` (custom series).
        #[arg(long)]
        multiplicity: Option<String>,
    },
}
