use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "expsum",
    version,
    about = "Exponential sums, mean values, exponent pairs and zeta on the critical line"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random or quasi-random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, env = "EXPSUM_THREADS")]
    pub threads: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write a gnuplot script for the CSV written to --out.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// Record wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Direct evaluation of exponential sums.
    #[command(subcommand)]
    Expsum(ExpsumCmd),
    /// Mean values A_r and Vinogradov counts.
    #[command(subcommand)]
    Meanvalue(MeanvalueCmd),
    /// Decoupling probes.
    #[command(subcommand)]
    Decouple(DecoupleCmd),
    /// Exponent-pair calculus.
    #[command(subcommand)]
    Pairs(PairsCmd),
    /// Piecewise exponent bounds and parameter plans.
    #[command(subcommand)]
    Planner(PlannerCmd),
    /// Zeta on the critical line.
    #[command(subcommand)]
    Zeta(ZetaCmd),
}

#[derive(Debug, Subcommand)]
pub enum ExpsumCmd {
    /// Σ_{n≤N} e(n x1 + n² x2 + N^{1/2} n^{3/2} x3 + N^{1/2} n^{1/2} x4).
    Quadruple {
        #[arg(long)]
        n: u64,
        /// x1,x2,x3,x4
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
    },
    /// Σ_{M/2<m≤M} e(T F(m/M)) with T in cycles.
    S {
        #[arg(long = "T", alias = "t")]
        t: f64,
        #[arg(long = "M", alias = "m")]
        m: u64,
        #[arg(long, value_enum, default_value_t = Phase::Log)]
        phase: Phase,
        /// Exponent for the monomial phase, e.g. 3/2.
        #[arg(long, default_value = "2")]
        exponent: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Phase {
    Log,
    Monomial,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    /// One or more N, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = 6)]
    pub r: u32,
}

#[derive(Debug, Subcommand)]
pub enum MeanvalueCmd {
    /// Exact count of 2r-tuples with windowed x3, x4 conditions.
    Windowed {
        #[command(flatten)]
        common: MeanArgs,
        /// Defaults to N^{-1/2}.
        #[arg(long)]
        window3: Option<f64>,
        /// Defaults to N^{-1/2}.
        #[arg(long)]
        window4: Option<f64>,
    },
    /// Exact A_r as a kernel-weighted sum over tuples.
    Kernel {
        #[command(flatten)]
        common: MeanArgs,
        #[command(flatten)]
        scales: Scales,
    },
    /// Monte-Carlo estimate of A_r.
    Quadrature {
        #[command(flatten)]
        common: MeanArgs,
        #[command(flatten)]
        scales: Scales,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// J_{s,2}(N).
    Vinogradov {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        s: u32,
    },
}

#[derive(Debug, Args)]
pub struct Scales {
    /// Defaults to N^{-2}.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Defaults to N^{-1}.
    #[arg(long = "big-delta")]
    pub big_delta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum DecoupleCmd {
    /// Ratio of both sides across several N, with a fitted log-log slope.
    Scan {
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, value_enum, default_value_t = EnsembleArg::Ones)]
        ensemble: EnsembleArg,
        #[arg(long, default_value_t = 1 << 18)]
        samples: u64,
        /// Use the exact J count (d = 2, ones only).
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    Ones,
    RandomSigns,
    RandomPhase,
}

#[derive(Debug, Subcommand)]
pub enum PairsCmd {
    /// Apply an A/B word to a seed pair (rightmost letter first).
    Word {
        #[arg(long)]
        word: String,
        #[arg(long = "seed-pair", default_value = "0,1")]
        seed_pair: String,
    },
    /// Exhaustive search for the best word.
    Search {
        #[arg(long = "max-len", default_value_t = 8)]
        max_len: usize,
        /// Seed pairs separated by ';', e.g. "0,1;1/6,2/3".
        #[arg(long = "seed-pairs", default_value = "0,1")]
        seed_pairs: String,
        /// zeta, k-plus-l, or affine:c1,c2
        #[arg(long, default_value = "zeta")]
        objective: String,
        /// Leave out the pair (13/84, 55/84).
        #[arg(long = "no-axiom")]
        no_axiom: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlannerCmd {
    /// Envelope exponent at every rational α in [0,1] up to a denominator bound.
    Envelope {
        #[arg(long = "denominator-bound", default_value_t = 100)]
        denominator_bound: u64,
    },
    /// Regime, N and R for one (T, M, c).
    Plan {
        #[arg(long = "T", alias = "t")]
        t: f64,
        #[arg(long = "M", alias = "m")]
        m: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1e6)]
        t0: f64,
    },
    /// Exact check that the envelope stays below α/2 + 13/84 on [0, 1/2].
    Coverage {
        #[arg(long = "denominator-bound", default_value_t = 1000)]
        denominator_bound: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZetaCmd {
    /// |ζ(1/2+it)| / t^{13/84} on a jittered log grid.
    Scan {
        #[arg(long = "t-min", default_value_t = 10.0)]
        t_min: f64,
        #[arg(long = "t-max", default_value_t = 1e4)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Replace |ζ| by 1.
        #[arg(long)]
        constant: bool,
    },
    /// ζ(1/2+it) by Euler–Maclaurin.
    Value {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Defaults to ⌈10 + |t|/2⌉.
        #[arg(long)]
        terms: Option<u64>,
    },
    /// Main sum of the approximate functional equation and the one-sided check.
    Afe {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 2.0)]
        slack: f64,
    },
}
