//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;
use crate::suites::Suite;

#[derive(Debug, Parser)]
#[command(name = "logmaj", version, about = "Numerical checks of log-majorization, matrix-mean and trace inequalities")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed of every randomized suite and generator.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Tolerance override, e.g. `--tol eq_tol=1e-6`; repeatable.
    #[arg(long = "tol", value_name = "KEY=VAL", global = true)]
    pub tol: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report encoding.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two spectra: `λ(A) ≺ λ(B)` in the chosen order.
    Majorize {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Log)]
        kind: Order,
        /// Compare singular values instead of eigenvalues (non-Hermitian inputs).
        #[arg(long)]
        singular: bool,
    },
    /// `λ(A^{p/2}B^pA^{p/2}) ≺_log λ((A^{1/2}BA^{1/2})^p)`.
    Araki {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Extended Araki inequality for commuting pairs `(A1, A2)`, `(B1, B2)`.
    ArakiExt {
        a1: PathBuf,
        a2: PathBuf,
        b1: PathBuf,
        b2: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = Convention::Identity)]
        conv: Convention,
        /// Also check the norm form with this norm (`trace`, `frobenius`, `operator`, `schatten:p`, `kyfan:k`).
        #[arg(long)]
        norm: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
    },
    /// Matrix means of PD matrices.
    Mean {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = MeanKind::Karcher)]
        kind: MeanKind,
        /// JSON array of weights; uniform if omitted.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Exponent of `geo2` (`A #_α B`) or of the power mean.
        #[arg(long)]
        alpha: Option<f64>,
        /// Write the mean as a matrix file here; otherwise it is embedded in the record.
        #[arg(long)]
        mean_out: Option<PathBuf>,
    },
    /// α-z-Rényi divergence of two states, or a scan.
    Divergence {
        rho: PathBuf,
        sigma: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, value_enum)]
        scan: Option<ScanKind>,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0)]
        z0: f64,
        /// `lo:hi:n` or a comma-separated list.
        #[arg(long)]
        grid: Option<String>,
        /// Write the scan rows as CSV (alpha, z, value, finite) here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Multivariate Golden–Thompson bound (θ = 0) or its log-majorization (θ > 0).
    Gt {
        matrices: Vec<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Tail mass of the quadrature.
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
        /// Use the block-diagonal triple built from `diag(1,0)` and `[[0,1],[1,0]]`.
        #[arg(long, conflicts_with = "matrices")]
        equality_triple: bool,
        /// Write per-node integrand values as CSV (t, weight, value) here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Taylor coefficients of `t ↦ G_ω(e^{tH_1}, …, e^{tH_n})` from Hermitian `H_j`.
    Taylor {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Also run the finite-difference oracle with this step (orders ≤ 4).
        #[arg(long)]
        fd_step: Option<f64>,
    },
    /// Equality conditions for the rescaled Karcher mean.
    Eqcase {
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
        #[arg(long)]
        weights: Option<PathBuf>,
        /// `trace`, `frobenius` or `schatten:p`.
        #[arg(long, default_value = "frobenius")]
        norm: String,
        /// Probe exponent.
        #[arg(long, default_value_t = 0.5)]
        t: f64,
    },
    /// Lie–Trotter–Kato error table for PSD `A`, `B`.
    Ltk {
        a: PathBuf,
        b: PathBuf,
        /// Decreasing `t` values (`lo:hi:n` is not accepted here); default `2^{-k}`, k = 1..10.
        #[arg(long, value_delimiter = ',')]
        ts: Vec<f64>,
    },
    /// Draw random matrices; one matrix file per line.
    Random {
        #[arg(long)]
        m: usize,
        /// `pd`, `psd-rank:r`, `commuting-family:n` or `log-uniform:radius`.
        #[arg(long, default_value = "pd")]
        kind: String,
    },
    /// Run a randomized property suite.
    Run {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest dimension drawn by the suites.
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Log,
    Weak,
    Sum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Identity,
    Support,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeanKind {
    Karcher,
    Le,
    Power,
    Geo2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    Alpha,
    Z,
    Line,
}
