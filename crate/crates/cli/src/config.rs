//! Command-line surface and the run configuration embedded in every
//! artifact. A run is fully described by its [`RunConfig`]; `replay` parses
//! it back and re-executes it.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use tempered::hermite::DEFAULT_CAP;
use tempered::precision::DEFAULT_BITS;

#[derive(Debug, Parser)]
#[command(name = "tgf", version, about = "Hermite-expansion algebra of tempered generalized functions")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    /// Worker threads for parallel sections. Not recorded in the config.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Common {
    /// Sequence index `n` (or the last index of a prefix).
    #[arg(long, global = true, default_value_t = 32)]
    pub order: usize,
    /// Nominal precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_BITS)]
    pub prec_bits: u32,
    /// Largest Hermite index that may be built.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Analytic,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Forward,
    Inverse,
}

const GRID: &str = "-4:4:17";
const BM: &str = "bm:0:1";

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// Hermite coefficients `0..=order` of a distribution.
    Coeffs {
        /// delta, one, heaviside, dprime, xplus:p, hermite:k, abs:a, sgn:a, delta_at:a, gauss:c
        #[arg(long)]
        dist: String,
    },
    /// Values of the representative at `--order` on a grid.
    EmbedEval {
        #[arg(long)]
        expr: String,
        /// `lo:hi:points`
        #[arg(long, default_value = GRID)]
        grid: String,
    },
    /// Values of the product representative on a grid.
    Product {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value = GRID)]
        grid: String,
    },
    /// Values of the Fourier transform on a grid.
    Fourier {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Backend::Analytic)]
        backend: Backend,
        #[arg(long, value_enum, default_value_t = Dir::Forward)]
        direction: Dir,
        #[arg(long, default_value = GRID)]
        grid: String,
    },
    /// The tempered number `∫ F_n` for `n` in `from..=order`.
    Integrate {
        #[arg(long)]
        expr: String,
        /// `full`, `halfline:a:left|right` or `intervals:a:b,c:d,..`
        #[arg(long, default_value = "full")]
        region: String,
        #[arg(long, default_value_t = 0)]
        from: usize,
    },
    /// The tempered number `F_n(a)` for `n` in `from..=order`.
    Pointvalue {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "0")]
        at: String,
        #[arg(long, default_value_t = 0)]
        from: usize,
    },
    /// Association test against `h_0..h_probes` and two seeded probes.
    Associate {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 4)]
        probes: usize,
        #[arg(long, default_value_t = 1e-3)]
        assoc_tol: f64,
    },
    /// Growth class of `n ↦ ‖F_n‖_m`.
    Moderation {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 0)]
        m: usize,
    },
    /// Hermite coefficients of the truncated product of two streams.
    Symprod {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Pathwise Itô residuals.
    Ito {
        #[arg(long)]
        expr: String,
        /// `bm:x0:sigma`, `drift_bm:x0:mu:sigma`, `ou:x0:theta:mean:sigma`,
        /// `deterministic:c0,c1,..` or a JSON process spec
        #[arg(long, default_value = BM)]
        process: String,
        /// Finite-variation knots `t:v,t:v,..`
        #[arg(long)]
        fv: Option<String>,
        #[arg(long = "t-end", visible_alias = "T", default_value_t = 1.0)]
        t_end: f64,
        /// Comma-separated step sizes.
        #[arg(long, default_value = "0.01,0.005")]
        dt: String,
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        /// Comma-separated levels; `--order` when absent.
        #[arg(long)]
        levels: Option<String>,
    },
    /// Pathwise Tanaka residuals for `|X - a|`.
    Tanaka {
        #[arg(long, default_value = "0")]
        a: String,
        #[arg(long, default_value = BM)]
        process: String,
        #[arg(long)]
        fv: Option<String>,
        #[arg(long = "t-end", visible_alias = "T", default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 200)]
        paths: usize,
        #[arg(long, default_value = "4,16,64")]
        levels: String,
    },
    /// Monte Carlo Dynkin defect for Brownian motion from `x`.
    Dynkin {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long)]
        levels: Option<String>,
    },
    /// Heat evolution `F_n ∗ p_t` and its PDE residual.
    Heat {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "1/10,1")]
        times: String,
        #[arg(long, default_value = "0,1")]
        xs: String,
    },
    /// Re-runs the configuration embedded in an artifact.
    Replay {
        /// A CSV or JSON artifact written by tgf.
        input: String,
    },
}

/// Everything needed to reproduce a run. Serialized with sorted keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub common: Common,
    pub run: Command,
}

impl RunConfig {
    pub fn new(common: Common, run: Command) -> Self {
        RunConfig {
            tool: "tgf".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            common,
            run,
        }
    }

    /// Canonical single-line JSON.
    pub fn to_canonical(&self) -> String {
        let v = serde_json::to_value(self).expect("config is plain data");
        v.to_string()
    }
}
