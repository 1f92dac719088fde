//! Simulated semimartingales and pathwise checks of the generalized Itô,
//! Tanaka, Dynkin and heat-equation formulas.
//!
//! Paths live in f64; representatives are compiled to f64 evaluators once
//! per level `n`. Path `i` of a run draws from the ChaCha8 stream `i` of
//! the run seed, so results do not depend on scheduling.

pub mod calculus;
pub mod compiled;
pub mod heat;
pub mod mc;
pub mod process;

pub use calculus::{
    ito_experiment, ito_residual, pathwise_integral, tanaka_experiment, tanaka_residual, write_run_csv,
    IntegralKind, RunRow, TanakaKernel, TanakaTerms,
};
pub use compiled::Compiled;
pub use heat::{heat_evolve, heat_kernel, heat_residual, HeatFamily, TimeDependentKernel};
pub use mc::{dynkin_residual, expectation_mc, Dynkin, Expectation, McValue};
pub use process::{simulate, simulate_path, PiecewiseLinear, ProcessKind, ProcessSpec, SamplePath};
