//! Pathwise (Föllmer) sums along a sample path and the Itô and Tanaka
//! residuals built from them. All sums use left endpoints.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::compiled::Compiled;
use super::process::{simulate_path, PiecewiseLinear, ProcessSpec, SamplePath};
use crate::algebra::{Provenance, RepSequence, TemperedNumber};
use crate::dist::{embed, stream_general, GeneralKind};
use crate::error::Result;
use crate::hermite::HermiteBasis;
use crate::scalar::{cx, Real};

/// Integrand and driver of a pathwise sum.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralKind {
    /// `Σ Df_n(X_i) ΔX_i`.
    Ito,
    /// `Σ f_n(X_i) ΔV_i`.
    Fv(PiecewiseLinear),
    /// `Σ D²f_n(X_i) Δ⟨X⟩_i`.
    Qv,
}

/// `Σ_i g(X(t_i)) (d_{i+1} - d_i)`.
pub fn forward_sum(g: &Compiled, path: &SamplePath, driver: impl Fn(usize) -> f64) -> f64 {
    (0..path.steps())
        .map(|i| g.eval(path.values[i]) * (driver(i + 1) - driver(i)))
        .sum()
}

/// Total variation of `V` sampled on the path grid.
pub fn grid_variation(v: &PiecewiseLinear, path: &SamplePath) -> f64 {
    path.t_grid.windows(2).map(|w| (v.eval(w[1]) - v.eval(w[0])).abs()).sum()
}

/// `n ↦` the pathwise sum of `kind` for the representative `F_n`.
pub fn pathwise_integral<R: Real>(
    f: &RepSequence<R>,
    path: &Arc<SamplePath>,
    kind: IntegralKind,
    basis: &Arc<HermiteBasis<R>>,
) -> TemperedNumber<R> {
    let (f, path, basis) = (f.clone(), path.clone(), basis.clone());
    let tag = match &kind {
        IntegralKind::Ito => "ito",
        IntegralKind::Fv(_) => "fv",
        IntegralKind::Qv => "qv",
    };
    TemperedNumber::new(Provenance::node(tag, vec![f.provenance().clone()]), move |n| {
        let fnn = f.at(n)?;
        let v = match &kind {
            IntegralKind::Ito => forward_sum(&Compiled::new(&fnn.derive(), &basis)?, &path, |i| path.values[i]),
            IntegralKind::Fv(v) => forward_sum(&Compiled::new(&fnn, &basis)?, &path, |i| v.eval(path.t_grid[i])),
            IntegralKind::Qv => {
                forward_sum(&Compiled::new(&fnn.derive().derive(), &basis)?, &path, |i| path.qv[i])
            }
        };
        Ok(cx(R::of_f64(v)))
    })
}

/// `f(X_T) - f(X_0) - Σ f'(X_i)ΔX_i - ½ Σ f''(X_i)Δ⟨X⟩_i` for a compiled
/// `[f, f', f'']`.
pub fn ito_residual_compiled(c: &[Compiled; 3], path: &SamplePath) -> f64 {
    let mut ito = 0.0;
    let mut qv = 0.0;
    for i in 0..path.steps() {
        let x = path.values[i];
        ito += c[1].eval(x) * (path.values[i + 1] - x);
        qv += c[2].eval(x) * (path.qv[i + 1] - path.qv[i]);
    }
    c[0].eval(path.end()) - c[0].eval(path.values[0]) - ito - 0.5 * qv
}

/// `n ↦` the Itô residual of `F_n` along `path`.
pub fn ito_residual<R: Real>(
    f: &RepSequence<R>,
    path: &Arc<SamplePath>,
    basis: &Arc<HermiteBasis<R>>,
) -> TemperedNumber<R> {
    let (f, path, basis) = (f.clone(), path.clone(), basis.clone());
    TemperedNumber::new(Provenance::node("ito_residual", vec![f.provenance().clone()]), move |n| {
        let c = Compiled::with_derivatives(&f.at(n)?, &basis)?;
        Ok(cx(R::of_f64(ito_residual_compiled(&c, &path))))
    })
}

/// The three sums of the Tanaka formula along one path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TanakaTerms {
    /// `|X_T - a| - |X_0 - a|`.
    pub lhs: f64,
    /// `Σ sgn_n(X_i) ΔX_i`.
    pub ito: f64,
    /// `Σ δ_{a,n}(X_i) Δ⟨X⟩_i`, the local-time estimate.
    pub local_time: f64,
}

impl TanakaTerms {
    pub fn residual(&self) -> f64 {
        self.lhs - self.ito - self.local_time
    }
}

/// `ι(sgn(· - a))` and `ι(δ_a)` at level `n`, compiled once.
#[derive(Debug, Clone)]
pub struct TanakaKernel {
    a: f64,
    sgn: Compiled,
    delta: Compiled,
}

impl TanakaKernel {
    pub fn new<R: Real>(a: &R, n: usize, basis: &Arc<HermiteBasis<R>>) -> Result<Self> {
        let sgn = embed(&stream_general(GeneralKind::Sgn(a.clone()), basis)?, basis).at(n)?;
        let delta = embed(&stream_general(GeneralKind::DeltaAt(a.clone()), basis)?, basis).at(n)?;
        Ok(TanakaKernel {
            a: a.to_f64(),
            sgn: Compiled::new(&sgn, basis)?,
            delta: Compiled::new(&delta, basis)?,
        })
    }

    pub fn terms(&self, path: &SamplePath) -> TanakaTerms {
        let lhs = (path.end() - self.a).abs() - (path.values[0] - self.a).abs();
        let ito = forward_sum(&self.sgn, path, |i| path.values[i]);
        let local_time = forward_sum(&self.delta, path, |i| path.qv[i]);
        TanakaTerms { lhs, ito, local_time }
    }
}

/// Tanaka residual at level `n` along one path.
pub fn tanaka_residual<R: Real>(a: &R, path: &SamplePath, n: usize, basis: &Arc<HermiteBasis<R>>) -> Result<f64> {
    Ok(TanakaKernel::new(a, n, basis)?.terms(path).residual())
}

/// One row of a run report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub n: usize,
    pub dt: f64,
    pub paths: usize,
    pub residual_rms: f64,
    pub residual_max: f64,
    /// Standard error of the mean residual.
    pub stderr: f64,
}

impl RunRow {
    pub fn from_residuals(n: usize, dt: f64, residuals: &[f64]) -> Self {
        let m = residuals.len() as f64;
        let mean = residuals.iter().sum::<f64>() / m;
        let var = residuals.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
        RunRow {
            n,
            dt,
            paths: residuals.len(),
            residual_rms: (residuals.iter().map(|r| r * r).sum::<f64>() / m).sqrt(),
            residual_max: residuals.iter().fold(0.0, |a, r| f64::max(a, r.abs())),
            stderr: (var / m).sqrt(),
        }
    }
}

/// CSV with columns `n,dt,paths,residual_rms,residual_max,stderr`.
pub fn write_run_csv<W: Write>(rows: &[RunRow], mut out: W) -> Result<()> {
    writeln!(out, "n,dt,paths,residual_rms,residual_max,stderr")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.dt, r.paths, r.residual_rms, r.residual_max, r.stderr
        )?;
    }
    Ok(())
}

/// Applies `per_path` to `paths` seeded paths in parallel; the result is in
/// path order and independent of the thread count.
pub fn over_paths<T: Send>(
    spec: &ProcessSpec,
    t_end: f64,
    dt: f64,
    paths: usize,
    seed: u64,
    per_path: impl Fn(&SamplePath) -> T + Sync + Send,
) -> Result<Vec<T>> {
    (0..paths as u64)
        .into_par_iter()
        .map(|id| simulate_path(spec, t_end, dt, seed, id).map(|p| per_path(&p)))
        .collect()
}

/// Per-path Itô residuals of `F_n`.
#[allow(clippy::too_many_arguments)]
pub fn ito_experiment<R: Real>(
    f: &RepSequence<R>,
    n: usize,
    spec: &ProcessSpec,
    t_end: f64,
    dt: f64,
    paths: usize,
    seed: u64,
    basis: &Arc<HermiteBasis<R>>,
) -> Result<Vec<f64>> {
    let c = Compiled::with_derivatives(&f.at(n)?, basis)?;
    over_paths(spec, t_end, dt, paths, seed, |p| ito_residual_compiled(&c, p))
}

/// Per-path Tanaka terms at level `n`.
#[allow(clippy::too_many_arguments)]
pub fn tanaka_experiment<R: Real>(
    a: &R,
    n: usize,
    spec: &ProcessSpec,
    t_end: f64,
    dt: f64,
    paths: usize,
    seed: u64,
    basis: &Arc<HermiteBasis<R>>,
) -> Result<Vec<TanakaTerms>> {
    let kernel = TanakaKernel::new(a, n, basis)?;
    over_paths(spec, t_end, dt, paths, seed, |p| kernel.terms(p))
}
