//! Monte Carlo expectations of representatives and the Dynkin residual.
//!
//! Expectations are taken per representative: `E[f_n](X_t) = [E f_n(X_t)]`.

use std::sync::Arc;

use serde::Serialize;

use super::calculus::over_paths;
use super::compiled::Compiled;
use super::process::{ProcessSpec, SamplePath};
use crate::algebra::{Provenance, RepSequence, TemperedNumber};
use crate::error::{Error, Result};
use crate::hermite::HermiteBasis;
use crate::scalar::{cx, Cx, Real};

/// Smallest accepted number of Monte Carlo paths.
pub const MIN_PATHS: usize = 100;

fn check_paths(paths: usize) -> Result<()> {
    if paths < MIN_PATHS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_PATHS} paths, got {paths}")));
    }
    Ok(())
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McValue {
    pub mean: f64,
    pub stderr: f64,
}

impl McValue {
    pub fn of(samples: &[f64]) -> Self {
        let m = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / m;
        // shifted by the first sample so that constant samples give exactly 0
        let s0 = samples.first().copied().unwrap_or(0.0);
        let dm = samples.iter().map(|s| s - s0).sum::<f64>() / m;
        let var = samples.iter().map(|s| (s - s0 - dm).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
        McValue {
            mean,
            stderr: (var / m).sqrt(),
        }
    }
}

/// `E f_n(X_t)` over a fixed set of seeded endpoints.
#[derive(Clone)]
pub struct Expectation<R: Real> {
    f: RepSequence<R>,
    endpoints: Arc<Vec<f64>>,
}

impl<R: Real> Expectation<R> {
    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    /// Mean of `f_n` over the endpoints, evaluated at working precision,
    /// and its standard error.
    pub fn at(&self, n: usize) -> Result<(Cx<R>, f64)> {
        let fnn = self.f.at(n)?;
        let values: Vec<Cx<R>> = self.endpoints.iter().map(|x| fnn.eval(&R::of_f64(*x))).collect();
        let m = R::of_int(values.len() as i64);
        let mean = values.iter().fold(Cx::<R>::new(R::zero(), R::zero()), |a, v| a + v.clone()) / cx(m);
        let re: Vec<f64> = values.iter().map(|v| v.re.to_f64()).collect();
        Ok((mean, McValue::of(&re).stderr))
    }

    pub fn as_number(&self) -> TemperedNumber<R> {
        let me = self.clone();
        TemperedNumber::new(Provenance::node("E", vec![self.f.provenance().clone()]), move |n| Ok(me.at(n)?.0))
    }
}

/// Monte Carlo expectation of `F` at time `t` under `spec`.
pub fn expectation_mc<R: Real>(
    f: &RepSequence<R>,
    spec: &ProcessSpec,
    t: f64,
    paths: usize,
    seed: u64,
    dt: f64,
) -> Result<Expectation<R>> {
    check_paths(paths)?;
    let endpoints = over_paths(spec, t, dt, paths, seed, SamplePath::end)?;
    Ok(Expectation {
        f: f.clone(),
        endpoints: Arc::new(endpoints),
    })
}

/// Per-path Dynkin defect
/// `f(B_t+x) - f(x) - ½ ∫_0^t f''(B_s+x) ds` with the trapezoid rule.
fn dynkin_defect(c: &[Compiled; 3], path: &SamplePath) -> f64 {
    let k = path.steps();
    let mut integral = 0.0;
    for i in 0..k {
        integral += 0.5 * (c[2].eval(path.values[i]) + c[2].eval(path.values[i + 1])) * path.dt;
    }
    c[0].eval(path.end()) - c[0].eval(path.values[0]) - 0.5 * integral
}

/// `n ↦ E f_n(B_t+x) - f_n(x) - ½∫_0^t E D²f_n(B_s+x) ds`, with every
/// expectation over the same seeded Brownian paths started at `x`.
#[derive(Clone)]
pub struct Dynkin<R: Real> {
    f: RepSequence<R>,
    x: f64,
    t: f64,
    paths: usize,
    dt: f64,
    seed: u64,
    basis: Arc<HermiteBasis<R>>,
}

impl<R: Real> Dynkin<R> {
    pub fn at(&self, n: usize) -> Result<McValue> {
        let c = Compiled::with_derivatives(&self.f.at(n)?, &self.basis)?;
        let spec = ProcessSpec::brownian(self.x);
        let defects = over_paths(&spec, self.t, self.dt, self.paths, self.seed, |p| dynkin_defect(&c, p))?;
        Ok(McValue::of(&defects))
    }

    pub fn as_number(&self) -> TemperedNumber<R> {
        let me = self.clone();
        TemperedNumber::new(Provenance::node("dynkin", vec![self.f.provenance().clone()]), move |n| {
            Ok(cx(R::of_f64(me.at(n)?.mean)))
        })
    }
}

#[allow(clippy::too_many_arguments)]
pub fn dynkin_residual<R: Real>(
    f: &RepSequence<R>,
    x: f64,
    t: f64,
    paths: usize,
    dt: f64,
    seed: u64,
    basis: &Arc<HermiteBasis<R>>,
) -> Result<Dynkin<R>> {
    check_paths(paths)?;
    super::process::grid_steps(t, dt)?;
    Ok(Dynkin {
        f: f.clone(),
        x,
        t,
        paths,
        dt,
        seed,
        basis: basis.clone(),
    })
}
