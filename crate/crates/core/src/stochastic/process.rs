//! Process families and their Euler–Maruyama paths.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of grid steps a path may have.
pub const MAX_STEPS: usize = 10_000_000;

/// A piecewise-linear finite-variation component, constant outside its knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    /// `(t, V(t))` with strictly increasing `t`.
    pub knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() || knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidArgument(
                "piecewise-linear knots must be non-empty with increasing times".into(),
            ));
        }
        Ok(PiecewiseLinear { knots })
    }

    /// `V(t) = t` on `[0, T]`.
    pub fn identity(t_end: f64) -> Self {
        PiecewiseLinear {
            knots: vec![(0.0, 0.0), (t_end, t_end)],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return k[0].1;
        }
        for w in k.windows(2) {
            if t <= w[1].0 {
                let s = (t - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + s * (w[1].1 - w[0].1);
            }
        }
        k[k.len() - 1].1
    }
}

/// The simulated semimartingale families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProcessKind {
    Bm { x0: f64, sigma: f64 },
    DriftBm { x0: f64, mu: f64, sigma: f64 },
    Ou { x0: f64, theta: f64, mean: f64, sigma: f64 },
    /// `X(t) = Σ_k coeffs[k] t^k`.
    Deterministic { coeffs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fv: Option<PiecewiseLinear>,
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind) -> Result<Self> {
        let sigma = match &kind {
            ProcessKind::Bm { sigma, .. } | ProcessKind::DriftBm { sigma, .. } | ProcessKind::Ou { sigma, .. } => *sigma,
            ProcessKind::Deterministic { .. } => 0.0,
        };
        if !(sigma >= 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be ≥ 0, got {sigma}")));
        }
        Ok(ProcessSpec { kind, fv: None })
    }

    pub fn brownian(x0: f64) -> Self {
        ProcessSpec {
            kind: ProcessKind::Bm { x0, sigma: 1.0 },
            fv: None,
        }
    }

    pub fn with_fv(mut self, v: PiecewiseLinear) -> Self {
        self.fv = Some(v);
        self
    }

    pub fn x0(&self) -> f64 {
        let base = match &self.kind {
            ProcessKind::Bm { x0, .. } | ProcessKind::DriftBm { x0, .. } | ProcessKind::Ou { x0, .. } => *x0,
            ProcessKind::Deterministic { coeffs } => coeffs.first().copied().unwrap_or(0.0),
        };
        base + self.fv.as_ref().map_or(0.0, |v| v.eval(0.0))
    }

    fn is_deterministic(&self) -> bool {
        matches!(self.kind, ProcessKind::Deterministic { .. })
    }
}

/// A discretized path on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub dt: f64,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Realized quadratic variation `Σ_{j<i} (ΔX_j)²`; identically zero for
    /// deterministic specs.
    pub qv: Vec<f64>,
}

impl SamplePath {
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn end(&self) -> f64 {
        self.values[self.steps()]
    }

    /// The path `2a - X`.
    pub fn reflect(&self, a: f64) -> Self {
        SamplePath {
            dt: self.dt,
            t_grid: self.t_grid.clone(),
            values: self.values.iter().map(|x| 2.0 * a - x).collect(),
            qv: self.qv.clone(),
        }
    }
}

/// Number of steps of a `T/dt` grid, validated.
pub fn grid_steps(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("need dt > 0 and T ≥ 0, got dt = {dt}, T = {t_end}")));
    }
    let ratio = t_end / dt;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidArgument(format!("T/dt = {ratio} is not an integer")));
    }
    if steps > MAX_STEPS as f64 {
        return Err(Error::InvalidArgument(format!("grid overflow: {steps} steps exceed {MAX_STEPS}")));
    }
    Ok(steps as usize)
}

/// Standard normal draws for one path: the generator is keyed by the seed,
/// its stream by the path id, and each step consumes exactly four words.
pub struct NormalStream {
    rng: ChaCha8Rng,
}

impl NormalStream {
    pub fn new(seed: u64, path_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(path_id);
        NormalStream { rng }
    }

    /// Box–Muller on two 53-bit uniforms in `(0, 1]`.
    pub fn next_normal(&mut self) -> f64 {
        let u = |w: u64| ((w >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u1 = u(self.rng.next_u64());
        let u2 = u(self.rng.next_u64());
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

/// Euler–Maruyama path of `spec` on `[0, T]`, deterministic in
/// `(spec, T, dt, seed, path_id)`.
pub fn simulate_path(spec: &ProcessSpec, t_end: f64, dt: f64, seed: u64, path_id: u64) -> Result<SamplePath> {
    let steps = grid_steps(t_end, dt)?;
    let t_grid: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let fv = |t: f64| spec.fv.as_ref().map_or(0.0, |v| v.eval(t));
    let mut values = Vec::with_capacity(steps + 1);
    match &spec.kind {
        ProcessKind::Deterministic { coeffs } => {
            for &t in &t_grid {
                let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
                values.push(p + fv(t));
            }
        }
        kind => {
            let mut normals = NormalStream::new(seed, path_id);
            let sq = dt.sqrt();
            let mut x = spec.x0();
            values.push(x);
            for i in 0..steps {
                let z = normals.next_normal();
                let (drift, sigma) = match kind {
                    ProcessKind::Bm { sigma, .. } => (0.0, *sigma),
                    ProcessKind::DriftBm { mu, sigma, .. } => (*mu, *sigma),
                    ProcessKind::Ou { theta, mean, sigma, .. } => (theta * (mean - x), *sigma),
                    ProcessKind::Deterministic { .. } => unreachable!(),
                };
                x += drift * dt + sigma * sq * z + (fv(t_grid[i + 1]) - fv(t_grid[i]));
                values.push(x);
            }
        }
    }
    let mut qv = vec![0.0; steps + 1];
    if !spec.is_deterministic() {
        for i in 0..steps {
            let d = values[i + 1] - values[i];
            qv[i + 1] = qv[i] + d * d;
        }
    }
    Ok(SamplePath { dt, t_grid, values, qv })
}

/// Path number 0 of `simulate_path`.
pub fn simulate(spec: &ProcessSpec, t_end: f64, dt: f64, seed: u64) -> Result<SamplePath> {
    simulate_path(spec, t_end, dt, seed, 0)
}
