//! Symmetric Hermite product diagnostics: the sequences
//! `c_k(n) = ⟨T_n S_n, h_k⟩` with a convergence estimate per `k`. Nothing
//! here asserts that the limits exist.

use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use super::growth::fit_exponent;
use super::par_collect;
use crate::dist::CoefficientStream;
use crate::error::Result;
use crate::gauss::GaussianPolySum;
use crate::hermite::{HermiteBasis, HermiteCoefficients};
use crate::scalar::{cabs, Cx, Real};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConvergenceStatus {
    /// Constant, within tolerance, from index `from` to the end of the prefix.
    Stabilized { from: usize },
    /// Spread over the last quarter shrank relative to the third quarter.
    Converging { spread: f64 },
    /// No sign of convergence; `growth_exponent` is the log-log slope of
    /// `|c_k(n)|` over the second half.
    NonConvergent { growth_exponent: Option<f64> },
}

#[derive(Debug, Clone)]
pub struct ProductDiagnostic<R: Real> {
    pub k: usize,
    pub values: Vec<Cx<R>>,
    pub status: ConvergenceStatus,
}

#[derive(Debug, Clone)]
pub struct SymProdReport<R: Real> {
    pub kmax: usize,
    pub nmax: usize,
    pub diagnostics: Vec<ProductDiagnostic<R>>,
}

fn spread<R: Real>(values: &[Cx<R>]) -> f64 {
    values
        .iter()
        .flat_map(|a| values.iter().map(move |b| cabs(&(a.clone() - b.clone())).to_f64()))
        .fold(0.0, f64::max)
}

fn estimate<R: Real>(values: &[Cx<R>]) -> ConvergenceStatus {
    let nmax = values.len() - 1;
    let last = &values[nmax];
    let tol = R::tolerance() * (R::one() + cabs(last));
    let mut from = nmax;
    while from > 0 && cabs(&(values[from - 1].clone() - last.clone())) <= tol {
        from -= 1;
    }
    if from <= nmax / 2 {
        return ConvergenceStatus::Stabilized { from };
    }
    let (half, q4) = (nmax / 2, 3 * nmax / 4);
    let pts: Vec<(usize, f64)> = (half..=nmax).map(|n| (n, cabs(&values[n]).to_f64())).collect();
    let growth = fit_exponent(&pts);
    if growth.map_or(true, |g| g <= 0.1) {
        let (s3, s4) = (spread(&values[half..q4]), spread(&values[q4..]));
        if s4 < s3 {
            return ConvergenceStatus::Converging { spread: s4 };
        }
    }
    ConvergenceStatus::NonConvergent { growth_exponent: growth }
}

/// `⟨T_n S_n, h_k⟩` for `k ≤ kmax`, `n ≤ nmax`.
pub fn symmetric_product<R: Real>(
    s: &CoefficientStream<R>,
    t: &CoefficientStream<R>,
    basis: &Arc<HermiteBasis<R>>,
    kmax: usize,
    nmax: usize,
) -> Result<SymProdReport<R>> {
    let probes = (0..=kmax).map(|k| basis.function(k)).collect::<Result<Vec<_>>>()?;
    let s_coeffs = s.prefix(nmax)?;
    let t_coeffs = t.prefix(nmax)?;
    let rows = par_collect(0..=nmax, |n| {
        let sn = basis.synth(&HermiteCoefficients::new(s_coeffs.values[..=n].to_vec())?)?;
        let tn = basis.synth(&HermiteCoefficients::new(t_coeffs.values[..=n].to_vec())?)?;
        let p = sn.mul(&tn);
        Ok(probes.iter().map(|h| p.inner(h)).collect::<Vec<_>>())
    })?;
    let diagnostics = (0..=kmax)
        .map(|k| {
            let values: Vec<Cx<R>> = rows.iter().map(|r| r[k].clone()).collect();
            let status = estimate(&values);
            ProductDiagnostic { k, values, status }
        })
        .collect();
    Ok(SymProdReport { kmax, nmax, diagnostics })
}

impl<R: Real> SymProdReport<R> {
    /// Last computed `c_k` for every `k` whose sequence stabilized.
    pub fn limits(&self) -> Vec<Option<Cx<R>>> {
        self.diagnostics
            .iter()
            .map(|d| match d.status {
                ConvergenceStatus::Stabilized { .. } => Some(d.values[self.nmax].clone()),
                _ => None,
            })
            .collect()
    }

    /// `Σ_k c_k h_k` from the final values, when every `k` stabilized.
    pub fn synthesize(&self, basis: &HermiteBasis<R>) -> Result<Option<GaussianPolySum<R>>> {
        let limits: Option<Vec<Cx<R>>> = self.limits().into_iter().collect();
        match limits {
            Some(values) => Ok(Some(basis.synth(&HermiteCoefficients::new(values)?)?)),
            None => Ok(None),
        }
    }

    /// Table with columns `n,k,value,imag`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,k,value,imag")?;
        for n in 0..=self.nmax {
            for d in &self.diagnostics {
                let v = &d.values[n];
                writeln!(out, "{n},{},{},{}", d.k, v.re.to_decimal(), v.im.to_decimal())?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let per_k: Vec<serde_json::Value> = self
            .diagnostics
            .iter()
            .map(|d| {
                let v = &d.values[self.nmax];
                serde_json::json!({
                    "k": d.k,
                    "status": d.status,
                    "final": [v.re.to_decimal(), v.im.to_decimal()],
                })
            })
            .collect();
        serde_json::json!({ "kmax": self.kmax, "prefix": self.nmax, "coefficients": per_k })
    }
}
