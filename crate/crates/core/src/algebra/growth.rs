//! Moderate versus negligible growth of `‖f_n‖_m`, judged from a prefix.
//!
//! The log-norms are regressed on `ln(n+1)` over the second half of the
//! prefix and over its last two quarters separately. Stable quarter slopes
//! give `Moderate` with the fitted exponent; quarter slopes that are steep
//! and still steepening give `Negligible`.

use serde::Serialize;
use serde_json::json;

use super::{par_collect, RepSequence};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Slope below which decay is treated as faster than any tested power.
const STEEP_SLOPE: f64 = -8.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GrowthClass {
    Moderate { exponent: f64 },
    Negligible { decay_slope: Option<f64> },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthDiagnostics {
    pub m: usize,
    /// `ln ‖f_n‖_m`, `None` where the norm vanishes.
    pub log_norms: Vec<Option<f64>>,
    pub fitted_exponent: Option<f64>,
    pub slope_third_quarter: Option<f64>,
    pub slope_last_quarter: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthVerdict {
    pub class: GrowthClass,
    pub prefix_used: usize,
    pub diagnostics: GrowthDiagnostics,
}

impl GrowthVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        let (name, exponent) = match &self.class {
            GrowthClass::Moderate { exponent } => ("moderate", Some(*exponent)),
            GrowthClass::Negligible { .. } => ("negligible", None),
            GrowthClass::Inconclusive => ("inconclusive", None),
        };
        json!({
            "verdict": name,
            "exponent": exponent.map(|e| e.to_string()),
            "witness": null,
            "prefix": self.prefix_used,
        })
    }
}

/// Least-squares slope of `ln y` against `ln(n+1)`.
pub fn fit_exponent(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > 0.0 && y.is_finite())
        .map(|(n, y)| (((n + 1) as f64).ln(), y.ln()))
        .collect();
    log_slope(&pts)
}

fn log_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

fn slope_over(log_norms: &[Option<f64>], lo: usize, hi: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .filter_map(|n| log_norms[n].map(|y| (((n + 1) as f64).ln(), y)))
        .collect();
    log_slope(&pts)
}

/// Classifies `n ↦ ‖f_n‖_m` from the log-norms of a prefix.
pub fn classify(m: usize, log_norms: Vec<Option<f64>>) -> GrowthVerdict {
    let nmax = log_norms.len() - 1;
    let (half, q4) = (nmax / 2, 3 * nmax / 4);
    let fitted = slope_over(&log_norms, half, nmax);
    let s3 = slope_over(&log_norms, half, q4);
    let s4 = slope_over(&log_norms, q4, nmax);
    let tail_vanishes = log_norms[half..].iter().all(Option::is_none);
    let class = match (fitted, s3, s4) {
        _ if tail_vanishes => GrowthClass::Negligible { decay_slope: None },
        (Some(p), Some(a), Some(b)) => {
            if b < STEEP_SLOPE && b < a - 0.5 {
                GrowthClass::Negligible { decay_slope: Some(b) }
            } else if (b - a).abs() <= 0.25 + 0.1 * a.abs() && b >= STEEP_SLOPE {
                GrowthClass::Moderate { exponent: p }
            } else {
                GrowthClass::Inconclusive
            }
        }
        _ => GrowthClass::Inconclusive,
    };
    GrowthVerdict {
        class,
        prefix_used: nmax,
        diagnostics: GrowthDiagnostics {
            m,
            log_norms,
            fitted_exponent: fitted,
            slope_third_quarter: s3,
            slope_last_quarter: s4,
        },
    }
}

/// Growth class of `‖F_n‖_m` over `n ≤ nmax`.
pub fn moderation_class<R: Real>(f: &RepSequence<R>, m: usize, nmax: usize) -> Result<GrowthVerdict> {
    if nmax < 16 {
        return Err(Error::InvalidArgument(format!("moderation needs nmax ≥ 16, got {nmax}")));
    }
    let log_norms = par_collect(0..=nmax, |n| {
        let norm = f.at(n)?.norm(m);
        Ok(if norm > R::zero() { Some(norm.ln().to_f64()) } else { None })
    })?;
    Ok(classify(m, log_norms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logs(f: impl Fn(f64) -> f64, n: usize) -> Vec<Option<f64>> {
        (0..=n).map(|k| Some(f(k as f64))).collect()
    }

    #[test]
    fn power_laws_are_moderate() {
        for p in [-1.5, 0.0, 0.5, 2.0] {
            let v = classify(0, logs(|k| p * (k + 1.0).ln() + 0.3, 64));
            match v.class {
                GrowthClass::Moderate { exponent } => assert!((exponent - p).abs() < 1e-9),
                other => panic!("{p}: {other:?}"),
            }
        }
    }

    #[test]
    fn factorial_decay_is_negligible() {
        let lf = |k: f64| -(1..=k as usize).map(|j| (j as f64).ln()).sum::<f64>();
        let v = classify(2, logs(|k| 2.0 * (k + 1.0).ln() + lf(k), 40));
        assert!(matches!(v.class, GrowthClass::Negligible { .. }), "{:?}", v.class);
    }

    #[test]
    fn fit_exponent_of_square_root() {
        let pts: Vec<(usize, f64)> = (100..=400).map(|n| (n, ((n + 1) as f64).sqrt())).collect();
        assert!((fit_exponent(&pts).unwrap() - 0.5).abs() < 1e-12);
    }
}
