//! Association `[f_n] ≈ [g_n]`: `⟨f_n - g_n, φ⟩ → 0` for every test
//! function, decided on finite prefixes by a declared heuristic.
//!
//! A pairing sequence counts as decaying when its envelope over the last
//! quarter of the prefix does not exceed the envelope over the third quarter
//! and ends below `assoc_tol` relative to its peak. It counts as a witness
//! against association when it stabilizes, within `assoc_tol` of its peak,
//! at a magnitude above `10·assoc_tol` of the peak.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{par_collect, RepSequence, TemperedNumber};
use crate::error::Result;
use crate::gauss::{rate, GaussianPolySum};
use crate::hermite::HermiteBasis;
use crate::scalar::{cabs, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssocFit {
    pub assoc_tol: f64,
}

impl Default for AssocFit {
    fn default() -> Self {
        AssocFit { assoc_tol: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssocVerdict {
    Associated,
    /// Index of the probe whose pairing stabilized away from zero.
    NotAssociated { witness: usize },
    Inconclusive,
}

impl AssocVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            AssocVerdict::Associated => "associated",
            AssocVerdict::NotAssociated { .. } => "not_associated",
            AssocVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Decays,
    Stabilizes,
    Unclear,
}

/// Magnitudes with values at or below the precision tolerance flushed to 0.
fn magnitudes<R: Real>(values: &[Cx<R>]) -> Vec<f64> {
    let tol = R::tolerance();
    values
        .iter()
        .map(|v| {
            let m = cabs(v);
            if m <= tol {
                0.0
            } else {
                m.to_f64()
            }
        })
        .collect()
}

fn trend<R: Real>(values: &[Cx<R>], fit: &AssocFit) -> Trend {
    let mags = magnitudes(values);
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Trend::Decays;
    }
    let n = mags.len() - 1;
    let (q3, q4) = (n / 2, 3 * n / 4);
    let env = |lo: usize, hi: usize| mags[lo..hi].iter().cloned().fold(0.0, f64::max);
    let env3 = env(q3, q4.max(q3 + 1));
    let env4 = env(q4, n + 1);
    if env4 <= env3 && env4 < fit.assoc_tol * peak {
        return Trend::Decays;
    }
    let last = &values[q4..];
    let spread = last
        .iter()
        .flat_map(|a| last.iter().map(move |b| cabs(&(a.clone() - b.clone())).to_f64()))
        .fold(0.0, f64::max);
    let min4 = mags[q4..].iter().cloned().fold(f64::INFINITY, f64::min);
    if spread <= fit.assoc_tol * peak && min4 > 10.0 * fit.assoc_tol * peak {
        Trend::Stabilizes
    } else {
        Trend::Unclear
    }
}

fn decide(trends: &[Trend]) -> AssocVerdict {
    if trends.iter().all(|t| *t == Trend::Decays) {
        AssocVerdict::Associated
    } else if let Some(w) = trends.iter().position(|t| *t == Trend::Stabilizes) {
        AssocVerdict::NotAssociated { witness: w }
    } else {
        AssocVerdict::Inconclusive
    }
}

/// Pairing sequences and the verdict drawn from them.
#[derive(Debug, Clone)]
pub struct AssocReport<R: Real> {
    pub verdict: AssocVerdict,
    pub prefix: usize,
    pub probe_labels: Vec<String>,
    /// `pairings[probe][n]`.
    pub pairings: Vec<Vec<Cx<R>>>,
}

impl<R: Real> AssocReport<R> {
    pub fn to_json(&self) -> serde_json::Value {
        let witness = match &self.verdict {
            AssocVerdict::NotAssociated { witness } => json!(self.probe_labels[*witness]),
            _ => serde_json::Value::Null,
        };
        json!({
            "verdict": self.verdict.name(),
            "exponent": null,
            "witness": witness,
            "prefix": self.prefix,
        })
    }

    /// Pairing table with columns `n,probe,value,imag`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,probe,value,imag")?;
        for n in 0..=self.prefix {
            for (label, seq) in self.probe_labels.iter().zip(&self.pairings) {
                let v = &seq[n];
                writeln!(out, "{n},{label},{},{}", v.re.to_decimal(), v.im.to_decimal())?;
            }
        }
        Ok(())
    }
}

/// `h_0, ..., h_K` followed by two seeded random polynomial-Gaussians.
pub fn default_probes<R: Real>(
    basis: &HermiteBasis<R>,
    k: usize,
    seed: u64,
) -> Result<Vec<(String, GaussianPolySum<R>)>> {
    let mut probes = (0..=k)
        .map(|j| Ok((format!("h{j}"), basis.function(j)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rates = [rate(1, 3), rate(1, 2), rate(1, 1), rate(2, 1)];
    for i in 0..2 {
        let r = rates[rng.gen_range(0..rates.len())].clone();
        let coeffs: Vec<R> = (0..3).map(|_| R::of_f64(rng.gen_range(-1.0..1.0))).collect();
        probes.push((format!("gauss{i}"), GaussianPolySum::from_real_poly(r, &coeffs)?));
    }
    Ok(probes)
}

/// Association test of `F` and `G` against `probes` over `n ≤ nmax`.
pub fn associated<R: Real>(
    f: &RepSequence<R>,
    g: &RepSequence<R>,
    probes: &[(String, GaussianPolySum<R>)],
    nmax: usize,
    fit: &AssocFit,
) -> Result<AssocReport<R>> {
    let diff = f.sub(g);
    let rows = par_collect(0..=nmax, |n| {
        let d = diff.at(n)?;
        Ok(probes
            .iter()
            .map(|(_, p)| d.mul(p).integral(&crate::gauss::Region::Full))
            .collect::<Vec<_>>())
    })?;
    let pairings: Vec<Vec<Cx<R>>> = (0..probes.len())
        .map(|j| rows.iter().map(|row| row[j].clone()).collect())
        .collect();
    let trends: Vec<Trend> = pairings.iter().map(|p| trend(p, fit)).collect();
    Ok(AssocReport {
        verdict: decide(&trends),
        prefix: nmax,
        probe_labels: probes.iter().map(|(l, _)| l.clone()).collect(),
        pairings,
    })
}

/// `lim (a_n - b_n) = 0`, judged on `n ≤ nmax` by the same rule.
pub fn tn_associated<R: Real>(
    a: &TemperedNumber<R>,
    b: &TemperedNumber<R>,
    nmax: usize,
    fit: &AssocFit,
) -> Result<AssocReport<R>> {
    let values = a.sub(b).prefix(0..=nmax)?;
    let verdict = decide(&[trend(&values, fit)]);
    Ok(AssocReport {
        verdict,
        prefix: nmax,
        probe_labels: vec!["difference".into()],
        pairings: vec![values],
    })
}
