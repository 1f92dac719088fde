//! Double-precision evaluators for representatives, used on path grids.
//!
//! Hermite-form representatives are converted exactly to Hermite
//! coefficients and evaluated with the stable forward recurrence; monomial
//! Horner evaluation of high-degree Hermite sums in f64 would cancel
//! catastrophically. Other sums are evaluated term by term.

use crate::error::Result;
use crate::gauss::GaussianPolySum;
use crate::hermite::{hermite_rate, HermiteBasis};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
enum Form {
    Hermite(Vec<f64>),
    Direct(Vec<(f64, Vec<f64>)>),
}

/// Real part of a representative, ready for f64 evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    form: Form,
}

const H0: f64 = 0.631_618_777_746_065_6; // (2π)^{-1/4}

impl Compiled {
    pub fn new<R: Real>(f: &GaussianPolySum<R>, basis: &HermiteBasis<R>) -> Result<Self> {
        let form = if f.is_single_rate(&hermite_rate()) {
            let c = basis.expand(f)?;
            Form::Hermite(c.values.iter().map(|v| v.re.to_f64()).collect())
        } else {
            Form::Direct(
                f.terms()
                    .iter()
                    .map(|t| (t.rate_value().to_f64(), t.coeffs().iter().map(|c| c.re.to_f64()).collect()))
                    .collect(),
            )
        };
        Ok(Compiled { form })
    }

    /// `f`, `f'` and `f''` of one representative.
    pub fn with_derivatives<R: Real>(f: &GaussianPolySum<R>, basis: &HermiteBasis<R>) -> Result<[Self; 3]> {
        let d1 = f.derive();
        let d2 = d1.derive();
        Ok([Self::new(f, basis)?, Self::new(&d1, basis)?, Self::new(&d2, basis)?])
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.form {
            Form::Hermite(a) => {
                if a.is_empty() {
                    return 0.0;
                }
                let mut prev = 0.0;
                let mut cur = H0 * (-x * x / 4.0).exp();
                let mut acc = a[0] * cur;
                for (k, ak) in a.iter().enumerate().skip(1) {
                    let km = (k - 1) as f64;
                    let next = (x * cur - km.sqrt() * prev) / (k as f64).sqrt();
                    prev = cur;
                    cur = next;
                    acc += ak * cur;
                }
                acc
            }
            Form::Direct(terms) => terms
                .iter()
                .map(|(c, p)| p.iter().rev().fold(0.0, |acc, q| acc * x + q) * (-c * x * x).exp())
                .sum(),
        }
    }
}
