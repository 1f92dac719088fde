//! Hermite functions `h_n(x) = (√(2π) n!)^{-1/2} exp(-x²/4) H_n(x)`, an
//! orthonormal basis of `L²(ℝ)` built from the probabilists' polynomials.
//!
//! Polynomial parts come from the normalized three-term recurrence
//! `√(n+1) h_{n+1} = x h_n - √n h_{n-1}` on exact coefficient vectors.

use std::io::Write;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gauss::{poly, rate, GaussianPolySum, GaussianTerm, Rate};
use crate::scalar::{cx, Cx, Real};

pub const DEFAULT_CAP: usize = 512;

/// The common Gaussian rate `1/4` of every Hermite function.
pub fn hermite_rate() -> Rate {
    rate(1, 4)
}

/// `(2π)^{-1/4}`, the value `h_0(0)`.
pub fn h0_scale<R: Real>() -> R {
    R::one() / (R::of_int(2) * R::pi()).sqrt().sqrt()
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { index: n, cap })
    } else {
        Ok(())
    }
}

/// `h_n` as a single rate-1/4 term; fails beyond `cap`.
pub fn hermite_fn<R: Real>(n: usize, cap: usize) -> Result<GaussianPolySum<R>> {
    HermiteBasis::new(cap).function(n)
}

/// Memoized Hermite basis up to a cap.
///
/// Entries are computed at the working precision of the first thread that
/// requests them; the cache only extends, so concurrent readers observe the
/// same values as a fresh computation at that precision.
#[derive(Debug)]
pub struct HermiteBasis<R: Real> {
    cap: usize,
    polys: RwLock<Vec<Arc<poly::Poly<R>>>>,
}

impl<R: Real> HermiteBasis<R> {
    pub fn new(cap: usize) -> Arc<Self> {
        Arc::new(HermiteBasis {
            cap,
            polys: RwLock::new(Vec::new()),
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Fails with [`Error::CapExceeded`] when `n` is beyond the cap.
    pub fn cap_check(&self, n: usize) -> Result<()> {
        check_cap(n, self.cap)
    }

    /// Polynomial part of `h_n`.
    pub fn poly(&self, n: usize) -> Result<Arc<poly::Poly<R>>> {
        check_cap(n, self.cap)?;
        if let Some(p) = self.polys.read().expect("basis lock").get(n) {
            return Ok(p.clone());
        }
        let mut guard = self.polys.write().expect("basis lock");
        while guard.len() <= n {
            let k = guard.len();
            let next = match k {
                0 => vec![cx(h0_scale())],
                _ => {
                    let prev = &guard[k - 1];
                    let mut next = poly::shift(prev);
                    if k >= 2 {
                        let s = cx(-R::of_int(k as i64 - 1).sqrt());
                        poly::axpy_into(&mut next, &s, &guard[k - 2]);
                    }
                    let inv = R::one() / R::of_int(k as i64).sqrt();
                    let mut next = poly::scale_real(&next, &inv);
                    for (j, c) in next.iter_mut().enumerate() {
                        if (j + k) % 2 == 1 {
                            *c = Cx::zero();
                        }
                    }
                    next
                }
            };
            guard.push(Arc::new(next));
        }
        Ok(guard[n].clone())
    }

    pub fn function(&self, n: usize) -> Result<GaussianPolySum<R>> {
        let p = self.poly(n)?;
        Ok(GaussianPolySum::from_term(GaussianTerm::new(
            hermite_rate(),
            p.as_ref().clone(),
        )?))
    }

    /// `h_0(x), ..., h_n(x)` by the recurrence, without building polynomials.
    pub fn values_at(&self, n: usize, x: &R) -> Result<Vec<R>> {
        check_cap(n, self.cap)?;
        Ok(hermite_values(n, x))
    }

    /// `Σ_j c_j h_j`, a single rate-1/4 term.
    pub fn synth(&self, c: &HermiteCoefficients<R>) -> Result<GaussianPolySum<R>> {
        let mut acc: poly::Poly<R> = Vec::new();
        for (j, cj) in c.values.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            poly::axpy_into(&mut acc, cj, &self.poly(j)?);
        }
        Ok(GaussianPolySum::from_term(GaussianTerm::new(hermite_rate(), acc)?))
    }

    /// Exact inner products `⟨f, h_j⟩`, `j ≤ order`.
    pub fn project(&self, f: &GaussianPolySum<R>, order: usize) -> Result<HermiteCoefficients<R>> {
        check_cap(order, self.cap)?;
        let values = (0..=order)
            .map(|j| Ok(f.inner(&self.function(j)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(HermiteCoefficients { values })
    }

    /// Basis change for a Hermite-form function (one rate-1/4 term): peels
    /// the leading monomial against `h_d` from the top degree down.
    pub fn expand(&self, f: &GaussianPolySum<R>) -> Result<HermiteCoefficients<R>> {
        if f.is_zero() {
            return Ok(HermiteCoefficients {
                values: vec![Cx::zero()],
            });
        }
        if !f.is_single_rate(&hermite_rate()) {
            return Err(Error::InvalidArgument(
                "Hermite expansion needs a single rate-1/4 term".into(),
            ));
        }
        let mut rest: poly::Poly<R> = f.terms()[0].coeffs().to_vec();
        let d = rest.len() - 1;
        check_cap(d, self.cap)?;
        let mut values = vec![Cx::zero(); d + 1];
        for k in (0..=d).rev() {
            let hk = self.poly(k)?;
            let lead = hk[k].re.clone();
            let b = Cx::new(rest[k].re.clone() / lead.clone(), rest[k].im.clone() / lead);
            if !b.is_zero() {
                poly::axpy_into(&mut rest, &-b.clone(), &hk);
            }
            rest[k] = Cx::zero();
            values[k] = b;
        }
        Ok(HermiteCoefficients { values })
    }

    /// Christoffel–Darboux partial sum `Σ_{j≤n} h_j(y) h_j`.
    pub fn cd_kernel(&self, n: usize, y: &R) -> Result<GaussianPolySum<R>> {
        let values = self
            .values_at(n, y)?
            .into_iter()
            .map(cx)
            .collect();
        self.synth(&HermiteCoefficients { values })
    }
}

/// Hermite coefficients `⟨φ, h_j⟩`, `j = 0..=order`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteCoefficients<R: Real> {
    pub values: Vec<Cx<R>>,
}

impl<R: Real> HermiteCoefficients<R> {
    pub fn new(values: Vec<Cx<R>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("coefficient list is empty".into()));
        }
        if !values.iter().all(crate::scalar::c_is_finite) {
            return Err(Error::NonFinite("hermite coefficient".into()));
        }
        Ok(HermiteCoefficients { values })
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    /// `Σ_j (j+1)^{2m} |c_j|²`, the squared spectral m-norm.
    pub fn weighted_sq_norm(&self, m: usize) -> R {
        self.values
            .iter()
            .enumerate()
            .fold(R::zero(), |acc, (j, c)| {
                let w = R::of_int(j as i64 + 1).powi(2 * m as i32);
                acc + w * c.norm_sqr()
            })
    }

    /// CSV table with columns `n,value`; complex values add an `imag` column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_coefficient_csv(out, "value", &self.values)
    }
}

pub(crate) fn write_coefficient_csv<W: Write, R: Real>(
    mut out: W,
    column: &str,
    values: &[Cx<R>],
) -> Result<()> {
    let complex = values.iter().any(|v| !v.im.is_zero());
    if complex {
        writeln!(out, "n,{column},imag")?;
    } else {
        writeln!(out, "n,{column}")?;
    }
    for (n, v) in values.iter().enumerate() {
        if complex {
            writeln!(out, "{n},{},{}", v.re.to_decimal(), v.im.to_decimal())?;
        } else {
            writeln!(out, "{n},{}", v.re.to_decimal())?;
        }
    }
    Ok(())
}

/// `h_0(x), ..., h_n(x)` via the forward recurrence (stable for
/// orthonormal functions).
pub fn hermite_values<R: Real>(n: usize, x: &R) -> Vec<R> {
    let mut out = Vec::with_capacity(n + 1);
    let h0 = h0_scale::<R>() * (-(x.clone() * x.clone()) / R::of_int(4)).exp();
    out.push(h0);
    for k in 0..n {
        let mut v = x.clone() * out[k].clone();
        if k > 0 {
            v = v - R::of_int(k as i64).sqrt() * out[k - 1].clone();
        }
        out.push(v / R::of_int(k as i64 + 1).sqrt());
    }
    out
}

/// Closed form of `h_n(0)`: zero for odd `n`, otherwise
/// `(-1)^{n/2} (2π)^{-1/4} √(1/2 · 3/4 ⋯ (n-1)/n)` with the product summed
/// in log space.
pub fn hermite_at_zero<R: Real>(n: usize) -> R {
    if n % 2 == 1 {
        return R::zero();
    }
    let magnitude = h0_scale::<R>() * (wallis_log::<R>(n) / R::of_int(2)).exp();
    if (n / 2) % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// `ln ∏_{k even, 2≤k≤n} (k-1)/k`.
pub fn wallis_log<R: Real>(n: usize) -> R {
    let mut acc = R::zero();
    let mut k = 2;
    while k <= n {
        acc = acc + (R::of_int(k as i64 - 1) / R::of_int(k as i64)).ln();
        k += 2;
    }
    acc
}

/// `∏_{k even, 2≤k≤n} (k-1)/k`.
pub fn wallis_product<R: Real>(n: usize) -> R {
    wallis_log::<R>(n).exp()
}
