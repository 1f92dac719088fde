//! Closed-form integrals of Gaussian-polynomial sums over the real line,
//! half-lines and finite unions of bounded intervals.

use num_traits::Zero;

use super::{GaussianPolySum, GaussianTerm};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `(-∞, a]`
    Left,
    /// `[a, ∞)`
    Right,
}

/// Integration domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Region<R: Real> {
    Full,
    HalfLine { endpoint: R, side: Side },
    IntervalUnion(Vec<(R, R)>),
}

impl<R: Real> Region<R> {
    pub fn half_line(endpoint: R, side: Side) -> Self {
        Region::HalfLine { endpoint, side }
    }

    /// Validated union of bounded intervals, sorted by lower end.
    pub fn intervals(mut intervals: Vec<(R, R)>) -> Result<Self> {
        for (lo, hi) in &intervals {
            if !(lo < hi) {
                return Err(Error::InvalidArgument(format!(
                    "interval [{lo:?}, {hi:?}] must have lower < upper"
                )));
            }
        }
        intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite endpoints"));
        for w in intervals.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::InvalidArgument(format!(
                    "intervals [{:?}, {:?}] and [{:?}, {:?}] overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Region::IntervalUnion(intervals))
    }
}

/// `∫_ℝ x^k exp(-c x²) dx` for `k = 0..=kmax` (odd moments vanish).
pub fn full_moments<R: Real>(c: &R, kmax: usize) -> Vec<R> {
    let mut out = vec![R::zero(); kmax + 1];
    let two_c = R::of_int(2) * c.clone();
    let mut m = (R::pi() / c.clone()).sqrt();
    let mut k = 0;
    while k <= kmax {
        out[k] = m.clone();
        m = m * R::of_int(k as i64 + 1) / two_c.clone();
        k += 2;
    }
    out
}

/// `∫_e^∞ x^k exp(-c x²) dx` for `k = 0..=kmax`.
///
/// Endpoint zero uses the exact Gamma values; a positive endpoint uses
/// `erfc` plus the incomplete-moment recurrence
/// `M_k = e^{k-1} exp(-c e²)/(2c) + (k-1)/(2c) M_{k-2}`; a negative
/// endpoint reflects onto the positive one.
pub fn tail_moments<R: Real>(c: &R, e: &R, kmax: usize) -> Vec<R> {
    if *e < R::zero() {
        let full = full_moments(c, kmax);
        let mirrored = tail_moments(c, &-e.clone(), kmax);
        return full
            .into_iter()
            .zip(mirrored)
            .enumerate()
            .map(|(k, (f, m))| if k % 2 == 0 { f - m } else { f + m })
            .collect();
    }
    let two_c = R::of_int(2) * c.clone();
    let mut out: Vec<R> = Vec::with_capacity(kmax + 1);
    let half_root = (R::pi() / c.clone()).sqrt() / R::of_int(2);
    if e.is_zero() {
        out.push(half_root);
        if kmax >= 1 {
            out.push(R::one() / two_c.clone());
        }
        for k in 2..=kmax {
            let v = out[k - 2].clone() * R::of_int(k as i64 - 1) / two_c.clone();
            out.push(v);
        }
        return out;
    }
    let weight = (-(c.clone() * e.clone() * e.clone())).exp();
    out.push(half_root * (c.clone().sqrt() * e.clone()).erfc());
    if kmax >= 1 {
        out.push(weight.clone() / two_c.clone());
    }
    let mut e_pow = e.clone(); // e^{k-1}
    for k in 2..=kmax {
        let v = e_pow.clone() * weight.clone() / two_c.clone()
            + out[k - 2].clone() * R::of_int(k as i64 - 1) / two_c.clone();
        out.push(v);
        e_pow = e_pow * e.clone();
    }
    out
}

fn dot<R: Real>(coeffs: &[Cx<R>], moments: &[R]) -> Cx<R> {
    let mut acc = Cx::<R>::zero();
    for (a, m) in coeffs.iter().zip(moments) {
        if m.is_zero() {
            continue;
        }
        acc.re.mul_add_assign(&a.re, m);
        acc.im.mul_add_assign(&a.im, m);
    }
    acc
}

impl<R: Real> GaussianTerm<R> {
    fn right_tail(&self, c: &R, e: &R) -> Cx<R> {
        let deg = self.coeffs.len().saturating_sub(1);
        dot(&self.coeffs, &tail_moments(c, e, deg))
    }

    fn integral(&self, region: &Region<R>) -> Cx<R> {
        if self.is_zero() {
            return Cx::zero();
        }
        let c = self.rate_value();
        let deg = self.coeffs.len() - 1;
        match region {
            Region::Full => dot(&self.coeffs, &full_moments(&c, deg)),
            Region::HalfLine {
                endpoint,
                side: Side::Right,
            } => self.right_tail(&c, endpoint),
            Region::HalfLine {
                endpoint,
                side: Side::Left,
            } => dot(&self.coeffs, &full_moments(&c, deg)) - self.right_tail(&c, endpoint),
            Region::IntervalUnion(parts) => parts.iter().fold(Cx::zero(), |acc, (lo, hi)| {
                acc + self.right_tail(&c, lo) - self.right_tail(&c, hi)
            }),
        }
    }
}

impl<R: Real> GaussianPolySum<R> {
    /// Exact integral over `region` at working precision.
    pub fn integral(&self, region: &Region<R>) -> Cx<R> {
        self.terms
            .iter()
            .fold(Cx::zero(), |acc, t| acc + t.integral(region))
    }
}
