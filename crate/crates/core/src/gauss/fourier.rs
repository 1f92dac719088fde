//! Unitary Fourier transform `F(φ)(t) = (2π)^{-1/2} ∫ exp(-itx) φ(x) dx`
//! and convolution, both exact on the Gaussian-polynomial class.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{poly, GaussianPolySum, GaussianTerm};
use crate::scalar::{cx, i_pow, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl<R: Real> GaussianTerm<R> {
    /// `x^k exp(-c x²) ↦ i^k D^k [(2c)^{-1/2} exp(-t²/(4c))]`, summed over
    /// the coefficients.
    fn fourier_forward(&self) -> GaussianTerm<R> {
        let out_rate = (self.rate.clone() * super::rate(4, 1)).recip();
        let b = R::of_ratio(&out_rate);
        let two_b = cx(R::of_int(2) * b);
        let c = self.rate_value();
        // G_0 = (2c)^{-1/2}; G_{k+1} = G_k' - 2 b t G_k
        let mut g: poly::Poly<R> = vec![cx(R::one() / (R::of_int(2) * c).sqrt())];
        let mut out: poly::Poly<R> = Vec::new();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let mut next = poly::derive(&g);
                poly::axpy_into(&mut next, &-two_b.clone(), &poly::shift(&g));
                g = next;
            }
            if !a.is_zero() {
                let s = a.clone() * i_pow::<R>(k);
                poly::axpy_into(&mut out, &s, &g);
            }
        }
        poly::trim(&mut out);
        GaussianTerm {
            rate: out_rate,
            coeffs: out,
        }
    }
}

impl<R: Real> GaussianPolySum<R> {
    /// Unitary Fourier transform; `Inverse` is `F(φ)(-x)`, the exact
    /// two-sided inverse.
    pub fn fourier(&self, direction: Direction) -> Self {
        let forward = Self::from_terms(self.terms.iter().map(GaussianTerm::fourier_forward));
        match direction {
            Direction::Forward => forward,
            Direction::Inverse => forward.reflect(),
        }
    }

    /// `(f ∗ g)(t) = ∫ f(t - x) g(x) dx`, computed as
    /// `√(2π) F⁻¹(F f · F g)`; rates combine as `c₁c₂/(c₁+c₂)`.
    pub fn convolve(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let product = self
            .fourier(Direction::Forward)
            .mul(&other.fourier(Direction::Forward));
        let root_two_pi = (R::of_int(2) * R::pi()).sqrt();
        product.fourier(Direction::Inverse).scale_real(&root_two_pi)
    }
}

