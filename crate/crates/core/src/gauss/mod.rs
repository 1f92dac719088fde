//! Exact arithmetic on sums of polynomial-times-Gaussian terms,
//! `Σ P_i(x) exp(-c_i x²)` with exact rational rates `c_i > 0`.
//!
//! The class is closed under products, derivatives, polynomial multipliers,
//! the unitary Fourier transform and convolution, so every representative
//! used by the algebra lives here without discretization.

mod fourier;
mod integral;
mod json;
pub mod poly;

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use fourier::Direction;
pub use integral::{Region, Side};
pub use json::{GaussianPolySumJson, GaussianTermJson};

use crate::error::{Error, Result};
use crate::scalar::{cabs, cx, Cx, Real};
use poly::Poly;

/// Exact positive rate `c` of `exp(-c x²)`.
pub type Rate = BigRational;

pub fn rate(numer: i64, denom: i64) -> Rate {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// One polynomial-times-Gaussian term `P(x) exp(-c x²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTerm<R: Real> {
    rate: Rate,
    coeffs: Poly<R>,
}

impl<R: Real> GaussianTerm<R> {
    pub fn new(rate: Rate, mut coeffs: Poly<R>) -> Result<Self> {
        if !rate.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "gaussian rate must be positive, got {rate}"
            )));
        }
        poly::trim(&mut coeffs);
        Ok(GaussianTerm { rate, coeffs })
    }

    pub fn rate(&self) -> &Rate {
        &self.rate
    }

    pub fn coeffs(&self) -> &[Cx<R>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Polynomial degree; `None` for the zero term.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn rate_value(&self) -> R {
        R::of_ratio(&self.rate)
    }

    fn with_coeffs(&self, coeffs: Poly<R>) -> Self {
        let mut coeffs = coeffs;
        poly::trim(&mut coeffs);
        GaussianTerm {
            rate: self.rate.clone(),
            coeffs,
        }
    }

    fn derive(&self) -> Self {
        // (P' - 2 c x P) exp(-c x²)
        let two_c = cx(R::of_int(2) * self.rate_value());
        let mut out = poly::derive(&self.coeffs);
        let xp = poly::shift(&self.coeffs);
        poly::axpy_into(&mut out, &-two_c, &xp);
        self.with_coeffs(out)
    }

    fn eval(&self, x: &R) -> Cx<R> {
        let weight = (-(self.rate_value() * x.clone() * x.clone())).exp();
        let p = poly::eval(&self.coeffs, x);
        Cx::new(p.re * weight.clone(), p.im * weight)
    }
}

/// Canonical sum of Gaussian terms with strictly increasing, distinct rates
/// and no zero terms; the empty sum is the zero function.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolySum<R: Real> {
    terms: Vec<GaussianTerm<R>>,
}

impl<R: Real> Default for GaussianPolySum<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Real> GaussianPolySum<R> {
    pub fn zero() -> Self {
        GaussianPolySum { terms: Vec::new() }
    }

    /// Builds the canonical form: sorts by rate, merges equal rates and
    /// drops zero terms.
    pub fn from_terms(terms: impl IntoIterator<Item = GaussianTerm<R>>) -> Self {
        let mut terms: Vec<GaussianTerm<R>> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.rate.cmp(&b.rate));
        let mut out: Vec<GaussianTerm<R>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.rate == t.rate => {
                    poly::add_into(&mut last.coeffs, &t.coeffs);
                    poly::trim(&mut last.coeffs);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.is_zero());
        GaussianPolySum { terms: out }
    }

    pub fn from_term(term: GaussianTerm<R>) -> Self {
        Self::from_terms([term])
    }

    /// `P(x) exp(-c x²)` from real polynomial coefficients.
    pub fn from_real_poly(rate: Rate, coeffs: &[R]) -> Result<Self> {
        let coeffs = coeffs.iter().cloned().map(cx).collect();
        Ok(Self::from_term(GaussianTerm::new(rate, coeffs)?))
    }

    /// `a exp(-c x²)`.
    pub fn gaussian(rate: Rate, amplitude: Cx<R>) -> Result<Self> {
        Ok(Self::from_term(GaussianTerm::new(rate, vec![amplitude])?))
    }

    pub fn terms(&self) -> &[GaussianTerm<R>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the function is a single term of the given rate (or zero).
    pub fn is_single_rate(&self, rate: &Rate) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| &t.rate == rate)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().filter_map(|t| t.degree()).max().unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.coeffs.iter().all(|c| c.im.is_zero()))
    }

    fn map_terms(&self, f: impl Fn(&GaussianTerm<R>) -> GaussianTerm<R>) -> Self {
        Self::from_terms(self.terms.iter().map(f))
    }

    /// Point evaluation.
    pub fn eval(&self, x: &R) -> Cx<R> {
        self.terms
            .iter()
            .fold(Cx::zero(), |acc, t| acc + t.eval(x))
    }

    pub fn scale(&self, s: &Cx<R>) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        self.map_terms(|t| t.with_coeffs(poly::scale(&t.coeffs, s)))
    }

    pub fn scale_real(&self, s: &R) -> Self {
        self.scale(&cx(s.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|t| t.with_coeffs(t.coeffs.iter().map(|c| -c.clone()).collect()))
    }

    /// Pointwise product; rates add termwise.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(GaussianTerm {
                    rate: &a.rate + &b.rate,
                    coeffs: poly::mul(&a.coeffs, &b.coeffs),
                });
            }
        }
        for t in &mut out {
            poly::trim(&mut t.coeffs);
        }
        Self::from_terms(out)
    }

    /// Multiplication by a plain polynomial `Q(x)`.
    pub fn mul_poly(&self, q: &[Cx<R>]) -> Self {
        self.map_terms(|t| t.with_coeffs(poly::mul(&t.coeffs, q)))
    }

    /// Multiplication by `x`.
    pub fn mul_x(&self) -> Self {
        self.map_terms(|t| t.with_coeffs(poly::shift(&t.coeffs)))
    }

    pub fn derive(&self) -> Self {
        self.map_terms(GaussianTerm::derive)
    }

    pub fn derive_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derive())
    }

    pub fn conj(&self) -> Self {
        self.map_terms(|t| t.with_coeffs(poly::conj(&t.coeffs)))
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        self.map_terms(|t| t.with_coeffs(poly::reflect(&t.coeffs)))
    }

    /// `⟨f, g⟩ = ∫ f conj(g) dx`.
    pub fn inner(&self, other: &Self) -> Cx<R> {
        self.mul(&other.conj()).integral(&Region::Full)
    }

    /// Harmonic-oscillator operator `-f'' + (x²/4) f + f/2`, for which the
    /// Hermite functions satisfy `(N+1) h_n = (n+1) h_n`.
    pub fn number_op(&self) -> Self {
        let quarter = R::one() / R::of_int(4);
        let half = R::one() / R::of_int(2);
        let q = vec![cx(half), Cx::zero(), cx(quarter)];
        self.mul_poly(&q).sub(&self.derive().derive())
    }

    /// `‖f‖_m = ‖(N+1)^m f‖_{L²}`.
    pub fn norm(&self, m: usize) -> R {
        let g = (0..m).fold(self.clone(), |g, _| g.number_op());
        let sq = g.inner(&g).re;
        if sq > R::zero() {
            sq.sqrt()
        } else {
            R::zero()
        }
    }

    /// Largest coefficient modulus over all terms.
    pub fn max_abs_coeff(&self) -> R {
        self.terms
            .iter()
            .flat_map(|t| t.coeffs.iter())
            .map(cabs)
            .fold(R::zero(), R::max_of)
    }

    /// Coefficientwise sup distance between two canonical sums.
    pub fn coeff_distance(&self, other: &Self) -> R {
        self.sub(other).max_abs_coeff()
    }

    /// Converts to another scalar type via decimal strings.
    pub fn cast<S: Real>(&self) -> GaussianPolySum<S> {
        let conv = |v: &R| S::parse_decimal(&v.to_decimal()).unwrap_or_else(|| S::of_f64(v.to_f64()));
        GaussianPolySum {
            terms: self
                .terms
                .iter()
                .map(|t| GaussianTerm {
                    rate: t.rate.clone(),
                    coeffs: t.coeffs.iter().map(|c| Cx::new(conv(&c.re), conv(&c.im))).collect(),
                })
                .collect(),
        }
    }

    pub fn all_finite(&self) -> bool {
        self.terms
            .iter()
            .flat_map(|t| t.coeffs.iter())
            .all(crate::scalar::c_is_finite)
    }
}

/// The constant polynomial `1` as a multiplier.
pub fn poly_one<R: Real>() -> Poly<R> {
    vec![Cx::one()]
}

/// The multiplier `x`.
pub fn poly_x<R: Real>() -> Poly<R> {
    vec![Cx::zero(), Cx::one()]
}

impl<R: Real> Add for &GaussianPolySum<R> {
    type Output = GaussianPolySum<R>;
    fn add(self, rhs: Self) -> GaussianPolySum<R> {
        GaussianPolySum::add(self, rhs)
    }
}

impl<R: Real> Sub for &GaussianPolySum<R> {
    type Output = GaussianPolySum<R>;
    fn sub(self, rhs: Self) -> GaussianPolySum<R> {
        GaussianPolySum::sub(self, rhs)
    }
}

impl<R: Real> Mul for &GaussianPolySum<R> {
    type Output = GaussianPolySum<R>;
    fn mul(self, rhs: Self) -> GaussianPolySum<R> {
        GaussianPolySum::mul(self, rhs)
    }
}

impl<R: Real> Neg for &GaussianPolySum<R> {
    type Output = GaussianPolySum<R>;
    fn neg(self) -> GaussianPolySum<R> {
        GaussianPolySum::neg(self)
    }
}
