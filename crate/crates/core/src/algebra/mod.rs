//! Representative sequences `(f_n)` standing for classes of the quotient
//! algebra ℋ, and tempered numbers `(a_n)` standing for classes of 𝐡 = s′/s.
//!
//! Classes are handled through one representative plus the association and
//! growth diagnostics of [`assoc`], [`growth`] and [`symprod`].

pub mod assoc;
pub mod growth;
pub mod symprod;

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::{Direction, GaussianPolySum, Region};
use crate::hermite::{hermite_rate, HermiteBasis, HermiteCoefficients};
use crate::precision;
use crate::scalar::{c_is_finite, cx, Cx, Real};

pub use assoc::{associated, default_probes, tn_associated, AssocFit, AssocReport, AssocVerdict};
pub use growth::{fit_exponent, moderation_class, GrowthClass, GrowthVerdict};
pub use symprod::{symmetric_product, ConvergenceStatus, SymProdReport};

/// Expression tree recording how a sequence or number was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Provenance {
    Leaf(String),
    Node { op: String, args: Vec<Provenance> },
}

impl Provenance {
    pub fn leaf(label: impl Into<String>) -> Self {
        Provenance::Leaf(label.into())
    }

    pub fn node(op: impl Into<String>, args: Vec<Provenance>) -> Self {
        Provenance::Node { op: op.into(), args }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Leaf(s) => f.write_str(s),
            Provenance::Node { op, args } => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Evaluates `f` over `range` on the rayon pool, carrying the caller's
/// precision onto the workers. Results are in index order and identical to
/// a sequential evaluation.
pub fn par_collect<T: Send>(
    range: RangeInclusive<usize>,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    let bits = precision::snapshot();
    range
        .into_par_iter()
        .map(|n| precision::with_bits(bits, || f(n)))
        .collect()
}

type SeqRule<R> = Arc<dyn Fn(usize) -> Result<GaussianPolySum<R>> + Send + Sync>;
type NumRule<R> = Arc<dyn Fn(usize) -> Result<Cx<R>> + Send + Sync>;

/// Which Fourier transform [`RepSequence::fourier`] applies.
#[derive(Clone)]
pub enum FourierBackend<R: Real> {
    /// The unitary integral transform, exact per `n`.
    Analytic,
    /// `a_k ↦ (-i)^k a_k` on Hermite coefficients; Hermite-form input only.
    Spectral(Arc<HermiteBasis<R>>),
}

/// A lazy representative sequence `n ↦ f_n`.
#[derive(Clone)]
pub struct RepSequence<R: Real> {
    rule: SeqRule<R>,
    provenance: Provenance,
    hermite_form: bool,
}

impl<R: Real> fmt::Debug for RepSequence<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepSequence")
            .field("provenance", &self.provenance.to_string())
            .field("hermite_form", &self.hermite_form)
            .finish()
    }
}

impl<R: Real> RepSequence<R> {
    pub fn new(
        provenance: Provenance,
        hermite_form: bool,
        rule: impl Fn(usize) -> Result<GaussianPolySum<R>> + Send + Sync + 'static,
    ) -> Self {
        RepSequence {
            rule: Arc::new(rule),
            provenance,
            hermite_form,
        }
    }

    /// The constant sequence `n ↦ f`.
    pub fn constant(label: impl Into<String>, f: GaussianPolySum<R>) -> Self {
        let hermite_form = f.is_single_rate(&hermite_rate());
        RepSequence::new(Provenance::leaf(label), hermite_form, move |_| Ok(f.clone()))
    }

    pub fn zero() -> Self {
        RepSequence::constant("0", GaussianPolySum::zero())
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_hermite_form(&self) -> bool {
        self.hermite_form
    }

    /// The representative `f_n`.
    pub fn at(&self, n: usize) -> Result<GaussianPolySum<R>> {
        let f = (self.rule)(n)?;
        if !f.all_finite() {
            return Err(Error::NonFinite(format!("{} at n = {n}", self.provenance)));
        }
        if self.hermite_form && !f.is_single_rate(&hermite_rate()) {
            return Err(Error::InvalidArgument(format!(
                "{} at n = {n} is not a single rate-1/4 term",
                self.provenance
            )));
        }
        Ok(f)
    }

    fn unary(
        &self,
        op: &str,
        hermite_form: bool,
        f: impl Fn(GaussianPolySum<R>) -> Result<GaussianPolySum<R>> + Send + Sync + 'static,
    ) -> Self {
        let inner = self.clone();
        RepSequence::new(
            Provenance::node(op, vec![self.provenance.clone()]),
            hermite_form,
            move |n| f(inner.at(n)?),
        )
    }

    fn binary(
        &self,
        other: &Self,
        op: &str,
        hermite_form: bool,
        f: impl Fn(GaussianPolySum<R>, GaussianPolySum<R>) -> GaussianPolySum<R> + Send + Sync + 'static,
    ) -> Self {
        let (a, b) = (self.clone(), other.clone());
        RepSequence::new(
            Provenance::node(op, vec![self.provenance.clone(), other.provenance.clone()]),
            hermite_form,
            move |n| Ok(f(a.at(n)?, b.at(n)?)),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let hf = self.hermite_form && other.hermite_form;
        self.binary(other, "add", hf, |a, b| a.add(&b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let hf = self.hermite_form && other.hermite_form;
        self.binary(other, "sub", hf, |a, b| a.sub(&b))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binary(other, "mul", false, |a, b| a.mul(&b))
    }

    pub fn derive(&self) -> Self {
        self.unary("D", self.hermite_form, |f| Ok(f.derive()))
    }

    pub fn scale(&self, s: Cx<R>) -> Self {
        let label = format!("scale[{}]", s.re.to_decimal());
        self.unary(&label, self.hermite_form, move |f| Ok(f.scale(&s)))
    }

    /// Pointwise `a_n f_n`, the 𝐡-module action.
    pub fn scale_tn(&self, a: &TemperedNumber<R>) -> Self {
        let (inner, a) = (self.clone(), a.clone());
        RepSequence::new(
            Provenance::node("scale_tn", vec![a.provenance.clone(), self.provenance.clone()]),
            self.hermite_form,
            move |n| Ok(inner.at(n)?.scale(&a.at(n)?)),
        )
    }

    /// Multiplication by a polynomial, `Q(x) f_n`.
    pub fn mul_poly(&self, q: &[Cx<R>]) -> Self {
        let q = q.to_vec();
        self.unary("mul_poly", self.hermite_form, move |f| Ok(f.mul_poly(&q)))
    }

    pub fn fourier(&self, direction: Direction, backend: &FourierBackend<R>) -> Result<Self> {
        let tag = match direction {
            Direction::Forward => "F",
            Direction::Inverse => "Finv",
        };
        match backend {
            FourierBackend::Analytic => Ok(self.unary(tag, false, move |f| Ok(f.fourier(direction)))),
            FourierBackend::Spectral(basis) => {
                if !self.hermite_form {
                    return Err(Error::NotHermiteForm);
                }
                let basis = basis.clone();
                let sign: i64 = match direction {
                    Direction::Forward => -1,
                    Direction::Inverse => 1,
                };
                Ok(self.unary(&format!("{tag}_spectral"), true, move |f| {
                    let a = basis.expand(&f)?;
                    let mut phase = cx(R::one());
                    let step = Cx::new(R::zero(), R::of_int(sign));
                    let values = a
                        .values
                        .into_iter()
                        .map(|ak| {
                            let v = ak * phase.clone();
                            phase = phase.clone() * step.clone();
                            v
                        })
                        .collect();
                    basis.synth(&HermiteCoefficients::new(values)?)
                }))
            }
        }
    }

    /// `[f_n ∗ g_n]`.
    pub fn convolve(&self, other: &Self) -> Self {
        self.binary(other, "conv", false, |a, b| a.convolve(&b))
    }

    /// `n ↦ ∫_A f_n`.
    pub fn integrate(&self, region: &Region<R>) -> TemperedNumber<R> {
        let (inner, region) = (self.clone(), region.clone());
        TemperedNumber::new(
            Provenance::node("integrate", vec![self.provenance.clone()]),
            move |n| Ok(inner.at(n)?.integral(&region)),
        )
    }

    /// `n ↦ f_n(a)`.
    pub fn point_value(&self, a: &R) -> TemperedNumber<R> {
        let (inner, a) = (self.clone(), a.clone());
        TemperedNumber::new(
            Provenance::node(format!("at[{}]", a.to_decimal()), vec![self.provenance.clone()]),
            move |n| Ok(inner.at(n)?.eval(&a)),
        )
    }

    /// `n ↦ ∫ f_n φ`, the pairing with a test function.
    pub fn pairing(&self, probe: &GaussianPolySum<R>) -> TemperedNumber<R> {
        let (inner, probe) = (self.clone(), probe.clone());
        TemperedNumber::new(
            Provenance::node("pair", vec![self.provenance.clone()]),
            move |n| Ok(inner.at(n)?.mul(&probe).integral(&Region::Full)),
        )
    }

    /// `f_0, ..., f_nmax`, evaluated in parallel.
    pub fn prefix(&self, nmax: usize) -> Result<Vec<GaussianPolySum<R>>> {
        par_collect(0..=nmax, |n| self.at(n))
    }
}

/// A lazy scalar sequence `n ↦ a_n`.
#[derive(Clone)]
pub struct TemperedNumber<R: Real> {
    rule: NumRule<R>,
    provenance: Provenance,
}

impl<R: Real> fmt::Debug for TemperedNumber<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TemperedNumber")
            .field("provenance", &self.provenance.to_string())
            .finish()
    }
}

impl<R: Real> TemperedNumber<R> {
    pub fn new(provenance: Provenance, rule: impl Fn(usize) -> Result<Cx<R>> + Send + Sync + 'static) -> Self {
        TemperedNumber {
            rule: Arc::new(rule),
            provenance,
        }
    }

    /// The constant sequence `n ↦ r`.
    pub fn from_real(r: R) -> Self {
        let label = r.to_decimal();
        TemperedNumber::new(Provenance::leaf(label), move |_| Ok(cx(r.clone())))
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn at(&self, n: usize) -> Result<Cx<R>> {
        let v = (self.rule)(n)?;
        if !c_is_finite(&v) {
            return Err(Error::NonFinite(format!("{} at n = {n}", self.provenance)));
        }
        Ok(v)
    }

    pub fn prefix(&self, range: RangeInclusive<usize>) -> Result<Vec<Cx<R>>> {
        par_collect(range, |n| self.at(n))
    }

    fn binary(&self, other: &Self, op: &str, f: impl Fn(Cx<R>, Cx<R>) -> Cx<R> + Send + Sync + 'static) -> Self {
        let (a, b) = (self.clone(), other.clone());
        TemperedNumber::new(
            Provenance::node(op, vec![self.provenance.clone(), other.provenance.clone()]),
            move |n| Ok(f(a.at(n)?, b.at(n)?)),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binary(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binary(other, "sub", |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binary(other, "mul", |a, b| a * b)
    }
}
