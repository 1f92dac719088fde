//! Hermite coefficient streams `n ↦ T(h_n)` of tempered distributions and
//! the embedding `ι(T) = [Σ_{j≤n} T(h_j) h_j]`.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{Provenance, RepSequence};
use crate::error::{Error, Result};
use crate::gauss::{GaussianPolySum, GaussianPolySumJson, Region, Side};
use crate::hermite::{h0_scale, hermite_at_zero, hermite_values, wallis_log, HermiteBasis, HermiteCoefficients};
use crate::scalar::{c_is_finite, cabs, cx, parse_rational, Cx, Real};

type Rule<R> = Arc<dyn Fn(usize) -> Result<Cx<R>> + Send + Sync>;

/// Serializable description of a stream, `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum StreamDescriptor {
    Delta {},
    One {},
    Heaviside {},
    DeltaPrime {},
    Xplus { p: String },
    Abs { a: String },
    Sgn { a: String },
    DeltaAt { a: String },
    Hermite { k: usize },
    FromGps { phi: GaussianPolySumJson },
}

/// The classical distributions with closed-form coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassicKind<R> {
    Delta,
    One,
    XPlus(R),
    DeltaPrime,
    Heaviside,
}

/// Streams built from a shift point, a test function or a user action.
pub enum GeneralKind<R: Real> {
    Abs(R),
    Sgn(R),
    DeltaAt(R),
    FromGps(GaussianPolySum<R>),
    Custom {
        label: String,
        action: Arc<dyn Fn(usize) -> Cx<R> + Send + Sync>,
    },
}

/// Coefficient sequence `n ↦ T(h_n)`.
#[derive(Clone)]
pub struct CoefficientStream<R: Real> {
    rule: Rule<R>,
    label: String,
    claimed_order: Option<f64>,
    descriptor: Option<StreamDescriptor>,
}

impl<R: Real> fmt::Debug for CoefficientStream<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientStream")
            .field("label", &self.label)
            .field("claimed_order", &self.claimed_order)
            .finish()
    }
}

/// Outcome of checking `|c_n| ≤ C (n+1)^p` over a prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCheck {
    pub constant: f64,
    pub holds: bool,
}

impl<R: Real> CoefficientStream<R> {
    pub fn new(label: impl Into<String>, rule: impl Fn(usize) -> Result<Cx<R>> + Send + Sync + 'static) -> Self {
        CoefficientStream {
            rule: Arc::new(rule),
            label: label.into(),
            claimed_order: None,
            descriptor: None,
        }
    }

    pub fn with_claimed_order(mut self, p: f64) -> Self {
        self.claimed_order = Some(p);
        self
    }

    fn described(mut self, d: StreamDescriptor) -> Self {
        self.descriptor = Some(d);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn claimed_order(&self) -> Option<f64> {
        self.claimed_order
    }

    pub fn descriptor(&self) -> Option<&StreamDescriptor> {
        self.descriptor.as_ref()
    }

    /// `T(h_n)`; rejects non-finite values.
    pub fn value(&self, n: usize) -> Result<Cx<R>> {
        let v = (self.rule)(n)?;
        if !c_is_finite(&v) {
            return Err(Error::NonFinite(format!("{}(h_{n})", self.label)));
        }
        Ok(v)
    }

    /// `T(h_0), ..., T(h_n)`.
    pub fn prefix(&self, n: usize) -> Result<HermiteCoefficients<R>> {
        let values = (0..=n).map(|j| self.value(j)).collect::<Result<Vec<_>>>()?;
        HermiteCoefficients::new(values)
    }

    pub fn scale(&self, s: Cx<R>) -> Self {
        let inner = self.clone();
        CoefficientStream::new(format!("[{}, {}]·{}", s.re.to_decimal(), s.im.to_decimal(), self.label), move |n| {
            Ok(inner.value(n)? * s.clone())
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        CoefficientStream::new(format!("({} + {})", self.label, other.label), move |n| {
            Ok(a.value(n)? + b.value(n)?)
        })
    }

    /// Distributional derivative: `(DT)(h_k) = -T(h_k')` with
    /// `h_k' = ½(√k h_{k-1} - √(k+1) h_{k+1})`.
    pub fn derive(&self) -> Self {
        let inner = self.clone();
        CoefficientStream::new(format!("D{}", self.label), move |k| {
            let half = R::one() / R::of_int(2);
            let mut acc = -inner.value(k + 1)? * cx(R::of_int(k as i64 + 1).sqrt());
            if k > 0 {
                acc = acc + inner.value(k - 1)? * cx(R::of_int(k as i64).sqrt());
            }
            Ok(-(acc * cx(half)))
        })
    }

    /// Fits `C` on the first half of the prefix and checks the claimed order
    /// on the second half with a factor-2 margin; `None` without a claim.
    pub fn growth_check(&self, nmax: usize) -> Result<Option<GrowthCheck>> {
        let Some(p) = self.claimed_order else {
            return Ok(None);
        };
        let mags = (0..=nmax)
            .map(|n| Ok(cabs(&self.value(n)?).to_f64()))
            .collect::<Result<Vec<_>>>()?;
        let weight = |n: usize| ((n + 1) as f64).powf(p);
        let half = nmax / 2;
        let constant = (0..=half).map(|n| mags[n] / weight(n)).fold(0.0, f64::max);
        let holds = (half + 1..=nmax).all(|n| mags[n] <= 2.0 * constant * weight(n));
        Ok(Some(GrowthCheck { constant, holds }))
    }

    /// CSV table with columns `n,coefficient` (plus `imag` when complex).
    pub fn write_csv<W: Write>(&self, nmax: usize, out: W) -> Result<()> {
        crate::hermite::write_coefficient_csv(out, "coefficient", &self.prefix(nmax)?.values)
    }

    /// Rebuilds a stream from its descriptor.
    pub fn from_descriptor(d: &StreamDescriptor, basis: &Arc<HermiteBasis<R>>) -> Result<Self> {
        let real = |s: &str| {
            parse_rational(s)
                .map(|q| R::of_ratio(&q))
                .ok_or_else(|| Error::InvalidArgument(format!("not a number: {s:?}")))
        };
        Ok(match d {
            StreamDescriptor::Delta {} => stream_classic(ClassicKind::Delta)?,
            StreamDescriptor::One {} => stream_classic(ClassicKind::One)?,
            StreamDescriptor::Heaviside {} => stream_classic(ClassicKind::Heaviside)?,
            StreamDescriptor::DeltaPrime {} => stream_classic(ClassicKind::DeltaPrime)?,
            StreamDescriptor::Xplus { p } => stream_classic(ClassicKind::XPlus(real(p)?))?.described(d.clone()),
            StreamDescriptor::Abs { a } => stream_general(GeneralKind::Abs(real(a)?), basis)?.described(d.clone()),
            StreamDescriptor::Sgn { a } => stream_general(GeneralKind::Sgn(real(a)?), basis)?.described(d.clone()),
            StreamDescriptor::DeltaAt { a } => {
                stream_general(GeneralKind::DeltaAt(real(a)?), basis)?.described(d.clone())
            }
            StreamDescriptor::Hermite { k } => hermite_unit(*k),
            StreamDescriptor::FromGps { phi } => {
                let phi = GaussianPolySum::from_json_repr(phi)?;
                stream_general(GeneralKind::FromGps(phi), basis)?
            }
        })
    }
}

/// Unnormalized `W_n(x)`: `W_0 = W_1 = 1`, `W_{n+2} = x W_n + n(n-1) W_{n-2}`.
pub fn w_value<R: Real>(n: usize, x: &R) -> R {
    let mut w = vec![R::one(), R::one()];
    for k in 0..n.saturating_sub(1) {
        let mut next = x.clone() * w[k].clone();
        if k >= 2 {
            next = next + R::of_int((k * (k - 1)) as i64) * w[k - 2].clone();
        }
        w.push(next);
    }
    w.swap_remove(n)
}

/// `W_n(x) / √(n!)` by the rescaled recurrence
/// `V_{n+2} = [x V_n + √(n(n-1)) V_{n-2}] / √((n+1)(n+2))`.
fn w_normalized<R: Real>(n: usize, x: &R) -> R {
    let mut v = vec![R::one(), R::one()];
    for k in 0..n.saturating_sub(1) {
        let mut next = x.clone() * v[k].clone();
        if k >= 2 {
            next = next + R::of_int((k * (k - 1)) as i64).sqrt() * v[k - 2].clone();
        }
        v.push(next / R::of_int(((k + 1) * (k + 2)) as i64).sqrt());
    }
    v.swap_remove(n)
}

/// Closed form of `x₊ᵖ(h_n) = (√(2π) n!)^{-1/2} K W_n(2p+1)` with
/// `K = 2ᵖ Γ((p+1)/2)` for even `n` and `2^{p+1} Γ((p+2)/2)` for odd `n`.
pub fn xplus_closed_form<R: Real>(p: &R, n: usize) -> R {
    let two = R::of_int(2);
    let constant = if n % 2 == 0 {
        two.powf(p) * ((p.clone() + R::one()) / two.clone()).gamma()
    } else {
        two.powf(&(p.clone() + R::one())) * ((p.clone() + two.clone()) / two.clone()).gamma()
    };
    let x = two * p.clone() + R::one();
    h0_scale::<R>() * constant * w_normalized(n, &x)
}

/// `∫_0^∞ x^p h_n(x) dx` by exact incomplete moments.
fn xplus_quadrature<R: Real>(p: usize, n: usize) -> Result<R> {
    let hn = HermiteBasis::<R>::new(n).function(n)?;
    let mut monomial = vec![Cx::zero(); p + 1];
    monomial[p] = cx(R::one());
    let f = hn.mul_poly(&monomial);
    Ok(f.integral(&Region::half_line(R::zero(), Side::Right)).re)
}

const XPLUS_GATE_MAX_N: usize = 50;

fn xplus_value<R: Real>(p: &R, n: usize) -> Result<R> {
    let v = xplus_closed_form(p, n);
    let small_int = (0..=2).find(|k| *p == R::of_int(*k as i64));
    if let (Some(k), true) = (small_int, n <= XPLUS_GATE_MAX_N) {
        let q = xplus_quadrature::<R>(k, n)?;
        let scale = R::max_of(R::one(), q.abs());
        if (v.clone() - q.clone()).abs() > R::of_int(10) * R::tolerance() * scale {
            log::warn!("x_+^{k}(h_{n}): closed form {v:?} disagrees with quadrature {q:?}; using quadrature");
            return Ok(q);
        }
    }
    Ok(v)
}

fn hermite_unit<R: Real>(k: usize) -> CoefficientStream<R> {
    CoefficientStream::new(format!("h{k}"), move |n| {
        Ok(if n == k { cx(R::one()) } else { Cx::zero() })
    })
    .with_claimed_order(0.0)
    .described(StreamDescriptor::Hermite { k })
}

/// δ, 𝟏, x₊ᵖ, δ′ and the Heaviside function.
pub fn stream_classic<R: Real>(kind: ClassicKind<R>) -> Result<CoefficientStream<R>> {
    Ok(match kind {
        ClassicKind::Delta => CoefficientStream::new("delta", |n| Ok(cx(hermite_at_zero::<R>(n))))
            .with_claimed_order(0.0)
            .described(StreamDescriptor::Delta {}),
        ClassicKind::One => CoefficientStream::new("one", |n| {
            if n % 2 == 1 {
                return Ok(Cx::zero());
            }
            // 𝟏(h_n) = (8π)^{1/4} √(1/2 · 3/4 ⋯ (n-1)/n)
            let root = (R::of_int(8) * R::pi()).sqrt().sqrt();
            Ok(cx(root * (wallis_log::<R>(n) / R::of_int(2)).exp()))
        })
        .with_claimed_order(0.0)
        .described(StreamDescriptor::One {}),
        ClassicKind::XPlus(p) => {
            if !(p >= R::zero()) {
                return Err(Error::InvalidArgument(format!("x_+^p needs p ≥ 0, got {p:?}")));
            }
            let order = p.to_f64() / 2.0 + 0.25;
            let descriptor = StreamDescriptor::Xplus { p: p.to_decimal() };
            CoefficientStream::new(format!("xplus({})", p.to_decimal()), move |n| {
                Ok(cx(xplus_value(&p, n)?))
            })
            .with_claimed_order(order)
            .described(descriptor)
        }
        ClassicKind::Heaviside => {
            let s = stream_classic(ClassicKind::XPlus(R::zero()))?;
            CoefficientStream { label: "heaviside".into(), descriptor: Some(StreamDescriptor::Heaviside {}), ..s }
        }
        ClassicKind::DeltaPrime => CoefficientStream::new("dprime", |n| {
            // δ'(h_n) = -h_n'(0) = -√n h_{n-1}(0)
            if n == 0 {
                return Ok(Cx::zero());
            }
            Ok(cx(-R::of_int(n as i64).sqrt() * hermite_at_zero::<R>(n - 1)))
        })
        .with_claimed_order(0.5)
        .described(StreamDescriptor::DeltaPrime {}),
    })
}

/// `∫_a^∞ g h_n - ∫_{-∞}^a g h_n` for a polynomial factor `g`.
fn signed_split<R: Real>(basis: &HermiteBasis<R>, n: usize, a: &R, g: &[Cx<R>]) -> Result<Cx<R>> {
    let f = basis.function(n)?.mul_poly(g);
    let right = f.integral(&Region::half_line(a.clone(), Side::Right));
    let left = f.integral(&Region::half_line(a.clone(), Side::Left));
    Ok(right - left)
}

/// |x-a|, sgn(x-a), δ_a, test functions and custom actions.
pub fn stream_general<R: Real>(kind: GeneralKind<R>, basis: &Arc<HermiteBasis<R>>) -> Result<CoefficientStream<R>> {
    let basis = basis.clone();
    Ok(match kind {
        GeneralKind::Abs(a) => {
            let descriptor = StreamDescriptor::Abs { a: a.to_decimal() };
            let g = vec![cx(-a.clone()), cx(R::one())];
            CoefficientStream::new(format!("abs({})", a.to_decimal()), move |n| {
                signed_split(&basis, n, &a, &g)
            })
            .with_claimed_order(0.75)
            .described(descriptor)
        }
        GeneralKind::Sgn(a) => {
            let descriptor = StreamDescriptor::Sgn { a: a.to_decimal() };
            let g = vec![cx(R::one())];
            CoefficientStream::new(format!("sgn({})", a.to_decimal()), move |n| {
                signed_split(&basis, n, &a, &g)
            })
            .with_claimed_order(0.25)
            .described(descriptor)
        }
        GeneralKind::DeltaAt(a) => {
            let descriptor = StreamDescriptor::DeltaAt { a: a.to_decimal() };
            CoefficientStream::new(format!("delta_at({})", a.to_decimal()), move |n| {
                basis.cap_check(n)?;
                Ok(cx(hermite_values(n, &a).swap_remove(n)))
            })
            .with_claimed_order(0.0)
            .described(descriptor)
        }
        GeneralKind::FromGps(phi) => {
            let descriptor = StreamDescriptor::FromGps { phi: phi.to_json_repr() };
            CoefficientStream::new("phi", move |n| Ok(phi.inner(&basis.function(n)?)))
                .with_claimed_order(0.0)
                .described(descriptor)
        }
        GeneralKind::Custom { label, action } => CoefficientStream::new(label, move |n| Ok(action(n))),
    })
}

/// `ι(T)`: the partial sums `T_n = Σ_{j≤n} T(h_j) h_j`.
pub fn embed<R: Real>(stream: &CoefficientStream<R>, basis: &Arc<HermiteBasis<R>>) -> RepSequence<R> {
    let (stream, basis) = (stream.clone(), basis.clone());
    let provenance = Provenance::leaf(format!("ι({})", stream.label));
    RepSequence::new(provenance, true, move |n| basis.synth(&stream.prefix(n)?))
}
