//! Exact heat propagation `g_n(t, x) = (f_n ∗ p_t)(x)` and the checks of
//! `∂_t g = ½ ∂²_x g` and of the time-dependent Itô formula.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::compiled::Compiled;
use super::process::SamplePath;
use crate::algebra::{Provenance, RepSequence};
use crate::error::{Error, Result};
use crate::gauss::{GaussianPolySum, Rate};
use crate::hermite::HermiteBasis;
use crate::scalar::{cx, Real};

/// The unit-mass heat kernel `p_t(x) = (2πt)^{-1/2} exp(-x²/(2t))`.
pub fn heat_kernel<R: Real>(t: &Rate) -> Result<GaussianPolySum<R>> {
    if !t.is_positive() {
        return Err(Error::InvalidArgument("heat kernel needs t > 0".into()));
    }
    let tr = R::of_ratio(t);
    let amp = R::one() / (R::of_int(2) * R::pi() * tr).sqrt();
    GaussianPolySum::gaussian((t * BigRational::from_integer(2.into())).recip(), cx(amp))
}

/// `(n, t) ↦ f_n ∗ p_t`, with `t = 0` giving `f_n` itself.
#[derive(Clone, Debug)]
pub struct HeatFamily<R: Real> {
    f: RepSequence<R>,
}

impl<R: Real> HeatFamily<R> {
    pub fn at(&self, n: usize, t: &Rate) -> Result<GaussianPolySum<R>> {
        if t.is_negative() {
            return Err(Error::InvalidArgument("heat evolution needs t ≥ 0".into()));
        }
        let fnn = self.f.at(n)?;
        if t.is_zero() {
            return Ok(fnn);
        }
        Ok(fnn.convolve(&heat_kernel(t)?))
    }

    /// The sequence `n ↦ g_n(t, ·)`.
    pub fn at_time(&self, t: &Rate) -> Result<RepSequence<R>> {
        if t.is_negative() {
            return Err(Error::InvalidArgument("heat evolution needs t ≥ 0".into()));
        }
        let me = self.clone();
        let t = t.clone();
        let hf = t.is_zero() && self.f.is_hermite_form();
        Ok(RepSequence::new(
            Provenance::node(format!("heat[{t}]"), vec![self.f.provenance().clone()]),
            hf,
            move |n| me.at(n, &t),
        ))
    }

    /// `∂_t g_n(t, ·)` by two-level Richardson extrapolation of central
    /// differences with step `h`, as an exact combination of kernels.
    pub fn time_derivative(&self, n: usize, t: &Rate, h: &Rate) -> Result<GaussianPolySum<R>> {
        if !(h.is_positive() && t > h) {
            return Err(Error::InvalidArgument("time difference needs 0 < h < t".into()));
        }
        let two = BigRational::from_integer(2.into());
        let half = h / &two;
        let central = |step: &Rate| -> Result<GaussianPolySum<R>> {
            let d = self.at(n, &(t + step))?.sub(&self.at(n, &(t - step))?);
            Ok(d.scale_real(&(R::one() / (R::of_int(2) * R::of_ratio(step)))))
        };
        let coarse = central(h)?;
        let fine = central(&half)?;
        let third = R::one() / R::of_int(3);
        Ok(fine.scale_real(&(R::of_int(4) * third.clone())).sub(&coarse.scale_real(&third)))
    }
}

/// The heat family of `F`.
pub fn heat_evolve<R: Real>(f: &RepSequence<R>) -> HeatFamily<R> {
    HeatFamily { f: f.clone() }
}

/// Default Richardson step `t/1000`.
pub fn default_step(t: &Rate) -> Rate {
    t / BigRational::from_integer(1000.into())
}

/// `|∂_t g - ½ ∂²_x g|` at `(t, x)`, with `∂²_x` exact.
pub fn heat_residual<R: Real>(h: &HeatFamily<R>, t: &Rate, x: &R, n: usize) -> Result<R> {
    let g = h.at(n, t)?;
    let gt = h.time_derivative(n, t, &default_step(t))?.eval(x);
    let gxx = g.derive().derive().eval(x);
    Ok((gt - gxx * cx(R::one() / R::of_int(2))).norm_sqr().sqrt())
}

/// `[g, ∂_x g, ∂²_x g, ∂_t g]` at each grid time `t0 + t_i`, compiled once
/// for reuse across paths.
pub struct TimeDependentKernel {
    steps: Vec<[Compiled; 4]>,
}

impl TimeDependentKernel {
    pub fn new<R: Real>(
        h: &HeatFamily<R>,
        n: usize,
        t0: &Rate,
        dt: f64,
        steps: usize,
        basis: &Arc<HermiteBasis<R>>,
    ) -> Result<Self> {
        let dt = BigRational::from_float(dt).ok_or_else(|| Error::InvalidArgument("dt is not finite".into()))?;
        let mut out = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let t = t0 + &dt * BigRational::from_integer(i.into());
            let g = h.at(n, &t)?;
            let [c0, c1, c2] = Compiled::with_derivatives(&g, basis)?;
            let gt = h.time_derivative(n, &t, &default_step(&t))?;
            out.push([c0, c1, c2, Compiled::new(&gt, basis)?]);
        }
        Ok(TimeDependentKernel { steps: out })
    }

    /// `g(T, X_T) - g(0, X_0) - Σ ∂_t g dt - Σ ∂_x g ΔX - ½ Σ ∂²_x g Δ⟨X⟩`.
    pub fn residual(&self, path: &SamplePath) -> f64 {
        let k = path.steps();
        assert_eq!(k + 1, self.steps.len(), "path grid does not match the kernel");
        let mut acc = 0.0;
        for i in 0..k {
            let x = path.values[i];
            let c = &self.steps[i];
            acc += c[3].eval(x) * path.dt
                + c[1].eval(x) * (path.values[i + 1] - x)
                + 0.5 * c[2].eval(x) * (path.qv[i + 1] - path.qv[i]);
        }
        self.steps[k][0].eval(path.end()) - self.steps[0][0].eval(path.values[0]) - acc
    }

    /// The plain Itô residual of the function frozen at grid time `i`.
    pub fn frozen_residual(&self, i: usize, path: &SamplePath) -> f64 {
        let c = &self.steps[i];
        super::calculus::ito_residual_compiled(&[c[0].clone(), c[1].clone(), c[2].clone()], path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rate;
    use crate::hermite::{h0_scale, DEFAULT_CAP};
    use crate::precision::PrecisionContext;
    use crate::BigFloat;

    type B = BigFloat;

    #[test]
    fn gaussian_closed_form() {
        let _g = PrecisionContext::default().enter();
        let basis = HermiteBasis::<B>::new(DEFAULT_CAP);
        let f = RepSequence::constant("h0", basis.function(0).unwrap());
        let h = heat_evolve(&f);
        let v = h.at(0, &rate(2, 1)).unwrap().eval(&B::of_int(0)).re;
        let expect = h0_scale::<B>() / B::of_int(2).sqrt();
        assert!((v - expect).abs() <= B::tolerance());
        assert_eq!(h.at(0, &rate(0, 1)).unwrap(), basis.function(0).unwrap());
        assert!(h.at(0, &rate(-1, 2)).is_err());
    }

    #[test]
    fn kernel_has_unit_mass() {
        let _g = PrecisionContext::default().enter();
        let p = heat_kernel::<B>(&rate(3, 7)).unwrap();
        let mass = p.integral(&crate::gauss::Region::Full).re;
        assert!((mass - B::of_int(1)).abs() <= B::tolerance());
    }
}
