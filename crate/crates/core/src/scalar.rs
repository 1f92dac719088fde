//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All function-space code is generic over [`Real`]. Three implementations
//! ship: `f32`, `f64` and the MPFR-backed [`BigFloat`], whose precision is
//! taken from the calling thread's [`crate::precision`] scope.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::precision;

/// Real scalar field used for coefficients, abscissae and integrals.
pub trait Real:
    Num + Clone + fmt::Debug + PartialOrd + Neg<Output = Self> + Send + Sync + 'static
{
    fn of_f64(x: f64) -> Self;
    fn of_int(i: i64) -> Self;
    fn of_ratio(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn pi() -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn erfc(&self) -> Self;
    fn gamma(&self) -> Self;
    fn powi(&self, k: i32) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;

    /// Equality tolerance of the active precision, `2^(-bits/2)`.
    fn tolerance() -> Self;
    /// Number of significant decimal digits printed by [`Real::to_decimal`].
    fn decimal_digits() -> usize;
    fn to_decimal(&self) -> String;
    fn parse_decimal(s: &str) -> Option<Self>;

    /// `self += a * b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self = self.clone() + a.clone() * b.clone();
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

pub type Cx<R> = Complex<R>;

pub fn cx<R: Real>(re: R) -> Cx<R> {
    Complex::new(re, R::zero())
}

pub fn cx_f64<R: Real>(re: f64, im: f64) -> Cx<R> {
    Complex::new(R::of_f64(re), R::of_f64(im))
}

/// Imaginary unit raised to `k`.
pub fn i_pow<R: Real>(k: usize) -> Cx<R> {
    match k % 4 {
        0 => Complex::new(R::one(), R::zero()),
        1 => Complex::new(R::zero(), R::one()),
        2 => Complex::new(-R::one(), R::zero()),
        _ => Complex::new(R::zero(), -R::one()),
    }
}

pub fn cabs<R: Real>(z: &Cx<R>) -> R {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

pub fn c_is_finite<R: Real>(z: &Cx<R>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn c_is_real<R: Real>(z: &Cx<R>) -> bool {
    z.im.is_zero()
}

/// `acc += a * b` on complex values, using the real fast path when possible.
pub fn c_mul_add<R: Real>(acc: &mut Cx<R>, a: &Cx<R>, b: &Cx<R>) {
    acc.re.mul_add_assign(&a.re, &b.re);
    if !(a.im.is_zero() || b.im.is_zero()) {
        acc.re.mul_add_assign(&-a.im.clone(), &b.im);
    }
    if !b.im.is_zero() {
        acc.im.mul_add_assign(&a.re, &b.im);
    }
    if !a.im.is_zero() {
        acc.im.mul_add_assign(&a.im, &b.re);
    }
}

pub fn c_scale<R: Real>(z: &Cx<R>, s: &R) -> Cx<R> {
    Complex::new(z.re.clone() * s.clone(), z.im.clone() * s.clone())
}

/// Decimal pair `[re, im]` used by the JSON formats.
pub fn c_to_decimal<R: Real>(z: &Cx<R>) -> [String; 2] {
    [z.re.to_decimal(), z.im.to_decimal()]
}

pub fn c_parse_decimal<R: Real>(pair: &[String; 2]) -> Option<Cx<R>> {
    Some(Complex::new(
        R::parse_decimal(&pair[0])?,
        R::parse_decimal(&pair[1])?,
    ))
}

macro_rules! impl_real_prim {
    ($t:ty, $bits:expr, $erfc:path, $gamma:path) => {
        impl Real for $t {
            fn of_f64(x: f64) -> Self {
                x as $t
            }
            fn of_int(i: i64) -> Self {
                i as $t
            }
            fn of_ratio(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            fn erfc(&self) -> Self {
                $erfc(*self)
            }
            fn gamma(&self) -> Self {
                $gamma(*self)
            }
            fn powi(&self, k: i32) -> Self {
                <$t>::powi(*self, k)
            }
            fn powf(&self, e: &Self) -> Self {
                <$t>::powf(*self, *e)
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn is_finite(&self) -> bool {
                <$t>::is_finite(*self)
            }
            fn tolerance() -> Self {
                (2.0 as $t).powi(-($bits / 2))
            }
            fn decimal_digits() -> usize {
                ($bits as f64 * std::f64::consts::LOG10_2).floor() as usize + 2
            }
            fn to_decimal(&self) -> String {
                format!("{:e}", self)
            }
            fn parse_decimal(s: &str) -> Option<Self> {
                s.trim().parse().ok()
            }
            fn mul_add_assign(&mut self, a: &Self, b: &Self) {
                *self += a * b;
            }
        }
    };
}

impl_real_prim!(f64, 53, libm::erfc, libm::tgamma);
impl_real_prim!(f32, 24, libm::erfcf, libm::tgammaf);

/// Arbitrary-precision real backed by MPFR.
///
/// Every result is rounded to the working precision of the current thread,
/// see [`crate::precision::working_bits`].
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigFloat(Float);

impl BigFloat {
    pub fn new(x: Float) -> Self {
        BigFloat(Float::with_val(precision::working_bits(), x))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    fn wrap<T>(v: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigFloat(Float::with_val(precision::working_bits(), v))
    }

    fn of_bigint(i: &BigInt) -> Self {
        let parsed = Float::parse(i.to_str_radix(10)).expect("integer literal");
        // Integers wider than the working precision round once here.
        BigFloat::wrap(parsed)
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

macro_rules! big_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                BigFloat::wrap(&self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                BigFloat::wrap(&self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                BigFloat::wrap(&self.0 $op &rhs.0)
            }
        }
    };
}

big_binop!(Add, add, +);
big_binop!(Sub, sub, -);
big_binop!(Mul, mul, *);
big_binop!(Div, div, /);
big_binop!(Rem, rem, %);

impl AddAssign<&BigFloat> for BigFloat {
    fn add_assign(&mut self, rhs: &BigFloat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&BigFloat> for BigFloat {
    fn sub_assign(&mut self, rhs: &BigFloat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&BigFloat> for BigFloat {
    fn mul_assign(&mut self, rhs: &BigFloat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat(Float::new(precision::working_bits()))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat::wrap(1)
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = rug::float::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(BigFloat::wrap(parsed))
    }
}

impl Real for BigFloat {
    fn of_f64(x: f64) -> Self {
        BigFloat::wrap(x)
    }
    fn of_int(i: i64) -> Self {
        BigFloat::wrap(i)
    }
    fn of_ratio(r: &BigRational) -> Self {
        BigFloat::of_bigint(r.numer()) / BigFloat::of_bigint(r.denom())
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn pi() -> Self {
        BigFloat::wrap(Constant::Pi)
    }
    fn sqrt(&self) -> Self {
        BigFloat::wrap(self.0.sqrt_ref())
    }
    fn exp(&self) -> Self {
        BigFloat::wrap(self.0.exp_ref())
    }
    fn ln(&self) -> Self {
        BigFloat::wrap(self.0.ln_ref())
    }
    fn erfc(&self) -> Self {
        BigFloat::wrap(self.0.erfc_ref())
    }
    fn gamma(&self) -> Self {
        BigFloat::wrap(self.0.gamma_ref())
    }
    fn powi(&self, k: i32) -> Self {
        BigFloat::wrap((&self.0).pow(k))
    }
    fn powf(&self, e: &Self) -> Self {
        BigFloat::wrap((&self.0).pow(&e.0))
    }
    fn abs(&self) -> Self {
        BigFloat::wrap(self.0.abs_ref())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn tolerance() -> Self {
        let bits = precision::nominal_bits() as i32;
        BigFloat::wrap(Float::with_val(2, 1) >> (bits / 2))
    }
    fn decimal_digits() -> usize {
        (precision::nominal_bits() as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
    fn to_decimal(&self) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        positional(&self.0.to_string_radix(10, Some(Self::decimal_digits())))
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        Float::parse(s.trim()).ok().map(BigFloat::wrap)
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.0 += &a.0 * &b.0;
    }
    fn max_of(a: Self, b: Self) -> Self {
        match a.partial_cmp(&b) {
            Some(Ordering::Less) => b,
            _ => a,
        }
    }
}

/// Rewrites `d.ddd…e±k` without the exponent when `-24 ≤ k ≤ 24`, keeping
/// every printed digit.
fn positional(s: &str) -> String {
    let Some(epos) = s.find(['e', 'E']) else {
        return s.to_string();
    };
    let Ok(exp) = s[epos + 1..].parse::<i32>() else {
        return s.to_string();
    };
    if exp.abs() > 24 {
        return s.to_string();
    }
    let (sign, mantissa) = match s[..epos].strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", &s[..epos]),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let point = int_part.len() as i32 + exp;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
    };
    format!("{sign}{body}")
}

/// Exact rational parsed from a decimal literal such as `"-0.125"` or `"3/4"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::Pow::pow(ten, scale as u32);
    } else {
        value /= num_traits::Pow::pow(ten, (-scale) as u32);
    }
    Some(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionContext;
    use num_traits::One;

    #[test]
    fn bigfloat_follows_thread_precision() {
        let _g = PrecisionContext::new(128).unwrap().enter();
        let x = BigFloat::of_int(2).sqrt();
        assert_eq!(x.precision(), 128);
        {
            let _inner = PrecisionContext::new(512).unwrap().enter();
            assert_eq!(BigFloat::one().precision(), 512);
        }
        assert_eq!(BigFloat::one().precision(), 128);
    }

    #[test]
    fn special_functions_agree_with_f64() {
        let _g = PrecisionContext::default().enter();
        let x = BigFloat::of_f64(0.75);
        assert!((x.erfc().to_f64() - libm::erfc(0.75)).abs() < 1e-15);
        assert!((x.gamma().to_f64() - libm::tgamma(0.75)).abs() < 1e-14);
        let half = BigFloat::of_f64(0.5);
        let root_pi = BigFloat::pi().sqrt();
        assert!((half.gamma() - root_pi).abs() < BigFloat::tolerance());
    }

    #[test]
    fn tolerance_is_half_the_bits() {
        let _g = PrecisionContext::new(200).unwrap().enter();
        assert_eq!(BigFloat::tolerance().to_f64(), 2f64.powi(-100));
        assert_eq!(f64::tolerance(), 2f64.powi(-26));
    }

    #[test]
    fn decimals_are_positional() {
        assert_eq!(positional("6.25e-1"), "0.625");
        assert_eq!(positional("-1.5e2"), "-150");
        assert_eq!(positional("1.25e1"), "12.5");
        assert_eq!(positional("3.0e-3"), "0.0030");
        assert_eq!(positional("2.0e40"), "2.0e40");
        let _g = PrecisionContext::default().enter();
        let x = BigFloat::of_f64(0.1);
        assert_eq!(BigFloat::parse_decimal(&x.to_decimal()).unwrap().to_f64(), 0.1);
    }

    #[test]
    fn rational_parsing() {
        let r = parse_rational("-0.125").unwrap();
        assert_eq!(r, BigRational::new((-1).into(), 8.into()));
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("2.5e1").unwrap(), BigRational::from_integer(25.into()));
        assert_eq!(parse_rational("1e-2").unwrap(), BigRational::new(1.into(), 100.into()));
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn ratio_conversion_is_exact_for_dyadics() {
        let _g = PrecisionContext::default().enter();
        let r = BigRational::new(3.into(), 8.into());
        assert_eq!(BigFloat::of_ratio(&r).to_f64(), 0.375);
    }

    #[test]
    fn decimal_round_trip() {
        let _g = PrecisionContext::default().enter();
        let x = BigFloat::pi().sqrt();
        let y = BigFloat::parse_decimal(&x.to_decimal()).unwrap();
        assert!((x - y).abs() < BigFloat::tolerance());
    }

    #[test]
    fn complex_mul_add_matches_full_product() {
        let a: Cx<f64> = Complex::new(1.5, -2.0);
        let b: Cx<f64> = Complex::new(0.25, 3.0);
        let mut acc = Complex::new(1.0, 1.0);
        c_mul_add(&mut acc, &a, &b);
        let expect = Complex::new(1.0, 1.0) + a * b;
        assert!((acc - expect).norm() < 1e-15);
    }
}
