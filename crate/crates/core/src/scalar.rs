//! Scalar abstractions.
//!
//! Two traits carry the numeric genericity of the crate:
//!
//! - [`Real`]: a floating-point precision (`f32`, `f64`, or the double-double
//!   [`TwoFloat`]) used by quadrature, finite differences and Gamma values.
//! - [`Scalar`]: a coefficient field for polynomials, operators and series
//!   terms. Besides the real and complex floating types it covers exact
//!   rationals, so operator application on series can be checked with
//!   structural equality.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Float, FloatConst, Num, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Floating-point precision usable by the numeric modules.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;

    /// Complex exponential. Overridden where the underlying `Float::exp`
    /// is less accurate than the type's working precision.
    fn exp_c(z: Complex<Self>) -> Complex<Self> {
        z.exp()
    }

    /// Division at the type's working precision.
    fn div_r(self, rhs: Self) -> Self {
        self / rhs
    }

    /// `1/z` at the type's working precision.
    fn inv_c(z: Complex<Self>) -> Complex<Self> {
        let d = z.norm_sqr();
        Complex::new(z.re.div_r(d), (-z.im).div_r(d))
    }
}

impl Real for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for TwoFloat {
    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }
    fn to_f64(self) -> f64 {
        f64::from(self)
    }
    fn exp_c(z: Complex<Self>) -> Complex<Self> {
        let modulus = dd_exp(z.re);
        if z.im.is_zero() {
            return Complex::new(modulus, TwoFloat::from(0.0));
        }
        Complex::new(modulus * z.im.cos(), modulus * z.im.sin())
    }
    // `TwoFloat / TwoFloat` is only double-precision accurate; long division
    // with f64 partial quotients is not
    fn div_r(self, rhs: Self) -> Self {
        let q1 = self.hi() / rhs.hi();
        let r = self - rhs * q1;
        let q2 = r.hi() / rhs.hi();
        let r = r - rhs * q2;
        let q3 = r.hi() / rhs.hi();
        TwoFloat::new_add(q1, q2) + q3
    }
}

/// Double-double exponential accurate to ~1e-30 relative.
///
/// Argument reduction by `k ln 2`, a further scaling by 2^-10, a Taylor sum
/// and ten squarings.
pub fn dd_exp(x: TwoFloat) -> TwoFloat {
    if x.hi() < -745.0 {
        return TwoFloat::from(0.0);
    }
    if x.hi() > 709.0 {
        return TwoFloat::from(f64::INFINITY);
    }
    let k = (x.hi() / std::f64::consts::LN_2).round();
    let r = (x - TwoFloat::LN_2() * k) / 1024.0;
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    for i in 1..=12 {
        term = term * r / (i as f64);
        sum += term;
    }
    for _ in 0..10 {
        sum = sum * sum;
    }
    // split the power of two so that neither factor overflows
    let k = k as i32;
    let half = k / 2;
    sum * 2f64.powi(half) * 2f64.powi(k - half)
}

/// Coefficient field for polynomials, operators and series.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn to_c64(&self) -> Complex64;

    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool {
        false
    }

    /// Text form used by operator rendering.
    fn render(&self) -> String {
        render_c64(self.to_c64())
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

macro_rules! real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_rational(r: &Rational) -> Self {
                <$t as Real>::from_f64(rational_to_f64(r))
            }
            fn to_c64(&self) -> Complex64 {
                Complex64::new(Real::to_f64(*self), 0.0)
            }
        }
    };
}

real_scalar!(f32);
real_scalar!(f64);
real_scalar!(TwoFloat);

impl<F: Real> Scalar for Complex<F> {
    fn from_rational(r: &Rational) -> Self {
        Complex::new(F::from_f64(rational_to_f64(r)), F::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn is_exact() -> bool {
        true
    }
    fn render(&self) -> String {
        render_rational(self)
    }
}

impl Scalar for Complex<Rational> {
    fn from_rational(r: &Rational) -> Self {
        Complex::new(r.clone(), Rational::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn is_exact() -> bool {
        true
    }
    fn render(&self) -> String {
        if self.im.is_zero() {
            render_rational(&self.re)
        } else {
            format!("({}+{}i)", render_rational(&self.re), render_rational(&self.im))
        }
    }
}

/// `p/q`, or `p` when the denominator is one.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

fn render_real(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Real values print without an imaginary part; integers print without a
/// decimal point; anything else prints as `(re+imi)`.
pub fn render_c64(z: Complex64) -> String {
    if z.im == 0.0 {
        render_real(z.re)
    } else if z.re == 0.0 {
        format!("({}i)", render_real(z.im))
    } else if z.im < 0.0 {
        format!("({}-{}i)", render_real(z.re), render_real(-z.im))
    } else {
        format!("({}+{}i)", render_real(z.re), render_real(z.im))
    }
}

/// Converts an `f64` complex number into `Complex<F>`.
pub fn lift<F: Real>(z: Complex64) -> Complex<F> {
    Complex::new(F::from_f64(z.re), F::from_f64(z.im))
}

/// Converts `Complex<F>` to `f64` components.
pub fn lower<F: Real>(z: Complex<F>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

/// Exact rational from a small integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
